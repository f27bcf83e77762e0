"""Shared fixtures and helpers for the test suite.

Row indices in tests are 0-based (library convention); comments note the
1-based form where it helps to cross-read the CLI output.
"""

from __future__ import annotations

import pytest

from boxprune.core import RectList
from boxprune.search import DELETE, NodeStore


# Four intervals whose optimum at two discards is only reachable when
# shift moves leave the column structures untouched; the regression
# anchor for that decision.
SHIFT_FIXTURE_ROWS = [(5, 10), (5, 20), (0, 6), (0, 30)]

# Three intervals with distinct endpoints, the simplest end-to-end case.
PLAIN_ROWS = [(0, 10), (2, 8), (4, 12)]

# Concentric squares [-k, k]^2 for k = 1..5.
NESTED_ROWS = [(-k, k, -k, k) for k in range(1, 6)]


@pytest.fixture
def shift_fixture() -> RectList:
    return RectList(SHIFT_FIXTURE_ROWS)


@pytest.fixture
def plain() -> RectList:
    return RectList(PLAIN_ROWS)


@pytest.fixture
def nested() -> RectList:
    return RectList(NESTED_ROWS)


def leaf_word(store: NodeStore, handle: int) -> str:
    moves = []
    h = handle
    while h is not None:
        node = store.nodes[h]
        if node.move:
            moves.append(node.move)
        h = node.parent
    return "".join(reversed(moves))


def leaf_set(store: NodeStore, handle: int) -> frozenset[int]:
    out = set()
    h = handle
    while h is not None:
        node = store.nodes[h]
        if node.move == DELETE:
            out.add(node.deleted)
        h = node.parent
    return frozenset(out)
