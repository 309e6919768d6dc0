import random

import pytest
from hypothesis import strategies as st

from treequery.engine import Relation, frequency_table, mine_patterns
from treequery.graph import DataGraph, load_graph
from treequery.patterns import TreePattern
from treequery.syntax import parse_query
from treequery.trees import parents_of_levels

G7_TEXT = "0 1\n0 2\n0 3\n1 4\n2 4\n2 5\n3 6\n"

# lhs of the fixed-lhs rule-mining fixture: head x1,x3,x4 over a 4-node star
# whose second child is a parameter.
LHS_TEXT = "x1,x3,x4\n(x1:d (x2:p) (x3:d) (x4:d))"


@pytest.fixture(scope="session")
def g7() -> DataGraph:
    return load_graph(G7_TEXT)


@pytest.fixture(scope="session")
def g7_mined(g7):
    return mine_patterns(g7, 3, 3)


@pytest.fixture(scope="session")
def g7_store(g7_mined):
    return g7_mined[0]


@pytest.fixture(scope="session")
def g7_report(g7_mined):
    return g7_mined[1]


def build_rules_store(g7: DataGraph):
    """The rule-mining fixture: the 3-node store plus the lhs body's table."""
    store, _ = mine_patterns(g7, 3, 3)
    parsed = parse_query(LHS_TEXT)
    body = parsed.query.body
    candidates = Relation(body.sigma_sorted(),
                          frozenset((v,) for v in g7.nodes))
    table = frequency_table(g7, body, candidates, 3)
    store.add(body, table)
    return store, parsed


@pytest.fixture(scope="session")
def g7_rules_setup(g7):
    return build_rules_store(g7)


def levels_from_parents(parent: list[int]) -> tuple[int, ...]:
    """Preorder level sequence of an arbitrary parent array (parent[i] < i)."""
    n = len(parent) + 1
    children: list[list[int]] = [[] for _ in range(n)]
    for i, p in enumerate(parent, start=1):
        children[p].append(i)
    levels: list[int] = []
    stack = [(0, 0)]
    while stack:
        v, d = stack.pop()
        levels.append(d)
        for c in reversed(children[v]):
            stack.append((c, d + 1))
    return tuple(levels)


@st.composite
def raw_level_sequences(draw, min_n: int = 1, max_n: int = 5) -> tuple[int, ...]:
    n = draw(st.integers(min_n, max_n))
    parent = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    return levels_from_parents(parent)


@st.composite
def tree_patterns(draw, min_n: int = 1, max_n: int = 5) -> TreePattern:
    levels = draw(raw_level_sequences(min_n, max_n))
    kinds = [draw(st.sampled_from("dep")) for _ in levels]
    return TreePattern(
        levels,
        frozenset(i for i, k in enumerate(kinds) if k == "e"),
        frozenset(i for i, k in enumerate(kinds) if k == "p"),
    )


def random_graph(rng: random.Random, n: int, edge_prob: float) -> DataGraph:
    lines = [
        f"n{u} n{v}"
        for u in range(n)
        for v in range(n)
        if rng.random() < edge_prob
    ]
    return load_graph("\n".join(lines))


def all_parent_arrays(n: int):
    """Every rooted tree on n labeled-by-position nodes (parent[i] < i)."""
    import itertools

    if n == 1:
        yield []
        return
    for parent in itertools.product(*(range(i) for i in range(1, n))):
        yield list(parent)
