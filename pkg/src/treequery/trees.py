"""Rooted unordered trees in canonical level-sequence form.

A tree on n nodes is written as its level sequence: the depth of each node
in preorder, root depth 0.  The canonical form of an unordered tree is the
lexicographically *maximal* level sequence over all orderings of children.
``enumerate_trees`` generates every canonical tree of 1..max_nodes nodes
exactly once, by node count, via the constant-amortized successor rule
(start from the path, repeatedly copy the tail segment rooted at the
parent of the last deep node).
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property


class InvalidLevelSequence(ValueError):
    pass


def validate_levels(levels: tuple[int, ...]) -> None:
    if not levels:
        raise InvalidLevelSequence("empty sequence")
    if levels[0] != 0:
        raise InvalidLevelSequence(f"root depth must be 0, got {levels[0]}")
    for i in range(1, len(levels)):
        if not 1 <= levels[i] <= levels[i - 1] + 1:
            raise InvalidLevelSequence(
                f"depth {levels[i]} at position {i} not in [1, {levels[i - 1] + 1}]"
            )


def parents_of_levels(levels: tuple[int, ...]) -> tuple[int, ...]:
    """Parent preorder index per node (-1 for the root)."""
    parent = [-1] * len(levels)
    stack: list[int] = []
    for i, d in enumerate(levels):
        del stack[d:]
        if stack:
            parent[i] = stack[-1]
        stack.append(i)
    return tuple(parent)


@dataclass(frozen=True)
class CanonicalTree:
    """A rooted unordered tree stored as its canonical level sequence."""

    levels: tuple[int, ...]

    def __post_init__(self):
        validate_levels(self.levels)
        if self.levels != canonize_levels(self.levels):
            raise InvalidLevelSequence(f"not canonical: {self.levels}")

    @property
    def n(self) -> int:
        return len(self.levels)

    @cached_property
    def parent(self) -> tuple[int, ...]:
        return parents_of_levels(self.levels)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in self.levels]
        for i, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(i)
        return tuple(tuple(k) for k in kids)

    @property
    def height(self) -> int:
        return max(self.levels)

    def subtree_size(self, v: int) -> int:
        end = v + 1
        while end < self.n and self.levels[end] > self.levels[v]:
            end += 1
        return end - v

    def text(self) -> str:
        return ",".join(str(d) for d in self.levels)

    @staticmethod
    def from_text(text: str) -> "CanonicalTree":
        return CanonicalTree(tuple(int(t) for t in text.split(",")))


def _subtree_key(levels: tuple[int, ...], children: tuple[tuple[int, ...], ...], v: int) -> tuple:
    base = levels[v]
    kid_keys = sorted((_subtree_key(levels, children, c) for c in children[v]), reverse=True)
    out: list[int] = [0]
    for k in kid_keys:
        out.extend(d + 1 for d in k)
    return tuple(out)


def canonize_levels(levels: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical (lexicographically maximal) level sequence of the same tree."""
    validate_levels(tuple(levels))
    levels = tuple(levels)
    parent = parents_of_levels(levels)
    children: list[list[int]] = [[] for _ in levels]
    for i, p in enumerate(parent):
        if p >= 0:
            children[p].append(i)
    return _subtree_key(levels, tuple(tuple(c) for c in children), 0)


def is_canonical(levels: tuple[int, ...]) -> bool:
    levels = tuple(levels)
    return levels == canonize_levels(levels)


def level_sequences(n: int) -> Iterator[tuple[int, ...]]:
    """All canonical level sequences on n nodes, in decreasing lexicographic order."""
    if n < 1:
        return
    seq = list(range(n))
    while True:
        yield tuple(seq)
        p = max((i for i in range(n) if seq[i] >= 2), default=-1)
        if p < 0:
            return
        q = max(i for i in range(p) if seq[i] == seq[p] - 1)
        for i in range(p, n):
            seq[i] = seq[i - (p - q)]


def enumerate_trees(max_nodes: int) -> Iterator[CanonicalTree]:
    """Every canonical rooted unordered tree with 1..max_nodes nodes, once each."""
    if max_nodes < 1:
        raise ValueError("max_nodes must be >= 1")
    for n in range(1, max_nodes + 1):
        for levels in level_sequences(n):
            yield CanonicalTree(levels)
