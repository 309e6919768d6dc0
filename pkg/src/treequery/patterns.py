"""Parameterized tree patterns and queries.

A pattern is a rooted tree whose nodes are distinguished (counted in the
answer set), existential (matched but projected away) or parameters
(bound to a constant per instantiation).  Node ids are preorder positions
in the pattern's own level sequence; the underlying tree need not be in
canonical form (``canonize`` reorders it).

The canonical ordering of a pattern first maximizes old-fashioned level
sequence of the underlying tree, then breaks ties by node kinds with
rank d < e < p, maximal wins.  Rendered as e.g. ``0p1e2p2d1d2p2d``, the
resulting key is equal for two patterns exactly when they are isomorphic.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

from .trees import CanonicalTree, canonize_levels, parents_of_levels, validate_levels

Kind = str  # "d" | "e" | "p"
KIND_RANK = {"d": 0, "e": 1, "p": 2}
RANK_KIND = {r: k for k, r in KIND_RANK.items()}

PatternIso = dict[int, int]


@dataclass(frozen=True)
class TreePattern:
    """(tree, existential set, parameter set); the rest is distinguished."""

    levels: tuple[int, ...]
    pi: frozenset[int]
    sigma: frozenset[int]

    def __post_init__(self):
        validate_levels(self.levels)
        n = len(self.levels)
        ids = range(n)
        if not (self.pi <= frozenset(ids) and self.sigma <= frozenset(ids)):
            raise ValueError("pi/sigma must be subsets of node ids")
        if self.pi & self.sigma:
            raise ValueError(f"pi and sigma overlap: {sorted(self.pi & self.sigma)}")

    @staticmethod
    def on(tree: CanonicalTree, pi: Sequence[int] = (), sigma: Sequence[int] = ()) -> "TreePattern":
        return TreePattern(tree.levels, frozenset(pi), frozenset(sigma))

    @property
    def n(self) -> int:
        return len(self.levels)

    @cached_property
    def delta(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.pi - self.sigma

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

    def kind(self, v: int) -> Kind:
        if v in self.pi:
            return "e"
        if v in self.sigma:
            return "p"
        return "d"

    @cached_property
    def kinds(self) -> tuple[Kind, ...]:
        return tuple(self.kind(v) for v in range(self.n))

    @cached_property
    def tree(self) -> CanonicalTree:
        """The underlying tree; only valid when its level sequence is canonical."""
        return CanonicalTree(self.levels)

    def sigma_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.sigma))

    def delta_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.delta))

    def node_names(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.n))


def _pattern_key(p: TreePattern, v: int) -> tuple[tuple[int, ...], tuple[int, ...], list[int]]:
    """(plain block, kind-rank block, original ids in canonical preorder) for subtree v.

    Children are ordered descending by (plain, kinds): the plain level
    sequence dominates so the canonical ordering of the pattern keeps the
    canonical ordering of the underlying unlabeled tree, and kinds break
    the remaining ties.  Stable sort keeps already-canonical input intact.
    """
    kid = [_pattern_key(p, c) for c in p.children[v]]
    kid.sort(key=lambda t: (t[0], t[1]), reverse=True)
    plain: list[int] = [0]
    kinds: list[int] = [KIND_RANK[p.kind(v)]]
    order: list[int] = [v]
    for kp, kk, ko in kid:
        plain.extend(d + 1 for d in kp)
        kinds.extend(kk)
        order.extend(ko)
    return tuple(plain), tuple(kinds), order


def canonize(p: TreePattern) -> tuple[TreePattern, PatternIso]:
    """Canonical form plus the isomorphism from canonical node ids to p's."""
    plain, kinds, order = _pattern_key(p, 0)
    iso = {new: old for new, old in enumerate(order)}
    canonical = TreePattern(
        plain,
        frozenset(new for new, old in iso.items() if old in p.pi),
        frozenset(new for new, old in iso.items() if old in p.sigma),
    )
    return canonical, iso


def refined_level_sequence(p: TreePattern) -> str:
    """Canonical key: depth+kind per node of the canonical ordering."""
    plain, kinds, _ = _pattern_key(p, 0)
    return "".join(f"{d}{RANK_KIND[r]}" for d, r in zip(plain, kinds))


def is_canonical_pattern(p: TreePattern) -> bool:
    canonical, _ = canonize(p)
    return canonical == p


def has_redundancy(p: TreePattern) -> bool:
    """An existential linear chain whose parent has another subtree at least as deep."""
    heights = _subtree_heights(p)
    for c in range(p.n):
        par = p.parent[c]
        if par < 0:
            continue
        if not _is_existential_chain(p, c):
            continue
        for sib in p.children[par]:
            if sib != c and heights[sib] >= heights[c]:
                return True
    return False


def _subtree_heights(p: TreePattern) -> list[int]:
    h = [0] * p.n
    for v in range(p.n - 1, -1, -1):
        for c in p.children[v]:
            h[v] = max(h[v], h[c] + 1)
    return h


def _is_existential_chain(p: TreePattern, v: int) -> bool:
    while True:
        if v not in p.pi:
            return False
        kids = p.children[v]
        if len(kids) > 1:
            return False
        if not kids:
            return True
        v = kids[0]


def parents(p: TreePattern) -> list[tuple[TreePattern, int]]:
    """One generalization per element of pi and sigma (node moved back to delta)."""
    out: list[tuple[TreePattern, int]] = []
    for y in sorted(p.pi):
        out.append((TreePattern(p.levels, p.pi - {y}, p.sigma), y))
    for z in sorted(p.sigma):
        out.append((TreePattern(p.levels, p.pi, p.sigma - {z}), z))
    return out


def specializes(p1: TreePattern, p2: TreePattern) -> bool:
    if p1.levels != p2.levels:
        raise ValueError("specializes requires the same underlying tree")
    return p1.pi >= p2.pi and p1.sigma >= p2.sigma


@dataclass(frozen=True)
class TreeQuery:
    """(head, body): head lists distinguished or parameter nodes, repeats allowed."""

    head: tuple[int, ...]
    body: TreePattern

    def __post_init__(self):
        for h in self.head:
            if not 0 <= h < self.body.n:
                raise ValueError(f"head entry {h} is not a node of the body")
            if h in self.body.pi:
                raise ValueError(f"head entry {h} is existential")
        missing = self.body.delta - set(self.head)
        if missing:
            raise ValueError(f"distinguished nodes missing from head: {sorted(missing)}")


HeadSource = tuple[str, int]  # ("d", index into pure head) | ("p", parameter node id)


def variable_order(p: TreePattern) -> dict[int, int]:
    """The fixed order on variables: preorder position in the canonical form."""
    _, iso = canonize(p)
    return {old: new for new, old in iso.items()}


def purify(q: TreeQuery) -> tuple[TreeQuery, tuple[HeadSource, ...]]:
    """Drop parameters and repeats from the head; sort by the fixed variable order.

    The returned map gives, per original head position, where the entry
    went: into the pure head (with its index) or a parameter node whose
    instantiated value reproduces it.
    """
    order = variable_order(q.body)
    pure_head = tuple(sorted(q.body.delta, key=lambda v: order[v]))
    pos = {v: i for i, v in enumerate(pure_head)}
    head_map = tuple(
        ("p", h) if h in q.body.sigma else ("d", pos[h]) for h in q.head
    )
    return TreeQuery(pure_head, q.body), head_map


def pattern_automorphisms(p: TreePattern) -> list[PatternIso]:
    """All kind-preserving automorphisms of the pattern (small patterns only)."""
    keys: dict[int, tuple] = {}

    def key_of(v: int) -> tuple:
        if v not in keys:
            plain, kinds, _ = _pattern_key(_subpattern(p, v), 0)
            keys[v] = (plain, kinds)
        return keys[v]

    def isos(v1: int, v2: int) -> Iterator[PatternIso]:
        if p.kind(v1) != p.kind(v2) or key_of(v1) != key_of(v2):
            return
        base = {v1: v2}
        kids1, kids2 = p.children[v1], p.children[v2]

        def assign(i: int, used: set[int], acc: PatternIso) -> Iterator[PatternIso]:
            if i == len(kids1):
                yield acc
                return
            c1 = kids1[i]
            for c2 in kids2:
                if c2 in used or key_of(c1) != key_of(c2):
                    continue
                for sub in isos(c1, c2):
                    yield from assign(i + 1, used | {c2}, {**acc, **sub})

        yield from assign(0, set(), base)

    return list(isos(0, 0))


def _subpattern(p: TreePattern, v: int) -> TreePattern:
    size = 1
    while v + size < p.n and p.levels[v + size] > p.levels[v]:
        size += 1
    ids = range(v, v + size)
    base = p.levels[v]
    return TreePattern(
        tuple(p.levels[i] - base for i in ids),
        frozenset(i - v for i in ids if i in p.pi),
        frozenset(i - v for i in ids if i in p.sigma),
    )
