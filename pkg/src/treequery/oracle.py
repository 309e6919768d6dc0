"""Naive reference implementations used by the test suite.

Everything here enumerates exhaustively and filters; there is no pruning
beyond kind checks, so results are trustworthy on small inputs and
independent of the engine's evaluation strategy.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping

from .graph import DataGraph, NodeId
from .patterns import TreePattern


def _tree_edges(p: TreePattern) -> list[tuple[int, int]]:
    return [(p.parent[v], v) for v in range(1, p.n)]


def brute_force_matchings(g: DataGraph, p: TreePattern,
                          alpha: Mapping[int, NodeId]) -> Iterator[tuple[NodeId, ...]]:
    """All homomorphisms of p's tree into g consistent with alpha, as node tuples."""
    edges = _tree_edges(p)
    for m in itertools.product(g.nodes, repeat=p.n):
        if any((m[a], m[b]) not in g.edges for a, b in edges):
            continue
        if any(m[s] != v for s, v in alpha.items()):
            continue
        yield m


def brute_force_frequency(g: DataGraph, p: TreePattern, alpha: Mapping[int, NodeId]) -> int:
    """Count of distinct projections of matchings onto the distinguished nodes."""
    delta = p.delta_sorted()
    seen = {tuple(m[d] for d in delta) for m in brute_force_matchings(g, p, alpha)}
    return len(seen)


def brute_force_frequency_table(g: DataGraph, p: TreePattern) -> dict[tuple[str, ...], int]:
    """Frequency of every instantiation in one exhaustive pass, keyed by constants."""
    delta = p.delta_sorted()
    sigma = p.sigma_sorted()
    groups: dict[tuple[NodeId, ...], set[tuple[NodeId, ...]]] = {}
    for m in brute_force_matchings(g, p, {}):
        key = tuple(m[s] for s in sigma)
        groups.setdefault(key, set()).add(tuple(m[d] for d in delta))
    return {
        tuple(g.constants[v] for v in key): len(projs)
        for key, projs in groups.items()
    }


def brute_force_answer_set(g: DataGraph, head: tuple[int, ...], p: TreePattern,
                           alpha: Mapping[int, NodeId]) -> set[tuple[NodeId, ...]]:
    return {tuple(m[h] for h in head) for m in brute_force_matchings(g, p, alpha)}


def _legal(pl: TreePattern, p: TreePattern, x1: int, x2: int) -> bool:
    k1, k2 = pl.kind(x1), p.kind(x2)
    if k1 == "d":
        return k2 in ("d", "p")
    if k1 == "p":
        return k2 == "p"
    return True


def brute_force_containment_mappings(pl: TreePattern, p: TreePattern) -> list[dict[int, int]]:
    """All kind-legal tree homomorphisms from pl into p."""
    edges = _tree_edges(pl)
    targets = [
        [y for y in range(p.n) if _legal(pl, p, x, y)]
        for x in range(pl.n)
    ]
    out = []
    for m in itertools.product(*targets):
        if all((m[a], m[b]) in _pattern_edge_set(p) for a, b in edges):
            out.append(dict(enumerate(m)))
    return out


_EDGE_CACHE: dict[tuple[int, ...], frozenset[tuple[int, int]]] = {}


def _pattern_edge_set(p: TreePattern) -> frozenset[tuple[int, int]]:
    es = _EDGE_CACHE.get(p.levels)
    if es is None:
        es = frozenset(_tree_edges(p))
        _EDGE_CACHE[p.levels] = es
    return es


def brute_force_equivalent(p1: TreePattern, p2: TreePattern) -> bool:
    """Bijective delta/rho correspondences witnessed by containment mappings both ways."""
    if len(p1.delta) != len(p2.delta) or len(p1.sigma) != len(p2.sigma):
        return False
    cms12 = brute_force_containment_mappings(p1, p2)
    cms21 = brute_force_containment_mappings(p2, p1)
    delta1, sigma1 = p1.delta_sorted(), p1.sigma_sorted()
    delta2, sigma2 = p2.delta_sorted(), p2.sigma_sorted()
    backward = {
        (tuple(f2[d] for d in delta2), tuple(f2[s] for s in sigma2))
        for f2 in cms21
        if set(f2[d] for d in delta2) <= p1.delta and set(f2[s] for s in sigma2) <= p1.sigma
    }
    for f1 in cms12:
        delta_img = [f1[d] for d in delta1]
        sigma_img = [f1[s] for s in sigma1]
        if not (set(delta_img) <= p2.delta and len(set(delta_img)) == len(delta1)):
            continue
        if not (set(sigma_img) <= p2.sigma and len(set(sigma_img)) == len(sigma1)):
            continue
        inv_delta = {img: d for d, img in zip(delta1, delta_img)}
        inv_sigma = {img: s for s, img in zip(sigma1, sigma_img)}
        want = (
            tuple(inv_delta[d] for d in delta2),
            tuple(inv_sigma[s] for s in sigma2),
        )
        if want in backward:
            return True
    return False
