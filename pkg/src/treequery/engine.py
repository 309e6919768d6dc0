"""Frequency evaluation and the levelwise pattern miner.

Evaluation is an embedded relational pipeline: homomorphisms are built
bottom-up along the tree against the graph's adjacency lists, existential
nodes are projected away immediately, and duplicates collapse at every
step (the ``select distinct`` semantics).  Candidacy tables come from the
natural join of canonized parent frequency tables.

The search processes, per tree, all (pi, sigma) pairs in levels by
|pi| + |sigma|.  A pair is dismissed before evaluation when it has a
redundant existential chain or is not the canonical member of its
isomorphism class; it is pruned when an immediate generalization in the
same apriori dimension (sigma for mixed patterns, pi for parameterless
ones) is not known frequent.  Empty parent tables flow through the
candidacy join, so such candidates evaluate to empty without touching
the graph.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

from .graph import DataGraph, NodeId
from .patterns import TreePattern, canonize, has_redundancy, is_canonical_pattern, parents
from .store import FrequencyTable, PatternStore, fingerprint_graph
from .trees import enumerate_trees


class MissingParentTableError(RuntimeError):
    """A parent frequency table was required but never computed (level order bug)."""


@dataclass(frozen=True)
class Relation:
    """Named columns (pattern node ids) over distinct NodeId rows."""

    columns: tuple[int, ...]
    rows: frozenset[tuple[NodeId, ...]]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row arity does not match columns")

    @staticmethod
    def unit() -> "Relation":
        return Relation((), frozenset({()}))

    @staticmethod
    def empty(columns: tuple[int, ...]) -> "Relation":
        return Relation(columns, frozenset())

    def project(self, columns: tuple[int, ...]) -> "Relation":
        idx = [self.columns.index(c) for c in columns]
        return Relation(columns, frozenset(tuple(r[i] for i in idx) for r in self.rows))


def natural_join(r1: Relation, r2: Relation) -> Relation:
    shared = [c for c in r1.columns if c in r2.columns]
    i1 = [r1.columns.index(c) for c in shared]
    i2 = [r2.columns.index(c) for c in shared]
    extra = [j for j, c in enumerate(r2.columns) if c not in r1.columns]
    by_key: dict[tuple[NodeId, ...], list[tuple[NodeId, ...]]] = {}
    for row in r2.rows:
        by_key.setdefault(tuple(row[i] for i in i2), []).append(row)
    out = set()
    for row in r1.rows:
        for other in by_key.get(tuple(row[i] for i in i1), ()):
            out.add(row + tuple(other[j] for j in extra))
    return Relation(r1.columns + tuple(r2.columns[j] for j in extra), frozenset(out))


def evaluate_pattern(g: DataGraph, p: TreePattern,
                     allowed: Mapping[int, frozenset[NodeId]] | None = None) -> Relation:
    """Distinct projections onto delta and sigma of all matchings of p in g.

    ``allowed`` optionally restricts the values of individual nodes (used
    to push candidate parameter values into the evaluation).
    """
    kept = sorted(p.delta | p.sigma)
    kept_set = set(kept)
    universe = frozenset(g.nodes)

    def values_for(v: int) -> Iterable[NodeId]:
        if allowed and v in allowed:
            return allowed[v]
        return g.nodes

    def eval_node(v: int, candidates: Iterable[NodeId]) -> dict[NodeId, set[tuple[NodeId, ...]]]:
        restrict = allowed.get(v) if allowed else None
        result: dict[NodeId, set[tuple[NodeId, ...]]] = {}
        kids = p.children[v]
        if not kids:
            for u in candidates:
                if restrict is None or u in restrict:
                    result[u] = {()}
            return result
        child_rel = [eval_node(c, universe) for c in kids]
        child_kept = [c in kept_set for c in kids]
        for u in candidates:
            if restrict is not None and u not in restrict:
                continue
            pieces: list[set[tuple[NodeId, ...]]] = []
            ok = True
            for c, rel, keep in zip(kids, child_rel, child_kept):
                piece: set[tuple[NodeId, ...]] = set()
                for w in g.out_adj[u]:
                    tuples = rel.get(w)
                    if tuples is None:
                        continue
                    if keep:
                        piece.update((w,) + t for t in tuples)
                    else:
                        piece.update(tuples)
                if not piece:
                    ok = False
                    break
                pieces.append(piece)
            if not ok:
                continue
            combined = {()}
            for piece in pieces:
                combined = {a + b for a in combined for b in piece}
            result[u] = combined
        return result

    root_rel = eval_node(0, values_for(0))
    rows: set[tuple[NodeId, ...]] = set()
    if 0 in kept_set:
        for u, tuples in root_rel.items():
            rows.update((u,) + t for t in tuples)
    else:
        for tuples in root_rel.values():
            rows.update(tuples)
    return Relation(tuple(kept), frozenset(rows))


def candidacy_table(p: TreePattern, store: "PatternStore | Mapping[str, FrequencyTable]",
                    g: DataGraph, *, missing_parent_is_empty: bool = False) -> Relation:
    """Candidate parameter assignments: the join of canonized parent tables.

    Base case: a lone parameter with no existential nodes admits every
    node of the graph.
    """
    sigma = p.sigma_sorted()
    tables = store.tables if isinstance(store, PatternStore) else store
    if not p.pi and len(p.sigma) == 1:
        return Relation(sigma, frozenset((v,) for v in g.nodes))
    rel = Relation.unit()
    for parent, _removed in parents(p):
        canonical, iso = canonize(parent)
        table = tables.get(_key_of(canonical))
        if table is None:
            if missing_parent_is_empty:
                return Relation.empty(sigma)
            raise MissingParentTableError(
                f"no table for canonized parent of ({sorted(p.pi)}, {sorted(p.sigma)})"
            )
        renamed_cols = tuple(iso[c] for c in table.sigma_columns)
        rows = set()
        for key in table.entries:
            row = tuple(g.index.get(c) for c in key)
            if None not in row:
                rows.add(row)
        rel = natural_join(rel, Relation(renamed_cols, frozenset(rows)))
        if not rel.rows:
            return Relation.empty(sigma)
    return rel.project(sigma)


_KEY_CACHE: dict[TreePattern, str] = {}


def _key_of(canonical: TreePattern) -> str:
    key = _KEY_CACHE.get(canonical)
    if key is None:
        from .patterns import refined_level_sequence

        key = refined_level_sequence(canonical)
        _KEY_CACHE[canonical] = key
    return key


def frequency_table(g: DataGraph, p: TreePattern, candidates: Relation,
                    minsup: int) -> FrequencyTable:
    """Group the evaluation by sigma, count distinct delta projections, threshold."""
    sigma = p.sigma_sorted()
    if candidates.columns != tuple(sigma):
        candidates = candidates.project(tuple(sigma))
    key = _key_of(p)
    if sigma and not candidates.rows:
        return FrequencyTable(key, sigma, {})
    allowed = None
    if sigma:
        allowed = {
            c: frozenset(row[i] for row in candidates.rows)
            for i, c in enumerate(sigma)
        }
    relation = evaluate_pattern(g, p, allowed)
    sig_idx = [relation.columns.index(c) for c in sigma]
    counts: dict[tuple[NodeId, ...], int] = {}
    for row in relation.rows:
        k = tuple(row[i] for i in sig_idx)
        counts[k] = counts.get(k, 0) + 1
    candidate_rows = candidates.rows if sigma else frozenset({()})
    entries = {
        tuple(g.constants[v] for v in k): c
        for k, c in counts.items()
        if c >= minsup and k in candidate_rows
    }
    return FrequencyTable(key, sigma, entries)


@dataclass(frozen=True)
class PatternOutcome:
    pattern: TreePattern
    status: str  # evaluated | pruned-empty-parent | dismissed-redundant | dismissed-noncanonical
    n_entries: int | None = None
    detail: str = ""


@dataclass
class MiningReport:
    outcomes: list[PatternOutcome] = field(default_factory=list)

    def add(self, outcome: PatternOutcome) -> None:
        self.outcomes.append(outcome)

    def by_pattern(self) -> dict[TreePattern, PatternOutcome]:
        return {o.pattern: o for o in self.outcomes}

    def for_tree(self, levels: tuple[int, ...]) -> list[PatternOutcome]:
        return [o for o in self.outcomes if o.pattern.levels == levels]

    def evaluated_for_tree(self, levels: tuple[int, ...]) -> dict[TreePattern, int]:
        return {
            o.pattern: o.n_entries
            for o in self.for_tree(levels)
            if o.status == "evaluated"
        }

    def summary(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for o in self.outcomes:
            out[o.status] = out.get(o.status, 0) + 1
        return out


def _level_pairs(n: int, level: int) -> Iterable[tuple[frozenset[int], frozenset[int]]]:
    ids = range(n)
    for k_pi in range(level + 1):
        for pi in itertools.combinations(ids, k_pi):
            rest = [v for v in ids if v not in pi]
            for sigma in itertools.combinations(rest, level - k_pi):
                yield frozenset(pi), frozenset(sigma)


def mine_patterns(g: DataGraph, minsup: int, max_nodes: int,
                  stop: Callable[[], bool] | None = None) -> tuple[PatternStore, MiningReport]:
    """Levelwise double-apriori search with equivalence dismissal.

    The store keeps every nonempty frequency table, keyed by the pattern's
    canonical refined level sequence; the report records one outcome per
    generated (pi, sigma) pair.
    """
    if minsup < 1:
        raise ValueError("minsup must be >= 1")
    if max_nodes < 1:
        raise ValueError("max_nodes must be >= 1")
    store = PatternStore(fingerprint_graph(g), minsup, max_nodes)
    report = MiningReport()
    for tree in enumerate_trees(max_nodes):
        if stop is not None and stop():
            break
        tables: dict[str, FrequencyTable] = {}
        frequent: set[str] = set()
        for level in range(tree.n + 1):
            if stop is not None and stop():
                return store, report
            for pi, sigma in sorted(_level_pairs(tree.n, level),
                                    key=lambda t: (sorted(t[0]), sorted(t[1]))):
                p = TreePattern(tree.levels, pi, sigma)
                if has_redundancy(p):
                    report.add(PatternOutcome(p, "dismissed-redundant"))
                    continue
                if not is_canonical_pattern(p):
                    report.add(PatternOutcome(p, "dismissed-noncanonical"))
                    continue
                barrier = _apriori_barrier(p, frequent)
                if barrier is not None:
                    report.add(PatternOutcome(p, "pruned-empty-parent", detail=barrier))
                    continue
                candidates = candidacy_table(p, tables, g, missing_parent_is_empty=True) \
                    if level > 0 else Relation.unit()
                table = frequency_table(g, p, candidates, minsup)
                key = _key_of(p)
                tables[key] = table
                if table.entries:
                    frequent.add(key)
                    store.add(p, table)
                report.add(PatternOutcome(p, "evaluated", n_entries=len(table.entries)))
    return store, report


def _apriori_barrier(p: TreePattern, frequent: set[str]) -> str | None:
    """The apriori check along one dimension: sigma for mixed patterns, pi otherwise.

    Returns a description of the first infrequent generalization, or None
    when the pattern is a candidate.  Generalizations are canonized before
    the lookup so equivalence dismissals do not break the chain.
    """
    if p.sigma:
        removals = [(TreePattern(p.levels, p.pi, p.sigma - {z}), z) for z in sorted(p.sigma)]
    else:
        removals = [(TreePattern(p.levels, p.pi - {y}, p.sigma), y) for y in sorted(p.pi)]
    for parent, removed in removals:
        canonical, _ = canonize(parent)
        if _key_of(canonical) not in frequent:
            return f"generalization without node {removed} is not frequent"
    return None
