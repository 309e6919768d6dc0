"""Association rules for a fixed lhs query over the pattern store.

For every stored pattern at least as high as the lhs body, all containment
mappings from the lhs are enumerated with the Map/Init/Step machinery,
filtered for admissibility (the mapped head must cover the pattern's
distinguished nodes), deduplicated, and joined against the lhs frequency
table to produce instantiated rules with exact confidences.

Deduplication has two strengths.  The signature filter drops a mapping
whose preimage-labeled canonical form was already seen; it is sound (equal
signatures always witness equivalence) and cheap, and it preserves the
rule sets a duplicate-tolerant run is expected to produce.  With
``strict_equivalence`` the miner additionally searches the lhs automorphism
group so that *every* pair of equivalent mappings collapses.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from .patterns import (
    TreePattern,
    TreeQuery,
    pattern_automorphisms,
    purify,
)
from .store import FrequencyTable, PatternStore

ContainmentMapping = dict[int, int]


class LhsNotMinedError(LookupError):
    """The lhs body has no frequency table in the store; mine it first."""


class RuleConsistencyError(RuntimeError):
    """A joined rhs row has no lhs counterpart; store and lhs disagree."""


def _legal(pl: TreePattern, p: TreePattern, x1: int, x2: int) -> bool:
    k1, k2 = pl.kinds[x1], p.kinds[x2]
    if k1 == "d":
        return k2 != "e"
    if k1 == "p":
        return k2 == "p"
    return True


class MatchMatrix:
    """Map[x1, x2]: the subtree of x1 maps into the subtree of x2 with x1 -> x2."""

    def __init__(self, pl: TreePattern, p: TreePattern):
        self.pl = pl
        self.p = p
        self._map: dict[tuple[int, int], bool] = {}

    def get(self, x1: int, x2: int) -> bool:
        return self._map.get((x1, x2), False)

    def _fill(self, x1: int, x2: int) -> bool:
        if not _legal(self.pl, self.p, x1, x2):
            self._map[(x1, x2)] = False
            return False
        match = True
        for c1 in self.pl.children[x1]:
            match_child = False
            for c2 in self.p.children[x2]:
                match_child = self._fill(c1, c2) or match_child
            match = match and match_child
        self._map[(x1, x2)] = match
        return match


def fill_map(pl: TreePattern, p: TreePattern) -> MatchMatrix:
    """Compute Map for all aligned-depth node pairs (each pair visited once)."""
    mm = MatchMatrix(pl, p)
    for x2 in range(p.n):
        mm._fill(0, x2)
    return mm


class _Cursor:
    """Odometer over containment mappings below a fixed anchor for the lhs root."""

    def __init__(self, mm: MatchMatrix):
        self.mm = mm
        self.pl = mm.pl
        self.p = mm.p
        self.cm: dict[int, int] = {}

    def init(self, x1: int, x2: int) -> None:
        self.cm[x1] = x2
        for c1 in self.pl.children[x1]:
            for c2 in self.p.children[x2]:
                if self.mm.get(c1, c2):
                    self.init(c1, c2)
                    break

    def step(self, x: int) -> bool:
        kids = self.pl.children[x]
        advanced_at = -1
        for i in range(len(kids) - 1, -1, -1):
            if self.step(kids[i]):
                advanced_at = i
                break
        if advanced_at >= 0:
            parent_img = self.cm[x]
            for z in kids[advanced_at + 1:]:
                for c2 in self.p.children[parent_img]:
                    if self.mm.get(z, c2):
                        self.init(z, c2)
                        break
            return True
        if x == 0:
            return False
        m = self.cm[x]
        siblings = self.p.children[self.p.parent[m]]
        for s in siblings[siblings.index(m) + 1:]:
            if self.mm.get(x, s):
                self.init(x, s)
                return True
        return False


def enumerate_containment_mappings(pl: TreePattern, p: TreePattern) -> Iterator[ContainmentMapping]:
    """Every containment mapping exactly once, anchors in preorder."""
    mm = fill_map(pl, p)
    for x2 in range(p.n):
        if not mm.get(0, x2):
            continue
        cursor = _Cursor(mm)
        cursor.init(0, x2)
        while True:
            yield dict(cursor.cm)
            if not cursor.step(0):
                break


def admissible(f: ContainmentMapping, pl: TreePattern, p: TreePattern) -> bool:
    """The rule head f(H_left) must mention every distinguished node of p.

    A pure head enumerates the lhs's distinguished nodes, and parameter
    images are never distinguished, so only images of distinguished lhs
    nodes can provide the coverage; an existential node's image does not
    reach the head.
    """
    return p.delta <= {f[x] for x in pl.delta}


def is_pattern_isomorphism(pl: TreePattern, p: TreePattern, f: ContainmentMapping) -> bool:
    """A bijective kind-preserving mapping; such a rule restates its own lhs.

    The witnessed rhs is the lhs up to renaming, so every instantiation has
    confidence exactly 1; the miner suppresses these tautologies.
    """
    return (
        pl.n == p.n
        and len(set(f.values())) == p.n
        and all(pl.kind(x) == p.kind(y) for x, y in f.items())
    )


def labeled_signature(p: TreePattern, f: ContainmentMapping) -> str:
    """Canonical form of p labeled per node with (kind, preimage set under f)."""
    preimage: dict[int, tuple[int, ...]] = {y: () for y in range(p.n)}
    grouped: dict[int, list[int]] = {}
    for x, y in f.items():
        grouped.setdefault(y, []).append(x)
    for y, xs in grouped.items():
        preimage[y] = tuple(sorted(xs))

    def code(v: int) -> tuple:
        kids = sorted((code(c) for c in p.children[v]), reverse=True)
        return (p.kind(v), preimage[v], tuple(kids))

    return repr(code(0))


def equivalent_mappings(pl: TreePattern, p: TreePattern,
                        f1: ContainmentMapping, f2: ContainmentMapping) -> bool:
    """True iff f2 composed with some lhs automorphism matches f1 up to an rhs automorphism."""
    sig1 = labeled_signature(p, f1)
    for g in pattern_automorphisms(pl):
        composed = {x: f2[g[x]] for x in f2}
        if labeled_signature(p, composed) == sig1:
            return True
    return False


@dataclass(frozen=True)
class RuleRow:
    assignment: tuple[str, ...]  # over the rhs pattern's sigma columns
    freq: int
    lhs_freq: int

    @property
    def conf(self) -> Fraction:
        return Fraction(self.freq, self.lhs_freq)

    @property
    def conf_pct(self) -> int:
        return int((100 * self.conf.numerator + self.conf.denominator // 2)
                   // self.conf.denominator)


def rule_join(lhs_table: FrequencyTable, rhs_table: FrequencyTable,
              rho: Mapping[int, int], minconf: Fraction) -> list[RuleRow]:
    """Join rhs assignments to their lhs counterparts through rho; keep confident rows.

    Confidence is the exact fraction rhs_freq / lhs_freq.
    """
    rho_positions = []
    for sig in lhs_table.sigma_columns:
        target = rho[sig]
        rho_positions.append(rhs_table.sigma_columns.index(target))
    num, den = minconf.numerator, minconf.denominator
    rows = []
    for assignment in sorted(rhs_table.entries):
        freq_rhs = rhs_table.entries[assignment]
        lhs_key = tuple(assignment[i] for i in rho_positions)
        freq_lhs = lhs_table.entries.get(lhs_key)
        if freq_lhs is None:
            raise RuleConsistencyError(
                f"lhs assignment {lhs_key} missing for rhs row {assignment}"
            )
        # freq_rhs / freq_lhs >= minconf, in exact integer arithmetic
        if freq_rhs * den >= num * freq_lhs:
            rows.append(RuleRow(assignment, freq_rhs, freq_lhs))
    return rows


@dataclass(frozen=True)
class AssociationRule:
    lhs: TreeQuery
    rho: tuple[tuple[int, int], ...]  # lhs sigma node -> rhs sigma node
    rhs_head: tuple[int, ...]
    rhs_body: TreePattern
    rhs_key: str
    mapping: tuple[tuple[int, int], ...]  # the witnessing containment mapping
    rows: tuple[RuleRow, ...]


def mine_rules(store: PatternStore, lhs: TreeQuery, minconf: Fraction, *,
               strict_equivalence: bool = False) -> Iterator[AssociationRule]:
    """All legal, frequent, confident rules for the (purified) lhs.

    Patterns are visited by tree size then level then key; rules with no
    confident instantiation are suppressed.
    """
    pure, _ = purify(lhs)
    looked = store.lookup(pure.body)
    if looked is None:
        raise LhsNotMinedError(
            "the lhs body has no frequency table in the store; mine it first"
        )
    lhs_table, _ = looked
    lhs_height = pure.body.height

    def entry_order(key: str):
        e = store.entries[key]
        return (e.pattern.n, len(e.pattern.pi) + len(e.pattern.sigma), key)

    for key in sorted(store.entries, key=entry_order):
        entry = store.entries[key]
        p = entry.pattern
        if p.height < lhs_height:
            continue
        seen_rule_keys: set[tuple] = set()
        seen_signatures: set[str] = set()
        emitted: list[ContainmentMapping] = []
        for f in enumerate_containment_mappings(pure.body, p):
            if not admissible(f, pure.body, p):
                continue
            if is_pattern_isomorphism(pure.body, p, f):
                continue
            rho = tuple((s, f[s]) for s in pure.body.sigma_sorted())
            rhs_head = tuple(f[h] for h in pure.head)
            rule_key = (rho, rhs_head)
            if rule_key in seen_rule_keys:
                continue
            seen_rule_keys.add(rule_key)
            sig = labeled_signature(p, f)
            if sig in seen_signatures:
                continue
            seen_signatures.add(sig)
            if strict_equivalence and any(
                equivalent_mappings(pure.body, p, prev, f) for prev in emitted
            ):
                continue
            emitted.append(f)
            rows = rule_join(lhs_table, entry.table, dict(rho), minconf)
            if not rows:
                continue
            yield AssociationRule(
                lhs=pure,
                rho=rho,
                rhs_head=rhs_head,
                rhs_body=p,
                rhs_key=key,
                mapping=tuple(sorted(f.items())),
                rows=tuple(rows),
            )


def format_rule_block(rule: AssociationRule,
                      lhs_names: tuple[str, ...] | None = None) -> str:
    """One text block: lhs query, rho arrow, rhs query, then TSV rows."""
    from .syntax import format_pattern

    lhs_names = lhs_names or rule.lhs.body.node_names()
    rhs_names = rule.rhs_body.node_names()
    lines = [
        ",".join(lhs_names[h] for h in rule.lhs.head),
        format_pattern(rule.lhs.body, lhs_names),
        "=> " + (" ".join(f"{lhs_names[a]}->{rhs_names[b]}" for a, b in rule.rho) or "(no parameters)"),
        ",".join(rhs_names[h] for h in rule.rhs_head),
        format_pattern(rule.rhs_body, rhs_names),
    ]
    header = [rhs_names[c] for c in rule.rhs_body.sigma_sorted()] + ["freq", "conf", "pct"]
    lines.append("\t".join(header))
    for row in rule.rows:
        lines.append("\t".join(
            row.assignment + (str(row.freq),
                              f"{row.freq}/{row.lhs_freq}",
                              f"{row.conf_pct}%")
        ))
    return "\n".join(lines)
