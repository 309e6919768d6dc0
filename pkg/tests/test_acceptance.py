"""Acceptance suite: one test per release criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line
per criterion.
"""

import itertools
import random
import time
from fractions import Fraction

from treequery.engine import mine_patterns
from treequery.graph import DataGraph, load_graph
from treequery.oracle import (
    brute_force_answer_set,
    brute_force_containment_mappings,
    brute_force_equivalent,
)
from treequery.patterns import (
    TreePattern,
    canonize,
    has_redundancy,
    is_canonical_pattern,
    purify,
    refined_level_sequence,
)
from treequery.rules import (
    admissible,
    enumerate_containment_mappings,
    equivalent_mappings,
    is_pattern_isomorphism,
    mine_rules,
)
from treequery.syntax import parse_query
from treequery.trees import enumerate_trees

from conftest import G7_TEXT, LHS_TEXT, build_rules_store, random_graph

STAR = (0, 1, 1)


class criterion:
    """Context manager printing one PASS/FAIL line per acceptance criterion."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        verdict = "PASS" if exc_type is None else "FAIL"
        print(f"ACCEPTANCE [{self.name}]: {verdict}")
        return False


def all_kind_assignments(n: int):
    for kinds in itertools.product("dep", repeat=n):
        yield (
            frozenset(i for i, k in enumerate(kinds) if k == "e"),
            frozenset(i for i, k in enumerate(kinds) if k == "p"),
        )


def oracle_hom_list(g: DataGraph, levels: tuple[int, ...]):
    """All tree homomorphisms into g, by exhaustive product + edge filter."""
    from treequery.trees import parents_of_levels

    parent = parents_of_levels(levels)
    edges = [(parent[v], v) for v in range(1, len(levels))]
    homs = []
    for m in itertools.product(g.nodes, repeat=len(levels)):
        if all((m[a], m[b]) in g.edges for a, b in edges):
            homs.append(m)
    return homs


def oracle_table(g: DataGraph, p: TreePattern, homs) -> dict:
    sigma = p.sigma_sorted()
    delta = p.delta_sorted()
    groups: dict = {}
    for m in homs:
        groups.setdefault(tuple(m[s] for s in sigma), set()).add(
            tuple(m[d] for d in delta)
        )
    return {
        tuple(g.constants[v] for v in key): len(projs)
        for key, projs in groups.items()
    }


# --------------------------------------------------------------------------
# 1. Example-run fixture: exact store and outcome split on the 3-node star.

def test_criterion_example_run_fixture():
    with criterion("example-run fixture, exact"):
        g7 = load_graph(G7_TEXT)
        started = time.perf_counter()
        store, report = mine_patterns(g7, 3, 3)
        elapsed = time.perf_counter() - started
        expected_tables = {
            ((), ()): {(): 15},
            ((), (0,)): {("0",): 9, ("2",): 4},
            ((), (1,)): {("1",): 3, ("2",): 3, ("3",): 3, ("4",): 3},
            ((0,), ()): {(): 14},
            ((), (0, 1)): {("0", "1"): 3, ("0", "2"): 3, ("0", "3"): 3},
            ((0,), (1,)): {("1",): 3, ("2",): 3, ("3",): 3},
        }
        evaluated_empty = {((), (1, 2)), ((0,), (1, 2))}
        not_evaluated = {((), (0, 1, 2)), ((1,), (0, 2))}

        star_entries = {
            (tuple(sorted(e.pattern.pi)), tuple(sorted(e.pattern.sigma))): e.table.entries
            for e in store.entries.values()
            if e.pattern.levels == STAR
        }
        assert star_entries == expected_tables

        outcomes = {
            (tuple(sorted(o.pattern.pi)), tuple(sorted(o.pattern.sigma))): o
            for o in report.for_tree(STAR)
        }
        evaluated = {k for k, o in outcomes.items() if o.status == "evaluated"}
        assert evaluated == set(expected_tables) | evaluated_empty
        for spec in evaluated_empty:
            assert outcomes[spec].n_entries == 0
        for spec in not_evaluated:
            assert outcomes[spec].status != "evaluated"
        # everything else was dismissed or pruned before evaluation
        for spec, o in outcomes.items():
            if spec not in evaluated:
                assert o.status in (
                    "pruned-empty-parent", "dismissed-redundant", "dismissed-noncanonical",
                )
        assert elapsed < 1.0, f"example run took {elapsed:.3f}s"


# --------------------------------------------------------------------------
# 2. Rule fixture: 6 rules / 21 rows at minconf 30%, exact fractions.

def test_criterion_rule_fixture():
    with criterion("rule fixture, exact"):
        g7 = load_graph(G7_TEXT)
        store, parsed = build_rules_store(g7)
        started = time.perf_counter()
        rules = list(mine_rules(store, parsed.query, Fraction(30, 100)))
        elapsed = time.perf_counter() - started
        assert len(rules) == 6
        assert sum(len(r.rows) for r in rules) == 21
        level1 = [r for r in rules if r.rhs_key == "0d1p1d"]
        level2 = [r for r in rules if r.rhs_key == "0p1p1d"]
        assert len(level1) == 3 and len(level2) == 3
        for r in level1:
            got = {(row.assignment, row.freq, row.conf) for row in r.rows}
            assert got == {
                (("1",), 3, Fraction(3, 9)),
                (("2",), 3, Fraction(3, 9)),
                (("3",), 3, Fraction(3, 9)),
                (("4",), 3, Fraction(3, 5)),
            }
        # the join forces P.sigma1 = 0 and P.sigma2 = P_left.sigma2 in {1,2,3}
        # (the printed lhs column in the source run mislabels P.sigma1)
        for r in level2:
            got = {(row.assignment, row.freq, row.conf) for row in r.rows}
            assert got == {
                (("0", "1"), 3, Fraction(3, 9)),
                (("0", "2"), 3, Fraction(3, 9)),
                (("0", "3"), 3, Fraction(3, 9)),
            }
        assert elapsed < 1.0, f"rule run took {elapsed:.3f}s"


# --------------------------------------------------------------------------
# 3 + 4. Oracle equivalence and anti-monotonicity over 50 random graphs.

def canonical_nonredundant_patterns(max_nodes: int):
    out: dict[tuple[int, ...], list[TreePattern]] = {}
    for tree in enumerate_trees(max_nodes):
        keep = []
        for pi, sigma in all_kind_assignments(tree.n):
            p = TreePattern(tree.levels, pi, sigma)
            if not has_redundancy(p) and is_canonical_pattern(p):
                keep.append(p)
        out[tree.levels] = keep
    return out


def test_criterion_oracle_equivalence_and_antimonotonicity():
    reps = canonical_nonredundant_patterns(4)
    rng = random.Random(20240 + 8)
    stores = []
    with criterion("oracle equivalence over 50 random graphs, exact"):
        for i in range(50):
            g = random_graph(rng, 3 + i % 6, 0.3)
            oracle: dict[str, dict] = {}
            for levels, patterns in reps.items():
                homs = oracle_hom_list(g, levels)
                for p in patterns:
                    oracle[refined_level_sequence(p)] = oracle_table(g, p, homs)
            for minsup in (1, 2, 3):
                store, _ = mine_patterns(g, minsup, 4)
                stores.append((g, store))
                # soundness: every stored count equals the brute-force count
                for key, entry in store.entries.items():
                    expected = {k: v for k, v in oracle[key].items() if v >= minsup}
                    assert entry.table.entries == expected, (minsup, key)
                # completeness: every oracle-frequent instantiation of a
                # canonical redundancy-free pattern is stored (redundant
                # patterns are equivalent to smaller stored ones)
                for key, table in oracle.items():
                    frequent = {k: v for k, v in table.items() if v >= minsup}
                    if frequent:
                        assert key in store.entries, (minsup, key)
                        assert store.entries[key].table.entries == frequent

    with criterion("anti-monotonicity across all stores, exact"):
        from treequery.patterns import parents

        for g, store in stores:
            for entry in store.entries.values():
                p = entry.pattern
                sigma = p.sigma_sorted()
                for parent, _removed in parents(p):
                    looked = store.lookup(parent)
                    assert looked is not None, "frequent child with unstored parent"
                    parent_table, _ = looked
                    pos = [sigma.index(c) for c in parent_table.sigma_columns]
                    for assignment, count in entry.table.entries.items():
                        restricted = tuple(assignment[i] for i in pos)
                        assert parent_table.entries.get(restricted, 0) >= count


# --------------------------------------------------------------------------
# 5. Equivalence pruning: canonical-key equality decides equivalence.

def pattern_orderings(p: TreePattern):
    """Every ordered presentation of the pattern (children permuted)."""

    def arrange(v: int):
        child_blocks = []
        for perm in itertools.permutations(p.children[v]):
            pieces = [arrange(c) for c in perm]
            for combo in itertools.product(*pieces):
                flat_levels: list[int] = [0]
                flat_kinds: list[str] = [p.kind(v)]
                for levels, kinds in combo:
                    flat_levels.extend(d + 1 for d in levels)
                    flat_kinds.extend(kinds)
                child_blocks.append((tuple(flat_levels), tuple(flat_kinds)))
        return child_blocks

    seen = set()
    for levels, kinds in arrange(0):
        if (levels, kinds) in seen:
            continue
        seen.add((levels, kinds))
        yield TreePattern(
            levels,
            frozenset(i for i, k in enumerate(kinds) if k == "e"),
            frozenset(i for i, k in enumerate(kinds) if k == "p"),
        )


def test_criterion_equivalence_pruning():
    with criterion("equivalence pruning soundness/completeness, exact"):
        all_patterns: list[TreePattern] = []
        for tree in enumerate_trees(5):
            for pi, sigma in all_kind_assignments(tree.n):
                all_patterns.append(TreePattern(tree.levels, pi, sigma))
        redundancy_free = [p for p in all_patterns if not has_redundancy(p)]

        # key stability: every ordering of a pattern yields the same key
        for p in redundancy_free:
            key = refined_level_sequence(p)
            for variant in pattern_orderings(p):
                assert refined_level_sequence(variant) == key

        # equal keys imply semantic equivalence (exhaustive per key group)
        groups: dict[str, list[TreePattern]] = {}
        for p in redundancy_free:
            groups.setdefault(refined_level_sequence(p), []).append(p)
        for members in groups.values():
            head = members[0]
            for other in members[1:]:
                assert brute_force_equivalent(head, other)

        # distinct keys imply non-equivalence (seeded sample of comparable pairs)
        rng = random.Random(5151)
        keys = sorted(groups)
        comparable: dict[tuple, list[str]] = {}
        for key, members in groups.items():
            p = members[0]
            comparable.setdefault((p.n, len(p.pi), len(p.sigma)), []).append(key)
        checked = 0
        for bucket in comparable.values():
            if len(bucket) < 2:
                continue
            for _ in range(min(60, len(bucket) * 2)):
                k1, k2 = rng.sample(bucket, 2)
                assert not brute_force_equivalent(groups[k1][0], groups[k2][0])
                checked += 1
        assert checked >= 300

        # no stored pattern is redundant (over the fixture store)
        store, _ = mine_patterns(load_graph(G7_TEXT), 3, 3)
        for entry in store.entries.values():
            assert not has_redundancy(entry.pattern)

        # the published figures classify correctly
        from test_patterns import ISO_A, ISO_B, RED_A, RED_B, RED_C

        assert has_redundancy(RED_A) and has_redundancy(RED_B) and not has_redundancy(RED_C)
        assert brute_force_equivalent(RED_A, RED_C)
        assert refined_level_sequence(ISO_A) == refined_level_sequence(ISO_B)
        assert brute_force_equivalent(ISO_A, ISO_B)


# --------------------------------------------------------------------------
# 6. Containment-mapping enumeration vs brute force, composition closure.

def seeded_pattern(rng: random.Random, max_n: int) -> TreePattern:
    n = rng.randint(1, max_n)
    parent = [rng.randint(0, i - 1) for i in range(1, n)]
    from conftest import levels_from_parents

    levels = levels_from_parents(parent)
    kinds = [rng.choice("dep") for _ in range(n)]
    return TreePattern(
        levels,
        frozenset(i for i, k in enumerate(kinds) if k == "e"),
        frozenset(i for i, k in enumerate(kinds) if k == "p"),
    )


def test_criterion_containment_enumeration():
    with criterion("containment-mapping enumeration, exact"):
        rng = random.Random(606)
        for _ in range(100):
            pl = seeded_pattern(rng, 6)
            p = seeded_pattern(rng, 6)
            got = sorted(
                tuple(sorted(f.items()))
                for f in enumerate_containment_mappings(pl, p)
            )
            want = sorted(
                tuple(sorted(f.items()))
                for f in brute_force_containment_mappings(pl, p)
            )
            assert got == want  # set equality and multiplicity one

        # composition closure on sampled triples
        found = 0
        while found < 20:
            p1 = seeded_pattern(rng, 4)
            p2 = seeded_pattern(rng, 4)
            p3 = seeded_pattern(rng, 4)
            f1s = brute_force_containment_mappings(p1, p2)
            f2s = brute_force_containment_mappings(p2, p3)
            if not f1s or not f2s:
                continue
            all13 = {
                tuple(sorted(f.items()))
                for f in enumerate_containment_mappings(p1, p3)
            }
            for f1 in f1s[:3]:
                for f2 in f2s[:3]:
                    composed = {x: f2[f1[x]] for x in f1}
                    assert tuple(sorted(composed.items())) in all13
            found += 1


# --------------------------------------------------------------------------
# 7. Rule-equivalence filter: strict mode collapses equivalent mappings.

def test_criterion_rule_equivalence_filter():
    with criterion("rule-equivalence filter, exact"):
        # the three equivalent mappings from the all-distinguished example
        g7 = load_graph(G7_TEXT)
        from treequery.engine import Relation, frequency_table

        store, _ = mine_patterns(g7, 3, 3)
        lhs = parse_query("x1,x2,x3,x4\n(x1:d (x2:d) (x3:d) (x4:d))")
        table = frequency_table(g7, lhs.query.body, Relation((), frozenset({()})), 3)
        store.add(lhs.query.body, table)
        strict = [r for r in mine_rules(store, lhs.query, Fraction(1, 10),
                                        strict_equivalence=True)
                  if r.rhs_key == "0d1d1d"]
        assert len(strict) == 1
        rhs = store.entries["0d1d1d"].pattern
        emitted = dict(strict[0].mapping)
        for f in ({0: 0, 1: 1, 2: 1, 3: 2}, {0: 0, 1: 2, 2: 1, 3: 1},
                  {0: 0, 1: 1, 2: 2, 3: 2}):
            assert equivalent_mappings(lhs.query.body, rhs, emitted, f)

        # random instances: emitted representatives pairwise inequivalent and
        # every filtered mapping equivalent to an emitted one
        rng = random.Random(8787)
        instances = 0
        while instances < 40:
            pl = seeded_pattern(rng, 5)
            p = seeded_pattern(rng, 5)
            mappings = [
                f for f in enumerate_containment_mappings(pl, p)
                if admissible(f, pl, p) and not is_pattern_isomorphism(pl, p, f)
            ][:10]
            if not mappings:
                continue
            instances += 1
            emitted_reps: list[dict] = []
            for f in mappings:
                if not any(equivalent_mappings(pl, p, e, f) for e in emitted_reps):
                    emitted_reps.append(f)
            for i, a in enumerate(emitted_reps):
                for b in emitted_reps[i + 1:]:
                    assert not equivalent_mappings(pl, p, a, b)
            for f in mappings:
                assert any(equivalent_mappings(pl, p, e, f) for e in emitted_reps)


# --------------------------------------------------------------------------
# 8. Legality soundness: answer-set inclusion for every emitted rule row.

def test_criterion_legality_soundness():
    with criterion("legality soundness, exact"):
        rng = random.Random(4242)
        lhs_specs = ["x1,x2\n(x1:d (x2:d))", "x1\n(x1:d (e2:e))"]
        checked = 0
        for _ in range(8):
            g = random_graph(rng, 6, 0.35)
            store, _ = mine_patterns(g, 2, 3)
            for spec in lhs_specs:
                parsed = parse_query(spec)
                if store.lookup(parsed.query.body) is None:
                    continue
                pure, _ = purify(parsed.query)
                for rule in mine_rules(store, parsed.query, Fraction(0)):
                    rho = dict(rule.rho)
                    for row in rule.rows:
                        assert 0 < row.conf <= 1
                        alpha = {
                            c: g.node_id(v)
                            for c, v in zip(rule.rhs_body.sigma_sorted(), row.assignment)
                        }
                        rhs_ans = brute_force_answer_set(
                            g, rule.rhs_head, rule.rhs_body, alpha)
                        lhs_alpha = {s: alpha[rho[s]] for s in pure.body.sigma_sorted()}
                        lhs_ans = brute_force_answer_set(
                            g, pure.head, pure.body, lhs_alpha)
                        assert rhs_ans <= lhs_ans
                        checked += 1
        assert checked >= 50


# --------------------------------------------------------------------------
# 9. Scale sanity: a 33-node random graph mines in bounded time and rule
#    generation stays linear in emitted rows.

def erdos_renyi_graph(n: int, target_edges: int, seed: int) -> DataGraph:
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(n)]
    edges = rng.sample(pairs, target_edges)
    return load_graph("\n".join(f"n{u} n{v}" for u, v in edges))


def test_criterion_scale_sanity():
    with criterion("scale sanity, <120 s and linear rule generation"):
        g = erdos_renyi_graph(33, 113, seed=33113)
        started = time.perf_counter()
        store, _ = mine_patterns(g, 25, 5)
        mining_s = time.perf_counter() - started
        assert mining_s < 120, f"mining took {mining_s:.1f}s"
        assert store.entries

        workload = [
            parse_query("x1\n(x1:d)"),
            parse_query("x1,x2\n(x1:d (x2:d))"),
            parse_query("x1\n(x1:d (e2:e))"),
        ]
        for lhs in workload:
            assert store.lookup(lhs.query.body) is not None

        def run(minconf):
            best_t = None
            rows = 0
            for _ in range(5):
                t0 = time.perf_counter()
                rows = sum(
                    len(r.rows)
                    for lhs in workload
                    for r in mine_rules(store, lhs.query, minconf)
                )
                dt = time.perf_counter() - t0
                best_t = dt if best_t is None else min(best_t, dt)
            return best_t, rows

        t_low, rows_low = run(Fraction(1, 10))
        t_high, rows_high = run(Fraction(1, 2))
        assert rows_low >= rows_high > 0
        per_low = t_low / rows_low
        per_high = t_high / rows_high
        ratio = max(per_low, per_high) / min(per_low, per_high)
        assert ratio < 3, f"per-row overhead ratio {ratio:.2f}"
