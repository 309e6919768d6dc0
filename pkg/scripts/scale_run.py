#!/usr/bin/env python3
"""Timing experiment on a uniform random graph: mine up to 5-node trees,
then time rule generation at two confidence thresholds.

Usage: python scripts/scale_run.py [nodes] [edges] [minsup] [seed]
"""

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from treequery.engine import mine_patterns  # noqa: E402
from treequery.graph import load_graph  # noqa: E402
from treequery.rules import mine_rules  # noqa: E402
from treequery.syntax import parse_query  # noqa: E402


def main() -> None:
    args = sys.argv[1:]
    n = int(args[0]) if len(args) > 0 else 33
    m = int(args[1]) if len(args) > 1 else 113
    minsup = int(args[2]) if len(args) > 2 else 25
    seed = int(args[3]) if len(args) > 3 else 33113

    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(n)]
    graph = load_graph("\n".join(f"n{u} n{v}" for u, v in rng.sample(pairs, m)))
    print(f"graph: {n} nodes, {m} edges, minsup {minsup}, trees <= 5 nodes")

    t0 = time.perf_counter()
    store, report = mine_patterns(graph, minsup, 5)
    dt = time.perf_counter() - t0
    print(f"mining: {dt:.2f}s, {len(store.entries)} tables, {report.summary()}")

    workload = [
        parse_query("x1\n(x1:d)"),
        parse_query("x1,x2\n(x1:d (x2:d))"),
        parse_query("x1\n(x1:d (e2:e))"),
    ]
    for minconf in (Fraction(1, 10), Fraction(1, 2)):
        t0 = time.perf_counter()
        rows = sum(
            len(r.rows)
            for lhs in workload
            for r in mine_rules(store, lhs.query, minconf)
        )
        dt = time.perf_counter() - t0
        per_row = dt / rows * 1e6 if rows else float("nan")
        print(f"rules at minconf {minconf}: {rows} rows in {dt:.3f}s "
              f"({per_row:.1f} us/row)")


if __name__ == "__main__":
    main()
