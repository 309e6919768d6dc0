#!/usr/bin/env python3
"""Mine the bundled 7-node example graph and print every frequency table,
then generate the association rules for the bundled 4-node lhs query.

Usage: python scripts/run_example.py
"""

import sys
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from treequery.engine import Relation, frequency_table, mine_patterns  # noqa: E402
from treequery.graph import load_graph  # noqa: E402
from treequery.rules import format_rule_block, mine_rules  # noqa: E402
from treequery.syntax import format_pattern, parse_query  # noqa: E402

LHS = "x1,x3,x4\n(x1:d (x2:p) (x3:d) (x4:d))"


def main() -> None:
    graph = load_graph((ROOT / "data" / "g7.edges").read_text())
    print(f"graph: {graph.n_nodes} nodes, {graph.n_edges} edges")
    store, report = mine_patterns(graph, minsup=3, max_nodes=3)
    print(f"outcomes: {report.summary()}")
    print(f"stored tables: {len(store.entries)}\n")
    for key in sorted(store.entries):
        entry = store.entries[key]
        print(f"[{key}]  {format_pattern(entry.pattern)}")
        names = entry.pattern.node_names()
        cols = [names[c] for c in entry.table.sigma_columns]
        print("  " + "\t".join(cols + ["freq"]))
        for row in sorted(entry.table.entries):
            print("  " + "\t".join(row + (str(entry.table.entries[row]),)))
        print()

    parsed = parse_query(LHS)
    body = parsed.query.body
    candidates = Relation(body.sigma_sorted(), frozenset((v,) for v in graph.nodes))
    store.add(body, frequency_table(graph, body, candidates, 3))

    print("=" * 60)
    print("association rules at minconf 30% for lhs:")
    print(LHS)
    print("=" * 60)
    for rule in mine_rules(store, parsed.query, Fraction(30, 100)):
        print(format_rule_block(rule, parsed.names))
        print()


if __name__ == "__main__":
    main()
