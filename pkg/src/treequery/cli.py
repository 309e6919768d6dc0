"""Command-line front door: mine, rules, serve.

Every command prints a human-readable summary followed by one JSON line
with counts and timings, so scripts can parse the last stdout line.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .api import parse_minconf
from .graph import GraphParseError, load_graph
from .store import PatternStore, StoreError, StoreStaleError, fingerprint_graph
from .syntax import QuerySyntaxError, parse_query


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treequery",
        description="Mine frequent tree queries and tree-query association rules "
                    "in a directed data graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mine = sub.add_parser("mine", help="mine frequent patterns into a store")
    p_mine.add_argument("--graph", required=True, help="edge-list file (SRC DST per line)")
    p_mine.add_argument("--minsup", required=True, type=_positive_int)
    p_mine.add_argument("--max-nodes", required=True, type=_positive_int)
    p_mine.add_argument("--out", required=True, help="store directory to write")

    p_rules = sub.add_parser("rules", help="generate association rules for an lhs query")
    p_rules.add_argument("--store", required=True, help="store directory")
    p_rules.add_argument("--lhs", required=True, help="lhs query file (head line + body)")
    p_rules.add_argument("--minconf", required=True, help="e.g. 0.3 or 30%%")
    p_rules.add_argument("--out", required=True, help="output file for rule blocks")
    p_rules.add_argument("--strict-equivalence", action="store_true",
                         help="collapse every pair of equivalent rules "
                              "(slower; default keeps signature-distinct duplicates)")

    p_serve = sub.add_parser("serve", help="serve the HTTP API over a store")
    p_serve.add_argument("--store", required=True)
    p_serve.add_argument("--graph", required=True)
    p_serve.add_argument("--port", required=True, type=int)
    p_serve.add_argument("--host", default="127.0.0.1")
    return parser


def cmd_mine(args: argparse.Namespace) -> int:
    from .engine import mine_patterns

    started = time.perf_counter()
    path = Path(args.graph)
    try:
        graph = load_graph(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        print(f"error: graph file not found: {path}", file=sys.stderr)
        return 1
    except GraphParseError as exc:
        print(f"error: cannot parse {path}: {exc}", file=sys.stderr)
        return 1
    store, report = mine_patterns(graph, args.minsup, args.max_nodes)
    store.save(args.out)
    summary = report.summary()
    print(f"graph: {graph.n_nodes} nodes, {graph.n_edges} edges")
    for status in ("evaluated", "pruned-empty-parent",
                   "dismissed-redundant", "dismissed-noncanonical"):
        print(f"  {status}: {summary.get(status, 0)}")
    print(f"stored {len(store.entries)} frequency tables in {args.out}")
    elapsed = time.perf_counter() - started
    print(json.dumps({
        "command": "mine",
        "nodes": graph.n_nodes,
        "edges": graph.n_edges,
        "minsup": args.minsup,
        "max_nodes": args.max_nodes,
        "evaluated": summary.get("evaluated", 0),
        "stored": len(store.entries),
        "elapsed_s": round(elapsed, 3),
    }))
    return 0


def cmd_rules(args: argparse.Namespace) -> int:
    from .rules import LhsNotMinedError, format_rule_block, mine_rules

    started = time.perf_counter()
    try:
        minconf = parse_minconf(args.minconf)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: bad --minconf: {exc}", file=sys.stderr)
        return 1
    lhs_path = Path(args.lhs)
    try:
        lhs_text = lhs_path.read_text(encoding="utf-8")
    except FileNotFoundError:
        print(f"error: lhs file not found: {lhs_path}", file=sys.stderr)
        return 1
    try:
        parsed = parse_query(lhs_text)
    except QuerySyntaxError as exc:
        print(f"error: cannot parse {lhs_path}: {exc}", file=sys.stderr)
        return 1
    try:
        store = PatternStore.load(args.store)
    except StoreError as exc:
        print(f"error: cannot load store: {exc}", file=sys.stderr)
        return 1
    try:
        found = list(mine_rules(store, parsed.query, minconf,
                                strict_equivalence=args.strict_equivalence))
    except LhsNotMinedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    blocks = [format_rule_block(rule, parsed.names) for rule in found]
    Path(args.out).write_text("\n\n".join(blocks) + ("\n" if blocks else ""),
                              encoding="utf-8")
    n_rows = sum(len(rule.rows) for rule in found)
    print(f"wrote {len(found)} rules ({n_rows} rows) to {args.out}")
    elapsed = time.perf_counter() - started
    print(json.dumps({
        "command": "rules",
        "rules": len(found),
        "rows": n_rows,
        "minconf": f"{minconf.numerator}/{minconf.denominator}",
        "elapsed_s": round(elapsed, 3),
    }))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    path = Path(args.graph)
    try:
        graph = load_graph(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        print(f"error: graph file not found: {path}", file=sys.stderr)
        return 1
    try:
        store = PatternStore.load(args.store, expect_graph_fp=fingerprint_graph(graph))
    except StoreStaleError as exc:
        print(f"error: refusing to serve a stale store: {exc}", file=sys.stderr)
        return 1
    except StoreError as exc:
        print(f"error: cannot load store: {exc}", file=sys.stderr)
        return 1
    app = create_app(store, graph)
    print(json.dumps({
        "command": "serve",
        "patterns": len(store.entries),
        "port": args.port,
    }))
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"error: server failed: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"mine": cmd_mine, "rules": cmd_rules, "serve": cmd_serve}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
