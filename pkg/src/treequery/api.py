"""HTTP API over an immutable pattern store and data graph.

All responses are pure functions of (store, graph, request); nothing here
mutates the store.  JSON over HTTP, UTF-8.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .engine import evaluate_pattern
from .graph import DataGraph
from .patterns import TreePattern
from .store import PatternStore, StoreEntry
from .syntax import ParsedPattern, QuerySyntaxError, format_pattern, parse_pattern, parse_query

ADHOC_NODE_CAP = 8


class MatchRequest(BaseModel):
    pattern: str


class RulesRequest(BaseModel):
    lhs: str
    minconf: float | str


def parse_minconf(value: float | str) -> Fraction:
    if isinstance(value, str):
        text = value.strip()
        conf = Fraction(text[:-1]) / 100 if text.endswith("%") else Fraction(text)
    else:
        conf = Fraction(str(value))
    if not 0 <= conf <= 1:
        raise ValueError(f"minconf must be within [0, 1], got {conf}")
    return conf


def _pattern_nodes(p: TreePattern, names: tuple[str, ...] | None = None) -> list[dict]:
    names = names or p.node_names()
    return [
        {"name": names[v], "depth": p.levels[v], "kind": p.kind(v)}
        for v in range(p.n)
    ]


def _entry_summary(key: str, entry: StoreEntry) -> dict:
    return {
        "key": key,
        "nodes": _pattern_nodes(entry.pattern),
        "sigma": [entry.pattern.node_names()[c] for c in entry.pattern.sigma_sorted()],
        "rows": len(entry.table.entries),
    }


def create_app(store: PatternStore, graph: DataGraph) -> FastAPI:
    app = FastAPI(title="treequery")

    @app.get("/graph/summary")
    def graph_summary() -> dict:
        return {
            "nodes": graph.n_nodes,
            "edges": graph.n_edges,
            "fingerprint": store.graph_fp,
        }

    @app.get("/patterns")
    def list_patterns() -> dict:
        return {
            "minsup": store.minsup,
            "max_nodes": store.max_nodes,
            "entries": [_entry_summary(k, store.entries[k]) for k in sorted(store.entries)],
        }

    @app.get("/patterns/{key}")
    def get_pattern(key: str) -> dict:
        entry = store.entries.get(key)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown pattern key {key!r}")
        names = entry.pattern.node_names()
        return {
            **_entry_summary(key, entry),
            "columns": [names[c] for c in entry.table.sigma_columns],
            "table": [
                {"values": list(row), "freq": entry.table.entries[row]}
                for row in sorted(entry.table.entries)
            ],
        }

    @app.post("/match")
    def match(req: MatchRequest) -> dict:
        try:
            parsed = parse_pattern(req.pattern)
        except QuerySyntaxError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _match(store, graph, parsed)

    @app.post("/rules")
    def rules(req: RulesRequest) -> list[dict]:
        from .rules import LhsNotMinedError, mine_rules

        try:
            minconf = parse_minconf(req.minconf)
        except (ValueError, ZeroDivisionError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            parsed = parse_query(req.lhs)
        except QuerySyntaxError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            found = list(mine_rules(store, parsed.query, minconf))
        except LhsNotMinedError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return [_rule_to_json(rule, parsed.names) for rule in found]

    return app


def _match(store: PatternStore, graph: DataGraph, parsed: ParsedPattern) -> dict:
    p = parsed.pattern
    open_params = [c for c in p.sigma_sorted() if c not in parsed.fixed]
    names = parsed.names
    looked = store.lookup(p)
    if looked is not None:
        table, _ = looked
        rows = []
        open_idx = [table.sigma_columns.index(c) for c in open_params]
        fixed_idx = [(table.sigma_columns.index(c), v) for c, v in parsed.fixed.items()]
        for key in sorted(table.entries):
            if all(key[i] == v for i, v in fixed_idx):
                rows.append({"values": [key[i] for i in open_idx],
                             "freq": table.entries[key]})
        adhoc = False
    else:
        if p.n > ADHOC_NODE_CAP:
            raise HTTPException(
                status_code=400,
                detail=f"pattern has {p.n} nodes; ad-hoc evaluation is capped "
                       f"at {ADHOC_NODE_CAP} (mine a store covering it instead)",
            )
        rows = _adhoc_rows(store, graph, parsed, open_params)
        adhoc = True
    return {
        "columns": [names[c] for c in open_params],
        "rows": rows,
        "adhoc": adhoc,
    }


def _adhoc_rows(store: PatternStore, graph: DataGraph, parsed: ParsedPattern,
                open_params: list[int]) -> list[dict]:
    p = parsed.pattern
    allowed = {}
    for node, const in parsed.fixed.items():
        nid = graph.node_id(const)
        if nid is None:
            return []
        allowed[node] = frozenset({nid})
    relation = evaluate_pattern(graph, p, allowed or None)
    sigma = p.sigma_sorted()
    sig_idx = [relation.columns.index(c) for c in sigma]
    counts: dict[tuple[int, ...], int] = {}
    for row in relation.rows:
        key = tuple(row[i] for i in sig_idx)
        counts[key] = counts.get(key, 0) + 1
    open_pos = [sigma.index(c) for c in open_params]
    rows = []
    for key in sorted(counts, key=lambda k: tuple(graph.constants[v] for v in k)):
        if counts[key] < store.minsup:
            continue
        rows.append({
            "values": [graph.constants[key[i]] for i in open_pos],
            "freq": counts[key],
        })
    return rows


def _rule_to_json(rule, lhs_names: tuple[str, ...]) -> dict:
    rhs_names = rule.rhs_body.node_names()
    return {
        "key": rule.rhs_key,
        "lhs_head": [lhs_names[h] for h in rule.lhs.head],
        "lhs_body": format_pattern(rule.lhs.body, lhs_names),
        "rho": [[lhs_names[a], rhs_names[b]] for a, b in rule.rho],
        "rhs_head": [rhs_names[h] for h in rule.rhs_head],
        "rhs_body": format_pattern(rule.rhs_body, rhs_names),
        "rhs_nodes": _pattern_nodes(rule.rhs_body),
        "rows": [
            {
                "values": list(row.assignment),
                "freq": row.freq,
                "conf": [row.freq, row.lhs_freq],
                "pct": row.conf_pct,
            }
            for row in rule.rows
        ],
    }
