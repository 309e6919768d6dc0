#!/usr/bin/env python3
"""Regenerate the frontend's golden fixtures.

The UI test suite asserts that tables rendered from API JSON are
value-identical to what the CLI emits for the same store and inputs, so
both sides are captured here from one run: the API responses the browser
would receive, and the CLI-derived expected tables.

Usage: python scripts/gen_frontend_golden.py
"""

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

GOLDEN_DIR = ROOT / "frontend" / "test" / "golden"

MATCH_PATTERN = "(x1:p (x2:d) (x3:d))"


def generate() -> dict[str, object]:
    from fastapi.testclient import TestClient

    from conftest import G7_TEXT, LHS_TEXT, build_rules_store
    from treequery.api import create_app
    from treequery.cli import main as cli_main
    from treequery.graph import load_graph

    g7 = load_graph(G7_TEXT)
    store, _ = build_rules_store(g7)
    client = TestClient(create_app(store, g7))

    match_response = client.post("/match", json={"pattern": MATCH_PATTERN}).json()
    rules_response = client.post(
        "/rules", json={"lhs": LHS_TEXT, "minconf": "30%"}
    ).json()

    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        store_dir = tmp_path / "store"
        store.save(store_dir)
        lhs_file = tmp_path / "lhs.query"
        lhs_file.write_text(LHS_TEXT)
        rules_file = tmp_path / "rules.txt"
        rc = cli_main([
            "rules", "--store", str(store_dir), "--lhs", str(lhs_file),
            "--minconf", "30%", "--out", str(rules_file),
        ])
        assert rc == 0, "CLI rules run failed"
        cli_rule_tables = parse_cli_blocks(rules_file.read_text())
        cli_match_table = read_store_table(store_dir, "0p1d1d")

    return {
        "match_request.json": {"pattern": MATCH_PATTERN},
        "match_response.json": match_response,
        "rules_request.json": {"lhs": LHS_TEXT, "minconf": "30%"},
        "rules_response.json": rules_response,
        "cli_match_table.json": cli_match_table,
        "cli_rule_tables.json": cli_rule_tables,
    }


def parse_cli_blocks(text: str) -> list[dict]:
    """Rule blocks from the CLI text output, in emission order."""
    blocks = []
    for chunk in text.strip().split("\n\n"):
        lines = chunk.splitlines()
        header_at = next(i for i, line in enumerate(lines) if line.startswith("=> "))
        columns = lines[header_at + 3].split("\t")
        rows = [line.split("\t") for line in lines[header_at + 4:]]
        blocks.append({
            "lhs_head": lines[0],
            "lhs_body": lines[1],
            "rho": lines[header_at][3:],
            "rhs_head": lines[header_at + 1],
            "rhs_body": lines[header_at + 2],
            "columns": columns,
            "rows": rows,
        })
    return blocks


def read_store_table(store_dir: Path, key: str) -> dict:
    manifest = json.loads((store_dir / "manifest.json").read_text())
    entry = next(e for e in manifest["entries"] if e["key"] == key)
    lines = (store_dir / entry["file"]).read_text().splitlines()
    return {
        "key": key,
        "columns": lines[0].split("\t"),
        "rows": [line.split("\t") for line in lines[1:]],
    }


def main() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for name, payload in generate().items():
        path = GOLDEN_DIR / name
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
