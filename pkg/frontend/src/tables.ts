// Pure table models for rendering. Every cell is copied verbatim from an
// API response; nothing here computes a frequency or a confidence.

import type { MatchResponse, RuleBlock } from "./types.js";

export interface TableModel {
  columns: string[];
  rows: string[][];
}

export function matchTable(response: MatchResponse): TableModel {
  return {
    columns: [...response.columns, "freq"],
    rows: response.rows.map((r) => [...r.values, String(r.freq)]),
  };
}

export interface RuleModel {
  key: string;
  lhsHead: string;
  lhsBody: string;
  rhoArrow: string;
  rhsHead: string;
  rhsBody: string;
  table: TableModel;
  tooltips: string[]; // exact fraction per row, shown on hover
}

export function ruleModel(block: RuleBlock): RuleModel {
  const sigma = block.rhs_nodes.filter((n) => n.kind === "p").map((n) => n.name);
  return {
    key: block.key,
    lhsHead: block.lhs_head.join(","),
    lhsBody: block.lhs_body,
    rhoArrow: block.rho.map(([a, b]) => `${a}→${b}`).join("  ") || "(no parameters)",
    rhsHead: block.rhs_head.join(","),
    rhsBody: block.rhs_body,
    table: {
      columns: [...sigma, "freq", "conf"],
      rows: block.rows.map((r) => [...r.values, String(r.freq), `${r.pct}%`]),
    },
    tooltips: block.rows.map((r) => `${r.conf[0]}/${r.conf[1]}`),
  };
}
