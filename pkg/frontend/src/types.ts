// JSON payloads of the treequery HTTP API.

export type Kind = "d" | "e" | "p";

export interface ApiNode {
  name: string;
  depth: number;
  kind: Kind;
}

export interface PatternSummary {
  key: string;
  nodes: ApiNode[];
  sigma: string[];
  rows: number;
}

export interface PatternsResponse {
  minsup: number;
  max_nodes: number;
  entries: PatternSummary[];
}

export interface TableRow {
  values: string[];
  freq: number;
}

export interface PatternDetail extends PatternSummary {
  columns: string[];
  table: TableRow[];
}

export interface MatchResponse {
  columns: string[];
  rows: TableRow[];
  adhoc: boolean;
}

export interface RuleRow {
  values: string[];
  freq: number;
  conf: [number, number];
  pct: number;
}

export interface RuleBlock {
  key: string;
  lhs_head: string[];
  lhs_body: string;
  rho: [string, string][];
  rhs_head: string[];
  rhs_body: string;
  rhs_nodes: ApiNode[];
  rows: RuleRow[];
}

export interface GraphSummary {
  nodes: number;
  edges: number;
  fingerprint: string;
}
