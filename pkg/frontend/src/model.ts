// Editor state for the pattern being drawn.
//
// The tree is kept structurally valid at all times: exactly one root,
// every parent reference resolves, no cycles (re-parenting into the own
// subtree is rejected). Node names used on the wire are assigned by
// preorder position at serialization time, so they are stable for the
// server and independent of edit history.

import type { ApiNode, Kind } from "./types.js";

export interface EditorNode {
  id: number;
  parent: number | null;
  kind: Kind;
  constant: string | null; // only meaningful while kind === "p"
}

export interface EditorState {
  nodes: Map<number, EditorNode>;
  nextId: number;
  head: number[]; // node ids picked as lhs head entries, in click order
  minconf: string;
}

export function newEditor(): EditorState {
  const root: EditorNode = { id: 0, parent: null, kind: "d", constant: null };
  return { nodes: new Map([[0, root]]), nextId: 1, head: [], minconf: "30%" };
}

export function rootOf(state: EditorState): EditorNode {
  for (const node of state.nodes.values()) {
    if (node.parent === null) return node;
  }
  throw new Error("editor invariant broken: no root");
}

export function childrenOf(state: EditorState, id: number): EditorNode[] {
  const out: EditorNode[] = [];
  for (const node of state.nodes.values()) {
    if (node.parent === id) out.push(node);
  }
  out.sort((a, b) => a.id - b.id);
  return out;
}

export function addChild(state: EditorState, parentId: number): number {
  if (!state.nodes.has(parentId)) throw new Error(`no node ${parentId}`);
  const id = state.nextId++;
  state.nodes.set(id, { id, parent: parentId, kind: "d", constant: null });
  return id;
}

function subtreeIds(state: EditorState, id: number): Set<number> {
  const out = new Set<number>([id]);
  let grew = true;
  while (grew) {
    grew = false;
    for (const node of state.nodes.values()) {
      if (node.parent !== null && out.has(node.parent) && !out.has(node.id)) {
        out.add(node.id);
        grew = true;
      }
    }
  }
  return out;
}

export function removeNode(state: EditorState, id: number): void {
  const node = state.nodes.get(id);
  if (!node) throw new Error(`no node ${id}`);
  if (node.parent === null) throw new Error("cannot remove the root");
  for (const gone of subtreeIds(state, id)) {
    state.nodes.delete(gone);
    state.head = state.head.filter((h) => h !== gone);
  }
}

export function reparent(state: EditorState, id: number, newParent: number): void {
  const node = state.nodes.get(id);
  if (!node) throw new Error(`no node ${id}`);
  if (node.parent === null) throw new Error("cannot re-parent the root");
  if (!state.nodes.has(newParent)) throw new Error(`no node ${newParent}`);
  if (subtreeIds(state, id).has(newParent)) {
    throw new Error("cannot re-parent into the node's own subtree");
  }
  node.parent = newParent;
}

export function cycleKind(state: EditorState, id: number): Kind {
  const node = state.nodes.get(id);
  if (!node) throw new Error(`no node ${id}`);
  const order: Kind[] = ["d", "e", "p"];
  node.kind = order[(order.indexOf(node.kind) + 1) % order.length];
  if (node.kind !== "p") node.constant = null;
  if (node.kind === "e") state.head = state.head.filter((h) => h !== id);
  return node.kind;
}

export function setConstant(state: EditorState, id: number, value: string | null): void {
  const node = state.nodes.get(id);
  if (!node) throw new Error(`no node ${id}`);
  if (node.kind !== "p") throw new Error("only parameters take constants");
  node.constant = value && value.trim() ? value.trim() : null;
}

export function toggleHead(state: EditorState, id: number): void {
  const node = state.nodes.get(id);
  if (!node) throw new Error(`no node ${id}`);
  if (node.kind === "e") throw new Error("existential nodes cannot be head entries");
  if (state.head.includes(id)) {
    state.head = state.head.filter((h) => h !== id);
  } else {
    state.head = [...state.head, id];
  }
}

export function preorder(state: EditorState): EditorNode[] {
  const out: EditorNode[] = [];
  const visit = (node: EditorNode) => {
    out.push(node);
    for (const child of childrenOf(state, node.id)) visit(child);
  };
  visit(rootOf(state));
  return out;
}

export function nodeNames(state: EditorState): Map<number, string> {
  const names = new Map<number, string>();
  preorder(state).forEach((node, i) => names.set(node.id, `x${i + 1}`));
  return names;
}

export function toPatternText(state: EditorState): string {
  const names = nodeNames(state);
  const fmt = (node: EditorNode): string => {
    let kind: string = node.kind;
    if (node.kind === "p" && node.constant !== null) kind = `p=${node.constant}`;
    const inner = childrenOf(state, node.id)
      .map((c) => " " + fmt(c))
      .join("");
    return `(${names.get(node.id)}:${kind}${inner})`;
  };
  return fmt(rootOf(state));
}

// Head line for rule mining: the picked entries, or the pure head (every
// distinguished node in preorder) when nothing is picked. Distinguished
// nodes missing from a manual pick are appended so the query stays valid;
// the server purifies anyway and reports the purified head back.
export function toQueryText(state: EditorState): string {
  const names = nodeNames(state);
  const order = preorder(state);
  const picked = state.head.filter((id) => state.nodes.has(id));
  const entries: number[] = [...picked];
  for (const node of order) {
    if (node.kind === "d" && !entries.includes(node.id)) entries.push(node.id);
  }
  const head = entries.map((id) => names.get(id)).join(",");
  return `${head}\n${toPatternText(state)}`;
}

// Load a server-side pattern (canonical preorder node list) into the editor.
export function fromApiNodes(nodes: ApiNode[]): EditorState {
  const state = newEditor();
  state.nodes.clear();
  const stack: number[] = [];
  nodes.forEach((node, i) => {
    stack.length = node.depth;
    const parent = node.depth === 0 ? null : stack[node.depth - 1];
    state.nodes.set(i, { id: i, parent, kind: node.kind, constant: null });
    stack.push(i);
  });
  state.nextId = nodes.length;
  return state;
}

export interface ValidationIssue {
  nodeId: number;
  message: string;
}

// Constants unknown to the graph dictionary are legal but always yield an
// empty result; surface them as warnings before submitting.
export function unknownConstantWarnings(
  state: EditorState,
  known: (c: string) => boolean,
): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  for (const node of state.nodes.values()) {
    if (node.kind === "p" && node.constant !== null && !known(node.constant)) {
      issues.push({
        nodeId: node.id,
        message: `constant "${node.constant}" does not occur in the graph`,
      });
    }
  }
  return issues;
}
