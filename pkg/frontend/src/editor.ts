// DOM renderer for the pattern editor: nested node cards with kind
// toggles, constant inputs, add/remove/re-parent and head selection.

import {
  EditorState,
  addChild,
  childrenOf,
  cycleKind,
  nodeNames,
  removeNode,
  reparent,
  rootOf,
  setConstant,
  toggleHead,
} from "./model.js";

export interface EditorCallbacks {
  onChange(): void;
  warningFor(nodeId: number): string | null;
}

const KIND_LABEL: Record<string, string> = {
  d: "distinguished",
  e: "existential",
  p: "parameter",
};

export function renderEditor(
  container: HTMLElement,
  state: EditorState,
  callbacks: EditorCallbacks,
): void {
  container.textContent = "";
  container.appendChild(renderNode(state, rootOf(state).id, callbacks));
}

function renderNode(
  state: EditorState,
  id: number,
  callbacks: EditorCallbacks,
): HTMLElement {
  const node = state.nodes.get(id)!;
  const names = nodeNames(state);
  const box = document.createElement("div");
  box.className = `node kind-${node.kind}`;

  const row = document.createElement("div");
  row.className = "node-row";

  const label = document.createElement("span");
  label.className = "node-name";
  label.textContent = names.get(id) ?? `#${id}`;
  row.appendChild(label);

  const kindBtn = document.createElement("button");
  kindBtn.className = "kind-btn";
  kindBtn.textContent = node.kind;
  kindBtn.title = `${KIND_LABEL[node.kind]} - click to cycle d → e → p`;
  kindBtn.onclick = () => {
    cycleKind(state, id);
    callbacks.onChange();
  };
  row.appendChild(kindBtn);

  if (node.kind === "p") {
    const constInput = document.createElement("input");
    constInput.className = "const-input";
    constInput.placeholder = "constant (optional)";
    constInput.value = node.constant ?? "";
    constInput.onchange = () => {
      setConstant(state, id, constInput.value);
      callbacks.onChange();
    };
    row.appendChild(constInput);
  }

  if (node.kind !== "e") {
    const headBtn = document.createElement("button");
    headBtn.className = state.head.includes(id) ? "head-btn on" : "head-btn";
    headBtn.textContent = "head";
    headBtn.title = "toggle this node as an lhs head entry";
    headBtn.onclick = () => {
      toggleHead(state, id);
      callbacks.onChange();
    };
    row.appendChild(headBtn);
  }

  const addBtn = document.createElement("button");
  addBtn.textContent = "+child";
  addBtn.onclick = () => {
    addChild(state, id);
    callbacks.onChange();
  };
  row.appendChild(addBtn);

  if (node.parent !== null) {
    const delBtn = document.createElement("button");
    delBtn.textContent = "×";
    delBtn.title = "remove this subtree";
    delBtn.onclick = () => {
      removeNode(state, id);
      callbacks.onChange();
    };
    row.appendChild(delBtn);

    const upBtn = document.createElement("button");
    upBtn.textContent = "↑";
    upBtn.title = "re-parent one level up";
    upBtn.onclick = () => {
      const parent = state.nodes.get(node.parent!)!;
      if (parent.parent !== null) {
        reparent(state, id, parent.parent);
        callbacks.onChange();
      }
    };
    row.appendChild(upBtn);
  }

  const warning = callbacks.warningFor(id);
  if (warning) {
    const warn = document.createElement("span");
    warn.className = "warning";
    warn.textContent = `⚠ ${warning}`;
    row.appendChild(warn);
  }

  box.appendChild(row);
  const kids = document.createElement("div");
  kids.className = "children";
  for (const child of childrenOf(state, id)) {
    kids.appendChild(renderNode(state, child.id, callbacks));
  }
  box.appendChild(kids);
  return box;
}
