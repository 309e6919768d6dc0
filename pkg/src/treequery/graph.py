"""Immutable directed data graph with interned node constants.

Node constants are arbitrary non-whitespace strings; internally every node
is a dense integer id (``NodeId``).  All engine code works on ids, all
external I/O uses the original strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

NodeId = int


class GraphParseError(ValueError):
    """Raised for malformed edge-list input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownNodeError(LookupError):
    pass


@dataclass(frozen=True)
class DataGraph:
    """A set of directed edges over interned constants.

    ``constants[i]`` is the string for NodeId ``i``; ids are assigned in
    first-appearance order of the input.  Adjacency lists are sorted and
    duplicate edges collapse (set semantics).  Self-loops are kept.
    """

    constants: tuple[str, ...]
    edges: frozenset[tuple[NodeId, NodeId]]
    out_adj: tuple[tuple[NodeId, ...], ...] = field(repr=False)
    in_adj: tuple[tuple[NodeId, ...], ...] = field(repr=False)
    index: dict[str, NodeId] = field(repr=False, hash=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return len(self.constants)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(len(self.constants))

    def node_id(self, constant: str) -> NodeId | None:
        return self.index.get(constant)

    def constant(self, v: NodeId) -> str:
        return self.constants[v]

    def _check(self, v: NodeId) -> None:
        if not 0 <= v < len(self.constants):
            raise UnknownNodeError(f"unknown node id {v}")

    def out_neighbors(self, v: NodeId) -> tuple[NodeId, ...]:
        self._check(v)
        return self.out_adj[v]

    def in_neighbors(self, v: NodeId) -> tuple[NodeId, ...]:
        self._check(v)
        return self.in_adj[v]

    def to_text(self) -> str:
        """Canonical edge-list form: one `SRC DST` per line, sorted by strings."""
        lines = sorted(f"{self.constants[u]} {self.constants[v]}" for u, v in self.edges)
        return "\n".join(lines) + ("\n" if lines else "")


def load_graph(text: str) -> DataGraph:
    """Parse an edge-list document (`SRC DST` per line, `#` comments, blanks ok)."""
    index: dict[str, NodeId] = {}
    constants: list[str] = []

    def intern(tok: str) -> NodeId:
        nid = index.get(tok)
        if nid is None:
            nid = len(constants)
            index[tok] = nid
            constants.append(tok)
        return nid

    edges: set[tuple[NodeId, NodeId]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise GraphParseError(line_no, f"expected 2 tokens, got {len(toks)}: {raw!r}")
        edges.add((intern(toks[0]), intern(toks[1])))

    n = len(constants)
    out_adj: list[list[NodeId]] = [[] for _ in range(n)]
    in_adj: list[list[NodeId]] = [[] for _ in range(n)]
    for u, v in edges:
        out_adj[u].append(v)
        in_adj[v].append(u)
    return DataGraph(
        constants=tuple(constants),
        edges=frozenset(edges),
        out_adj=tuple(tuple(sorted(a)) for a in out_adj),
        in_adj=tuple(tuple(sorted(a)) for a in in_adj),
        index=index,
    )


def out_neighbors(g: DataGraph, v: NodeId) -> list[NodeId]:
    return list(g.out_neighbors(v))


def in_neighbors(g: DataGraph, v: NodeId) -> list[NodeId]:
    return list(g.in_neighbors(v))
