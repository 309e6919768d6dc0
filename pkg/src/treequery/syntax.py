"""Text syntax for tree queries and patterns.

Body: nested s-expression, one node per parenthesized group::

    node := "(" name ":" kind node* ")"      kind in { d, e, p, p=CONST }

Head (for queries): a first line of comma-separated node names; repeats
allowed, parameter names allowed.  Example::

    x1,x3,x4
    (x1:d (x2:p) (x3:d) (x4:d))

Node ids are assigned by preorder position in the body.
"""

from __future__ import annotations

from dataclasses import dataclass

from .patterns import TreePattern, TreeQuery


class QuerySyntaxError(ValueError):
    """Parse failure; ``pos`` is the character offset into the body text."""

    def __init__(self, pos: int, message: str):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


@dataclass(frozen=True)
class ParsedPattern:
    pattern: TreePattern
    names: tuple[str, ...]
    fixed: dict[int, str]  # parameter node id -> constant, for partial instantiation

    def name_to_node(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}


@dataclass(frozen=True)
class ParsedQuery:
    query: TreeQuery
    names: tuple[str, ...]
    fixed: dict[int, str]


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise QuerySyntaxError(self.pos, f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def token(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace() \
                and self.text[self.pos] not in "():":
            self.pos += 1
        if self.pos == start:
            raise QuerySyntaxError(start, "expected a name")
        return self.text[start:self.pos]


def parse_pattern(text: str) -> ParsedPattern:
    sc = _Scanner(text)
    levels: list[int] = []
    names: list[str] = []
    kinds: list[str] = []
    fixed: dict[int, str] = {}

    def parse_node(depth: int) -> None:
        sc.expect("(")
        name_pos = sc.pos
        name = sc.token()
        sc.expect(":")
        kind_pos = sc.pos
        kind = sc.token()
        const = None
        if kind.startswith("p=") and len(kind) > 2:
            const = kind[2:]
            kind = "p"
        if kind not in ("d", "e", "p"):
            raise QuerySyntaxError(kind_pos, f"unknown kind {kind!r}")
        if name in names:
            raise QuerySyntaxError(name_pos, f"duplicate node name {name!r}")
        node = len(names)
        names.append(name)
        levels.append(depth)
        kinds.append(kind)
        if const is not None:
            fixed[node] = const
        while sc.peek() == "(":
            parse_node(depth + 1)
        sc.expect(")")

    parse_node(0)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise QuerySyntaxError(sc.pos, "trailing input after pattern")
    pattern = TreePattern(
        tuple(levels),
        frozenset(i for i, k in enumerate(kinds) if k == "e"),
        frozenset(i for i, k in enumerate(kinds) if k == "p"),
    )
    return ParsedPattern(pattern, tuple(names), fixed)


def parse_query(text: str) -> ParsedQuery:
    """Parse a head line followed by a body pattern."""
    stripped = text.lstrip()
    if stripped.startswith("("):
        raise QuerySyntaxError(0, "missing head line before the body")
    head_line, _, body_text = text.partition("\n")
    parsed = parse_pattern(body_text)
    by_name = parsed.name_to_node()
    head: list[int] = []
    for entry in head_line.split(","):
        name = entry.strip()
        if name not in by_name:
            raise QuerySyntaxError(0, f"head names unknown node {name!r}")
        head.append(by_name[name])
    try:
        query = TreeQuery(tuple(head), parsed.pattern)
    except ValueError as exc:
        raise QuerySyntaxError(0, str(exc)) from None
    return ParsedQuery(query, parsed.names, parsed.fixed)


def format_pattern(p: TreePattern, names: tuple[str, ...] | None = None,
                   fixed: dict[int, str] | None = None) -> str:
    names = names or p.node_names()
    fixed = fixed or {}

    def fmt(v: int) -> str:
        kind = p.kind(v)
        if v in fixed:
            kind = f"p={fixed[v]}"
        inner = "".join(" " + fmt(c) for c in p.children[v])
        return f"({names[v]}:{kind}{inner})"

    return fmt(0)


def format_query(q: TreeQuery, names: tuple[str, ...] | None = None) -> str:
    names = names or q.body.node_names()
    head = ",".join(names[h] for h in q.head)
    return f"{head}\n{format_pattern(q.body, names)}"
