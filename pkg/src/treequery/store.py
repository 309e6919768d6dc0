"""Persistent pattern database: one frequency table per canonical pattern.

On disk: ``manifest.json`` plus one TSV per entry, keyed and sorted by the
pattern's canonical refined level sequence.  TSV columns are parameter
node names in canonical preorder plus ``freq``; values are the original
constant strings, so a store loads without the graph.  Two saves of equal
stores are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .graph import DataGraph
from .patterns import PatternIso, TreePattern, canonize, refined_level_sequence

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fingerprint_graph(g: DataGraph) -> str:
    """64-bit FNV-1a over the sorted edge-list text, as 16 hex digits."""
    h = FNV_OFFSET
    for byte in g.to_text().encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


class StoreError(RuntimeError):
    pass


class StoreStaleError(StoreError):
    """The store was mined from a different graph."""


class StoreFormatError(StoreError):
    """A manifest or table file is corrupt or violates store invariants."""


@dataclass(frozen=True)
class FrequencyTable:
    """Frequent instantiations of one pattern: assignment -> support count."""

    pattern_key: str
    sigma_columns: tuple[int, ...]
    entries: dict[tuple[str, ...], int]

    def __post_init__(self):
        for key in self.entries:
            if len(key) != len(self.sigma_columns):
                raise ValueError("assignment arity does not match sigma columns")

    @property
    def frequent(self) -> bool:
        return bool(self.entries)


@dataclass(frozen=True)
class StoreEntry:
    pattern: TreePattern
    table: FrequencyTable


@dataclass
class PatternStore:
    graph_fp: str
    minsup: int
    max_nodes: int
    entries: dict[str, StoreEntry] = field(default_factory=dict)

    @property
    def tables(self) -> dict[str, FrequencyTable]:
        return {key: e.table for key, e in self.entries.items()}

    def add(self, pattern: TreePattern, table: FrequencyTable) -> None:
        key = refined_level_sequence(pattern)
        if table.pattern_key != key:
            raise StoreFormatError(f"table key {table.pattern_key} != pattern key {key}")
        self.entries[key] = StoreEntry(pattern, table)

    def lookup(self, pattern: TreePattern) -> tuple[FrequencyTable, PatternIso] | None:
        """Canonize, fetch, and rename table columns to the caller's node ids."""
        canonical, iso = canonize(pattern)
        entry = self.entries.get(refined_level_sequence(canonical))
        if entry is None:
            return None
        table = entry.table
        mapped = [iso[c] for c in table.sigma_columns]
        order = sorted(range(len(mapped)), key=lambda i: mapped[i])
        renamed = FrequencyTable(
            table.pattern_key,
            tuple(mapped[i] for i in order),
            {tuple(k[i] for i in order): v for k, v in table.entries.items()},
        )
        return renamed, iso

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        manifest_entries = []
        for idx, key in enumerate(sorted(self.entries)):
            entry = self.entries[key]
            file_name = f"{idx:03d}.tsv"
            names = entry.pattern.node_names()
            header = [names[c] for c in entry.table.sigma_columns] + ["freq"]
            lines = [
                "\t".join(row + (str(entry.table.entries[row]),))
                for row in sorted(entry.table.entries)
            ]
            (directory / file_name).write_text(
                "\n".join(["\t".join(header)] + lines) + "\n", encoding="utf-8"
            )
            manifest_entries.append({
                "key": key,
                "file": file_name,
                "tree": ",".join(str(d) for d in entry.pattern.levels),
                "pi": sorted(entry.pattern.pi),
                "sigma": sorted(entry.pattern.sigma),
            })
        manifest = {
            "graph_fp": self.graph_fp,
            "minsup": self.minsup,
            "max_nodes": self.max_nodes,
            "entries": manifest_entries,
        }
        (directory / "manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, directory: str | Path,
             expect_graph_fp: str | None = None) -> "PatternStore":
        directory = Path(directory)
        manifest_path = directory / "manifest.json"
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise StoreFormatError(f"missing manifest: {manifest_path}") from None
        except json.JSONDecodeError as exc:
            raise StoreFormatError(f"corrupt manifest {manifest_path}: {exc}") from None
        try:
            store = cls(manifest["graph_fp"], int(manifest["minsup"]),
                        int(manifest["max_nodes"]))
            raw_entries = manifest["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise StoreFormatError(f"malformed manifest {manifest_path}: {exc}") from None
        if expect_graph_fp is not None and store.graph_fp != expect_graph_fp:
            raise StoreStaleError(
                f"store fingerprint {store.graph_fp} does not match graph {expect_graph_fp}"
            )
        for raw in raw_entries:
            pattern = TreePattern(
                tuple(int(t) for t in raw["tree"].split(",")),
                frozenset(raw["pi"]),
                frozenset(raw["sigma"]),
            )
            key = refined_level_sequence(pattern)
            if key != raw["key"]:
                raise StoreFormatError(
                    f"manifest key {raw['key']} does not match pattern (file {raw['file']})"
                )
            table = _read_tsv(directory / raw["file"], pattern, key, store.minsup)
            store.entries[key] = StoreEntry(pattern, table)
        return store


def _read_tsv(path: Path, pattern: TreePattern, key: str, minsup: int) -> FrequencyTable:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise StoreFormatError(f"missing table file {path}") from None
    lines = text.splitlines()
    if not lines:
        raise StoreFormatError(f"empty table file {path}")
    sigma = pattern.sigma_sorted()
    names = pattern.node_names()
    expected_header = [names[c] for c in sigma] + ["freq"]
    if lines[0].split("\t") != expected_header:
        raise StoreFormatError(f"bad header in {path}: {lines[0]!r}")
    entries: dict[tuple[str, ...], int] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != len(sigma) + 1:
            raise StoreFormatError(f"bad row in {path} line {line_no}: {line!r}")
        try:
            count = int(cells[-1])
        except ValueError:
            raise StoreFormatError(
                f"non-integer count in {path} line {line_no}: {cells[-1]!r}"
            ) from None
        if count < minsup:
            raise StoreFormatError(
                f"count {count} below minsup {minsup} in {path} line {line_no}"
            )
        entries[tuple(cells[:-1])] = count
    return FrequencyTable(key, sigma, entries)
