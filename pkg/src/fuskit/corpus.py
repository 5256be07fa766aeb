"""The example corpus: entry schema, loader, and the shipped data set."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import ParseError
from .fusion import FusionSystem, fusion_from_group, fusion_generated
from .permgroup import Group
from .serialization import _seed_from_dict, load_group, load_json


@dataclass
class CorpusEntry:
    """One corpus item: a group, the primes to test, and shipped extras.

    Every expected value carries a provenance marker ('derived-oracle' or
    'paper') stamped by the bootstrap tool.
    """

    name: str
    path: Path
    group_path: Path
    primes: list[int]
    models: dict[int, Path] = field(default_factory=dict)
    generated_systems: list[dict] = field(default_factory=list)
    named_subgroups: dict[str, list[list[int]]] = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    def load_group(self, cap: Optional[int] = None) -> Group:
        return load_group(self.group_path, cap=cap)

    def load_model(self, p: int, cap: Optional[int] = None) -> Optional[Group]:
        path = self.models.get(p)
        return load_group(path, cap=cap) if path else None


def shipped_corpus_dir() -> Path:
    """Location of the corpus distributed with the package."""
    return Path(str(resources.files("fuskit") / "data" / "corpus"))


def builtin_group(name: str) -> Group:
    """Resolve a bare group name against the shipped corpus."""
    path = shipped_corpus_dir() / "groups" / f"{name}.json"
    if not path.exists():
        raise ParseError(f"no built-in group named {name!r}")
    return load_group(path)


def entry_from_dict(d: dict, path: Path) -> CorpusEntry:
    if not isinstance(d, dict) or "name" not in d or "group" not in d:
        raise ParseError(f"{path}: corpus entry needs 'name' and 'group'")
    base = path.parent
    models = {int(p): base / rel for p, rel in d.get("models", {}).items()}
    return CorpusEntry(
        name=str(d["name"]),
        path=path,
        group_path=base / d["group"],
        primes=[int(p) for p in d.get("primes", [])],
        models=models,
        generated_systems=list(d.get("generated_systems", [])),
        named_subgroups=dict(d.get("named_subgroups", {})),
        expected=dict(d.get("expected", {})),
    )


def load_corpus(corpus_dir) -> list[CorpusEntry]:
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise ParseError(f"{corpus_dir} is not a directory")
    entries = []
    for path in sorted(corpus_dir.glob("*.json")):
        entries.append(entry_from_dict(load_json(path), path))
    entries.sort(key=lambda e: e.name)
    return entries


@dataclass
class SystemRecord:
    """A materialized fusion system from a corpus entry."""

    entry: CorpusEntry
    p: int
    label: str          # 'conj' for conjugation fusion, else the generated label
    group: Group        # ambient group
    system: FusionSystem

    @property
    def key(self) -> str:
        suffix = "" if self.label == "conj" else f":{self.label}"
        return f"{self.entry.name}@p{self.p}{suffix}"


def corpus_systems(entries: list[CorpusEntry], cap: Optional[int] = None) -> list[SystemRecord]:
    """Build every system an entry asks for, deterministically ordered."""
    records = []
    groups: dict[Path, Group] = {}
    for entry in entries:
        if entry.group_path not in groups:
            groups[entry.group_path] = entry.load_group(cap=cap)
        G = groups[entry.group_path]
        for p in entry.primes:
            records.append(SystemRecord(entry, p, "conj", G, fusion_from_group(G, p, cap=cap)))
        for gen in entry.generated_systems:
            p = int(gen["p"])
            seeds = [_seed_from_dict(G, s) for s in gen.get("seed_morphisms", [])]
            label = str(gen.get("label", "generated"))
            records.append(SystemRecord(entry, p, label, G, fusion_generated(G, p, seeds)))
    records.sort(key=lambda r: r.key)
    return records
