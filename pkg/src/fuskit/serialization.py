"""JSON formats for groups, fusion-system specs, and computed systems.

All output is canonical (sorted keys, fixed separators) so repeated runs are
byte-identical, and parse(serialize(x)) round-trips exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Optional, Union

from . import permgroup as pg
from .errors import FuskitError, NotAPermutation, ParseError, ValidationError
from .fusion import (
    FusionSystem,
    PreFusionSystem,
    fusion_from_group,
    fusion_generated,
    validate_hom,
)
from .permgroup import Group, GroupHom, Subgroup

GroupResolver = Callable[[str], Group]


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _require(cond: bool, msg: str):
    if not cond:
        raise ParseError(msg)


# -- groups -------------------------------------------------------------------

def group_to_dict(G: Group) -> dict:
    return {
        "name": G.name,
        "degree": G.degree,
        "generators": [list(p.images) for p in G.generators],
    }


def group_from_dict(d: dict, cap: Optional[int] = None) -> Group:
    _require(isinstance(d, dict), "group document must be an object")
    for fld in ("name", "degree", "generators"):
        _require(fld in d, f"group document is missing field {fld!r}")
    _require(isinstance(d["degree"], int) and d["degree"] >= 1,
             "field 'degree' must be a positive integer")
    _require(isinstance(d["generators"], list), "field 'generators' must be a list")
    try:
        return pg.group_from_generators(d["degree"], d["generators"], str(d["name"]), cap=cap)
    except NotAPermutation as exc:
        raise ValidationError(f"bad generator in group {d['name']!r}: {exc}") from exc


def load_json(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc


def load_group(path: Union[str, Path], cap: Optional[int] = None) -> Group:
    return group_from_dict(load_json(path), cap=cap)


# -- fusion specs ---------------------------------------------------------------

def _resolve_group(ref, base_dir: Optional[Path], resolver: Optional[GroupResolver],
                   cap: Optional[int]) -> Group:
    if isinstance(ref, dict):
        return group_from_dict(ref, cap=cap)
    if isinstance(ref, str):
        if ref.endswith(".json"):
            path = Path(ref)
            if not path.is_absolute() and base_dir is not None:
                path = base_dir / path
            return load_group(path, cap=cap)
        if resolver is not None:
            return resolver(ref)
        raise ParseError(f"group reference {ref!r} needs a resolver or a .json path")
    raise ParseError("group reference must be an object or a string")


def _seed_from_dict(G: Group, d: dict) -> GroupHom:
    _require(isinstance(d, dict) and "domain_gens" in d and "images" in d,
             "seed morphism needs 'domain_gens' and 'images'")
    srcs = [G.index_of(pg.Perm.checked(img, G.degree)) for img in d["domain_gens"]]
    dsts = [G.index_of(pg.Perm.checked(img, G.degree)) for img in d["images"]]
    _require(len(srcs) == len(dsts), "seed morphism lists have unequal lengths")
    domain = G.subgroup_of(srcs)
    codomain = G.subgroup_of(dsts)
    return pg.hom_build(domain, codomain, list(zip(srcs, dsts)))


def fusion_spec_from_dict(d: dict, base_dir: Optional[Path] = None,
                          resolver: Optional[GroupResolver] = None,
                          cap: Optional[int] = None) -> FusionSystem:
    """Build a system from a spec document: conjugation fusion of an ambient
    group, or a generated system from seed morphisms on a p-group."""
    _require(isinstance(d, dict), "fusion spec must be an object")
    for fld in ("group", "p", "mode"):
        _require(fld in d, f"fusion spec is missing field {fld!r}")
    p = d["p"]
    _require(isinstance(p, int) and p >= 2, "field 'p' must be a prime")
    mode = d["mode"]
    if mode == "from-group":
        ref = d.get("ambient", d["group"])
        G = _resolve_group(ref, base_dir, resolver, cap)
        return fusion_from_group(G, p, cap=cap)
    if mode == "generated":
        G = _resolve_group(d["group"], base_dir, resolver, cap)
        seeds = [_seed_from_dict(G, s) for s in d.get("seed_morphisms", [])]
        return fusion_generated(G, p, seeds)
    raise ParseError(f"unknown fusion mode {mode!r}")


def load_fusion_spec(path: Union[str, Path], resolver: Optional[GroupResolver] = None,
                     cap: Optional[int] = None) -> FusionSystem:
    path = Path(path)
    return fusion_spec_from_dict(load_json(path), base_dir=path.parent,
                                 resolver=resolver, cap=cap)


# -- computed systems -------------------------------------------------------------

def system_to_dict(F: PreFusionSystem) -> dict:
    isos = []
    for (q, r), homs in F.table.items():
        for h in sorted(homs, key=pg.hom_key):
            isos.append({
                "domain": list(q.members),
                "codomain": list(r.members),
                "map": [list(pair) for pair in h.pairs],
            })
    return {
        "format": "fusion-system",
        "version": 1,
        "kind": F.kind,
        "p": F.p,
        "provenance": F.provenance,
        "ambient": group_to_dict(F.parent),
        "carrier": list(F.carrier.members),
        "isos": isos,
    }


def system_from_dict(d: dict, cap: Optional[int] = None) -> PreFusionSystem:
    _require(isinstance(d, dict) and d.get("format") == "fusion-system",
             "not a fusion-system document")
    _require(d.get("version") == 1, "unsupported fusion-system version")
    G = group_from_dict(d["ambient"], cap=cap)
    carrier = Subgroup(G, _member_mask(G, d["carrier"]))
    table: dict = {}
    for iso in d["isos"]:
        dom = Subgroup(G, _member_mask(G, iso["domain"]))
        cod = Subgroup(G, _member_mask(G, iso["codomain"]))
        h = GroupHom(dom, cod, ((int(a), int(b)) for a, b in iso["map"]))
        try:
            validate_hom(h)
        except FuskitError as exc:
            raise ValidationError(f"invalid stored morphism: {exc}") from exc
        if h.image_mask != cod.mask:
            raise ValidationError("stored morphism is not onto its codomain")
        table.setdefault((dom, cod), set()).add(h)
    cls = FusionSystem if d.get("kind", "fusion") == "fusion" else PreFusionSystem
    return cls(carrier, int(d["p"]), table, provenance=str(d.get("provenance", "parsed")))


def _member_mask(G: Group, ids) -> int:
    mask = 0
    for i in ids:
        i = int(i)
        if not 0 <= i < G.order:
            raise ValidationError(f"element id {i} out of range for {G.name}")
        mask |= 1 << i
    return mask


def dump_system(F: PreFusionSystem) -> str:
    return canonical_json(system_to_dict(F))


def load_system_or_spec(path: Union[str, Path], resolver: Optional[GroupResolver] = None,
                        cap: Optional[int] = None) -> PreFusionSystem:
    """Load a serialized computed system, a build spec, or the wrapped output
    of the quotient subcommand."""
    path = Path(path)
    d = load_json(path)
    if isinstance(d.get("system"), dict) and d["system"].get("format") == "fusion-system":
        d = d["system"]
    if d.get("format") == "fusion-system":
        return system_from_dict(d, cap=cap)
    return fusion_spec_from_dict(d, base_dir=path.parent, resolver=resolver, cap=cap)
