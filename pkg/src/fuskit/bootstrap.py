"""Stamp oracle-computed expected values into corpus entry files.

Usage: python -m fuskit.bootstrap [CORPUS_DIR]

Every stamped leaf is {"value": ..., "provenance": "derived-oracle"}; leaves
with any other provenance (hand-entered reference facts) are left untouched.
Values come from the brute-force oracle implementations, so the verification
harness later compares two independent computation routes.
"""

from __future__ import annotations

import sys
from pathlib import Path

from . import oracles
from .corpus import corpus_systems, load_corpus, shipped_corpus_dir
from .fusion import is_saturated
from .serialization import canonical_json, load_json

SUBGROUP_COUNT_LIMIT = 100


def _leaf(value) -> dict:
    return {"value": value, "provenance": "derived-oracle"}


def stamp_entry(entry, records) -> dict:
    doc = load_json(entry.path)
    expected = dict(doc.get("expected", {}))

    def put(key, value):
        old = expected.get(key)
        if isinstance(old, dict) and old.get("provenance") not in (None, "derived-oracle"):
            return
        expected[key] = _leaf(value)

    group = entry.load_group()
    put("order", group.order)
    if group.order <= SUBGROUP_COUNT_LIMIT:
        put("subgroup_count", oracles.brute_subgroup_count(group))
    for rec in records:
        if rec.entry.name != entry.name:
            continue
        block_key = f"p{rec.p}" if rec.label == "conj" else f"p{rec.p}:{rec.label}"
        block = dict(expected.get(block_key, {}))

        def bput(key, value, block=block):
            old = block.get(key)
            if isinstance(old, dict) and old.get("provenance") not in (None, "derived-oracle"):
                return
            block[key] = _leaf(value)

        F = rec.system
        bput("sylow_order", F.carrier.order)
        saturated = is_saturated(F)
        bput("saturated", saturated)
        if saturated:
            bput("op_order", oracles.oracle_o_p(F).order)
            tower, soluble, length = oracles.oracle_tower(F)
            bput("tower_orders", [s.order for s in tower])
            bput("p_soluble", soluble)
            bput("p_length", length)
            bput("constrained", oracles.oracle_constrained(F))
        expected[block_key] = block
    doc["expected"] = expected
    return doc


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    corpus_dir = Path(argv[0]) if argv else shipped_corpus_dir()
    entries = load_corpus(corpus_dir)
    records = corpus_systems(entries)
    for entry in entries:
        doc = stamp_entry(entry, records)
        entry.path.write_text(canonical_json(doc))
        print(f"stamped {entry.path.name}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
