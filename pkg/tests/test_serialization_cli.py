import json
import subprocess
import sys

import pytest

from fuskit import cli
from fuskit import fusion as fz
from fuskit import permgroup as pg
from fuskit import serialization as ser
from fuskit.corpus import builtin_group, load_corpus, shipped_corpus_dir
from fuskit.errors import OrderCapExceeded, ParseError, ValidationError

CORPUS = shipped_corpus_dir()


# -- round trips ------------------------------------------------------------------

def test_group_round_trip(groups):
    for name, G in groups.items():
        doc = ser.group_to_dict(G)
        again = ser.group_from_dict(doc)
        assert again == G
        assert ser.canonical_json(ser.group_to_dict(again)) == ser.canonical_json(doc)


def test_system_round_trip(s4_system, e16_seeded):
    for F in (s4_system, e16_seeded):
        doc = ser.system_to_dict(F)
        again = ser.system_from_dict(doc)
        assert fz.same_system(again, F)
        assert ser.dump_system(again) == ser.canonical_json(doc)


def test_bar_system_round_trip(e16_seeded):
    from fuskit import quotients as qt
    G = e16_seeded.parent
    line = G.subgroup_of([G.index_of(G.generators[0])])
    bar = qt.bar_system(e16_seeded, line)
    again = ser.system_from_dict(ser.system_to_dict(bar))
    assert type(again).kind == "prefusion" or again.kind == "prefusion"
    assert fz.same_system(again, bar)


def test_fusion_spec_round_trip(tmp_path, groups):
    spec = {"group": "e16", "p": 2, "mode": "generated",
            "seed_morphisms": json.loads(
                (CORPUS / "e16.json").read_text())["generated_systems"][0]["seed_morphisms"]}
    path = tmp_path / "spec.json"
    path.write_text(ser.canonical_json(spec))
    F = ser.load_fusion_spec(path, resolver=builtin_group)
    assert not fz.is_saturated(F)
    assert F.iso_count() == 71


def test_fusion_spec_ambient_key(tmp_path):
    # 'ambient' names the big group; the carrier is its Sylow subgroup
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(
        {"group": "d8", "ambient": "s4", "p": 2, "mode": "from-group"}))
    F = ser.load_fusion_spec(spec, resolver=builtin_group)
    assert F.parent.order == 24 and F.carrier.order == 8


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        ser.load_group(bad)
    dup = tmp_path / "dup.json"
    dup.write_text(json.dumps({"name": "x", "degree": 3, "generators": [[0, 0, 1]]}))
    with pytest.raises(ParseError):   # ValidationError is a ParseError
        ser.load_group(dup)
    with pytest.raises(ValidationError):
        ser.load_group(dup)
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"degree": 3}))
    with pytest.raises(ParseError):
        ser.load_group(missing)


def test_corpus_loads():
    entries = load_corpus(CORPUS)
    names = [e.name for e in entries]
    for required in ("c2", "c3", "d8", "q8", "c4xc2", "e16", "d8xc2",
                     "s4", "a4", "sl23", "a6", "qd2", "qd3", "s3"):
        assert required in names
    for e in entries:
        for key, val in e.expected.items():
            block = val if isinstance(val, dict) and "value" not in val else {key: val}
            for leaf in block.values():
                assert leaf.get("provenance") in ("derived-oracle", "paper")


# -- order cap -----------------------------------------------------------------------

def test_env_order_cap(monkeypatch):
    monkeypatch.setenv("FUSKIT_ORDER_CAP", "100")
    doc = json.loads((CORPUS / "groups" / "a6.json").read_text())
    with pytest.raises(OrderCapExceeded):
        ser.group_from_dict(doc)
    monkeypatch.delenv("FUSKIT_ORDER_CAP")
    assert ser.group_from_dict(doc).order == 360


# -- CLI ------------------------------------------------------------------------------

def run_cli(*argv):
    return cli.main(list(argv))


def test_cli_group_info(capsys):
    assert run_cli("group", "info", str(CORPUS / "groups" / "d8.json")) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["order"] == 8 and out["subgroup_count"] == 10


def test_cli_build_and_check(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"group": "s4", "p": 2, "mode": "from-group"}))
    out_path = tmp_path / "sys.json"
    assert run_cli("fusion", "build", str(spec), "-o", str(out_path)) == 0
    capsys.readouterr()
    assert run_cli("fusion", "check", str(out_path), "--saturated", "--op",
                   "--psoluble", "--constrained", "--thompson") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["saturated"] is True
    assert out["op"]["order"] == 4
    assert out["psoluble"]["tower_orders"] == [1, 4, 8]
    assert out["constrained"] is True
    assert out["thompson_factorization"] is False


def test_cli_check_normal_flag(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"group": "s4", "p": 2, "mode": "from-group"}))
    f = fz.fusion_from_group(builtin_group("s4"), 2)
    v4 = pg.core_p(f.parent, 2)
    gens = [list(f.parent.elements[m].images) for m in v4.members if m]
    assert run_cli("fusion", "check", str(spec), "--normal", json.dumps(gens)) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["normal"] is True


def test_cli_check_closure(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"group": "d8", "p": 2, "mode": "from-group"}))
    assert run_cli("fusion", "check", str(spec), "--closure") == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["closure"]) == 10


def test_cli_quotient_modes(tmp_path, capsys):
    e16_entry = json.loads((CORPUS / "e16.json").read_text())
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "group": "e16", "p": 2, "mode": "generated",
        "seed_morphisms": e16_entry["generated_systems"][0]["seed_morphisms"]}))
    a_gens = json.dumps(e16_entry["named_subgroups"]["A"])
    assert run_cli("quotient", str(spec), "--by", a_gens, "--mode", "bar") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["closure"]["is_fusion"] is False
    assert out["closure"]["witness"]["kind"] == "missing-composite"
    assert run_cli("quotient", str(spec), "--by", a_gens, "--mode", "generated-bar") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["closure"]["is_fusion"] is True
    assert run_cli("quotient", str(spec), "--by", a_gens, "--mode", "factor") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["closure"]["is_fusion"] is True


def test_cli_quotient_output_feeds_back_into_check(tmp_path, capsys):
    e16_entry = json.loads((CORPUS / "e16.json").read_text())
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "group": "e16", "p": 2, "mode": "generated",
        "seed_morphisms": e16_entry["generated_systems"][0]["seed_morphisms"]}))
    a_gens = json.dumps(e16_entry["named_subgroups"]["A"])
    out_path = tmp_path / "bar.json"
    assert run_cli("quotient", str(spec), "--by", a_gens, "--mode", "bar",
                   "-o", str(out_path)) == 0
    capsys.readouterr()
    assert run_cli("fusion", "check", str(out_path)) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["kind"] == "prefusion" and out["is_fusion"] is False
    assert out["witness"] == "missing-composite"


def test_cli_quotient_usage_error(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"group": "s4", "p": 2, "mode": "from-group"}))
    # the centre of D8 is not strongly closed: usage error, exit 2
    z_gens = json.dumps([[2, 3, 0, 1]])
    assert run_cli("quotient", str(spec), "--by", z_gens, "--mode", "bar") == 2


def test_cli_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run_cli("group", "info", str(bad)) == 2


def test_cli_verify_single_theorem(capsys):
    assert run_cli("verify", "shipped", "--theorem", "core-over-centre") == 0
    out = capsys.readouterr().out
    assert "core-over-centre" in out and out.startswith("ok")


def test_full_text_report_matches_golden_file(capsys):
    from pathlib import Path
    golden = Path(__file__).parent / "data" / "verify_golden.txt"
    assert run_cli("verify", str(CORPUS)) == 0
    assert capsys.readouterr().out == golden.read_text()


def test_cli_verify_deterministic(capsys):
    assert run_cli("verify", str(CORPUS), "--theorem",
                   "example-sixteen-quotient", "--format", "json") == 0
    first = capsys.readouterr().out
    assert run_cli("verify", str(CORPUS), "--theorem",
                   "example-sixteen-quotient", "--format", "json") == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["version"] == 1 and doc["theorems"][0]["failures"] == []


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "fuskit.cli", "verify", str(CORPUS),
         "--theorem", "group-fusion-saturated"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "group-fusion-saturated: 18/18" in proc.stdout


def test_report_emit_empty():
    from fuskit.verify import VerificationReport, report_emit
    assert report_emit(VerificationReport("x", []), "json") == \
        b'{\n  "theorems": [],\n  "version": 1\n}\n'


def test_bootstrap_is_idempotent(tmp_path):
    import shutil
    from fuskit import bootstrap
    corpus = tmp_path / "corpus"
    shutil.copytree(CORPUS, corpus)
    before = {p.name: p.read_bytes() for p in sorted(corpus.glob("*.json"))}
    assert bootstrap.main([str(corpus)]) == 0
    after = {p.name: p.read_bytes() for p in sorted(corpus.glob("*.json"))}
    assert before == after


def test_verify_failure_carries_witness(tmp_path, capsys):
    # corrupt one stamped expected value: the failure must be reported with a
    # replayable witness and exit code 1
    import shutil
    corpus = tmp_path / "corpus"
    shutil.copytree(CORPUS, corpus)
    doc = json.loads((corpus / "d8.json").read_text())
    doc["expected"]["order"]["value"] = 9
    (corpus / "d8.json").write_text(json.dumps(doc))
    assert run_cli("verify", str(corpus), "--theorem", "expected-values",
                   "--format", "json") == 1
    out = json.loads(capsys.readouterr().out)
    failures = out["theorems"][0]["failures"]
    assert failures and failures[0]["instance"] == "d8/order"
    assert failures[0]["detail"] == {"expected": 9, "got": 8}
    assert "replay" in failures[0]
