import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from chi_forge import cli
from chi_forge.catalog import default_catalog_path
from chi_forge.metric import MetricGroup

CATALOG = default_catalog_path()


def call(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dual_a5(capsys):
    code, out, _ = call(capsys, "dual", "a5.json")
    assert code == 0 and out.strip() == "trivial"


def test_dual_abelianizations(capsys):
    assert call(capsys, "dual", "s3")[1].strip() == "Z/2"
    assert call(capsys, "dual", "q8")[1].strip() == "Z/2 x Z/2"


def test_modular_rep_s3(capsys):
    code, out, _ = call(capsys, "modular", "rep-s3")
    assert code == 0 and out.strip() == "SYMMETRIC, s-rank 1, not modular"


def test_modular_semion(capsys):
    code, out, _ = call(capsys, "modular", "semion")
    assert code == 0 and out.startswith("MODULAR")


def test_coboundary_none(capsys):
    code, out, _ = call(capsys, "alg", "coboundary", "trivial-action.json", "minus-one-cocycle.json")
    assert code == 1 and out.strip() == "NONE (routes a,b,c agree)"
    code, out, _ = call(capsys, "alg", "coboundary", "--routes", "a,b", "trivial-action.json",
                        "minus-one-cocycle.json")
    assert code == 1 and out.strip() == "NONE (routes a,b agree)"


def test_coboundary_found(capsys):
    code, out, _ = call(capsys, "alg", "coboundary", "c2-flip", "flip-minus-one")
    assert code == 0 and out.strip() == "COBOUNDARY t=diag(1,-1) (routes a,b,c agree)"


def test_ses_q8(capsys):
    code, out, _ = call(capsys, "ses", "group", "q8-center", "q8-center")
    assert code == 0 and "EXACT" in out


@pytest.mark.parametrize("argv", [
    ["chartable", "s3"], ["fusion", "a4"], ["restrict", "s4", "v4-in-s4"], ["deligne", "c2", "s3"],
    ["metric", "radical", "toric"], ["metric", "gauss", "semion"], ["metric", "isotropic", "toric"],
    ["metric", "condense", "toric", "1,0"], ["metric", "equivariantize", "toric", "1,0"],
    ["metric", "iso", "toric", "toric"], ["alg", "crossed", "pauli"], ["alg", "fixed", "m2-adz"],
    ["alg", "inner", "m2-adz"], ["alg", "charinv", "pauli"],
    ["alg", "cocycle-check", "c2-flip", "flip-minus-one"],
    ["alg", "bimodule", "c2-flip", "c2-sign"],
    ["alg", "braid-square", "c2-flip", "c2-sign", "c2-sign"],
])
def test_commands_succeed(capsys, argv):
    if argv[0] == "restrict":
        argv = ["restrict", "s4", '{"generators": [[1, 0, 3, 2], [2, 3, 0, 1]]}']
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    assert out.strip()
    code, out, err = call(capsys, "--format", "json", *argv)
    assert code == 0, err
    json.loads(out)


def test_negative_verdicts(capsys):
    assert call(capsys, "ring-iso", "rep-a5", "rep-a6")[0] == 1
    assert call(capsys, "ring-iso", "rep-d4", "rep-q8")[0] == 0
    assert call(capsys, "metric", "iso", "semion", "z2-3_4")[0] == 1
    assert call(capsys, "alg", "braid-square", "trivial-action", "c2-sign", "c2-sign")[0] == 1


def test_input_errors(capsys):
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "dual", "no-such-group")[0] == 2
    assert call(capsys, "dual", "{not json")[0] == 2
    assert call(capsys, "metric", "validate", '{"invariant_factors": [2], "q": {"0": "0"}}')[0] == 2
    code, _, err = call(capsys, "metric", "validate",
                        '{"invariant_factors": [2], "q": {"0": "0", "1": "1/3"}}')
    assert code == 2 and "witness ((1,), (1,), (1,))" in err
    assert call(capsys, "metric", "condense", "toric", "1,1")[0] == 2


def test_internal_fault_exit_code(capsys, monkeypatch):
    def broken(*a, **k):
        raise AssertionError("deliberate")
    monkeypatch.setattr(cli, "character_table", broken)
    code, _, err = call(capsys, "chartable", "s3")
    assert code == 3 and "internal fault" in err


def test_output_is_deterministic(capsys):
    for argv in (["chartable", "a5"], ["--format", "json", "chartable", "s4"],
                 ["metric", "isotropic", "double-toric"]):
        first = call(capsys, *argv)[1]
        assert call(capsys, *argv)[1] == first
        assert call(capsys, "--seed", "7", *argv)[1] == first


def test_fusion_json_round_trip(capsys, tmp_path):
    for name in ("d4", "q8"):
        code, out, _ = call(capsys, "--format", "json", "fusion", name)
        (tmp_path / f"{name}.json").write_text(out)
    code, out, _ = call(capsys, "ring-iso", str(tmp_path / "d4.json"), str(tmp_path / "q8.json"))
    assert code == 0 and out.startswith("ISOMORPHIC")


def test_metric_json_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, "--format", "json", "metric", "equivariantize", "toric", "1,0")
    data = json.loads(out)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(data["metric"]))
    code, out, _ = call(capsys, "metric", "iso", str(path), "toric")
    assert code == 0 and out.startswith("ISOMETRIC")
    MetricGroup.from_json(data["metric"])


def _copy_catalog(tmp_path):
    root = tmp_path / "cat"
    shutil.copytree(CATALOG, root)
    return root


def test_verify_all_selected_checks(capsys):
    code, out, _ = call(capsys, "verify-all", "--only", "4", "--only", "7")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_verify_all_empty_catalog(capsys, tmp_path):
    root = tmp_path / "empty"
    root.mkdir()
    (root / "index.json").write_text(json.dumps({"entries": []}))
    code, out, _ = call(capsys, "verify-all", "--catalog", str(root))
    assert code == 0 and "empty catalog" in out


def test_verify_all_missing_catalog(capsys, tmp_path):
    assert call(capsys, "verify-all", "--catalog", str(tmp_path / "nowhere"))[0] == 2


def test_verify_all_corrupted_metric(capsys, tmp_path):
    root = _copy_catalog(tmp_path)
    path = root / "metric" / "semion.json"
    data = json.loads(path.read_text())
    data["q"]["1"] = "1/3"
    path.write_text(json.dumps(data))
    code, _, err = call(capsys, "verify-all", "--catalog", str(root))
    assert code == 2 and "((1,), (1,), (1,))" in err


def test_catalog_env_override(capsys, tmp_path, monkeypatch):
    root = tmp_path / "small"
    (root / "groups").mkdir(parents=True)
    shutil.copy(CATALOG / "groups" / "c3.json", root / "groups" / "c3.json")
    (root / "index.json").write_text(json.dumps(
        {"entries": [{"name": "C3", "kind": "group", "path": "groups/c3.json"}]}))
    monkeypatch.setenv("CHI_FORGE_CATALOG", str(root))
    assert call(capsys, "dual", "c3")[1].strip() == "Z/3"
    assert call(capsys, "dual", "s3")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chi_forge.cli", "dual", "a5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "trivial"
