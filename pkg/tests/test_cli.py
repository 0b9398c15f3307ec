"""Report schema, exit codes and determinism of the command-line front end."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from drinfeld_eis import cli

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_golden(capsys):
    code, out, _ = run(["invariants", "--q", "2", "--deg-max", "2", "--r", "2"], capsys)
    assert code == 0
    assert out == (GOLDEN / "invariants_q2_deg2.json").read_text()
    genera = sorted(r["genus"] for r in json.loads(out)["result"]["rows"])
    assert genera == [0, 0, 4, 5, 5, 6]


def test_verify_subset_golden(capsys):
    argv = ["verify", "--q", "2", "--P", "48", "--suite", "cusp-count,curve-formulas,exp-recursion,t-monotone"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / "verify_subset_q2_P48.json").read_text()


def test_report_shape(capsys):
    code, out, _ = run(["smb", "--builtin", "rank3-cbrt"], capsys)
    report = json.loads(out)
    assert code == 0
    assert set(report) == {"schema", "schema_version", "command", "config", "status", "result"}
    assert report["schema_version"] == 1
    cfg = report["config"]
    for key in ("q", "ext_m", "ram_e", "P", "deg_cap", "seed", "frame"):
        assert key in cfg
    assert report["result"]["in_fundamental_domain"] is True


def test_smb_on_reduced_frame_is_identity(tmp_path, capsys):
    from drinfeld_eis.arithmetic import FqConfig
    from drinfeld_eis.lattice import builtin_frame
    path = tmp_path / "frame.json"
    path.write_text(json.dumps(builtin_frame("rank2-sqrt", FqConfig.from_q(2), 40).to_json()))
    code, out, _ = run(["smb", "--frame", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["result"]["certificate"]["change_of_basis"] == [[[1], []], [[], [1]]]


def test_frame_over_wrong_field_is_a_domain_error(tmp_path, capsys):
    from drinfeld_eis.arithmetic import FqConfig
    from drinfeld_eis.lattice import builtin_frame
    path = tmp_path / "frame.json"
    path.write_text(json.dumps(builtin_frame("rank2-sqrt", FqConfig.from_q(3), 40).to_json()))
    code, out, _ = run(["smb", "--q", "2", "--frame", str(path)], capsys)
    assert code == 3
    assert json.loads(out)["status"] == "domain-error"


@pytest.mark.parametrize("argv,code", [
    (["verify", "--no-such-flag"], 64),
    (["frobnicate"], 64),
    ([], 64),
    (["invariants", "--q", "6"], 3),
    (["eis", "--kind", "partial", "--level", "1"], 3),
    (["eis", "--kind", "partial", "--u", "1"], 3),
    (["verify", "--suite", "no-such-check"], 3),
    (["invariants", "--r", "3", "--deg-max", "9"], 0),
])
def test_exit_codes(argv, code, capsys):
    assert run(argv, capsys)[0] == code


def test_precision_error_exit(capsys):
    # a frame carried to 4 digits cannot give g_r at P = 64
    from drinfeld_eis.arithmetic import FqConfig
    from drinfeld_eis.lattice import builtin_frame
    frame = json.dumps(builtin_frame("rank2-sqrt", FqConfig.from_q(2), 4).to_json())
    code, out, _ = run(["drinfeld", "--frame", frame], capsys)
    assert code == 2
    assert json.loads(out)["status"] == "precision-error"


def test_resource_cap_exit(capsys, monkeypatch):
    from drinfeld_eis import modspace
    monkeypatch.setattr(modspace, "MAX_ENUMERATION", 10)
    code, _, _ = run(["verify", "--suite", "cusp-count", "--deg-cap", "1"], capsys)
    assert code == 0   # the check skips capped enumerations and says so
    monkeypatch.setattr(modspace, "invariants_table", _raise_resource)
    code, out, _ = run(["invariants"], capsys)
    assert code == 4 and json.loads(out)["status"] == "resource-error"


def _raise_resource(*a, **k):
    from drinfeld_eis.errors import ResourceError
    raise ResourceError("cap")


def test_injected_fault_fails(capsys):
    code, out, _ = run(["verify", "--P", "48", "--suite", "functional-equation", "--inject-fault", "g1"], capsys)
    report = json.loads(out)
    assert code == 1
    assert report["result"]["checks"][0]["status"] == "fail"
    assert report["config"]["inject_fault"] == "g1"


def test_low_precision_is_insufficient_not_fail(capsys):
    code, out, _ = run(["verify", "--P", "8", "--suite", "basis-rank,separation,goss-identity"], capsys)
    report = json.loads(out)
    statuses = [c["status"] for c in report["result"]["checks"]]
    assert code == 2
    assert "fail" not in statuses
    assert statuses.count("precision-insufficient") >= 2


def test_csv_output(capsys):
    code, out, _ = run(["invariants", "--deg-max", "1", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("N,deg,r,cusps")
    assert lines[1].startswith("T,1,2,3,3,0,2")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(["invariants", "--deg-max", "1", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "invariants"


@pytest.mark.parametrize("cmd", [
    ["eis", "--builtin", "rank2-sqrt", "--kind", "restricted", "--P", "32"],
    ["eis", "--builtin", "carlitz", "--k", "3", "--P", "32"],
    ["drinfeld", "--builtin", "rank3-cbrt", "--level", "T^2", "--P", "32"],
    ["embed", "--builtin", "rank2-sqrt", "--level", "T+1", "--P", "32"],
])
def test_subcommands_are_deterministic(cmd, capsys):
    first = run(cmd, capsys)
    second = run(cmd, capsys)
    assert first[0] == 0
    assert first == second


def test_parallel_matches_sequential(capsys):
    base = ["verify", "--P", "32", "--suite", "scaling,distribution,t-invariance,cusp-count"]
    seq = run(base, capsys)
    par = run(base + ["--jobs", "3"], capsys)
    assert seq[0] == 0
    assert json.loads(seq[1])["result"] == json.loads(par[1])["result"]


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "drinfeld_eis", "invariants", "--deg-max", "1", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert done.returncode == 0
    assert done.stdout.splitlines()[1].startswith("T,")
