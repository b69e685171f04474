import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from qamalgam.cli import run

SPECS = Path(__file__).resolve().parent.parent / "specs"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def json_call(tmp_path, *argv):
    path = tmp_path / "report.json"
    code, _, err = call(*argv, "--json", path)
    return code, json.loads(path.read_text()), err


def test_jv_index_s3(tmp_path):
    code, doc, _ = json_call(tmp_path, "jv-index", SPECS / "s3_c2_s3.qspec", "--depth", 3)
    assert code == 0 and doc["ok"]
    ops = doc["results"][0]["report"]["operators"]
    assert [op["index"] for op in ops] == [1, 1]
    assert all(op["depth"] == 3 for op in ops)


def test_quotient_ao_even(tmp_path):
    code, doc, _ = json_call(tmp_path, "quotient", SPECS / "ao_even.qspec")
    assert code == 0
    rep = doc["results"][0]["report"]
    assert rep["bound"] == 9 and rep["class_count"] == 2


def test_missing_file():
    code, out, err = call("axioms", "/nonexistent/spec.qspec")
    assert code == 2 and out == "" and "cannot read" in err


def test_parse_error_exit_2(tmp_path):
    p = tmp_path / "bad.qspec"
    p.write_text("ring A = ao(1)\n")
    code, _, err = call("axioms", p)
    assert code == 2 and ":1:" in err and "out of range" in err


def test_bad_flag_exit_2():
    code, _, _ = call("tree", SPECS / "s3_c2_s3.qspec", "--depth", "-1")
    assert code == 2


def test_verdict_failure_exit_1(tmp_path):
    p = tmp_path / "open.qspec"
    p.write_text("ring A = ao(2)\nsubcat D in A = { v0, v1 } bound 3\njob quotient D\n")
    code, out, _ = call("quotient", p)
    assert code == 1 and "ok: false" in out


def test_all_aggregates_failure(tmp_path):
    p = tmp_path / "mixed.qspec"
    p.write_text("ring A = ao(2)\nsubcat D in A = { v0, v1 } bound 3\njob axioms A bound=3\njob quotient D\n")
    code, doc, _ = json_call(tmp_path, "all", p)
    assert code == 1 and not doc["ok"]
    assert [r["ok"] for r in doc["results"]] == [True, False]


def test_flags_override_job_options(tmp_path):
    code, doc, _ = json_call(tmp_path, "jv-index", SPECS / "s3_c2_s3.qspec", "--depth", 1)
    assert doc["results"][0]["report"]["depth"] == 1


def test_defaults_when_no_jobs(tmp_path):
    code, doc, _ = json_call(tmp_path, "homotopy", SPECS / "z6_c3_s3.qspec", "--t-samples", 5)
    assert code == 0
    rep = doc["results"][0]["report"]
    assert len(rep["samples"]) == 5 and rep["depth"] == 3


def test_commutators_rank_constant(tmp_path):
    code, doc, _ = json_call(tmp_path, "commutators", SPECS / "s3_c2_s3.qspec", "--depth", 3)
    rep = doc["results"][0]["report"]
    assert code == 0 and rep["depths"] == [3, 4, 5]
    assert all(g["rank_constant"] for g in rep["generators"])


def test_fuse_and_freefuse(tmp_path):
    p = tmp_path / "f.qspec"
    p.write_text("ring A = ao(2)\nring Z = cyclic\njob fuse A v2 v3\njob freefuse A Z [1:v1, 2:a] [2:a^-1, 1:v1]\n")
    code, doc, _ = json_call(tmp_path, "all", p)
    assert code == 0
    fuse, free = (r["report"] for r in doc["results"])
    assert fuse["result"] == {"v1": 1, "v3": 1, "v5": 1}
    # a (x) a^-1 cancels at the junction, then v1 (x) v1 = v0 + v2
    assert free["result"] == {"[]": 1, "[1:v2]": 1}


def test_amalgam_check_and_quotient_tree():
    code, out, _ = call("all", SPECS / "ao_amalgam.qspec")
    assert code == 0 and "ok: false" not in out


def test_nothing_to_run(tmp_path):
    p = tmp_path / "empty.qspec"
    p.write_text("ring A = ao(2)\n")
    code, _, err = call("fuse", p)
    assert code == 2 and "nothing to run" in err


@pytest.mark.parametrize("cmd", ["axioms", "all"])
def test_byte_identical(tmp_path, cmd):
    spec = SPECS / "s3_c2_s3.qspec"
    a = call(cmd, spec, "--seed", 7)[1]
    b = call(cmd, spec, "--seed", 7)[1]
    assert a == b
    call(cmd, spec, "--seed", 7, "--json", tmp_path / "a.json")
    call(cmd, spec, "--seed", 7, "--json", tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qamalgam", "quotient", str(SPECS / "ao_even.qspec")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "class_count: 2" in proc.stdout
