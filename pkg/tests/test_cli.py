import json
import os
import subprocess
import sys

import pytest

from mathieusub import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verdict_examples(capsys):
    code, out, _ = run(capsys, "verdict", "-f", "3", "-g", "Z5")
    assert code == 0 and json.loads(out)["outcome"] == "mathieu"
    code, out, _ = run(capsys, "verdict", "-f", "2^2", "-g", "Z3")
    d = json.loads(out)
    assert code == 10 and d["outcome"] == "not_mathieu" and d["witness"]["element"]
    code, out, _ = run(capsys, "verdict", "-f", "7", "-g", "S3", "--json")
    d = json.loads(out)
    assert code == 0 and d["method"] == "fast-path-large-char"


def test_verdict_text_and_budget(capsys):
    code, out, _ = run(capsys, "verdict", "-f", "3", "-g", "Z5", "--budget", "10", "--text")
    assert code == 20
    lines = dict(line.split("\t", 1) for line in out.splitlines())
    assert lines["outcome"] == "indeterminate" and lines["method"] == "budget-exceeded" and "reason" in lines


def test_verdict_output_is_lf_terminated_json(capsys):
    _, out, _ = run(capsys, "verdict", "-f", "2", "-g", "S3")
    assert out.endswith("\n") and "\r" not in out and out.count("\n") == 1


@pytest.mark.parametrize("argv,token", [
    (["verdict", "-f", "6", "-g", "Z3"], "6"),
    (["verdict", "-f", "2", "-g", "Z0"], "Z0"),
    (["verdict", "-f", "2", "-g", "A5"], "A5"),
    (["counterexample", "-p", "4"], "4"),
    (["subset-sum", "-p", "3", "-c", "1,0"], "nonzero"),
    (["orthogonality", "-f", "3", "-g", "Z5"], "5"),
    (["scan", "-n", "3"], "-f"),
])
def test_usage_errors(capsys, argv, token):
    code, out, err = run(capsys, *argv)
    assert code == 2 and token in err and out == ""


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verdict", "-f", "2"])
    assert exc.value.code == 2


GF2_SCAN = """\
field\tgroup\torder\toutcome\tmethod\twitness\texamined
2\tZ2\t2\tmathieu\tabelian-root-criterion\t-\t0
2\tZ3\t3\tnot_mathieu\tunicounter-idempotent\t1*g1+1*g2\t0
2\tZ4\t4\tmathieu\tabelian-root-criterion\t-\t0
2\tZ2xZ2\t4\tmathieu\tabelian-root-criterion\t-\t0
2\tZ5\t5\tnot_mathieu\tunicounter-idempotent\t1*g1+1*g2+1*g3+1*g4\t0
"""


def test_scan_gf2_golden(capsys):
    code, out, _ = run(capsys, "scan", "-f", "2", "-n", "5")
    assert code == 0 and out == GF2_SCAN


def test_scan_examples(capsys):
    _, out, _ = run(capsys, "scan", "-f", "7", "-n", "6")
    rows = [r.split("\t") for r in out.splitlines()[1:]]
    assert rows and all(r[3] == "mathieu" for r in rows)
    _, out, _ = run(capsys, "scan", "-f", "2^2", "-n", "4")
    verdicts = {r.split("\t")[1]: r.split("\t")[3] for r in out.splitlines()[1:]}
    assert verdicts == {"Z2": "mathieu", "Z3": "not_mathieu", "Z4": "mathieu", "Z2xZ2": "mathieu"}


def test_scan_field_order_and_determinism(capsys):
    _, a, _ = run(capsys, "scan", "-f", "3,2", "-f", "2^2", "-n", "6")
    _, b, _ = run(capsys, "scan", "-f", "2^2", "-f", "2", "-f", "3", "-n", "6", "--workers", "3")
    assert a == b
    fields = [r.split("\t")[0] for r in a.splitlines()[1:]]
    assert fields == sorted(fields, key=lambda s: ["2", "3", "2^2"].index(s))


def test_counterexample(capsys):
    code, out, _ = run(capsys, "counterexample", "-p", "5", "-M", "500", "-k", "3")
    assert code == 0 and out.rstrip().endswith("verified")
    code, out, _ = run(capsys, "counterexample", "-p", "3", "-M", "20", "--json")
    d = json.loads(out)
    assert code == 0 and d["ok"] and d["shifted"]["rows"][0]["trace"] == 2
    code, _, err = run(capsys, "counterexample", "-p", "7", "-k", "6")
    assert code == 2 and "10^5" in err


def test_binom(capsys):
    code, out, _ = run(capsys, "binom", "-p", "3", "-k", "4", "-b", "200")
    assert code == 0 and out.rstrip().endswith("verified")
    code, out, _ = run(capsys, "binom", "-p", "2", "-k", "3", "-b", "10", "--json")
    assert code == 0 and json.loads(out)["ok"]


def test_subset_sum(capsys):
    code, out, _ = run(capsys, "subset-sum", "-p", "3", "-c", "1,1,1")
    assert code == 10 and "{1,2,3}" in out
    code, out, _ = run(capsys, "subset-sum", "-p", "5", "-c", "1,1,1,1")
    assert code == 0
    code, out, _ = run(capsys, "subset-sum", "-f", "2^2", "-c", "01,10,11", "--json")
    assert code == 10 and json.loads(out)["failing"] == [1, 2, 3]


def test_orthogonality(capsys):
    code, out, _ = run(capsys, "orthogonality", "-f", "13", "-g", "Z3xZ4")
    assert code == 0 and out.rstrip().endswith("verified")
    assert len(out.splitlines()) == 1 + 12 + 2
    code, out, _ = run(capsys, "orthogonality", "-f", "2^2", "-g", "Z3", "--json")
    d = json.loads(out)
    assert code == 0 and [r["L"] for r in d["rows"]] == ["01", "00", "00"]  # d = 3 = 1 in char 2
    code, _, err = run(capsys, "orthogonality", "-f", "5", "-g", "S3")
    assert code == 2 and "abelian" in err


def _subprocess(args, backend):
    env = dict(os.environ, MATHIEUSUB_BACKEND=backend)
    return subprocess.run([sys.executable, "-m", "mathieusub", *args], capture_output=True, text=True, env=env)


def test_module_entry_point_and_backend_flag():
    a = _subprocess(["verdict", "-f", "2", "-g", "S3"], "numba")
    b = _subprocess(["verdict", "-f", "2", "-g", "S3"], "numpy")
    assert a.returncode == b.returncode == 10 and a.stdout == b.stdout
    bad = _subprocess(["verdict", "-f", "2", "-g", "S3"], "cuda")
    assert bad.returncode != 0 and "MATHIEUSUB_BACKEND" in bad.stderr
