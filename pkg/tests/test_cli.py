import io
import json
import os
import subprocess
import sys

import pytest

from markedgroups import cli
from markedgroups.tables import Table, plotdata


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return [line.split("\t") for line in text.strip().splitlines()[1:]]


def test_ball_row():
    code, out, _ = call("ball", "-m", "2", "-n", "2")
    assert code == 0
    assert out.splitlines()[1] == "2\t17"


def test_zm_cover_row():
    code, out, _ = call("zm-cover", "-m", "1", "-n", "5")
    assert code == 0 and rows(out)[0][:2] == ["5", "6"]


def test_grig_member():
    code, out, _ = call("grig-member", "-w", "bb", "--omega", "0(0)*")
    assert code == 0 and "accepted" in out.split()


def test_usage_errors():
    assert call("nonsense")[0] == 1
    assert call("ball", "-m", "2")[0] == 1
    assert call("dehn", "-m", "2", "--lambda", "1/6", "--relators", "ab", "-w", "a7")[0] == 1
    assert call("check-cprime", "-m", "2", "--lambda", "x/y", "--relators", "ab")[0] == 1
    assert call("grig-member", "-w", "ab", "--omega", "3")[0] == 1


def test_budget_refusal_writes_nothing(tmp_path):
    out_dir = tmp_path / "run"
    code, out, err = call("ball", "-m", "2", "-n", "12", "--budget", "1000", "--out", str(out_dir))
    assert code == 2 and out == "" and "refused" in err
    assert not out_dir.exists()


def test_budget_env(monkeypatch):
    monkeypatch.setenv("MGL_BUDGET", "50")
    assert call("ball", "-m", "2", "-n", "3")[0] == 2


def test_manifest_and_digests(tmp_path):
    code, _, _ = call("ur-dim", "-m", "2", "-q", "2", "-n", "5", "--out", str(tmp_path))
    assert code == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert set(man["outputs"]) == {"ur-dim.tsv", "plotdata.tsv", "dim.tsv"}
    for name, digest in man["outputs"].items():
        assert cli.sha256((tmp_path / name).read_text()) == digest
    assert man["params"]["q"] == 2 and man["seeds"] == [0]


def test_json_format():
    code, out, _ = call("growth", "-m", "2", "-n", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["columns"][:3] == ["n", "beta", "sigma"]
    assert doc["rows"][0][:3] == [1, 5, 12]


def test_plotdata_lines():
    code, out, _ = call("ps-dim", "-m", "2", "-k", "1", "--lambda", "1/6", "-n", "3", "--plotdata")
    assert code == 0
    lower = [r for r in rows(out) if r[0] == "lower_bound"]
    assert lower and all(r[2] == "1.58496" for r in lower)
    code, out, _ = call("ur-dim", "-m", "2", "-q", "2", "-n", "4", "--plotdata")
    upper = [r for r in rows(out) if r[0] == "upper_bound"]
    assert upper and all(r[2] == "1.58496" for r in upper)
    assert call("ball", "-m", "2", "-n", "1", "--plotdata")[0] == 1


def test_plotdata_empty_and_schema():
    t = Table("x", ["n", "s"], series={"empirical": "s"})
    assert plotdata(t) == "series\tn\tvalue\n"
    with pytest.raises(ValueError):
        plotdata(Table("y", ["k"], series={"empirical": "k"}))


def test_dehn_and_trace(tmp_path):
    code, out, _ = call("dehn", "-m", "2", "--lambda", "1/6", "--relators", "ab", "-w", "abab", "--out", str(tmp_path))
    assert code == 0 and out.strip().endswith("accepted")
    trace = json.loads((tmp_path / "trace.json").read_text())
    assert trace and set(trace[0]) == {"position", "relator", "offset", "length"}


def test_check_cprime_verb():
    code, out, _ = call("check-cprime", "-m", "2", "--lambda", "1/6", "--relators", "abab")
    assert rows(out)[0] == ["abab", "1/6", "3", "0", "aba"]


def test_fingerprint_and_distance(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert call("fingerprint", "-m", "2", "--lambda", "1/6", "--relators", "ab", "-n", "3", "--out", str(a))[0] == 0
    assert call("fingerprint", "-m", "2", "--lambda", "1/6", "--relators", "aB", "-n", "3", "--out", str(b))[0] == 0
    code, out, _ = call("distance", str(a / "fingerprint.txt"), str(b / "fingerprint.txt"))
    # <<ab>> and <<aB>> first differ on B(2): ab vs aB are both length 2
    assert code == 0 and rows(out) == [["0", "0", "1", "1/2"]]
    code, out, _ = call("distance", str(a / "fingerprint.txt"), str(a / "fingerprint.txt"))
    assert rows(out) == [["0", "0", "inf", "<= 2^-3"]]


def test_grig_verbs():
    code, out, _ = call("grig-fingerprint", "--omega", "01", "-n", "2")
    assert code == 0 and rows(out)[0][1:] == ["2", "65", "9"]
    code, out, _ = call("grig-prop62", "--omega", "010", "--omega2", "012", "-n", "2")
    assert rows(out)[0][4:7] == ["i", "4", "1"]


def test_cyc_and_zm_dim():
    code, out, _ = call("cyc", "-m", "2", "--n-min", "1", "-n", "3")
    assert [r[1] for r in rows(out)] == ["4", "12", "28"]
    code, out, _ = call("zm-dim", "-m", "1", "-n", "3")
    assert [r[2] for r in rows(out)] == ["2", "3", "4"]


def test_thread_count_does_not_change_tables(tmp_path):
    digests = []
    for threads in ("1", "4"):
        d = tmp_path / threads
        assert call("ps-dim", "-m", "2", "-k", "1", "--lambda", "1/6", "-n", "3", "--threads", threads,
                    "--out", str(d))[0] == 0
        digests.append(json.loads((d / "manifest.json").read_text())["outputs"])
    assert digests[0] == digests[1]


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "markedgroups.cli", "ball", "-m", "2", "-n", "1"],
                          capture_output=True, text=True, env={**os.environ})
    assert proc.returncode == 0 and proc.stdout.splitlines()[1] == "1\t5"
