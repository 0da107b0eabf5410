import json

import pytest

from zeq import __version__
from zeq.cli import main
from zeq.zero_finder import write_cache


@pytest.fixture(scope="module")
def cache(tmp_path_factory, zeros1k):
    p = tmp_path_factory.mktemp("cli") / "zeros.csv"
    write_cache(zeros1k, p)
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_zeros_then_reuse(tmp_path, capsys):
    c = tmp_path / "z.csv"
    code, out, _ = run(capsys, "zeros", "--tmax", 100, "--cache", c)
    assert code == 0 and "zeros: 29 " in out and "source: computed" in out
    code, out, _ = run(capsys, "zeros", "--tmax", 50, "--cache", c)
    assert code == 0 and "source: cache" in out and "zeros: 10 " in out


def test_zeros_env_cache(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ZEQ_CACHE", str(tmp_path / "env.csv"))
    assert run(capsys, "zeros", "--count", 5)[0] == 0
    assert (tmp_path / "env.csv").exists()


def test_zeros_import_incomplete(tmp_path, capsys):
    src = tmp_path / "list.txt"
    src.write_text("14.134725141734693\n21.022039638771555\n")
    code, out, err = run(capsys, "zeros", "--import", src, "--tmax", 30, "--cache", tmp_path / "c.csv")
    assert code == 2 and "complete: False" in out


def test_zeros_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "zeros", "--import", tmp_path / "missing.txt", "--tmax", 30,
                       "--cache", tmp_path / "c.csv")
    assert code == 1 and "cannot read" in err


def test_zeros_usage(capsys):
    with pytest.raises(SystemExit) as e:
        main(["zeros"])
    assert e.value.code == 2


def test_clt_json(cache, capsys):
    code, out, _ = run(capsys, "clt", "--a", 0, "--b", "inf", "--cache", cache)
    doc = json.loads(out)
    assert code == 0 and doc["version"] == __version__ and doc["t_max"] > 0
    assert doc["config"]["a"] == 0.0 and doc["report"]["count"] >= 0
    assert doc["report"]["b"] == "inf"


def test_clt_hist(cache, capsys, tmp_path):
    code, out, _ = run(capsys, "clt", "--band", "full", "--hist", 40, "--cache", cache)
    assert code == 0 and len(out.splitlines()) == 41
    h = tmp_path / "h.csv"
    code, out, _ = run(capsys, "clt", "--band", "full", "--hist", 40, "--hist-out", h, "--cache", cache)
    assert len(h.read_text().splitlines()) == 41 and json.loads(out)["report"]["count"] == 1000


def test_missing_cache(tmp_path, capsys):
    code, _, err = run(capsys, "clt", "--band", "full", "--cache", tmp_path / "none.csv")
    assert code == 1 and "no zero cache" in err


def test_equidist(cache, capsys):
    for extra in (["--scale", "unit"], ["--scale", "logT"], ["--a", -1, "--b", 1]):
        code, out, _ = run(capsys, "equidist", "--ellmax", 10, "--cache", cache, *extra)
        r = json.loads(out)["report"]
        assert code == 0 and r["d_star"] <= r["et_bound"]


def test_explicit(cache, capsys):
    code, out, _ = run(capsys, "explicit", "--x", 4, "--cache", cache)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("x,re_observed")
    assert len(lines) == 2
    code, out, _ = run(capsys, "explicit", "--xgrid", "2:50:50", "--epsilon", 0.25, "--cache", cache)
    assert len(out.splitlines()) == 51


def test_explicit_rejects_one(cache, capsys):
    with pytest.raises(SystemExit) as e:
        main(["explicit", "--x", "1", "--cache", str(cache)])
    assert e.value.code == 2
    assert "x = 1" in capsys.readouterr().err


def test_spacing(cache, capsys):
    code, out, _ = run(capsys, "spacing", "--lambdas", "0.1,0.2,0.4,0.8", "--cache", cache)
    assert code == 0 and len(out.splitlines()) == 5


def test_approx(capsys):
    code, out, _ = run(capsys, "approx", "--omega", 4, "--grid", "-5:5:101")
    rows = [ln.split(",") for ln in out.splitlines()[1:]]
    assert code == 0 and len(rows) == 101 and all(r[4] == "0" for r in rows)
    with pytest.raises(SystemExit) as e:
        main(["approx", "--omega", "0"])
    assert e.value.code == 2


def test_proxy(cache, capsys):
    code, out, _ = run(capsys, "proxy", "--x2", 100, "--cache", cache)
    assert code == 0 and json.loads(out)["report"]["proxy"]["n"] == 1000


def test_out_file_deterministic(cache, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(capsys, "equidist", "--ellmax", 5, "--cache", cache, "--out", p)
    assert a.read_bytes() == b.read_bytes()
