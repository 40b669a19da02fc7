import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from veechmix.cli import parse_scalar, run
from veechmix.exactnum import RealBasis
from veechmix.iet import IET
from veechmix.surface.model import TranslationSurface


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    (tmp_path / "rot.json").write_text(json.dumps({"perm": [2, 1], "lengths": ["2/5", "3/5"]}))
    (tmp_path / "ones.json").write_text("[1, 1]")
    (tmp_path / "t.json").write_text(json.dumps({"perm": [4, 2, 3, 1], "lengths": ["1/5", "1/4", "3/10", "1/4"]}))
    (tmp_path / "h.json").write_text(json.dumps(["1", "3/2", "5/4", "1"]))
    (tmp_path / "hb.json").write_text(json.dumps(["1", "b1", "b2", "1"]))
    return tmp_path


def test_iet_analyze(capsys):
    code, out, _ = call(capsys, "iet", "analyze", "--perm", "4,2,3,1")
    assert code == 0
    assert "Sigma_pi = {{0,3},{1,4},{2}}" in out
    assert re.search(r"\{0,3\}\s+1\s+0\s+-1\s+1", out)
    assert re.search(r"\{1,4\}\s+-1\s+1\s+0\s+-1", out)
    assert re.search(r"\{2\}\s+0\s+-1\s+1\s+0", out)


def test_iet_analyze_json(capsys):
    code, out, _ = call(capsys, "--json", "iet", "analyze", "--perm", "4,2,3,1")
    doc = json.loads(out)
    assert doc["cycles"] == [[0, 3], [1, 4], [2]] and doc["sigma"] == [3, 4, 2, 0, 1]


def test_weakmix_rotation_inconclusive(capsys, files):
    code, out, _ = call(capsys, "weakmix", "check", "--iet", str(files / "rot.json"),
                        "--times", str(files / "ones.json"))
    assert code == 2 and "Inconclusive" in out


def test_weakmix_symbolic_times(capsys, files):
    code, out, _ = call(capsys, "--basis", "b1=1.4142135623730951,b2=1.7320508075688772", "weakmix", "check",
                        "--iet", str(files / "t.json"), "--times", str(files / "hb.json"))
    assert code == 0 and "u = 2 - b2" in out and "v = -2 + b1" in out


def test_weakmix_exclude(capsys, files):
    code, out, _ = call(capsys, "weakmix", "exclude", "--iet", str(files / "t.json"), "--times",
                        str(files / "ones.json").replace("ones", "h"), "--alpha", "1/2")
    assert code == 0 and "Excluded" in out


def test_fig1_svg(capsys, tmp_path):
    code, out, _ = call(capsys, "--out-dir", str(tmp_path), "surface", "fig1", "--preset", "fig1-default",
                        "--svg", "fig1.svg", "--out", "fig1.json")
    assert code == 0 and "genus: 5" in out
    svg = (tmp_path / "fig1.svg").read_text()
    assert len(set(re.findall(r'class="slit" data-pair="(\d+)"', svg))) == 5
    surface = TranslationSurface.from_json(json.loads((tmp_path / "fig1.json").read_text()))
    assert surface.genus == 5
    assert not [p for p in tmp_path.iterdir() if p.name.endswith(".tmp")]


def test_suspend_then_return_map_roundtrip(capsys, files):
    code, _, _ = call(capsys, "--out-dir", str(files), "surface", "suspend", "--iet", str(files / "t.json"),
                      "--heights", str(files / "h.json"), "--out", "s.json")
    assert code == 0
    code, out, _ = call(capsys, "--json", "flow", "return-map", "--surface", str(files / "s.json"),
                        "--section", "0,0:1,0:loop")
    doc = json.loads(out)
    iet = IET.from_json(doc["iet"])
    assert list(iet.perm.images) == [4, 2, 3, 1]
    assert [str(x) for x in iet.lengths] == ["1/5", "1/4", "3/10", "1/4"]
    assert doc["times"] == [[["1", "1"]], [["3", "2"]], [["5", "4"]], [["1", "1"]]]


def test_flow_trace_svg(capsys, files, tmp_path):
    call(capsys, "--out-dir", str(files), "surface", "suspend", "--iet", str(files / "t.json"),
         "--heights", str(files / "h.json"), "--out", "s.json")
    code, out, _ = call(capsys, "--out-dir", str(tmp_path), "flow", "trace", "--surface", str(files / "s.json"),
                        "--dir", "31/100,1", "--start", "11/100,1/5", "--tmax", "5", "--svg", "tr.svg")
    assert code == 0 and "edge crossings" in out
    assert 'class="orbit"' in (tmp_path / "tr.svg").read_text()


def test_demo_default(capsys):
    code, out, _ = call(capsys, "demo", "--lags", "2000")
    assert code == 0 and "status: WeaklyMixingAE" in out
    assert "permutation (4, 2, 3, 1)" in out


def test_demo_times_equal(capsys):
    code, out, _ = call(capsys, "demo", "--times-equal", "--lags", "500")
    assert code == 2 and "status: Inconclusive" in out


def test_demo_hv(capsys):
    code, out, _ = call(capsys, "demo", "--hv", "--a", "1", "--b", "2", "--samples", "10")
    assert code == 0 and "AlmostIntegrable" in out and "alpha_jk" in out


def test_json_stable_under_rerun(capsys, tmp_path):
    a = call(capsys, "--json", "--seed", "11", "demo", "--lags", "1000")[1]
    b = call(capsys, "--json", "--seed", "11", "demo", "--lags", "1000")[1]
    assert a == b
    doc = json.loads(a)
    assert doc["verdict"]["status"] == "WeaklyMixingAE"
    assert IET.from_json(doc["return_map"]["iet"]).m == 4


def test_spectrum_correlate_csv(capsys, files, tmp_path):
    code, out, _ = call(capsys, "--out-dir", str(tmp_path), "--seed", "3", "spectrum", "correlate",
                        "--iet", str(files / "rot.json"), "--f", "indicator:0:2/5:0", "--lags", "10",
                        "--samples", "500", "--csv", "c.csv", "--svg", "m.svg")
    assert code == 0
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert rows[0] == "lag,re_C,im_C,abs_C,cesaro_M"
    assert len(rows) == 12
    assert "polyline" in (tmp_path / "m.svg").read_text()


def test_spectrum_weyl_grid(capsys, files, tmp_path):
    code, out, _ = call(capsys, "--out-dir", str(tmp_path), "spectrum", "weyl", "--iet", str(files / "rot.json"),
                        "--alpha-grid", "0:1:0.1", "--N", "1000", "--csv", "w.csv")
    assert code == 0 and "alpha = 0.6" in out
    assert (tmp_path / "w.csv").read_text().startswith("alpha,weyl_abs")


def test_spectrum_hv_json(capsys):
    code, out, _ = call(capsys, "--json", "spectrum", "hv", "--a", "1", "--b", "2", "--jk", "1", "--samples", "5")
    doc = json.loads(out)
    assert doc["status"] == "AlmostIntegrable" and doc["max_residual"] < 1e-9
    code, out, _ = call(capsys, "--basis", "b1=1.4142135623730951", "spectrum", "hv", "--a", "1", "--b", "1+b1")
    assert "WeakMixing" in out


def test_usage_errors(capsys):
    assert call(capsys, "bogus")[0] == 64
    assert call(capsys, "iet", "analyze")[0] == 64
    assert call(capsys, "--seed", "-1", "iet", "analyze", "--perm", "2,1")[0] == 64


def test_data_errors(capsys, tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    code, _, err = call(capsys, "weakmix", "check", "--iet", str(tmp_path / "bad.json"), "--times",
                        str(tmp_path / "bad.json"))
    assert code == 65 and "invalid JSON" in err
    assert call(capsys, "surface", "hv", "--a", "2", "--b", "1")[0] == 65
    assert call(capsys, "surface", "fig1", "--preset", "nope")[0] == 65
    assert call(capsys, "iet", "analyze", "--perm", "1,1")[0] == 65


def test_parse_scalar():
    b = RealBasis.of(beta1=1.5)
    assert parse_scalar("1 + 2/3*beta1", b) == b.combo(1, beta1=Fraction(2, 3))
    assert parse_scalar("-beta1 - 0.5", b) == b.combo(Fraction(-1, 2), beta1=-1)
    with pytest.raises(Exception):
        parse_scalar("2**beta1", b)


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "veechmix.cli", "iet", "analyze", "--perm", "2,1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "{0,1,2}" in out.stdout
