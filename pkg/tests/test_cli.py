import json
from fractions import Fraction

import pytest

from pisotsigma.cli import PREC_ENV, run
from pisotsigma.enclosure import parse_enclosure
from pisotsigma.exactreal import parse_symbolic, refine_until_certified
from pisotsigma.report import read_csv


def run_out(tmp_path, name, *argv):
    out = tmp_path / name
    assert run([*argv, "--out", str(out)]) == 0
    return out


def test_pisot_check(tmp_path):
    out = run_out(tmp_path, "c.json", "pisot", "check", "--poly", "x^3-x-1")
    d = json.loads(out.read_text())
    assert d["unit"] is True and d["pisot"] is True
    assert d["irreducible_by_criterion"] is True
    man = json.loads((tmp_path / "c.json.manifest.json").read_text())
    assert man["command"] == "pisot check" and man["arguments"]["poly"] == "x^3-x-1"


def test_golden_trace_csv(tmp_path):
    out = run_out(tmp_path, "t.csv", "sigma", "trace", "--zeta", "polyroot:x^2-x-1:max",
                  "--alpha", "rat:1", "--n-max", "100")
    rows = read_csv(out)
    assert len(rows) == 100
    for r in rows[1:]:
        assert Fraction(r["sigma_lo"]) <= 1 <= Fraction(r["sigma_hi"])


def test_csv_fields_parse_back_within_enclosure(tmp_path):
    out = run_out(tmp_path, "p.csv", "sigma", "trace", "--zeta", "polyroot:x^3-x-1:max", "--n-max", "40")
    zeta = parse_symbolic("polyroot:x^3-x-1:max")
    for r in read_csv(out)[::7]:
        n = int(r["n"])
        true = refine_until_certified(zeta, n, target_rel_error=1e-30).distance.fraction_bounds()
        lo, hi = parse_enclosure(r["distance"])
        assert lo <= true[0] and true[1] <= hi


def test_outputs_are_byte_identical(tmp_path):
    args = ["sigma", "trace", "--zeta", "radical:3/2:2", "--n-max", "50"]
    a = run_out(tmp_path, "a.csv", *args).read_bytes()
    b = run_out(tmp_path, "b.csv", *args).read_bytes()
    assert a == b


def test_fd_scan_cli(tmp_path):
    out = run_out(tmp_path, "fd.json", "fd", "scan", "--zeta", "radical:2/1:3", "--alpha", "rat:1",
                  "--eps", "0.5", "--n-max", "60", "--format", "json")
    d = json.loads(out.read_text())
    assert d["exact_hits"] == list(range(3, 61, 3))
    assert d["gap_bound_tail"] is True


def test_dioph_cf_cli(tmp_path):
    out = run_out(tmp_path, "cf.json", "dioph", "cf", "--value", "radical:2/1:2", "--depth", "30")
    d = json.loads(out.read_text())
    assert set(d) >= {"quotients", "convergents", "lambda1_estimate", "certified_depth"}
    assert d["quotients"][:4] == [1, 2, 2, 2] and d["determinants_ok"]


def test_construct_resume_cli(tmp_path):
    first = run_out(tmp_path, "g.json", "construct", "alpha", "--zeta", "rat:3/2",
                    "--exponents", "custom", "--custom", "1,2,4", "--steps", "2")
    more = run_out(tmp_path, "g2.json", "construct", "alpha", "--resume", str(first), "--steps", "3")
    assert json.loads(more.read_text())["coefficients"] == [["2/3"], ["0"], ["3/4"]]


@pytest.mark.parametrize("argv", [
    ["sigma", "trace", "--zeta", "1.5"],
    ["sigma", "trace", "--zeta", "rat:1/2"],
    ["pisot", "check", "--poly", "x^2-4"],
    ["pisot", "family", "--k", "2", "--M", "a..b"],
    ["nosuch"],
    ["construct", "alpha"],
])
def test_precondition_failures_exit_1(argv):
    assert run(argv) == 1


def test_precision_cap_exit_2(monkeypatch):
    # 3^(400/3) has about 212 bits before the point; 32 bits cannot resolve it
    assert run(["sigma", "trace", "--zeta", "radical:3/1:3", "--n-min", "400", "--n-max", "400",
                "--prec-start", "16", "--prec-max", "32"]) == 2
    monkeypatch.setenv(PREC_ENV, "32")
    assert run(["sigma", "trace", "--zeta", "radical:3/1:3", "--n-min", "401", "--n-max", "401",
                "--prec-start", "16"]) == 2


def test_plot_svg(tmp_path):
    csv_path = run_out(tmp_path, "t.csv", "sigma", "trace", "--zeta", "radical:2/1:3", "--n-max", "30")
    bounds = run_out(tmp_path, "b.json", "sigma", "bounds", "--zeta", "polyroot:x^2-x-1:max", "--n-max", "60")
    svg = tmp_path / "t.svg"
    assert run(["plot", "--input", str(csv_path), "--kind", "trace", "--bounds", str(bounds), "--out", str(svg)]) == 0
    text = svg.read_text()
    assert text.lstrip().startswith("<?xml") and "<svg" in text
    svg2 = tmp_path / "t2.svg"
    run(["plot", "--input", str(csv_path), "--kind", "trace", "--bounds", str(bounds), "--out", str(svg2)])
    assert svg2.read_bytes() == svg.read_bytes()
    assert run(["plot", "--input", str(csv_path), "--kind", "density", "--out", str(svg)]) == 1
