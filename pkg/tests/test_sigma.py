import math
from fractions import Fraction

import pytest

from pisotsigma.errors import InputError
from pisotsigma.exactreal import Rational, parse_symbolic
from pisotsigma.sigma import (
    bound_report,
    density_N,
    direct_sample,
    dual_route_check,
    family_row,
    power_identity_check,
    trace,
    window_estimates,
)

PHI = parse_symbolic("polyroot:x^2-x-1:max")
PLASTIC = parse_symbolic("polyroot:x^3-x-1:max")
CBRT2 = parse_symbolic("radical:2/1:3")


def test_golden_sigma_is_one():
    tr = trace(Rational(1), PHI, 200)
    assert tr.by_n(1).sigma.contains(2)  # ||phi|| = phi^-1 at n = 1
    for s in tr.samples[1:]:
        assert s.status == "ok" and s.sigma.contains(1)


def test_rational_sigma_exact_values():
    # (3/2)^4 = 81/16, nearest 5, distance 1/16: sigma_4 = log 16 / log(81/16)
    s = direct_sample(Rational(1), Rational(3, 2), 4)
    assert s.nearest == 5
    assert abs(float(s.sigma.center) - math.log(16) / math.log(81 / 16)) < 1e-15


def test_exact_hits_are_symbolic():
    tr = trace(Rational(1), CBRT2, 30)
    assert tr.exact_hits == list(range(3, 31, 3))
    assert tr.by_n(6).sigma == math.inf


def test_alpha_below_one_is_skipped():
    tr = trace(Rational(1, 10), Rational(2), 5)
    assert [s.status for s in tr.samples[:3]] == ["skipped", "skipped", "skipped"]
    assert tr.by_n(4).status == "ok"


def test_plastic_activation_index_and_window():
    tr = trace(Rational(1), PLASTIC, 600)
    assert tr.n0 == 10
    w = window_estimates(tr, n_min=300)
    assert 0.45 < float(w.inf.center) < 0.52
    assert w.exact_hits == 0


def test_window_needs_samples():
    tr = trace(Rational(1), PHI, 8)
    with pytest.raises(InputError):
        window_estimates(tr, n_min=6)


def test_dual_routes_agree():
    rep = dual_route_check(Rational(1), PLASTIC, 120)
    assert rep.agree and rep.checked == 120 - rep.n0 + 1
    alpha = parse_symbolic("infield:polyroot:x^3-x-1:max:x^2+1:1:0")
    assert dual_route_check(alpha, PLASTIC, 80).agree


def test_power_identity():
    assert power_identity_check(Rational(1), PLASTIC, 3, 60).holds
    assert power_identity_check(Rational(1, 3), Rational(5, 2), 2, 40).holds


def test_density_N_clamps():
    assert density_N(10, 0.5) == 3
    assert density_N(3, 0.01) == 1
    assert density_N(100, 0.01) == 95
    assert density_N(100, 0.001) == 98


def test_family_row_quadratic_target():
    row = family_row(2, 4, 2, n_max=80)
    # k = 2: sigma_n eventually equals -log f / log zeta with f = 2 - sqrt 2
    target = -math.log(2 - 2**0.5) / math.log(2 + 2**0.5)
    assert abs(float(row.window.inf.center) - target) < 1e-12


def test_bound_report_verdicts():
    rep = bound_report(Rational(1), CBRT2, n_max=120)
    v = rep.verdicts()
    assert v["radical_integer_restricted"] == "pass"
    assert rep.measured["sigma_sup_upper"] == math.inf
    assert rep.measured["restricted_sup_upper"].certainly_lt(Fraction(1))
