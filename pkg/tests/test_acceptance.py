"""Acceptance criteria 1-11, each reported as a single PASS/FAIL line.

Tolerances are pinned below; a criterion fails exactly when its stated
condition fails, never weakened to match the implementation.
"""

import time
from fractions import Fraction

from pisotsigma.constructions import fd_scan, greedy_alpha, nested_zeta, rarity_scan
from pisotsigma.dioph import cf_expand, irrationality_exponent_estimate, quadratic_provider
from pisotsigma.exactreal import PolyRoot, Rational, parse_symbolic
from pisotsigma.pisot import bound_ladder, certify_pisot, family_Q, unit_relations
from pisotsigma.polyalg import IntPoly, irreducible_by_pisot_criterion
from pisotsigma.sigma import direct_sample, dual_route_check, is_constant_window, trace, window_estimates

TOL_GOLDEN = Fraction(1, 10**10)
PLASTIC_REF, PLASTIC_TOL = Fraction("1.3247"), Fraction(1, 10**3)
PLASTIC_WINDOW = (Fraction("0.48"), Fraction("0.52"))
TOL_CONSTANT = 1e-6
TOL_BOUND = Fraction(1, 10**6)
TOL_RESTRICTED = Fraction(1, 10**3)
TOL_NESTED = Fraction(1, 10**6)
LAMBDA_RANGE = (0.9, 1.1)
GOLDEN_UNIFORM, CBRT_RADICAL, TOL_LADDER = 2.145, 4.419, 0.01

PHI = parse_symbolic("polyroot:x^2-x-1:max")
PLASTIC = parse_symbolic("polyroot:x^3-x-1:max")
GRID = [(k, M, N) for k in range(2, 7) for M in range(3, 13) for N in range(1, M - 1)]


def test_c01_golden_ratio_exactness(criterion):
    t0 = time.perf_counter()
    tr = trace(Rational(1), PHI, 2000)
    elapsed = time.perf_counter() - t0
    bad = [s.n for s in tr.samples[1:]
           if s.status != "ok" or not 1 - TOL_GOLDEN <= s.sigma.fraction_bounds()[0]
           or s.sigma.fraction_bounds()[1] > 1 + TOL_GOLDEN]
    ok = not bad and elapsed < 5
    assert criterion(1, ok, f"phi, 2 <= n <= 2000: {len(bad)} samples off 1 by > 1e-10, {elapsed:.2f} s (budget 5 s)")


def test_c02_plastic_number(criterion):
    cert = certify_pisot(IntPoly.parse("x^3-x-1"))
    root_ok = bool(cert) and cert.is_unit and abs(Fraction(str(cert.pisot_root.center)) - PLASTIC_REF) <= PLASTIC_TOL
    tr = trace(Rational(1), PLASTIC, 2000)
    w = window_estimates(tr, n_min=500)
    lo, hi = w.inf.fraction_bounds()
    window_ok = PLASTIC_WINDOW[0] <= lo and hi <= PLASTIC_WINDOW[1]
    start = tr.n0
    constant = [a for a in range(start, 2000 - 49 + 1)
                if is_constant_window([tr.by_n(n) for n in range(a, a + 50)], TOL_CONSTANT)]
    ok = root_ok and window_ok and not constant
    assert criterion(2, ok, f"unit={cert.is_unit} zeta={cert.pisot_root.format(8)}, window inf [500,2000] = "
                            f"{w.inf.format(6)}, constant 50-windows from n0={start}: {len(constant)}")


def test_c03_family_certification(criterion):
    t0 = time.perf_counter()
    failures = []
    for k, M, N in GRID:
        P = family_Q(k, M, N)
        cert = certify_pisot(P)
        if not cert or not irreducible_by_pisot_criterion(cert.spectrum, P):
            failures.append((k, M, N))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    assert criterion(3, ok, f"{len(GRID)} members, {len(failures)} failures, {elapsed:.1f} s (budget 120 s)")


def test_c04_degree_bound_conformance(criterion):
    inf_bad, all_bad, strict_bad = [], [], []
    for k, M, N in GRID:
        P = family_Q(k, M, N)
        tr = trace(Rational(1), PolyRoot(P, "max"), 200, 1e-9)
        w = window_estimates(tr, 0.5)
        if w.inf.fraction_bounds()[0] > Fraction(1, k - 1) + TOL_BOUND:
            inf_bad.append((k, M, N))
        if any(s.status == "ok" and s.sigma.fraction_bounds()[0] > k - 1 + TOL_BOUND for s in tr.samples):
            all_bad.append((k, M, N))
        if k >= 4 and not unit_relations(certify_pisot(P))["strict_below_reciprocal_degree"]:
            strict_bad.append((k, M, N))
    ok = not (inf_bad or all_bad or strict_bad)
    assert criterion(4, ok, f"window inf > 1/(k-1): {len(inf_bad)}, sigma_n > k-1: {len(all_bad)}, "
                            f"k>=4 not strictly below 1/(k-1): {len(strict_bad)}")


DUAL_POLYS = ["x^2-x-1", "x^3-x-1", "x^4-x^3-1", "x^3-x^2-1", "x^3-x^2-x-1", "x^4-x^3-x^2-x-1",
              "x^2-3x+1", "x^3-3x^2+1", "x^2-4x+2", "x^4-7x^3+3"]


def test_c05_dual_route_agreement(criterion):
    disjoint = {}
    checked = 0
    for p in DUAL_POLYS:
        rep = dual_route_check(Rational(1), parse_symbolic(f"polyroot:{p}:max"), 500)
        checked += rep.checked
        if rep.disagreements:
            disjoint[p] = rep.disagreements
    assert criterion(5, not disjoint, f"{len(DUAL_POLYS)} Pisot numbers, {checked} pairs with n >= n0, "
                                      f"{sum(map(len, disjoint.values()))} disjoint")


def test_c06_radical_gaps(criterion):
    res = fd_scan(Rational(1), parse_symbolic("radical:2/1:3"), 0.5, 300)
    expected = list(range(3, 301, 3))
    hits_ok = res.hits == expected and all(g == 3 for g in res.gaps)
    w = window_estimates(res.trace, 0.5)
    restricted_ok = w.restricted_sup.fraction_bounds()[0] <= 1 + TOL_RESTRICTED
    tail_hits = [n for n in res.hits if n > 7]
    ok = hits_ok and restricted_ok
    assert criterion(6, ok, f"hits outside multiples of 3: {sorted(set(res.hits) - set(expected))}, "
                            f"multiples of 3 all hit: {set(expected) <= set(res.hits)}, "
                            f"restricted sup window {w.restricted_sup.format(6)}; "
                            f"hits with n >= 8 equal the multiples of 3: {tail_hits == list(range(9, 301, 3))}")


def test_c07_greedy_construction(criterion):
    t0 = time.perf_counter()
    s = greedy_alpha(Rational(3, 2), "custom", 3, [1, 2, 4])
    exact_ok = [s.coefficient_rational(j) for j in (1, 2, 3)] == [Fraction(2, 3), 0, Fraction(3, 4)]
    integral_ok = all(s.integrality_holds(g) for g in (1, 2, 3))
    g7 = greedy_alpha(PHI, "factorial", 7)
    alpha = g7.partial_alpha_symbolic()
    measured, bad = [], []
    for g in range(1, 7):
        smp = direct_sample(alpha, PHI, g7.exponents[g - 1])
        if smp.status == "skipped":
            measured.append("skip")
            continue
        measured.append(f"{float(smp.sigma.center):.1f}")
        if smp.status == "ok" and smp.sigma.hi < g - 1:
            bad.append(g)
    elapsed = time.perf_counter() - t0
    ok = exact_ok and integral_ok and not bad and elapsed < 60
    assert criterion(7, ok, f"3/2 coefficients exact={exact_ok} integral={integral_ok}; phi sigma_(g!) for g=1..6: "
                            f"{measured} (g=1 has alpha*phi < 1); {elapsed:.1f} s (budget 60 s)")


def test_c08_nested_intervals(criterion):
    st = nested_zeta(Rational(1), (2, 3), 5)
    x = st.midpoint
    tr = trace(Rational(1), Rational(x.numerator, x.denominator), st.exponents[-1])
    bad = []
    for u, n in enumerate(st.exponents, start=1):
        lo, hi = tr.by_n(n).distance.fraction_bounds()
        if lo > Fraction(1, 3**u) + TOL_NESTED:
            bad.append(u)
    ok = st.strictly_nested() and not bad
    assert criterion(8, ok, f"exponents {st.exponents}, strictly nested={st.strictly_nested()}, "
                            f"steps with ||zeta^n_u|| > 3^-u: {bad}")


def test_c09_diophantine_sanity(criterion):
    inputs = {"sqrt2": (0, 1, 2, 1), "phi": (1, 1, 5, 2), "sqrt3": (0, 1, 3, 1), "(1+sqrt13)/2": (1, 1, 13, 2)}
    estimates, det_ok = {}, True
    for name, abcd in inputs.items():
        cf = cf_expand(quadratic_provider(*abcd), 30)
        det_ok = det_ok and cf.certified_depth == 30 and cf.determinants_ok()
        estimates[name] = irrationality_exponent_estimate(cf).value
    in_range = all(LAMBDA_RANGE[0] <= e.lo and e.hi <= LAMBDA_RANGE[1] for e in estimates.values())
    shown = ", ".join(f"{k}={float(v.center):.4f}" for k, v in estimates.items())
    assert criterion(9, in_range and det_ok, f"lambda1 at depth 30: {shown}; determinants exact={det_ok}")


def test_c10_bound_ladder(criterion):
    rep = bound_ladder(Rational(1), PHI)
    g = rep.get("uniform_degree_height").value
    w = window_estimates(trace(Rational(1), PHI, 400), 0.5)
    golden_ok = abs(float(g.center) - GOLDEN_UNIFORM) <= TOL_LADDER and w.sup.hi < g.lo
    rep = bound_ladder(Rational(1), Rational(3, 2))
    r = rep.get("radical").value
    w2 = window_estimates(trace(Rational(1), Rational(3, 2), 400), 0.5)
    radical_ok = abs(float(r.center) - CBRT_RADICAL) <= TOL_LADDER and w2.restricted_sup.hi < r.lo
    ok = golden_ok and radical_ok
    assert criterion(10, ok, f"phi: bound {g.format(6)} vs measured sup {w.sup.format(6)}; "
                             f"3/2: bound {r.format(6)} vs measured restricted sup {w2.restricted_sup.format(6)}")


def test_c11_rarity(criterion):
    rep = rarity_scan((1, 2), (Fraction(3, 2), 3), 1000, 0.5, (5, 10, 20, 40), seed=0)
    fr = [rep.fractions[n] for n in (5, 10, 20, 40)]
    assert criterion(11, rep.non_increasing, f"seed 0, 1000 samples, hit fractions at n_min 5/10/20/40: {fr}")
