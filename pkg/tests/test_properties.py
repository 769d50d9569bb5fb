"""Property-based checks with hypothesis."""

from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from pisotsigma.dioph import cf_expand, irrationality_exponent_estimate, quadratic_provider
from pisotsigma.enclosure import Enclosure, decimal_down, decimal_up, parse_enclosure
from pisotsigma.exactreal import Rational, exact_hit_test, nearest_int_exact, parse_symbolic
from pisotsigma.pisot import certify_pisot, family_Q
from pisotsigma.polyalg import IntPoly, trace_sequence
from pisotsigma.sigma import direct_sample

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=10**4)
SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@SETTINGS
@given(fractions, fractions, st.sampled_from([53, 64, 200]))
def test_arithmetic_encloses(a, b, bits):
    ea, eb = Enclosure.exact(a, bits), Enclosure.exact(b, bits)
    results = [(ea + eb, a + b), (ea - eb, a - b), (ea * eb, a * b)]
    if b != 0:
        results.append((ea / eb, a / b))
    for e, truth in results:
        lo, hi = e.fraction_bounds()
        assert lo <= truth <= hi


@SETTINGS
@given(positive)
def test_sqrt_and_log_enclosures(x):
    e = Enclosure.exact(x, 80)
    s = e.sqrt()
    lo, hi = s.fraction_bounds()
    assert lo * lo <= x * (1 + Fraction(1, 2**70)) and x * (1 - Fraction(1, 2**70)) <= hi * hi
    # |x - 1| >= 1e-4 unless x = 1, far above the 80-bit radius
    assert e.log().contains(0) == (x == 1)


@SETTINGS
@given(fractions, st.integers(min_value=2, max_value=30))
def test_directed_decimal_bracket(x, digits):
    assert Fraction(decimal_down(x, digits)) <= x <= Fraction(decimal_up(x, digits))


@SETTINGS
@given(fractions, st.sampled_from([64, 128, 300]))
def test_format_parses_to_superset(x, bits):
    e = Enclosure.exact(x, bits) / 7
    lo, hi = e.fraction_bounds()
    plo, phi = parse_enclosure(e.format())
    assert plo <= lo and hi <= phi


@SETTINGS
@given(fractions)
def test_nearest_integer_convention(x):
    r = nearest_int_exact(x)
    d = abs(x - r.nearest)
    assert d <= Fraction(1, 2)
    if d == Fraction(1, 2):
        assert r.nearest < x


@SETTINGS
@given(st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=5).filter(lambda c: c[0] != 0))
def test_trace_sequence_recurrence(low):
    P = IntPoly(tuple(low) + (1,))
    k = P.degree
    s = trace_sequence(P, k + 12)
    assert s[0] == k
    for n in range(k, k + 13):
        assert sum(P.coeffs[j] * s[n - k + j] for j in range(k + 1)) == 0


@SETTINGS
@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=10**9))
def test_rational_cf_round_trip(x):
    cf = cf_expand(x, 200)
    assert cf.terminated
    p, q = cf.convergents[-1]
    assert Fraction(p, q) == x
    assert cf.determinants_ok()


def _periodic_quadratic(period):
    """Purely periodic [p1, ..., pk, p1, ...] as (a + sqrt(c)) / d."""
    p0, q0, p1, q1 = 1, 0, period[0], 1
    for a in period[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    # x = (p1 x + p0) / (q1 x + q0)  =>  q1 x^2 + (q0 - p1) x - p0 = 0
    return p1 - q0, (q0 - p1) ** 2 + 4 * q1 * p0, 2 * q1


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=4))
def test_bounded_quotient_quadratics_have_exponent_near_one(period):
    a, c, d = _periodic_quadratic(period)
    cf = cf_expand(quadratic_provider(a, 1, c, d), 30)
    assert cf.quotients[1:len(period) + 1] == period[1:] + period[:1]
    est = irrationality_exponent_estimate(cf)
    assert 0.9 <= float(est.value.lo) and float(est.value.hi) <= 1.1


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.data())
def test_family_members_are_pisot(k, data):
    M = data.draw(st.integers(min_value=3, max_value=14))
    N = data.draw(st.integers(min_value=1, max_value=M - 2))
    cert = certify_pisot(family_Q(k, M, N))
    assert cert
    assert cert.pisot_root.certainly_gt(1) and cert.f.certainly_lt(1)
    assert cert.is_unit == (N == 1)


@SETTINGS
@given(st.integers(min_value=2, max_value=400))
def test_golden_sigma_constant(n):
    s = direct_sample(Rational(1), parse_symbolic("polyroot:x^2-x-1:max"), n)
    assert s.sigma.contains(1)


@SETTINGS
@given(st.integers(min_value=1, max_value=40), st.integers(min_value=1, max_value=40),
       st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6),
       st.integers(min_value=1, max_value=25))
def test_rational_exact_hits_match_arithmetic(ap, aq, zp, zq, n):
    alpha = Rational(ap, aq)
    zeta = Rational(zp + zq, zq)
    v = alpha.value * zeta.value ** n
    assert exact_hit_test(alpha, zeta, n) == (v.denominator == 1)
