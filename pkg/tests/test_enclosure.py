from fractions import Fraction

import pytest
from mpmath import mp, mpf

from pisotsigma.enclosure import Enclosure, decimal_down, decimal_up, mpf_to_fraction, parse_enclosure

SQRT2_40 = Fraction("1.414213562373095048801688724209698078569")
LOG3_30 = Fraction("1.098612288668109691395245236922")


def test_exact_rational_is_contained_and_tight():
    e = Enclosure.exact(Fraction(1, 3), 64)
    lo, hi = e.fraction_bounds()
    assert lo <= Fraction(1, 3) <= hi
    assert hi - lo < Fraction(1, 2**60)


def test_dyadic_is_exact():
    e = Enclosure.exact(Fraction(5, 8), 64)
    assert e.is_exact()
    assert e.format() == "6.250000000000000000000000e-1±0"


def test_negation_is_exact_at_high_precision():
    x = Enclosure.exact(Fraction(2**200 + 1, 3**90), 400)
    lo, hi = x.fraction_bounds()
    nlo, nhi = (-x).fraction_bounds()
    assert (nlo, nhi) == (-hi, -lo)


def test_sqrt_and_log_oracles():
    s = Enclosure.exact(2, 128).sqrt()
    lo, hi = s.fraction_bounds()
    assert lo <= SQRT2_40 + Fraction(1, 10**39) and SQRT2_40 - Fraction(1, 10**39) <= hi
    assert hi - lo < Fraction(1, 10**35)
    g = Enclosure.exact(3, 128).log()
    lo, hi = g.fraction_bounds()
    assert abs((lo + hi) / 2 - LOG3_30) < Fraction(1, 10**29)


def test_arithmetic_contains_true_value():
    a = Enclosure.exact(Fraction(1, 7), 64)
    b = Enclosure.exact(Fraction(3, 11), 64)
    for e, truth in [(a + b, Fraction(1, 7) + Fraction(3, 11)), (a * b, Fraction(3, 77)),
                     (a - b, Fraction(1, 7) - Fraction(3, 11)), (a / b, Fraction(11, 21))]:
        lo, hi = e.fraction_bounds()
        assert lo <= truth <= hi


def test_comparisons_are_three_valued():
    a = Enclosure(mpf(1), mpf(2), 64)
    assert a.certainly_gt(Fraction(1, 2))
    assert not a.certainly_gt(Fraction(3, 2))
    assert not a.certainly_lt(Fraction(3, 2))
    assert a.contains(Fraction(3, 2))


def test_directed_decimals():
    x = Fraction(2, 3)
    assert decimal_down(x, 5) == "6.6666e-1"
    assert decimal_up(x, 5) == "6.6667e-1"
    assert Fraction(decimal_down(x, 12)) <= x <= Fraction(decimal_up(x, 12))


@pytest.mark.parametrize("bits", [64, 200, 1000])
def test_format_round_trip_is_superset(bits):
    with mp.workprec(bits):
        v = mp.pi
    e = Enclosure.exact(mpf_to_fraction(v), bits).log()
    lo, hi = e.fraction_bounds()
    plo, phi = parse_enclosure(e.format())
    assert plo <= lo and hi <= phi
