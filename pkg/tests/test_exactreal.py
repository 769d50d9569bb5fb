from fractions import Fraction

import pytest

from pisotsigma.errors import InputError
from pisotsigma.exactreal import (
    Radical,
    Rational,
    algebraic_degree,
    eval_symbolic,
    exact_hit_test,
    exact_rational_value,
    is_algebraic_integer,
    minimal_polynomial,
    nearest_int_exact,
    parse_symbolic,
    radical_normal_form,
    refine_until_certified,
    same_field,
)

PHI = parse_symbolic("polyroot:x^2-x-1:max")
CBRT2 = parse_symbolic("radical:2/1:3")


@pytest.mark.parametrize("text", [
    "rat:3/2", "radical:2/1:3", "polyroot:x^3-x-1:max", "infield:polyroot:x^2-x-1:max:x+1:2:1",
])
def test_symbolic_round_trip(text):
    assert str(parse_symbolic(text)) == text


@pytest.mark.parametrize("bad", ["1.5", "polyroot:x-2:max", "rat:1/0", "radical:2/1:0", "rat:abc", "foo:1"])
def test_symbolic_rejects(bad):
    with pytest.raises(InputError):
        parse_symbolic(bad)


def test_rational_reduces():
    assert Rational(6, 4) == Rational(3, 2)


def test_radical_normal_form():
    assert radical_normal_form(parse_symbolic("radical:8/1:6")) == (2, 1, 2)
    assert radical_normal_form(parse_symbolic("polyroot:x^3-2:max")) == (2, 1, 3)
    assert radical_normal_form(parse_symbolic("radical:4/9:2")) == (2, 3, 1)
    assert radical_normal_form(PHI) is None


def test_ties_round_down():
    assert nearest_int_exact(Fraction(5, 2)).nearest == 2
    assert nearest_int_exact(Fraction(7, 2)).nearest == 3
    assert nearest_int_exact(Fraction(-5, 2)).nearest == -3


def test_golden_powers_are_lucas_numbers():
    # phi^20 = L_20 - phi^-20 with L_20 = 15127
    res = refine_until_certified(PHI, 20)
    assert res.nearest == 15127 and res.certified and not res.exact_hit
    lo, hi = res.distance.fraction_bounds()
    assert lo <= Fraction("6.6106961351895970047e-5") + Fraction(1, 10**24)
    assert Fraction("6.6106961351895970047e-5") - Fraction(1, 10**24) <= hi


def test_rational_powers_are_exact():
    res = refine_until_certified(Rational(3, 2), 4)
    assert res.nearest == 5
    assert res.distance.fraction_bounds() == (Fraction(1, 16), Fraction(1, 16))


def test_exact_hits():
    assert exact_hit_test(Rational(1), CBRT2, 3)
    assert exact_hit_test(Rational(1), CBRT2, 6)
    assert not exact_hit_test(Rational(1), CBRT2, 7)
    assert exact_rational_value(Rational(1), CBRT2, 6) == (True, Fraction(4))
    assert exact_rational_value(Rational(1), CBRT2, 7) == (True, None)
    assert exact_hit_test(Rational(1, 4), Rational(2), 2)
    assert not exact_hit_test(Rational(1), PHI, 5)


def test_eval_symbolic_oracle():
    e = eval_symbolic(Radical(2, 1, 2), 100)
    lo, hi = e.fraction_bounds()
    ref = Fraction("1.414213562373095048801688724209698")
    assert abs((lo + hi) / 2 - ref) < Fraction(1, 10**30)


def test_minimal_polynomials():
    assert minimal_polynomial(CBRT2) == [-2, 0, 0, 1]
    # 1 + phi = phi^2 has minimal polynomial x^2 - 3x + 1
    x = parse_symbolic("infield:polyroot:x^2-x-1:max:x+1:1:0")
    assert minimal_polynomial(x) == [1, -3, 1]
    assert algebraic_degree(x) == 2
    assert is_algebraic_integer(x)
    assert not is_algebraic_integer(Radical(1, 2, 1))
    assert same_field(x, PHI)
    assert minimal_polynomial(Rational(3, 2)) == [Fraction(-3, 2), 1]
