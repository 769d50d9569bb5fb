from fractions import Fraction

import pytest
from mpmath import mpf

from pisotsigma.errors import InputError
from pisotsigma.polyalg import (
    FieldArithmetic,
    IntPoly,
    height,
    irreducible_by_pisot_criterion,
    is_squarefree,
    isolate_roots,
    power_sums,
    refine_real_root,
    select_root,
    trace_sequence,
    twisted_trace,
)

# Padovan-like trace sequence of x^3 - x - 1 and Lucas numbers of x^2 - x - 1
PERRIN = [3, 0, 2, 3, 2, 5, 5, 7, 10, 12, 17, 22, 29, 39]
LUCAS = [2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123]
PLASTIC = "1.324717957244746025960908854478097340734"


def test_parse_and_print():
    P = IntPoly.parse("2*x^2 - 5x + 3")
    assert P.coeffs == (3, -5, 2)
    assert str(P) == "2*x^2-5*x+3"
    assert str(IntPoly.parse("x^3-x-1")) == "x^3-x-1"
    assert height(IntPoly.parse("x^4-7x^3+2")) == 7


@pytest.mark.parametrize("bad", ["", "x^", "y^2-1", "x^2+1.5"])
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        IntPoly.parse(bad)


def test_squarefree():
    assert is_squarefree(IntPoly.parse("x^3-x-1"))
    assert not is_squarefree(IntPoly.parse("x^3-x^2-x+1"))


def test_trace_sequences():
    assert trace_sequence(IntPoly.parse("x^3-x-1"), 13) == PERRIN
    assert list(power_sums(IntPoly.parse("x^2-x-1"), 0, 10).values()) == LUCAS
    # (1 + phi) phi^n = phi^(n+2)
    assert twisted_trace(IntPoly.parse("x^2-x-1"), (1, 1), 5) == LUCAS[2:8]


def test_field_arithmetic_cube_root_two():
    F = FieldArithmetic(IntPoly.parse("x^3-2"))
    x = F.x_power(1)
    assert F.constant_value(F.power(x, 3)) == 2
    assert F.power(x, 7) == (0, 4, 0)


def test_isolation_oracle():
    spectrum = isolate_roots(IntPoly.parse("x^3-x-1"), mpf(2) ** -130)
    top = spectrum.roots[0]
    assert top.real is True
    lo, hi = top.real_bracket()
    r = Fraction(PLASTIC)
    assert lo - Fraction(1, 10**39) <= r <= hi + Fraction(1, 10**39)
    assert [d.real for d in spectrum.roots].count(False) == 2


def test_select_and_refine_real_root():
    d = select_root(IntPoly.parse("x^2-2"), "max")
    assert abs(float(d.center[0]) - 2**0.5) < 1e-15
    lo, hi = refine_real_root(IntPoly.parse("x^2-2"), Fraction(1), Fraction(2), 80)
    assert lo * lo < 2 < hi * hi
    assert hi - lo < Fraction(1, 2**78)


def test_irreducibility_criterion():
    for text, expect in [("x^3-x-1", True), ("x^2-3x+1", True), ("x^3-4x^2+1", True)]:
        P = IntPoly.parse(text)
        assert irreducible_by_pisot_criterion(isolate_roots(P), P) is expect
    P = IntPoly.parse("x^2-4")
    assert irreducible_by_pisot_criterion(isolate_roots(P), P) is False
