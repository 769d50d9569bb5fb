import json
from fractions import Fraction

import pytest

from pisotsigma.constructions import (
    GreedySeries,
    NestedIntervalState,
    detect_integer_power_form,
    exponent_sequence,
    fd_scan,
    greedy_alpha,
    nested_zeta,
    rarity_scan,
    scaling_check,
)
from pisotsigma.errors import InputError
from pisotsigma.exactreal import Rational, parse_symbolic

PHI = parse_symbolic("polyroot:x^2-x-1:max")


def test_exponent_sequences():
    assert exponent_sequence("factorial", 5) == [1, 2, 6, 24, 120]
    assert exponent_sequence("powers", 5) == [1, 2, 4, 8, 16]
    with pytest.raises(InputError):
        greedy_alpha(Rational(2), "custom", 3, [1, 3, 2])


def test_greedy_three_halves():
    s = greedy_alpha(Rational(3, 2), "custom", 3, [1, 2, 4])
    assert [s.coefficient_rational(j) for j in (1, 2, 3)] == [Fraction(2, 3), 0, Fraction(3, 4)]
    assert [s.integral_value(g) for g in (1, 2, 3)] == [Fraction(2, 3), 1, 3]
    assert all(s.integrality_holds(g) for g in (1, 2, 3))
    # 2/3 * 2/3 + 3/4 * (2/3)^4
    assert s.partial_alpha_symbolic() == Rational(16, 27)


def test_greedy_integer_zeta():
    s = greedy_alpha(Rational(3), "powers", 2)
    assert [s.coefficient_rational(j) for j in (1, 2)] == [Fraction(1, 3), 0]


def test_greedy_state_round_trip_and_resume():
    s = greedy_alpha(PHI, "factorial", 3)
    data = json.loads(json.dumps(s.to_json()))
    back = GreedySeries.from_json(data)
    assert back.coefficients == s.coefficients and back.exponents == s.exponents
    full = greedy_alpha(PHI, "factorial", 4)
    resumed = greedy_alpha(PHI, "factorial", 4, resume=back)
    assert resumed.coefficients == full.coefficients


def test_nested_intervals():
    st = nested_zeta(Rational(1), (2, 3), 5)
    assert st.exponents == [2, 3, 6, 10, 16]
    assert st.strictly_nested()
    for u, d in enumerate(st.distances_at(st.midpoint), start=1):
        assert d <= Fraction(1, 3**u)
    other = nested_zeta(Rational(1), (2, 3), 2, [2, 2])
    (a1, b1), (a2, b2) = st.intervals[2], other.intervals[2]
    assert b1 < a2 or b2 < a1


def test_nested_round_trip_and_resume():
    st = nested_zeta(Rational(1), (2, 3), 3)
    back = NestedIntervalState.from_json(json.loads(json.dumps(st.to_json())))
    assert back.intervals == st.intervals
    assert nested_zeta(Rational(1), (2, 3), 5, resume=back).intervals == nested_zeta(Rational(1), (2, 3), 5).intervals


def test_nested_rejects_bad_seed():
    with pytest.raises(InputError):
        nested_zeta(Rational(1), (3, 2), 2)
    with pytest.raises(InputError):
        nested_zeta(PHI, (2, 3), 2)


def test_detect_integer_power_form():
    assert detect_integer_power_form(parse_symbolic("radical:4/1:2")) == {"L": 1, "M": 2}
    assert detect_integer_power_form(parse_symbolic("radical:2/1:6")) == {"L": 6, "M": 2}
    assert detect_integer_power_form(parse_symbolic("radical:4/9:2")) == {"L": 1, "p": 2, "q": 3}
    assert detect_integer_power_form(PHI) is None


def test_fd_scan_cube_root():
    res = fd_scan(Rational(1), parse_symbolic("radical:2/1:3"), 0.5, 60)
    assert res.L_detected == 3
    assert res.exact_hits == list(range(3, 61, 3))
    assert res.gap_bound_holds(tail_only=True)
    rows = list(res.rows())
    assert rows[0]["n"] == res.hits[0]


def test_scaling_golden():
    rep = scaling_check(Rational(1), PHI, 2, 1, 80)
    assert rep.conformant and not rep.per_n_failures


def test_rarity_is_deterministic():
    a = rarity_scan((1, 2), (Fraction(3, 2), 3), 60, 0.5, seed=3)
    b = rarity_scan((1, 2), (Fraction(3, 2), 3), 60, 0.5, seed=3)
    assert a.to_json() == b.to_json()
    with pytest.raises(InputError):
        rarity_scan((1, 2), (1, 3), 10, 0.5)
