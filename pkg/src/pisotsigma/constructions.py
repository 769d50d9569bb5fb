"""Explicit constructions and structural detectors.

* :func:`greedy_alpha` builds ``alpha = sum_j c_j zeta^(-n_j)`` so that every
  ``alpha zeta^(n_g)`` is within a tail sum of an integer;
* :func:`nested_zeta` shrinks rational intervals so that every zeta in the
  final interval has ``||alpha zeta^(n_u)|| <= b_1^(-u)``;
* :func:`detect_integer_power_form`, :func:`fd_scan`, :func:`scaling_check`
  and :func:`rarity_scan` probe the gap structure and scaling behaviour of hits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from .enclosure import Enclosure, decimal_down, decimal_up
from .errors import InputError, PrecisionCapExceeded
from .exactreal import (
    DEFAULT_MAX_BITS,
    InField,
    PolyRoot,
    Radical,
    Rational,
    SymbolicReal,
    eval_symbolic,
    field_of,
    minimal_polynomial,
    parse_symbolic,
)
from .polyalg import FieldArithmetic, IntPoly
from .sigma import SigmaTrace, sigma_from, trace

# ---------------------------------------------------------------------------
# exponent generators


def exponent_sequence(tag: str, steps: int, custom=None) -> list[int]:
    """``factorial`` (n_j = j!), ``powers`` (n_j = 2^j) or ``custom``.

    A custom list is returned whole, so a resumed run can use its later entries.
    """
    if tag == "factorial":
        return [math.factorial(j) for j in range(1, steps + 1)]
    if tag == "powers":
        return [2 ** j for j in range(steps)]
    if tag == "custom":
        seq = [int(x) for x in custom or []]
        if len(seq) < steps:
            raise InputError("custom exponent list shorter than the number of steps")
        return seq
    raise InputError(f"unknown exponent generator {tag!r}")


# ---------------------------------------------------------------------------
# greedy alpha


def _field_for(zeta: SymbolicReal) -> tuple[IntPoly, FieldArithmetic]:
    key, D, _ = field_of(zeta)
    if key is None:
        if not isinstance(zeta, Rational):
            nf = minimal_polynomial(zeta)
            v = -nf[0]
        else:
            v = zeta.value
        D = IntPoly((-v.numerator, v.denominator))
    return D, FieldArithmetic(D)


def _field_elem_raw(zeta: SymbolicReal, elem, bits: int) -> Enclosure:
    z = eval_symbolic(zeta, bits)
    acc = Enclosure.exact(0, bits)
    for c in reversed(elem):
        acc = acc * z + c
    return acc


def _field_elem_enclosure(zeta: SymbolicReal, elem, bits: int, max_bits: int = DEFAULT_MAX_BITS) -> Enclosure:
    """Value of a field element with relative width below 2^-bits.

    Coefficients can be far larger than the value (cancellation), so the
    working precision grows until the requested accuracy is reached.  A
    nonzero element of the field never evaluates to 0, so this terminates.
    """
    if not any(elem):
        return Enclosure.exact(0, bits)
    size = max((abs(c.numerator).bit_length() for c in elem if c), default=0)
    work = bits + size + 16
    target = Fraction(1, 1 << bits)
    while True:
        e = _field_elem_raw(zeta, elem, work)
        lo, hi = e.fraction_bounds()
        if lo * hi > 0 and hi - lo <= target * min(abs(lo), abs(hi)):
            return e.with_precision(bits)
        if work >= max_bits:
            raise PrecisionCapExceeded("field element evaluation did not converge", work)
        work = min(max_bits, work * 2)


def _certified_ceiling(zeta, F: FieldArithmetic, elem, max_bits: int, hint: int) -> int:
    """Exact ceiling of a field element: rational elements directly, others by refinement."""
    v = F.constant_value(elem)
    if v is not None:
        return math.ceil(v)
    bits = 64
    while bits < hint:
        bits *= 2
    while True:
        e = _field_elem_raw(zeta, elem, bits)
        lo, hi = e.fraction_bounds()
        if math.ceil(lo) == math.ceil(hi) and math.floor(lo) == math.floor(hi):
            return math.ceil(lo)
        if bits >= max_bits:
            raise PrecisionCapExceeded("greedy coefficient: ceiling undecided", bits)
        bits *= 2


@dataclass
class GreedySeries:
    zeta: SymbolicReal
    exponents: list[int]
    generator: str
    coefficients: list[tuple[Fraction, ...]] = field(default_factory=list)

    @property
    def steps_done(self) -> int:
        return len(self.coefficients)

    @property
    def _F(self) -> FieldArithmetic:
        return _field_for(self.zeta)[1]

    def x_sum(self, g: int):
        """``X_g = sum_{j<g} zeta^(n_g - n_j) c_j`` (1-based g) as a field element."""
        F = self._F
        acc = tuple(Fraction(0) for _ in range(F.k))
        ng = self.exponents[g - 1]
        for j in range(g - 1):
            acc = F.add(acc, F.mul(F.x_power(ng - self.exponents[j]), self.coefficients[j]))
        return acc

    def integral_value(self, g: int) -> Fraction | None:
        """``zeta^(n_g) sum_{j<=g} c_j zeta^(-n_j)``; an integer when the invariant holds."""
        F = self._F
        return F.constant_value(F.add(self.x_sum(g), self.coefficients[g - 1]))

    def integrality_holds(self, g: int) -> bool:
        """Exact check of the step invariant.

        For g >= 2 the scaled partial sum is an integer.  At g = 1 that sum is
        c_1 = zeta^(-n_1) itself, so the meaningful statement is c_1 zeta^(n_1) = 1.
        """
        if g == 1:
            F = self._F
            return F.mul(self.coefficients[0], F.x_power(self.exponents[0])) == F.one()
        v = self.integral_value(g)
        return v is not None and v.denominator == 1

    def coefficient_enclosure(self, j: int, bits: int = 64) -> Enclosure:
        return _field_elem_enclosure(self.zeta, self.coefficients[j - 1], bits)

    def coefficient_rational(self, j: int) -> Fraction | None:
        return self._F.constant_value(self.coefficients[j - 1])

    def partial_alpha_element(self, steps: int | None = None):
        F = self._F
        steps = self.steps_done if steps is None else steps
        acc = tuple(Fraction(0) for _ in range(F.k))
        for j in range(steps):
            acc = F.add(acc, F.mul(self.coefficients[j], F.x_power(-self.exponents[j])))
        return acc

    def partial_alpha_symbolic(self, steps: int | None = None) -> SymbolicReal:
        """The partial sum as an exact symbolic real (rational or element over zeta)."""
        elem = self.partial_alpha_element(steps)
        v = self._F.constant_value(elem)
        if v is not None:
            return Rational(v.numerator, v.denominator)
        den = math.lcm(*(c.denominator for c in elem))
        numer = tuple(int(c * den) for c in elem)
        return InField(self.zeta, numer, den, 0)

    def partial_alpha(self, bits: int = 64, steps: int | None = None) -> Enclosure:
        return _field_elem_enclosure(self.zeta, self.partial_alpha_element(steps), bits)

    def tail_bound(self, g: int) -> Enclosure | None:
        """``sum_{j>g} zeta^(-(n_j - n_g))`` over the known exponents (None for the last)."""
        if g >= len(self.exponents):
            return None
        z = eval_symbolic(self.zeta, 64)
        ng = self.exponents[g - 1]
        total = Enclosure.exact(0, 64)
        for nj in self.exponents[g:]:
            total = total + 1 / (z ** (nj - ng))
        return total

    def to_json(self) -> dict:
        return {
            "zeta": str(self.zeta),
            "generator": self.generator,
            "exponents": self.exponents,
            "coefficients": [[str(c) for c in elem] for elem in self.coefficients],
            "steps_done": self.steps_done,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GreedySeries":
        coeffs = [tuple(Fraction(c) for c in elem) for elem in data["coefficients"]]
        return cls(parse_symbolic(data["zeta"]), list(data["exponents"]), data["generator"], coeffs)


def greedy_step(series: GreedySeries, max_bits: int = DEFAULT_MAX_BITS) -> None:
    """Append the next coefficient ``c_g = ceil(X_g) - X_g`` (``c_1 = zeta^(-n_1)``)."""
    g = series.steps_done + 1
    if g > len(series.exponents):
        raise InputError("no exponent left for another step")
    F = series._F
    if g == 1:
        c = F.x_power(-series.exponents[0])
    else:
        X = series.x_sum(g)
        hint = int(series.exponents[g - 1] * math.log2(max(2.0, float(eval_symbolic(series.zeta, 32).hi)))) + 64
        top = _certified_ceiling(series.zeta, F, X, max_bits, hint)
        c = F.add(F.scale(F.one(), top), F.scale(X, -1))
    series.coefficients.append(c)
    if not series.integrality_holds(g):
        raise AssertionError(f"integrality lost at step {g}")


def greedy_alpha(
    zeta: SymbolicReal,
    exponent_gen: str = "factorial",
    steps: int = 6,
    custom=None,
    max_bits: int = DEFAULT_MAX_BITS,
    resume: GreedySeries | None = None,
) -> GreedySeries:
    """Run (or resume) the greedy construction for ``steps`` steps in total."""
    z = eval_symbolic(zeta, 64)
    if not z.certainly_gt(1):
        raise InputError("greedy construction needs zeta > 1")
    if resume is not None:
        series = resume
        if len(series.exponents) < steps:
            series.exponents = exponent_sequence(series.generator, steps, series.exponents if series.generator == "custom" else None)
    else:
        exps = exponent_sequence(exponent_gen, steps, custom)
        if any(b <= a for a, b in zip(exps, exps[1:])) or exps[0] < 1:
            raise InputError("exponents must be positive and strictly increasing")
        series = GreedySeries(zeta, exps, exponent_gen)
    while series.steps_done < steps:
        greedy_step(series, max_bits)
    return series


# ---------------------------------------------------------------------------
# nested intervals


@dataclass
class NestedIntervalState:
    alpha: Fraction
    b1: Fraction
    intervals: list[tuple[Fraction, Fraction]]
    exponents: list[int] = field(default_factory=list)
    integers: list[int] = field(default_factory=list)
    branches: list[int] = field(default_factory=list)
    deltas: list[Fraction] = field(default_factory=list)

    @property
    def current(self) -> tuple[Fraction, Fraction]:
        return self.intervals[-1]

    @property
    def midpoint(self) -> Fraction:
        a, b = self.current
        return (a + b) / 2

    def strictly_nested(self) -> bool:
        return all(a0 < a1 and b1 < b0 for (a0, b0), (a1, b1) in zip(self.intervals, self.intervals[1:]))

    def distances_at(self, x: Fraction) -> list[Fraction]:
        """Exact ``||alpha x^(n_u)||`` for every recorded step."""
        out = []
        for n in self.exponents:
            v = self.alpha * x ** n
            r = math.ceil(v - Fraction(1, 2))
            out.append(abs(v - r))
        return out

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "b1": str(self.b1),
            "intervals": [[str(a), str(b)] for a, b in self.intervals],
            "exponents": self.exponents,
            "integers": [str(N) for N in self.integers],
            "branches": self.branches,
            "deltas": [str(d) for d in self.deltas],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NestedIntervalState":
        return cls(
            Fraction(data["alpha"]),
            Fraction(data["b1"]),
            [(Fraction(a), Fraction(b)) for a, b in data["intervals"]],
            list(data["exponents"]),
            [int(N) for N in data["integers"]],
            list(data["branches"]),
            [Fraction(d) for d in data["deltas"]],
        )


def _root_up(y: Fraction, n: int, m: int) -> Fraction:
    """A dyadic rational >= y^(1/n) with denominator 2^m."""
    r, _ = gmpy2.iroot(int((y.numerator << (m * n)) // y.denominator), n)
    return Fraction(int(r) + 1, 1 << m)


def _root_down(y: Fraction, n: int, m: int) -> Fraction:
    """A dyadic rational <= y^(1/n) with denominator 2^m."""
    r, _ = gmpy2.iroot(int((y.numerator << (m * n)) // y.denominator), n)
    return Fraction(int(r), 1 << m)


def nested_step(state: NestedIntervalState, branch: int) -> None:
    if branch not in (1, 2):
        raise InputError("branch choice must be 1 or 2")
    a, b = state.current
    alpha = state.alpha
    u = len(state.exponents) + 1
    n = (state.exponents[-1] + 1) if state.exponents else 1
    while alpha * (b ** n - a ** n) <= 2:
        n += 1
    lo, hi = alpha * a ** n, alpha * b ** n
    N = math.floor(lo) + branch
    delta = min(state.b1 ** -u, (N - lo) / 2, (hi - N) / 2)
    ya, yb = (N - delta) / alpha, (N + delta) / alpha
    m = 64
    while True:
        a_new, b_new = _root_up(ya, n, m), _root_down(yb, n, m)
        if a_new < b_new:
            break
        m *= 2
    if not (a < a_new < b_new < b):
        raise AssertionError("nested interval escaped its parent")
    state.intervals.append((a_new, b_new))
    state.exponents.append(n)
    state.integers.append(N)
    state.branches.append(branch)
    state.deltas.append(delta)


def nested_zeta(
    alpha: SymbolicReal | Fraction,
    seed: tuple,
    steps: int,
    branch_choices=None,
    resume: NestedIntervalState | None = None,
) -> NestedIntervalState:
    """Nested rational intervals with ``||alpha x^(n_u)|| <= b_1^(-u)`` on the last one.

    ``b_1`` is the right end of the seed interval; each exponent is the least
    one beyond the previous that makes the image of the interval wider than 2.
    """
    if isinstance(alpha, Rational):
        alpha = alpha.value
    if not isinstance(alpha, (int, Fraction)):
        raise InputError("nested-interval construction runs in exact rationals: alpha must be rational")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise InputError("alpha must be positive")
    a, b = Fraction(seed[0]), Fraction(seed[1])
    if not (1 < a < b):
        raise InputError("seed interval must satisfy 1 < a < b")
    state = resume or NestedIntervalState(alpha, b, [(a, b)])
    branch_choices = list(branch_choices or [])
    while len(state.exponents) < steps:
        i = len(state.exponents)
        state_branch = branch_choices[i] if i < len(branch_choices) else 1
        nested_step(state, state_branch)
    return state


# ---------------------------------------------------------------------------
# integer power form


def detect_integer_power_form(zeta: SymbolicReal) -> dict | None:
    """Minimal L with zeta^L rational, as ``{L, M}`` (integer power) or ``{L, p, q}``.

    zeta^L = c with L minimal forces X^L - c to be the minimal polynomial, so
    the test reads the exact minimal polynomial.
    """
    m = minimal_polynomial(zeta)
    L = len(m) - 1
    if any(c != 0 for c in m[1:-1]):
        return None
    c = -m[0]
    if c <= 0:
        return None
    if c.denominator == 1:
        return {"L": L, "M": c.numerator}
    return {"L": L, "p": c.numerator, "q": c.denominator}


# ---------------------------------------------------------------------------
# fd scan


@dataclass
class FdScanResult:
    eps: float
    n_max: int
    hits: list[int]
    exact_hits: list[int]
    ambiguous: list[int]
    gaps: list[int]
    L_detected: int | None
    trace: SigmaTrace | None = None

    @property
    def gap_histogram(self) -> dict[int, int]:
        h: dict[int, int] = {}
        for g in self.gaps:
            h[g] = h.get(g, 0) + 1
        return dict(sorted(h.items()))

    @property
    def liminf_gap_estimate(self) -> int | None:
        """Smallest gap among hits in the upper half of the scanned range."""
        tail = [self.hits[i + 1] - self.hits[i] for i in range(len(self.hits) - 1) if self.hits[i] > self.n_max // 2]
        return min(tail) if tail else None

    def gap_bound_holds(self, tail_only: bool = False) -> bool | None:
        if self.L_detected is None:
            return None
        if tail_only:
            g = self.liminf_gap_estimate
            return g is None or g >= self.L_detected
        return all(g >= self.L_detected for g in self.gaps)

    def rows(self):
        prev = None
        for s in self.trace.samples:
            if s.n not in self._hitset:
                continue
            if s.status == "exact_hit":
                lo = hi = "inf"
            else:
                lo, hi = decimal_down(s.sigma.lo, 17), decimal_up(s.sigma.hi, 17)
            yield {
                "n": s.n,
                "sigma_lo": lo,
                "sigma_hi": hi,
                "exact_hit": int(s.status == "exact_hit"),
                "gap_to_prev": "" if prev is None else s.n - prev,
            }
            prev = s.n

    @property
    def _hitset(self):
        return set(self.hits)

    def to_json(self) -> dict:
        return {
            "eps": self.eps,
            "n_max": self.n_max,
            "hits": self.hits,
            "exact_hits": self.exact_hits,
            "ambiguous": self.ambiguous,
            "gaps": self.gaps,
            "gap_histogram": {str(k): v for k, v in self.gap_histogram.items()},
            "liminf_gap_estimate": self.liminf_gap_estimate,
            "L_detected": self.L_detected,
            "gap_bound_all": self.gap_bound_holds(False),
            "gap_bound_tail": self.gap_bound_holds(True),
        }


def fd_scan(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    eps: float,
    n_max: int,
    target_rel_error: float = 1e-12,
    max_bits: int = DEFAULT_MAX_BITS,
) -> FdScanResult:
    """Indices n <= n_max with certified sigma_n >= 1 + eps (exact hits included)."""
    if eps <= 0:
        raise InputError("eps must be positive")
    tr = trace(alpha, zeta, n_max, target_rel_error, max_bits)
    threshold = Fraction(1) + Fraction(eps)
    hits, exact, amb = [], [], []
    for s in tr.samples:
        if s.status == "exact_hit":
            hits.append(s.n)
            exact.append(s.n)
        elif s.status == "ok":
            if s.sigma.certainly_gt(threshold) or s.sigma.lo == threshold:
                hits.append(s.n)
            elif not s.sigma.certainly_lt(threshold):
                amb.append(s.n)
    gaps = [b - a for a, b in zip(hits, hits[1:])]
    form = detect_integer_power_form(zeta)
    return FdScanResult(eps, n_max, hits, exact, amb, gaps, form["L"] if form else None, tr)


# ---------------------------------------------------------------------------
# scaling


def scale_symbolic(x: SymbolicReal, M: int) -> SymbolicReal:
    """Symbolic ``M x`` for a positive integer M."""
    if M < 1:
        raise InputError("scale factor must be a positive integer")
    if M == 1:
        return x
    if isinstance(x, Rational):
        return Rational(x.p * M, x.q)
    if isinstance(x, Radical):
        return Radical(x.p * M ** x.L, x.q, x.L)
    if isinstance(x, InField):
        g = math.gcd(M, x.denom)
        return InField(x.base, tuple(c * (M // g) for c in x.numer_poly), x.denom // g, x.power_shift)
    if isinstance(x, PolyRoot):
        if x.selector != "max":
            raise InputError("scaling supports polynomial roots with the max selector")
        k = x.poly.degree
        # (M x) is a root of P(y / M) M^k
        return PolyRoot(IntPoly(tuple(c * M ** (k - i) for i, c in enumerate(x.poly.coeffs))), "max")
    raise InputError("unsupported symbolic real")


@dataclass
class ScalingReport:
    M: int
    N: int
    checked: int
    applicable: int
    per_n_failures: list[int]
    formula_failures: list[int]
    window_left: Enclosure | None
    window_right: Enclosure | None
    limit_prediction: Enclosure | None

    @property
    def conformant(self) -> bool:
        return not self.per_n_failures and not self.formula_failures

    def to_json(self) -> dict:
        f = lambda e: None if e is None else e.format(12)
        return {
            "M": self.M,
            "N": self.N,
            "checked": self.checked,
            "applicable": self.applicable,
            "per_n_failures": self.per_n_failures,
            "formula_failures": self.formula_failures,
            "window_inf_scaled": f(self.window_left),
            "window_inf_original": f(self.window_right),
            "limit_prediction": f(self.limit_prediction),
            "conformant": self.conformant,
        }


def scaling_check(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    M: int,
    N: int,
    n_max: int,
    tail_fraction: float = 0.5,
    target_rel_error: float = 1e-12,
) -> ScalingReport:
    """Check ``||(M alpha)(N zeta)^n|| <= M N^n ||alpha zeta^n||`` whenever the right side is < 1/2.

    For each such n the induced lower bound on sigma_n of the scaled pair is
    checked too; the limit relation between window estimates is reported as a
    prediction only, since it holds for liminf, not at finite n.
    """
    if M < 1 or N < 1:
        raise InputError("M and N must be positive integers")
    a2, z2 = scale_symbolic(alpha, M), scale_symbolic(zeta, N)
    right = trace(alpha, zeta, n_max, target_rel_error)
    left = trace(a2, z2, n_max, target_rel_error)
    per_n, formula = [], []
    applicable = 0
    for r, l in zip(right.samples, left.samples):
        if r.status != "ok" or l.status == "skipped":
            continue
        factor = M * N ** r.n
        bound = r.distance * factor
        if not bound.certainly_lt(Fraction(1, 2)):
            continue
        applicable += 1
        if l.status == "exact_hit":
            per_n.append(r.n)
            continue
        if l.distance.lo > bound.hi:
            per_n.append(r.n)
            continue
        # sigma_n(scaled) >= (sigma_n log(v) - log(M N^n)) / log(M N^n v)
        logv = r.value.log()
        logf = Enclosure.exact(factor, 64).log()
        rhs = (r.sigma * logv - logf) / (logv + logf)
        if l.sigma.hi < rhs.lo:
            formula.append(r.n)
    wl = wr = pred = None
    try:
        wl = left.window(tail_fraction).inf
        wr = right.window(tail_fraction).inf
    except InputError:
        pass
    if wr is not None:
        logz = eval_symbolic(zeta, 64).log()
        logN = Enclosure.exact(N, 64).log()
        p = (wr * logz - logN) / (logz + logN)
        pred = p if p.lo > 0 else Enclosure.exact(0, 64)
    return ScalingReport(M, N, len(right.samples), applicable, per_n, formula, wl, wr, pred)


# ---------------------------------------------------------------------------
# rarity scan


@dataclass
class RarityReport:
    seed: int
    samples: int
    eps: float
    n_max: int
    fractions: dict[int, float]
    counts: dict[int, int]

    @property
    def non_increasing(self) -> bool:
        keys = sorted(self.fractions)
        return all(self.fractions[a] >= self.fractions[b] for a, b in zip(keys, keys[1:]))

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "eps": self.eps,
            "n_max": self.n_max,
            "hit_fraction": {str(k): v for k, v in sorted(self.fractions.items())},
            "hit_count": {str(k): v for k, v in sorted(self.counts.items())},
            "non_increasing": self.non_increasing,
            "note": "qualitative sampling check, not a dimension estimate",
        }


def _random_rational(rng: random.Random, lo: Fraction, hi: Fraction, bits: int = 20) -> Fraction:
    return lo + (hi - lo) * Fraction(rng.randrange(1, 1 << bits), 1 << bits)


def _last_hit(alpha: Fraction, zeta: Fraction, eps: Fraction, n_max: int) -> int:
    """Largest n <= n_max with certified sigma_n >= 1 + eps (0 if none)."""
    last = 0
    v = alpha
    for n in range(1, n_max + 1):
        v *= zeta
        if v <= 1:
            continue
        r = math.ceil(v - Fraction(1, 2))
        d = abs(v - r)
        if d == 0:
            last = n
            continue
        # sigma_n >= 1 + eps  <=>  d <= v^-(1+eps); decided on enclosures
        s = sigma_from(Enclosure.exact(v, 64), Enclosure.exact(d, 64))
        if not s.certainly_lt(1 + eps):
            last = n
    return last


def rarity_scan(
    alpha_range: tuple,
    zeta_range: tuple,
    samples: int,
    eps: float,
    n_min_values=(5, 10, 20, 40),
    n_max: int = 60,
    seed: int = 0,
) -> RarityReport:
    """Fraction of random rational pairs with a hit sigma_n >= 1+eps at some n in [n_min, n_max]."""
    a_lo, a_hi = (Fraction(x) for x in alpha_range)
    z_lo, z_hi = (Fraction(x) for x in zeta_range)
    if not (a_lo < a_hi and z_lo < z_hi):
        raise InputError("sampling region must have positive width in both coordinates")
    if z_lo <= 1 or a_lo <= 0:
        raise InputError("need zeta > 1 and alpha > 0 throughout the region")
    if samples < 1:
        raise InputError("samples must be positive")
    rng = random.Random(seed)
    eps_f = Fraction(eps)
    lasts = []
    for _ in range(samples):
        a = _random_rational(rng, a_lo, a_hi)
        z = _random_rational(rng, z_lo, z_hi)
        lasts.append(_last_hit(a, z, eps_f, n_max))
    counts = {m: sum(1 for last in lasts if last >= m) for m in n_min_values}
    fractions = {m: counts[m] / samples for m in n_min_values}
    return RarityReport(seed, samples, eps, n_max, fractions, counts)
