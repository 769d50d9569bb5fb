"""Traces of sigma_n(alpha, zeta) = -log ||alpha zeta^n|| / log(alpha zeta^n).

Two routes compute ``||alpha zeta^n||``:

* ``direct``: evaluate ``alpha zeta^n`` on the doubling precision ladder and
  read off the nearest integer;
* ``trace``: for Pisot zeta and alpha an integral element of Q(zeta), the
  nearest integer is the exact twisted power sum ``t_n`` and the distance is
  the (small) conjugate sum ``|sum_{j>=2} alpha_j zeta_j^n|`` once that sum is
  certified below 1/2.  Its index of activation is called ``n0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import iv, mp, mpf

from .enclosure import Enclosure, ivprec
from .errors import InputError, PrecisionCapExceeded
from .exactreal import (
    DEFAULT_MAX_BITS,
    DEFAULT_START_BITS,
    DEFAULT_TARGET_REL_ERROR,
    InField,
    PolyRoot,
    Radical,
    Rational,
    SymbolicReal,
    eval_symbolic,
    exact_hit_test,
    field_of,
    refine_with_value,
)
from .pisot import BoundReport, PisotCertificate, bound_ladder, certify_pisot, family_Q
from .polyalg import FieldArithmetic, IntPoly, isolate_roots, twisted_trace


@dataclass(frozen=True)
class SigmaSample:
    n: int
    value: Enclosure | None
    nearest: int | None
    distance: Enclosure | None
    sigma: Enclosure | float | None  # math.inf for exact hits, None when skipped
    status: str  # ok | exact_hit | skipped
    route: str  # direct | trace

    @property
    def certified(self) -> bool:
        return self.status == "ok"


@dataclass
class WindowEstimate:
    """Finite-window stand-ins for liminf / limsup; never the limits themselves."""

    n_min: int
    n_max: int
    count: int
    inf: Enclosure | None
    sup: Enclosure | float | None
    restricted_sup: Enclosure | None
    exact_hits: int

    def to_json(self) -> dict:
        def fmt(x):
            if x is None:
                return None
            return "inf" if x == math.inf else x.format(15)

        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "count": self.count,
            "exact_hits": self.exact_hits,
            "sigma_inf_window": fmt(self.inf),
            "sigma_sup_window": fmt(self.sup),
            "sigma_sup_restricted_window": fmt(self.restricted_sup),
        }


@dataclass
class SigmaTrace:
    alpha: SymbolicReal
    zeta: SymbolicReal
    samples: list[SigmaSample]
    n0: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def exact_hits(self) -> list[int]:
        return [s.n for s in self.samples if s.status == "exact_hit"]

    @property
    def n_max(self) -> int:
        return self.samples[-1].n if self.samples else 0

    def by_n(self, n: int) -> SigmaSample:
        return self.samples[n - self.samples[0].n]

    def window(self, tail_fraction: float = 0.5, n_min: int | None = None) -> WindowEstimate:
        return window_estimates(self, tail_fraction, n_min)


# ---------------------------------------------------------------------------
# sigma from value and distance


def sigma_from(value: Enclosure, distance: Enclosure) -> Enclosure:
    bits = max(value.precision_bits, distance.precision_bits, 64)
    return -(distance.with_precision(bits).log()) / value.with_precision(bits).log()


# ---------------------------------------------------------------------------
# trace route


@dataclass(frozen=True)
class _Conj:
    """``Re(w z^n)`` contribution of a real conjugate or of a complex pair."""

    real: bool
    w_abs: object  # iv interval: |w| for pairs, w itself for real conjugates
    w_arg: object
    mod: object  # |z|
    arg: object
    sign: int  # sign of a real conjugate


class _TraceRoute:
    def __init__(self, cert: PisotCertificate, g: tuple[int, ...], shift: int, n_max: int):
        self.cert = cert
        self.g = g
        self.shift = shift
        self.t = twisted_trace(cert.poly, g, n_max, shift)
        self._conj_cache: dict[int, list[_Conj]] = {}
        self.n0 = self._activation(n_max)

    def _conjugates(self, bits: int) -> list[_Conj]:
        if bits in self._conj_cache:
            return self._conj_cache[bits]
        P = self.cert.poly
        spectrum = isolate_roots(P, mpf(2) ** -(bits + 24))
        out = []
        with ivprec(bits + 16):
            for d in spectrum.roots:
                m = d.modulus()
                if m.certainly_gt(1):
                    continue
                if d.real is False and d.center[1] < 0:
                    continue  # paired with its conjugate above the axis
                b = d.ball
                z = iv.mpc(b.re.to_iv(), b.im.to_iv())
                if d.real:
                    lo, hi = d.real_bracket()
                    z = _iv_bracket(lo, hi)
                    w = iv.mpf(0)
                    for c in reversed(self.g):
                        w = w * z + c
                    w = w * _iv_power(z, self.shift)
                    sign = 1 if d.center[0] > 0 else -1
                    out.append(_Conj(True, w, None, abs(z), None, sign))
                else:
                    w = iv.mpc(0, 0)
                    for c in reversed(self.g):
                        w = w * z + c
                    w = w * _iv_power(z, self.shift)
                    out.append(_Conj(False, abs(w), iv.arg(w), abs(z), iv.arg(z), 0))
        self._conj_cache[bits] = out
        return out

    def _activation(self, n_max: int) -> int | None:
        """Smallest n with a certified bound sum_j |alpha_j| |zeta_j|^n < 1/2."""
        conj = self._conjugates(64)
        with ivprec(80):
            for n in range(0, n_max + 1):
                total = iv.mpf(0)
                for c in conj:
                    term = abs(c.w_abs) * c.mod ** n
                    total += term if c.real else 2 * term
                if total.b < 0.5:
                    return n
        return None

    def conj_sum(self, n: int, bits: int) -> Enclosure:
        """Enclosure of ``S_n = sum_{j>=2} alpha_j zeta_j^n`` (a real number)."""
        conj = self._conjugates(bits)
        with ivprec(bits + 16):
            total = iv.mpf(0)
            for c in conj:
                if c.real:
                    term = c.w_abs * c.mod ** n
                    total += term if (c.sign > 0 or n % 2 == 0) else -term
                else:
                    total += 2 * c.w_abs * c.mod ** n * iv.cos(c.w_arg + n * c.arg)
            return Enclosure.from_iv(total, bits)

    def sample(self, n: int, target_rel_error: float, max_bits: int) -> SigmaSample:
        # the polar form keeps relative accuracy independent of n; only
        # cancellation between conjugates forces a higher rung
        bits = DEFAULT_START_BITS
        while True:
            s = self.conj_sum(n, bits)
            dist = abs(s)
            if not dist.contains_zero() and dist.rel_width() <= target_rel_error:
                break
            if bits >= max_bits:
                raise PrecisionCapExceeded(f"trace route: conjugate sum at n={n} undecided", bits)
            bits = min(max_bits, bits * 2)
        tn = self.t[n]
        value = (Enclosure.exact(tn, bits) - s).with_precision(bits)
        if not value.certainly_gt(1):
            return SigmaSample(n, value, tn, dist, None, "skipped", "trace")
        return SigmaSample(n, value, tn, dist, sigma_from(value, dist), "ok", "trace")


def _ladder_ceiling(bits: int) -> int:
    b = DEFAULT_START_BITS
    while b < bits:
        b *= 2
    return b


def _iv_bracket(lo: Fraction, hi: Fraction):
    a = iv.mpf(lo.numerator) / lo.denominator
    b = iv.mpf(hi.numerator) / hi.denominator
    return iv.mpf([a.a, b.b])


def _iv_power(z, e: int):
    if e >= 0:
        return z ** e
    return 1 / (z ** (-e))


def trace_route_data(alpha: SymbolicReal, zeta: SymbolicReal):
    """``(cert, g, shift)`` when the trace route applies, else None.

    Needs zeta the Pisot root of a monic polynomial of degree >= 2 and alpha an
    integer or ``g(zeta) zeta^shift`` with integral g (negative shifts need a unit).
    """
    if not isinstance(zeta, PolyRoot) or zeta.selector != "max" or not zeta.poly.is_monic():
        return None
    if zeta.poly.degree < 2:
        return None
    cert = _cert(zeta.poly)
    if cert is None:
        return None
    if isinstance(alpha, Rational):
        if alpha.q != 1 or alpha.p == 0:
            return None
        return cert, (alpha.p,), 0
    if isinstance(alpha, InField) and alpha.denom == 1 and alpha.base == zeta:
        g = FieldArithmetic(zeta.poly).reduce(alpha.numer_poly)
        if any(c.denominator != 1 for c in g):
            return None
        if alpha.power_shift < 0 and not cert.is_unit:
            return None
        return cert, tuple(int(c) for c in g), alpha.power_shift
    return None


@lru_cache(maxsize=512)
def _cert(P: IntPoly) -> PisotCertificate | None:
    c = certify_pisot(P)
    return c if isinstance(c, PisotCertificate) else None


# ---------------------------------------------------------------------------
# direct route


def direct_sample(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    n: int,
    target_rel_error: float = DEFAULT_TARGET_REL_ERROR,
    max_bits: int = DEFAULT_MAX_BITS,
    start_bits: int = DEFAULT_START_BITS,
) -> SigmaSample:
    if exact_hit_test(alpha, zeta, n):
        res, value, _ = refine_with_value(zeta, n, alpha, target_rel_error, max_bits, start_bits)
        return SigmaSample(n, value, res.nearest, res.distance, math.inf, "exact_hit", "direct")
    res, value, bits = refine_with_value(zeta, n, alpha, target_rel_error, max_bits, start_bits)
    if not value.certainly_gt(1):
        return SigmaSample(n, value, res.nearest, res.distance, None, "skipped", "direct")
    return SigmaSample(n, value, res.nearest, res.distance, sigma_from(value, res.distance), "ok", "direct")


def _start_bits(alpha, zeta, n) -> int:
    """A rung of the precision ladder large enough to resolve the integer part."""
    z = eval_symbolic(zeta, 32)
    a = eval_symbolic(alpha, 32)
    mag = n * max(0.0, math.log2(float(z.hi))) + max(0.0, math.log2(float(a.hi)))
    return _ladder_ceiling(int(mag) + 48)


# ---------------------------------------------------------------------------
# public operations


def trace(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    n_max: int,
    target_rel_error: float = DEFAULT_TARGET_REL_ERROR,
    max_bits: int = DEFAULT_MAX_BITS,
    n_min: int = 1,
    route: str = "auto",
) -> SigmaTrace:
    """sigma_n for ``n_min <= n <= n_max``; ``route`` is auto, direct or trace."""
    z = eval_symbolic(zeta, 64)
    if not z.certainly_gt(1):
        raise InputError("zeta must be certified > 1")
    if not eval_symbolic(alpha, 64).certainly_gt(0):
        raise InputError("alpha must be positive")
    if n_max < n_min or n_min < 0:
        raise InputError("need 0 <= n_min <= n_max")
    tr = None
    if route in ("auto", "trace"):
        data = trace_route_data(alpha, zeta)
        if data is not None:
            tr = _TraceRoute(*data, n_max)
        elif route == "trace":
            raise InputError("trace route needs Pisot zeta and integral alpha in Q(zeta)")
    samples = []
    for n in range(n_min, n_max + 1):
        if tr is not None and tr.n0 is not None and n >= tr.n0 and not exact_hit_test(alpha, zeta, n):
            samples.append(tr.sample(n, target_rel_error, max_bits))
        else:
            sb = min(_start_bits(alpha, zeta, n), max_bits)
            samples.append(direct_sample(alpha, zeta, n, target_rel_error, max_bits, sb))
    meta = {"target_rel_error": target_rel_error, "max_bits": max_bits}
    return SigmaTrace(alpha, zeta, samples, tr.n0 if tr is not None else None, meta)


def window_estimates(trace: SigmaTrace, tail_fraction: float = 0.5, n_min: int | None = None) -> WindowEstimate:
    """min / max of certified sigma_n over the tail window.

    Exact hits make the window sup infinite and are left out of the restricted sup.
    """
    if n_min is None:
        if not 0 < tail_fraction <= 1:
            raise InputError("tail_fraction must lie in (0, 1]")
        span = len(trace.samples)
        n_min = trace.samples[0].n + span - max(1, math.ceil(tail_fraction * span))
    tail = [s for s in trace.samples if s.n >= n_min]
    ok = [s for s in tail if s.status == "ok"]
    hits = sum(1 for s in tail if s.status == "exact_hit")
    if len(ok) + hits == 0:
        raise InputError("empty tail window")
    if len(ok) < 10 and hits == 0:
        raise InputError(f"only {len(ok)} certified samples in the tail window (need 10)")
    inf = sup = rsup = None
    if ok:
        inf = Enclosure(min(s.sigma.lo for s in ok), min(s.sigma.hi for s in ok), 64)
        rsup = Enclosure(max(s.sigma.lo for s in ok), max(s.sigma.hi for s in ok), 64)
    sup = math.inf if hits else rsup
    return WindowEstimate(n_min, trace.n_max, len(tail), inf, sup, rsup, hits)


@dataclass
class DualRouteReport:
    n0: int | None
    checked: int
    max_discrepancy: mpf
    max_radius_sum: mpf
    disagreements: list[int]

    @property
    def agree(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "n0": self.n0,
            "checked": self.checked,
            "max_discrepancy": mp.nstr(self.max_discrepancy, 5),
            "max_radius_sum": mp.nstr(self.max_radius_sum, 5),
            "disagreements": self.disagreements,
            "agree": self.agree,
        }


def dual_route_check(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    n_max: int,
    target_rel_error: float = DEFAULT_TARGET_REL_ERROR,
    max_bits: int = DEFAULT_MAX_BITS,
) -> DualRouteReport:
    """Compare both routes' distance enclosures on ``[n0, n_max]``; they must intersect."""
    data = trace_route_data(alpha, zeta)
    if data is None:
        raise InputError("dual-route check needs Pisot zeta and integral alpha in Q(zeta)")
    tr = _TraceRoute(*data, n_max)
    if tr.n0 is None:
        return DualRouteReport(None, 0, mpf(0), mpf(0), [])
    worst = mpf(0)
    worst_r = mpf(0)
    bad = []
    checked = 0
    for n in range(max(tr.n0, 1), n_max + 1):
        a = tr.sample(n, target_rel_error, max_bits)
        sb = min(_start_bits(alpha, zeta, n), max_bits)
        b = direct_sample(alpha, zeta, n, target_rel_error, max_bits, sb)
        checked += 1
        if a.nearest != b.nearest or not a.distance.overlaps(b.distance):
            bad.append(n)
        with mp.workprec(64):
            worst = max(worst, abs(a.distance.center - b.distance.center))
            worst_r = max(worst_r, a.distance.radius + b.distance.radius)
    return DualRouteReport(tr.n0, checked, worst, worst_r, bad)


def power_zeta(zeta: SymbolicReal, k: int) -> SymbolicReal:
    """Symbolic ``zeta^k``."""
    if k < 1:
        raise InputError("power must be >= 1")
    if isinstance(zeta, Rational):
        return Rational(zeta.p ** k, zeta.q ** k)
    if isinstance(zeta, Radical):
        return Radical(zeta.p ** k, zeta.q ** k, zeta.L)
    if isinstance(zeta, PolyRoot):
        return InField(zeta, (0,) * k + (1,), 1, 0)
    raise InputError("power_zeta needs a rational, radical or polynomial root")


@dataclass
class PowerIdentityReport:
    k: int
    checked: int
    mismatches: list[int]

    @property
    def holds(self) -> bool:
        return not self.mismatches

    def to_json(self):
        return {"k": self.k, "checked": self.checked, "mismatches": self.mismatches, "holds": self.holds}


def power_identity_check(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    k: int,
    n_max: int,
    target_rel_error: float = DEFAULT_TARGET_REL_ERROR,
) -> PowerIdentityReport:
    """sigma_n(alpha, zeta^k) against sigma_{nk}(alpha, zeta) for ``n <= n_max / k``."""
    zk = power_zeta(zeta, k)
    m = n_max // k
    if m < 1:
        raise InputError("n_max must be at least k")
    left = trace(alpha, zk, m, target_rel_error, route="direct")
    right = trace(alpha, zeta, m * k, target_rel_error)
    bad = []
    for s in left.samples:
        r = right.by_n(s.n * k)
        if s.status != r.status:
            bad.append(s.n)
        elif s.status == "ok" and not s.sigma.overlaps(r.sigma):
            bad.append(s.n)
    return PowerIdentityReport(k, len(left.samples), bad)


# ---------------------------------------------------------------------------
# family scans


def conjugate_target(cert: PisotCertificate) -> Enclosure:
    """``-log f / log zeta``."""
    return -(cert.f.log()) / cert.pisot_root.log()


def density_N(M: int, eps: float) -> int:
    """``floor(M^(1-eps))`` clamped into the legal range ``[1, M-2]``."""
    return min(max(int(math.floor(M ** (1 - eps))), 1), M - 2)


@dataclass(frozen=True)
class FamilyRow:
    k: int
    M: int
    N: int
    eps: float | None
    zeta: Enclosure
    f: Enclosure
    unit: bool
    target: Enclosure
    window: WindowEstimate | None
    max_sigma: Enclosure | None
    n0: int | None

    def csv_fields(self) -> dict:
        w = self.window
        return {
            "k": self.k,
            "M": self.M,
            "N": self.N,
            "eps": "" if self.eps is None else repr(self.eps),
            "zeta": self.zeta.format(20),
            "f": self.f.format(20),
            "unit": int(self.unit),
            "bound_remark": self.target.format(15),
            "sigma_window_lo": "" if w is None or w.inf is None else w.inf.format(15),
            "sigma_window_hi": "" if w is None or w.sup is None else (
                "inf" if w.sup == math.inf else w.sup.format(15)),
            "n0": "" if self.n0 is None else self.n0,
        }


def family_row(k: int, M: int, N: int, n_max: int = 200, tail_fraction: float = 0.5,
               eps: float | None = None, target_rel_error: float = 1e-9) -> FamilyRow:
    P = family_Q(k, M, N)
    cert = _cert(P)
    if cert is None:
        raise InputError(f"{P} failed Pisot certification")
    zeta = PolyRoot(P, "max")
    tr = trace(Rational(1), zeta, n_max, target_rel_error)
    n0 = tr.n0 or 1
    after = [s for s in tr.samples if s.n >= n0 and s.status == "ok"]
    mx = Enclosure(max(s.sigma.lo for s in after), max(s.sigma.hi for s in after), 64) if after else None
    try:
        w = window_estimates(tr, tail_fraction)
    except InputError:
        w = None
    return FamilyRow(k, M, N, eps, cert.pisot_root, cert.f, cert.is_unit, conjugate_target(cert), w, mx, tr.n0)


def density_scan(k: int, M_values, eps_grid, n_max: int = 120, tail_fraction: float = 0.5) -> list[FamilyRow]:
    """Family members with N = floor(M^(1-eps)) and their measured window liminf."""
    if k < 2:
        raise InputError("density scan needs k >= 2")
    rows = []
    seen = set()
    for M in M_values:
        if M < 3:
            raise InputError("M must be >= 3")
        for eps in eps_grid:
            N = density_N(M, eps)
            if (M, N) in seen:
                continue
            seen.add((M, N))
            rows.append(family_row(k, M, N, n_max, tail_fraction, eps))
    rows.sort(key=lambda r: (r.M, r.N))
    return rows


def is_constant_window(samples: list[SigmaSample], tol: float) -> bool:
    """True when all certified sigma_n in the list agree within tol."""
    vals = [s.sigma for s in samples if s.status == "ok"]
    if not vals:
        return True
    lo = min(v.center for v in vals)
    hi = max(v.center for v in vals)
    return float(hi - lo) <= tol


def bound_report(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    n_max: int = 400,
    tail_fraction: float = 0.5,
    target_rel_error: float = DEFAULT_TARGET_REL_ERROR,
    max_bits: int = DEFAULT_MAX_BITS,
) -> BoundReport:
    """Bound ladder with measured window values filled in for the verdicts."""
    report = bound_ladder(alpha, zeta)
    tr = trace(alpha, zeta, n_max, target_rel_error, max_bits)
    w = window_estimates(tr, tail_fraction)
    report.measured["sigma_inf_upper"] = w.inf
    report.measured["sigma_sup_upper"] = w.sup
    if w.restricted_sup is not None:
        report.measured["restricted_sup_upper"] = w.restricted_sup
    report.window = w.to_json()
    return report
