"""Integer polynomials: heights, Landau's bound, certified root isolation,
power-sum recurrences and the Pisot irreducibility criterion.

Roots are approximated by Aberth's simultaneous iteration in big-float
complex arithmetic and then certified with the Weierstrass inclusion
disks ``D(z_i, k |P(z_i)| / |a_k prod_{j != i} (z_i - z_j)|)``: their union
contains every root, and a disk disjoint from all the others holds exactly
one root.  The radii are evaluated in interval arithmetic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import iv, mp, mpc, mpf

from .enclosure import ComplexBall, Enclosure, ivprec
from .errors import InputError, PrecisionCapExceeded, UndecidedComparison

DEFAULT_MAX_BITS = 1 << 20

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*x(?:\s*\^\s*(\d+))?)?")


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial, coefficients ``a_0 .. a_k`` low to high."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2:
            raise InputError("polynomial must have degree >= 1")

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        """Parse ASCII forms such as ``x^3-x-1`` or ``2*x^2 - 5x + 3``."""
        s = text.replace(" ", "")
        if not s:
            raise InputError("empty polynomial")
        pos, terms = 0, {}
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or m.end() == pos:
                raise InputError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
            sign, digits, xpart, power = m.groups()
            if not digits and not xpart:
                raise InputError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
            if pos > 0 and not sign:
                raise InputError(f"missing operator in {text!r}")
            coef = int(digits) if digits else 1
            if sign == "-":
                coef = -coef
            deg = (int(power) if power else 1) if xpart else 0
            terms[deg] = terms.get(deg, 0) + coef
            pos = m.end()
        k = max(terms)
        return cls(tuple(terms.get(i, 0) for i in range(k + 1)))

    def __str__(self):
        parts = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                body = str(mag)
            else:
                xs = "x" if i == 1 else f"x^{i}"
                body = xs if mag == 1 else f"{mag}*{xs}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += sign + body
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative_coeffs(self) -> tuple[int, ...]:
        return tuple(i * a for i, a in enumerate(self.coeffs))[1:]

    def sign_at(self, x: Fraction) -> int:
        """Exact sign of P(x) for rational x."""
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        k = self.degree
        acc = 0
        qpow = 1
        # sum a_i p^i q^(k-i), q > 0
        terms = []
        ppow = 1
        for a in self.coeffs:
            terms.append((a, ppow))
            ppow *= p
        for i in range(k, -1, -1):
            a, pp = terms[i]
            acc += a * pp * qpow
            qpow *= q
        return (acc > 0) - (acc < 0)

    def to_json(self):
        return str(self)


def height(P: IntPoly) -> int:
    """Maximum absolute coefficient."""
    return max(abs(a) for a in P.coeffs)


def landau_bound(P: IntPoly, bits: int = 64) -> Enclosure:
    """``sqrt(sum a_j^2)``, an upper bound for the Mahler measure of P."""
    return Enclosure.exact(sum(a * a for a in P.coeffs), bits).sqrt()


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over Q (lists of Fractions, low to high)


def _strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def qpoly_divmod(a, b):
    a, b = _strip(Fraction(x) for x in a), _strip(Fraction(x) for x in b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a.pop()
        a = _strip(a)
    return q, a


def qpoly_gcd(a, b):
    a, b = _strip(Fraction(x) for x in a), _strip(Fraction(x) for x in b)
    while b:
        _, r = qpoly_divmod(a, b)
        a, b = b, r
    return [x / a[-1] for x in a] if a else a


def is_squarefree(P: IntPoly) -> bool:
    return len(qpoly_gcd(P.coeffs, P.derivative_coeffs())) == 1


class FieldArithmetic:
    """Exact arithmetic in ``Q[x]/(D)`` for a defining polynomial D.

    Elements are tuples of Fractions (low to high) of length < deg D.  For
    monic D all reductions stay integral when the inputs are.
    """

    def __init__(self, D: IntPoly):
        self.D = D
        self.k = D.degree
        lead = Fraction(D.leading)
        # x^k == -sum(c_i x^i) / lead
        self._tail = [-Fraction(c) / lead for c in D.coeffs[:-1]]
        self._x_inv = None
        if D.constant != 0:
            c0 = Fraction(D.constant)
            self._x_inv = tuple(-Fraction(c) / c0 for c in D.coeffs[1:])

    def reduce(self, a) -> tuple:
        a = [Fraction(x) for x in a]
        k = self.k
        for top in range(len(a) - 1, k - 1, -1):
            c = a[top]
            if c:
                base = top - k
                for i, t in enumerate(self._tail):
                    a[base + i] += c * t
            a[top] = Fraction(0)
        a = a[:k] + [Fraction(0)] * max(0, k - len(a))
        return tuple(a)

    def mul(self, a, b) -> tuple:
        out = [Fraction(0)] * (len(a) + len(b) - 1 if a and b else 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self.reduce(out)

    def add(self, a, b) -> tuple:
        n = max(len(a), len(b))
        a = tuple(a) + (Fraction(0),) * (n - len(a))
        b = tuple(b) + (Fraction(0),) * (n - len(b))
        return self.reduce([x + y for x, y in zip(a, b)])

    def scale(self, a, c) -> tuple:
        c = Fraction(c)
        return tuple(x * c for x in a)

    def one(self) -> tuple:
        return self.reduce([1])

    def x_power(self, n: int) -> tuple:
        """``x^n mod D``; negative n needs D(0) != 0."""
        if n >= 0:
            base, e = self.reduce([0, 1]), n
        else:
            if self._x_inv is None:
                raise InputError("x is not invertible modulo the defining polynomial")
            base, e = self.reduce(self._x_inv), -n
        return self.power(base, e)

    def power(self, a, n: int) -> tuple:
        result = self.one()
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def constant_value(self, a):
        """The rational value if the element is a constant, else None."""
        if all(x == 0 for x in a[1:]):
            return Fraction(a[0]) if a else Fraction(0)
        return None


# ---------------------------------------------------------------------------
# root isolation


@dataclass(frozen=True)
class RootDisk:
    """Certified disk ``|z - center| <= radius`` containing exactly one root."""

    center: tuple  # (re, im) as mpf
    radius: mpf
    bits: int
    real: bool | None  # True: certified real, False: certified non-real, None: undecided

    @property
    def ball(self) -> ComplexBall:
        return ComplexBall.disk(self.center, self.radius, self.bits)

    def modulus(self) -> Enclosure:
        with ivprec(self.bits):
            c = abs(iv.mpc(self.center[0], self.center[1]))
            r = iv.mpf(self.radius)
            lo = c - r
            hi = c + r
            lo_v = lo.a if lo.a > 0 else iv.mpf(0)
            return Enclosure(mp.make_mpf(lo_v._mpi_[0]), mp.make_mpf(hi._mpi_[1]), self.bits)

    def argument(self) -> Enclosure:
        """Argument in ``[0, 2 pi)``; exact 0 / pi for certified real roots."""
        if self.real:
            if self.center[0] > 0:
                return Enclosure.exact(0, self.bits)
            with ivprec(self.bits):
                return Enclosure.from_iv(iv.pi, self.bits)
        b = self.ball
        with ivprec(self.bits):
            a = iv.atan2(b.im.to_iv(), b.re.to_iv())
            if b.im.hi < 0:
                a = a + 2 * iv.pi
            return Enclosure.from_iv(a, self.bits)

    def real_bracket(self) -> tuple[Fraction, Fraction]:
        from .enclosure import mpf_to_fraction

        c = mpf_to_fraction(self.center[0])
        r = mpf_to_fraction(self.radius)
        return c - r, c + r

    def to_json(self):
        m = self.modulus()
        return {
            "re": str(self.center[0]),
            "im": str(self.center[1]),
            "radius": str(self.radius),
            "modulus_lo": str(m.lo),
            "modulus_hi": str(m.hi),
        }


@dataclass(frozen=True)
class RootSpectrum:
    poly: IntPoly
    roots: tuple[RootDisk, ...]
    squarefree: bool = True
    modulus_order: tuple[int, ...] = field(default=())

    def to_json(self):
        return [d.to_json() for d in self.roots]


def _aberth(coeffs, prec, z=None, max_iter=400):
    """Aberth-Ehrlich iteration on complex starting points at ``prec`` bits."""
    k = len(coeffs) - 1
    with mp.workprec(prec):
        a = [mpf(c) for c in coeffs]
        da = [i * a[i] for i in range(1, k + 1)]
        if z is None:
            r = abs(a[0] / a[-1]) ** (mpf(1) / k)
            if r == 0:
                r = mpf(1)
            # Cauchy-type bound keeps the start circle inside a sane region
            bound = 1 + max(abs(c / a[-1]) for c in a[:-1])
            r = min(max(r, mpf(1) / 4), bound)
            z = [r * mp.expj(2 * mp.pi * j / k + mpf("0.4")) for j in range(k)]
        else:
            z = [mpc(w) for w in z]
        tol = mpf(2) ** (-prec + 8)
        for _ in range(max_iter):
            biggest = mpf(0)
            for i in range(k):
                zi = z[i]
                p = mp.polyval(a[::-1], zi)
                dp = mp.polyval(da[::-1], zi)
                if p == 0:
                    continue
                if dp == 0:
                    dp = mpf(2) ** (-prec)
                ratio = p / dp
                s = mp.fsum(1 / (zi - z[j]) for j in range(k) if j != i and zi != z[j])
                w = ratio / (1 - ratio * s)
                z[i] = zi - w
                scale = max(abs(zi), mpf(1))
                biggest = max(biggest, abs(w) / scale)
            if biggest < tol:
                break
        return z


def _weierstrass_radii(coeffs, z, prec):
    """Upper bounds for ``k |P(z_i)| / |a_k prod (z_i - z_j)|`` in interval arithmetic."""
    k = len(coeffs) - 1
    out = []
    with ivprec(prec):
        ac = [iv.mpf(c) for c in coeffs]
        zs = [iv.mpc(w.real, w.imag) for w in z]
        for i in range(k):
            zi = zs[i]
            p = iv.mpc(0, 0)
            for c in reversed(ac):
                p = p * zi + c
            den = iv.mpc(ac[-1], 0)
            for j in range(k):
                if j != i:
                    den = den * (zi - zs[j])
            dmod = abs(den)
            if dmod.a <= 0:
                out.append(None)
                continue
            r = (k * abs(p)) / dmod
            out.append(mp.make_mpf(r.b._mpi_[1]))
    return out


def _disjoint(zi, ri, zj, rj, prec) -> bool:
    with ivprec(prec):
        d = abs(iv.mpc(zi.real, zi.imag) - iv.mpc(zj.real, zj.imag))
        return d.a > iv.mpf(ri) + iv.mpf(rj)


def _order(disks: list[RootDisk]) -> list[int]:
    """Indices by modulus descending, then argument ascending within modulus ties."""
    mods = [d.modulus() for d in disks]
    args = [float(d.argument().center) for d in disks]
    idx = sorted(range(len(disks)), key=lambda i: (-float(mods[i].center), args[i]))
    # regroup roots whose modulus enclosures overlap (conjugate pairs) by argument
    out, i = [], 0
    while i < len(idx):
        group = [idx[i]]
        j = i + 1
        while j < len(idx) and mods[idx[j]].overlaps(mods[group[-1]]):
            group.append(idx[j])
            j += 1
        out.extend(sorted(group, key=lambda t: args[t]))
        i = j
    return out


@lru_cache(maxsize=256)
def _isolate_cached(coeffs: tuple, target_exp: int, max_bits: int):
    k = len(coeffs) - 1
    target = mpf(2) ** target_exp
    size_bits = max(abs(c).bit_length() for c in coeffs) + 8
    prec = max(64, -target_exp + 2 * size_bits + 32)
    z = _aberth(coeffs, 64)
    cur = 64
    while True:
        while cur < prec:
            cur = min(prec, cur * 2)
            z = _aberth(coeffs, cur, z, max_iter=12)
        z = _aberth(coeffs, prec, z, max_iter=12)
        radii = _weierstrass_radii(coeffs, z, prec)
        ok = all(r is not None and r <= target for r in radii)
        if ok:
            ok = all(
                _disjoint(z[i], radii[i], z[j], radii[j], prec)
                for i in range(k)
                for j in range(i + 1, k)
            )
        if ok:
            disks = []
            for i in range(k):
                real = _classify_real(z, radii, i, prec)
                disks.append(RootDisk((z[i].real, z[i].imag), radii[i], prec, real))
            if all(d.real is not None for d in disks):
                return disks
        if prec >= max_bits:
            raise PrecisionCapExceeded(f"root isolation did not certify at {prec} bits", prec)
        prec = min(max_bits, prec * 2)


def _classify_real(z, radii, i, prec):
    zi, ri = z[i], radii[i]
    if abs(zi.imag) > ri:
        return False
    conj = mpc(zi.real, -zi.imag)
    if all(_disjoint(conj, ri, z[j], radii[j], prec) for j in range(len(z)) if j != i):
        return True
    return None


def isolate_roots(P: IntPoly, target_radius: float | mpf = 2.0**-64, max_bits: int = DEFAULT_MAX_BITS) -> RootSpectrum:
    """Certified disjoint disks, one per root, each of radius <= target_radius."""
    if not is_squarefree(P):
        raise InputError(f"{P} is not squarefree")
    target_exp = int(mp.floor(mp.log(mpf(target_radius), 2)))
    disks = _isolate_cached(P.coeffs, target_exp, max_bits)
    order = _order(disks)
    roots = tuple(disks[i] for i in order)
    return RootSpectrum(P, roots, True, tuple(order))


def select_root(P: IntPoly, selector, target_radius=2.0**-64) -> RootDisk:
    """Root picked by ``"max"`` (largest real root > 1) or by sorted index."""
    spectrum = isolate_roots(P, target_radius)
    if selector == "max":
        reals = [d for d in spectrum.roots if d.real and d.center[0] > 0]
        if not reals:
            raise InputError(f"{P} has no real root > 1")
        best = max(reals, key=lambda d: d.center[0])
        if not best.modulus().certainly_gt(1):
            raise InputError(f"largest real root of {P} is not certainly > 1")
        return best
    idx = int(selector)
    if not 0 <= idx < len(spectrum.roots):
        raise InputError(f"root index {idx} out of range for degree {P.degree}")
    return spectrum.roots[idx]


@lru_cache(maxsize=4096)
def refine_real_root(P: IntPoly, lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Shrink a sign-change bracket of a simple real root to relative width ~2^-bits."""
    slo, shi = P.sign_at(lo), P.sign_at(hi)
    if slo == 0:
        return lo, lo
    if shi == 0:
        return hi, hi
    if slo == shi:
        raise UndecidedComparison("bracket does not isolate a sign change")
    coeffs = list(reversed(P.coeffs))
    dcoeffs = list(reversed(P.derivative_coeffs()))
    prec = 64
    while True:
        mag = max(abs(lo), abs(hi))
        eps_rel = Fraction(1, 1 << (bits + 1))
        if (hi - lo) <= eps_rel * (min(abs(lo), abs(hi)) if lo * hi > 0 else mag):
            return lo, hi
        prec = min(max(prec * 2, 64), bits + 40)
        with mp.workprec(prec + 20):
            x = mpf(lo.numerator) / lo.denominator / 2 + mpf(hi.numerator) / hi.denominator / 2
            for _ in range(8):
                d = mp.polyval(dcoeffs, x)
                if d == 0:
                    break
                x = x - mp.polyval(coeffs, x) / d
            from .enclosure import mpf_to_fraction

            xf = mpf_to_fraction(x)
        if not lo < xf < hi:
            xf = (lo + hi) / 2
        eps = abs(xf) * Fraction(1, 1 << max(prec - 4, 8)) if xf else Fraction(1, 1 << prec)
        a, b = max(lo, xf - eps), min(hi, xf + eps)
        sa, sb = P.sign_at(a), P.sign_at(b)
        if sa == 0:
            return a, a
        if sb == 0:
            return b, b
        if sa != sb:
            lo, hi = a, b
        elif sa == slo:
            lo = b if b < hi else (lo + hi) / 2
        else:
            hi = a if a > lo else (lo + hi) / 2
        if prec >= bits + 40 and (hi - lo) > eps_rel * mag:
            # Newton stalled; plain bisection finishes
            while (hi - lo) > eps_rel * mag:
                m = (lo + hi) / 2
                sm = P.sign_at(m)
                if sm == 0:
                    return m, m
                if sm == slo:
                    lo = m
                else:
                    hi = m
            return lo, hi


# ---------------------------------------------------------------------------
# power sums


def _newton_power_sums(P: IntPoly) -> list[int]:
    """s_0 .. s_{k-1} of a monic P via Newton's identities."""
    if not P.is_monic():
        raise InputError("power sums need a monic polynomial")
    k = P.degree
    c = P.coeffs  # x^k + c_{k-1} x^{k-1} + ... + c_0
    s = [k]
    for m in range(1, k):
        acc = -m * c[k - m]
        for i in range(1, m):
            acc -= c[k - i] * s[m - i]
        s.append(acc)
    return s


def trace_sequence(P: IntPoly, n_max: int) -> list[int]:
    """Exact power sums ``s_n = sum_j zeta_j^n`` for ``0 <= n <= n_max``."""
    s = _newton_power_sums(P)
    k = P.degree
    c = P.coeffs
    while len(s) <= n_max:
        n = len(s)
        s.append(-sum(c[i] * s[n - k + i] for i in range(k)))
    return s[: n_max + 1]


def power_sums(P: IntPoly, n_lo: int, n_hi: int) -> dict[int, int]:
    """Power sums on ``[n_lo, n_hi]``; negative indices require a unit (|P(0)| = 1)."""
    s = trace_sequence(P, max(n_hi, P.degree))
    out = {i: s[i] for i in range(0, max(n_hi, P.degree) + 1)}
    if n_lo < 0:
        c0 = P.constant
        if abs(c0) != 1:
            raise InputError("negative power sums need a unit constant term")
        k, c = P.degree, P.coeffs
        for n in range(-1, n_lo - 1, -1):
            # s_{n+k} + c_{k-1} s_{n+k-1} + ... + c_0 s_n = 0
            acc = out[n + k] + sum(c[i] * out[n + i] for i in range(1, k))
            out[n] = -acc * c0
    return {i: out[i] for i in range(n_lo, n_hi + 1)}


def twisted_trace(P: IntPoly, g, n_max: int, shift: int = 0) -> list[int]:
    """``t_n = sum_j g(zeta_j) zeta_j^(n + shift)`` for ``0 <= n <= n_max``.

    By linearity ``t_n = sum_i g_i s_{n+shift+i}``, so the sequence obeys the
    same order-k recurrence as the power sums.
    """
    g = list(g)
    if len(g) > P.degree:
        raise InputError("deg g must be < deg P")
    lo = shift
    hi = n_max + shift + len(g) - 1
    s = power_sums(P, min(lo, 0), max(hi, 0))
    return [sum(gi * s[n + shift + i] for i, gi in enumerate(g)) for n in range(n_max + 1)]


def irreducible_by_pisot_criterion(spectrum: RootSpectrum, P: IntPoly) -> bool:
    """True when P is monic, P(0) != 0, exactly one root is outside and the rest
    strictly inside the unit circle; False means the criterion does not apply."""
    if not P.is_monic() or P.constant == 0:
        return False
    outside = inside = 0
    for d in spectrum.roots:
        m = d.modulus()
        if m.certainly_gt(1):
            outside += 1
        elif m.certainly_lt(1):
            inside += 1
        else:
            raise UndecidedComparison("root modulus vs 1 undecided")
    return outside == 1 and inside == P.degree - 1
