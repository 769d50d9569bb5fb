"""Certified real and complex enclosures on top of mpmath interval arithmetic.

An :class:`Enclosure` is a closed interval ``[lo, hi]`` with binary
floating-point endpoints, guaranteed to contain one exact real number.
Every operation rounds outward, so results stay certified; the
``center``/``radius`` view is derived from the endpoints with the radius
rounded up.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from mpmath import iv, mp, mpf
from mpmath.libmp import mpf_sub, mpf_add, mpf_shift, mpf_cmp, mpf_neg, fzero

_raw = mp.make_mpf  # wraps a raw mpf tuple without rounding

MIN_BITS = 16


@contextmanager
def ivprec(bits: int):
    """Temporarily set the working precision of mpmath's interval context."""
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def mpf_to_fraction(x) -> Fraction:
    """Exact conversion of a finite mpf (or raw mpf tuple) to a Fraction."""
    raw = x if isinstance(x, tuple) else x._mpf_
    sign, man, exp, _ = raw
    if not man:
        if raw != fzero:
            raise ValueError("non-finite value")
        return Fraction(0)
    man = int(man)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _iv_from_number(x):
    """Outward-rounded interval for an int / Fraction at the current iv precision."""
    if isinstance(x, int):
        return iv.mpf(x)
    if isinstance(x, Rational):
        x = Fraction(x)
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    raise TypeError(f"cannot enclose {type(x).__name__}")


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lo, hi]`` certified to contain an exact real."""

    lo: mpf
    hi: mpf
    precision_bits: int = 64

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    # -- construction -----------------------------------------------------

    @classmethod
    def exact(cls, value, precision_bits: int = 64) -> "Enclosure":
        """Enclose an int or Fraction; radius is 0 when the value is representable."""
        with ivprec(precision_bits):
            return cls.from_iv(_iv_from_number(value), precision_bits)

    @classmethod
    def from_iv(cls, x, precision_bits: int) -> "Enclosure":
        lo_raw, hi_raw = x._mpi_
        return cls(_raw(lo_raw), _raw(hi_raw), precision_bits)

    @classmethod
    def from_bounds(cls, lo, hi, precision_bits: int = 64) -> "Enclosure":
        """Enclose ``[lo, hi]`` given as ints / Fractions / mpf values (outward)."""
        with ivprec(precision_bits):
            a = _iv_from_number(lo) if not isinstance(lo, mpf) else iv.mpf(lo)
            b = _iv_from_number(hi) if not isinstance(hi, mpf) else iv.mpf(hi)
            return cls(_raw(a._mpi_[0]), _raw(b._mpi_[1]), precision_bits)

    def to_iv(self):
        return iv.mpf([self.lo, self.hi])

    # -- views ------------------------------------------------------------

    @property
    def center(self) -> mpf:
        return _raw(mpf_shift(mpf_add(self.lo._mpf_, self.hi._mpf_, self.precision_bits + 2, "n"), -1))

    @property
    def radius(self) -> mpf:
        c = self.center._mpf_
        up = mpf_sub(self.hi._mpf_, c, 53, "u")
        down = mpf_sub(c, self.lo._mpf_, 53, "u")
        return _raw(up if mpf_cmp(up, down) >= 0 else down)

    @property
    def width(self) -> mpf:
        return _raw(mpf_sub(self.hi._mpf_, self.lo._mpf_, 53, "u"))

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def rel_width(self) -> float:
        """Width divided by the smallest absolute value in the interval (inf if it meets 0)."""
        if self.contains_zero():
            return math.inf if not self.is_exact() else 0.0
        m = min(abs(self.lo), abs(self.hi))
        return float(self.width / m)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Enclosure):
            return self.lo <= x.lo and x.hi <= self.hi
        x = Fraction(x)
        return mpf_to_fraction(self.lo) <= x <= mpf_to_fraction(self.hi)

    def overlaps(self, other: "Enclosure") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def fraction_bounds(self) -> tuple[Fraction, Fraction]:
        return mpf_to_fraction(self.lo), mpf_to_fraction(self.hi)

    def certainly_lt(self, x) -> bool:
        return self._cmp_hi(x) < 0

    def certainly_gt(self, x) -> bool:
        return self._cmp_lo(x) > 0

    def _cmp_hi(self, x):
        return _cmp(mpf_to_fraction(self.hi), x)

    def _cmp_lo(self, x):
        return _cmp(mpf_to_fraction(self.lo), x)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Enclosure):
            return other.to_iv(), max(self.precision_bits, other.precision_bits)
        return _iv_from_number(other), self.precision_bits

    def _binary(self, other, op):
        prec = max(self.precision_bits, other.precision_bits) if isinstance(other, Enclosure) else self.precision_bits
        with ivprec(prec):
            b, _ = self._coerce(other)
            return Enclosure.from_iv(op(self.to_iv(), b), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Enclosure) and other.contains_zero():
            raise ZeroDivisionError("divisor enclosure contains 0")
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        if self.contains_zero():
            raise ZeroDivisionError("divisor enclosure contains 0")
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        return Enclosure(_raw(mpf_neg(self.hi._mpf_)), _raw(mpf_neg(self.lo._mpf_)), self.precision_bits)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(_raw(fzero), max(_raw(mpf_neg(self.lo._mpf_)), self.hi), self.precision_bits)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        with ivprec(self.precision_bits):
            if self.lo >= 0:
                return Enclosure.from_iv(self.to_iv() ** n, self.precision_bits)
            return Enclosure.from_iv(iv.mpf([self.lo, self.hi]) ** n, self.precision_bits)

    def log(self) -> "Enclosure":
        if not self.lo > 0:
            raise ValueError("log of an enclosure that is not certainly positive")
        with ivprec(self.precision_bits):
            return Enclosure.from_iv(iv.log(self.to_iv()), self.precision_bits)

    def sqrt(self) -> "Enclosure":
        if self.lo < 0:
            raise ValueError("sqrt of an enclosure that is not certainly non-negative")
        with ivprec(self.precision_bits):
            return Enclosure.from_iv(iv.sqrt(self.to_iv()), self.precision_bits)

    def with_precision(self, bits: int) -> "Enclosure":
        return Enclosure(self.lo, self.hi, bits)

    # -- formatting -------------------------------------------------------

    def __float__(self):
        return float(self.center)

    def format(self, digits: int | None = None) -> str:
        """``center±radius`` where the printed interval contains the enclosure.

        The radius is recomputed from the printed (rounded) center and rounded
        up, so parsing the string back always yields a superset.
        """
        lo, hi = self.fraction_bounds()
        if lo == hi:
            digits = digits or 25
            c = _decimal_nearest(lo, digits)
            if Fraction(c) == lo:
                return f"{c}±0"
        if digits is None:
            c0, r0 = (lo + hi) / 2, (hi - lo) / 2
            if c0 == 0 or r0 == 0:
                digits = 3
            else:
                ratio = abs(c0) / r0
                digits = max(3, min(40, len(str(int(ratio))) + 1))
        c = _decimal_nearest((lo + hi) / 2, digits)
        cf = Fraction(c)
        r = max(hi - cf, cf - lo)
        return f"{c}±{decimal_up(r, 2) if r else '0'}"

    def __repr__(self):
        return f"Enclosure({self.format()})"


def _decimal(x: Fraction, digits: int, mode: str) -> str:
    """Scientific decimal of an exact rational with ``digits`` significant digits."""
    if x == 0:
        return "0.0"
    e = len(str(abs(x.numerator) // abs(x.denominator))) - 1 if abs(x) >= 1 else -len(str(abs(x.denominator) // abs(x.numerator)))
    # adjust e so that 10^e <= |x| < 10^(e+1)
    while abs(x) >= Fraction(10) ** (e + 1):
        e += 1
    while abs(x) < Fraction(10) ** e:
        e -= 1
    scale = Fraction(10) ** (digits - 1 - e)
    y = x * scale
    if mode == "down":
        m = math.floor(y)
    elif mode == "up":
        m = math.ceil(y)
    else:
        m = round(y)
    if abs(m) >= 10 ** digits:  # rounding carried into a new digit
        e += 1
        m = m // 10 if mode != "up" else -((-m) // 10)
    sign = "-" if m < 0 else ""
    ds = str(abs(m)).rjust(digits, "0")
    mant = ds[0] + "." + (ds[1:] or "0")
    return f"{sign}{mant}e{e:+d}"


def _decimal_nearest(x, digits: int) -> str:
    return _decimal(_frac(x), digits, "nearest")


def decimal_down(x, digits: int = 17) -> str:
    """Decimal string <= x."""
    return _decimal(_frac(x), digits, "down")


def decimal_up(x, digits: int = 17) -> str:
    """Decimal string >= x."""
    return _decimal(_frac(x), digits, "up")


def _frac(x) -> Fraction:
    if isinstance(x, mpf):
        return mpf_to_fraction(x)
    return Fraction(x)


def _sci(x: mpf, digits: int) -> str:
    from mpmath import nstr

    return nstr(x, digits, min_fixed=0, max_fixed=0, strip_zeros=False)


def _sci_up(r: mpf) -> str:
    """Two-digit decimal upper bound for a non-negative radius."""
    if r == 0:
        return "0"
    from mpmath import mp, log10, floor

    with mp.workprec(64):
        e = int(floor(log10(r)))
        m = r / mpf(10) ** e
        m2 = math.ceil(float(m) * 10 + 1e-9) / 10
        if m2 >= 10:
            m2, e = 1.0, e + 1
    return f"{m2:.1f}e{e:+d}"


def _cmp(a: Fraction, b) -> int:
    b = Fraction(b)
    return (a > b) - (a < b)


def parse_enclosure(text: str) -> tuple[Fraction, Fraction]:
    """Parse a ``center±radius`` field back into exact rational bounds."""
    if "±" not in text:
        v = Fraction(text)
        return v, v
    c, r = text.split("±")
    c, r = Fraction(c), Fraction(r)
    return c - r, c + r


@dataclass(frozen=True)
class ComplexBall:
    """Rectangle enclosure of a complex number, stored as two real enclosures."""

    re: Enclosure
    im: Enclosure

    @property
    def precision_bits(self):
        return max(self.re.precision_bits, self.im.precision_bits)

    def to_iv(self):
        return iv.mpc(self.re.to_iv(), self.im.to_iv())

    @classmethod
    def from_iv(cls, z, bits):
        return cls(Enclosure.from_iv(z.real, bits), Enclosure.from_iv(z.imag, bits))

    @classmethod
    def disk(cls, center: complex | tuple, radius, bits: int) -> "ComplexBall":
        """Bounding square of the closed disk ``|z - center| <= radius``."""
        cr, ci = center
        with ivprec(bits):
            rr = iv.mpf(radius)
            re = iv.mpf(cr) + iv.mpf([-rr.b, rr.b])
            im = iv.mpf(ci) + iv.mpf([-rr.b, rr.b])
            return cls(Enclosure.from_iv(re, bits), Enclosure.from_iv(im, bits))

    def __add__(self, other):
        return self._op(other, lambda a, b: a + b)

    def __mul__(self, other):
        return self._op(other, lambda a, b: a * b)

    __rmul__ = __mul__
    __radd__ = __add__

    def _op(self, other, op):
        bits = self.precision_bits
        with ivprec(bits):
            if isinstance(other, ComplexBall):
                b = other.to_iv()
            else:
                b = _iv_from_number(other)
            return ComplexBall.from_iv(op(self.to_iv(), b), bits)

    def __pow__(self, n: int):
        bits = self.precision_bits
        with ivprec(bits):
            result = iv.mpc(1, 0)
            base = self.to_iv()
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return ComplexBall.from_iv(result, bits)

    def abs(self) -> Enclosure:
        bits = self.precision_bits
        with ivprec(bits):
            return Enclosure.from_iv(abs(self.to_iv()), bits)
