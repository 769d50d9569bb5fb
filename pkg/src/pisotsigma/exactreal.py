"""Symbolic real inputs, their certified evaluation, and the nearest-integer
functions ``<x>`` and ``||x||`` with the round-half-down convention.

Inputs are always symbolic (rational, radical, selected polynomial root, or an
element of the field generated by such a root), so that exact integer hits
and ties can be decided without floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import gmpy2

from .enclosure import Enclosure
from .errors import InputError, InsufficientPrecision, PrecisionCapExceeded
from .polyalg import FieldArithmetic, IntPoly, refine_real_root, select_root

DEFAULT_START_BITS = 64
DEFAULT_MAX_BITS = 1 << 20
DEFAULT_TARGET_REL_ERROR = 1e-12


# ---------------------------------------------------------------------------
# symbolic forms


@dataclass(frozen=True)
class Rational:
    p: int
    q: int = 1

    def __post_init__(self):
        if self.q <= 0:
            raise InputError("denominator must be positive")
        g = gcd(self.p, self.q)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self):
        return f"rat:{self.p}" if self.q == 1 else f"rat:{self.p}/{self.q}"


@dataclass(frozen=True)
class Radical:
    """The positive real ``(p/q)^(1/L)``; L need not be minimal."""

    p: int
    q: int
    L: int

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0 or self.L <= 0:
            raise InputError("radical needs positive p, q, L")
        g = gcd(self.p, self.q)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)

    def __str__(self):
        return f"radical:{self.p}/{self.q}:{self.L}"


@dataclass(frozen=True)
class PolyRoot:
    """A root of an integer polynomial, by selector ``"max"`` or sorted index."""

    poly: IntPoly
    selector: str | int = "max"

    def __str__(self):
        return f"polyroot:{self.poly}:{self.selector}"


@dataclass(frozen=True)
class InField:
    """``(1/denom) * g(base) * base^power_shift`` with integer polynomial g."""

    base: "PolyRoot | Radical"
    numer_poly: tuple[int, ...]
    denom: int = 1
    power_shift: int = 0

    def __post_init__(self):
        if self.denom <= 0:
            raise InputError("InField denominator must be positive")
        if not any(self.numer_poly):
            raise InputError("InField numerator polynomial is zero")
        if not isinstance(self.base, (PolyRoot, Radical)):
            raise InputError("InField base must be a polyroot or radical")

    def __str__(self):
        g = _poly_text(self.numer_poly)
        return f"infield:{self.base}:{g}:{self.denom}:{self.power_shift}"


SymbolicReal = Rational | Radical | PolyRoot | InField


def _poly_text(coeffs) -> str:
    trimmed = list(coeffs)
    while len(trimmed) > 1 and trimmed[-1] == 0:
        trimmed.pop()
    if len(trimmed) == 1:
        return str(trimmed[0])
    return str(IntPoly(tuple(trimmed)))


def _parse_small_poly(text: str) -> tuple[int, ...]:
    text = text.strip()
    try:
        return (int(text),)
    except ValueError:
        return IntPoly.parse(text).coeffs


def _parse_fraction(text: str) -> tuple[int, int]:
    if "/" in text:
        a, b = text.split("/", 1)
        return int(a), int(b)
    return int(text), 1


def parse_symbolic(text: str) -> SymbolicReal:
    """Parse ``rat:p/q``, ``radical:p/q:L``, ``polyroot:<poly>:<selector>``,
    ``infield:<base>:<numer-poly>:<denom>:<shift>``.  Bare decimals are rejected."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    try:
        if kind == "rat":
            p, q = _parse_fraction(rest)
            return Rational(p, q)
        if kind == "radical":
            frac, _, L = rest.rpartition(":")
            p, q = _parse_fraction(frac)
            return Radical(p, q, int(L))
        if kind == "polyroot":
            poly, _, sel = rest.rpartition(":")
            selector = sel if sel == "max" else int(sel)
            P = IntPoly.parse(poly)
            if P.degree == 1 and selector in ("max", 0):
                raise InputError("degree-1 polyroot: use rat:p/q")
            return PolyRoot(P, selector)
        if kind == "infield":
            base_text, g, denom, shift = rest.rsplit(":", 3)
            base = parse_symbolic(base_text)
            return InField(base, _parse_small_poly(g), int(denom), int(shift))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed symbolic real {text!r}: {exc}") from exc
    raise InputError(f"unknown symbolic form {text!r} (raw decimals are not accepted)")


# ---------------------------------------------------------------------------
# exact field representation


def radical_normal_form(x: SymbolicReal) -> tuple[int, int, int] | None:
    """``(p, q, L)`` with L minimal and ``x = (p/q)^(1/L)``, for radical-like inputs.

    Handles Rational, Radical and binomial PolyRoots ``a x^L - b`` (max selector).
    """
    if isinstance(x, Rational):
        if x.p <= 0:
            return None
        return x.p, x.q, 1
    if isinstance(x, Radical):
        p, q, L = x.p, x.q, x.L
    elif isinstance(x, PolyRoot):
        c = x.poly.coeffs
        nz = [i for i, a in enumerate(c) if a]
        if len(nz) != 2 or nz[0] != 0 or x.selector != "max":
            return None
        L = nz[1]
        a, b = c[L], -c[0]
        if a < 0:
            a, b = -a, -b
        if b <= 0:
            return None
        g = gcd(a, b)
        p, q = b // g, a // g
        if p <= q:
            return None
    else:
        return None
    # reduce L: (p/q)^(1/L) = (p'/q')^(1/L') with L' | L
    for d in sorted(_divisors(L)):
        e = L // d
        rp, exact_p = gmpy2.iroot(p, e)
        rq, exact_q = gmpy2.iroot(q, e)
        if exact_p and exact_q:
            return int(rp), int(rq), d
    return p, q, L


def _divisors(n: int) -> list[int]:
    out = set()
    for i in range(1, int(math.isqrt(n)) + 1):
        if n % i == 0:
            out.add(i)
            out.add(n // i)
    return sorted(out)


def field_of(x: SymbolicReal):
    """``(base_key, defining_poly, element)``; base_key None means x is rational.

    The defining polynomial of a PolyRoot is assumed irreducible; a radical's
    binomial with minimal L always is.
    """
    if isinstance(x, Rational):
        return None, None, (x.value,)
    if isinstance(x, (Radical, PolyRoot)):
        nf = radical_normal_form(x)
        if nf is not None:
            p, q, L = nf
            if L == 1:
                return None, None, (Fraction(p, q),)
            key = ("radical", p, q, L)
            D = IntPoly((-p,) + (0,) * (L - 1) + (q,))
            return key, D, FieldArithmetic(D).reduce([0, 1])
        return ("poly", x.poly.coeffs, x.selector), x.poly, FieldArithmetic(x.poly).reduce([0, 1])
    if isinstance(x, InField):
        key, D, base_elem = field_of(x.base)
        if key is None:
            c = Fraction(_eval_int_poly(x.numer_poly, base_elem[0])) * base_elem[0] ** x.power_shift / x.denom
            return None, None, (c,)
        F = FieldArithmetic(D)
        g = (Fraction(0),) * F.k
        power = F.one()
        for coef in x.numer_poly:
            if coef:
                g = F.add(g, F.scale(power, coef))
            power = F.mul(power, base_elem)
        shift = F.power(base_elem, x.power_shift) if x.power_shift >= 0 else F.x_power(x.power_shift)
        elem = F.scale(F.mul(g, shift), Fraction(1, x.denom))
        return key, D, elem
    raise InputError(f"unsupported symbolic real {x!r}")


def _eval_int_poly(coeffs, v):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * v + c
    return acc


@lru_cache(maxsize=4096)
def exact_rational_value(alpha: SymbolicReal, zeta: SymbolicReal, n: int):
    """``(decided, value)``: value is the exact rational ``alpha*zeta^n`` or None.

    ``decided`` is False for input mixes without a common exact representation;
    in that case value is None and the caller must treat the question as open.
    """
    fa, fz = field_of(alpha), field_of(zeta)
    ka, Da, ea = fa
    kz, Dz, ez = fz
    if ka is None and kz is None:
        return True, ea[0] * ez[0] ** n
    if ka is None or kz is None or ka == kz:
        key, D = (kz, Dz) if kz is not None else (ka, Da)
        F = FieldArithmetic(D)
        a = F.reduce(ea) if ka is not None else F.scale(F.one(), ea[0])
        if kz is not None:
            if ez == F.reduce([0, 1]):
                z = F.x_power(n)
            elif n >= 0:
                z = F.power(ez, n)
            else:
                return False, None
        else:
            z = F.scale(F.one(), ez[0] ** n)
        return True, F.constant_value(F.mul(a, z))
    ra, rz = radical_normal_form(alpha), radical_normal_form(zeta)
    if ra is not None and rz is not None:
        pa, qa, La = ra
        pz, qz, Lz = rz
        D = La * Lz // gcd(La, Lz)
        num = pa ** (D // La) * pz ** (n * D // Lz)
        den = qa ** (D // La) * qz ** (n * D // Lz)
        g = gcd(num, den)
        num, den = num // g, den // g
        rn, en = gmpy2.iroot(num, D)
        rd, ed = gmpy2.iroot(den, D)
        if en and ed:
            return True, Fraction(int(rn), int(rd))
        return True, None
    return False, None


def exact_hit_test(alpha: SymbolicReal, zeta: SymbolicReal, n: int) -> bool:
    """True iff ``alpha * zeta^n`` is provably an integer (exact arithmetic only)."""
    decided, value = exact_rational_value(alpha, zeta, n)
    return decided and value is not None and value.denominator == 1


# ---------------------------------------------------------------------------
# evaluation


def _radical_enclosure(p: int, q: int, L: int, bits: int) -> Enclosure:
    # floor((p/q * 2^(L m))^(1/L)) / 2^m <= value < (r + 1) / 2^m
    log2v = (p.bit_length() - q.bit_length()) / L
    m = bits + 4 + max(0, int(-log2v) + 2)
    y = (p << (L * m)) // q
    r, exact = gmpy2.iroot(y, L)
    r = int(r)
    if exact and (p << (L * m)) % q == 0:
        return Enclosure.exact(Fraction(r, 1 << m), bits + 8)
    return Enclosure.from_bounds(Fraction(r, 1 << m), Fraction(r + 1, 1 << m), bits + 8)


@lru_cache(maxsize=1024)
def _polyroot_enclosure(x: PolyRoot, bits: int) -> Enclosure:
    disk = select_root(x.poly, x.selector)
    if not disk.real:
        raise InputError(f"selected root of {x.poly} is not real")
    lo, hi = disk.real_bracket()
    lo, hi = refine_real_root(x.poly, lo, hi, bits + 4)
    return Enclosure.from_bounds(lo, hi, bits + 8)


def _eval_raw(x: SymbolicReal, bits: int) -> Enclosure:
    if isinstance(x, Rational):
        return Enclosure.exact(x.value, bits + 4)
    if isinstance(x, Radical):
        return _radical_enclosure(x.p, x.q, x.L, bits)
    if isinstance(x, PolyRoot):
        return _polyroot_enclosure(x, bits)
    if isinstance(x, InField):
        b = _eval_raw(x.base, bits)
        acc = Enclosure.exact(0, b.precision_bits)
        for c in reversed(x.numer_poly):
            acc = acc * b + c
        if x.power_shift >= 0:
            acc = acc * b ** x.power_shift
        else:
            acc = acc / b ** (-x.power_shift)
        return acc / x.denom
    raise InputError(f"unsupported symbolic real {x!r}")


@lru_cache(maxsize=4096)
def eval_symbolic(x: SymbolicReal, precision_bits: int) -> Enclosure:
    """Enclosure of x with radius <= 2^(1-precision_bits) * |x| (x != 0)."""
    if precision_bits < 16:
        raise InputError("precision must be at least 16 bits")
    guard = 8
    target = Fraction(1, 1 << (precision_bits - 1))
    for _ in range(12):
        e = _eval_raw(x, precision_bits + guard)
        if e.is_exact() or (not e.contains_zero() and _rel_radius_ok(e, target)):
            return e
        guard *= 2
    if e.contains_zero():
        raise InputError(f"{x} evaluates to zero")
    raise PrecisionCapExceeded(f"could not evaluate {x} to {precision_bits} bits")


def _rel_radius_ok(e: Enclosure, target: Fraction) -> bool:
    lo, hi = e.fraction_bounds()
    mag = min(abs(lo), abs(hi))
    return (hi - lo) / 2 <= target * mag


def eval_power(alpha: SymbolicReal, zeta: SymbolicReal, n: int, bits: int) -> Enclosure:
    """Enclosure of ``alpha * zeta^n`` with relative radius about 2^-bits."""
    extra = max(1, n).bit_length() + 8
    target = Fraction(1, 1 << (bits - 1))
    for _ in range(8):
        b = bits + extra
        v = eval_symbolic(alpha, b) * (eval_symbolic(zeta, b) ** n)
        v = v.with_precision(b)
        if _rel_radius_ok(v, target):
            return v
        extra *= 2
    return v


# ---------------------------------------------------------------------------
# nearest integer


@dataclass(frozen=True)
class NearestIntResult:
    nearest: int
    distance: Enclosure
    exact_hit: bool
    certified: bool


def _round_half_down(x: Fraction) -> int:
    # <x> = ceil(x - 1/2): ties go to floor(x)
    return math.ceil(x - Fraction(1, 2))


def nearest_int_exact(x: Fraction, bits: int = 64) -> NearestIntResult:
    n = _round_half_down(x)
    d = abs(x - n)
    return NearestIntResult(n, Enclosure.exact(d, bits), d == 0, True)


def nearest_int(v: Enclosure) -> NearestIntResult:
    """Nearest integer of the enclosed real; ties resolve downward.

    ``certified`` is False when the enclosure straddles a half-integer.  An
    exact (radius 0) enclosure is treated as an exact value.
    """
    lo, hi = v.fraction_bounds()
    if lo == hi:
        return nearest_int_exact(lo, v.precision_bits)
    if hi - lo >= Fraction(1, 2):
        raise InsufficientPrecision("enclosure radius >= 1/4; re-evaluate at higher precision")
    n_lo, n_hi = _round_half_down(lo), _round_half_down(hi)
    certified = n_lo == n_hi
    n = n_lo if certified else _round_half_down((lo + hi) / 2)
    dist = abs(v - n)
    return NearestIntResult(n, dist, False, certified)


def refine_until_certified(
    zeta: SymbolicReal,
    n: int,
    alpha: SymbolicReal = Rational(1),
    target_rel_error: float = DEFAULT_TARGET_REL_ERROR,
    max_bits: int = DEFAULT_MAX_BITS,
    start_bits: int = DEFAULT_START_BITS,
) -> NearestIntResult:
    """Certified ``<alpha zeta^n>`` and ``||alpha zeta^n||`` on a doubling precision ladder."""
    return refine_with_value(zeta, n, alpha, target_rel_error, max_bits, start_bits)[0]


def refine_with_value(zeta, n, alpha=Rational(1), target_rel_error=DEFAULT_TARGET_REL_ERROR,
                      max_bits=DEFAULT_MAX_BITS, start_bits=DEFAULT_START_BITS):
    """Like :func:`refine_until_certified` but also returns the value enclosure and bits used."""
    if not 0 < target_rel_error < 1:
        raise InputError("target_rel_error must lie in (0, 1)")
    decided, exact = exact_rational_value(alpha, zeta, n)
    if decided and exact is not None:
        bits = max(start_bits, 64)
        res = nearest_int_exact(exact, bits)
        if not res.exact_hit:
            bits = _bits_for(res.distance, exact, target_rel_error, bits)
            res = NearestIntResult(res.nearest, Enclosure.exact(abs(exact - res.nearest), bits), False, True)
        return res, Enclosure.exact(exact, bits), bits
    bits = max(start_bits, 16)
    while True:
        v = eval_power(alpha, zeta, n, bits)
        try:
            res = nearest_int(v)
        except InsufficientPrecision:
            res = None
        if res is not None and res.certified:
            rw = res.distance.rel_width()
            if rw <= target_rel_error:
                return res, v, bits
        if bits >= max_bits:
            raise PrecisionCapExceeded(
                f"alpha*zeta^{n} not certified at {bits} bits (suspected exact hit or tie)", bits
            )
        bits = min(max_bits, bits * 2)


def _bits_for(dist: Enclosure, exact: Fraction, target: float, bits: int) -> int:
    while not (dist.is_exact() or dist.rel_width() <= target):
        bits *= 2
        dist = Enclosure.exact(abs(exact - _round_half_down(exact)), bits)
    return bits


# ---------------------------------------------------------------------------
# algebraic data of a symbolic input


def _charpoly(F: FieldArithmetic, elem) -> list[Fraction]:
    """Characteristic polynomial (monic, low to high) of multiplication by elem."""
    k = F.k
    cols = [F.mul(elem, F.x_power(i)) for i in range(k)]
    A = [[cols[j][i] for j in range(k)] for i in range(k)]
    # Faddeev-LeVerrier
    coeffs = [Fraction(0)] * (k + 1)
    coeffs[k] = Fraction(1)
    Mk = [[Fraction(0)] * k for _ in range(k)]
    for m in range(1, k + 1):
        # M_m = A M_{m-1} + c_{k-m+1} I
        AM = [[sum(A[i][l] * Mk[l][j] for l in range(k)) for j in range(k)] for i in range(k)]
        c_prev = coeffs[k - m + 1]
        Mk = [[AM[i][j] + (c_prev if i == j else 0) for j in range(k)] for i in range(k)]
        AMk = [[sum(A[i][l] * Mk[l][j] for l in range(k)) for j in range(k)] for i in range(k)]
        coeffs[k - m] = -sum(AMk[i][i] for i in range(k)) / m
    return coeffs


def minimal_polynomial(x: SymbolicReal) -> list[Fraction]:
    """Monic minimal polynomial of x over Q (low to high).

    Computed as the squarefree part of the characteristic polynomial of x in
    the field generated by its base, which is a power of the minimal polynomial.
    """
    from .polyalg import qpoly_divmod, qpoly_gcd

    key, D, elem = field_of(x)
    if key is None:
        return [-elem[0], Fraction(1)]
    cp = _charpoly(FieldArithmetic(D), elem)
    dcp = [i * c for i, c in enumerate(cp)][1:]
    g = qpoly_gcd(cp, dcp)
    m, _ = qpoly_divmod(cp, g)
    lead = m[-1]
    return [c / lead for c in m]


def algebraic_degree(x: SymbolicReal) -> int:
    return len(minimal_polynomial(x)) - 1


def is_algebraic_integer(x: SymbolicReal) -> bool:
    return all(c.denominator == 1 for c in minimal_polynomial(x))


def same_field(alpha: SymbolicReal, zeta: SymbolicReal) -> bool:
    """True when alpha is rational or lies in the field used to represent zeta."""
    ka = field_of(alpha)[0]
    return ka is None or ka == field_of(zeta)[0]
