"""Certified continued fractions and finite-depth irrationality-exponent estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from mpmath import iv, mpf

from .enclosure import Enclosure, ivprec
from .errors import InputError, PrecisionCapExceeded
from .pisot import PisotCertificate
from .polyalg import isolate_roots

Provider = Callable[[int], Enclosure]


@dataclass
class CFExpansion:
    quotients: list[int]
    certified_depth: int
    terminated: bool
    bits_used: int

    @property
    def convergents(self) -> list[tuple[int, int]]:
        out = []
        p0, q0, p1, q1 = 1, 0, self.quotients[0], 1
        out.append((p1, q1))
        for a in self.quotients[1:]:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append((p1, q1))
        return out

    def determinants_ok(self) -> bool:
        """``p_i q_{i-1} - p_{i-1} q_i = (-1)^(i-1)`` at every index."""
        c = self.convergents
        return all(
            c[i][0] * c[i - 1][1] - c[i - 1][0] * c[i][1] == (-1) ** (i - 1) for i in range(1, len(c))
        )

    def to_json(self) -> dict:
        return {
            "quotients": self.quotients,
            "convergents": [[str(p), str(q)] for p, q in self.convergents],
            "certified_depth": self.certified_depth,
            "terminated": self.terminated,
            "bits_used": self.bits_used,
        }


def _expand_interval(lo: Fraction, hi: Fraction, depth: int) -> tuple[list[int], bool]:
    """Quotients shared by every real in ``[lo, hi]`` (at most depth+1 of them)."""
    out = []
    while len(out) <= depth:
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            break
        a = a_lo
        if lo == hi:
            out.append(a)
            if lo == a:
                return out, True
        elif lo == a:
            # the interval touches an integer; the quotient is ambiguous
            break
        else:
            out.append(a)
        lo, hi = 1 / (hi - a), 1 / (lo - a)
    return out, False


def cf_expand(x: Provider | Fraction | int, depth: int, start_bits: int = 64, max_bits: int = 1 << 16) -> CFExpansion:
    """Continued fraction ``[a_0; a_1, ..., a_depth]`` certified against the enclosures.

    ``x`` is an exact rational (the expansion terminates) or a provider mapping
    a precision in bits to an :class:`Enclosure`; precision doubles until
    ``depth`` quotients are constant across the whole enclosure.
    """
    if depth < 0:
        raise InputError("depth must be non-negative")
    if isinstance(x, (int, Fraction)):
        q, term = _expand_interval(Fraction(x), Fraction(x), depth)
        return CFExpansion(q, len(q) - 1, term, 0)
    bits = start_bits
    while True:
        e = x(bits)
        lo, hi = e.fraction_bounds()
        q, term = _expand_interval(lo, hi, depth)
        if term or len(q) > depth:
            return CFExpansion(q[: depth + 1], min(depth, len(q) - 1), term, bits)
        if bits >= max_bits:
            raise PrecisionCapExceeded(f"continued fraction certified only to depth {len(q) - 1}", bits)
        bits *= 2


@dataclass
class ExponentEstimate:
    value: Enclosure
    full_max: Enclosure
    from_index: int
    depth: int

    def to_json(self) -> dict:
        return {
            "lambda1_estimate": self.value.format(8),
            "max_all_indices": self.full_max.format(8),
            "from_index": self.from_index,
            "depth": self.depth,
            "note": "finite-depth heuristic, not the limit",
        }


def irrationality_exponent_estimate(cf: CFExpansion, tail_start: int | None = None) -> ExponentEstimate:
    """max of ``log q_{i+1} / log q_i`` over the last quarter of indices.

    Since ``||q_i x|| ~ 1/q_{i+1}``, each ratio measures one convergent's
    quality. A partial quotient ``a`` inflates its ratio by about
    ``log a / log q_i``, so early indices are dropped; the cut-off is
    configurable through ``tail_start``.
    """
    if cf.certified_depth < 5:
        raise InputError("need certified depth >= 5")
    qs = [q for _, q in cf.convergents]
    idx = [i for i in range(len(qs) - 1) if qs[i] >= 2]
    if not idx:
        raise InputError("no convergent denominators >= 2")
    start = (3 * cf.certified_depth) // 4 if tail_start is None else tail_start
    ratios = {i: Enclosure.exact(qs[i + 1], 64).log() / Enclosure.exact(qs[i], 64).log() for i in idx}
    tail = [r for i, r in ratios.items() if i >= start] or list(ratios.values())

    def emax(rs):
        return Enclosure(max(r.lo for r in rs), max(r.hi for r in rs), 64)

    return ExponentEstimate(emax(tail), emax(list(ratios.values())), start, cf.certified_depth)


def quadratic_provider(a: int, b: int, c: int, d: int) -> Provider:
    """Provider for ``(a + b sqrt(c)) / d``."""

    def provide(bits: int) -> Enclosure:
        s = Enclosure.exact(c, bits + 8).sqrt()
        return ((s * b) + a) / d

    return provide


# ---------------------------------------------------------------------------
# angle of the second conjugate


def _angle_provider(cert: PisotCertificate) -> Provider:
    P = cert.poly

    def provide(bits: int) -> Enclosure:
        spectrum = isolate_roots(P, mpf(2) ** -(bits + 8))
        top = None
        for d in spectrum.roots:
            if d.real is False and d.center[1] > 0 and d.modulus().overlaps(cert.f):
                top = d
                break
        if top is None:
            raise InputError("no complex conjugate of maximal modulus")
        arg = top.argument().with_precision(bits + 8)
        with ivprec(bits + 8):
            two_pi = Enclosure.from_iv(2 * iv.pi, bits + 8)
        return arg / two_pi

    return provide


def _tan_psi(cert: PisotCertificate, bits: int = 64) -> Enclosure:
    for d in isolate_roots(cert.poly, mpf(2) ** -(bits + 8)).roots:
        if d.real is False and d.center[1] > 0 and d.modulus().overlaps(cert.f):
            b = d.ball
            return b.im / b.re
    raise InputError("no complex conjugate of maximal modulus")


def liouville_angle_report(cert: PisotCertificate, depth: int = 40) -> dict:
    """Evidence on ``psi_2 / (2 pi)``: continued fraction, exponent estimate, tan(psi_2).

    Only evidence is reported: no finite computation decides whether a number
    is a Liouville number.
    """
    if cert.degree < 3:
        raise InputError("angle report needs degree >= 3")
    if cert.second_real:
        arg = cert.psi2
        return {
            "poly": str(cert.poly),
            "regime": "real",
            "psi2": arg.format(20),
            "note": "largest conjugate is real: psi_2 is 0 or pi",
        }
    provider = _angle_provider(cert)
    cf = cf_expand(provider, depth)
    est = irrationality_exponent_estimate(cf) if cf.certified_depth >= 5 else None
    return {
        "poly": str(cert.poly),
        "regime": "complex",
        "phi2": provider(128).format(30),
        "tan_psi2": _tan_psi(cert).format(20),
        "cf": cf.to_json(),
        "max_quotient": max(cf.quotients[1:]) if len(cf.quotients) > 1 else None,
        "lambda1": None if est is None else est.to_json(),
        "note": "evidence only, no Liouville verdict",
    }
