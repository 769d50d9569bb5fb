"""Pisot certification, the Pisot family ``X^k - M X^(k-1) + N`` and the
ladder of explicit upper bounds for the approximation constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mpf

from .enclosure import Enclosure, decimal_down, decimal_up, ivprec
from .errors import InputError, UndecidedComparison
from .exactreal import (
    InField,
    PolyRoot,
    Radical,
    Rational,
    SymbolicReal,
    algebraic_degree,
    eval_symbolic,
    is_algebraic_integer,
    radical_normal_form,
    same_field,
)
from .polyalg import (
    DEFAULT_MAX_BITS,
    IntPoly,
    RootDisk,
    RootSpectrum,
    height,
    irreducible_by_pisot_criterion,
    is_squarefree,
    isolate_roots,
)

# radii tried in turn before a modulus comparison is declared undecided
_RADIUS_LADDER = (64, 256, 1024, 4096, 16384, 65536)


@dataclass(frozen=True)
class PisotCertificate:
    poly: IntPoly
    spectrum: RootSpectrum
    pisot_root: Enclosure
    f: Enclosure | None
    is_unit: bool
    degree: int
    psi2: Enclosure | None
    second_real: bool | None

    @property
    def conjugates(self) -> tuple[RootDisk, ...]:
        return self.spectrum.roots[1:]

    def to_json(self) -> dict:
        return {
            "poly": str(self.poly),
            "pisot": True,
            "degree": self.degree,
            "unit": self.is_unit,
            "zeta": self.pisot_root.format(30),
            "f": None if self.f is None else self.f.format(30),
            "psi2": None if self.psi2 is None else self.psi2.format(30),
            "second_conjugate_real": self.second_real,
            "spectrum": self.spectrum.to_json(),
        }


@dataclass(frozen=True)
class NotPisot:
    poly: IntPoly
    reason: str

    def to_json(self) -> dict:
        return {"poly": str(self.poly), "pisot": False, "reason": self.reason}

    def __bool__(self):
        return False


def _modulus_vs_one(d: RootDisk) -> int | None:
    m = d.modulus()
    if m.certainly_gt(1):
        return 1
    if m.certainly_lt(1):
        return -1
    return None


def _top_group(disks, max_cmp) -> list[RootDisk] | None:
    """Disks whose modulus may equal the largest one; None if that set is ambiguous."""
    mods = [d.modulus() for d in disks]
    i_best = max(range(len(disks)), key=lambda i: mods[i].lo)
    group = [disks[i] for i in range(len(disks)) if mods[i].hi >= mods[i_best].lo]
    if len(group) == 1:
        return group
    if len(group) == 2 and all(d.real is False for d in group):
        a, b = group
        if (a.center[1] > 0) != (b.center[1] > 0):
            return group
    return None


def certify_pisot(P: IntPoly, max_bits: int = DEFAULT_MAX_BITS) -> PisotCertificate | NotPisot:
    """Certify that the largest root of P is a Pisot number, or name the violated condition.

    Root disks are refined until every modulus comparison with 1 (and the
    identification of the largest conjugate) is decided; a root on the unit
    circle is detected exactly at +-1 and otherwise surfaces as an
    :class:`UndecidedComparison` at the precision cap.
    """
    if not P.is_monic():
        return NotPisot(P, "not monic (not an algebraic integer polynomial)")
    if P.constant == 0:
        return NotPisot(P, "zero constant term (reducible, root 0)")
    if not is_squarefree(P):
        return NotPisot(P, "not squarefree")
    if P.sign_at(Fraction(1)) == 0 or P.sign_at(Fraction(-1)) == 0:
        return NotPisot(P, "root on the unit circle")
    for exp in _RADIUS_LADDER:
        if 2 * exp > max_bits:
            break
        spectrum = isolate_roots(P, mpf(2) ** -exp, max_bits)
        side = [_modulus_vs_one(d) for d in spectrum.roots]
        if side.count(1) >= 2:
            return NotPisot(P, "more than one root outside the unit circle")
        if None in side:
            continue
        if side.count(1) == 0:
            return NotPisot(P, "no root outside the unit circle")
        i = side.index(1)
        top = spectrum.roots[i]
        if not top.real or top.center[0] < 0:
            return NotPisot(P, "the root outside the unit circle is not a positive real")
        rest = [d for j, d in enumerate(spectrum.roots) if j != i]
        zeta = top.modulus()
        if not rest:
            return PisotCertificate(P, spectrum, zeta, None, abs(P.constant) == 1, 1, None, None)
        group = _top_group(rest, None)
        if group is None:
            continue
        mods = [d.modulus() for d in rest]
        f = Enclosure(max(m.lo for m in mods), max(m.hi for m in mods), spectrum.roots[0].bits)
        lead = group[0] if len(group) == 1 else next(d for d in group if d.center[1] > 0)
        roots = (top,) + tuple(rest)
        spectrum = RootSpectrum(P, roots, True, spectrum.modulus_order)
        return PisotCertificate(
            P, spectrum, zeta, f, abs(P.constant) == 1, P.degree, lead.argument(), len(group) == 1
        )
    raise UndecidedComparison(f"modulus comparisons for {P} undecided at the precision cap")


def require_pisot(P: IntPoly, max_bits: int = DEFAULT_MAX_BITS) -> PisotCertificate:
    cert = certify_pisot(P, max_bits)
    if isinstance(cert, NotPisot):
        raise InputError(f"{P} is not a Pisot polynomial: {cert.reason}")
    return cert


def pisot_certificate_of(zeta: SymbolicReal) -> PisotCertificate | None:
    """Certificate for a symbolic zeta if it is a Pisot number given by its polynomial."""
    if isinstance(zeta, PolyRoot) and zeta.selector in ("max", 0):
        cert = certify_pisot(zeta.poly)
        return cert if isinstance(cert, PisotCertificate) else None
    if isinstance(zeta, Rational) and zeta.q == 1 and zeta.p >= 2:
        return certify_pisot(IntPoly((-zeta.p, 1)))
    return None


def family_Q(k: int, M: int, N: int) -> IntPoly:
    """The Pisot polynomial ``X^k - M X^(k-1) + N`` (k >= 2, M >= 3, 1 <= N <= M-2)."""
    if k < 2 or M < 3 or not 1 <= N <= M - 2:
        raise InputError(f"family parameters out of range: k={k}, M={M}, N={N}")
    return IntPoly((N,) + (0,) * (k - 2) + (-M, 1))


def family_grid(k_values, M_values):
    for k in k_values:
        for M in M_values:
            for N in range(1, M - 1):
                yield k, M, N


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundEntry:
    """One explicit bound; ``value`` None with applicable=True means +infinity."""

    name: str
    kind: str  # sigma_sup_upper | sigma_inf_upper | restricted_sup_upper | log_zeta_lower
    value: Enclosure | None
    applicable: bool
    source: str
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "applicable": self.applicable, "source": self.source}
        if self.value is not None:
            out["lo"] = decimal_down(self.value.lo, 20)
            out["hi"] = decimal_up(self.value.hi, 20)
        else:
            out["lo"] = out["hi"] = None if not self.applicable else "inf"
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class BoundReport:
    alpha: str
    zeta: str
    bounds: list[BoundEntry]
    cert: PisotCertificate | None = None
    measured: dict = field(default_factory=dict)
    window: dict = field(default_factory=dict)

    def get(self, name: str) -> BoundEntry:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)

    def verdicts(self) -> dict[str, str]:
        """pass / fail / n/a for every applicable bound against the measured window values."""
        out = {}
        for b in self.bounds:
            m = self.measured.get(b.kind)
            if not b.applicable or m is None:
                out[b.name] = "n/a"
                continue
            if b.kind == "log_zeta_lower":
                out[b.name] = "pass" if b.value.lo <= m.hi else "fail"
                continue
            if b.value is None:
                out[b.name] = "pass"
            elif m == math.inf:
                out[b.name] = "fail"
            else:
                out[b.name] = "pass" if m.lo <= b.value.hi else "fail"
        return out

    def to_json(self) -> dict:
        measured = {
            k: ("inf" if v == math.inf else v.format(20)) for k, v in sorted(self.measured.items())
        }
        return {
            "alpha": self.alpha,
            "zeta": self.zeta,
            "bounds": [b.to_json() for b in self.bounds],
            "cert": None if self.cert is None else self.cert.to_json(),
            "measured": measured,
            "window": self.window,
            "verdicts": self.verdicts(),
        }


def _E(x, bits=64) -> Enclosure:
    return Enclosure.exact(x, bits)


def _log(x, bits=64) -> Enclosure:
    return _E(x, bits).log()


def degree_bounds(cert: PisotCertificate, bits: int = 64) -> list[BoundEntry]:
    """For alpha = 1: liminf <= 1/(k-1), limsup <= k-1 and liminf <= -log f / log zeta."""
    k = cert.degree
    if k < 2:
        raise InputError("degree bounds need k >= 2")
    logz = cert.pisot_root.with_precision(bits).log()
    ratio = -(cert.f.with_precision(bits).log()) / logz
    return [
        BoundEntry("inf_reciprocal_degree", "sigma_inf_upper", _E(Fraction(1, k - 1), bits), True,
                   "Pisot zeta, alpha = 1: liminf sigma_n <= 1/(k-1)"),
        BoundEntry("sup_degree", "sigma_sup_upper", _E(k - 1, bits), True,
                   "Pisot zeta, alpha = 1: limsup sigma_n <= k-1"),
        BoundEntry("inf_conjugate_modulus", "sigma_inf_upper", ratio, True,
                   "Pisot zeta, alpha = 1: liminf sigma_n <= -log f / log zeta"),
    ]


def unit_relations(cert: PisotCertificate, bits: int = 64) -> dict:
    """Structural predictions that depend on the unit property and the degree."""
    k = cert.degree
    if k < 2:
        raise InputError("unit relations need k >= 2")
    logz = cert.pisot_root.with_precision(bits).log()
    target = -(cert.f.with_precision(bits).log()) / logz
    recip = Fraction(1, k - 1)
    out = {
        "degree": k,
        "unit": cert.is_unit,
        "target": target,
        "second_conjugate_real": cert.second_real,
    }
    if k == 2:
        # sigma_n is eventually the constant -log f/log zeta, equal to 1 iff zeta is a unit
        out["predicted_sigma"] = target
        out["predicted_sigma_is_one"] = cert.is_unit
        out["consistent"] = target.contains(1) == cert.is_unit
    if k >= 4:
        out["strict_below_reciprocal_degree"] = target.certainly_lt(recip)
    out["target_le_reciprocal_degree"] = not target.certainly_gt(recip)
    out["equality_regime"] = bool(cert.second_real)
    return out


def second_conjugate_angle(cert: PisotCertificate) -> dict:
    """Argument psi_2 of a largest conjugate; equal-modulus conjugates must form a complex pair."""
    if cert.degree < 2:
        raise InputError("no conjugates for a rational integer")
    pair_ok = True
    if not cert.second_real:
        rest = cert.conjugates
        top = [d for d in rest if d.modulus().overlaps(cert.f)]
        pair_ok = len(top) == 2 and all(d.real is False for d in top)
    return {"psi2": cert.psi2, "real_second_conjugate": bool(cert.second_real), "pair_consistent": pair_ok}


@dataclass(frozen=True)
class _ZetaData:
    k: int
    H: int
    algebraic_integer: bool
    radical: tuple[int, int, int] | None
    poly: IntPoly


def _zeta_data(zeta: SymbolicReal) -> _ZetaData:
    nf = radical_normal_form(zeta)
    if nf is not None:
        p, q, L = nf
        poly = IntPoly((-p,) + (0,) * (L - 1) + (q,))
        return _ZetaData(L, max(p, q), q == 1, nf, poly)
    if isinstance(zeta, PolyRoot):
        P = zeta.poly
        return _ZetaData(P.degree, height(P), abs(P.leading) == 1, None, P)
    raise InputError("bound ladder needs zeta given as rational, radical or polynomial root")


def bound_ladder(
    alpha: SymbolicReal,
    zeta: SymbolicReal,
    cert: PisotCertificate | None = None,
    bits: int = 64,
) -> BoundReport:
    """All explicit bounds whose hypotheses the pair (alpha, zeta) meets.

    The extension degree s = [Q(alpha, zeta) : Q(zeta)] is 1 when alpha is
    rational or represented over zeta's field, and is replaced by its upper
    bound t = deg alpha otherwise.
    """
    z = _zeta_data(zeta)
    zval = eval_symbolic(zeta, bits)
    if not zval.certainly_gt(1):
        raise InputError("zeta must exceed 1")
    aval = eval_symbolic(alpha, bits)
    if not aval.certainly_gt(0):
        raise InputError("alpha must be positive")
    if cert is None and z.radical is None:
        cert = pisot_certificate_of(zeta)
    k, H = z.k, z.H
    t = algebraic_degree(alpha)
    s = 1 if same_field(alpha, zeta) else t
    alpha_int = is_algebraic_integer(alpha)
    logz = zval.log()
    logk_half = _log(k, bits) * Fraction(1, 2)
    logH = _log(H, bits)
    is_radical = z.radical is not None
    bounds: list[BoundEntry] = []

    # lower bound on log zeta from the height and degree
    if not is_radical and k >= 2:
        denom = _E(2, bits) ** (k - 1) * _E(k, bits).sqrt() * H
        val = (1 + 1 / denom).log()
        bounds.append(BoundEntry("log_zeta_lower", "log_zeta_lower", val, True,
                                 "log zeta >= log(1 + 1/(2^(k-1) sqrt(k) H))"))
    else:
        bounds.append(BoundEntry("log_zeta_lower", "log_zeta_lower", None, False,
                                 "log zeta >= log(1 + 1/(2^(k-1) sqrt(k) H))",
                                 "zeta has a rational power"))

    pisot = cert is not None and cert.degree >= 2
    if pisot and isinstance(alpha, Rational) and alpha.value == 1:
        bounds.extend(degree_bounds(cert, bits))
    bounds.append(BoundEntry(
        "pisot_alpha_degree", "sigma_sup_upper", _E(t * (k - 1), bits) if pisot else None, pisot,
        "Pisot zeta, algebraic alpha of degree t: limsup <= t(k-1)",
        "" if pisot else "zeta not certified Pisot of degree >= 2"))

    integral = z.algebraic_integer and alpha_int and not is_radical and k >= 2
    why = "" if integral else "needs algebraic-integer alpha, zeta with zeta not a radical"
    if integral:
        n_disk = _count_in_closed_disk(zeta, cert)
        n_eff = n_disk if n_disk is not None else k - 1
        term = (logk_half + logH) / logz
        bounds.append(BoundEntry("conjugates_in_disk", "sigma_sup_upper", (term + n_eff) * s, True,
                                 "s(N(zeta) + (log(k)/2 + log H)/log zeta)",
                                 "" if n_disk is not None else "N(zeta) undecided, used k-1"))
        bounds.append(BoundEntry("degree_height", "sigma_sup_upper", (term + (k - 1)) * t, True,
                                 "t(k - 1 + (log(k)/2 + log H)/log zeta)"))
        denom = _E(2, bits) ** (k - 1) * _E(k, bits).sqrt() * H
        uni = (logk_half + logH) / (1 + 1 / denom).log()
        bounds.append(BoundEntry("uniform_degree_height", "sigma_sup_upper", (uni + (k - 1)) * t, True,
                                 "t(k - 1 + (log(k)/2 + log H)/log(1 + 1/(2^(k-1) sqrt(k) H)))"))
        simple = _E(2, bits) ** k * _E(k, bits).sqrt() * H * (logk_half + logH)
        bounds.append(BoundEntry("uniform_simplified", "sigma_sup_upper", (simple + (k - 1)) * t, True,
                                 "t(k - 1 + 2^k sqrt(k) H (log(k)/2 + log H))"))
    else:
        for name in ("conjugates_in_disk", "degree_height", "uniform_degree_height", "uniform_simplified"):
            bounds.append(BoundEntry(name, "sigma_sup_upper", None, False, "algebraic-integer case", why))

    lead = abs(z.poly.leading)
    general = not is_radical and lead >= 2 and H >= 2
    if general:
        c = _E(2, bits) ** k * _E(k, bits).sqrt() * H * logH
        inner = (logk_half + logH) / _log(2, bits) + (2 * k - 1)
        val = c * t * inner + c - 1
        bounds.append(BoundEntry("general_algebraic", "sigma_sup_upper", val, True,
                                 "2^k sqrt(k) t H log H (2k - 1 + (log(k)/2 + log H)/log 2) + 2^k sqrt(k) H log H - 1"))
    else:
        bounds.append(BoundEntry("general_algebraic", "sigma_sup_upper", None, False,
                                 "non-integral algebraic zeta",
                                 "needs a non-radical zeta with leading coefficient >= 2"))

    if is_radical and z.radical[1] > 1:
        p, q, _ = z.radical
        val = (_log(p, bits) + _log(q, bits)) / (_log(p, bits) - _log(q, bits))
        bounds.append(BoundEntry("radical", "sigma_sup_upper", val, True,
                                 "zeta = (p/q)^(1/L), q > 1: limsup <= (log p + log q)/(log p - log q)"))
    else:
        bounds.append(BoundEntry("radical", "sigma_sup_upper", None, False,
                                 "zeta = (p/q)^(1/L), q > 1", "zeta is not a radical with q > 1"))

    if is_radical and z.radical[1] == 1:
        bounds.append(BoundEntry("radical_integer_restricted", "restricted_sup_upper", _E(1, bits), True,
                                 "zeta = M^(1/L): limsup over non-integer terms <= 1"))
    else:
        bounds.append(BoundEntry("radical_integer_restricted", "restricted_sup_upper", None, False,
                                 "zeta = M^(1/L)", "zeta is not an integer radical"))

    report = BoundReport(str(alpha), str(zeta), bounds, cert)
    report.measured["log_zeta_lower"] = logz
    return report


def _count_in_closed_disk(zeta: SymbolicReal, cert: PisotCertificate | None) -> int | None:
    """Number of conjugates of zeta with modulus <= 1, or None if undecided."""
    if cert is not None:
        return cert.degree - 1
    if not isinstance(zeta, PolyRoot):
        return None
    spectrum = isolate_roots(zeta.poly)
    zv = eval_symbolic(zeta, 64)
    count = 0
    skipped = False
    for d in spectrum.roots:
        if not skipped and d.real and d.modulus().overlaps(zv):
            skipped = True
            continue
        m = d.modulus()
        if m.certainly_gt(1):
            continue
        if m.hi <= 1:
            count += 1
        else:
            return None
    return count
