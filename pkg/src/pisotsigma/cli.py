"""Command-line interface: ``pisotsigma <group> <action> [options]``.

Exit status is 0 on success, 1 when an input violates a precondition and 2
when a computation would need more precision than ``--prec-max`` allows.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import InputError, PrecisionCapExceeded
from .exactreal import DEFAULT_MAX_BITS, DEFAULT_START_BITS, Rational, eval_symbolic, parse_symbolic
from .polyalg import IntPoly, irreducible_by_pisot_criterion
from .report import (
    FAMILY_FIELDS,
    FD_FIELDS,
    TRACE_FIELDS,
    RunManifest,
    csv_text,
    emit,
    json_text,
    trace_rows,
)

PREC_ENV = "PISOTSIGMA_PREC_MAX"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _int_range(text: str) -> list[int]:
    """``3..12`` or ``3,5,7`` or ``4``."""
    try:
        if ".." in text:
            a, b = text.split("..")
            out = list(range(int(a), int(b) + 1))
        else:
            out = [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"invalid integer range {text!r}") from None
    if not out:
        raise InputError(f"empty range {text!r}")
    return out


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"invalid number list {text!r}") from None


def _pair(text: str) -> tuple[Fraction, Fraction]:
    try:
        a, b = text.split(",")
        return Fraction(a), Fraction(b)
    except ValueError:
        raise InputError(f"expected 'lo,hi', got {text!r}") from None


def _default_prec_max() -> int:
    raw = os.environ.get(PREC_ENV)
    if raw is None:
        return DEFAULT_MAX_BITS
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{PREC_ENV} must be an integer number of bits") from None


def _common(p: argparse.ArgumentParser, fmt: str | None = None) -> None:
    g = p.add_argument_group("common options")
    g.add_argument("--prec-start", type=int, default=DEFAULT_START_BITS,
                   help="starting precision in bits for adaptive refinement (default %(default)s)")
    g.add_argument("--prec-max", type=int, default=None,
                   help=f"precision cap in bits; default from ${PREC_ENV} or {DEFAULT_MAX_BITS}")
    g.add_argument("--tol", type=float, default=1e-12,
                   help="target relative error of certified values (default %(default)s)")
    g.add_argument("--seed", type=int, default=0, help="random seed for sampling scans (default 0)")
    g.add_argument("--out", default=None, help="output file (default stdout); a .manifest.json sidecar is written next to it")
    if fmt is not None:
        g.add_argument("--format", choices=["csv", "json"], default=fmt, help="output format (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pisotsigma", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pisotsigma {__version__}")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def action(group, name, help_, fmt=None):
        sp = group.add_parser(name, help=help_, description=help_)
        _common(sp, fmt)
        return sp

    # pisot
    g = groups.add_parser("pisot", help="Pisot certification").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = action(g, "check", "certify a polynomial's dominant root as a Pisot number")
    a.add_argument("--poly", required=True, help="integer polynomial, e.g. x^3-x-1")
    a.add_argument("--spectrum", action="store_true", help="include every root disk")
    a = action(g, "family", "certify X^k - M X^(k-1) + N over a grid and measure sigma windows", "csv")
    a.add_argument("--k", default="2..6", help="degrees, e.g. 2..6")
    a.add_argument("--M", default="3..12", help="M values, e.g. 3..12")
    a.add_argument("--n-max", type=int, default=200, help="trace length for window estimates; 0 skips them")

    # sigma
    g = groups.add_parser("sigma", help="sigma_n traces and bounds").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = action(g, "trace", "certified sigma_n for n = n-min..n-max", "csv")
    _pair_args(a)
    a.add_argument("--n-min", type=int, default=1)
    a.add_argument("--route", choices=["auto", "direct", "trace"], default="auto")
    a.add_argument("--tail-fraction", type=float, default=0.5, help="window used for the JSON summary")
    a = action(g, "bounds", "explicit bounds with measured window verdicts (JSON)")
    _pair_args(a, n_max=400)
    a.add_argument("--tail-fraction", type=float, default=0.5)
    a = action(g, "density", "family members with N = floor(M^(1-eps)) against the predicted liminf", "csv")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--M", default="3..30", help="M values, e.g. 3..30")
    a.add_argument("--eps-grid", default="0.1,0.3,0.5,0.7,0.9")
    a.add_argument("--n-max", type=int, default=120)
    a = action(g, "power-id", "check sigma_m(alpha, zeta^k) = sigma_{km}(alpha, zeta) (JSON)")
    _pair_args(a)
    a.add_argument("--k", type=int, required=True)

    # construct
    g = groups.add_parser("construct", help="constructions with large sigma_n").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = action(g, "alpha", "greedy series alpha for a given zeta (JSON state)")
    a.add_argument("--zeta", default=None, help="symbolic real > 1 (taken from the state when resuming)")
    a.add_argument("--exponents", choices=["factorial", "powers", "custom"], default="factorial")
    a.add_argument("--custom", default=None, help="comma separated exponents for --exponents custom")
    a.add_argument("--steps", type=int, default=5, help="total number of steps, counting resumed ones")
    a.add_argument("--resume", default=None, help="JSON state to extend")
    a = action(g, "zeta", "nested-interval zeta for a given rational alpha (JSON state)")
    a.add_argument("--alpha", default="rat:1")
    a.add_argument("--interval", default="2,3", help="seed interval 'a,b'")
    a.add_argument("--steps", type=int, default=5, help="total number of steps, counting resumed ones")
    a.add_argument("--branches", default=None, help="comma separated branch choices (1 or 2), one per step")
    a.add_argument("--resume", default=None, help="JSON state to extend")

    # fd
    g = groups.add_parser("fd", help="gaps between large-sigma indices").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = action(g, "scan", "indices with sigma_n >= 1 + eps and their gaps", "csv")
    _pair_args(a)
    a.add_argument("--eps", type=float, required=True)

    # dioph
    g = groups.add_parser("dioph", help="continued fractions and exponent estimates").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = action(g, "cf", "certified continued fraction and exponent estimate (JSON)")
    a.add_argument("--value", required=True, help="symbolic real, e.g. radical:2/1:2")
    a.add_argument("--depth", type=int, default=30)
    a = action(g, "angle", "evidence report on the argument of the largest conjugate (JSON)")
    a.add_argument("--poly", required=True)
    a.add_argument("--depth", type=int, default=40)

    # rarity
    g = groups.add_parser("rarity", help="sampling scans").add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = action(g, "scan", "fraction of random rational pairs with late large-sigma hits (JSON)")
    a.add_argument("--alpha-range", default="1,2")
    a.add_argument("--zeta-range", default="1.5,3")
    a.add_argument("--samples", type=int, default=1000)
    a.add_argument("--eps", type=float, default=0.5)
    a.add_argument("--n-min-values", default="5,10,20,40")
    a.add_argument("--n-max", type=int, default=60)

    # plot
    a = groups.add_parser("plot", help="render a trace or density CSV to SVG",
                          description="render a trace or density CSV to SVG")
    a.add_argument("--input", required=True, help="CSV from 'sigma trace' or 'sigma density'")
    a.add_argument("--kind", choices=["trace", "density"], required=True)
    a.add_argument("--out", required=True, help="SVG path")
    a.add_argument("--bounds", default=None, help="JSON from 'sigma bounds' for bound lines")
    return p


def _pair_args(a, n_max: int = 100) -> None:
    a.add_argument("--zeta", required=True, help="symbolic real > 1, e.g. polyroot:x^2-x-1:max")
    a.add_argument("--alpha", default="rat:1", help="symbolic real > 0 (default rat:1)")
    a.add_argument("--n-max", type=int, default=n_max)


# ---------------------------------------------------------------------------
# handlers: each returns (text, format)


def _sym(text):
    return parse_symbolic(text)


def _pisot_check(ns, cap):
    from .pisot import certify_pisot, degree_bounds, second_conjugate_angle, unit_relations

    P = IntPoly.parse(ns.poly)
    cert = certify_pisot(P, cap)
    if not cert:
        raise InputError(f"{P} is not a Pisot polynomial: {cert.reason}")
    out = cert.to_json()
    if not ns.spectrum:
        out.pop("spectrum", None)
    out["irreducible_by_criterion"] = irreducible_by_pisot_criterion(cert.spectrum, P)
    if cert.degree >= 2:
        out["degree_bounds"] = [b.to_json() for b in degree_bounds(cert)]
        out["unit_relations"] = {k: (v.format(20) if hasattr(v, "format") else v)
                                 for k, v in unit_relations(cert).items()}
        out["second_conjugate"] = second_conjugate_angle(cert)
    return json_text(out)


def _pisot_family(ns, cap):
    from .pisot import certify_pisot, family_Q
    from .sigma import conjugate_target, family_row

    rows = []
    for k in _int_range(ns.k):
        for M in _int_range(ns.M):
            if k < 2 or M < 3:
                raise InputError("family needs k >= 2 and M >= 3")
            for N in range(1, M - 1):
                if ns.n_max > 0:
                    rows.append(family_row(k, M, N, ns.n_max, target_rel_error=ns.tol).csv_fields())
                    continue
                cert = certify_pisot(family_Q(k, M, N), cap)
                if not cert:
                    raise InputError(f"Q({k},{M},{N}) failed certification: {cert.reason}")
                rows.append({"k": k, "M": M, "N": N, "eps": "", "zeta": cert.pisot_root.format(20),
                             "f": cert.f.format(20), "unit": int(cert.is_unit),
                             "bound_remark": conjugate_target(cert).format(15),
                             "sigma_window_lo": "", "sigma_window_hi": "", "n0": ""})
    if ns.format == "json":
        return json_text(rows)
    return csv_text(FAMILY_FIELDS, rows)


def _sigma_trace(ns, cap):
    from .pisot import bound_ladder
    from .sigma import trace, window_estimates

    tr = trace(_sym(ns.alpha), _sym(ns.zeta), ns.n_max, ns.tol, cap, ns.n_min, ns.route)
    if ns.format == "csv":
        return csv_text(TRACE_FIELDS, trace_rows(tr))
    out = {"alpha": ns.alpha, "zeta": ns.zeta, "n0": tr.n0, "exact_hits": tr.exact_hits}
    try:
        w = window_estimates(tr, ns.tail_fraction)
    except InputError as e:
        out["window"] = None
        out["window_note"] = str(e)
    else:
        out["window"] = w.to_json()
        rep = bound_ladder(tr.alpha, tr.zeta)
        rep.measured.update(sigma_inf_upper=w.inf, sigma_sup_upper=w.sup)
        if w.restricted_sup is not None:
            rep.measured["restricted_sup_upper"] = w.restricted_sup
        out["verdicts"] = rep.verdicts()
    return json_text(out)


def _sigma_bounds(ns, cap):
    from .sigma import bound_report

    rep = bound_report(_sym(ns.alpha), _sym(ns.zeta), ns.n_max, ns.tail_fraction, ns.tol, cap)
    return json_text(rep.to_json())


def _sigma_density(ns, cap):
    from .sigma import density_scan

    rows = density_scan(ns.k, _int_range(ns.M), _floats(ns.eps_grid), ns.n_max)
    if ns.format == "json":
        return json_text([r.csv_fields() for r in rows])
    return csv_text(FAMILY_FIELDS, (r.csv_fields() for r in rows))


def _sigma_power_id(ns, cap):
    from .sigma import power_identity_check

    return json_text(power_identity_check(_sym(ns.alpha), _sym(ns.zeta), ns.k, ns.n_max, ns.tol).to_json())


def _construct_alpha(ns, cap):
    from .constructions import GreedySeries, greedy_alpha

    resume = GreedySeries.from_json(json.loads(Path(ns.resume).read_text())) if ns.resume else None
    custom = [int(t) for t in ns.custom.split(",")] if ns.custom else None
    if resume is None and ns.zeta is None:
        raise InputError("--zeta is required unless --resume is given")
    zeta = resume.zeta if resume else _sym(ns.zeta)
    s = greedy_alpha(zeta, ns.exponents, ns.steps, custom, cap, resume)
    return json_text(s.to_json())


def _construct_zeta(ns, cap):
    from .constructions import NestedIntervalState, nested_zeta

    resume = NestedIntervalState.from_json(json.loads(Path(ns.resume).read_text())) if ns.resume else None
    branches = [int(t) for t in ns.branches.split(",")] if ns.branches else None
    st = nested_zeta(_sym(ns.alpha), _pair(ns.interval), ns.steps, branches, resume)
    return json_text(st.to_json())


def _fd_scan(ns, cap):
    from .constructions import fd_scan

    res = fd_scan(_sym(ns.alpha), _sym(ns.zeta), ns.eps, ns.n_max, ns.tol, cap)
    if ns.format == "json":
        return json_text(res.to_json())
    return csv_text(FD_FIELDS, res.rows())


def _dioph_cf(ns, cap):
    from .dioph import cf_expand, irrationality_exponent_estimate

    x = _sym(ns.value)
    if isinstance(x, Rational):
        cf = cf_expand(x.value, ns.depth)
    else:
        cf = cf_expand(lambda bits: eval_symbolic(x, bits), ns.depth, ns.prec_start, cap)
    out = cf.to_json()
    out["value"] = ns.value
    out["determinants_ok"] = cf.determinants_ok()
    if cf.certified_depth >= 5 and not cf.terminated:
        est = irrationality_exponent_estimate(cf)
        out["lambda1_estimate"] = est.value.format(8)
        out["lambda1_window"] = est.to_json()
    else:
        out["lambda1_estimate"] = None
    return json_text(out)


def _dioph_angle(ns, cap):
    from .dioph import liouville_angle_report
    from .pisot import require_pisot

    return json_text(liouville_angle_report(require_pisot(IntPoly.parse(ns.poly), cap), ns.depth))


def _rarity_scan(ns, cap):
    from .constructions import rarity_scan

    rep = rarity_scan(_pair(ns.alpha_range), _pair(ns.zeta_range), ns.samples, ns.eps,
                      tuple(_int_range(ns.n_min_values)), ns.n_max, ns.seed)
    return json_text(rep.to_json())


HANDLERS = {
    ("pisot", "check"): _pisot_check,
    ("pisot", "family"): _pisot_family,
    ("sigma", "trace"): _sigma_trace,
    ("sigma", "bounds"): _sigma_bounds,
    ("sigma", "density"): _sigma_density,
    ("sigma", "power-id"): _sigma_power_id,
    ("construct", "alpha"): _construct_alpha,
    ("construct", "zeta"): _construct_zeta,
    ("fd", "scan"): _fd_scan,
    ("dioph", "cf"): _dioph_cf,
    ("dioph", "angle"): _dioph_angle,
    ("rarity", "scan"): _rarity_scan,
}


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv`` and execute; returns the exit status."""
    try:
        ns = build_parser().parse_args(argv)
        if ns.group == "plot":
            from .plotting import plot

            plot(ns.input, ns.kind, ns.out, ns.bounds)
            return 0
        cap = ns.prec_max if ns.prec_max is not None else _default_prec_max()
        if ns.prec_start < 16 or cap < ns.prec_start:
            raise InputError("need 16 <= --prec-start <= --prec-max")
        t0 = time.perf_counter()
        text = HANDLERS[(ns.group, ns.action)](ns, cap)
        args = {k: v for k, v in sorted(vars(ns).items()) if k not in ("group", "action", "out")}
        manifest = RunManifest(
            command=f"{ns.group} {ns.action}",
            arguments=args,
            precision={"start_bits": ns.prec_start, "max_bits": cap, "target_rel_error": ns.tol},
            seed=ns.seed,
            wall_time=time.perf_counter() - t0,
        )
        emit(text, ns.out, manifest)
        return 0
    except PrecisionCapExceeded as e:
        print(f"error: precision cap exceeded: {e}", file=sys.stderr)
        return 2
    except (InputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
