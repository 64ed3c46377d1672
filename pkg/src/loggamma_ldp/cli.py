"""Command line interface: ``loggamma-ldp <command> [flags]``.

Every command writes CSV or JSON to stdout (or ``--out``).  Floats use 17
significant digits so output round-trips and is byte-identical across runs.
Exit codes: 0 success, 1 failed criterion or numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import acceptance, fredholm, phase, polymer, rate
from .errors import ContourError, DomainError, LogGammaLDPError, PoleError, UnsupportedOrder

__all__ = ["main", "build_parser"]


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))  # shortest round-trip form


def _csv(out, header, rows):
    out.write(",".join(header) + "\n")
    for r in rows:
        out.write(",".join(_fmt(v) for v in r) + "\n")


def _clean(obj):
    # strict JSON has no NaN; unavailable values become null
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _json(out, obj):
    out.write(json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n")


# --------------------------------------------------------------------------
# argument types


def _num(lo=None, hi=None, lo_open=False, hi_open=False, kind=float):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a valid {kind.__name__}: {text!r}")
        if kind is float and not math.isfinite(v):
            raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
        if lo is not None and (v < lo or (lo_open and v == lo)):
            raise argparse.ArgumentTypeError(f"must be {'>' if lo_open else '>='} {lo}: {text}")
        if hi is not None and (v > hi or (hi_open and v == hi)):
            raise argparse.ArgumentTypeError(f"must be {'<' if hi_open else '<='} {hi}: {text}")
        return v

    return parse


_theta = _num(0.0, rate.THETA_MAX)
_theta_pos = _num(0.0, rate.THETA_MAX, lo_open=True)
_pos = _num(0.0, lo_open=True)
_nonneg = _num(0.0)
_theta_det = _num(0.0, 1.0, lo_open=True, hi_open=True)
_n = _num(1, polymer.N_MAX, kind=int)
_samples = _num(1, polymer.SAMPLES_MAX, kind=int)
_seed = _num(0, polymer.SEED_MAX, kind=int)
_m8 = _num(8, 4096, kind=int)
_threads = _num(1, 1024, kind=int)


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers: {text!r}")
    if not vals or any(not 1 <= v <= 256 for v in vals):
        raise argparse.ArgumentTypeError("values must lie in [1, 256]")
    return vals


def _float_list(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers: {text!r}")
    if not vals or any(not math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("values must be finite")
    return vals


# --------------------------------------------------------------------------
# commands


def _quad(a):
    return rate.QuadratureSpec(a.m_cheb1, a.m_cheb2, a.m_legendre, a.panels)


def cmd_rate_table(a, out):
    if a.s_max < a.s_min:
        raise DomainError("--s-max must be >= --s-min")
    grid = np.linspace(a.s_min, a.s_max, a.points)
    rows = rate.rate_table(grid, a.theta, _quad(a), refine=not a.no_refine)
    body = []
    for r in rows:
        if r.result is None:
            sys.stderr.write(f"s={_fmt(r.s)}: {r.error}\n")
            body.append((r.s, r.theta) + (math.nan,) * 5)
        else:
            x = r.result
            body.append((r.s, r.theta, x.b, x.f, x.F, x.residual_H, x.refine_delta))
    _csv(out, ["s", "theta", "b", "f", "F", "residual_H", "refine_delta"], body)
    return 0 if all(r.result is not None for r in rows) else 1


def cmd_b_solve(a, out):
    q = rate.RateQuery(a.s, a.theta, _quad(a))
    b, res = rate.solve_b(q)
    _json(
        out,
        {"s": a.s, "theta": a.theta, "b": b, "residual_H": abs(res), "s_star": rate.s_star(a.theta)},
    )
    return 0


def cmd_phase_grid(a, out):
    g = phase.sign_grid(a.s, a.re_min, a.re_max, a.im_min, a.im_max, a.nx, a.ny)
    _csv(out, ["re", "im", "sign"], g.rows())
    return 0


def cmd_fredholm_laplace(a, out):
    sig = None
    if a.sigma_radius is not None:
        sig = fredholm.ContourSpec.circle(-a.theta, a.sigma_radius, a.sigma_nodes)
    ell = None
    if a.c is not None:
        ell = fredholm.ContourSpec.vline(a.c, a.v_cut, panels=a.panels)
    r = fredholm.laplace_det(a.u, a.n, a.theta, sigma=sig, ell=ell, refine=not a.no_refine)
    _json(out, r.to_dict())
    return 0


def cmd_fredholm_q(a, out):
    refine = not a.no_refine
    if a.kind == "step":
        grid = None
        if a.y_cut is not None:
            grid = fredholm.ContourSpec.halfline(a.s, a.y_cut)
        r = fredholm.step_det(a.s, a.n, a.theta, grid=grid, refine=refine)
    else:
        r = fredholm.smoothed_det(a.s, a.n, a.theta, refine=refine, method=a.method)
    _json(out, r.to_dict())
    return 0


def cmd_ansatz_gap(a, out):
    rows = fredholm.ansatz_gap(a.s, a.theta, a.n_list, refine=a.refine)
    _csv(
        out,
        ["n", "logQ", "logQtilde", "gap_over_n2"],
        ((r["n"], r["logQ"], r["logQtilde"], r["gap_over_n2"]) for r in rows),
    )
    return 0


def cmd_simulate(a, out):
    cfg = polymer.SimConfig(a.n, a.theta, a.samples, a.seed)
    sm = polymer.mc_summary(cfg, threads=a.threads)
    _csv(
        out,
        ["n", "theta", "samples", "seed", "mean_logZ", "var_logZ", "stderr"],
        [(a.n, a.theta, a.samples, a.seed, sm.mean_logZ, sm.var_logZ, sm.stderr_mean)],
    )
    return 0


def cmd_mc_laplace(a, out):
    r = polymer.mc_laplace(a.n, a.theta, a.u, a.samples, a.seed, threads=a.threads)
    _json(out, {"n": a.n, "theta": a.theta, "u": a.u, "samples": a.samples, "seed": a.seed, **r})
    return 0


def cmd_mp_check(a, out):
    rows = fredholm.mp_check(a.n, a.y, a.theta)
    _csv(out, ["y", "kernel_over_n", "mp_density"], rows)
    return 0


def cmd_verify(a, out):
    ids = a.criteria or sorted(acceptance.CRITERIA)
    checks = acceptance.run_all(ids, echo=lambda line: sys.stderr.write(line + "\n"))
    report = [
        {
            "criterion_id": c.criterion_id,
            "pass": bool(c.passed),
            "measured": c.measured,
            "expected": c.expected,
            "tolerance": c.tolerance,
        }
        for c in checks
    ]
    if a.report:
        with open(a.report, "w", encoding="utf-8") as fh:
            _json(fh, report)
    for c in checks:
        out.write(f"criterion {c.criterion_id}: {'PASS' if c.passed else 'FAIL'}\n")
    return 0 if all(c.passed for c in checks) else 1


# --------------------------------------------------------------------------
# parser

_HELP = {
    "rate-table": (
        "Table of b, f and F over an s grid. b solves "
        "int_0^1 ih'(bu)/sqrt(1-u^2) du = 0 with "
        "ih'(x) = (theta/2)(psi(theta(1+ix/2)) + psi(theta(1-ix/2))) + s; "
        "f = (b^2/pi) int_0^1 sqrt(1-u^2) ih'(bu) du and "
        "F(s) = -int_s^{s*} f(t) dt with s* = -theta psi(theta)."
    ),
    "b-solve": (
        "Endpoint b(s, theta) > 0 of the equilibrium support: H(b) = 0 with "
        "H(b) = int_0^1 ih'(bu)/sqrt(1-u^2) du and "
        "ih'(x) = (theta/2)(psi(theta(1+ix/2)) + psi(theta(1-ix/2))) + s."
    ),
    "phase-grid": (
        "sign Re h(zeta; s, 0) on a grid, with "
        "h = log(1 + i zeta/2) - log(1 - i zeta/2) - i s zeta."
    ),
    "fredholm-laplace": (
        "E exp(-u Z_n) = det(I + K)_{L^2(Sigma)}, "
        "K(v, v') = (1/2pi i) int_l dw pi/sin(pi(v-w)) u^{w-v} "
        "[Gamma(theta - w)/Gamma(theta - v)]^n [Gamma(v)/Gamma(w)]^n / (w - v')."
    ),
    "fredholm-q": (
        "Q_n(s) = det(1 - L)_{L^2(s, inf)} (step) or "
        "Q~_n(s) = det(1 - sigma L)_{L^2(R)} with "
        "sigma(y) = 1/(1 + exp(-2n(y - s)/theta)) (smoothed), "
        "L the rescaled kernel in the variable y = -(theta/2n) log of the Laplace parameter."
    ),
    "ansatz-gap": "|log Q~_n(s) - log Q_n(s)| / n^2 for a list of n.",
    "simulate": (
        "Monte Carlo of log Z_n, Z_n = sum over up-right paths of prod d_ij, "
        "d_ij inverse-Gamma(2 theta); log Z(i,j) = log d_ij + logaddexp(log Z(i-1,j), log Z(i,j-1))."
    ),
    "mc-laplace": "Monte Carlo estimate of E exp(-u Z_n) with its standard error.",
    "mp-check": (
        "Diagonal L_n(y, y)/n of the theta = 0 kernel against the "
        "Marchenko-Pastur density (2/pi) sqrt((1 - y)/y) on (0, 1)."
    ),
    "verify": "Run the ten acceptance criteria; exit 0 iff all pass.",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(2)


def _common(p, threads=False):
    p.add_argument("--out", help="write output to this path instead of stdout")
    if threads:
        p.add_argument(
            "--threads",
            type=_threads,
            default=polymer.default_threads(),
            help="worker threads (output does not depend on this)",
        )


def _quad_flags(p):
    q = rate.QuadratureSpec()
    p.add_argument("--m-cheb1", type=_m8, default=q.m_cheb1, help="Chebyshev-I nodes for H")
    p.add_argument("--m-cheb2", type=_m8, default=q.m_cheb2, help="Chebyshev-II nodes for f")
    p.add_argument("--m-legendre", type=_m8, default=q.m_legendre, help="Legendre nodes per panel")
    p.add_argument("--panels", type=_m8, default=q.panels, help="panels for the F integral")


def build_parser():
    ap = _Parser(prog="loggamma-ldp", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name):
        return sub.add_parser(name, help=_HELP[name], description=_HELP[name])

    p = add("rate-table")
    p.add_argument("--s-min", type=_pos, required=True)
    p.add_argument("--s-max", type=_pos, required=True)
    p.add_argument("--points", type=_num(1, 10**5, kind=int), required=True)
    p.add_argument("--theta", type=_theta, required=True)
    p.add_argument("--no-refine", action="store_true", help="skip the quadrature doubling check")
    _quad_flags(p)
    _common(p)
    p.set_defaults(func=cmd_rate_table)

    p = add("b-solve")
    p.add_argument("--s", type=_pos, required=True)
    p.add_argument("--theta", type=_theta, required=True)
    _quad_flags(p)
    _common(p)
    p.set_defaults(func=cmd_b_solve)

    p = add("phase-grid")
    p.add_argument("--s", type=_pos, required=True)
    p.add_argument("--re-min", type=_num(), default=-6.0)
    p.add_argument("--re-max", type=_num(), default=6.0)
    p.add_argument("--im-min", type=_num(), default=-6.0)
    p.add_argument("--im-max", type=_num(), default=6.0)
    p.add_argument("--nx", type=_num(2, 10**4, kind=int), default=121)
    p.add_argument("--ny", type=_num(2, 10**4, kind=int), default=121)
    _common(p)
    p.set_defaults(func=cmd_phase_grid)

    p = add("fredholm-laplace")
    p.add_argument("--u", type=_pos, required=True)
    p.add_argument("--n", type=_num(1, 64, kind=int), required=True)
    p.add_argument("--theta", type=_theta_det, required=True)
    p.add_argument("--sigma-radius", type=_pos, help="radius of the circle around -theta")
    p.add_argument("--sigma-nodes", type=_m8, default=64)
    p.add_argument("--c", type=_num(), help="abscissa of the vertical w line")
    p.add_argument("--v-cut", type=_pos, default=40.0, help="half height of the w line")
    p.add_argument("--panels", type=_num(0, 4096, kind=int), default=0, help="0 = automatic")
    p.add_argument("--no-refine", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_fredholm_laplace)

    p = add("fredholm-q")
    p.add_argument("--s", type=_pos, required=True)
    p.add_argument("--n", type=_num(1, 256, kind=int), required=True)
    p.add_argument("--theta", type=_theta_det, required=True)
    p.add_argument("--kind", choices=("step", "smoothed"), default="step")
    p.add_argument("--method", choices=("sigma", "nystrom"), default="sigma")
    p.add_argument("--y-cut", type=_pos, help="length of the y half-line (step only)")
    p.add_argument("--no-refine", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_fredholm_q)

    p = add("ansatz-gap")
    p.add_argument("--s", type=_pos, required=True)
    p.add_argument("--theta", type=_theta_det, required=True)
    p.add_argument("--n-list", type=_int_list, default=[4, 8, 16])
    p.add_argument("--refine", action="store_true", help="also report the node-doubled values")
    _common(p)
    p.set_defaults(func=cmd_ansatz_gap)

    p = add("simulate")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--theta", type=_theta_pos, required=True)
    p.add_argument("--samples", type=_samples, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    _common(p, threads=True)
    p.set_defaults(func=cmd_simulate)

    p = add("mc-laplace")
    p.add_argument("--n", type=_n, required=True)
    p.add_argument("--theta", type=_theta_pos, required=True)
    p.add_argument("--u", type=_nonneg, required=True)
    p.add_argument("--samples", type=_samples, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    _common(p, threads=True)
    p.set_defaults(func=cmd_mc_laplace)

    p = add("mp-check")
    p.add_argument("--n", type=_num(1, 512, kind=int), default=40)
    p.add_argument("--y", type=_float_list, default=[0.25, 0.5, 0.75, 1.5])
    p.add_argument("--theta", type=_num(0.0, 1.0, hi_open=True), default=0.0)
    _common(p)
    p.set_defaults(func=cmd_mp_check)

    p = add("verify")
    p.add_argument("--report", help="write a JSON array of criterion results here")
    p.add_argument(
        "--criteria", type=_int_list, help="comma separated subset of criterion ids (default all)"
    )
    _common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "criteria", None) and any(k not in acceptance.CRITERIA for k in args.criteria):
        sys.stderr.write("loggamma-ldp: error: criterion ids are 1..10\n")
        return 2
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (DomainError, ContourError, PoleError, UnsupportedOrder) as exc:
        sys.stderr.write(f"loggamma-ldp: error: {exc}\n")
        return 2
    except LogGammaLDPError as exc:
        sys.stderr.write(f"loggamma-ldp: {type(exc).__name__}: {exc}\n")
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
