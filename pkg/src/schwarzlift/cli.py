"""Command-line interface: ``schwarzlift <command> [flags]``.

Exit codes: 0 success, 1 criterion or verification failure, 2 usage or
parse error, 3 numerical or output failure.
"""
import argparse
import json
import sys

import numpy as np

from . import criteria as cr
from . import expr as ex
from .errors import (DomainError, ExprSyntaxError, IoError, NumericalError,
                     PreconditionViolation)
from .grid import GridSpec
from .quadrature import QuadratureSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_complex(text):
    try:
        re_, im = text.split(",")
        return complex(float(re_), float(im))
    except ValueError:
        raise UsageError(f"expected RE,IM but got {text!r}") from None


def _expr(text, flag):
    try:
        return ex.parse(text)
    except ExprSyntaxError as exc:
        pointer = " " * exc.offset + "^"
        raise UsageError(f"{flag}: {exc.msg} at offset {exc.offset}\n  {text}\n  {pointer}") from None


def _grid(args):
    return GridSpec.parse(args.grid, args.rmax)


def _emit(args, payload, plain=None):
    text = json.dumps(payload, indent=2, default=_json_default)
    if not args.json and plain is not None:
        text = plain
    if getattr(args, "report", None):
        from .lift import atomic_write
        atomic_write(args.report, (text + "\n").encode())
    else:
        print(text)


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not serializable: {type(x).__name__}")


def _mapping(args):
    from .schwarzian import HarmonicMapping
    return HarmonicMapping.direct(_expr(args.h, "--h"), _expr(args.q, "--q"))


# -- commands ----------------------------------------------------------------

def cmd_phi(args):
    from .schwarzian import phi_quantity
    m = _mapping(args)
    if args.z is not None:
        z = parse_complex(args.z)
        if abs(z) >= 1:
            raise DomainError("--z must lie in the open unit disk")
        rep = phi_quantity(m, z)
        payload = {"z": z, "phi": rep.phi, "Sf": rep.Sf, "curvature_term": rep.curvature_term,
                   "weighted_phi": rep.weighted_phi, "conformal_factor": rep.conformal_factor,
                   "jacobian": rep.jacobian}
        _emit(args, payload, f"phi {rep.phi:.12g}")
        return EXIT_OK
    grid = _grid(args)
    t_eff, witness = cr.effective_t(m, grid)
    payload = {"effective_t": t_eff, "witness": witness, "grid": grid.to_json()}
    code = EXIT_OK
    if args.t is not None:
        payload["t"] = args.t
        payload["pass"] = t_eff <= args.t
        code = EXIT_OK if payload["pass"] else EXIT_FAIL
    plain = f"effective_t {t_eff:.12g} at {witness.real:.6g},{witness.imag:.6g}"
    if args.t is not None:
        plain += f" ({'pass' if payload['pass'] else 'fail'} against t = {args.t})"
    _emit(args, payload, plain)
    return code


def cmd_criterion(args):
    m = _mapping(args)
    try:
        p = cr.NehariFunction.from_name(args.p)
    except ExprSyntaxError as exc:
        raise UsageError(f"--p: {exc.msg} at offset {exc.offset}") from None
    rep = cr.check_lift_criterion(m, p, _grid(args))
    _emit(args, rep.to_json(), json.dumps(rep.to_json(), indent=2, default=_json_default))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_thresholds(args):
    s, t = args.s, args.t
    out = {"rho": cr.rho(s, t, args.R) if args.R is not None else None,
           "r0": cr.r0(s, t), "eta": cr.eta(s, t), "c": cr.c_fn(s, t),
           "c_star": cr.c_star(s, t), "psi_qc": cr.psi_qc(t), "t_hat": cr.t_hat(s)}
    plain = "\n".join(f"{k:7s} {v!s}" for k, v in out.items())
    _emit(args, out, plain)
    return EXIT_OK


def cmd_shear(args):
    from .shear import ShearSpec, shear
    lam = parse_complex(args.lam) if args.lam else 1.0
    spec = ShearSpec(_expr(args.phi, "--phi"), _expr(args.omega, "--omega"), lam=lam,
                     order=args.order)
    res = shear(spec)
    _emit(args, res.to_json(), json.dumps(res.to_json(), default=_json_default))
    return EXIT_OK


def cmd_lift(args):
    from .lift import build_mesh, write_mesh
    m = _mapping(args)
    quad = QuadratureSpec(args.quad_points, args.quad_segment)
    mesh = build_mesh(m, _grid(args), quad)
    write_mesh(mesh, args.out, args.format)
    _emit(args, {"out": args.out, "format": args.format, "vertices": mesh.n_vertices,
                 "faces": len(mesh.faces)},
          f"wrote {mesh.n_vertices} vertices and {len(mesh.faces)} faces to {args.out}")
    return EXIT_OK


def cmd_chordarc(args):
    from .chordarc import PolygonDomain, chordarc_report
    try:
        with open(args.polygon) as fh:
            d = PolygonDomain.from_json(fh.read())
    except (OSError, ValueError, TypeError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(f"cannot read polygon {args.polygon}: {exc}") from None
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    lam = parse_complex(args.lam) if args.lam else None
    rep = chordarc_report(d, args.samples, args.seed, lam)
    _emit(args, rep, json.dumps(rep, default=_json_default))
    return EXIT_OK


def cmd_paper_verify(args):
    from .verify import run_all
    results = run_all()
    payload = {"checks": [r.to_json() for r in results],
               "passed": sum(r.passed for r in results), "total": len(results)}
    plain = "\n".join(r.line() for r in results)
    plain += f"\n{payload['passed']}/{payload['total']} checks passed"
    _emit(args, payload, plain)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="schwarzlift",
                                     description="Schwarzian criteria for lifts of harmonic mappings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of plain text")
    common.add_argument("--report", metavar="PATH", help="write the report to PATH instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def grid_flags(p, default="200x256"):
        p.add_argument("--grid", default=default, help="polar grid NRxNT")
        p.add_argument("--rmax", type=float, default=0.999)

    p = sub.add_parser("phi", parents=[common], help="Phi_f at a point or effective t on a grid")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--z", metavar="RE,IM")
    p.add_argument("--t", type=float)
    grid_flags(p)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("criterion", parents=[common], help="sampled check of Phi_f <= 2p")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--p", default="quad", help="quad, hyper, const or an expression in z")
    grid_flags(p)
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("thresholds", parents=[common], help="threshold functions at (s, t)")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--R", type=float)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("shear", parents=[common], help="shear of phi with dilatation omega")
    p.add_argument("--phi", required=True)
    p.add_argument("--omega", required=True)
    p.add_argument("--lambda", dest="lam", metavar="RE,IM")
    p.add_argument("--order", type=int, default=ex.SHEAR_ORDER)
    p.set_defaults(func=cmd_shear)

    p = sub.add_parser("lift", parents=[common], help="export the lifted surface as a mesh")
    p.add_argument("--h", required=True)
    p.add_argument("--q", required=True)
    grid_flags(p, "50x64")
    p.add_argument("--format", choices=("obj", "ply"), default="obj")
    p.add_argument("--out", required=True)
    p.add_argument("--quad-points", type=int, default=16)
    p.add_argument("--quad-segment", type=float, default=0.05)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("chordarc", parents=[common], help="chord-arc constant of a polygon")
    p.add_argument("--polygon", required=True, help="JSON list of [x, y] vertices")
    p.add_argument("--lambda", dest="lam", metavar="RE,IM")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_chordarc)

    p = sub.add_parser("paper-verify", parents=[common], help="run the reproduction checks")
    p.set_defaults(func=cmd_paper_verify)
    return parser


def _validate(args):
    if getattr(args, "order", 1) < 1:
        raise UsageError("--order must be positive")
    if getattr(args, "quad_points", 1) < 1 or getattr(args, "quad_segment", 1) <= 0:
        raise UsageError("quadrature flags must be positive")


COMPLEX_FLAGS = ("--z", "--lambda")


def _join_complex_flags(argv):
    # "--z -0.5,0" would otherwise read "-0.5,0" as an option
    out, it = [], iter(argv)
    for tok in it:
        if tok in COMPLEX_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_complex_flags(argv))
    try:
        _validate(args)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExprSyntaxError as exc:
        print(f"error: {exc.msg} at offset {exc.offset}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PreconditionViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, IoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
