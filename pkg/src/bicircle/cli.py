"""Command-line front end: ``bicircle <command> [options]``.

Exit codes: 0 pass, 1 verification failure, 2 invalid input.
"""
import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .coeffs import CoeffSet, extract_coefficients, verify_all
from .errors import (BaseNotBS, BicircleError, ConstraintViolation, DivisionResidual, InvalidInput,
                     InvariantViolation)
from .extension import base_for, extend_strip, reconstruct_outer_parameters, roundtrip_verify
from .moments import DEFAULT_GRID, check_stability, compute_moments, inner_product
from .ortho import OrthoSystem, orthonormalize
from .params import ZERO_TOL, crosscheck_parameters, detect_bernstein_szego, extract_parameters
from .reports import DEFAULT_TOL

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
VERIFICATION_ERRORS = (InvariantViolation, ConstraintViolation, DivisionResidual, BaseNotBS)


@dataclass(frozen=True)
class RunConfig:
    command: str
    density: str = None
    moments: str = None
    rect: tuple = None
    grid: int = DEFAULT_GRID
    tol: float = DEFAULT_TOL
    output: str = None

    def __post_init__(self):
        if self.rect is not None and min(self.rect) < 0:
            raise InvalidInput("bounds must be non-negative")
        if self.grid <= 0 or self.grid & (self.grid - 1):
            raise InvalidInput(f"--grid must be a positive power of two, got {self.grid}")
        if not 0 < self.tol < 1:
            raise InvalidInput(f"--tol must lie in (0, 1), got {self.tol}")


def threads_from_env(env=os.environ):
    """Worker cap from ``BICIRCLE_THREADS`` (0 or unset means automatic)."""
    raw = env.get("BICIRCLE_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise InvalidInput(f"BICIRCLE_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise InvalidInput("BICIRCLE_THREADS must be non-negative")
    return n


def _emit(cfg, obj):
    text = io.dumps(obj)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(cfg, msg):
    # human-readable lines go to stderr when the JSON goes to stdout
    print(msg, file=sys.stderr if cfg.output is None else sys.stdout)


def _table(cfg, kmax, jmax):
    """Moment table covering ``kmax, jmax`` from ``--moments`` or ``--density``."""
    if cfg.moments:
        t = io.moments_from_json(io.read_json(cfg.moments))
        return t.restrict(kmax, jmax) if (kmax, jmax) != (t.kmax, t.jmax) else t
    if cfg.density:
        p = io.polynomial_from_json(io.read_json(cfg.density))
        return compute_moments(p, kmax, jmax, grid_size=cfg.grid)
    raise InvalidInput("one of --density or --moments is required")


def _density(cfg):
    if not cfg.density:
        raise InvalidInput("--density is required")
    return io.polynomial_from_json(io.read_json(cfg.density))


def _matrix(M):
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.atleast_2d(M)] if M.size else []


def _coeffs_json(c):
    out = {"n": c.n, "m": c.m}
    out.update({k: _matrix(v) for k, v in c.matrices().items()})
    if c.tilde is not None:
        out["tilde"] = {k: _matrix(v) for k, v in c.tilde.matrices().items()}
    return out


# --------------------------------------------------------------------------
# commands


def cmd_moments(cfg, args):
    if cfg.moments:
        t = io.moments_from_json(io.read_json(cfg.moments))
        if args.kmax is not None or args.jmax is not None:
            t = t.restrict(args.kmax if args.kmax is not None else t.kmax,
                           args.jmax if args.jmax is not None else t.jmax)
    else:
        t = _table(cfg, args.kmax if args.kmax is not None else 4, args.jmax if args.jmax is not None else 4)
    _emit(cfg, io.moments_to_json(t))
    _say(cfg, f"c[0,0] scale {t.scale:.17g}  symmetry residual {t.symmetry_residual():.3e}")
    return EXIT_PASS


def cmd_stability(cfg, args):
    p = _density(cfg)
    cert = check_stability(p, grid_size=cfg.grid)
    witness = None if cert.witness is None else [io._pair(x) for x in cert.witness]
    _emit(cfg, {"pass": bool(cert.passed), "margin": float(cert.margin), "witness": witness})
    _say(cfg, f"stability: {'PASS' if cert else 'FAIL'}  margin {cert.margin:.3e}")
    return EXIT_PASS if cert else EXIT_FAIL


def cmd_ortho(cfg, args):
    n, m = args.level
    t = _table(cfg, n, m)
    orders = ("lex", "revlex") if args.ordering == "both" else (args.ordering,)
    levels = [io.level_to_json(orthonormalize(t, n, m, o)) for o in orders]
    _emit(cfg, levels[0] if len(levels) == 1 else levels)
    return EXIT_PASS


def cmd_coeffs(cfg, args):
    n, m = args.level
    t = _table(cfg, n, m)
    sys_ = OrthoSystem(t, n, m)
    _emit(cfg, _coeffs_json(extract_coefficients(sys_, n, m)))
    return EXIT_PASS


def cmd_verify(cfg, args):
    N, M = cfg.rect
    t = _table(cfg, N, M)
    sys_ = OrthoSystem(t, N, M)
    report = verify_all(sys_, CoeffSet.build(sys_), tol=cfg.tol)
    _emit(cfg, report.to_json())
    _say(cfg, report.summary())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_params(cfg, args):
    N, M = cfg.rect
    t = _table(cfg, N, M)
    sys_ = OrthoSystem(t, N, M)
    u = extract_parameters(sys_, CoeffSet.build(sys_))
    _emit(cfg, io.params_to_json(u))
    report = crosscheck_parameters(sys_, u, tol=cfg.tol)
    _say(cfg, report.summary())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_detect(cfg, args):
    n, m = args.base
    N, M = n + args.pad, m + args.pad
    t = _table(cfg, N, M)
    sys_ = OrthoSystem(t, N, M)
    cs = CoeffSet.build(sys_)
    rep = detect_bernstein_szego(cs, extract_parameters(sys_, cs, check=False), (n, m), tol=args.zero_tol)
    _emit(cfg, rep.to_json())
    _say(cfg, rep.summary())
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_extend(cfg, args):
    """Extend from the base rectangle only; audit against the table when it covers the target."""
    n, m = args.base
    N, M = args.to
    base_table = _table(cfg, n, m)
    direct = OrthoSystem(base_table, n, m)
    cs = CoeffSet.build(direct)
    out = {"base": [n, m], "target": [N, M], "levels": [], "parameters": None}
    u = None
    audit = None
    try:
        audit = _table(cfg, N, M)
    except BicircleError:
        pass
    worst = 0.0
    for direction, reach in (("n", N), ("m", M)):
        if reach <= (n if direction == "n" else m):
            continue
        state = extend_strip(base_for(direct, cs, (n, m), direction), reach, direction)
        for (i, j) in state.levels():
            for level in (state.system.lex[(i, j)], state.system.revlex[(i, j)]):
                out["levels"].append(io.level_to_json(level))
                if audit is not None:
                    P = level.poly
                    worst = max(worst, float(np.abs(inner_product(P, P, audit) - np.eye(P.shape[0])).max()))
        r = reconstruct_outer_parameters(state)
        u = r if u is None else u.merge(r)
    if u is not None:
        out["parameters"] = io.params_to_json(u)["entries"]
    out["audit_residual"] = worst if audit is not None else None
    _emit(cfg, out)
    if audit is not None:
        _say(cfg, f"orthonormality audit residual {worst:.3e}")
        return EXIT_PASS if worst <= max(cfg.tol, 1e-6) else EXIT_FAIL
    return EXIT_PASS


def cmd_roundtrip(cfg, args):
    p = _density(cfg)
    rep = roundtrip_verify(p, tuple(args.base), tuple(args.to), tol=cfg.tol, grid_size=cfg.grid)
    _emit(cfg, rep.to_json())
    _say(cfg, rep.summary())
    return EXIT_PASS if rep.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="verification tolerance (default 1e-8; roundtrip 1e-6)")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID, help="quadrature nodes per circle, power of two (default 256)")
    common.add_argument("-o", "--output", help="output file (default stdout)")
    src = argparse.ArgumentParser(add_help=False)
    g = src.add_mutually_exclusive_group()
    g.add_argument("--density", help="polynomial file p; the measure is 1/|p|^2")
    g.add_argument("--moments", help="moment file")

    parser = argparse.ArgumentParser(prog="bicircle", description="Orthogonal polynomials on the bi-circle.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common, src], help="compute or normalize a moment table")
    p.add_argument("--kmax", type=int)
    p.add_argument("--jmax", type=int)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("stability", parents=[common, src], help="certify that the reverse polynomial is stable")
    p.set_defaults(func=cmd_stability)

    for name, func, text in (("ortho", cmd_ortho, "orthonormal level"),
                             ("coeffs", cmd_coeffs, "recurrence coefficients at one level")):
        p = sub.add_parser(name, parents=[common, src], help=text)
        p.add_argument("--level", type=int, nargs=2, metavar=("N", "M"), required=True)
        if name == "ortho":
            p.add_argument("--ordering", choices=("lex", "revlex", "both"), default="lex")
        p.set_defaults(func=func)

    for name, func, text in (("verify", cmd_verify, "run every identity check on a rectangle"),
                             ("params", cmd_params, "extract and cross-check the parameter field")):
        p = sub.add_parser(name, parents=[common, src], help=text)
        p.add_argument("--rect", type=int, nargs=2, metavar=("N", "M"), required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("detect", parents=[common, src], help="test the Bernstein-Szego zero pattern at a base degree")
    p.add_argument("--base", type=int, nargs=2, metavar=("N", "M"), required=True)
    p.add_argument("--pad", type=int, default=2, help="levels checked beyond the base (default 2)")
    p.add_argument("--zero-tol", type=float, default=ZERO_TOL, help="zero threshold (default 1e-8)")
    p.set_defaults(func=cmd_detect)

    for name, func, text in (("extend", cmd_extend, "extend base data outside the base rectangle"),
                             ("roundtrip", cmd_roundtrip, "extend and compare with direct computation")):
        p = sub.add_parser(name, parents=[common, src], help=text)
        p.add_argument("--base", type=int, nargs=2, metavar=("N", "M"), required=True)
        p.add_argument("--to", type=int, nargs=2, metavar=("N", "M"), required=True)
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_PASS
    default_tol = 1e-6 if args.command == "roundtrip" else DEFAULT_TOL
    try:
        threads_from_env()
        rect = getattr(args, "rect", None)
        for key in ("base", "to", "level"):
            v = getattr(args, key, None)
            if v is not None and min(v) < 0:
                raise InvalidInput(f"--{key} must be non-negative")
        cfg = RunConfig(args.command, getattr(args, "density", None), getattr(args, "moments", None),
                        tuple(rect) if rect else None, args.grid,
                        args.tol if args.tol is not None else default_tol, args.output)
        return args.func(cfg, args)
    except VERIFICATION_ERRORS as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (BicircleError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
