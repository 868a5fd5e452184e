"""``phasekit`` command-line front end.

Every subcommand accepts ``--config FILE.json``; explicit flags override
values from the file.  The default ``hbar`` comes from ``PHASEKIT_HBAR`` when
set, else 1.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io, matrices
from .basis import BasisParams
from .diffop import (
    DiffOpExpr,
    build_p_frak,
    build_p_hat,
    build_x_frak,
    build_x_hat,
    build_z_hat_1d,
    commutator,
    render,
)
from .multidim import build_dispersion_generators, build_p_hat_mu, build_x_hat_nu, check_multidim_commutators
from .transform import (
    GaussianPacket,
    HermitePacket,
    PhaseSpaceGrid,
    forward_coeffs,
    forward_field,
    reconstruct_integral,
    reconstruct_sum,
)
from .verify import INJECTIONS, run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Invalid input; reported on stderr with exit code 2."""


def _default_hbar():
    raw = os.environ.get("PHASEKIT_HBAR")
    if raw is None:
        return 1.0
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"PHASEKIT_HBAR={raw!r} is not a number")


def _existing(path):
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {p}")
    return p


def _merge(args, defaults):
    """Config file values, then flags that were given explicitly."""
    cfg = dict(defaults)
    if args.config is not None:
        try:
            cfg.update(json.loads(_existing(args.config).read_text()))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.config}: invalid JSON ({exc})")
    for key, value in vars(args).items():
        if key in ("config", "command", "func") or value is None:
            continue
        cfg[key] = value
    return cfg


def _params(cfg):
    try:
        return BasisParams(
            float(cfg["X"]), float(cfg["P"]), float(cfg["a"]), float(cfg["hbar"]), cfg["phase_origin"]
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _basis_defaults():
    return {"X": 0.0, "P": 0.0, "a": 1.0, "hbar": _default_hbar(), "phase_origin": "x"}


def _add_basis(p):
    p.add_argument("--X", type=float, help="basis centre coordinate")
    p.add_argument("--P", type=float, help="basis centre momentum")
    p.add_argument("--a", type=float, help="coordinate width")
    p.add_argument("--hbar", type=float, help="reduced Planck constant (default $PHASEKIT_HBAR or 1)")
    p.add_argument("--phase-origin", dest="phase_origin", choices=("x", "x-X"))


def _mkparent(path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)


# -- transform -------------------------------------------------------------------------


def _source(cfg):
    if cfg.get("input"):
        try:
            return io.read_samples(_existing(cfg["input"]))
        except (ValueError, IndexError) as exc:
            raise UsageError(f"{cfg['input']}: {exc}")
    X0 = float(cfg.get("X0", cfg["X"]))
    P0 = float(cfg.get("P0", cfg["P"]))
    a0 = float(cfg.get("a0", cfg["a"]))
    preset = cfg.get("preset", "gaussian")
    if preset == "gaussian":
        return GaussianPacket(X0, P0, a0, cfg["hbar"], cfg["phase_origin"])
    if preset == "hermite":
        return HermitePacket(int(cfg.get("n0", 1)), X0, P0, a0, cfg["hbar"], cfg["phase_origin"])
    raise UsageError(f"unknown preset {preset!r}")


def cmd_transform(args):
    cfg = _merge(args, {**_basis_defaults(), "n_max": 8, "preset": "gaussian", "field_n": 0,
                        "grid_nodes": 64, "grid_width": 6.0})
    params = _params(cfg)
    psi = _source(cfg)
    if not cfg.get("coeffs_out") and not cfg.get("field_out"):
        raise UsageError("nothing to write: give --coeffs-out and/or --field-out")
    if cfg.get("coeffs_out"):
        cv = forward_coeffs(psi, params, int(cfg["n_max"]))
        _warn_flags(cv.flags)
        _mkparent(cfg["coeffs_out"])
        io.write_coeffs(cfg["coeffs_out"], cv)
    if cfg.get("field_out"):
        grid = PhaseSpaceGrid.around(
            params.X, params.P, params.a, params.hbar, int(cfg["grid_nodes"]), float(cfg["grid_width"])
        )
        field = forward_field(psi, int(cfg["field_n"]), grid, params.a, params.hbar, params.phase_origin)
        _warn_flags(field.flags)
        _mkparent(cfg["field_out"])
        io.write_field(cfg["field_out"], field)
    return EXIT_OK


def _warn_flags(flags):
    for flag in sorted(flags):
        print(f"warning: {flag}", file=sys.stderr)


# -- reconstruct ---------------------------------------------------------------------------


def cmd_reconstruct(args):
    cfg = _merge(args, {"x_num": 201})
    coeffs, field = cfg.get("coeffs"), cfg.get("field")
    if (coeffs is None) == (field is None):
        raise UsageError("give exactly one of --coeffs or --field")
    if coeffs is not None:
        cv = io.read_coeffs(_existing(coeffs))
        p = cv.params
    else:
        _existing(field)
        _existing(str(field) + ".json")
        fld = io.read_field(field)
        p = BasisParams(0.5 * (fld.grid.X_min + fld.grid.X_max), 0.0, fld.a, fld.hbar)
    compare = io.read_samples(_existing(cfg["compare"])) if cfg.get("compare") else None
    if cfg.get("x_min") is not None and cfg.get("x_max") is not None:
        xs = np.linspace(float(cfg["x_min"]), float(cfg["x_max"]), int(cfg["x_num"]))
    elif compare is not None:
        xs = compare.x
    else:
        xs = np.linspace(p.X - 6 * p.a, p.X + 6 * p.a, int(cfg["x_num"]))

    if coeffs is not None:
        values = reconstruct_sum(cv, xs)
    else:
        rec = reconstruct_integral(fld, xs)
        _warn_flags(rec.flags)
        values = rec.values
    if cfg.get("out"):
        _mkparent(cfg["out"])
        io.write_samples(cfg["out"], xs, values)
    if compare is not None:
        residual = float(np.abs(values - compare(xs)).max())
        print(f"max_abs_residual {residual!r}")
    return EXIT_OK


# -- matrices -------------------------------------------------------------------------------

MATRIX_OPS = (
    "x", "p", "x_frak", "p_frak", "z_minus", "z_plus", "sigma_x", "sigma_p",
    "commutator_xp", "zgen_plus", "zgen_minus", "zgen_cross",
)


def _matrix(op, params, N):
    if op == "x":
        return matrices.x_matrix(params, N)
    if op == "p":
        return matrices.p_matrix(params, N)
    if op == "x_frak":
        return matrices.x_frak_matrix(N)
    if op == "p_frak":
        return matrices.p_frak_matrix(N)
    if op == "z_minus":
        return matrices.ladder_minus(N)
    if op == "z_plus":
        return matrices.ladder_plus(N)
    if op in ("sigma_x", "sigma_p"):
        return matrices.dispersion_matrices(params, N)[op == "sigma_p"]
    if op == "commutator_xp":
        return matrices.commutator(matrices.x_matrix(params, N), matrices.p_matrix(params, N))
    zp, zm, zx = matrices.z_generators_1d(N)
    return {"zgen_plus": zp, "zgen_minus": zm, "zgen_cross": zx}[op]


def cmd_matrices(args):
    cfg = _merge(args, {**_basis_defaults(), "op": "x", "N": 8, "tol": 1e-13})
    params = _params(cfg)
    if cfg["op"] not in MATRIX_OPS:
        raise UsageError(f"unknown operator {cfg['op']!r}")
    try:
        M = _matrix(cfg["op"], params, int(cfg["N"]))
    except ValueError as exc:
        raise UsageError(str(exc))
    if cfg.get("out"):
        _mkparent(cfg["out"])
        io.write_matrix(cfg["out"], M, float(cfg["tol"]))
    else:
        sys.stdout.write("n,m,re,im\n")
        for n, m, re, im in matrices.nonzero_entries(M, float(cfg["tol"])):
            sys.stdout.write(f"{n},{m},{re!r},{im!r}\n")
    return EXIT_OK


# -- algebra ---------------------------------------------------------------------------------

ALGEBRA_NAMES = ("x", "p", "x_frak", "p_frak", "z_plus", "z_minus", "z_cross")


def _parse_name(name):
    base, _, idx = name.partition(":")
    if base not in ALGEBRA_NAMES:
        raise UsageError(f"unknown operator {name!r}; choose from {', '.join(ALGEBRA_NAMES)}")
    return base, idx


def _operator_1d(base, params, alpha_beta, convention):
    if base == "x":
        return build_x_hat(params, alpha_beta, convention)
    if base == "p":
        return build_p_hat(params, alpha_beta, convention)
    if base == "x_frak":
        return build_x_frak(params, alpha_beta, convention)
    if base == "p_frak":
        return build_p_frak(params, alpha_beta, convention)
    zp, zm, zx = build_z_hat_1d(params, convention)
    return {"z_plus": zp, "z_minus": zm, "z_cross": zx}[base]


def _operator_nd(base, idx, tensors, convention):
    try:
        parts = [int(k) for k in idx.split(",")] if idx else []
    except ValueError:
        raise UsageError(f"bad index {idx!r}")
    try:
        if base in ("x", "p", "x_frak", "p_frak"):
            if len(parts) != 1:
                raise UsageError(f"{base} needs one index, e.g. {base}:0")
            variant = "frak" if base.endswith("frak") else "full"
            build = build_x_hat_nu if base.startswith("x") else build_p_hat_mu
            return build(tensors, parts[0], variant, None, convention)
        if len(parts) != 2:
            raise UsageError(f"{base} needs two indices, e.g. {base}:0,1")
        g = build_dispersion_generators(tensors, parts[0], parts[1], convention)
        return getattr(g, base)
    except IndexError as exc:
        raise UsageError(str(exc))


def _rounded(expr, digits):
    def r(v):
        return float(f"{v:.{digits}g}")

    return DiffOpExpr(expr.dim, {k: complex(r(c.real), r(c.imag)) for k, c in expr.items()})


def cmd_algebra(args):
    cfg = _merge(args, {**_basis_defaults(), "convention": "section2", "alpha": 0.0,
                      "digits": 15})
    if cfg.get("expr") is None and cfg.get("commutator") is None and not cfg.get("check_multidim"):
        raise UsageError("give --expr NAME, --commutator A B or --check-multidim")
    tensors = io.read_tensors(_existing(cfg["tensors"])) if cfg.get("tensors") else None
    params = _params(cfg)
    alpha = float(cfg["alpha"])
    alpha_beta = alpha if cfg.get("beta") is None else (alpha, float(cfg["beta"]))
    convention = cfg["convention"]

    def build(name):
        base, idx = _parse_name(name)
        if tensors is not None:
            return _operator_nd(base, idx, tensors, convention)
        if idx:
            raise UsageError(f"index on {name!r} needs --tensors")
        return _operator_1d(base, params, alpha_beta, convention)

    digits = int(cfg["digits"])
    lines = []
    if cfg.get("expr") is not None:
        lines.append(f"{cfg['expr']} = {render(_rounded(build(cfg['expr']), digits))}")
    if cfg.get("commutator") is not None:
        A, B = cfg["commutator"]
        C = _rounded(commutator(build(A), build(B)), digits)
        lines.append(f"[{A}, {B}] = {render(C)}")
        full = all(_parse_name(n)[0] in ("x", "p") for n in (A, B))
        if full and len(C) == 1 and C.coeff() != 0:
            hbar = tensors.hbar if tensors is not None else params.hbar
            c = _rounded(DiffOpExpr.monomial(C.dim, C.coeff() / hbar), digits)
            lines.append(f"  = ({render(c)}) hbar")
    if cfg.get("check_multidim"):
        if tensors is None:
            raise UsageError("--check-multidim needs --tensors")
        rep = check_multidim_commutators(tensors, convention=convention)
        for variant in ("frak", "full"):
            for row in rep[variant]:
                lines.append(f"{variant} " + " ".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if cfg.get("out"):
        _mkparent(cfg["out"])
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- verify ----------------------------------------------------------------------------------


def cmd_verify(args):
    cfg = _merge(args, {"hbar": _default_hbar()})
    inject = cfg.pop("inject", None)
    criteria = cfg.pop("criteria", None)
    out = cfg.pop("scorecard", None)
    card = run_all(cfg, inject=inject, criteria=criteria)
    for rec in card["checks"]:
        status = "PASS" if rec["passed"] else "FAIL"
        print(f"{status} [{rec['criterion']}] {rec['name']}: measured {rec['measured']!r}, allowed {rec['allowed']}")
    print(f"{card['n_passed']}/{card['n_checks']} checks passed")
    text = json.dumps(card, indent=2, sort_keys=True, default=float) + "\n"
    if out:
        _mkparent(out)
        Path(out).write_text(text)
    return EXIT_OK if card["passed"] else EXIT_FAIL


# -- parser ------------------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="phasekit", description="Phase-space representation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="forward transform of a wave function")
    p.add_argument("--config")
    _add_basis(p)
    p.add_argument("--input", help="CSV with columns x,re,im")
    p.add_argument("--preset", choices=("gaussian", "hermite"))
    p.add_argument("--n0", type=int, help="index of the hermite preset")
    p.add_argument("--X0", type=float)
    p.add_argument("--P0", type=float)
    p.add_argument("--a0", type=float)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--coeffs-out", dest="coeffs_out")
    p.add_argument("--field-out", dest="field_out")
    p.add_argument("--field-n", dest="field_n", type=int)
    p.add_argument("--grid-nodes", dest="grid_nodes", type=int)
    p.add_argument("--grid-width", dest="grid_width", type=float, help="half-width in units of a (and l)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reconstruct", help="rebuild psi(x) from coefficients or a field")
    p.add_argument("--config")
    p.add_argument("--coeffs", help="coefficient JSON (sum route)")
    p.add_argument("--field", help="field CSV with JSON sidecar (integral route)")
    p.add_argument("--compare", help="CSV x,re,im to report the residual against")
    p.add_argument("--x-min", dest="x_min", type=float)
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--x-num", dest="x_num", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("matrices", help="dump nonzero matrix entries")
    p.add_argument("--config")
    _add_basis(p)
    p.add_argument("--op", choices=MATRIX_OPS)
    p.add_argument("--N", type=int)
    p.add_argument("--tol", type=float, help="drop entries with |value| <= tol (default 1e-13)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("algebra", help="render operators and commutators")
    p.add_argument("--config")
    _add_basis(p)
    p.add_argument("--expr", help="operator name, e.g. p_frak or z_plus:0,1 with --tensors")
    p.add_argument("--commutator", nargs=2, metavar=("A", "B"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float, help="omit to link beta = (a/l) alpha")
    p.add_argument("--convention", choices=("section2", "section4"))
    p.add_argument("--tensors", help="tensor JSON for multidimensional operators")
    p.add_argument("--digits", type=int, help="significant digits of rendered coefficients (default 15)")
    p.add_argument("--check-multidim", dest="check_multidim", action="store_true", default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--config")
    p.add_argument("--hbar", type=float)
    p.add_argument("--inject", choices=INJECTIONS)
    p.add_argument("--criteria", type=int, nargs="+")
    p.add_argument("--scorecard", help="write the JSON scorecard here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"phasekit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
