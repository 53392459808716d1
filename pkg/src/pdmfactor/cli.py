"""Command-line front end.

Subcommands
-----------
construct   build one factorization and export its profiles as CSV + JSON
spectrum    solve the original or deformed potential and export the report
verify      run the isospectrality / node checks; exit 1 on failure
scan        sweep lambda and bracket the singularity boundary

Exit codes: 0 success, 1 check failure, 2 usage error.  All files are
written atomically (temp file in the target directory, then rename), and all
numeric output is full precision.  The only non-deterministic JSON field is
the isolated "timestamp" key.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import (
    ConfigurationError,
    DomainError,
    InconsistentInputError,
    NonNormalizableError,
)
from .factor import factorize, map_eigenstate, zero_mode
from .grids import Grid, SampledFunction, write_csv
from .models import catalog
from .spectra import solve_spectrum
from .verify import check_isospectral, riccati_residual, scan_lambda

USAGE_ERROR = 2
CHECK_FAILURE = 1


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_csv(sf: SampledFunction, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    os.close(fd)
    try:
        write_csv(sf, tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _model_from_args(args) -> object:
    params = {}
    if args.model == "ex1":
        params["alpha"] = args.alpha
    elif args.model == "ex2":
        params.update(a=args.a, b=args.b, c=args.c)
    return catalog(args.model, **params)


def _grid_from_args(args, model) -> Grid:
    base = model.recommended_grid
    x_min = base.x_min if args.grid_min is None else args.grid_min
    x_max = base.x_max if args.grid_max is None else args.grid_max
    n = base.n_points if args.grid_points is None else args.grid_points
    return Grid(x_min, x_max, n)


def _model_params_dict(args) -> dict:
    if args.model == "ex1":
        return {"alpha": args.alpha}
    if args.model == "ex2":
        return {"a": args.a, "b": args.b, "c": args.c}
    return {}


def _run_factorization(args, model, grid):
    kwargs = dict(beta=args.beta, grid=grid)
    if args.beta == 0.0:
        if args.lambda_ is None:
            raise ConfigurationError("--lambda is required when --beta is 0")
        kwargs["lam"] = args.lambda_
        kwargs["convention"] = args.convention
    elif args.lambda_ is not None:
        raise ConfigurationError("--lambda applies only to --beta 0 runs")
    return factorize(model, args.n, **kwargs)


def _base_payload(args) -> dict:
    return {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "model": args.model,
        "parameters": _model_params_dict(args),
    }


def cmd_construct(args) -> int:
    model = _model_from_args(args)
    grid = _grid_from_args(args, model)
    fac = _run_factorization(args, model, grid)
    out = Path(args.out)
    files = {
        "W_n": "W_n.csv",
        "f_n": "f_n.csv",
        "V_n_minus": "V_n_minus.csv",
        "V_n_plus": "V_n_plus.csv",
        "V_tilde_minus": "V_tilde_minus.csv",
        "mass": "mass.csv",
    }
    _atomic_write_csv(fac.W_n.values, out / files["W_n"])
    _atomic_write_csv(fac.f_n.values, out / files["f_n"])
    _atomic_write_csv(fac.V_n_minus, out / files["V_n_minus"])
    _atomic_write_csv(fac.V_n_plus, out / files["V_n_plus"])
    _atomic_write_csv(fac.V_tilde_minus, out / files["V_tilde_minus"])
    _atomic_write_csv(SampledFunction(grid, model.mass(grid.points())), out / files["mass"])

    states = {}
    if not fac.f_n.is_singular:
        try:
            zm = zero_mode(fac)
            name = "psi_tilde_zero_mode.csv"
            _atomic_write_csv(zm, out / name)
            states["zero_mode"] = name
        except NonNormalizableError:
            states["zero_mode"] = "non-normalizable"
        for k in range(max(2, args.n + 1) + 1):
            if k == args.n:
                continue
            psi_k = fac.model.eigenstate_samples(k, grid)
            mapped = map_eigenstate(psi_k, fac)
            name = f"psi_tilde_{k}.csv"
            _atomic_write_csv(mapped, out / name)
            states[f"psi_tilde_{k}"] = name

    payload = _base_payload(args)
    payload.update(
        {
            "n": args.n,
            "beta": args.beta,
            "lambda": fac.lam,
            "convention": fac.convention,
            "route": fac.f_n.route,
            "singular": fac.f_n.is_singular,
            "spectrum_shift": fac.spectrum_shift,
            "grid": {"x_min": grid.x_min, "x_max": grid.x_max, "n_points": grid.n_points},
            "files": files,
            "states": states,
        }
    )
    _atomic_write_text(out / "result.json", _json_dump(payload))
    status = "singular" if fac.f_n.is_singular else "nonsingular"
    print(
        f"constructed {args.model} n={args.n} beta={args.beta} "
        f"lambda={fac.lam} route={fac.f_n.route}: {status}, shift={fac.spectrum_shift}"
    )
    return 0


def cmd_spectrum(args) -> int:
    model = _model_from_args(args)
    grid = _grid_from_args(args, model)
    if args.which == "original":
        potential = model.potential_samples(grid)
    else:
        fac = _run_factorization(args, model, grid)
        if fac.f_n.is_singular:
            print("deformed potential is singular for these parameters", file=sys.stderr)
            return CHECK_FAILURE
        potential = fac.V_tilde_minus
    report = solve_spectrum(model, potential, args.levels)
    out = Path(args.out)
    payload = _base_payload(args)
    payload.update({"which": args.which, "levels": args.levels})
    payload.update(report.to_json_dict())
    _atomic_write_text(out / "spectrum.json", _json_dump(payload))
    for j, state in enumerate(report.eigenstates):
        _atomic_write_csv(state, out / f"eigenstate_{j}.csv")
    evals = ", ".join(f"{e:.10g}" for e in report.eigenvalues)
    print(f"{args.which} spectrum ({args.levels} levels): {evals}")
    return 0


def cmd_verify(args) -> int:
    model = _model_from_args(args)
    grid = _grid_from_args(args, model)
    out = Path(args.out)
    payload = _base_payload(args)
    payload.update({"n": args.n, "beta": args.beta, "lambda": args.lambda_})
    fac = _run_factorization(args, model, grid)
    if fac.f_n.is_singular:
        payload["singular"] = True
        payload["passed"] = False
        _atomic_write_text(out / "verify.json", _json_dump(payload))
        print(
            "FAIL: deformation function is singular for these parameters "
            f"(lambda={fac.lam}, convention={fac.convention})",
            file=sys.stderr,
        )
        return CHECK_FAILURE
    tol = model.spectrum_tolerance
    report = check_isospectral(model, args.n, fac, args.levels, tol)
    ric = riccati_residual(fac)
    payload["singular"] = False
    payload["isospectrality"] = report.to_json_dict()
    payload["riccati_residual"] = ric
    payload["passed"] = report.passed
    _atomic_write_text(out / "verify.json", _json_dump(payload))
    deformed = ", ".join(f"{b:.6g}" for _, b, _ in report.pairs)
    print(
        f"isospectrality: max_gap={report.max_gap:.3e} (tol {tol:g}), "
        f"nodes {'match' if report.node_match else 'MISMATCH'}; "
        f"riccati={ric:.3e}; deformed spectrum: {deformed}"
    )
    if not report.passed:
        print("FAIL: isospectrality check failed", file=sys.stderr)
        return CHECK_FAILURE
    return 0


def cmd_scan(args) -> int:
    model = _model_from_args(args)
    grid = _grid_from_args(args, model)
    if args.steps < 2 or not args.lambda_max > args.lambda_min:
        raise ConfigurationError("scan needs lambda-max > lambda-min and at least 2 steps")
    lambdas = np.linspace(args.lambda_min, args.lambda_max, args.steps)
    report = scan_lambda(model, args.n, lambdas, convention=args.convention, grid=grid)
    out = Path(args.out)
    payload = _base_payload(args)
    payload.update({"n": args.n, "convention": args.convention})
    payload.update(report.to_json_dict())
    _atomic_write_text(out / "scan.json", _json_dump(payload))
    crit = "none" if report.critical_lambda is None else f"{report.critical_lambda:.6f}"
    n_sing = sum(report.singular_flags)
    print(f"scanned {args.steps} values: {n_sing} singular, critical lambda = {crit}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdmfactor",
        description=(
            "Construct nonsingular isospectral partners of position-dependent-mass "
            "potentials by excited-state factorization, and verify them numerically."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_level=True):
        p.add_argument("--model", required=True, choices=["ex1", "ex2", "ho", "box"])
        p.add_argument("--alpha", type=float, default=1.0, help="ex1 mass parameter")
        p.add_argument("--a", type=float, default=1.0, help="ex2 parameter a")
        p.add_argument("--b", type=float, default=5.0, help="ex2 parameter b")
        p.add_argument("--c", type=float, default=4.0, help="ex2 parameter c")
        if needs_level:
            p.add_argument("--n", type=int, default=1, help="factorization level")
            p.add_argument("--beta", type=float, default=0.0, help="spectral shift")
            p.add_argument("--lambda", dest="lambda_", type=float, default=None)
        p.add_argument(
            "--convention",
            choices=["normalized", "paper-ex1"],
            default="normalized",
            help="lambda parametrization of the beta = 0 route",
        )
        p.add_argument("--grid-min", type=float, default=None)
        p.add_argument("--grid-max", type=float, default=None)
        p.add_argument("--grid-points", type=int, default=None)
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("construct", help="build a factorization and export its profiles")
    add_common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("spectrum", help="solve the original or deformed potential")
    add_common(p)
    p.add_argument("--which", choices=["original", "deformed"], default="original")
    p.add_argument("--levels", type=int, default=4)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check isospectrality and node structure")
    add_common(p)
    p.add_argument("--levels", type=int, default=5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="sweep lambda and bracket the singular window")
    add_common(p, needs_level=False)
    p.add_argument("--n", type=int, default=1, help="factorization level")
    p.add_argument("--lambda-min", type=float, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, InconsistentInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (DomainError, NonNormalizableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
