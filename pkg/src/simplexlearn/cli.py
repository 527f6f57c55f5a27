"""``simplexlearn`` command line: gen, fit, eval, sweep-noise, sweep-dim, pca, weights.

Exit codes: 0 success, 2 usage, 3 input/output, 4 numeric or degeneracy failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .errors import DimensionError, SimplexLearnError
from .experiments import (
    DIM_COLUMNS,
    DIM_SWEEP_FIT,
    NOISE_COLUMNS,
    NOISE_SWEEP_FIT,
    ExperimentConfig,
    sweep_dim,
    sweep_noise,
)
from .geometry import diameter_dataset, isoperimetry_constants, volume
from .linalg import principal_components
from .metrics import barycentric_coordinates, containment_fraction, tv_distance_mc, vertex_error
from .optimizer import TRACE_COLUMNS, DegenerateFitError, FitConfig, fit
from .sampling import NoiseConfig, add_noise, noise_sigma, random_simplex, sample_uniform

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _positive_int(v: str) -> int:
    i = int(v)
    if i < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return i


def _nonneg_int(v: str) -> int:
    i = int(v)
    if i < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return i


def _grid(text: str, cast) -> tuple:
    vals = tuple(cast(x) for x in text.split(",") if x.strip())
    if not vals:
        raise UsageError("empty --grid")
    return vals


def _seed_sequence(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, *key])


# ----------------------------------------------------------------- commands

def cmd_gen(a) -> int:
    if a.k < 1 or a.n < 1:
        raise UsageError("--k and --n must be positive")
    if a.rho < 0:
        raise UsageError("--rho must be >= 0")
    s_truth, s_data, s_noise = _seed_sequence(a.seed, 0).spawn(3)
    truth = random_simplex(a.k, kind=a.kind, side=a.side, scale=a.scale, seed=s_truth)
    d = sample_uniform(truth, a.n, s_data)
    d = add_noise(d, truth, NoiseConfig(a.rho, s_noise))
    out = _out_dir(a.out)
    io.write_dataset(out / "data.csv", d)
    io.write_simplex(out / "simplex.json", truth)
    io.write_matrix_csv(out / "weights.csv", d.weights, [f"p{j}" for j in range(a.k + 1)])
    diam = diameter_dataset(d) if d.n > 1 else 0.0
    print(f"n={d.n} K={a.k} rho={a.rho:g} sigma={noise_sigma(truth, a.rho):.17g} "
          f"diameter={diam:.17g}")
    return EXIT_OK


def _fit_config(a, base: FitConfig = FitConfig()) -> FitConfig:
    b = None
    if a.b != "inverse-diam":
        try:
            b = float(a.b)
        except ValueError:
            raise UsageError("--b takes 'inverse-diam' or a positive number") from None
    kw = dict(
        init=a.init, accelerate=a.accel == "on", perturbation_scale=a.perturb,
        b=b, alpha=a.alpha, gamma=a.gamma,
    )
    if a.iters is not None:
        kw["iterations"] = a.iters
    if a.accel_refresh is not None:
        kw["refresh_every"] = a.accel_refresh
    if a.alpha_scale is not None:
        kw["alpha_scale"] = a.alpha_scale
    if a.gamma_scale is not None:
        kw["gamma_scale"] = a.gamma_scale
    try:
        return replace(base, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write_trace(path: Path, trace) -> None:
    meta = [f"{key}={io.fmt(v)}" for key, v in sorted(trace.meta.items())]
    io.write_table(path, TRACE_COLUMNS, trace.records, meta)


def cmd_fit(a) -> int:
    d = io.read_dataset(a.data)
    ref = io.read_simplex(a.ref) if a.ref else None
    k = a.k if a.k is not None else d.dim
    cfg = replace(_fit_config(a), seed=_seed_sequence(a.seed, 1))
    out = _out_dir(a.out)
    try:
        est, trace = fit(d, k, cfg, reference=ref)
    except DegenerateFitError as exc:
        _write_trace(out / "trace.csv", exc.trace)
        raise
    io.write_simplex(out / "estimate.json", est)
    _write_trace(out / "trace.csv", trace)
    last = trace.records[-1]
    print(f"iterations={last.iteration} risk={last.risk:.17g} volume={last.volume:.17g}")
    return EXIT_OK


def cmd_eval(a) -> int:
    truth = io.read_simplex(a.truth)
    est = io.read_simplex(a.estimate)
    if truth.k != est.k:
        raise DimensionError(f"K mismatch: truth {truth.k}, estimate {est.k}")
    rep = vertex_error(truth, est)
    tv = tv_distance_mc(truth, est, m=a.tv_samples, seed=_seed_sequence(a.seed, 2))
    iso = isoperimetry_constants(est)
    report = {
        "k": truth.k,
        "error": rep.error,
        "normalized_error": rep.normalized_error,
        "matching": list(rep.matching),
        "tv": tv.value,
        "tv_stderr": tv.stderr,
        "tv_samples": tv.samples,
        "volume_truth": volume(truth),
        "volume_estimate": volume(est),
        "lambda_under": iso.lambda_under,
        "lambda_bar": iso.lambda_bar,
    }
    if a.data:
        report["containment_fraction"] = containment_fraction(est, io.read_dataset(a.data))
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    io.write_json(out, report)
    print(f"error={rep.error:.17g} normalized_error={rep.normalized_error:.17g} "
          f"tv={tv.value:.6g}+-{tv.stderr:.2g}")
    return EXIT_OK


def _experiment(a, **grid) -> ExperimentConfig:
    try:
        return ExperimentConfig(trials=a.trials, tv_samples=a.tv_samples,
                                epsilon=a.epsilon, zeta=a.zeta, **grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _progress(a):
    return (lambda msg: print(msg, file=sys.stderr)) if a.verbose else None


def cmd_sweep_noise(a) -> int:
    rhos = _grid(a.grid, float)
    if any(r < 0 for r in rhos):
        raise UsageError("noise levels must be >= 0")
    cfg = _experiment(a, rho_grid=rhos, k_grid=(a.k,), n_grid=(a.n,))
    rows, summary = sweep_noise(cfg, a.seed, _fit_config(a, NOISE_SWEEP_FIT),
                                timing=not a.no_timing, progress=_progress(a))
    io.write_table(a.out, NOISE_COLUMNS, rows, summary)
    print("\n".join(summary))
    return EXIT_OK


def cmd_sweep_dim(a) -> int:
    ks = _grid(a.grid, int)
    if any(k < 2 for k in ks):
        raise UsageError("dimension grid needs K >= 2")
    if a.c <= 0:
        raise UsageError("--c must be positive")
    cfg = _experiment(a, k_grid=ks, c=a.c)
    rows, summary = sweep_dim(cfg, a.seed, _fit_config(a, DIM_SWEEP_FIT),
                              timing=not a.no_timing, progress=_progress(a))
    io.write_table(a.out, DIM_COLUMNS, rows, summary)
    print("\n".join(summary))
    return EXIT_OK


def cmd_pca(a) -> int:
    x, _ = io.read_matrix_csv(a.data)
    n, ambient = x.shape
    if not 1 <= a.dim <= min(n - 1, ambient):
        raise UsageError(f"--dim must lie in [1, {min(n - 1, ambient)}]")
    pc = principal_components(x, a.dim)
    out = _out_dir(a.out)
    io.write_dataset(out / "projected.csv", pc.project(x))
    io.write_json(out / "basis.json", {
        "dim": pc.dim,
        "mean": pc.mean.tolist(),
        "basis": pc.basis.T.tolist(),  # one principal direction per entry
        "variances": pc.variances.tolist(),
    })
    print(f"n={n} ambient={ambient} dim={a.dim} "
          f"explained_variance={float(pc.variances.sum()):.17g}")
    return EXIT_OK


def cmd_weights(a) -> int:
    s = io.read_simplex(a.simplex)
    d = io.read_dataset(a.data)
    if d.dim != s.k:
        raise DimensionError(f"data dimension {d.dim} != simplex K={s.k}")
    p = barycentric_coordinates(s, d.points)
    flags = (p < -a.tol).any(axis=1)
    cols = [f"p{j}" for j in range(s.k + 1)] + ["outside"]
    rows = [[*r, bool(f)] for r, f in zip(p, flags)]
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    io.write_table(out, cols, rows, [f"flagged={int(flags.sum())} of {len(flags)} tol={a.tol:g}"])
    print(f"n={len(p)} flagged={int(flags.sum())}")
    return EXIT_OK


# ------------------------------------------------------------------- parser

def _fit_flags(p: argparse.ArgumentParser, iters_default=None) -> None:
    g = p.add_argument_group("optimizer")
    g.add_argument("--iters", type=_nonneg_int, default=iters_default)
    g.add_argument("--alpha", type=float, help="step size (default: scaled to data)")
    g.add_argument("--gamma", type=float, help="volume weight (default: scaled to data)")
    g.add_argument("--alpha-scale", type=float)
    g.add_argument("--gamma-scale", type=float)
    g.add_argument("--b", default="inverse-diam", help="'inverse-diam' or a positive rate")
    g.add_argument("--init", choices=["random", "hull"], default="hull")
    g.add_argument("--accel", choices=["off", "on"], default="off")
    g.add_argument("--accel-refresh", type=_positive_int)
    g.add_argument("--perturb", type=float, default=1e-9)


def _sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", required=True, help="comma-separated values")
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--tv-samples", type=_positive_int, default=20_000)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--zeta", type=float, default=0.1)
    p.add_argument("--no-timing", action="store_true",
                   help="write runtime 0 so reruns are byte-identical")
    p.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="simplexlearn", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("gen", cmd_gen, "sample points from a simplex")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["regular", "gaussian"], default="regular")
    p.add_argument("--side", type=float, default=1.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--out", required=True, help="output directory")

    p = add("fit", cmd_fit, "fit a simplex to a data file")
    p.add_argument("--data", required=True)
    p.add_argument("--k", type=int, help="defaults to the data dimension")
    p.add_argument("--ref", help="reference simplex for the vertex_error column")
    p.add_argument("--out", required=True, help="output directory")
    _fit_flags(p)

    p = add("eval", cmd_eval, "compare an estimate with the truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--estimate", required=True)
    p.add_argument("--data", help="optional dataset for containment")
    p.add_argument("--tv-samples", type=_positive_int, default=100_000)
    p.add_argument("--out", required=True, help="report file (JSON)")

    p = add("sweep-noise", cmd_sweep_noise, "error versus noise level")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--out", required=True, help="results CSV")
    _sweep_flags(p)
    _fit_flags(p)

    p = add("sweep-dim", cmd_sweep_dim, "error versus dimension with n = c K^2 ln K")
    p.add_argument("--c", type=float, default=40.0)
    p.add_argument("--out", required=True, help="results CSV")
    _sweep_flags(p)
    _fit_flags(p)

    p = add("pca", cmd_pca, "project data onto leading principal directions")
    p.add_argument("--data", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")

    p = add("weights", cmd_weights, "barycentric weights of data rows")
    p.add_argument("--simplex", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", required=True, help="weights CSV")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return a.func(a)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, io.FileFormatError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimplexLearnError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
