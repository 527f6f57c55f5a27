"""Noise and dimension sweeps: generate, fit and score many seeded trials."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import SimplexLearnError
from .metrics import tv_distance_mc, vertex_error
from .optimizer import FitConfig, fit
from .sampling import NoiseConfig, add_noise, random_simplex, sample_uniform

# γ and α scales found to give stable fits for each sweep (see README)
NOISE_SWEEP_FIT = FitConfig(iterations=500, gamma_scale=0.3, alpha_scale=2.0)
DIM_SWEEP_FIT = FitConfig(iterations=3000, gamma_scale=0.1, alpha_scale=3.0)

NOISE_COLUMNS = ("rho", "trial", "error", "normalized_error", "tv", "runtime", "status")
DIM_COLUMNS = ("K", "n", "trial", "error", "normalized_error", "tv", "runtime", "status")


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid, trial count and sample-size rule shared by the sweeps.

    ``epsilon`` and ``zeta`` (target TV accuracy and failure probability) are
    carried into the output summary so results stay tied to the accuracy they
    were meant to probe.
    """

    epsilon: float = 0.1
    zeta: float = 0.1
    trials: int = 20
    k_grid: tuple[int, ...] = (2,)
    n_grid: tuple[int, ...] = (100,)
    rho_grid: tuple[float, ...] = (0.0,)
    c: float = 40.0
    tv_samples: int = 20_000

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        if not 0 < self.zeta < 1:
            raise ValueError("zeta must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.tv_samples < 1:
            raise ValueError("tv_samples must be >= 1")


def scaled_n(k: int, c: float) -> int:
    """``ceil(c K^2 ln K)``."""
    if c <= 0:
        raise ValueError("c must be positive")
    if k < 2:
        raise ValueError("the K^2 ln K rule needs K >= 2")
    return math.ceil(c * k * k * math.log(k))


def trial_seeds(seed: int, key: int, trial: int) -> list[np.random.SeedSequence]:
    """Independent streams (truth, data, noise, fit, tv) for one trial."""
    return np.random.SeedSequence([int(seed), int(key), int(trial)]).spawn(5)


def rho_key(rho: float) -> int:
    return int(round(rho * 1_000_000))


class TrialResult(NamedTuple):
    error: float
    normalized_error: float
    tv: float
    runtime: float
    status: str


def run_trial(k: int, n: int, rho: float, seeds, fit_cfg: FitConfig, tv_samples: int,
              kind: str = "regular", side: float = 1.0, scale: float = 1.0,
              clock: Callable[[], float] | None = time.perf_counter) -> TrialResult:
    """One gen -> fit -> eval cycle; failures come back as a status string."""
    s_truth, s_data, s_noise, s_fit, s_tv = seeds
    truth = random_simplex(k, kind=kind, side=side, scale=scale, seed=s_truth)
    d = sample_uniform(truth, n, s_data)
    d = add_noise(d, truth, NoiseConfig(rho, s_noise))
    t0 = clock() if clock else 0.0
    try:
        est, _ = fit(d, k, replace(fit_cfg, seed=s_fit))
    except SimplexLearnError as exc:
        return TrialResult(math.nan, math.nan, math.nan, 0.0, type(exc).__name__)
    runtime = clock() - t0 if clock else 0.0
    rep = vertex_error(truth, est)
    tv = tv_distance_mc(truth, est, m=tv_samples, seed=s_tv).value
    return TrialResult(rep.error, rep.normalized_error, tv, runtime, "ok")


def _stats(vals: Sequence[float]) -> tuple[float, float]:
    v = np.asarray([x for x in vals if not math.isnan(x)], dtype=np.float64)
    if v.size == 0:
        return math.nan, math.nan
    return float(v.mean()), float(v.std(ddof=1)) if v.size > 1 else 0.0


def sweep_noise(cfg: ExperimentConfig, seed: int = 0, fit_cfg: FitConfig = NOISE_SWEEP_FIT,
                timing: bool = True, progress: Callable[[str], None] | None = None):
    """Rows ``NOISE_COLUMNS`` sorted by (rho, trial) and ``#`` summary lines."""
    if not cfg.rho_grid:
        raise ValueError("empty rho grid")
    k, n = cfg.k_grid[0], cfg.n_grid[0]
    clock = time.perf_counter if timing else None
    rows = []
    for rho in sorted(set(cfg.rho_grid)):
        for t in range(cfg.trials):
            r = run_trial(k, n, rho, trial_seeds(seed, rho_key(rho), t), fit_cfg,
                          cfg.tv_samples, clock=clock)
            rows.append((rho, t, *r))
            if progress:
                progress(f"rho={rho:g} trial={t} {r.status} err={r.normalized_error:.4g}")
    summary = [f"K={k} n={n} trials={cfg.trials} seed={seed} epsilon={cfg.epsilon:g} zeta={cfg.zeta:g}"]
    for rho in sorted(set(cfg.rho_grid)):
        sel = [r for r in rows if r[0] == rho]
        m, sd = _stats([r[3] for r in sel])
        tv, _ = _stats([r[4] for r in sel])
        fails = sum(r[6] != "ok" for r in sel)
        summary.append(f"rho={rho:g} mean_normalized_error={m:.6g} std={sd:.6g} "
                       f"mean_tv={tv:.6g} failures={fails}")
    return rows, summary


def sweep_dim(cfg: ExperimentConfig, seed: int = 0, fit_cfg: FitConfig = DIM_SWEEP_FIT,
              timing: bool = True, progress: Callable[[str], None] | None = None):
    """Rows ``DIM_COLUMNS`` sorted by (K, trial) with ``n = ceil(c K^2 ln K)``."""
    if not cfg.k_grid:
        raise ValueError("empty K grid")
    ks = sorted(set(cfg.k_grid))
    ns = {k: scaled_n(k, cfg.c) for k in ks}
    clock = time.perf_counter if timing else None
    rows = []
    for k in ks:
        for t in range(cfg.trials):
            r = run_trial(k, ns[k], 0.0, trial_seeds(seed, k, t), fit_cfg,
                          cfg.tv_samples, clock=clock)
            rows.append((k, ns[k], t, *r))
            if progress:
                progress(f"K={k} n={ns[k]} trial={t} {r.status} err={r.normalized_error:.4g}")
    summary = [f"c={cfg.c:g} trials={cfg.trials} seed={seed} epsilon={cfg.epsilon:g} zeta={cfg.zeta:g}"]
    means = []
    for k in ks:
        sel = [r for r in rows if r[0] == k]
        m, sd = _stats([r[4] for r in sel])
        tv, _ = _stats([r[5] for r in sel])
        means.append(m)
        fails = sum(r[7] != "ok" for r in sel)
        summary.append(f"K={k} n={ns[k]} mean_normalized_error={m:.6g} std={sd:.6g} "
                       f"mean_tv={tv:.6g} failures={fails}")
    finite = [m for m in means if not math.isnan(m)]
    if finite and min(finite) > 0:
        summary.append(f"max_over_min_mean_normalized_error={max(finite) / min(finite):.6g}")
    return rows, summary
