"""Gradient-descent fitting of a simplex to a point cloud."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .errors import (
    DegenerateDataError,
    DegenerateSimplexError,
    DimensionError,
    InsufficientDataError,
)
from .geometry import (
    Simplex,
    diameter_dataset,
    extreme_points,
    is_degenerate,
)
from .risk import EXPONENTIAL, LossSpec, crr_evaluate
from .sampling import rng_from

INIT_RANDOM = "random"
INIT_HULL = "hull"
MAX_REDRAWS = 100


@dataclass(frozen=True)
class FitConfig:
    """Optimizer settings. ``None`` selects the scale-aware default.

    ``alpha`` defaults to ``alpha_scale * diam(D)^2 / (K sqrt(n))``; ``gamma`` to
    ``gamma_scale * b * diam(D) / V`` where ``V`` is the volume of
    the regular K-simplex of side ``diam(D)``; ``b``
    to ``1 / diam(D)``.
    """

    iterations: int = 1000
    alpha: float | None = None
    gamma: float | None = None
    b: float | None = None
    init: str = INIT_HULL
    accelerate: bool = False
    refresh_every: int = 50
    hull_mode: str = "auto"
    hull_directions: int | None = None
    perturbation_scale: float = 1e-9
    seed: Any = None
    stop_tol: float | None = None
    trace_every: int = 1
    alpha_scale: float = 6.0
    gamma_scale: float = 0.01

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.alpha is not None and not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.gamma is not None and not self.gamma >= 0:
            raise ValueError("gamma must be non-negative")
        if self.b is not None and not self.b > 0:
            raise ValueError("b must be positive")
        if self.init not in (INIT_RANDOM, INIT_HULL):
            raise ValueError(f"unknown init {self.init!r}")
        if self.refresh_every < 1 or self.trace_every < 1:
            raise ValueError("refresh_every and trace_every must be >= 1")
        if not self.perturbation_scale >= 0:
            raise ValueError("perturbation_scale must be non-negative")


class TraceRecord(NamedTuple):
    iteration: int
    risk: float
    volume: float
    max_distance: float
    vertex_error: float
    active_size: int


TRACE_COLUMNS = TraceRecord._fields


@dataclass
class FitTrace:
    records: list[TraceRecord] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        i = TRACE_COLUMNS.index(name)
        return np.array([r[i] for r in self.records])

    @property
    def iterations(self) -> int:
        return self.records[-1].iteration if self.records else 0


class FitResult(NamedTuple):
    simplex: Simplex
    trace: FitTrace


class DegenerateFitError(DegenerateSimplexError):
    """The iterate collapsed; ``trace`` holds everything recorded so far."""

    def __init__(self, msg: str, trace: FitTrace):
        super().__init__(msg)
        self.trace = trace


@dataclass(frozen=True)
class Resolved:
    """Concrete numbers behind a :class:`FitConfig` for one dataset."""

    spec: LossSpec
    alpha: float
    diameter: float


def _points(d) -> np.ndarray:
    x = np.asarray(getattr(d, "points", d), dtype=np.float64)
    return np.ascontiguousarray(x[:, None] if x.ndim == 1 else x)


def reference_volume(k: int, side: float) -> float:
    """Volume of the regular K-simplex with the given side length."""
    return math.sqrt(k + 1) / (math.factorial(k) * 2 ** (k / 2)) * side ** k


def resolve(x: np.ndarray, cfg: FitConfig) -> Resolved:
    diam = diameter_dataset(x)
    if diam == 0.0:
        raise DegenerateSimplexError("dataset has zero diameter")
    b = 1.0 / diam if cfg.b is None else cfg.b
    if cfg.gamma is None:
        # the data gradient scales with b, so gamma follows it
        ref = reference_volume(x.shape[1], diam)
        gamma = cfg.gamma_scale * b * diam / ref
    else:
        gamma = cfg.gamma
    # curvature of the data term grows like K sqrt(n); keep the step inside it
    k = x.shape[1]
    alpha = (cfg.alpha_scale * diam ** 2 / (k * math.sqrt(len(x)))
             if cfg.alpha is None else cfg.alpha)
    return Resolved(LossSpec(EXPONENTIAL, b=b, gamma=gamma), alpha, diam)


def _check(x: np.ndarray, k: int) -> None:
    if x.shape[1] != k:
        raise DimensionError(f"data dimension {x.shape[1]} != K={k}; project first")
    if len(x) < k + 1:
        raise InsufficientDataError(f"need at least K+1={k + 1} points, got {len(x)}")


def active_set(d, k: int, cfg: FitConfig, seed=None) -> np.ndarray:
    """Indices of (approximate) convex-hull vertices of the data."""
    x = _points(d)
    _check(x, k)
    if len(x) == k + 1:
        return np.arange(len(x))
    return extreme_points(x, mode=cfg.hull_mode, m_directions=cfg.hull_directions,
                          seed=seed)


def initialize(d, k: int, cfg: FitConfig, rng=None) -> Simplex:
    """Pick K+1 distinct data points (from the hull vertices in hull mode)."""
    x = _points(d)
    _check(x, k)
    rng = rng_from(cfg.seed if rng is None else rng)
    pool = np.arange(len(x))
    if cfg.init == INIT_HULL and len(x) > k + 1:
        try:
            hull = extreme_points(x, mode=cfg.hull_mode,
                                  m_directions=cfg.hull_directions, seed=rng)
        except DegenerateDataError:
            hull = pool
        if len(hull) >= k + 1:
            pool = hull
    theta = None
    for _ in range(MAX_REDRAWS):
        idx = rng.choice(pool, size=k + 1, replace=False)
        theta = x[idx].T
        if not is_degenerate(Simplex(theta)):
            return Simplex(theta)
    if cfg.perturbation_scale > 0:
        diam = diameter_dataset(x)
        theta = theta + rng.normal(0.0, cfg.perturbation_scale * diam, size=theta.shape)
        s = Simplex(theta)
        if not is_degenerate(s):
            return s
    raise DegenerateSimplexError(
        f"no non-degenerate initial simplex after {MAX_REDRAWS} draws"
    )


def fit(d, k: int, cfg: FitConfig = FitConfig(), reference: Simplex | None = None,
        init: Simplex | None = None) -> FitResult:
    """Run ``cfg.iterations`` steps of ``Theta <- Theta - alpha * grad R(Theta)``.

    With ``cfg.accelerate`` the data part of the gradient visits only the hull
    vertices of the data (recomputed every ``refresh_every`` steps). A tiny
    Gaussian jitter of scale ``perturbation_scale * diam(D)`` is added to the
    iterate only when it is degenerate or a point sits on a facet tie.
    """
    from .metrics import vertex_error  # metrics imports geometry only; avoid cycle at import

    x = _points(d)
    _check(x, k)
    n = len(x)
    res = resolve(x, cfg)
    spec, alpha = res.spec, res.alpha
    rng = rng_from(cfg.seed)
    s = initialize(x, k, cfg, rng) if init is None else init
    if s.k != k:
        raise DimensionError(f"initial simplex has K={s.k}, expected {k}")

    trace = FitTrace(meta={
        "alpha": alpha, "gamma": spec.gamma, "b": spec.b, "n": n, "k": k,
        "accelerate": cfg.accelerate,
    })
    active = active_set(x, k, cfg, seed=rng) if cfg.accelerate else None
    jitter = cfg.perturbation_scale * res.diameter
    # exact hulls never change; only random-direction hulls are redrawn
    refresh = cfg.accelerate and (
        cfg.hull_mode == "approximate" or (cfg.hull_mode == "auto" and k > 3))

    def record(t: int, ev_full) -> None:
        err = vertex_error(reference, s).error if reference is not None else math.nan
        size = n if active is None else len(active)
        trace.records.append(TraceRecord(t, ev_full.risk, ev_full.volume,
                                         ev_full.max_distance, err, size))

    def guarded(s: Simplex, t: int) -> Simplex:
        if is_degenerate(s):
            if jitter > 0:
                s = Simplex(s.vertices + rng.normal(0.0, jitter, size=s.vertices.shape))
            if is_degenerate(s):
                raise DegenerateFitError(f"simplex degenerated at iteration {t}", trace)
        return s

    last_risk = None
    t = 0
    for t in range(cfg.iterations):
        if refresh and t > 0 and t % cfg.refresh_every == 0:
            active = active_set(x, k, cfg, seed=rng)
        s = guarded(s, t)
        ev = crr_evaluate(s, x, spec, active=active, n_total=n)
        if ev.n_ties and jitter > 0:
            s = guarded(Simplex(s.vertices + rng.normal(0.0, jitter, size=s.vertices.shape)), t)
            ev = crr_evaluate(s, x, spec, active=active, n_total=n)
        if t % cfg.trace_every == 0:
            full = ev if active is None else crr_evaluate(s, x, spec, want_grad=False)
            record(t, full)
            if cfg.stop_tol is not None and last_risk is not None:
                if abs(full.risk - last_risk) <= cfg.stop_tol * max(abs(last_risk), 1e-300):
                    trace.meta["stopped_early"] = True
                    return FitResult(s, trace)
            last_risk = full.risk
        step = s.vertices - alpha * ev.gradient
        if not np.all(np.isfinite(step)):
            raise DegenerateFitError(f"iterate diverged at iteration {t}; lower alpha", trace)
        s = Simplex(step)
    else:
        t = cfg.iterations
    s = guarded(s, t)
    record(t, crr_evaluate(s, x, spec, want_grad=False))
    return FitResult(s, trace)
