"""Synthetic data: uniform points in a simplex, Gaussian noise, random simplices."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .errors import DimensionError
from .geometry import Simplex, check_nondegenerate, is_degenerate


@dataclass(frozen=True, eq=False)
class Dataset:
    """``n`` points in R^dim, stored as rows.

    ``weights`` holds the generating mixture weights when the data came from
    :func:`sample_uniform`.
    """

    points: np.ndarray
    weights: np.ndarray | None = None
    labels: list[str] | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        x = np.array(self.points, dtype=np.float64, copy=True)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] < 1:
            raise DimensionError(f"points must be a non-empty (n, dim) array, got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("dataset has non-finite coordinates")
        x.setflags(write=False)
        object.__setattr__(self, "points", x)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class NoiseConfig:
    rho: float
    seed: Any = None

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValueError("rho must be non-negative")


def rng_from(seed) -> np.random.Generator:
    """PCG64 generator from an int, a SeedSequence, or pass through a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def dirichlet_weights(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    e = rng.standard_exponential((n, k + 1))
    return e / e.sum(axis=1, keepdims=True)


def sample_uniform(s: Simplex, n: int, seed=None) -> Dataset:
    """``n`` i.i.d. points uniform over ``s`` (flat-Dirichlet mixtures of the vertices)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_nondegenerate(s)
    p = dirichlet_weights(n, s.k, rng_from(seed))
    return Dataset(points=p @ s.vertices.T, weights=p)


def mean_pairwise_distance(s: Simplex) -> float:
    """Average of ``|theta_k - theta_k'|`` over the ``K(K+1)`` ordered distinct pairs."""
    v = s.vertices.T
    diff = v[:, None, :] - v[None, :, :]
    total = np.sqrt((diff ** 2).sum(axis=-1)).sum()
    return float(total / (s.k * (s.k + 1)))


def noise_sigma(s_ref: Simplex, rho: float) -> float:
    return rho * mean_pairwise_distance(s_ref)


def add_noise(d: Dataset, s_ref: Simplex, cfg: NoiseConfig) -> Dataset:
    """Add i.i.d. ``N(0, sigma^2 I)`` with ``sigma = rho * mean pairwise vertex distance``."""
    if d.dim != s_ref.k:
        raise DimensionError(f"data dimension {d.dim} != simplex K={s_ref.k}")
    sigma = noise_sigma(s_ref, cfg.rho)
    meta = dict(d.meta, rho=cfg.rho, sigma=sigma)
    if sigma == 0.0:
        return replace(d, meta=meta)
    noise = rng_from(cfg.seed).normal(0.0, sigma, size=d.points.shape)
    return replace(d, points=d.points + noise, meta=meta)


def helmert_basis(k: int) -> np.ndarray:
    """``(k, k+1)`` matrix with orthonormal rows spanning ``{x : sum(x) = 0}``."""
    h = np.zeros((k, k + 1))
    for i in range(1, k + 1):
        h[i - 1, :i] = 1.0
        h[i - 1, i] = -float(i)
        h[i - 1] /= np.sqrt(i * (i + 1.0))
    return h


def regular_simplex(k: int, side: float = 1.0) -> Simplex:
    """Standard-basis vertices scaled to edge ``side`` and rotated into R^k."""
    return Simplex(helmert_basis(k) * (side / np.sqrt(2.0)))


def random_simplex(k: int, kind: str = "regular", side: float = 1.0,
                   scale: float = 1.0, seed=None) -> Simplex:
    if k < 1:
        raise ValueError("k must be >= 1")
    if kind == "regular":
        if side <= 0:
            raise ValueError("side must be positive")
        return regular_simplex(k, side)
    if kind == "gaussian":
        if scale <= 0:
            raise ValueError("scale must be positive")
        rng = rng_from(seed)
        while True:
            s = Simplex(rng.normal(0.0, scale, size=(k, k + 1)))
            if not is_degenerate(s):
                return s
    raise ValueError(f"unknown simplex kind {kind!r}")
