import itertools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from simplexlearn.geometry import Simplex

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def right_triangle():
    return Simplex.from_points([[0, 0], [1, 0], [0, 1]])


def leibniz_det(m):
    """Permutation expansion; exact oracle for small matrices."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        total += (-1) ** inversions * math.prod(m[i, perm[i]] for i in range(n))
    return total


def brute_vertex_error(a: Simplex, b: Simplex) -> float:
    k = a.k
    best = math.inf
    for perm in itertools.permutations(range(k + 1)):
        cost = sum(np.sum((a.vertices[:, j] - b.vertices[:, perm[j]]) ** 2) for j in range(k + 1))
        best = min(best, cost)
    return math.sqrt(best / (k * (k + 1)))


def random_nondegenerate(k, rng, scale=1.0, min_ratio=None):
    """Gaussian-vertex simplex whose volume is at least ``min_ratio`` (default
    ``0.3**K``) of the regular simplex with the same diameter."""
    min_ratio = 0.3 ** k if min_ratio is None else min_ratio
    from simplexlearn.geometry import diameter_simplex, volume
    from simplexlearn.optimizer import reference_volume

    while True:
        s = Simplex(rng.normal(0.0, scale, size=(k, k + 1)))
        if volume(s) >= min_ratio * reference_volume(k, diameter_simplex(s)):
            return s


def central_difference(f, theta, h):
    """Entrywise central finite differences of scalar ``f`` at matrix ``theta``."""
    theta = np.asarray(theta, dtype=float)
    g = np.zeros_like(theta)
    for idx in np.ndindex(theta.shape):
        up, dn = theta.copy(), theta.copy()
        up[idx] += h
        dn[idx] -= h
        g[idx] = (f(up) - f(dn)) / (2 * h)
    return g


def entry_rel_error(analytic, numeric):
    """Worst entrywise relative error. Entries far below the matrix scale
    (analytically zero columns) are measured against that scale instead."""
    floor = 1e-6 * max(np.abs(numeric).max(), 1e-300)
    return float(np.max(np.abs(analytic - numeric) / np.maximum(np.abs(numeric), floor)))


def exterior_point(s, rng, min_dist, min_gap):
    """Random point outside ``s`` whose planar distance exceeds ``min_dist``
    and whose best facet leads the runner-up by at least ``min_gap``."""
    from simplexlearn.geometry import diameter_simplex, facet_hyperplanes

    planes = facet_hyperplanes(s)
    diam = diameter_simplex(s)
    center = s.vertices.mean(axis=1)
    while True:
        u = rng.normal(size=s.k)
        x = center + rng.uniform(0.3, 1.5) * diam * u / np.linalg.norm(u)
        vals = np.sort([p.signed(x) for p in planes])
        if vals[-1] > min_dist and vals[-1] - vals[-2] > min_gap:
            return x


ACCEPTANCE_LINES: list[str] = []


def verdict(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} | {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
