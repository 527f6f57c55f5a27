import json
import os
import subprocess
import sys

import numpy as np
import pytest

from simplexlearn import _backend

SCRIPT = """
import json
import numpy as np
from simplexlearn import _backend
from simplexlearn.optimizer import FitConfig, fit
from simplexlearn.sampling import random_simplex, sample_uniform
truth = random_simplex(3, seed=1)
d = sample_uniform(truth, 300, seed=2)
s, tr = fit(d, 3, FitConfig(iterations=100, seed=3, accelerate=True), reference=truth)
print(json.dumps({"backend": _backend.backend_name(),
                  "vertices": s.vertices.tolist(),
                  "risk": tr.column("risk").tolist()}))
"""


def run_with(flag):
    env = dict(os.environ)
    env.pop("SIMPLEXLEARN_DISABLE_NUMBA", None)
    if flag is not None:
        env["SIMPLEXLEARN_DISABLE_NUMBA"] = flag
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True,
                         text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_env_flag_selects_numpy():
    assert run_with("1")["backend"] == "numpy"
    assert run_with("0")["backend"] == ("numba" if _backend.NUMBA_AVAILABLE else "numpy")


@pytest.mark.skipif(not _backend.NUMBA_AVAILABLE, reason="numba missing")
def test_backends_give_the_same_fit():
    a, b = run_with(None), run_with("yes")
    assert (a["backend"], b["backend"]) == ("numba", "numpy")
    np.testing.assert_allclose(a["vertices"], b["vertices"], rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(a["risk"], b["risk"], rtol=1e-8)


def test_dispatch_reads_flag_at_call_time(monkeypatch):
    from simplexlearn import kernels
    from simplexlearn.sampling import random_simplex

    theta = random_simplex(4, "gaussian", seed=0).vertices
    fast = kernels.frame(theta)
    monkeypatch.setattr(_backend, "USE_NUMBA", False)
    slow = kernels.frame(theta)
    np.testing.assert_allclose(fast[0], slow[0], rtol=1e-10, atol=1e-12)
    assert fast[1] == pytest.approx(slow[1], rel=1e-12)
