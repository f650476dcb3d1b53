import os
import random
import subprocess
import sys

import pytest

from pisotile import _purepy, kernels


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_t_step_is_greedy():
    # beta = 5 + 2 sqrt 7; beta * 1/2 = 5.14...
    assert _purepy.t_step(10, 3, 112, 2, 1, 0) == (5, -10, 1)


@pytest.mark.parametrize("backend", ["python", "cython"])
def test_orbit_known(backend):
    assert kernels.orbit_tail_period(4, 3, 1, 1, 0, backend=backend) == (2, 1)
    mu, lam = kernels.orbit_tail_period(10, 3, 2, 1, 0, backend=backend)
    assert mu == 0 and lam >= 1


def test_orbit_backends_agree():
    rng = random.Random(5)
    for _ in range(2000):
        a, b = rng.choice([(10, 3), (4, 3), (1, 1), (3, -1), (5, 2)])
        q = rng.randint(1, 500)
        U, V = rng.randint(0, q - 1), 0
        assert (kernels.orbit_tail_period(a, b, q, U, V, backend="python")
                == kernels.orbit_tail_period(a, b, q, U, V, backend="cython"))


def test_orbit_cap():
    assert _purepy.orbit_tail_period(10, 3, 7919, 1, 0, 3) == (-1, -1)


def test_big_inputs_fall_back():
    q = 10**30 + 1
    assert kernels.orbit_tail_period(1, 1, q, 1, 0, cap=10) == \
        _purepy.orbit_tail_period(1, 1, q, 1, 0, 10)


def test_purepy_env_switch():
    env = dict(os.environ, PISOTILE_PUREPY="1")
    out = subprocess.run([sys.executable, "-c", "from pisotile import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
