"""Kernel dispatch: the compiled extension when it is importable, else pure Python.

Set ``PISOTILE_PUREPY=1`` to force the fallback.  ``BACKEND`` names the
implementation in use.
"""
import os

from . import _purepy

# compiled kernels use 64-bit coordinates; keep inputs well inside that range
_PARAM_LIMIT = 1 << 16
_Q_LIMIT = 1 << 36

_ext = None
if os.environ.get("PISOTILE_PUREPY", "") not in ("1", "true", "yes"):
    try:
        from . import _speedups as _ext
    except ImportError:  # extension not built
        _ext = None

BACKEND = "cython" if _ext is not None else "python"

t_step = _purepy.t_step


def _small(a, b, q, U, V):
    return (abs(a) < _PARAM_LIMIT and abs(b) < _PARAM_LIMIT and 0 < q < _Q_LIMIT
            and abs(U) < _Q_LIMIT and abs(V) < _Q_LIMIT)


def orbit_tail_period(a, b, q, U, V, cap=10**6, backend=None):
    """(tail length, cycle length) of the T_beta orbit of (U + V*beta)/q."""
    use_ext = _ext is not None if backend is None else backend == "cython"
    if use_ext and _ext is not None and _small(a, b, q, U, V):
        mu, lam = _ext.orbit_tail_period(a, b, q, U, V, cap)
        if mu != -2:
            return mu, lam
    return _purepy.orbit_tail_period(a, b, q, U, V, cap)


def stripe_cover(estart, elabel, etarget, depth, powK, powL, powR, modulus,
                 beta2, half_width, backend=None):
    use_ext = _ext is not None if backend is None else backend == "cython"
    if use_ext and _ext is not None:
        big = max([abs(x) for x in powK] + [abs(x) for x in powL] + [1])
        if big * (max(elabel, default=1) + 1) * (depth + 1) < (1 << 52) and modulus < (1 << 31):
            return _ext.stripe_cover(estart, elabel, etarget, depth, powK, powL, powR,
                                     modulus, beta2, half_width)
    return _purepy.stripe_cover(estart, elabel, etarget, depth, powK, powL, powR,
                                modulus, beta2, half_width)
