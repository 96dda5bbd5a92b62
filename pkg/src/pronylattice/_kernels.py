"""Hot numeric loops with a numba path and a pure-numpy fallback.

Every kernel exists twice: a vectorised numpy version (``NUMPY``) and a
loop version compiled with ``numba.njit`` (``NUMBA``).  The module-level
names dispatch to numba unless the environment variable
``PRONYLATTICE_DISABLE_NUMBA`` is set to a non-empty value other than ``0``,
or numba cannot be imported.  Both paths must agree to rounding; the test
suite checks this and ``benchmarks/bench_kernels.py`` times them.
"""

from __future__ import annotations

import cmath
import math
import os
from types import SimpleNamespace

import numpy as np

LANCZOS_G = 7.0
LANCZOS_COEF = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------


def _np_gamma_right(z):
    # valid for Re z >= 0.5
    z = z - 1.0
    x = np.full_like(z, LANCZOS_COEF[0])
    for i in range(1, LANCZOS_COEF.size):
        x = x + LANCZOS_COEF[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return _SQRT_2PI * np.exp((z + 0.5) * np.log(t) - t) * x


def np_gamma(z):
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    left = z.real < 0.5
    if np.any(~left):
        out[~left] = _np_gamma_right(z[~left])
    if np.any(left):
        zl = z[left]
        # sin(pi z) after exact reduction by the nearest integer
        r = np.floor(zl.real + 0.5)
        sign = np.where(np.mod(r, 2.0) == 0.0, 1.0, -1.0)
        sinpi = sign * np.sin(np.pi * (zl - r))
        out[left] = np.pi / (sinpi * _np_gamma_right(1.0 - zl))
    return out


def np_maxwell_sum(g, tau, omega):
    x = 1j * np.outer(omega, tau)
    return (x / (1.0 + x)) @ g


def np_debye_sum(g, tau, omega):
    x = 1j * np.outer(omega, tau)
    return (1.0 / (1.0 + x)) @ g


def np_exp_sum(g, tau, t):
    return np.exp(-np.outer(t, 1.0 / tau)) @ g


def np_near_integer(a, b, k_max, tol):
    k = np.arange(k_max + 1, dtype=np.float64)
    v = a * k + b
    return np.nonzero(np.abs(v - np.round(v)) <= tol)[0].astype(np.int64)


# --------------------------------------------------------------------------
# loop implementations (compiled by numba when available)
# --------------------------------------------------------------------------


def _loop_gamma(z):
    out = np.empty(z.size, dtype=np.complex128)
    for j in range(z.size):
        w = z[j]
        reflect = w.real < 0.5
        if reflect:
            w = 1.0 - w
        w = w - 1.0
        x = LANCZOS_COEF[0] + 0.0j
        for i in range(1, LANCZOS_COEF.size):
            x += LANCZOS_COEF[i] / (w + i)
        t = w + LANCZOS_G + 0.5
        val = _SQRT_2PI * cmath.exp((w + 0.5) * cmath.log(t) - t) * x
        if reflect:
            r = math.floor(z[j].real + 0.5)
            sign = 1.0 if r % 2.0 == 0.0 else -1.0
            val = math.pi / (sign * cmath.sin(math.pi * (z[j] - r)) * val)
        out[j] = val
    return out


def _loop_maxwell_sum(g, tau, omega):
    out = np.zeros(omega.size, dtype=np.complex128)
    for i in range(omega.size):
        acc = 0.0j
        for k in range(tau.size):
            x = 1j * omega[i] * tau[k]
            acc += g[k] * x / (1.0 + x)
        out[i] = acc
    return out


def _loop_debye_sum(g, tau, omega):
    out = np.zeros(omega.size, dtype=np.complex128)
    for i in range(omega.size):
        acc = 0.0j
        for k in range(tau.size):
            acc += g[k] / (1.0 + 1j * omega[i] * tau[k])
        out[i] = acc
    return out


def _loop_exp_sum(g, tau, t):
    out = np.zeros(t.size, dtype=np.float64)
    for i in range(t.size):
        acc = 0.0
        for k in range(tau.size):
            acc += g[k] * math.exp(-t[i] / tau[k])
        out[i] = acc
    return out


def _loop_near_integer(a, b, k_max, tol):
    hits = np.empty(k_max + 1, dtype=np.int64)
    n = 0
    for k in range(k_max + 1):
        v = a * k + b
        if abs(v - math.floor(v + 0.5)) <= tol:
            hits[n] = k
            n += 1
    return hits[:n].copy()


NUMPY = SimpleNamespace(
    gamma=np_gamma,
    maxwell_sum=np_maxwell_sum,
    debye_sum=np_debye_sum,
    exp_sum=np_exp_sum,
    near_integer=np_near_integer,
    name="numpy",
)


def _build_numba():
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return None
    jit = njit(cache=True)
    return SimpleNamespace(
        gamma=jit(_loop_gamma),
        maxwell_sum=jit(_loop_maxwell_sum),
        debye_sum=jit(_loop_debye_sum),
        exp_sum=jit(_loop_exp_sum),
        near_integer=jit(_loop_near_integer),
        name="numba",
    )


def _numba_disabled() -> bool:
    flag = os.environ.get("PRONYLATTICE_DISABLE_NUMBA", "")
    return flag not in ("", "0")


NUMBA = None if _numba_disabled() else _build_numba()
ACTIVE = NUMBA if NUMBA is not None else NUMPY
BACKEND = ACTIVE.name


def gamma(z) -> np.ndarray:
    return ACTIVE.gamma(np.ascontiguousarray(z, dtype=np.complex128).ravel())


def maxwell_sum(g, tau, omega) -> np.ndarray:
    return ACTIVE.maxwell_sum(_f64(g), _f64(tau), _f64(omega))


def debye_sum(g, tau, omega) -> np.ndarray:
    return ACTIVE.debye_sum(_f64(g), _f64(tau), _f64(omega))


def exp_sum(g, tau, t) -> np.ndarray:
    return ACTIVE.exp_sum(_f64(g), _f64(tau), _f64(t))


def near_integer(a: float, b: float, k_max: int, tol: float) -> np.ndarray:
    return ACTIVE.near_integer(float(a), float(b), int(k_max), float(tol))


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64).ravel()
