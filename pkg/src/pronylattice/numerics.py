"""Special functions and quadrature used throughout the package.

Nothing here knows about viscoelasticity.  The routines are the numerical
substrate (complex Gamma, Mellin integrals in the log variable, contour
integrals, double-exponential quadrature) and double as oracles for the
closed forms elsewhere.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from . import _kernels
from .errors import NonConvergent, PoleEvaluation, StripViolation

POLE_TOL = 1e-14
# exp() overflows past ~709; the log-variable range never leaves this box
_U_CAP = 690.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Discretisation of a Mellin integral in the log variable ``u = ln t``.

    ``abscissa_count`` points span ``log_range``; the step they define is
    kept when the range has to be widened to swallow slowly decaying tails.
    """

    abscissa_count: int = 2000
    log_range: Tuple[float, float] = (-40.0, 40.0)
    tolerance: float = 1e-11

    def __post_init__(self):
        if self.abscissa_count < 3:
            raise ValueError("abscissa_count must be at least 3")
        lo, hi = self.log_range
        if not lo < hi:
            raise ValueError("log_range must satisfy lower < upper")
        if not 0.0 < self.tolerance < 1.0:
            raise ValueError("tolerance must lie in (0, 1)")

    @property
    def step(self) -> float:
        lo, hi = self.log_range
        return (hi - lo) / (self.abscissa_count - 1)


DEFAULT_QUADRATURE = QuadratureSpec()


def near_nonpositive_integer(s: complex, tol: float = POLE_TOL) -> bool:
    s = complex(s)
    if abs(s.imag) > tol or s.real > tol:
        return False
    return abs(s.real - round(s.real)) <= tol


def complex_gamma(s) -> complex:
    """Gamma function at a complex point.

    Lanczos approximation (g = 7, nine terms) for ``Re s >= 1/2`` and the
    reflection formula below that.  Relative error is a few ulps times
    ``|s|`` over ``|s| <= 50``.

    Raises
    ------
    PoleEvaluation
        If ``s`` lies within 1e-14 of a non-positive integer.
    """
    s = complex(s)
    if near_nonpositive_integer(s):
        raise PoleEvaluation(f"Gamma has a pole at s = {s}")
    return complex(_kernels.gamma(np.array([s]))[0])


def gamma_array(z) -> np.ndarray:
    """Vectorised complex Gamma; no pole checking (poles come back as inf/nan)."""
    z = np.asarray(z, dtype=np.complex128)
    return _kernels.gamma(z).reshape(z.shape)


def rgamma(s) -> complex:
    """Reciprocal Gamma, entire; exactly zero at the non-positive integers."""
    s = complex(s)
    if near_nonpositive_integer(s):
        return 0.0j
    return 1.0 / complex_gamma(s)


def _evaluate(f, t):
    try:
        out = np.asarray(f(t), dtype=np.complex128)
        if out.shape != t.shape:
            raise ValueError
        return out
    except (TypeError, ValueError):
        return np.array([complex(f(float(x))) for x in t], dtype=np.complex128)


def _tail(inner: complex, edge: complex, h: float) -> complex:
    """Integral of an exponential extrapolation beyond ``edge``.

    ``inner`` is the sample one step inside the boundary.  Returns ``inf``
    when the samples do not decay outward.
    """
    if edge == 0:
        return 0.0j
    if inner == 0:
        return complex(math.inf, 0.0)
    rate = cmath.log(edge / inner) / h
    if rate.real >= 0:
        return complex(math.inf, 0.0)
    return -edge / rate


def mellin_quadrature(
    f: Callable,
    s,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    strip: Optional[Tuple[float, float]] = None,
) -> complex:
    """Mellin transform ``int_0^inf t^(s-1) f(t) dt``.

    After ``t = e^u`` the integrand ``e^(us) f(e^u)`` is integrated with the
    trapezoidal rule on ``spec.log_range``; for integrands analytic in a
    strip around the real u-axis this converges geometrically in the step.
    The two truncated tails are modelled as exponentials fitted to the last
    pair of samples at each end.  The fitted tails are added to the result,
    and their size is the error estimate: while either exceeds
    ``spec.tolerance`` relative to the integral, the range is widened at the
    same step.

    ``f`` may be vectorised over numpy arrays; scalar callables also work.

    Raises
    ------
    StripViolation
        If ``strip`` is given and does not contain ``Re s``.
    NonConvergent
        If the tails cannot be brought under tolerance or the integrand is
        not finite on the grid.
    """
    s = complex(s)
    if strip is not None and not strip[0] < s.real < strip[1]:
        raise StripViolation(f"Re s = {s.real} outside strip {strip}")
    lo, hi = spec.log_range
    h = spec.step
    tol = spec.tolerance
    while True:
        n = int(round((hi - lo) / h)) + 1
        u = lo + h * np.arange(n)
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            fv = _evaluate(f, np.exp(u))
            vals = np.where(fv == 0, 0.0j, np.exp(u * s) * fv)
        if not np.all(np.isfinite(vals)):
            raise NonConvergent("integrand not finite on the quadrature grid")
        body = h * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
        left = _tail(vals[1], vals[0], h)
        right = _tail(vals[-2], vals[-1], h)
        total = body
        if cmath.isfinite(left):
            total += left
        if cmath.isfinite(right):
            total += right
        scale = max(abs(total), 1e-300)
        grow_lo = not abs(left) <= tol * scale
        grow_hi = not abs(right) <= tol * scale
        if not (grow_lo or grow_hi):
            return complex(total)
        if (grow_lo and lo <= -_U_CAP) or (grow_hi and hi >= _U_CAP):
            raise NonConvergent(
                f"Mellin integral at s = {s} has tails above tolerance {tol} "
                "inside the admissible log range"
            )
        width = hi - lo
        if grow_lo:
            lo = max(lo - width, -_U_CAP)
        if grow_hi:
            hi = min(hi + width, _U_CAP)


def contour_integral(f: Callable, center, radius: float, n: int = 256) -> complex:
    """``(1/2 pi i)`` times the integral of ``f`` around a circle.

    The periodic trapezoidal rule converges geometrically for functions
    analytic on an annulus around the circle, so this is the residue of
    ``f`` at ``center`` when that is the only singularity inside.
    """
    center = complex(center)
    theta = 2.0 * np.pi * np.arange(n) / n
    z = radius * np.exp(1j * theta)
    vals = np.array([complex(f(center + zi)) for zi in z])
    return complex(np.mean(vals * z))


# --------------------------------------------------------------------------
# double-exponential quadrature on intervals of the log axis
# --------------------------------------------------------------------------

_HALF_PI = 0.5 * math.pi


def _de_nodes(kind: str, t: np.ndarray, a: float, b: float):
    """Abscissae and weights of a DE substitution at parameter values ``t``.

    For the half-line rule the abscissa is the distance from the finite end;
    for the finite rule the distance to the nearer endpoint is formed
    directly so that nodes crowd the ends without cancellation.
    """
    y = _HALF_PI * np.sinh(t)
    ch = np.cosh(t)
    if kind == "sinh-sinh":
        return np.sinh(y), _HALF_PI * ch * np.cosh(y)
    if kind == "exp-sinh":
        d = np.exp(y)
        return d, _HALF_PI * ch * d
    e = np.exp(-2.0 * np.abs(y))
    half = 0.5 * (b - a)
    near = half * 2.0 * e / (1.0 + e)
    x = np.where(y < 0, a + near, b - near)
    return x, half * _HALF_PI * ch / np.cosh(y) ** 2


def _de_range(kind: str, extent: float) -> Tuple[float, float]:
    # t-interval whose nodes stay within ``extent`` of the centre or edge and
    # reach down to exp(-_U_CAP) at finite endpoints
    if kind == "sinh-sinh":
        t = math.asinh(math.asinh(extent) / _HALF_PI)
        return -t, t
    if kind == "exp-sinh":
        return -math.asinh(_U_CAP / _HALF_PI), math.asinh(math.log(extent) / _HALF_PI)
    t = math.asinh(_U_CAP / (2.0 * _HALF_PI))
    return -t, t


def de_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    lower: float,
    upper: float,
    tol: float = 1e-12,
    max_level: int = 10,
    extent: float = 600.0,
) -> complex:
    """Integrate ``f`` over ``(lower, upper)`` by double-exponential quadrature.

    Whole line: sinh-sinh, nodes within ``extent`` of the origin.  Half
    line: exp-sinh in the distance from the finite end.  Finite interval:
    tanh-sinh.  Integrable algebraic singularities at finite endpoints are
    fine because nodes are generated as offsets from the endpoint.  The step
    is halved until successive levels agree to ``tol`` (relative); ``f``
    must be vectorised and may return zeros outside its support.

    Raises
    ------
    NonConvergent
        If the refinement does not settle by ``max_level``.
    """
    if not lower < upper:
        raise ValueError("need lower < upper")
    if math.isinf(lower) and math.isinf(upper):
        kind, g = "sinh-sinh", f
    elif math.isinf(upper):
        kind = "exp-sinh"

        def g(d):
            return f(lower + d)

    elif math.isinf(lower):
        kind = "exp-sinh"

        def g(d):
            return f(upper - d)

    else:
        kind, g = "tanh-sinh", f
    t_lo, t_hi = _de_range(kind, extent)

    def level_sum(t):
        x, w = _de_nodes(kind, t, lower, upper)
        with np.errstate(over="ignore", invalid="ignore", under="ignore", divide="ignore"):
            vals = np.asarray(g(x), dtype=np.complex128) * w
        vals = np.where(w > 0, vals, 0.0)
        if not np.all(np.isfinite(vals)):
            raise NonConvergent("integrand not finite at a DE node")
        return vals.sum()

    h = 0.5
    j = np.arange(math.ceil(t_lo / h), math.floor(t_hi / h) + 1)
    acc = level_sum(h * j)
    estimate = h * acc
    for _ in range(max_level):
        h *= 0.5
        j = np.arange(math.ceil(t_lo / h), math.floor(t_hi / h) + 1)
        j = j[j % 2 == 1]
        acc += level_sum(h * j)
        new = h * acc
        if abs(new - estimate) <= tol * abs(new) or new == estimate:
            return complex(new)
        estimate = new
    raise NonConvergent(f"DE quadrature did not reach tolerance {tol}")
