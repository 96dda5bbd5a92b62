"""Mellin symbols of the extended Fox class and the constitutive kernel.

A symbol is

    prefactor * prod Gamma(a_i s + b_i) / prod Gamma(c_j s + d_j)
              * exp(P(s)) * sum_k g_k exp(lambda_k s)

with the atom sum omitted when there are no atoms.  Gamma scales may be
negative so that reflected factors such as ``Gamma(1 - s)`` are expressible
directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CoincidentPole, NonConvergent, PoleEvaluation
from .exact import Scalar, as_fraction, number_from_json, number_to_json, to_float
from .lattice import IRRATIONAL_TOL, Progression
from .numerics import complex_gamma, contour_integral, rgamma

KERNEL_SIGN = {"maxwell": -1, "debye": 1}


@dataclass(frozen=True)
class GammaFactor:
    """``Gamma(scale * s + shift)``."""

    scale: Scalar
    shift: Scalar = Fraction(0)

    def __post_init__(self):
        if to_float(self.scale) == 0:
            raise ValueError("Gamma factor scale must be non-zero")

    @property
    def exact(self) -> bool:
        return isinstance(self.scale, Fraction) and isinstance(self.shift, Fraction)

    @property
    def spacing(self) -> Scalar:
        return self.progression().spacing

    def progression(self) -> Progression:
        return Progression(self.scale, self.shift)

    def argument(self, s) -> complex:
        return to_float(self.scale) * complex(s) + to_float(self.shift)

    def pole(self, k: int) -> Scalar:
        return self.progression().member(k)

    def pole_index(self, s, tol: float = IRRATIONAL_TOL) -> Optional[int]:
        """``k`` if ``s`` is the ``k``-th pole; exact for exact data."""
        if self.exact and isinstance(s, (Fraction, int)):
            x = self.scale * Fraction(s) + self.shift
            if x.denominator == 1 and x <= 0:
                return int(-x)
            return None
        x = self.argument(to_float(s) if not isinstance(s, complex) else s)
        r = round(x.real)
        if r <= 0 and abs(x.real - r) <= tol and abs(x.imag) <= tol:
            return int(-r)
        return None

    def value(self, s) -> complex:
        return complex_gamma(self.argument(s))

    def to_json(self):
        return {"a": _gamma_param_json(self.scale), "b": _gamma_param_json(self.shift)}

    @classmethod
    def from_json(cls, obj) -> "GammaFactor":
        return cls(_gamma_param(obj["a"]), _gamma_param(obj.get("b", "0")))

    def __str__(self) -> str:
        return f"Gamma({self.scale}*s + {self.shift})"


def _gamma_param(x) -> Scalar:
    if isinstance(x, float):
        return x
    return number_from_json(x)


def _gamma_param_json(x):
    if isinstance(x, Fraction):
        return number_to_json(x) if x.denominator != 1 else str(x.numerator)
    return number_to_json(x)


@dataclass(frozen=True)
class MellinSymbol:
    """Immutable element of the extended Fox class.

    ``exp_poly`` lists the coefficients of ``P(s)`` in ascending order;
    ``atom_terms`` holds pairs ``(g_k, lambda_k)`` with ``g_k > 0``.
    """

    numerator: Tuple[GammaFactor, ...] = ()
    denominator: Tuple[GammaFactor, ...] = ()
    exp_poly: Tuple[complex, ...] = ()
    prefactor: complex = 1.0
    atom_terms: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(self.numerator))
        object.__setattr__(self, "denominator", tuple(self.denominator))
        object.__setattr__(self, "exp_poly", tuple(self.exp_poly))
        object.__setattr__(self, "atom_terms", tuple((float(g), float(l)) for g, l in self.atom_terms))
        if any(not g > 0 for g, _ in self.atom_terms):
            raise ValueError("atom weights must be strictly positive")

    @property
    def has_gamma(self) -> bool:
        return bool(self.numerator or self.denominator)

    @property
    def degree(self) -> int:
        """Degree of ``P`` after dropping vanishing leading coefficients."""
        d = len(self.exp_poly) - 1
        while d >= 0 and self.exp_poly[d] == 0:
            d -= 1
        return max(d, 0)

    def poly_value(self, s: complex) -> complex:
        acc = 0j
        for c in reversed(self.exp_poly):
            acc = acc * s + c
        return acc

    def atom_value(self, s: complex) -> complex:
        if not self.atom_terms:
            return 1.0
        return sum(g * cmath.exp(lam * s) for g, lam in self.atom_terms)

    def regular_part(self, s: complex) -> complex:
        """Everything except the Gamma factors."""
        return complex(self.prefactor) * cmath.exp(self.poly_value(s)) * self.atom_value(s)

    def __mul__(self, other: "MellinSymbol") -> "MellinSymbol":
        n = max(len(self.exp_poly), len(other.exp_poly))
        poly = tuple(
            (self.exp_poly[i] if i < len(self.exp_poly) else 0)
            + (other.exp_poly[i] if i < len(other.exp_poly) else 0)
            for i in range(n)
        )
        if self.atom_terms and other.atom_terms:
            atoms = tuple(
                (g1 * g2, l1 + l2) for g1, l1 in self.atom_terms for g2, l2 in other.atom_terms
            )
        else:
            atoms = self.atom_terms or other.atom_terms
        return MellinSymbol(
            self.numerator + other.numerator,
            self.denominator + other.denominator,
            poly,
            complex(self.prefactor) * complex(other.prefactor),
            atoms,
        )

    def cancelled(self) -> "MellinSymbol":
        """Drop numerator/denominator pairs that are identical factors."""
        num = list(self.numerator)
        den = []
        for d in self.denominator:
            if d in num:
                num.remove(d)
            else:
                den.append(d)
        return MellinSymbol(tuple(num), tuple(den), self.exp_poly, self.prefactor, self.atom_terms)

    def to_json(self):
        return {
            "num": [f.to_json() for f in self.numerator],
            "den": [f.to_json() for f in self.denominator],
            "poly": [_complex_json(c) for c in self.exp_poly],
            "prefactor": [complex(self.prefactor).real, complex(self.prefactor).imag],
            "atoms": [{"g": g, "lambda": lam} for g, lam in self.atom_terms],
        }

    @classmethod
    def from_json(cls, obj) -> "MellinSymbol":
        pre = obj.get("prefactor", [1.0, 0.0])
        if isinstance(pre, (list, tuple)):
            pre = complex(pre[0], pre[1] if len(pre) > 1 else 0.0)
        return cls(
            tuple(GammaFactor.from_json(f) for f in obj.get("num", [])),
            tuple(GammaFactor.from_json(f) for f in obj.get("den", [])),
            tuple(_complex_from_json(c) for c in obj.get("poly", [])),
            complex(pre),
            tuple((float(a["g"]), float(a["lambda"])) for a in obj.get("atoms", [])),
        )


def _complex_json(c):
    c = complex(c)
    return c.real if c.imag == 0 else [c.real, c.imag]


def _complex_from_json(c):
    if isinstance(c, (list, tuple)):
        return complex(c[0], c[1])
    return float(c)


@dataclass(frozen=True)
class PoleRecord:
    """A pole of a symbol: generated by family ``family_index`` at index
    ``order_index``.  ``order`` is the net pole order after cancellation;
    ``residue`` is ``None`` for multiple poles."""

    location: Scalar
    family_index: int
    order_index: int
    residue: Optional[complex]
    order: int = 1

    @property
    def value(self) -> complex:
        return complex(to_float(self.location))


def kernel_mellin(s) -> complex:
    """Canonical kernel symbol ``pi exp(-i pi s/2) / sin(pi s)``.

    Raises
    ------
    PoleEvaluation
        At integers (within 1e-14).
    """
    s = complex(s)
    if abs(s.imag) <= 1e-14 and abs(s.real - round(s.real)) <= 1e-14:
        raise PoleEvaluation(f"kernel symbol has a pole at s = {s}")
    return math.pi * cmath.exp(-0.5j * math.pi * s) / cmath.sin(math.pi * s)


def kernel_transform(s, kernel: str = "maxwell", tau: float = 1.0) -> complex:
    """Mellin transform in ``omega`` of a single relaxation kernel.

    ``maxwell`` is ``i w tau/(1 + i w tau)`` (strip ``-1 < Re s < 0``),
    ``debye`` is ``1/(1 + i w tau)`` (strip ``0 < Re s < 1``).  They are
    ``-+ tau^(-s)`` times the canonical symbol respectively.
    """
    return KERNEL_SIGN[kernel] * complex(tau) ** (-complex(s)) * kernel_mellin(s)


@lru_cache(maxsize=256)
def kernel_residue(n: int) -> complex:
    """Residue of :func:`kernel_mellin` at the integer ``n``: ``(-1)^n e^{-i pi n/2}``.

    The closed form is cross-checked against a radius-1/4 contour integral
    on every first call for a given ``n``.
    """
    closed = (1, 1j, -1, -1j)[n % 4]
    numeric = contour_integral(kernel_mellin, n, 0.25, 128)
    if abs(numeric - closed) > 1e-8:
        raise NonConvergent(f"kernel residue at {n}: contour gives {numeric}, closed form {closed}")
    return complex(closed)


def _location_key(loc):
    return loc if isinstance(loc, Fraction) else float(loc)


def _indices_in_window(fac: GammaFactor, lo, hi, limit: int) -> range:
    a = as_fraction(fac.scale)
    b = as_fraction(fac.shift)
    if a is None or b is None:
        a, b = to_float(fac.scale), to_float(fac.shift)
        c1, c2 = -b - a * hi, -b - a * lo
        first = max(0, math.ceil(min(c1, c2) - 1e-9))
        last = math.floor(max(c1, c2) + 1e-9)
    else:
        lo_f, hi_f = Fraction(lo), Fraction(hi)
        c1, c2 = -b - a * hi_f, -b - a * lo_f
        first = max(0, math.ceil(min(c1, c2)))
        last = math.floor(max(c1, c2))
    if last < first:
        return range(0)
    return range(first, min(last, first + limit - 1) + 1)


def enumerate_poles(
    sym: MellinSymbol, window: Tuple[float, float], max_per_family: int = 1000
) -> List[PoleRecord]:
    """Poles of ``sym`` with real part in ``window`` (closed).

    Numerator lattice points are collected per exact location; a
    denominator lattice point at the same location (exact coincidence, or
    bit-identical floats) removes one order.  Locations with positive net
    order are returned in decreasing order of real part.
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError("window must satisfy lower < upper")
    num: Dict[object, List[Tuple[int, int, Scalar]]] = {}
    for j, fac in enumerate(sym.numerator):
        for k in _indices_in_window(fac, lo, hi, max_per_family):
            loc = fac.pole(k)
            if lo <= to_float(loc) <= hi:
                num.setdefault(_location_key(loc), []).append((j, k, loc))
    den: Dict[object, int] = {}
    for fac in sym.denominator:
        for k in _indices_in_window(fac, lo, hi, 10**9):
            key = _location_key(fac.pole(k))
            if key in num:
                den[key] = den.get(key, 0) + 1
    out = []
    for key, hits in num.items():
        net = len(hits) - den.get(key, 0)
        if net <= 0:
            continue
        j, k, loc = hits[0]
        rec = PoleRecord(loc, j, k, None, net)
        if net == 1:
            rec = PoleRecord(loc, j, k, residue_at(sym, rec), 1)
        out.append(rec)
    out.sort(key=lambda r: -to_float(r.location))
    return out


def _laurent_leading(sym: MellinSymbol, s0) -> Tuple[int, complex]:
    """Net pole order at ``s0`` and the leading Laurent coefficient."""
    order = 0
    coef = complex(1.0)
    s_val = complex(to_float(s0))
    for fac in sym.numerator:
        k = fac.pole_index(s0)
        if k is None:
            coef *= fac.value(s_val)
        else:
            order += 1
            coef *= (-1) ** k / (to_float(fac.scale) * math.factorial(k))
    for fac in sym.denominator:
        k = fac.pole_index(s0)
        if k is None:
            coef *= rgamma(fac.argument(s_val))
        else:
            order -= 1
            coef *= (-1) ** k * math.factorial(k) * to_float(fac.scale)
    return order, coef * sym.regular_part(s_val)


def residue_at(sym: MellinSymbol, pole: PoleRecord) -> complex:
    """Residue of ``sym`` at a simple pole.

    Product of the Gamma residue ``(-1)^k/(a k!)`` of the generating factor
    with the values of all remaining factors; denominator zeros at the same
    point contribute their leading Taylor coefficient.  Returns 0 when the
    point is not a pole after cancellation.

    Raises
    ------
    CoincidentPole
        If two or more numerator lattices meet at the location.
    """
    order, coef = _laurent_leading(sym, pole.location)
    if order >= 2:
        raise CoincidentPole(f"order-{order} pole at s = {pole.location}")
    if order <= 0:
        return 0j
    return coef


def laurent_at_coincidence(residue_K, const_K, residue_H, const_H) -> Tuple[complex, complex]:
    """Principal part of a product of two functions with simple poles at one point.

    With ``a_{-1}/(s-s0) + a_0`` and ``b_{-1}/(s-s0) + b_0`` the product has
    ``a_{-1} b_{-1}`` on the double pole and ``a_{-1} b_0 + a_0 b_{-1}`` on
    the simple pole.
    """
    return (residue_K * residue_H, residue_K * const_H + const_K * residue_H)


def evaluate_symbol(sym: MellinSymbol, s) -> complex:
    """Value of ``sym`` at ``s``.

    Raises
    ------
    PoleEvaluation
        If ``s`` is a pole of a numerator Gamma factor.
    """
    s = complex(s)
    val = complex(1.0)
    for fac in sym.numerator:
        val *= complex_gamma(fac.argument(s))
    for fac in sym.denominator:
        val *= rgamma(fac.argument(s))
    return val * sym.regular_part(s)


def atoms_symbol(atoms: Sequence[Tuple[float, float]]) -> MellinSymbol:
    """``sum g_k tau_k^s`` for atoms ``(g_k, tau_k)``; zero when empty."""
    atoms = [(g, t) for g, t in atoms if g != 0]
    if not atoms:
        return MellinSymbol(prefactor=0.0)
    return MellinSymbol(atom_terms=tuple((g, math.log(t)) for g, t in atoms))
