"""Catalogue of viscoelastic models.

Each model provides its complex modulus, a relaxation spectrum (a finite
atom list or a continuous density), and a trial-state factorisation of the
Mellin transform of its viscoelastic part.

Two kernels appear.  Models written as ``G_inf + g i w tau/(1 + i w tau)``
relax through the *maxwell* kernel.  Models written as ``G_inf + g/(1 + i w
tau)`` use the *debye* kernel.  A spectrum always pairs with the kernel of
its model, and ``baseline`` is the constant the spectral integral is added
to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple

import numpy as np

from . import _kernels
from .errors import InvalidSpec, StripViolation, UnsupportedModel
from .exact import Irrational, Scalar, number_from_json, number_to_json, parse_number, to_float
from .mellin import GammaFactor, MellinSymbol
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, de_integrate, mellin_quadrature

MODEL_NAMES = (
    "maxwell",
    "sls",
    "power-law",
    "cole-cole",
    "cole-davidson",
    "havriliak-negami",
    "fractional-zener",
    "log-normal",
)

_ALIASES = {
    "maxwell": "maxwell",
    "sls": "sls",
    "standard-linear-solid": "sls",
    "powerlaw": "power-law",
    "power-law": "power-law",
    "colecole": "cole-cole",
    "cole-cole": "cole-cole",
    "coledavidson": "cole-davidson",
    "cole-davidson": "cole-davidson",
    "havriliaknegami": "havriliak-negami",
    "havriliak-negami": "havriliak-negami",
    "hn": "havriliak-negami",
    "fractionalzener": "fractional-zener",
    "fractional-zener": "fractional-zener",
    "zener": "fractional-zener",
    "lognormal": "log-normal",
    "log-normal": "log-normal",
    "gaussian": "log-normal",
}

DISPLAY_NAMES = {
    "maxwell": "Maxwell",
    "sls": "Standard Linear Solid (SLS)",
    "power-law": "Power-law",
    "cole-cole": "Cole-Cole",
    "cole-davidson": "Cole-Davidson",
    "havriliak-negami": "Havriliak-Negami",
    "fractional-zener": "Fractional Zener",
    "log-normal": "Gaussian (log-normal)",
}

# fields each model reads; everything else is ignored
_FIELDS = {
    "maxwell": ("g_inf", "g", "tau"),
    "sls": ("g_inf", "g", "tau"),
    "power-law": ("g0", "tau0", "beta_exp"),
    "cole-cole": ("g_inf", "delta_g", "tau", "alpha"),
    "cole-davidson": ("g_inf", "delta_g", "tau", "beta_exp"),
    "havriliak-negami": ("g_inf", "delta_g", "tau", "alpha", "beta_exp"),
    "fractional-zener": ("g_e", "tau", "alpha", "delta_zener"),
    "log-normal": ("g_inf", "delta_g", "mu", "sigma"),
}

KERNELS = {
    "maxwell": "maxwell",
    "sls": "debye",
    "power-law": "maxwell",
    "cole-cole": "maxwell",
    "cole-davidson": "debye",
    "havriliak-negami": "debye",
    "fractional-zener": "maxwell",
    "log-normal": "maxwell",
}


def canonical_name(name: str) -> str:
    key = name.strip().lower().replace("_", "-").replace(" ", "-")
    if key in _ALIASES:
        return _ALIASES[key]
    key = key.replace("-", "")
    if key in _ALIASES:
        return _ALIASES[key]
    raise InvalidSpec(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")


def model_fields(name: str) -> Tuple[str, ...]:
    """Parameter fields a model reads."""
    return _FIELDS[canonical_name(name)]


@dataclass(frozen=True)
class ModelSpec:
    """A named model and its parameters.

    Only the fields the model reads are validated.  ``alpha``, ``beta_exp``
    and ``delta_zener`` keep exact fractions when given as ``"p/q"``
    strings, since the lattice analysis is Diophantine.
    """

    name: str
    g_inf: float = 0.0
    delta_g: float = 1.0
    g: float = 1.0
    tau: float = 1.0
    alpha: Optional[Scalar] = None
    beta_exp: Optional[Scalar] = None
    delta_zener: Optional[Scalar] = None
    g_e: float = 1.0
    mu: float = 0.0
    sigma: float = 1.0
    g0: float = 1.0
    tau0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "name", canonical_name(self.name))
        for f in ("alpha", "beta_exp", "delta_zener"):
            v = getattr(self, f)
            if v is not None:
                try:
                    object.__setattr__(self, f, parse_number(v))
                except (TypeError, ValueError) as exc:
                    raise InvalidSpec(f"{f}: {exc}") from exc
        for f in ("g_inf", "delta_g", "g", "tau", "g_e", "mu", "sigma", "g0", "tau0"):
            v = getattr(self, f)
            try:
                v = float(parse_number(v)) if isinstance(v, str) else float(v)
            except (TypeError, ValueError) as exc:
                raise InvalidSpec(f"{f}: {exc}") from exc
            object.__setattr__(self, f, v)
        self._validate()

    def _validate(self):
        need = _FIELDS[self.name]

        def check(name, ok, msg):
            if name in need and not ok:
                raise InvalidSpec(f"{self.name}: {name} {msg}")

        for f in need:
            v = getattr(self, f)
            if v is None:
                raise InvalidSpec(f"{self.name}: parameter {f} is required")
            if not math.isfinite(to_float(v)):
                raise InvalidSpec(f"{self.name}: parameter {f} must be finite")
        check("g_inf", self.g_inf >= 0, "must be >= 0")
        check("delta_g", self.delta_g > 0, "must be > 0")
        check("g", self.g > 0, "must be > 0")
        check("tau", self.tau > 0, "must be > 0")
        check("g_e", self.g_e > 0, "must be > 0")
        check("sigma", self.sigma > 0, "must be > 0")
        check("tau0", self.tau0 > 0, "must be > 0")
        check("g0", self.g0 > 0, "must be > 0")
        if "alpha" in need:
            check("alpha", 0 < to_float(self.alpha) <= 1, "must lie in (0, 1]")
        if "beta_exp" in need:
            check("beta_exp", 0 < to_float(self.beta_exp) <= 1, "must lie in (0, 1]")
            if self.name == "power-law":
                check("beta_exp", to_float(self.beta_exp) < 1, "must lie in (0, 1)")
        if "delta_zener" in need:
            check("delta_zener", 0 < to_float(self.delta_zener) < 1, "must lie in (0, 1)")

    @property
    def fields(self) -> Tuple[str, ...]:
        return _FIELDS[self.name]

    @property
    def kernel(self) -> str:
        return KERNELS[self.name]

    @property
    def a(self) -> float:
        return to_float(self.alpha)

    @property
    def b(self) -> float:
        return to_float(self.beta_exp)

    def to_json(self):
        out = {"name": self.name}
        for f in self.fields:
            v = getattr(self, f)
            out[f] = number_to_json(v) if isinstance(v, (Fraction, Irrational)) else v
        return out

    @classmethod
    def from_json(cls, obj) -> "ModelSpec":
        if not isinstance(obj, dict) or "name" not in obj:
            raise InvalidSpec("model spec must be an object with a 'name'")
        kwargs = {}
        for key, val in obj.items():
            if key == "name":
                continue
            if key == "beta":
                key = "beta_exp"
            if key == "delta":
                key = "delta_zener"
            if key not in cls.__dataclass_fields__:
                raise InvalidSpec(f"unknown model field {key!r}")
            if key in ("alpha", "beta_exp", "delta_zener"):
                try:
                    val = number_from_json(val)
                except (TypeError, ValueError) as exc:
                    raise InvalidSpec(f"{key}: {exc}") from exc
            kwargs[key] = val
        return cls(obj["name"], **kwargs)


def _ipow(a: float, log_omega_tau):
    # principal (i w tau)^a = exp(a (ln(w tau) + i pi/2))
    return np.exp(a * (log_omega_tau + 0.5j * math.pi))


def modulus(spec: ModelSpec, omega):
    """Complex modulus ``G*(omega)`` from the closed form of the model.

    Vectorised over ``omega``.  Fractional powers use the principal branch
    ``(i w tau)^a = exp(a (ln(w tau) + i pi/2))``.

    Raises
    ------
    UnsupportedModel
        For the log-normal model, which has no closed form.
    """
    return baseline(spec) + viscoelastic_part(spec, omega)


def viscoelastic_part(spec: ModelSpec, omega):
    """``G*(omega) - baseline`` evaluated without cancellation."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega must be positive")
    name = spec.name
    if name == "log-normal":
        raise UnsupportedModel("the log-normal model has no closed-form modulus")
    with np.errstate(over="ignore", under="ignore"):
        if name == "power-law":
            out = spec.g0 * _ipow(spec.b, np.log(w * spec.tau0))
        else:
            lwt = np.log(w * spec.tau)
            x = 1j * w * spec.tau
            if name == "maxwell":
                out = spec.g * x / (1.0 + x)
            elif name == "sls":
                out = spec.g / (1.0 + x)
            elif name == "cole-cole":
                out = spec.delta_g / (1.0 + _ipow(-spec.a, lwt))
            elif name == "cole-davidson":
                out = spec.delta_g * (1.0 + x) ** (-spec.b)
            elif name == "havriliak-negami":
                out = spec.delta_g * (1.0 + _ipow(spec.a, lwt)) ** (-spec.b)
            else:
                # G_e (1 + x^a)/(1 + d x^a) - G_e = G_e (1 - d) x^a/(1 + d x^a)
                xa = _ipow(spec.a, lwt)
                d = to_float(spec.delta_zener)
                out = spec.g_e * (1.0 - d) * xa / (1.0 + d * xa)
    return out if np.ndim(omega) else complex(out)


def baseline(spec: ModelSpec) -> float:
    """Constant part ``G*`` tends to where the kernel vanishes."""
    if spec.name == "fractional-zener":
        return spec.g_e
    if spec.name == "power-law":
        return 0.0
    return spec.g_inf


def relaxation_strength(spec: ModelSpec) -> Optional[float]:
    """Total spectral mass ``int H dtau/tau``; ``None`` without a sum rule."""
    if spec.name in ("maxwell", "sls"):
        return spec.g
    if spec.name == "power-law":
        return None
    if spec.name == "fractional-zener":
        d = to_float(spec.delta_zener)
        return spec.g_e * (1.0 - d) / d
    return spec.delta_g


def zener_cole_cole(spec: ModelSpec) -> Tuple[float, float]:
    """Cole-Cole strength and time the fractional Zener model reduces to.

    ``G* - G_e = G_e (1 - delta)/delta / (1 + (i w tau delta^(1/alpha))^(-alpha))``.
    """
    d = to_float(spec.delta_zener)
    return spec.g_e * (1.0 - d) / d, spec.tau * d ** (1.0 / spec.a)


# --------------------------------------------------------------------------
# spectra
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumProvider:
    """A relaxation spectrum.

    ``AtomList`` carries ``atoms`` ``(g_k, tau_k)``.  ``ContinuousDensity``
    carries ``density(tau)`` with respect to ``dtau/tau``.  When the support
    ends at a finite ``edge`` with an integrable singularity,
    ``edge_density(d)`` gives the density at ``tau = edge e^{-d}`` so that
    quadrature can approach the edge without cancellation.  ``center``
    is the natural time scale; ``mass`` the sum-rule target.
    """

    kind: str
    atoms: Tuple[Tuple[float, float], ...] = ()
    density: Optional[Callable] = None
    kernel: str = "maxwell"
    baseline: float = 0.0
    center: float = 1.0
    edge: Optional[float] = None
    edge_density: Optional[Callable] = None
    mass: Optional[float] = None
    distributional: bool = False
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("AtomList", "ContinuousDensity"):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        if any(g < 0 or t <= 0 for g, t in self.atoms):
            raise ValueError("atom weights must be >= 0 and times > 0")

    def __call__(self, tau):
        if self.density is None:
            raise TypeError("an atom list has no density")
        return self.density(tau)

    @property
    def singular_points(self) -> Tuple[float, ...]:
        return () if self.edge is None else (self.edge,)


def _cole_cole_density(dg: float, alpha: float, tau_m: float):
    s, c = math.sin(math.pi * alpha), math.cos(math.pi * alpha)

    def h(tau):
        x = alpha * np.log(np.asarray(tau, dtype=float) / tau_m)
        with np.errstate(over="ignore"):
            # cosh overflow gives 0, the correct limit
            return dg / (2 * math.pi) * s / (np.cosh(x) + c)

    return h


def _cole_davidson_edge(dg: float, beta: float):
    k = dg / math.pi * math.sin(math.pi * beta)

    def h_edge(d):
        with np.errstate(divide="ignore", over="ignore"):
            return k * np.expm1(np.asarray(d, dtype=float)) ** (-beta)

    return h_edge


def _havriliak_negami_density(dg: float, alpha: float, beta: float, tau_m: float):
    sa, ca = math.sin(math.pi * alpha), math.cos(math.pi * alpha)

    def h(tau):
        lu = np.log(tau_m / np.asarray(tau, dtype=float))
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            w = np.exp(alpha * lu)
            re, im = 1.0 + w * ca, w * sa
            # r^(-beta) with r = |1 + w e^{i pi alpha}|, computed in logs
            log_r = np.where(
                w > 1e150, np.log(w) + 0.5 * np.log1p(2 * ca / w + 1 / (w * w)), 0.5 * np.log(re * re + im * im)
            )
            theta = np.arctan2(im, re)
            out = dg / math.pi * np.exp(-beta * log_r) * np.sin(beta * theta)
        return np.where(np.isfinite(out), out, 0.0)

    return h


def _log_normal_density(dg: float, mu: float, sigma: float):
    k = dg / math.sqrt(2 * math.pi * sigma * sigma)

    def h(tau):
        x = np.log(np.asarray(tau, dtype=float)) - mu
        return k * np.exp(-x * x / (2 * sigma * sigma))

    return h


def _power_law_density(g0: float, tau0: float, beta: float):
    c = g0 * tau0**beta * math.sin(math.pi * beta) / math.pi

    def h(tau):
        with np.errstate(over="ignore", divide="ignore"):
            return c * np.asarray(tau, dtype=float) ** (-beta)

    return h


def spectrum(spec: ModelSpec) -> SpectrumProvider:
    """Relaxation spectrum of a model.

    Maxwell and SLS are single atoms.  Fractional models are obtained by
    Stieltjes inversion of the closed-form modulus; the log-normal density
    is Gaussian in ``ln tau``; the power law gets ``C tau^(-beta)`` with
    ``C = G0 tau0^beta sin(pi beta)/pi``, which reproduces ``G0 (i w
    tau0)^beta`` exactly but has no finite total mass.  Degenerate
    parameters whose spectra collapse to atoms (``alpha = 1`` Cole-Cole and
    Zener, ``beta = 1`` Cole-Davidson, ``alpha = beta = 1``
    Havriliak-Negami) return atom lists.
    """
    name, kern, base = spec.name, spec.kernel, baseline(spec)
    mass = relaxation_strength(spec)

    def atoms(g, tau):
        return SpectrumProvider("AtomList", ((g, tau),), kernel=kern, baseline=base,
                                center=tau, mass=g, label=name)

    if name in ("maxwell", "sls"):
        return atoms(spec.g, spec.tau)
    if name == "log-normal":
        return SpectrumProvider(
            "ContinuousDensity", density=_log_normal_density(spec.delta_g, spec.mu, spec.sigma),
            kernel=kern, baseline=base, center=math.exp(spec.mu), mass=mass, label=name,
        )
    if name == "power-law":
        return SpectrumProvider(
            "ContinuousDensity", density=_power_law_density(spec.g0, spec.tau0, spec.b),
            kernel=kern, baseline=base, center=spec.tau0, mass=None,
            distributional=True, label=name,
        )
    if name in ("cole-cole", "fractional-zener"):
        if name == "cole-cole":
            dg, tm = spec.delta_g, spec.tau
        else:
            dg, tm = zener_cole_cole(spec)
        if spec.a == 1:
            return atoms(dg, tm)
        return SpectrumProvider(
            "ContinuousDensity", density=_cole_cole_density(dg, spec.a, tm),
            kernel=kern, baseline=base, center=tm, mass=mass, label=name,
        )
    if name == "cole-davidson" or (name == "havriliak-negami" and spec.a == 1):
        beta, tm = spec.b, spec.tau
        if beta == 1:
            return atoms(spec.delta_g, tm)
        edge = _cole_davidson_edge(spec.delta_g, beta)

        def h(tau):
            d = np.log(tm / np.asarray(tau, dtype=float))
            with np.errstate(invalid="ignore"):
                return np.where(d > 0, edge(np.where(d > 0, d, 1.0)), 0.0)

        return SpectrumProvider(
            "ContinuousDensity", density=h, kernel=kern, baseline=base, center=tm,
            edge=tm, edge_density=edge, mass=mass, label=name,
        )
    # havriliak-negami, alpha < 1
    return SpectrumProvider(
        "ContinuousDensity",
        density=_havriliak_negami_density(spec.delta_g, spec.a, spec.b, spec.tau),
        kernel=kern, baseline=base, center=spec.tau, mass=mass, label=name,
    )


def _kernel_values(kernel: str, x):
    if kernel == "maxwell":
        return 1j * x / (1.0 + 1j * x)
    return 1.0 / (1.0 + 1j * x)


def forward_modulus(
    provider: SpectrumProvider,
    omega,
    g_inf: Optional[float] = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
):
    """``G_inf + int K(omega tau) H(tau) dtau/tau`` for a spectrum.

    Atom lists give the exact finite sum.  Densities are integrated in
    ``ln tau`` by double-exponential quadrature (sinh-sinh around
    ``provider.center``, or exp-sinh from a singular support edge).
    ``g_inf`` defaults to the provider baseline.

    Raises
    ------
    NonConvergent
        If the quadrature does not reach ``spec.tolerance``.
    """
    base = provider.baseline if g_inf is None else g_inf
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if provider.kind == "AtomList":
        if provider.atoms:
            g, tau = np.array(provider.atoms, dtype=float).T
            sums = _kernels.maxwell_sum(g, tau, w) if provider.kernel == "maxwell" else _kernels.debye_sum(g, tau, w)
        else:
            sums = np.zeros(w.size, dtype=complex)
        out = base + sums
    else:
        tol = max(spec.tolerance, 1e-14)
        out = np.empty(w.size, dtype=complex)
        for i, wi in enumerate(w):
            out[i] = base + _spectral_integral(provider, wi, tol)
    return out if np.ndim(omega) else complex(out[0])


def _spectral_integral(p: SpectrumProvider, omega: float, tol: float) -> complex:
    if p.edge is not None:
        edge = p.edge
        return de_integrate(
            lambda d: _kernel_values(p.kernel, omega * edge * np.exp(-d)) * p.edge_density(d),
            0.0, math.inf, tol=tol,
        )
    lc = math.log(p.center)
    return de_integrate(
        lambda x: _kernel_values(p.kernel, omega * np.exp(lc + x)) * p.density(np.exp(lc + x)),
        -math.inf, math.inf, tol=tol,
    )


# --------------------------------------------------------------------------
# Mellin side
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TrialStateMeta:
    """Trial-state factorisation ``A(s) * Gamma(alpha s + beta) * absorbed``.

    ``dominant`` is the Gamma factor whose lattice is tested for alignment
    and ``delta_G = 1/|alpha|`` its spacing.  ``absorbed`` lists factors
    whose poles all sit on integers and so merge with the kernel poles.
    ``exact`` says whether the product equals the Mellin transform of
    ``G* - baseline`` identically or only reproduces its structure.
    """

    model: str
    kernel: str
    modulation: MellinSymbol
    dominant: Optional[GammaFactor] = None
    absorbed: Tuple[GammaFactor, ...] = ()
    delta_G: Optional[Scalar] = None
    exact: bool = True
    distributional: bool = False
    note: str = ""

    @property
    def gamma_scale(self) -> Optional[Scalar]:
        return None if self.dominant is None else self.dominant.scale

    @property
    def gamma_shift(self) -> Optional[Scalar]:
        return None if self.dominant is None else self.dominant.shift

    @property
    def symbol(self) -> MellinSymbol:
        """The full product ``A(s) * dominant * absorbed``."""
        num = ((self.dominant,) if self.dominant else ()) + self.absorbed
        return self.modulation * MellinSymbol(numerator=num)

    @property
    def entire(self) -> bool:
        return self.dominant is None and not self.symbol.has_gamma and not self.distributional

    def to_json(self):
        return {
            "model": self.model,
            "kernel": self.kernel,
            "modulation": self.modulation.to_json(),
            "dominant": None if self.dominant is None else self.dominant.to_json(),
            "absorbed": [f.to_json() for f in self.absorbed],
            "delta_G": None if self.delta_G is None else number_to_json(self.delta_G),
            "exact": self.exact,
            "distributional": self.distributional,
        }


def _exact_or_float(x) -> Scalar:
    if isinstance(x, (Fraction, Irrational)):
        return x
    return float(x)


def _one_over(x: Scalar) -> Scalar:
    if isinstance(x, Fraction):
        return 1 / x
    if isinstance(x, Irrational):
        return x.reciprocal()
    return 1.0 / float(x)


def _rotation_poly(tau: float) -> Tuple[complex, ...]:
    # tau^(-s) e^{-i pi s/2} = exp(s (-ln tau - i pi/2))
    return (0.0, complex(-math.log(tau), -0.5 * math.pi))


def trial_state(spec: ModelSpec) -> TrialStateMeta:
    """Trial-state factorisation of the model's Mellin symbol.

    The Mellin transform of ``G* - baseline`` in ``omega`` is

    * Maxwell / SLS: ``-+ g tau^-s e^{-i pi s/2} Gamma(s) Gamma(1-s)``;
    * Cole-Davidson: ``dG tau^-s e^{-i pi s/2} Gamma(s) Gamma(beta-s)/Gamma(beta)``;
    * Havriliak-Negami: same with ``Gamma(s/alpha) Gamma(beta - s/alpha)/(alpha Gamma(beta))``;
    * fractional Zener (and Cole-Cole with ``tau' = tau``):
      ``dG' tau'^-s e^{-i pi s/2} Gamma(1 + s/alpha) Gamma(-s/alpha)/alpha``.

    Cole-Cole is recorded in the structural form ``Gamma(s) Gamma(1-s) /
    Gamma(1 - alpha s)`` with unit spacing, as in the classification table;
    ``exact`` is False there.  Log-normal has the entire symbol
    ``dG exp(mu s + sigma^2 s^2/2)``; the power law is distributional.
    """
    name, kern = spec.name, spec.kernel
    one = Fraction(1)
    if name == "power-law":
        return TrialStateMeta(
            name, kern, MellinSymbol(prefactor=spec.g0 * spec.tau0**spec.b),
            distributional=True,
            note=f"Mellin image concentrated at s = -{spec.beta_exp} (distributional)",
        )
    if name == "log-normal":
        sym = MellinSymbol(exp_poly=(0.0, spec.mu, 0.5 * spec.sigma**2), prefactor=spec.delta_g)
        return TrialStateMeta(name, kern, sym, note="entire symbol exp(mu s + sigma^2 s^2/2)")
    if name in ("maxwell", "sls"):
        sign = -1.0 if name == "maxwell" else 1.0
        mod = MellinSymbol(exp_poly=_rotation_poly(spec.tau), prefactor=sign * spec.g)
        return TrialStateMeta(
            name, kern, mod, GammaFactor(one, Fraction(0)), (GammaFactor(-one, one),), one,
        )
    if name == "cole-cole":
        alpha = _exact_or_float(spec.alpha)
        den = () if alpha == 1 else (GammaFactor(-alpha, one),)
        mod = MellinSymbol(denominator=den, exp_poly=_rotation_poly(spec.tau), prefactor=-spec.delta_g)
        return TrialStateMeta(
            name, kern, mod, GammaFactor(one, Fraction(0)), (GammaFactor(-one, one),), one,
            exact=alpha == 1,
            note="structural factorisation Gamma(s) Gamma(1-s)/Gamma(1 - alpha s)",
        )
    if name == "cole-davidson" or (name == "havriliak-negami" and spec.alpha == 1):
        beta = _exact_or_float(spec.beta_exp)
        mod = MellinSymbol(
            numerator=(GammaFactor(-one, beta),),
            exp_poly=_rotation_poly(spec.tau),
            prefactor=spec.delta_g / math.gamma(spec.b),
        )
        absorbed = ()
        if beta == 1:
            mod = MellinSymbol(exp_poly=mod.exp_poly, prefactor=mod.prefactor)
            absorbed = (GammaFactor(-one, one),)
        return TrialStateMeta(name, kern, mod, GammaFactor(one, Fraction(0)), absorbed, one)
    if name == "havriliak-negami":
        alpha = _exact_or_float(spec.alpha)
        beta = _exact_or_float(spec.beta_exp)
        inv = _one_over(alpha)
        mod = MellinSymbol(
            numerator=(GammaFactor(-inv, beta),),
            exp_poly=_rotation_poly(spec.tau),
            prefactor=spec.delta_g / (spec.a * math.gamma(spec.b)),
        )
        return TrialStateMeta(name, kern, mod, GammaFactor(inv, Fraction(0)), (), alpha)
    # fractional zener
    alpha = _exact_or_float(spec.alpha)
    dg, tp = zener_cole_cole(spec)
    inv = _one_over(alpha)
    mod = MellinSymbol(
        numerator=(GammaFactor(-inv, Fraction(0)),),
        exp_poly=_rotation_poly(tp),
        prefactor=dg / spec.a,
    )
    return TrialStateMeta(
        name, kern, mod, GammaFactor(inv, one), (), alpha,
        note="poles at s = -alpha (1 + m) and s = alpha m",
    )


def cole_cole_symbol(delta_g: float, alpha: Scalar, tau: float) -> MellinSymbol:
    """Exact Mellin symbol of ``dG/(1 + (i w tau)^-alpha)``, strip ``(-alpha, 0)``."""
    alpha = _exact_or_float(alpha)
    inv = _one_over(alpha)
    return MellinSymbol(
        numerator=(GammaFactor(-inv, Fraction(0)), GammaFactor(inv, Fraction(1))),
        exp_poly=_rotation_poly(tau),
        prefactor=delta_g / to_float(alpha),
    )


def convergence_strip(spec: ModelSpec) -> Tuple[float, float]:
    """Strip of convergence of the Mellin integral of ``G* - baseline``.

    Determined numerically from the log-slopes of ``|G* - baseline|`` at
    ``omega = 1e-12, 1e-11`` and ``1e11, 1e12``: if the viscoelastic part
    behaves like ``omega^p`` at 0 and ``omega^(-q)`` at infinity, the
    integral converges for ``-p < Re s < q``.  Slopes within 5e-3 of a
    fraction with denominator at most 100 are snapped to it (the far tails
    of slowly converging fractional models bias the raw slope slightly).
    """
    if spec.name == "log-normal":
        raise UnsupportedModel("the log-normal model has no closed-form modulus")
    w = np.array([1e-12, 1e-11, 1e11, 1e12]) / (spec.tau0 if spec.name == "power-law" else spec.tau)
    f = np.abs(viscoelastic_part(spec, w))
    p = math.log10(f[1] / f[0])
    q = -math.log10(f[3] / f[2])
    return _snap(-p), _snap(q)


def _snap(x: float) -> float:
    r = Fraction(x).limit_denominator(100)
    return float(r) if abs(float(r) - x) < 5e-3 else round(x, 6)


def mellin_of_modulus(spec: ModelSpec, s, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> complex:
    """Quadrature of ``int omega^(s-1) (G*(omega) - baseline) d omega``.

    Raises
    ------
    StripViolation
        If ``Re s`` is outside the numerically determined strip (the power
        law has an empty strip).
    NonConvergent
        If the quadrature fails.
    """
    lo, hi = convergence_strip(spec)
    if not lo < hi:
        raise StripViolation(f"{spec.name}: empty convergence strip ({lo}, {hi})")
    return mellin_quadrature(lambda w: viscoelastic_part(spec, w), s, quad, strip=(lo, hi))
