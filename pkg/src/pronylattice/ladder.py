"""Geometric Prony ladders for continuous relaxation spectra.

A ladder samples a density ``H`` (with respect to ``dtau/tau``) on the
geometric grid ``tau_k = tau0 q^k`` and gives each node the weight
``H(tau_k) ln q``.  The resulting finite Prony series converges to the
model modulus as ``q -> 1`` with the span of the grid growing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import DegenerateLadder, InvalidSpec, NegativeDensity, PoleEvaluation
from .models import ModelSpec, SpectrumProvider, forward_modulus, modulus, spectrum

DEFAULT_Q = 10.0**0.1
SUPPORT_FLOOR = 1e-12
PAD_DECADES = 1.0
# half-width of the scan used to locate the effective support, in decades
_SCAN_DECADES = 40.0
_SCAN_PER_DECADE = 50
MONOTONE_BAND = 0.10
# errors below this are rounding noise and never count as a regression
NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class LadderProvenance:
    tau0: float
    q: float
    n_half: int

    def __post_init__(self):
        if not (self.tau0 > 0 and math.isfinite(self.tau0)):
            raise InvalidSpec("tau0 must be a positive finite number")
        if not (self.q > 1 and math.isfinite(self.q)):
            raise InvalidSpec("q must be a finite number > 1")
        if int(self.n_half) != self.n_half or self.n_half < 0:
            raise InvalidSpec("n_half must be a non-negative integer")
        object.__setattr__(self, "n_half", int(self.n_half))

    def nodes(self) -> np.ndarray:
        k = np.arange(-self.n_half, self.n_half + 1, dtype=float)
        return self.tau0 * self.q**k


@dataclass(frozen=True)
class PronyLadder:
    """A finite Prony series ``g_inf + sum_k g_k K(omega tau_k)``.

    ``kernel`` is ``"maxwell"`` (``K = i x/(1 + i x)``) or ``"debye"``
    (``K = 1/(1 + i x)``) and follows the model the ladder came from.
    Modes are kept sorted by strictly increasing ``tau``.
    """

    g_inf: float
    modes: Tuple[Tuple[float, float], ...]
    provenance: Optional[LadderProvenance] = None
    kernel: str = "maxwell"

    def __post_init__(self):
        modes = tuple((float(g), float(t)) for g, t in self.modes)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "g_inf", float(self.g_inf))
        if not (self.g_inf >= 0 and math.isfinite(self.g_inf)):
            raise InvalidSpec("g_inf must be a finite number >= 0")
        if self.kernel not in ("maxwell", "debye"):
            raise InvalidSpec(f"unknown kernel {self.kernel!r}")
        for g, t in modes:
            if not (g >= 0 and math.isfinite(g)):
                raise InvalidSpec(f"mode weight {g} must be finite and >= 0")
            if not (t > 0 and math.isfinite(t)):
                raise InvalidSpec(f"mode time {t} must be finite and > 0")
        if any(b[1] <= a[1] for a, b in zip(modes, modes[1:])):
            raise InvalidSpec("mode times must be strictly increasing")

    @property
    def weights(self) -> np.ndarray:
        return np.array([g for g, _ in self.modes], dtype=float)

    @property
    def times(self) -> np.ndarray:
        return np.array([t for _, t in self.modes], dtype=float)

    @property
    def total_weight(self) -> float:
        return math.fsum(g for g, _ in self.modes)

    @property
    def truncation_estimate(self) -> float:
        """Sum of the two boundary weights, a proxy for the clipped tails."""
        if len(self.modes) == 0:
            return 0.0
        if len(self.modes) == 1:
            return self.modes[0][0]
        return self.modes[0][0] + self.modes[-1][0]

    def to_json(self) -> dict:
        out = {
            "g_inf": self.g_inf,
            "modes": [{"g": g, "tau": t} for g, t in self.modes],
            "kernel": self.kernel,
        }
        if self.provenance is not None:
            p = self.provenance
            out["provenance"] = {"tau0": p.tau0, "q": p.q, "n_half": p.n_half}
        return out

    @classmethod
    def from_json(cls, obj) -> "PronyLadder":
        if not isinstance(obj, dict):
            raise InvalidSpec("ladder must be a JSON object")
        try:
            modes = tuple((float(m["g"]), float(m["tau"])) for m in obj["modes"])
            prov = obj.get("provenance")
            if prov is not None:
                prov = LadderProvenance(float(prov["tau0"]), float(prov["q"]), prov["n_half"])
            return cls(float(obj.get("g_inf", 0.0)), modes, prov, obj.get("kernel", "maxwell"))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpec(f"malformed ladder: {exc!r}") from exc


def _merge_atoms(atoms) -> Tuple[Tuple[float, float], ...]:
    merged = {}
    for g, t in atoms:
        merged[float(t)] = merged.get(float(t), 0.0) + float(g)
    return tuple((g, t) for t, g in sorted(merged.items()))


def synthesize(
    provider: SpectrumProvider,
    tau0: float,
    q: float,
    n_half: int,
    g_inf: Optional[float] = None,
) -> PronyLadder:
    """Sample a spectrum on ``tau_k = tau0 q^k``, ``|k| <= n_half``.

    Weights are ``H(tau_k) ln q``.  An atom list is passed through
    unchanged (a finite Prony series is its own ladder) and the grid
    arguments are ignored.  ``g_inf`` defaults to the provider baseline.

    Raises
    ------
    NegativeDensity
        If the density is negative at a node.
    PoleEvaluation
        If the density is not finite at a node, e.g. a node placed on an
        integrable edge singularity.
    """
    base = provider.baseline if g_inf is None else g_inf
    if provider.kind == "AtomList":
        return PronyLadder(base, _merge_atoms(provider.atoms), None, provider.kernel)
    prov = LadderProvenance(float(tau0), float(q), n_half)
    tau = prov.nodes()
    with np.errstate(all="ignore"):
        h = np.asarray(provider(tau), dtype=float) * np.ones_like(tau)
    bad = ~np.isfinite(h)
    if bad.any():
        raise PoleEvaluation(f"density not finite at tau = {tau[bad][0]:.17g}")
    if (h < 0).any():
        i = int(np.argmax(h < 0))
        raise NegativeDensity(f"density is negative ({h[i]:.3g}) at tau = {tau[i]:.17g}")
    g = h * math.log(prov.q)
    return PronyLadder(base, tuple(zip(g.tolist(), tau.tolist())), prov, provider.kernel)


def n_half_for_span(q: float, span_decades: float) -> int:
    """Smallest ``n_half`` whose grid covers ``span_decades`` centred on ``tau0``."""
    if not q > 1:
        raise InvalidSpec("q must be > 1")
    if not span_decades >= 0:
        raise InvalidSpec("span must be >= 0")
    x = 0.5 * span_decades * math.log(10.0) / math.log(q)
    # absorb rounding so that exact ratios such as 8/0.2 do not round up
    return max(0, math.ceil(x - 1e-9))


def effective_support(provider: SpectrumProvider, floor: float = SUPPORT_FLOOR) -> Tuple[float, float]:
    """Interval of ``tau`` where ``H >= floor * max H`` on a log scan.

    The scan covers forty decades either side of the provider centre, so
    heavy-tailed densities are clipped there.
    """
    if provider.kind == "AtomList":
        t = [tau for _, tau in provider.atoms] or [provider.center]
        return min(t), max(t)
    n = int(2 * _SCAN_DECADES * _SCAN_PER_DECADE) + 1
    tau = provider.center * np.logspace(-_SCAN_DECADES, _SCAN_DECADES, n)
    with np.errstate(all="ignore"):
        h = np.asarray(provider(tau), dtype=float) * np.ones_like(tau)
    h = np.where(np.isfinite(h), h, 0.0)
    peak = h.max()
    if not peak > 0:
        return provider.center, provider.center
    idx = np.nonzero(h >= floor * peak)[0]
    return float(tau[idx[0]]), float(tau[idx[-1]])


def default_grid(provider: SpectrumProvider, q: float = DEFAULT_Q) -> LadderProvenance:
    """Grid centred on the provider's time scale covering its padded support.

    With a singular support edge the centre is moved half a step inside so
    that no node sits on the singularity.
    """
    lo, hi = effective_support(provider)
    lo, hi = lo * 10.0**-PAD_DECADES, hi * 10.0**PAD_DECADES
    tau0 = provider.center
    if provider.edge is not None:
        tau0 = provider.edge * q**-0.5
    half = max(math.log10(hi / tau0), math.log10(tau0 / lo), 0.0)
    return LadderProvenance(tau0, q, n_half_for_span(q, 2.0 * half))


def ladder_for_spec(
    spec: ModelSpec,
    q: Optional[float] = None,
    n_half: Optional[int] = None,
    tau0: Optional[float] = None,
    span_decades: Optional[float] = None,
) -> PronyLadder:
    """Ladder for a catalogue model with defaults filled in from its support."""
    provider = spectrum(spec)
    if provider.kind == "AtomList":
        return synthesize(provider, 1.0, DEFAULT_Q, 0)
    q = DEFAULT_Q if q is None else q
    grid = default_grid(provider, q)
    if tau0 is not None:
        grid = LadderProvenance(tau0, q, grid.n_half)
    if span_decades is not None:
        grid = LadderProvenance(grid.tau0, q, n_half_for_span(q, span_decades))
    if n_half is not None:
        grid = LadderProvenance(grid.tau0, q, n_half)
    return synthesize(provider, grid.tau0, grid.q, grid.n_half)


def eval_modulus(ladder: PronyLadder, omega):
    """``g_inf + sum_k g_k K(omega tau_k)``; vectorised over ``omega > 0``."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(~(w > 0)):
        raise ValueError("omega must be positive")
    if ladder.modes:
        g, tau = ladder.weights, ladder.times
        fn = _kernels.maxwell_sum if ladder.kernel == "maxwell" else _kernels.debye_sum
        out = ladder.g_inf + fn(g, tau, w)
    else:
        out = np.full(w.size, ladder.g_inf, dtype=complex)
    return out if np.ndim(omega) else complex(out[0])


def eval_time(ladder: PronyLadder, t):
    """``g_inf + sum_k g_k exp(-t/tau_k)``; vectorised over ``t >= 0``."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(ts >= 0)):
        raise ValueError("t must be >= 0")
    if ladder.modes:
        out = ladder.g_inf + _kernels.exp_sum(ladder.weights, ladder.times, ts)
    else:
        out = np.full(ts.size, ladder.g_inf)
    return out if np.ndim(t) else float(out[0])


def normalize_sum_rule(ladder: PronyLadder, target: float) -> PronyLadder:
    """Rescale the weights so that they sum to ``target``.

    The sum is formed with ``math.fsum``; the last rounding residue is
    pushed into the largest weight so the correctly rounded sum equals
    ``target`` exactly.

    Raises
    ------
    DegenerateLadder
        If the weights sum to zero.
    """
    if not (target > 0 and math.isfinite(target)):
        raise InvalidSpec("target must be a positive finite number")
    total = ladder.total_weight
    if total == 0:
        raise DegenerateLadder("cannot normalise a ladder whose weights sum to zero")
    g = [w * (target / total) for w, _ in ladder.modes]
    big = max(range(len(g)), key=g.__getitem__)
    for _ in range(4):
        err = target - math.fsum(g)
        if err == 0:
            break
        g[big] += err
    # adding err can overshoot by an ulp, or the sum can sit on a rounding
    # tie that one weight alone cannot leave; step weights one ulp at a time
    for i in sorted(range(len(g)), key=g.__getitem__, reverse=True):
        for _ in range(8):
            s = math.fsum(g)
            if s == target or g[i] == 0:
                break
            g[i] = max(0.0, math.nextafter(g[i], math.inf if s < target else -math.inf))
        if math.fsum(g) == target:
            break
    modes = tuple((w, t) for w, (_, t) in zip(g, ladder.modes))
    return PronyLadder(ladder.g_inf, modes, ladder.provenance, ladder.kernel)


@dataclass(frozen=True)
class ConvergenceReport:
    """Refinement history of a ladder against a modulus oracle.

    ``refinement_history`` holds ``(q, n_half, sup_rel_error)`` per schedule
    entry; ``per_point_errors`` and ``sup_rel_error`` describe the last one.
    """

    omega_grid: Tuple[float, ...]
    sup_rel_error: float
    per_point_errors: Tuple[float, ...]
    refinement_history: Tuple[Tuple[float, int, float], ...]
    truncation_estimates: Tuple[float, ...]
    monotone_within_band: bool
    strictly_decreasing: bool

    def to_json(self) -> dict:
        return {
            "omega_grid": list(self.omega_grid),
            "sup_rel_error": self.sup_rel_error,
            "per_point_errors": list(self.per_point_errors),
            "refinement_history": [
                {"q": q, "n_half": n, "sup_rel_error": e} for q, n, e in self.refinement_history
            ],
            "truncation_estimates": list(self.truncation_estimates),
            "monotone_within_band": self.monotone_within_band,
            "strictly_decreasing": self.strictly_decreasing,
        }


def _default_oracle(spec: ModelSpec) -> Callable:
    if spec.name == "log-normal":
        provider = spectrum(spec)
        return lambda w: forward_modulus(provider, w)
    return lambda w: modulus(spec, w)


def convergence_study(
    spec: ModelSpec,
    omega_grid: Sequence[float],
    schedule: Sequence[Tuple[float, int]],
    oracle: Optional[Callable] = None,
    tau0: Optional[float] = None,
) -> ConvergenceReport:
    """Synthesize a ladder per ``(q, n_half)`` entry and score it.

    The score is the sup over ``omega_grid`` of ``|G_N - G| / |G|`` where
    ``G`` comes from ``oracle`` (closed-form modulus by default, forward
    quadrature for the log-normal model).
    """
    if not schedule:
        raise InvalidSpec("schedule must not be empty")
    provider = spectrum(spec)
    if provider.kind != "ContinuousDensity":
        raise InvalidSpec(f"{spec.name} has no continuous density to discretise")
    w = np.asarray(omega_grid, dtype=float)
    exact = np.asarray((oracle or _default_oracle(spec))(w), dtype=complex)
    if tau0 is None:
        tau0 = provider.center if provider.edge is None else None
    history, trunc = [], []
    errs = np.zeros(0)
    for q, n_half in schedule:
        t0 = tau0 if tau0 is not None else provider.edge * q**-0.5
        lad = synthesize(provider, t0, q, n_half)
        errs = np.abs(eval_modulus(lad, w) - exact) / np.abs(exact)
        history.append((float(q), int(n_half), float(errs.max())))
        trunc.append(lad.truncation_estimate)
    sups = [e for _, _, e in history]
    band = all(b <= max(a * (1 + MONOTONE_BAND), NOISE_FLOOR) for a, b in zip(sups, sups[1:]))
    strict = all(b < a for a, b in zip(sups, sups[1:]))
    return ConvergenceReport(
        tuple(w.tolist()), sups[-1], tuple(errs.tolist()), tuple(history), tuple(trunc), band, strict,
    )
