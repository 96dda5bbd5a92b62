"""Decision procedure for finite Prony representability.

The pipeline takes the trial-state factorisation of a model's Mellin symbol
and asks, in order:

1. Is the symbol distributional (power law)?  Then it is not in the class.
2. Is it entire?  Then it must be the exponential of an affine polynomial.
3. Does the dominant pole lattice align with integer-spacing candidates,
   offsets included?
4. Do secondary Gamma factors couple the residue recurrence?

Surviving models are finite Prony series; their residues along the aligned
sublattice are sampled, turned into the implied spectral moments and fed to
Prony's method to recover the atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CoincidentPole, IncommensurateInput, PoleEvaluation, UnsupportedModel
from .exact import Irrational, Scalar, number_to_json, to_float
from .lattice import (
    AlignmentResult,
    CoincidenceReport,
    Progression,
    alignment_test,
    contained_in_integers,
    covers,
    detect_coincidences,
    intersect_progressions,
    intersect_with_integers,
)
from .mellin import (
    KERNEL_SIGN,
    MellinSymbol,
    PoleRecord,
    atoms_symbol,
    evaluate_symbol,
    kernel_mellin,
    kernel_residue,
    kernel_transform,
    residue_at,
)
from .models import (
    DISPLAY_NAMES,
    ModelSpec,
    SpectrumProvider,
    TrialStateMeta,
    forward_modulus,
    mellin_of_modulus,
    spectrum,
    trial_state,
)
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, mellin_quadrature

FINITE_PRONY = "FiniteProny"
TRANSCENDENTAL = "TranscendentalInQ"
NOT_IN_Q = "NotInQ"

RATIONAL_FINITE = "RationalFinite"
LATTICE_MISALIGNMENT = "LatticeMisalignment"
RESIDUE_COUPLING = "ResidueCoupling"
ENTIRE_NON_AFFINE = "EntireNonAffine"
DISTRIBUTIONAL = "DistributionalSpectrum"

CLASS_JSON = {FINITE_PRONY: "finite-prony", TRANSCENDENTAL: "transcendental", NOT_IN_Q: "not-in-q"}
REASON_JSON = {
    RATIONAL_FINITE: "rational-finite",
    LATTICE_MISALIGNMENT: "lattice-misalignment",
    RESIDUE_COUPLING: "residue-coupling",
    ENTIRE_NON_AFFINE: "entire-non-affine",
    DISTRIBUTIONAL: "distributional-spectrum",
}

# short obstruction labels as they appear in the classification tables
TABLE_REASON = {
    "maxwell": "Integer lattice; residues decouple",
    "sls": "Integer lattice; residues decouple",
    "power-law": "Continuous spectrum (no discrete poles)",
    "cole-cole": "Residue-compatibility fails (Γ(1−αs) factor)",
    "cole-davidson": "Residue-compatibility fails (Γ(β−s) coupling)",
    "havriliak-negami": "Δ_G ≠ 1 for α ≠ 1",
    "fractional-zener": "Δ_G ≠ 1 for α ≠ 1",
    "log-normal": "Entire Mellin symbol; residue condition fails",
}

DEFAULT_CANDIDATES = tuple(Progression(Fraction(1), Fraction(k)) for k in (0, 1, 2))
TRACE_LENGTH = 20


@dataclass(frozen=True)
class RecurrenceSample:
    n: int
    s_n: complex
    rho_n: complex
    coefficient: complex
    implied_residue: complex

    def to_json(self):
        return {
            "n": self.n,
            "s_n": _cjson(self.s_n),
            "rho_n": _cjson(self.rho_n),
            "coefficient": _cjson(self.coefficient),
            "implied_residue": _cjson(self.implied_residue),
        }


@dataclass(frozen=True)
class RecurrenceTrace:
    """Residues sampled along the aligned sublattice.

    ``implied_residue`` is the spectral moment forced by residue matching
    against the kernel, ``rho_n / (sign * Res K(s_n))``; ``recovered_atoms``
    are the ``(g, tau)`` pairs Prony's method extracts from those moments.
    """

    sublattice: Progression
    samples: Tuple[RecurrenceSample, ...]
    recovered_atoms: Tuple[Tuple[float, float], ...] = ()

    def to_json(self):
        return {
            "sublattice": self.sublattice.to_json(),
            "samples": [s.to_json() for s in self.samples],
            "recovered_atoms": [{"g": g, "tau": t} for g, t in self.recovered_atoms],
        }


@dataclass(frozen=True)
class LogNormalSymbolCheck:
    order_estimate: float
    affine: bool


@dataclass(frozen=True)
class Verdict:
    verdict_class: str
    reason: str
    delta_G: Optional[Scalar]
    alignment: Optional[AlignmentResult]
    coincidences: Tuple[CoincidenceReport, ...]
    recurrence: Optional[RecurrenceTrace]
    narrative: str
    model: str = ""
    certification: str = "exact"
    warnings: Tuple[str, ...] = ()
    coupling_detail: str = ""

    def __post_init__(self):
        if self.verdict_class == FINITE_PRONY:
            assert self.reason == RATIONAL_FINITE
            assert self.alignment is None or self.alignment.satisfiable
        if self.verdict_class == NOT_IN_Q:
            assert self.reason == DISTRIBUTIONAL

    @property
    def in_p(self) -> bool:
        return self.verdict_class == FINITE_PRONY

    def to_json(self, with_trace: bool = True):
        out = {
            "model": self.model,
            "class": CLASS_JSON[self.verdict_class],
            "reason": REASON_JSON[self.reason],
            "delta_G": None if self.delta_G is None else number_to_json(self.delta_G),
            "alignment": None if self.alignment is None else self.alignment.to_json(),
            "coincidences": [c.to_json() for c in self.coincidences],
            "narrative": self.narrative,
            "certification": self.certification,
            "warnings": list(self.warnings),
        }
        if self.coupling_detail:
            out["coupling"] = self.coupling_detail
        if with_trace and self.recurrence is not None:
            out["recurrence"] = self.recurrence.to_json()
        return out


def _cjson(z) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


# --------------------------------------------------------------------------
# residue recurrence
# --------------------------------------------------------------------------


def _lattice_point(meta: TrialStateMeta, n: int, offset) -> complex:
    a, b = to_float(meta.gamma_scale), to_float(meta.gamma_shift)
    return -(b + n) / a - complex(offset)


def recurrence_coefficient(meta: TrialStateMeta, n: int, offset=0.5) -> complex:
    """Ratio ``C_n = R_{n+1}/R_n`` of successive spectral residues.

    With ``s_n = -(beta + n)/alpha - offset`` on the (shifted) dominant
    lattice,

        C_n = A(s_{n+1})/A(s_n) * (-1/(n+1)) * K(s_n)/K(s_{n+1}),

    where ``A`` is the modulation and ``K`` the canonical kernel symbol.

    Raises
    ------
    CoincidentPole
        If ``s_n`` or ``s_{n+1}`` is an integer, where the kernel has a pole.
    """
    if meta.dominant is None:
        raise UnsupportedModel("trial state has no dominant Gamma factor")
    s0 = _lattice_point(meta, n, offset)
    s1 = _lattice_point(meta, n + 1, offset)
    for s in (s0, s1):
        if abs(s.imag) < 1e-14 and abs(s.real - round(s.real)) < 1e-14:
            raise CoincidentPole(f"s = {s} meets a kernel pole; use a non-zero offset")
    a0 = evaluate_symbol(meta.modulation, s0)
    a1 = evaluate_symbol(meta.modulation, s1)
    return a1 / a0 * (-1.0 / (n + 1)) * kernel_mellin(s0) / kernel_mellin(s1)


def _sublattice_progression(res) -> Progression:
    # integer points start + direction * step * t as a progression in t
    scale = Fraction(-res.direction) / res.step_in_s
    return Progression(scale, -Fraction(res.start) * scale)


def _implied_moments(meta: TrialStateMeta, sub: Progression, count: int):
    sym = meta.symbol
    sign = KERNEL_SIGN[meta.kernel]
    rows = []
    for n in range(count):
        s = sub.member(n)
        rho = residue_at(sym, PoleRecord(s, 0, n, None))
        implied = rho / (sign * kernel_residue(int(s)))
        rows.append((s, rho, implied))
    return rows


def recurrence_trace(meta: TrialStateMeta, length: int = TRACE_LENGTH) -> RecurrenceTrace:
    """Sample residues on ``Lambda_G ∩ Z`` and recover the spectral atoms.

    At integer points the kernel symbol is singular, so the ratio of kernel
    values in the recurrence is replaced by its limit, the ratio of kernel
    residues.
    """
    res = intersect_with_integers(meta.dominant.progression())
    if res.kind != "SubProgression":
        raise UnsupportedModel("dominant lattice does not meet the integers in a progression")
    sub = _sublattice_progression(res)
    rows = _implied_moments(meta, sub, length + 1)
    samples = []
    for n in range(length):
        s0, rho0, imp0 = rows[n]
        s1 = rows[n + 1][0]
        a0 = evaluate_symbol(meta.modulation, to_float(s0))
        a1 = evaluate_symbol(meta.modulation, to_float(s1))
        coef = a1 / a0 * (-1.0 / (n + 1)) * kernel_residue(int(s0)) / kernel_residue(int(s1))
        samples.append(RecurrenceSample(n, complex(to_float(s0)), rho0, coef, imp0))
    atoms = prony_atoms(
        [imp for _, _, imp in rows[:length]],
        start=to_float(rows[0][0]),
        step=float(-res.direction * res.step_in_s),
    )
    return RecurrenceTrace(sub, tuple(samples), tuple(atoms))


def _hankel_rank(values, rtol: float = 1e-9) -> Tuple[int, np.ndarray, float]:
    v = np.asarray(values, dtype=complex)
    c = abs(v[1] / v[0]) if v[0] != 0 and v[1] != 0 else 1.0
    w = v / c ** np.arange(v.size)
    n = v.size // 2
    H = np.array([[w[i + j] for j in range(n)] for i in range(n)])
    sv = np.linalg.svd(H, compute_uv=False)
    if sv[0] == 0:
        return 0, w, c
    return int(np.sum(sv > rtol * sv[0])), w, c


def prony_atoms(moments, start: float = 0.0, step: float = 1.0, rtol: float = 1e-9):
    """Atoms ``(g_k, tau_k)`` with ``moments[n] = sum g_k tau_k^(step n - start)``.

    Prony's method: the numerical rank of the Hankel matrix fixes the atom
    count, linear prediction gives the nodes ``z_k = tau_k^step`` and a
    Vandermonde least-squares solve the weights.
    """
    r, w, c = _hankel_rank(moments, rtol)
    if r == 0:
        return []
    A = np.array([[w[k + j] for j in range(r)] for k in range(w.size - r)])
    coeffs = np.linalg.lstsq(A, -w[r:], rcond=None)[0]
    z = np.roots(np.r_[1.0, coeffs[::-1]])
    V = np.vander(z, w.size, increasing=True).T
    weights = np.linalg.lstsq(V, w, rcond=None)[0]
    out = []
    for zk, gk in zip(z * c, weights):
        tau = abs(zk) ** (1.0 / step)
        out.append((float((gk * tau**start).real), float(tau)))
    return sorted(out, key=lambda a: a[1])


# --------------------------------------------------------------------------
# structural checks
# --------------------------------------------------------------------------


def detect_coupling(meta: TrialStateMeta) -> Tuple[bool, str]:
    """Whether secondary Gamma factors couple the residue recurrence.

    Structural test on the modulation after cancelling identical
    numerator/denominator pairs.  A numerator factor couples when its lattice
    is not inside the integers: it then either meets the aligned sublattice
    or adds a second lattice whose residues constrain the same moments.  A
    denominator factor with a non-integer zero lattice reweights every
    residue.  Where the aligned sublattice exists, 20 sampled moments are
    also tested for a finite-rank Hankel structure.
    """
    if meta.dominant is None:
        return False, "no Gamma lattice"
    sym = meta.modulation.cancelled()
    reasons = []
    sub = intersect_with_integers(meta.dominant.progression())
    sub_lat = _sublattice_progression(sub) if sub.kind == "SubProgression" else None
    for f in sym.numerator:
        lat = f.progression()
        if contained_in_integers(lat):
            continue
        hit = intersect_progressions(lat, sub_lat) if sub_lat is not None else None
        label = _gamma_label(f)
        if hit is not None and not hit.empty:
            reasons.append(f"{label} lattice meets the aligned sublattice at s = {hit.points[0]}")
        else:
            first, step = lat.member(0), lat.spacing
            sign = "+" if lat.direction > 0 else "−"
            reasons.append(f"{label} lattice at s = {first}{sign}{'' if step == 1 else step}m couples")
    for f in sym.denominator:
        if not contained_in_integers(f.progression()):
            reasons.append(f"{_gamma_label(f)} denominator modulates residues")
    rank_note = ""
    if sub_lat is not None:
        try:
            rows = _implied_moments(meta, sub_lat, TRACE_LENGTH)
            rank, _, _ = _hankel_rank([imp for _, _, imp in rows])
            rank_note = f"sampled moments: Hankel rank {rank} of {TRACE_LENGTH // 2}"
            if rank == TRACE_LENGTH // 2:
                reasons.append("sampled moments admit no finite exponential sum")
        except (CoincidentPole, PoleEvaluation, OverflowError, ZeroDivisionError) as exc:
            rank_note = f"residue sampling failed: {exc}"
    if not reasons:
        detail = "no secondary Gamma factors" if not sym.has_gamma else "secondary factors lie on the integer lattice"
        return False, "; ".join(x for x in (detail, rank_note) if x)
    return True, "; ".join(reasons + ([rank_note] if rank_note else []))


def _gamma_label(f) -> str:
    a, b = f.scale, f.shift
    if to_float(a) > 0:
        return f"Γ({'' if a == 1 else a}s" + ("" if b == 0 else f"+{b}") + ")"
    mag = -a if not isinstance(a, Irrational) else Irrational(-a.value, a.label.lstrip("-"))
    return "Γ(" + ("" if b == 0 else f"{b}") + f"−{'' if mag == 1 else mag}s)"


def check_entire_symbol(sym: MellinSymbol) -> LogNormalSymbolCheck:
    """Order of an entire symbol and whether it is ``exp(affine)``.

    A polynomial ``P`` of degree ``d`` gives ``exp(P)`` of order ``d``; a
    finite atom sum has order at most 1.
    """
    if sym.has_gamma:
        raise ValueError("symbol has Gamma factors")
    d = sym.degree
    if sym.atom_terms and any(lam != 0 for _, lam in sym.atom_terms):
        order = max(d, 1)
    else:
        order = d
    return LogNormalSymbolCheck(float(order), d <= 1)


# --------------------------------------------------------------------------
# classifier
# --------------------------------------------------------------------------


def classify(spec: ModelSpec, candidates: Sequence[Progression] = DEFAULT_CANDIDATES) -> Verdict:
    """Classify a model as a finite Prony series, transcendental, or outside the class."""
    meta = trial_state(spec)
    name = spec.name
    title = DISPLAY_NAMES[name]

    def narrative(text: str) -> str:
        return f"{title}: {text}"

    if meta.distributional:
        return Verdict(
            NOT_IN_Q, DISTRIBUTIONAL, None, None, (), None,
            narrative(f"{TABLE_REASON['power-law']}; {meta.note}"), name,
        )
    if meta.dominant is None:
        check = check_entire_symbol(meta.modulation)
        if not check.affine:
            return Verdict(
                TRANSCENDENTAL, ENTIRE_NON_AFFINE, None, None, (), None,
                narrative(f"{TABLE_REASON['log-normal']} (order {check.order_estimate:g})"), name,
            )
        return Verdict(
            FINITE_PRONY, RATIONAL_FINITE, None, None, (), None,
            narrative("entire symbol of order <= 1: a single exponential atom"), name,
        )

    delta = meta.delta_G
    lat_G = meta.dominant.progression()
    exact = isinstance(delta, Fraction)
    certification = "exact" if exact else "numerical"
    try:
        alignment = alignment_test(delta, [c.spacing for c in candidates])
    except IncommensurateInput:
        alignment = AlignmentResult(False, None, "numerical")
    if not exact:
        alignment = AlignmentResult(alignment.satisfiable, alignment.witness, "numerical")
    coincidences = tuple(detect_coincidences(lat_G, candidates)) if lat_G.exact else ()
    warnings = ()
    if any(not c.forced for c in coincidences):
        warnings = ("CoalescentWarning: lattice meets kernel poles off the forced alignment; "
                    "logarithmic kernels arise at the shared points",)
    reason_label = TABLE_REASON.get(name, "")

    def verdict(cls, reason, text, trace=None, cert=certification, detail=""):
        return Verdict(cls, reason, delta, alignment, coincidences, trace, narrative(text),
                       name, cert, warnings, detail)

    if not alignment.satisfiable:
        return verdict(TRANSCENDENTAL, LATTICE_MISALIGNMENT,
                       f"{reason_label or 'Δ_G is not an integer combination of candidate spacings'}"
                       f" (Δ_G = {delta})")
    if not covers(lat_G, candidates):
        return verdict(TRANSCENDENTAL, LATTICE_MISALIGNMENT,
                       f"spacings align but offsets do not (lattice shift {meta.dominant.shift})")
    coupled, detail = detect_coupling(meta)
    if coupled:
        return verdict(TRANSCENDENTAL, RESIDUE_COUPLING,
                       f"{reason_label or 'residue-compatibility fails'}; {detail}", detail=detail)
    trace = recurrence_trace(meta)
    text = TABLE_REASON["maxwell"]
    return verdict(FINITE_PRONY, RATIONAL_FINITE,
                   f"{text}; sampled certification over {len(trace.samples)} recurrence steps",
                   trace, "sampled", detail)


# --------------------------------------------------------------------------
# constitutive identity
# --------------------------------------------------------------------------

_KERNEL_STRIP = {"maxwell": (-1.0, 0.0), "debye": (0.0, 1.0)}


def verify_constitutive(
    spec: Union[ModelSpec, SpectrumProvider],
    s_samples: Sequence[complex],
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Largest relative residual of ``G~(s) = K~(s) H~(-s)`` over ``s_samples``.

    The left side is the quadrature Mellin transform of ``G* - baseline``;
    the right side is the closed-form kernel transform times the atom
    symbol ``sum g_k tau_k^(-s)``.  Accepts Maxwell/SLS specs or an atom
    list provider (an empty list gives 0 on both sides).

    Raises
    ------
    UnsupportedModel
        For models without a finite atom spectrum.
    StripViolation
        If a sample lies outside the convergence strip.
    """
    if isinstance(spec, SpectrumProvider):
        provider = spec
        if provider.kind != "AtomList":
            raise UnsupportedModel("closed-form H~ unavailable for a continuous spectrum")
        base = provider.baseline

        def lhs(s):
            return mellin_quadrature(
                lambda w: forward_modulus(provider, w) - base, s, quad,
                strip=_KERNEL_STRIP[provider.kernel],
            )
    else:
        if spec.name not in ("maxwell", "sls"):
            raise UnsupportedModel(f"closed-form H~ unavailable for {spec.name}")
        provider = spectrum(spec)

        def lhs(s):
            return mellin_of_modulus(spec, s, quad)

    h_sym = atoms_symbol(provider.atoms)
    worst = 0.0
    for s in s_samples:
        left = lhs(s)
        right = kernel_transform(s, provider.kernel) * evaluate_symbol(h_sym, -complex(s))
        if left == 0 and right == 0:
            continue
        worst = max(worst, abs(left - right) / max(abs(right), abs(left)))
    return worst


def strip_grid(kernel: str, n_re: int = 3, n_im: int = 3, im_max: float = 0.5) -> List[complex]:
    """Default ``n_re x n_im`` sample grid well inside a kernel strip."""
    lo, hi = _KERNEL_STRIP[kernel]
    w = hi - lo
    res = np.linspace(lo + 0.25 * w, hi - 0.25 * w, n_re)
    ims = np.linspace(-im_max, im_max, n_im)
    return [complex(r, i) for r in res for i in ims]
