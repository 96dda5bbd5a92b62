"""Finite Prony representability of viscoelastic models via Mellin pole lattices.

The package decides whether a model's relaxation spectrum is a finite sum
of exponentials, and otherwise discretises it into a geometric Prony ladder.
"""

from .classify import Verdict, classify, recurrence_coefficient, verify_constitutive
from .errors import (
    CoincidentPole,
    DegenerateLadder,
    IncommensurateInput,
    InvalidSpec,
    NegativeDensity,
    NonConvergent,
    PoleEvaluation,
    PronyLatticeError,
    StripViolation,
    UnsupportedModel,
)
from .ladder import (
    ConvergenceReport,
    PronyLadder,
    convergence_study,
    eval_modulus,
    eval_time,
    normalize_sum_rule,
    synthesize,
)
from .lattice import Progression, alignment_test, intersect_progressions, intersect_with_integers
from .mellin import GammaFactor, MellinSymbol, enumerate_poles, kernel_mellin, residue_at
from .models import ModelSpec, SpectrumProvider, forward_modulus, modulus, spectrum, trial_state
from .numerics import QuadratureSpec, complex_gamma, mellin_quadrature

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
