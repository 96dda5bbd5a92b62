import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pronylattice.errors import CoincidentPole, PoleEvaluation
from pronylattice.mellin import (
    GammaFactor,
    MellinSymbol,
    PoleRecord,
    atoms_symbol,
    enumerate_poles,
    evaluate_symbol,
    kernel_mellin,
    kernel_residue,
    kernel_transform,
    laurent_at_coincidence,
    residue_at,
)
from pronylattice.numerics import contour_integral, mellin_quadrature

F = Fraction
GAMMA_S = MellinSymbol(numerator=(GammaFactor(F(1)),))


class TestKernel:
    def test_values(self):
        assert kernel_mellin(0.5) == pytest.approx(2.221441469079183 - 2.221441469079183j, rel=1e-14)
        assert kernel_mellin(-0.5) == pytest.approx(-2.221441469079183 - 2.221441469079183j, rel=1e-14)

    def test_against_quadrature(self):
        # the Maxwell kernel carries the sign -1 relative to the canonical symbol
        q = mellin_quadrature(lambda w: 1j * w / (1 + 1j * w), -0.5)
        assert abs(q + kernel_mellin(-0.5)) <= 1e-8 * abs(q)
        q = mellin_quadrature(lambda w: 1 / (1 + 1j * w), 0.3 + 0.2j)
        assert abs(q - kernel_transform(0.3 + 0.2j, "debye")) <= 1e-8 * abs(q)

    @pytest.mark.parametrize("n", [0, -3, 2])
    def test_pole_raises(self, n):
        with pytest.raises(PoleEvaluation):
            kernel_mellin(n)

    @pytest.mark.parametrize("n, expected", [(0, 1), (1, 1j), (2, -1), (3, -1j), (-1, -1j)])
    def test_residues(self, n, expected):
        assert kernel_residue(n) == expected

    def test_residue_contour(self):
        assert abs(contour_integral(kernel_mellin, 2, 0.25) - kernel_residue(2)) <= 1e-8

    def test_closed_form_identity(self, rng):
        for s in rng.uniform(-5, 5, 50) + 1j * rng.uniform(-2, 2, 50):
            lhs = kernel_mellin(s) * cmath.sin(math.pi * s) / math.pi
            assert abs(lhs - cmath.exp(-0.5j * math.pi * s)) <= 1e-12 * abs(lhs)


class TestPoles:
    def test_gamma_poles(self):
        poles = enumerate_poles(GAMMA_S, (-3.5, 1))
        assert [p.location for p in poles] == [0, -1, -2, -3]

    def test_full_cancellation(self):
        sym = MellinSymbol(numerator=(GammaFactor(F(1)),), denominator=(GammaFactor(F(1)),))
        assert enumerate_poles(sym, (-10, 10)) == []

    def test_float_lattice(self):
        sym = MellinSymbol(numerator=(GammaFactor(0.5, 0.3),))
        poles = enumerate_poles(sym, (-5, 0))
        assert [round(float(p.location), 12) for p in poles] == [-0.6, -2.6, -4.6]
        assert poles[2].residue == pytest.approx(1.0, rel=1e-12)

    def test_max_per_family(self):
        assert len(enumerate_poles(GAMMA_S, (-100, 0), max_per_family=7)) == 7

    def test_window_validation(self):
        with pytest.raises(ValueError):
            enumerate_poles(GAMMA_S, (1, -1))

    def test_atoms_entire(self):
        sym = atoms_symbol([(1.0, 2.0), (3.0, 0.5)])
        assert enumerate_poles(sym, (-50, 50)) == []

    def test_residues_simple(self):
        rec = PoleRecord(F(0), 0, 0, None)
        assert residue_at(GAMMA_S, rec) == 1
        rec = PoleRecord(F(-3), 0, 3, None)
        assert residue_at(GAMMA_S, rec) == pytest.approx(-1 / 6, rel=1e-15)

    def test_coincident_raises(self):
        sym = MellinSymbol(numerator=(GammaFactor(F(1)), GammaFactor(F(1), F(1))))
        with pytest.raises(CoincidentPole):
            residue_at(sym, PoleRecord(F(-1), 0, 1, None))

    def test_cancelled_pole_has_zero_residue(self):
        sym = MellinSymbol(numerator=(GammaFactor(F(1)),), denominator=(GammaFactor(F(1), F(2)),))
        # Gamma(s)/Gamma(s+2) = 1/(s(s+1)): poles at 0, -1 only
        assert [p.location for p in enumerate_poles(sym, (-6, 1))] == [0, -1]
        assert residue_at(sym, PoleRecord(F(-3), 0, 3, None)) == 0

    @pytest.mark.parametrize(
        "sym",
        [
            MellinSymbol(numerator=(GammaFactor(F(1, 2), F(3, 10)), GammaFactor(F(-1), F(1, 2)))),
            MellinSymbol(
                numerator=(GammaFactor(F(5, 3)), GammaFactor(F(-5, 3), F(1, 2))),
                exp_poly=(0, -0.5j * math.pi),
                prefactor=0.7,
            ),
            MellinSymbol(numerator=(GammaFactor(F(1)),), denominator=(GammaFactor(F(-3, 5), F(1)),)),
        ],
    )
    def test_contour_invariant(self, sym):
        poles = enumerate_poles(sym, (-6, 6))
        assert poles
        for p in poles:
            spacing = min(float(f.spacing) for f in sym.numerator)
            radius = min(0.25, spacing / 4)
            numeric = contour_integral(lambda s: evaluate_symbol(sym, s), p.value, radius)
            assert abs(numeric - p.residue) <= 1e-8 * max(1.0, abs(p.residue))


class TestEvaluate:
    def test_atom(self):
        sym = atoms_symbol([(1.0, 1.0)])
        assert evaluate_symbol(sym, 7 + 3j) == 1

    def test_log_normal(self):
        sym = MellinSymbol(exp_poly=(0.0, 0.0, 0.5))
        assert evaluate_symbol(sym, 2) == pytest.approx(math.e**2, rel=1e-14)

    def test_gamma(self):
        assert evaluate_symbol(GAMMA_S, 4) == pytest.approx(6, rel=1e-14)

    def test_pole_raises(self):
        with pytest.raises(PoleEvaluation):
            evaluate_symbol(GAMMA_S, -2)

    def test_empty_atoms(self):
        assert evaluate_symbol(atoms_symbol([]), 0.3) == 0

    @given(
        a=st.fractions(F(1, 7), 3).filter(lambda x: x != 0),
        b=st.fractions(-2, 2),
        re=st.floats(-4, 4),
        im=st.floats(0.1, 3),
    )
    def test_ratio_cancels(self, a, b, re, im):
        f = GammaFactor(a, b)
        sym = MellinSymbol(numerator=(f,), denominator=(f,))
        assert abs(evaluate_symbol(sym, complex(re, im)) - 1) <= 1e-12

    def test_positive_weights_enforced(self):
        with pytest.raises(ValueError):
            MellinSymbol(atom_terms=((-1.0, 0.0),))


def test_laurent():
    assert laurent_at_coincidence(1, 0, 1, 0) == (1, 0)
    assert laurent_at_coincidence(1, 2, 0, 5) == (0, 5)
    assert laurent_at_coincidence(2, 1, 3, 4) == (6, 11)


def test_json_round_trip():
    sym = MellinSymbol(
        numerator=(GammaFactor(F(1, 2), 0.3),),
        denominator=(GammaFactor(F(-3, 5), F(1)),),
        exp_poly=(0.0, 1.0),
        prefactor=1 - 2j,
        atom_terms=((1.0, 0.0),),
    )
    obj = sym.to_json()
    assert obj["num"] == [{"a": "1/2", "b": 0.3}]
    back = MellinSymbol.from_json(obj)
    assert back == sym
    s = 0.2 + 0.4j
    assert evaluate_symbol(back, s) == evaluate_symbol(sym, s)


def test_mul_combines_factors():
    a = MellinSymbol(numerator=(GammaFactor(F(1)),), exp_poly=(1.0,))
    b = MellinSymbol(denominator=(GammaFactor(F(1), F(1)),), exp_poly=(0.0, 2.0), prefactor=3.0)
    s = 0.3 + 0.1j
    assert np.isclose(evaluate_symbol(a * b, s), evaluate_symbol(a, s) * evaluate_symbol(b, s), rtol=1e-14)
