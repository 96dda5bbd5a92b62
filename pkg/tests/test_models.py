import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from pronylattice.errors import InvalidSpec, StripViolation, UnsupportedModel
from pronylattice.mellin import kernel_mellin
from pronylattice.models import (
    MODEL_NAMES,
    ModelSpec,
    SpectrumProvider,
    baseline,
    convergence_strip,
    forward_modulus,
    mellin_of_modulus,
    modulus,
    relaxation_strength,
    spectrum,
    trial_state,
    viscoelastic_part,
)

F = Fraction

CATALOGUE = {
    "maxwell": dict(g_inf=0.5, g=2.0, tau=3.0),
    "sls": dict(g_inf=1.0, g=2.0, tau=0.5),
    "cole-cole": dict(g_inf=0.2, delta_g=1.5, tau=2.0, alpha="1/2"),
    "cole-davidson": dict(delta_g=1.0, tau=1.0, beta_exp="1/2"),
    "havriliak-negami": dict(delta_g=2.0, tau=0.3, alpha="3/5", beta_exp="1/2"),
    "fractional-zener": dict(g_e=1.0, tau=1.0, alpha="3/5", delta_zener="1/2"),
    "log-normal": dict(delta_g=1.0, mu=0.3, sigma=0.7),
    "power-law": dict(g0=1.0, tau0=1.0, beta_exp="1/2"),
}


def spec(name, **kw):
    return ModelSpec(name, **{**CATALOGUE[name], **kw})


def rel(a, b):
    return np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.abs(np.asarray(b)))


class TestSpec:
    def test_rationals_stay_exact(self):
        s = ModelSpec("hn", alpha="3/5", beta_exp="1/2")
        assert s.name == "havriliak-negami"
        assert s.alpha == F(3, 5) and s.beta_exp == F(1, 2)

    @pytest.mark.parametrize(
        "kw",
        [
            dict(name="maxwell", tau=-1),
            dict(name="maxwell", g=0),
            dict(name="cole-cole", alpha="3/2"),
            dict(name="cole-cole"),
            dict(name="fractional-zener", alpha="1/2", delta_zener=1),
            dict(name="power-law", beta_exp=1),
            dict(name="log-normal", sigma=0),
            dict(name="nonsense"),
            dict(name="maxwell", tau=float("nan")),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(InvalidSpec):
            ModelSpec(**kw)

    def test_json_round_trip(self):
        s = ModelSpec("cole-cole", g_inf=0.0, delta_g=1.0, tau=1.0, alpha="1/2")
        obj = s.to_json()
        assert obj == {"name": "cole-cole", "g_inf": 0.0, "delta_g": 1.0, "tau": 1.0, "alpha": "1/2"}
        assert ModelSpec.from_json(obj) == s

    def test_json_aliases_and_errors(self):
        s = ModelSpec.from_json({"name": "havriliak-negami", "alpha": "3/5", "beta": "1/2"})
        assert s.beta_exp == F(1, 2)
        with pytest.raises(InvalidSpec):
            ModelSpec.from_json({"name": "maxwell", "bogus": 1})
        with pytest.raises(InvalidSpec):
            ModelSpec.from_json([1, 2])


class TestModulus:
    def test_maxwell(self):
        assert modulus(ModelSpec("maxwell"), 1.0) == pytest.approx(0.5 + 0.5j, rel=1e-15)

    def test_sls_static(self):
        val = modulus(ModelSpec("sls", g_inf=1, g=2, tau=1), 1e-9)
        assert abs(val - 3) <= 1e-8

    def test_cole_cole(self):
        # independent complex arithmetic: 1/(1 + e^{-i pi/4})
        expected = 1 / (1 + cmath.exp(-0.25j * math.pi))
        val = modulus(ModelSpec("cole-cole", alpha="1/2"), 1.0)
        assert abs(val - expected) <= 1e-15
        assert val == pytest.approx(0.5 + 0.20710678118654752j, rel=1e-14)

    def test_log_normal_unsupported(self):
        with pytest.raises(UnsupportedModel):
            modulus(ModelSpec("log-normal"), 1.0)

    def test_vectorised(self):
        w = np.logspace(-2, 2, 7)
        vec = modulus(spec("havriliak-negami"), w)
        assert vec.shape == (7,)
        assert vec[3] == modulus(spec("havriliak-negami"), w[3])

    def test_omega_positive(self):
        with pytest.raises(ValueError):
            modulus(ModelSpec("maxwell"), 0.0)

    def test_hn_reduces_to_cole_davidson(self):
        w = np.logspace(-3, 3, 50)
        a = modulus(ModelSpec("havriliak-negami", alpha=1, beta_exp="1/2", tau=2.0), w)
        b = modulus(ModelSpec("cole-davidson", beta_exp="1/2", tau=2.0), w)
        assert rel(a, b) <= 1e-12

    def test_hn_beta_one_mirrors_cole_cole(self):
        # HN(alpha, 1) = dG/(1 + x^a) and CC = dG/(1 + x^-a) sum to dG
        w = np.logspace(-3, 3, 50)
        hn = viscoelastic_part(ModelSpec("havriliak-negami", alpha="1/2", beta_exp=1), w)
        cc = viscoelastic_part(ModelSpec("cole-cole", alpha="1/2"), w)
        assert np.max(np.abs(hn + cc - 1.0)) <= 1e-12

    def test_zener_alpha_one_is_rational(self):
        w = np.logspace(-3, 3, 50)
        d, ge, tau = 0.4, 2.0, 3.0
        z = modulus(ModelSpec("fractional-zener", alpha=1, delta_zener=d, g_e=ge, tau=tau), w)
        mx = modulus(ModelSpec("maxwell", g_inf=ge, g=ge * (1 - d) / d, tau=tau * d), w)
        assert rel(z, mx) <= 1e-12

    @pytest.mark.parametrize(
        "name, low, high, tol",
        [
            ("maxwell", 0.5, 2.5, 1e-6),
            ("sls", 3.0, 1.0, 1e-6),
            ("cole-cole", 0.2, 1.7, 1e-3),
            ("cole-davidson", 1.0, 0.0, 1e-3),
            # approaches zero like (w tau)^(-alpha beta) = (3e8)^(-0.3)
            ("havriliak-negami", 2.0, 0.0, 1e-2),
            ("fractional-zener", 1.0, 2.0, 1e-3),
        ],
    )
    def test_limits(self, name, low, high, tol):
        s = spec(name)
        assert abs(modulus(s, 1e-9) - low) <= tol * max(1, abs(low))
        assert abs(modulus(s, 1e9) - high) <= tol * max(1, abs(high))


class TestSpectrum:
    def test_maxwell_atom(self):
        p = spectrum(ModelSpec("maxwell", g=2, tau=3))
        assert p.kind == "AtomList" and p.atoms == ((2.0, 3.0),)

    def test_log_normal_density(self):
        p = spectrum(ModelSpec("log-normal", mu=0, sigma=1))
        assert p(1.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)

    @pytest.mark.parametrize("name", [n for n in MODEL_NAMES if n not in ("maxwell", "sls")])
    def test_nonnegative(self, name):
        p = spectrum(spec(name))
        tau = p.center * np.logspace(-8, 8, 10**4)
        h = p(tau)
        assert np.all(h >= 0) and np.all(np.isfinite(h))

    @pytest.mark.parametrize(
        "kw, atom",
        [
            (dict(name="cole-cole", alpha=1, delta_g=2.0, tau=3.0), (2.0, 3.0)),
            (dict(name="fractional-zener", alpha=1, delta_zener="1/4", tau=2.0), (3.0, 0.5)),
            (dict(name="cole-davidson", beta_exp=1, tau=2.0), (1.0, 2.0)),
            (dict(name="havriliak-negami", alpha=1, beta_exp=1), (1.0, 1.0)),
        ],
    )
    def test_degenerate_atoms(self, kw, atom):
        p = spectrum(ModelSpec(**kw))
        assert p.kind == "AtomList" and p.atoms == (atom,)

    def test_provider_validation(self):
        with pytest.raises(ValueError):
            SpectrumProvider("AtomList", atoms=((-1.0, 1.0),))
        with pytest.raises(ValueError):
            SpectrumProvider("Histogram")
        with pytest.raises(TypeError):
            SpectrumProvider("AtomList")(1.0)

    def test_sum_rules(self):
        assert relaxation_strength(spec("fractional-zener")) == pytest.approx(1.0)
        assert relaxation_strength(spec("power-law")) is None
        assert baseline(spec("fractional-zener")) == 1.0
        # log-normal mass by quadrature of the density in ln tau
        p = spectrum(spec("log-normal"))
        mass = mpmath.quad(lambda x: p(math.exp(float(x))), [-40, 0.3, 40])
        assert float(mass) == pytest.approx(1.0, rel=1e-12)


class TestForward:
    def test_single_atom(self):
        p = SpectrumProvider("AtomList", atoms=((1.0, 1.0),))
        assert forward_modulus(p, 1.0, g_inf=0.0) == pytest.approx(0.5 + 0.5j, rel=1e-15)

    def test_empty(self):
        assert forward_modulus(SpectrumProvider("AtomList"), 1.0, g_inf=7.0) == 7.0

    def test_cole_cole_round_trip(self):
        s = ModelSpec("cole-cole", alpha="1/2")
        for w in (0.1, 1.0, 10.0):
            assert abs(forward_modulus(spectrum(s), w) - modulus(s, w)) <= 1e-6 * abs(modulus(s, w))

    @pytest.mark.parametrize("name", [n for n in MODEL_NAMES if n != "log-normal"])
    def test_round_trip(self, name):
        s = spec(name)
        w = np.logspace(-3, 3, 20)
        assert rel(forward_modulus(spectrum(s), w), modulus(s, w)) <= 1e-5


class TestTrialState:
    def test_delta_g(self):
        assert trial_state(ModelSpec("maxwell")).delta_G == 1
        assert trial_state(spec("havriliak-negami")).delta_G == F(3, 5)

    def test_cole_davidson_modulation(self):
        meta = trial_state(spec("cole-davidson"))
        assert meta.gamma_scale == 1 and meta.delta_G == 1
        assert [(f.scale, f.shift) for f in meta.modulation.numerator] == [(-1, F(1, 2))]

    def test_log_normal_entire(self):
        meta = trial_state(spec("log-normal"))
        assert meta.entire and meta.dominant is None
        assert meta.modulation.exp_poly[2] == pytest.approx(0.5 * 0.7**2)

    def test_power_law_distributional(self):
        assert trial_state(spec("power-law")).distributional

    def test_zener_lattice(self):
        meta = trial_state(spec("fractional-zener"))
        lat = meta.dominant.progression()
        # poles at -alpha (1 + m)
        assert [lat.member(m) for m in range(3)] == [F(-3, 5), F(-6, 5), F(-9, 5)]

    @pytest.mark.parametrize(
        "name, s",
        [
            ("maxwell", -0.5 + 0.3j),
            ("sls", 0.4 - 0.2j),
            ("cole-davidson", 0.25),
            ("havriliak-negami", 0.15 + 0.1j),
            ("fractional-zener", -0.3),
        ],
    )
    def test_exact_symbols_match_quadrature(self, name, s):
        sp = spec(name)
        meta = trial_state(sp)
        assert meta.exact
        from pronylattice.mellin import evaluate_symbol

        closed = evaluate_symbol(meta.symbol, s)
        assert abs(mellin_of_modulus(sp, s) - closed) <= 1e-8 * abs(closed)

    def test_trial_state_json(self):
        obj = trial_state(spec("havriliak-negami")).to_json()
        assert obj["delta_G"] == "3/5" and obj["kernel"] == "debye"


class TestMellinOfModulus:
    def test_maxwell(self):
        val = mellin_of_modulus(ModelSpec("maxwell"), -0.5)
        # the Maxwell kernel is minus the canonical symbol
        assert abs(val + kernel_mellin(-0.5)) <= 1e-8 * abs(val)

    def test_cole_davidson(self):
        s, b = 0.25, 0.5
        closed = cmath.exp(-0.5j * math.pi * s) * complex(
            mpmath.gamma(s) * mpmath.gamma(b - s) / mpmath.gamma(b)
        )
        val = mellin_of_modulus(ModelSpec("cole-davidson", beta_exp="1/2"), s)
        assert abs(val - closed) <= 1e-6 * abs(closed)

    def test_cole_davidson_outside_strip(self):
        with pytest.raises(StripViolation):
            mellin_of_modulus(ModelSpec("cole-davidson", beta_exp="1/2"), -0.25)

    def test_sls_beta_integral(self):
        g, tau, s = 2.0, 5.0, 0.3 + 0.4j
        closed = g * tau ** (-s) * math.pi / cmath.sin(math.pi * s) * cmath.exp(-0.5j * math.pi * s)
        val = mellin_of_modulus(ModelSpec("sls", g=g, tau=tau), s)
        assert abs(val - closed) <= 1e-6 * abs(closed)

    @pytest.mark.parametrize(
        "name, strip",
        [
            ("maxwell", (-1, 0)),
            ("sls", (0, 1)),
            ("cole-cole", (-0.5, 0)),
            ("cole-davidson", (0, 0.5)),
            ("havriliak-negami", (0, 0.3)),
            ("fractional-zener", (-0.6, 0)),
            ("power-law", (-0.5, -0.5)),
        ],
    )
    def test_strips(self, name, strip):
        assert convergence_strip(spec(name)) == pytest.approx(strip, abs=1e-9)
