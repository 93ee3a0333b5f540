import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy.integrate import quad

from conformal_testing import (
    RealSequence,
    nondomination_ratio,
    normalize,
    pivotal_example_path,
)


def gaussian_mass(var, lo, hi):
    """Quadrature oracle for N(0, var)([lo, hi])."""
    val, _ = quad(
        lambda x: math.exp(-x * x / (2 * var)) / math.sqrt(2 * math.pi * var),
        lo,
        hi,
        epsabs=1e-14,
    )
    return val


# frozen from the quadrature oracle
MASS_N01 = 0.6826894921370859
MASS_N02 = 0.5204998778130465


class TestNormalize:
    def test_full_gaussian_example(self):
        assert normalize("full-gaussian", RealSequence((1.0, 3.0, 7.0))) == (0.0, 1.0, 3.0)

    def test_full_gaussian_constant_input(self):
        assert normalize("full-gaussian", RealSequence((2.0, 2.0, 2.0))) == (0.0, 0.0, 0.0)

    def test_var1_example(self):
        assert normalize("var1", RealSequence((5.0, 5.0, 6.0))) == (0.0, 0.0, 1.0)

    def test_mean0_zero_division(self):
        assert normalize("mean0", RealSequence((0.0, 3.0))) == (0.0, 0.0)

    def test_empty(self):
        assert normalize("var1", RealSequence(())) == ()

    def test_output_length_matches(self):
        for kind in ("full-gaussian", "var1", "mean0"):
            out = normalize(kind, RealSequence((1.0, 2.0, 3.0, 4.0)))
            assert len(out) == 4

    @given(
        st.lists(st.floats(-100, 100), min_size=1, max_size=8),
        st.floats(-50, 50),
    )
    def test_var1_translation_invariant(self, zs, shift):
        base = normalize("var1", RealSequence(tuple(zs)))
        shifted = normalize("var1", RealSequence(tuple(z + shift for z in zs)))
        for a, b in zip(base, shifted):
            assert b == pytest.approx(a, abs=1e-9)

    @given(
        st.lists(st.floats(-100, 100), min_size=2, max_size=8),
        st.floats(-4, 4),
        st.floats(-50, 50),
    )
    def test_full_affine_invariant(self, zs, log_a, shift):
        a = math.exp(log_a)
        assume(abs(zs[1] - zs[0]) > 1e-3)
        base = normalize("full-gaussian", RealSequence(tuple(zs)))
        mapped = normalize(
            "full-gaussian", RealSequence(tuple(a * z + shift for z in zs))
        )
        for x, y in zip(base, mapped):
            assert y == pytest.approx(x, rel=1e-6, abs=1e-6)

    @given(
        st.lists(st.floats(-100, 100), min_size=1, max_size=8),
        st.floats(-4, 4),
    )
    def test_mean0_scale_invariant(self, zs, log_a):
        a = math.exp(log_a)
        assume(abs(zs[0]) > 1e-6)
        base = normalize("mean0", RealSequence(tuple(zs)))
        scaled = normalize("mean0", RealSequence(tuple(a * z for z in zs)))
        for x, y in zip(base, scaled):
            assert y == pytest.approx(x, rel=1e-9, abs=1e-9)


class TestPivotalExamplePath:
    def test_inside_window(self):
        c = 1.0 / MASS_N02
        path = pivotal_example_path(RealSequence((0.0, 0.5, 9.0, -4.0)))
        assert path.values == pytest.approx((1.0, 1.0, c, c, c), abs=1e-12)
        assert c == pytest.approx(1.9212300379428344, abs=1e-12)
        assert c == pytest.approx(1.0 / gaussian_mass(2.0, -1, 1), abs=1e-9)

    def test_outside_window(self):
        path = pivotal_example_path(RealSequence((0.0, 2.0)))
        assert path.values == (1.0, 1.0, 0.0)

    def test_empty(self):
        assert pivotal_example_path(RealSequence(())).values == (1.0,)

    def test_exact_unit_expectation(self):
        # mass * (1/mass) + (1-mass) * 0 = 1, identically
        mass = gaussian_mass(2.0, -1, 1)
        assert mass * (1.0 / MASS_N02) == pytest.approx(1.0, abs=1e-9)

    def test_monte_carlo_unit_mean(self):
        rng = np.random.default_rng(7)
        mu = -0.8
        z = rng.normal(mu, 1.0, size=(10_000, 2))
        finals = np.array(
            [pivotal_example_path(RealSequence((a, b))).final for a, b in z]
        )
        mean = finals.mean()
        se = finals.std(ddof=1) / math.sqrt(len(finals))
        assert abs(mean - 1.0) <= 3 * se


class TestNondominationRatio:
    def test_matches_quadrature_oracle(self):
        want = gaussian_mass(1.0, -1, 1) / gaussian_mass(2.0, -1, 1)
        assert nondomination_ratio() == pytest.approx(want, abs=1e-9)
        assert nondomination_ratio() == pytest.approx(MASS_N01 / MASS_N02, abs=1e-12)

    def test_approximate_headline_value(self):
        assert nondomination_ratio() == pytest.approx(1.31, abs=0.01)

    def test_sanity(self):
        num = gaussian_mass(1.0, -1, 1)
        den = gaussian_mass(2.0, -1, 1)
        assert num < 1 and den < 1
        assert nondomination_ratio() > 1
