import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varlex.errors import ExponentRangeError
from varlex.exponents import (Descriptor, build_exponent, combine, conjugate,
                              constant_exponent, log_holder_check)
from varlex.grids import Grid

G = Grid(1, 256, 8.0)


def radial_p():
    return build_exponent(
        Descriptor.make("exponential_approach", limit=6.0, amplitude=2.0), G)


class TestBuild:
    def test_constant_family(self):
        p = constant_exponent(2.0, G)
        assert np.all(p.samples == 2.0)
        assert (p.p_minus, p.p_plus, p.p_infinity) == (2.0, 2.0, 2.0)

    def test_radial_family_extrema(self):
        # p(x) = 6 - 2 exp(-|x|): min 4 at the origin node, sup 6 only in the
        # limit, so the sampled max stays below the descriptor bound
        p = radial_p()
        assert p.samples.min() == 4.0
        assert p.p_minus == 4.0
        assert p.p_plus == 6.0 == p.p_infinity
        assert p.samples.max() < 6.0

    def test_infinity_region(self):
        p = build_exponent(
            Descriptor.make("piecewise_infinity", inner_value=2.0, radius=4.0), G)
        assert np.any(np.isinf(p.samples))
        assert p.p_plus == np.inf
        assert np.all(p.samples[np.abs(G.axis()) <= 4.0] == 2.0)

    def test_unknown_family(self):
        with pytest.raises(ExponentRangeError):
            build_exponent(Descriptor.make("mystery", value=2.0), G)

    def test_below_one_rejected(self):
        with pytest.raises(ExponentRangeError):
            build_exponent(Descriptor.make("constant", value=0.5), G)

    def test_descriptor_recompute_bit_identical(self):
        p = radial_p()
        again = build_exponent(p.descriptor, G)
        assert np.array_equal(p.samples, again.samples)

    def test_sinusoidal_has_no_limit(self):
        p = build_exponent(
            Descriptor.make("sinusoidal", base=1.0, amplitude=1.0), G)
        assert p.p_infinity is None
        assert p.p_minus == 1.0 and p.p_plus == 2.0


class TestConjugate:
    def test_constant_two_self_conjugate(self):
        p = constant_exponent(2.0, G)
        assert np.all(conjugate(p).samples == 2.0)

    def test_one_maps_to_infinity(self):
        p = constant_exponent(1.0, G)
        q = conjugate(p)
        assert np.all(np.isinf(q.samples))
        assert np.all(conjugate(q).samples == 1.0)

    def test_pointwise_value(self):
        p = constant_exponent(3.0, G)
        assert conjugate(p).samples[0] == pytest.approx(1.5, abs=0)

    def test_roundtrip_radial(self):
        p = radial_p()
        back = conjugate(conjugate(p))
        assert np.allclose(back.samples, p.samples, rtol=1e-14, atol=0)
        assert back.p_minus == pytest.approx(p.p_minus, rel=1e-14)

    @given(st.floats(min_value=1.0, max_value=1e6))
    @settings(max_examples=50, deadline=None)
    def test_conjugate_identity_pointwise(self, v):
        small = Grid(1, 4, 1.0)
        p = constant_exponent(v, small)
        q = conjugate(p)
        if np.isfinite(q.samples[0]):
            assert 1.0 / v + 1.0 / q.samples[0] == pytest.approx(1.0, rel=1e-12)


class TestCombine:
    def test_half_constant(self):
        p = constant_exponent(4.0, G)
        assert np.all(combine("half", p).samples == 2.0)

    def test_half_bounds(self):
        p = radial_p()
        h = combine("half", p)
        assert h.p_minus == p.p_minus / 2
        assert h.p_plus == p.p_plus / 2

    def test_holder_sum(self):
        p = constant_exponent(4.0, G)
        s = combine("holder_sum", p, p)
        assert np.all(s.samples == 2.0)

    def test_young_r_reproduces_derived_bounds(self):
        # q from 2/p + 1/q = 1 + 1/p_inf: 1/q_minus = 1 - 1/p_inf and
        # 1/q_plus = 1 + 1/p_inf - 2/p_minus
        p = radial_p()
        half = combine("half", p)
        q = combine("young_r", half, p.p_infinity)
        assert 1.0 / q.p_minus == pytest.approx(1.0 - 1.0 / 6.0, rel=1e-12)
        assert 1.0 / q.p_plus == pytest.approx(1.0 + 1.0 / 6.0 - 2.0 / 4.0,
                                               rel=1e-12)
        # relation holds at every node
        lhs = 2.0 / p.samples + 1.0 / q.samples
        assert np.allclose(lhs, 1.0 + 1.0 / 6.0, rtol=1e-13, atol=0)

    def test_residual(self):
        a = build_exponent(
            Descriptor.make("sinusoidal", base=1.0, amplitude=1.0), G)
        c = combine("residual", a, 3.0, 3.0)
        assert np.allclose(a.samples / 3.0 + c.samples / 3.0, 1.0,
                           rtol=1e-14, atol=1e-15)
        assert c.samples.min() >= 1.0

    def test_relation_below_one_reported(self):
        p = constant_exponent(1.5, G)
        with pytest.raises(ExponentRangeError):
            combine("half", p)


class TestLogHolder:
    def test_constant_exponent_zero(self):
        est = log_holder_check(constant_exponent(3.0, G), pair_budget=5000)
        assert est.c_local == 0.0
        assert est.c_decay == 0.0

    def test_radial_positive_finite(self):
        est = log_holder_check(radial_p(), pair_budget=200_000, seed=3)
        assert 0.0 < est.c_local < 10.0
        assert est.c_decay is not None and est.c_decay > 0.0

    def test_step_exponent_blows_up_under_refinement(self):
        vals = []
        for n in (128, 512, 2048):
            g = Grid(1, n, 8.0)
            x = g.coords()
            samples = np.where(x[0] < 0, 2.0, 4.0)
            from varlex.exponents import ExponentField
            p = ExponentField(samples, 2.0, 4.0, 4.0, g, None)
            vals.append(log_holder_check(p, pair_budget=0).c_local)
        assert vals[0] < vals[1] < vals[2]
        assert not log_holder_check(
            ExponentFieldStep(2048), pair_budget=0, threshold=vals[0]).pass_local


def ExponentFieldStep(n):
    from varlex.exponents import ExponentField
    g = Grid(1, n, 8.0)
    samples = np.where(g.coords()[0] < 0, 2.0, 4.0)
    return ExponentField(samples, 2.0, 4.0, 4.0, g, None)
