import math

import numpy as np
import pytest

from schottkyzeta.errors import SpectrumEmpty
from schottkyzeta.schottky import Convention, cylinder, length_spectrum, pair_of_pants
from schottkyzeta.zeta import (
    ZetaEvaluation,
    factorization_check,
    poincare_identity_bound,
    poincare_identity_check,
    quotient_residual,
    ruelle_zeta,
    selberg_zeta,
)

CYL = length_spectrum(cylinder(1.0), 2.0, Convention.UNORIENTED)
CYL_OR = length_spectrum(cylinder(1.0), 2.0, Convention.ORIENTED)
POP = length_spectrum(pair_of_pants(2.0, 2.0, 2.0), 9.0, Convention.ORIENTED)


def partial_product_oracle(s, ell, k_max):
    out = 1.0
    for k in range(k_max + 1):
        out *= 1.0 - math.exp(-(s + k) * ell)
    return out


class TestSelberg:
    def test_cylinder_against_partial_product(self):
        z = selberg_zeta(1.0, CYL, k_max=50)
        assert z.value.real == pytest.approx(partial_product_oracle(1.0, 1.0, 50), rel=1e-13)
        # frozen from the oracle
        assert z.value.real == pytest.approx(0.5044286547259664, abs=1e-13)

    def test_large_re_goes_to_one(self):
        z = selberg_zeta(60.0, POP)
        assert abs(z.value - 1.0) < 1e-12
        assert z.tail_bound < 1e-12

    def test_oriented_is_unoriented_squared(self):
        zo = selberg_zeta(1.3, CYL_OR)
        zu = selberg_zeta(1.3, CYL)
        assert zo.value == pytest.approx(zu.value**2, rel=1e-12)

    def test_value_consistent_with_log(self):
        z = selberg_zeta(1.7 + 0.4j, POP)
        assert abs(z.value - np.exp(z.log_value)) <= 1e-13 * abs(z.value)

    def test_real_on_real_axis(self):
        for s in (0.8, 1.5, 3.0):
            z = selberg_zeta(s, POP)
            assert abs(z.value.imag) < 1e-13 * abs(z.value)

    def test_empty_spectrum(self):
        empty = length_spectrum(pair_of_pants(2, 2, 2), 0.5)
        with pytest.raises(SpectrumEmpty):
            selberg_zeta(2.0, empty)

    def test_warns_left_of_axis(self):
        with pytest.warns(UserWarning):
            selberg_zeta(-0.5, CYL)

    def test_monotone_truncation(self):
        # refining k_max moves log Z by less than the reported tail bound
        rng = np.random.default_rng(7)
        for _ in range(20):
            s = complex(rng.uniform(0.8, 2.5), rng.uniform(-3, 3))
            a = selberg_zeta(s, POP, k_max=24)
            b = selberg_zeta(s, POP, k_max=80)
            assert abs(b.log_value - a.log_value) <= a.tail_bound + 1e-15

    def test_spectrum_refinement_within_tail(self):
        g = pair_of_pants(2.0, 2.0, 2.0)
        small = length_spectrum(g, 7.0)
        big = length_spectrum(g, 10.0)
        for s in (1.2, 1.8, 2.4):
            a = selberg_zeta(s, small)
            b = selberg_zeta(s, big)
            assert abs(b.log_value - a.log_value) <= a.tail_bound

    def test_conjugation_invariance(self):
        from schottkyzeta.moebius import MoebiusMap
        from schottkyzeta.schottky import SchottkyGroup
        g = pair_of_pants(2.0, 2.0, 2.0)
        h = MoebiusMap(1.0, 0.4, 0.0, 1.0)
        conj = SchottkyGroup.from_generators(
            [h.compose(x).compose(h.inverse()) for x in g.generators])
        spec_c = length_spectrum(conj, 9.0, Convention.ORIENTED)
        for s in (1.1, 2.3 + 0.7j):
            a, b = selberg_zeta(s, POP), selberg_zeta(s, spec_c)
            assert abs(a.value - b.value) < 1e-10 * abs(a.value)


class TestRuelle:
    def test_large_re_goes_to_one(self):
        z = ruelle_zeta(60.0, POP)
        assert abs(z.value - 1.0) < 1e-12

    def test_cylinder_weighted_product(self):
        out = 1.0
        for m in range(1, 51):
            out *= (1.0 - math.exp(-(1.0 + m) * 1.0)) ** m
        z = ruelle_zeta(1.0, CYL, k_max=50)
        assert z.value.real == pytest.approx(out, rel=1e-12)

    def test_factorization_at_two(self):
        assert factorization_check(2.0, CYL, p_max=40) < 1e-10


class TestPoincareIdentity:
    @pytest.mark.parametrize("ell,k,p_max", [(1.0, 1, 40), (0.1, 1, 400), (2.0, 3, 10)])
    def test_residual_below_bound(self, ell, k, p_max):
        # the geometric remainder meets the bound with equality
        bound = poincare_identity_bound(ell, k, p_max)
        assert poincare_identity_check(ell, k, p_max) <= bound * (1 + 1e-12)

    def test_tight_case(self):
        assert poincare_identity_check(1.0, 1, 40) < 1e-17


class TestFactorization:
    def test_cylinder(self):
        assert factorization_check(2.0, CYL, p_max=40) < 1e-10

    def test_pair_of_pants(self):
        assert factorization_check(3.0, POP, p_max=48) < 1e-8

    def test_huge_re(self):
        assert factorization_check(40.0, POP, p_max=8) < 1e-14

    def test_quotient_form(self):
        assert quotient_residual(3.0, POP) < 1e-8
