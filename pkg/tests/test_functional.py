"""Coefficient maps, the weighted norm chain, envelopes, and pairings."""

import cmath
import math

import pytest

from fockcalc import (
    DuplicateKeyError,
    EmptySupportError,
    ExponentTooSmallError,
    FockFunctional,
    GammaCursor,
    GrowthEnvelope,
    ZERO,
    basis_element,
    canonical_subset,
    check_strong_convergence,
    dual_norm_bound,
    dual_pair,
    fit_envelope,
    inner_dual,
    inner_p,
    lambda_weight,
    linear_combine,
    make_functional,
    norm_dual,
    norm_p,
    random_functionals,
)

E = canonical_subset([])
S02 = canonical_subset([0, 2])
S13 = canonical_subset([1, 3])
SINH_PI_OVER_PI = 3.676077910374978  # closed form of the full weight sum at exponent 2


def F(*pairs):
    return make_functional([(canonical_subset(s), c) for s, c in pairs])


class TestConstruction:
    def test_single_term(self):
        phi = F(([0, 2], 3))
        assert phi.support() == [S02]
        assert phi.coefficient(S02) == 3

    def test_zero_coefficients_dropped(self):
        assert not F(([], 0))
        assert F(([], 0)) == ZERO

    def test_duplicate_subset_rejected(self):
        with pytest.raises(DuplicateKeyError):
            F(([1], 1), ([1], 2))

    def test_support_max(self):
        assert F(([], 2), ([0, 2], 3)).support_max == 2
        assert F(([], 2)).support_max == -1
        assert ZERO.support_max == -1

    def test_immutable(self):
        phi = F(([1], 1))
        with pytest.raises(AttributeError):
            phi._terms = {}


class TestCoefficientAccess:
    def test_lookup(self):
        assert F(([0, 2], 3)).coefficient(S02) == 3

    def test_absent_is_zero(self):
        assert F(([0, 2], 3)).coefficient(E) == 0

    def test_basis_is_unit(self):
        assert basis_element(S13).coefficient(S13) == 1


class TestLinearCombine:
    def test_exact_cancellation(self):
        phi = F(([0, 2], 3), ([1], 2j))
        assert linear_combine(1, phi, -1, phi) == ZERO

    def test_scaling(self):
        assert linear_combine(2, F(([], 1)), 0, F(([5], 9))) == F(([], 2))

    def test_disjoint_supports(self):
        got = linear_combine(1, F(([0], 1)), 1, F(([1], 1)))
        assert got == F(([0], 1), ([1], 1))


class TestInnerProductsAndNorms:
    def test_inner_p_basis_weight(self):
        z1 = basis_element(canonical_subset([1]))
        assert inner_p(z1, z1, 1.0) == 4  # weight({1})**2

    def test_inner_p_disjoint(self):
        z0, z1 = basis_element(canonical_subset([0])), basis_element(canonical_subset([1]))
        for p in (0.0, 1.0, 2.5):
            assert inner_p(z0, z1, p) == 0

    def test_inner_p_level_zero_is_plain_l2(self):
        phi = F(([], 1), ([0], 2), ([1, 3], 1j))
        assert inner_p(phi, phi, 0.0) == pytest.approx(1 + 4 + 1)

    def test_inner_p_conjugates_first_slot(self):
        phi = F(([1], 1j))
        psi = F(([1], 1.0))
        assert inner_p(phi, psi, 0.0) == pytest.approx(-1j)

    def test_norm_constant_is_one_at_every_level(self):
        for p in (0.0, 1.0, 7.0):
            assert norm_p(basis_element(E), p) == 1.0

    def test_norm_hand_value(self):
        assert norm_p(F(([1, 3], 1)), 1.0) == pytest.approx(8.0)

    def test_norm_three_unit_terms(self):
        phi = F(([], 1), ([0], 1), ([1], 1))
        assert norm_p(phi, 0.0) == pytest.approx(math.sqrt(3))

    def test_basis_norm_is_weight_power(self):
        for sigma in (E, S02, S13):
            for p in (0.0, 1.0, 2.0):
                assert norm_p(basis_element(sigma), p) == pytest.approx(
                    lambda_weight(sigma) ** p
                )

    def test_dual_norm_hand_value(self):
        phi = F(([], 1), ([0], 1), ([1], 1))
        assert norm_dual(phi, 1.0) == pytest.approx(1.5)  # sqrt(1 + 1 + 1/4)

    def test_dual_norm_of_basis(self):
        for sigma in (S02, S13):
            for p in (0.5, 1.0, 2.0):
                assert norm_dual(basis_element(sigma), p) == pytest.approx(
                    lambda_weight(sigma) ** (-p)
                )

    def test_dual_norm_of_zero(self):
        assert norm_dual(ZERO, 3.0) == 0.0

    def test_norm_chain_monotonicity(self):
        for phi in random_functionals(30, seed=5, support_max=8, max_terms=12):
            assert norm_p(phi, 0.0) <= norm_p(phi, 1.0) <= norm_p(phi, 2.0)
            assert norm_dual(phi, 2.0) <= norm_dual(phi, 1.0) <= norm_dual(phi, 0.0)


class TestDualPairings:
    def test_inner_dual_diagonal_is_squared_norm(self):
        for phi in random_functionals(20, seed=6, support_max=6, max_terms=10):
            for p in (0.0, 1.5):
                got = inner_dual(phi, phi, p)
                assert got.imag == pytest.approx(0.0, abs=1e-15)
                assert got.real == pytest.approx(norm_dual(phi, p) ** 2, rel=1e-12)

    def test_inner_dual_disjoint(self):
        assert inner_dual(F(([0], 1)), F(([1], 1)), 1.0) == 0

    def test_inner_dual_orientation(self):
        # conjugation on the second slot: (2i) * conj(1) / weight({1})**2
        assert inner_dual(F(([1], 2j)), F(([1], 1)), 1.0) == pytest.approx(0.5j)

    def test_dual_pair_extracts_coefficient(self):
        phi = F(([0, 2], 3 + 1j), ([], 2))
        assert dual_pair(phi, basis_element(S02)) == 3 + 1j

    def test_dual_pair_is_bilinear_not_hermitian(self):
        sigma = canonical_subset([1])
        phi = make_functional([(sigma, 1j)])
        assert dual_pair(phi, make_functional([(sigma, 1j)])) == pytest.approx(-1)

    def test_dual_pair_zero(self):
        assert dual_pair(ZERO, F(([0], 5))) == 0

    def test_riesz_pairing(self):
        # Promoting eta to a dual element conjugates its coefficient array;
        # the bilinear pairing then reproduces the Hermitian inner product.
        eta = F(([], 1 + 2j), ([0, 2], 3j), ([1], -1))
        xi = F(([0, 2], 2), ([1], 1j), ([4], 7))
        riesz = make_functional(
            [(s, c.conjugate()) for s, c in eta.items()]
        )
        assert dual_pair(riesz, xi) == pytest.approx(inner_p(eta, xi, 0.0))

    def test_cauchy_schwarz_across_levels(self):
        pool = random_functionals(40, seed=7, support_max=8, max_terms=16)
        for phi, xi in zip(pool[::2], pool[1::2]):
            for p in (0.0, 1.0, 2.0):
                lhs = abs(dual_pair(phi, xi))
                rhs = norm_p(xi, p) * norm_dual(phi, p)
                assert lhs <= rhs * (1 + 1e-12)


class TestEnvelopes:
    def test_single_ratio(self):
        assert fit_envelope(F(([], 3)), 0.0) == GrowthEnvelope(C=3.0, p=0.0)

    def test_flat_ratios(self):
        terms = [(s, lambda_weight(s)) for s in (E, S02, S13)]
        phi = make_functional([(s, c) for s, c in terms])
        assert fit_envelope(phi, 1.0).C == pytest.approx(1.0)

    def test_hand_ratio(self):
        assert fit_envelope(F(([1], 8)), 1.0).C == pytest.approx(4.0)

    def test_empty_support_rejected(self):
        with pytest.raises(EmptySupportError):
            fit_envelope(ZERO, 1.0)

    def test_fitted_envelope_covers(self):
        for phi in random_functionals(20, seed=8, support_max=8, max_terms=12):
            for p in (0.0, 1.0):
                assert fit_envelope(phi, p).covers(phi)

    def test_bound_zero_envelope(self):
        assert dual_norm_bound(GrowthEnvelope(0.0, 1.0), 2.0) == 0.0

    def test_bound_needs_gap(self):
        with pytest.raises(ExponentTooSmallError):
            dual_norm_bound(GrowthEnvelope(1.0, 1.0), 1.0)
        with pytest.raises(ExponentTooSmallError):
            dual_norm_bound(GrowthEnvelope(1.0, 0.0), 0.5)

    def test_bound_value_against_closed_form(self):
        got = dual_norm_bound(GrowthEnvelope(1.0, 0.0), 1.0)
        exact = math.sqrt(SINH_PI_OVER_PI)
        assert exact <= got <= exact * (1 + 1e-6)
        assert got <= 2.2761

    def test_bound_dominates_actual_dual_norms(self):
        for phi in random_functionals(20, seed=9, support_max=8, max_terms=12):
            for p in (0.0, 1.0):
                env = fit_envelope(phi, p)
                for q in (p + 0.6, p + 1.0, p + 2.0):
                    assert norm_dual(phi, q) <= dual_norm_bound(env, q) * (1 + 1e-12)


class TestStrongConvergenceDiagnostic:
    def test_constant_sequence(self):
        phi = F(([], 1), ([0, 2], 2))
        diag = check_strong_convergence([phi, phi, phi], phi, GammaCursor(4))
        assert diag.pointwise_gaps == (0.0, 0.0, 0.0)
        assert diag.tail_gap == 0.0
        for p in (0.0, 1.0, 2.0):
            assert diag.envelopes[p] == fit_envelope(phi, p)

    def test_unbounded_scalars_fail_condition_one(self):
        z = basis_element(E)
        seq = [linear_combine(n, z, 0, z) for n in range(1, 6)]
        diag = check_strong_convergence(seq, ZERO, GammaCursor(2))
        assert diag.pointwise_gaps == (1.0, 2.0, 3.0, 4.0, 5.0)
        assert diag.tail_gap == 5.0  # growing, not shrinking

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            check_strong_convergence([], ZERO, GammaCursor(2))
