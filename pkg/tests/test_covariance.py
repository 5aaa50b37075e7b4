"""Closed-form covariance determinants and spectra against numeric oracles.

Frozen values were computed from the pivoted-LU determinant oracle and
numpy.linalg.eigvalsh before the closed forms were trusted; the suite
keeps both routes and compares them everywhere.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segcs import covariance
from segcs.covariance import (
    MULTI_GROUP,
    SINGLE_GROUP,
    CovarianceModel,
    cluster_eigenvalues,
    det_noisy_multi_group,
    det_noisy_single_group,
    det_normalized_nested,
    det_numeric,
    eigs_normalized_nested,
    nested_block,
    noiseless_covariance,
    noisy_covariance,
    normalized_nested_block,
    normalized_nested_report,
)


def model(sigma_x2, m_o, alpha, case):
    return CovarianceModel(sigma_x2=sigma_x2, m_o=m_o, alpha=alpha, case=case)


class TestModelValidation:
    def test_properties(self):
        m = model(3.0, 4, Fraction(1, 2), SINGLE_GROUP)
        assert m.beta == 0.75
        assert m.m_e == 2
        assert m.m == 6

    def test_single_group_alpha_range(self):
        with pytest.raises(ValueError):
            model(1.0, 3, Fraction(4, 3), SINGLE_GROUP)
        with pytest.raises(ValueError):
            model(1.0, 3, -1, SINGLE_GROUP)
        with pytest.raises(ValueError):
            model(1.0, 3, Fraction(1, 2), SINGLE_GROUP)  # 3/2 rows

    def test_multi_group_alpha_range(self):
        with pytest.raises(ValueError):
            model(1.0, 3, 3, MULTI_GROUP)
        with pytest.raises(ValueError):
            model(1.0, 3, Fraction(1, 2), MULTI_GROUP)
        with pytest.raises(ValueError):
            model(1.0, 3, 0, MULTI_GROUP)

    def test_misc_validation(self):
        with pytest.raises(ValueError):
            model(-1.0, 3, 1, SINGLE_GROUP)
        with pytest.raises(ValueError):
            model(1.0, 0, 1, SINGLE_GROUP)
        with pytest.raises(ValueError):
            model(1.0, 3, 1, "triple_group")


class TestBlockStructure:
    def test_single_group_layout(self):
        m = model(2.0, 2, 1, SINGLE_GROUP)
        got = noiseless_covariance(m).values
        want = np.array([
            [2.0, 0.0, 1.0, 1.0],
            [0.0, 2.0, 1.0, 1.0],
            [1.0, 1.0, 2.0, 0.0],
            [1.0, 1.0, 0.0, 2.0],
        ])
        np.testing.assert_array_equal(got, want)

    def test_partial_extension_layout(self):
        m = model(2.0, 2, Fraction(1, 2), SINGLE_GROUP)
        got = noiseless_covariance(m).values
        want = np.array([
            [2.0, 0.0, 1.0],
            [0.0, 2.0, 1.0],
            [1.0, 1.0, 2.0],
        ])
        np.testing.assert_array_equal(got, want)

    def test_multi_group_layout(self):
        m = model(3.0, 3, 2, MULTI_GROUP)
        got = noiseless_covariance(m).values
        assert got.shape == (9, 9)
        np.testing.assert_array_equal(np.diag(got), np.full(9, 3.0))
        for b in range(3):
            block = got[3 * b:3 * b + 3, 3 * b:3 * b + 3]
            np.testing.assert_array_equal(block, 3.0 * np.eye(3))
        assert got[0, 3] == got[0, 6] == got[3, 6] == 1.0

    def test_noisy_adds_identity(self):
        m = model(2.0, 2, 1, SINGLE_GROUP)
        np.testing.assert_array_equal(
            noisy_covariance(m).values,
            noiseless_covariance(m).values + np.eye(4),
        )

    def test_nested_block_equals_multi_group_pattern(self):
        m = model(5.0, 3, 2, MULTI_GROUP)
        np.testing.assert_array_equal(
            nested_block(3, 5.0, 3).values,
            noiseless_covariance(m).values,
        )

    def test_normalized_block_is_noisy_over_power(self):
        k, s, m_o = 3, 4.0, 3
        m = model(s, m_o, k - 1, MULTI_GROUP)
        np.testing.assert_allclose(
            normalized_nested_block(k, s / (s + 1.0), m_o).values,
            noisy_covariance(m).values / (s + 1.0),
            rtol=1e-15,
        )

    def test_structured_matrix_rejects_asymmetry(self):
        with pytest.raises(ValueError):
            covariance.StructuredMatrix(np.array([[1.0, 2.0], [3.0, 1.0]]), "x")
        with pytest.raises(ValueError):
            covariance.StructuredMatrix(np.ones((2, 3)), "x")


class TestDeterminants:
    def test_frozen_single_group_value(self):
        # sigma_x2 = 100, m_o = 3, alpha = 1:
        # 101^6 * (1 - (100/101)^2) = 101^4 * 201 = 20916140601
        m = model(100.0, 3, 1, SINGLE_GROUP)
        got = det_noisy_single_group(m)
        assert got == pytest.approx(20916140601.0, rel=1e-12)
        oracle = det_numeric(noisy_covariance(m).values)
        assert got == pytest.approx(oracle, rel=1e-9)

    def test_frozen_multi_group_value(self):
        # sigma_x2 = 100, m_o = 3, alpha = 2: 101^6 * 301 = 319517565330901
        m = model(100.0, 3, 2, MULTI_GROUP)
        got = det_noisy_multi_group(m)
        assert got == pytest.approx(319517565330901.0, rel=1e-12)
        oracle = det_numeric(noisy_covariance(m).values)
        assert got == pytest.approx(oracle, rel=1e-9)

    def test_frozen_normalized_values(self):
        assert det_normalized_nested(2, 0.5) == pytest.approx(0.75, rel=1e-15)
        assert det_normalized_nested(3, 0.8) == pytest.approx(0.104, rel=1e-12)

    @pytest.mark.parametrize("m_o", [2, 3, 4, 5, 6, 7])
    @pytest.mark.parametrize("sigma_x2", [0.1, 1.0, 10.0, 100.0])
    def test_single_group_grid_against_lu(self, m_o, sigma_x2):
        for k in range(0, m_o + 1):
            m = model(sigma_x2, m_o, Fraction(k, m_o), SINGLE_GROUP)
            closed = det_noisy_single_group(m)
            oracle = det_numeric(noisy_covariance(m).values)
            assert closed == pytest.approx(oracle, rel=1e-9)

    @pytest.mark.parametrize("m_o", [2, 3, 4, 5, 6, 7])
    @pytest.mark.parametrize("sigma_x2", [0.1, 1.0, 10.0, 100.0])
    def test_multi_group_grid_against_lu(self, m_o, sigma_x2):
        for alpha in range(1, m_o):
            m = model(sigma_x2, m_o, alpha, MULTI_GROUP)
            closed = det_noisy_multi_group(m)
            oracle = det_numeric(noisy_covariance(m).values)
            assert closed == pytest.approx(oracle, rel=1e-9)

    def test_cases_agree_at_alpha_one(self):
        for s in (0.5, 1.0, 100.0):
            for m_o in (2, 3, 5):
                ds = det_noisy_single_group(model(s, m_o, 1, SINGLE_GROUP))
                dm = det_noisy_multi_group(model(s, m_o, 1, MULTI_GROUP))
                assert ds == pytest.approx(dm, rel=1e-13)

    def test_case_tags_enforced(self):
        with pytest.raises(ValueError):
            det_noisy_single_group(model(1.0, 3, 1, MULTI_GROUP))
        with pytest.raises(ValueError):
            det_noisy_multi_group(model(1.0, 3, 1, SINGLE_GROUP))

    @settings(deadline=None, max_examples=60)
    @given(
        sigma_x2=st.floats(0.0, 500.0),
        m_o=st.integers(1, 6),
        k=st.integers(0, 6),
    )
    def test_single_group_property(self, sigma_x2, m_o, k):
        k = min(k, m_o)
        m = model(sigma_x2, m_o, Fraction(k, m_o), SINGLE_GROUP)
        closed = det_noisy_single_group(m)
        oracle = det_numeric(noisy_covariance(m).values)
        assert closed == pytest.approx(oracle, rel=1e-9, abs=1e-12)

    @settings(deadline=None, max_examples=60)
    @given(
        sigma_x2=st.floats(0.0, 500.0),
        m_o=st.integers(2, 6),
        alpha=st.integers(1, 5),
    )
    def test_multi_group_property(self, sigma_x2, m_o, alpha):
        alpha = min(alpha, m_o - 1)
        m = model(sigma_x2, m_o, alpha, MULTI_GROUP)
        closed = det_noisy_multi_group(m)
        oracle = det_numeric(noisy_covariance(m).values)
        assert closed == pytest.approx(oracle, rel=1e-9, abs=1e-12)

    def test_det_numeric_sanity(self):
        assert det_numeric(np.eye(3)) == pytest.approx(1.0, rel=1e-15)
        assert det_numeric(np.diag([2.0, 3.0])) == pytest.approx(6.0, rel=1e-15)
        assert det_numeric(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0)


class TestSpectra:
    def test_frozen_example(self):
        got = eigs_normalized_nested(3, 0.8, 2)
        assert len(got) == 3
        values = [v for v, _ in got]
        mults = [c for _, c in got]
        np.testing.assert_allclose(values, [0.2, 1.0, 2.6], rtol=1e-12)
        assert mults == [2, 3, 1]

    def test_merges_at_beta_zero(self):
        assert eigs_normalized_nested(4, 0.0, 3) == [(1.0, 12)]

    def test_merges_at_k_one(self):
        assert eigs_normalized_nested(1, 0.7, 4) == [(1.0, 4)]

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    @pytest.mark.parametrize("m_o", [1, 2, 4])
    @pytest.mark.parametrize("beta", [0.0, 0.2, 0.5, 0.8, 0.99])
    def test_against_eigh_oracle(self, k, m_o, beta):
        a = normalized_nested_block(k, beta, m_o).values
        numeric = cluster_eigenvalues(np.linalg.eigvalsh(a))
        closed = eigs_normalized_nested(k, beta, m_o)
        assert [c for _, c in numeric] == [c for _, c in closed]
        np.testing.assert_allclose(
            [v for v, _ in numeric], [v for v, _ in closed], atol=1e-8
        )

    def test_multiplicities_sum_to_dimension(self):
        for k in (1, 2, 5):
            for m_o in (1, 3):
                got = eigs_normalized_nested(k, 0.3, m_o)
                assert sum(c for _, c in got) == k * m_o

    def test_all_ones_is_top_eigenvector(self):
        k, beta, m_o = 3, 0.8, 2
        a = normalized_nested_block(k, beta, m_o).values
        ones = np.ones(k * m_o)
        np.testing.assert_allclose(a @ ones, (1.0 + (k - 1) * beta) * ones, rtol=1e-13)

    def test_top_eigenvector_overlap_with_ones(self):
        # the unit eigenvector for the simple top eigenvalue is the
        # normalized all-ones vector, so |<v, ones>| = sqrt(k*m_o)
        k, beta, m_o = 4, 0.6, 3
        a = normalized_nested_block(k, beta, m_o).values
        vals, vecs = np.linalg.eigh(a)
        top = vecs[:, np.argmax(vals)]
        assert abs(abs(top @ np.ones(k * m_o)) - np.sqrt(k * m_o)) < 1e-9

    def test_spectrum_gives_determinant(self):
        for k, beta in ((2, 0.5), (3, 0.8), (5, 0.31)):
            prod = 1.0
            for v, c in eigs_normalized_nested(k, beta, 3):
                prod *= v ** c
            assert prod == pytest.approx(det_normalized_nested(k, beta), rel=1e-12)


class TestDefiniteness:
    @pytest.mark.parametrize("case,alpha", [(SINGLE_GROUP, 1), (MULTI_GROUP, 2)])
    def test_noiseless_is_psd(self, case, alpha):
        m = model(10.0, 3, alpha, case)
        vals = np.linalg.eigvalsh(noiseless_covariance(m).values)
        assert vals.min() >= -1e-10 * max(1.0, vals.max())

    @pytest.mark.parametrize("case,alpha", [(SINGLE_GROUP, 1), (MULTI_GROUP, 2)])
    def test_noisy_is_pd_with_unit_floor(self, case, alpha):
        # adding unit noise shifts the whole spectrum up by one
        m = model(10.0, 3, alpha, case)
        vals = np.linalg.eigvalsh(noisy_covariance(m).values)
        assert vals.min() >= 1.0 - 1e-10 * vals.max()


class TestClusterEigenvalues:
    def test_empty(self):
        assert cluster_eigenvalues([]) == []

    def test_groups_close_values(self):
        got = cluster_eigenvalues([1.0, 1.0 + 1e-12, 2.0])
        assert [c for _, c in got] == [2, 1]

    def test_respects_explicit_tol(self):
        got = cluster_eigenvalues([1.0, 1.1, 2.0], tol=0.2)
        assert [c for _, c in got] == [2, 1]
        got = cluster_eigenvalues([1.0, 1.1, 2.0], tol=0.01)
        assert [c for _, c in got] == [1, 1, 1]


class TestReport:
    def test_report_row_shape_and_agreement(self):
        k, beta, m_o, closed, numeric, rel = normalized_nested_report(3, 0.8, 2)
        assert (k, beta, m_o) == (3, 0.8, 2)
        assert closed == pytest.approx(0.104, rel=1e-12)
        assert rel < 1e-12
