"""The self-check suites must pass on their own grids."""

from fractions import Fraction

import pytest

from segcs import verify
from segcs.covariance import MULTI_GROUP, SINGLE_GROUP


class TestIndividualChecks:
    def test_partition(self):
        check = verify.check_partition(4)
        assert check.passed
        assert "6 groups" in check.detail

    def test_congruence(self):
        assert verify.check_congruence(5).passed

    def test_det_single(self):
        assert verify.check_det(SINGLE_GROUP, 3, 100.0).passed

    def test_det_multi(self):
        assert verify.check_det(MULTI_GROUP, 5, 1.0).passed

    def test_eigs(self):
        assert verify.check_eigs(3, 4).passed

    def test_eigenvector_alignment(self):
        assert verify.check_eigenvector_alignment(3, 4, 0.8).passed
        assert verify.check_eigenvector_alignment(2, 3, 0.0).passed

    def test_definiteness(self):
        assert verify.check_definiteness(3, 10.0).passed

    def test_capacity_identity(self):
        assert verify.check_capacity_identity(SINGLE_GROUP, 3, 100.0).passed
        assert verify.check_capacity_identity(MULTI_GROUP, 7, 0.1).passed

    def test_capacity_identity_explicit_alpha(self):
        check = verify.check_capacity_identity(MULTI_GROUP, 5, 10.0, alphas=[Fraction(3)])
        assert check.passed
        assert "1 alphas" in check.detail


class TestSuites:
    def test_groups_suite(self):
        checks = verify.groups_suite()
        assert len(checks) == 10
        assert all(c.passed for c in checks)

    def test_small_all_suite(self):
        checks = verify.run_suites("all", small=True)
        assert len(checks) == 37
        assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]

    def test_narrowed_by_m_o(self):
        checks = verify.run_suites("groups", m_o=5)
        names = [c.name for c in checks]
        assert names == ["cyclic partition m_o=5", "congruence family m_o=5"]
        assert all(c.passed for c in checks)

    def test_narrowed_capacity(self):
        checks = verify.run_suites("capacity", m_o=5, alpha=Fraction(2), gamma=10.0)
        assert len(checks) == 1
        assert checks[0].passed
        assert "multi_group" in checks[0].name

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            verify.run_suites("everything")


class TestDetReport:
    def test_rows_agree_to_tolerance(self):
        rows = verify.det_report_rows()
        assert len(rows) == 6 * 4 * 4
        for k, beta, m_o, closed, numeric, rel in rows:
            assert rel < 1e-12, (k, beta, m_o)
            assert closed == pytest.approx(numeric, rel=1e-12)
