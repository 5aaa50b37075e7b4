"""Self-check suites: constructions and closed forms against brute force.

Each check recomputes the claim from first principles (exhaustive
enumeration, pivoted-LU determinants, dense eigendecompositions) rather
than trusting the formulas being checked.  The CLI drives these; the
test suite runs the same grids with tighter reporting.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import covariance, permgroup
from .bounds import BoundQuery, capacity_ub_multi_group, capacity_ub_single_group

DET_RTOL = 1e-9
EIG_TOL = 1e-8
CAPACITY_RTOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _single_alphas(m_o: int) -> list[Fraction]:
    return [Fraction(k, m_o) for k in range(m_o + 1)]


def check_partition(m_o: int) -> Check:
    name = f"cyclic partition m_o={m_o}"
    family = permgroup.cyclic_partition(m_o)
    expected_groups = math.factorial(m_o - 1)
    seen = set()
    for group in family:
        for s in group:
            seen.add(s.elements)
        for a, b in itertools.combinations(group, 2):
            if permgroup.correlation_count(a, b) != 0:
                return Check(name, False, f"correlated pair inside group {group.group_id}")
    everything = set(itertools.permutations(range(1, m_o + 1)))
    ok = len(family) == expected_groups and seen == everything
    detail = f"{len(family)} groups, {len(seen)} sequences"
    return Check(name, ok, detail)


def check_congruence(m_o: int) -> Check:
    name = f"congruence family m_o={m_o}"
    worst = None
    for alpha in range(1, m_o):
        family = permgroup.congruence_groups(m_o, alpha)
        for ga, gb in itertools.combinations(family.groups, 2):
            for a in ga:
                for b in gb:
                    c = permgroup.correlation_count(a, b)
                    if c != 1:
                        worst = (alpha, a.elements, b.elements, c)
    if worst:
        return Check(name, False, f"alpha={worst[0]}: pair agrees {worst[3]} times")
    return Check(name, True, f"all alpha up to {m_o - 1}, every cross pair agrees once")


def groups_suite(m_o_values=(2, 3, 4, 5, 6), primes=(2, 3, 5, 7, 11)) -> list[Check]:
    checks = [check_partition(m_o) for m_o in m_o_values]
    checks.extend(check_congruence(p) for p in primes if permgroup._is_prime(p))
    return checks


def _rel_err(closed: float, numeric: float) -> float:
    return abs(closed - numeric) / max(abs(numeric), 1e-300)


def check_det(case: str, m_o: int, sigma: float) -> Check:
    name = f"det {case} m_o={m_o} sigma_x2={sigma:g}"
    if case == covariance.SINGLE_GROUP:
        alphas = _single_alphas(m_o)
        closed_fn = covariance.det_noisy_single_group
    else:
        alphas = [Fraction(a) for a in range(1, m_o)]
        closed_fn = covariance.det_noisy_multi_group
    worst = 0.0
    for alpha in alphas:
        model = covariance.CovarianceModel(sigma_x2=sigma, m_o=m_o, alpha=alpha, case=case)
        numeric = covariance.det_numeric(covariance.noisy_covariance(model).values)
        worst = max(worst, _rel_err(closed_fn(model), numeric))
    return Check(name, worst <= DET_RTOL, f"max rel err {worst:.3e} over {len(alphas)} alphas")


def check_eigs(k: int, m_o: int, betas=(0.2, 0.5, 0.8, 0.99)) -> Check:
    name = f"eigs k={k} m_o={m_o}"
    for beta in betas:
        block = covariance.normalized_nested_block(k, beta, m_o)
        numeric = np.linalg.eigvalsh(block.values)
        tol = EIG_TOL * max(1.0, float(np.max(np.abs(numeric))))
        clusters = covariance.cluster_eigenvalues(numeric, tol)
        closed = covariance.eigs_normalized_nested(k, beta, m_o)
        if len(clusters) != len(closed):
            return Check(name, False, f"beta={beta}: {len(clusters)} clusters vs {len(closed)}")
        for (cv, cm), (ev, em) in zip(clusters, closed):
            if cm != em or abs(cv - ev) > tol:
                return Check(name, False, f"beta={beta}: cluster ({cv:.6g},{cm}) vs ({ev:.6g},{em})")
    return Check(name, True, f"{len(betas)} beta values")


def check_eigenvector_alignment(k: int, m_o: int, beta: float) -> Check:
    """The top eigenvector lies along all-ones; the rest are orthogonal to it."""
    name = f"eigvecs k={k} m_o={m_o} beta={beta:g}"
    block = covariance.normalized_nested_block(k, beta, m_o)
    values, vectors = np.linalg.eigh(block.values)
    ones = np.ones(k * m_o)
    overlaps = np.abs(ones @ vectors)
    top = int(np.argmax(values))
    ok = True
    detail = ""
    if beta > 0:
        expected = math.sqrt(k * m_o)
        if abs(overlaps[top] - expected) > 1e-8 * expected:
            ok, detail = False, f"top overlap {overlaps[top]:.6g} vs {expected:.6g}"
        others = np.delete(overlaps, top)
        if others.size and float(np.max(others)) > 1e-7:
            ok, detail = False, f"non-top overlap {float(np.max(others)):.3e}"
    return Check(name, ok, detail or "all-ones alignment as predicted")


def check_definiteness(m_o: int, sigma: float) -> Check:
    """Noiseless covariance PSD; noisy covariance bounded below by 1 - beta."""
    name = f"definiteness m_o={m_o} sigma_x2={sigma:g}"
    cases = [(covariance.SINGLE_GROUP, a) for a in _single_alphas(m_o)]
    cases += [(covariance.MULTI_GROUP, Fraction(a)) for a in range(1, m_o)]
    for case, alpha in cases:
        model = covariance.CovarianceModel(sigma_x2=sigma, m_o=m_o, alpha=alpha, case=case)
        noiseless = np.linalg.eigvalsh(covariance.noiseless_covariance(model).values)
        noisy = np.linalg.eigvalsh(covariance.noisy_covariance(model).values)
        if float(noiseless.min()) < -1e-10 * max(1.0, sigma):
            return Check(name, False, f"{case} alpha={alpha}: noiseless eig {noiseless.min():.3e}")
        if float(noisy.min()) < (1.0 - model.beta) - 1e-10 * max(1.0, sigma):
            return Check(name, False, f"{case} alpha={alpha}: noisy eig {noisy.min():.3e}")
    return Check(name, True, f"{len(cases)} constructions")


def covariance_suite(m_o_values=(2, 3, 4, 5, 6, 7), sigmas=(0.1, 1.0, 10.0, 100.0),
                     k_max=6, eig_m_o_max=5) -> list[Check]:
    checks = []
    for m_o in m_o_values:
        for sigma in sigmas:
            checks.append(check_det(covariance.SINGLE_GROUP, m_o, sigma))
            if m_o >= 2:
                checks.append(check_det(covariance.MULTI_GROUP, m_o, sigma))
    for k in range(1, k_max + 1):
        for m_o in range(2, eig_m_o_max + 1):
            checks.append(check_eigs(k, m_o))
    checks.append(check_eigenvector_alignment(3, 4, 0.8))
    checks.append(check_eigenvector_alignment(2, 5, 0.5))
    for m_o in m_o_values[:3]:
        checks.append(check_definiteness(m_o, 10.0))
    return checks


def check_capacity_identity(case: str, m_o: int, gamma: float,
                            alphas=None) -> Check:
    """Capacity closed form equals half the log-determinant of the noisy covariance."""
    name = f"capacity {case} m_o={m_o} gamma={gamma:g}"
    if alphas is None:
        if case == covariance.SINGLE_GROUP:
            alphas = _single_alphas(m_o)
        else:
            alphas = [Fraction(a) for a in range(1, m_o)]
    worst = 0.0
    for alpha in alphas:
        model = covariance.CovarianceModel(sigma_x2=gamma, m_o=m_o, alpha=alpha, case=case)
        query = BoundQuery(gamma=gamma, alpha=alpha, m_o=m_o, n=max(model.m, 1),
                           rd=0.0, case=case)
        if case == covariance.SINGLE_GROUP:
            closed = capacity_ub_single_group(query)
        else:
            closed = capacity_ub_multi_group(query)
        numeric = covariance.det_numeric(covariance.noisy_covariance(model).values)
        oracle = 0.5 * math.log2(numeric)
        worst = max(worst, abs(closed - oracle) / max(abs(oracle), 1e-300))
    return Check(name, worst <= CAPACITY_RTOL,
                 f"max rel err {worst:.3e} over {len(alphas)} alphas")


def capacity_suite(m_o_values=(2, 3, 4, 5, 6, 7),
                   gammas=(0.1, 1.0, 10.0, 100.0)) -> list[Check]:
    checks = []
    for m_o in m_o_values:
        for gamma in gammas:
            checks.append(check_capacity_identity(covariance.SINGLE_GROUP, m_o, gamma))
            if m_o >= 2:
                checks.append(check_capacity_identity(covariance.MULTI_GROUP, m_o, gamma))
    return checks


def run_suites(suite: str, small: bool = False, m_o: int | None = None,
               alpha: Fraction | None = None, gamma: float | None = None) -> list[Check]:
    """Assemble the requested suite, narrowed by any explicit parameters."""
    if suite not in ("groups", "covariance", "capacity", "all"):
        raise ValueError(f"unknown suite {suite!r}")
    checks: list[Check] = []
    if suite in ("groups", "all"):
        m_o_values = (m_o,) if m_o else ((2, 3) if small else (2, 3, 4, 5, 6))
        primes = [p for p in ((m_o,) if m_o else ((2, 3, 5) if small else (2, 3, 5, 7, 11)))
                  if permgroup._is_prime(p)]
        checks.extend(check_partition(v) for v in m_o_values if v <= permgroup.ENUMERATION_CAP)
        checks.extend(check_congruence(p) for p in primes)
    if suite in ("covariance", "all"):
        m_o_values = (m_o,) if m_o else ((2, 3) if small else (2, 3, 4, 5, 6, 7))
        sigmas = (gamma,) if gamma is not None else ((1.0, 100.0) if small else (0.1, 1.0, 10.0, 100.0))
        k_max = 3 if small else 6
        checks.extend(covariance_suite(m_o_values, sigmas, k_max=k_max))
    if suite in ("capacity", "all"):
        m_o_values = (m_o,) if m_o else ((2, 3) if small else (2, 3, 4, 5, 6, 7))
        gammas = (gamma,) if gamma is not None else ((1.0, 100.0) if small else (0.1, 1.0, 10.0, 100.0))
        for v in m_o_values:
            for g in gammas:
                if alpha is not None:
                    case = (covariance.SINGLE_GROUP if Fraction(alpha) <= 1
                            else covariance.MULTI_GROUP)
                    checks.append(check_capacity_identity(case, v, g, alphas=[Fraction(alpha)]))
                else:
                    checks.append(check_capacity_identity(covariance.SINGLE_GROUP, v, g))
                    if v >= 2:
                        checks.append(check_capacity_identity(covariance.MULTI_GROUP, v, g))
    return checks


def det_report_rows(k_max=6, m_o_values=(2, 3, 4, 5),
                    betas=(0.2, 0.5, 0.8, 0.99)) -> list[tuple]:
    """CSV rows (k, beta, m_o, closed_form, numeric, rel_err) for export."""
    rows = []
    for k in range(1, k_max + 1):
        for m_o in m_o_values:
            for beta in betas:
                rows.append(covariance.normalized_nested_report(k, beta, m_o))
    return rows
