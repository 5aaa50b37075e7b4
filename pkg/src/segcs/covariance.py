"""Covariance structure of segmented samples and its closed forms.

With i.i.d. variance-1/n matrix entries and an i.i.d. signal of variance
sigma_x2, two samples correlate in proportion to the number of segments
their rows share: sigma_x2 on the diagonal, sigma_x2/m_o for rows that
share one segment, 0 otherwise.  Two constructions matter:

* single_group (extension rate alpha <= 1): the extended rows all come
  from one cyclic group, so they are mutually uncorrelated and only the
  cross block against the original rows is constant.

* multi_group (integer alpha in 1..m_o-1): the extended rows are alpha
  whole congruence groups; every pair of rows from different groups
  shares exactly one segment.  The noiseless covariance is then a block
  pattern with sigma_x2*I on group diagonals and sigma_x2/m_o elsewhere.

Adding unit noise gives the observed-sample covariance sigma_w + I.
Normalizing that by (sigma_x2 + 1) yields a matrix with unit diagonal
blocks and constant beta/m_o off-blocks, beta = sigma_x2/(sigma_x2+1),
whose spectrum has at most three distinct values; determinants follow in
closed form.  det_numeric and numpy eigendecompositions serve as
independent oracles for all of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

SINGLE_GROUP = "single_group"
MULTI_GROUP = "multi_group"

NOISELESS = "noiseless_cov"
NOISY = "noisy_cov"
NESTED = "nested_block"
NORMALIZED = "normalized_block"


def _validate_alpha(case: str, alpha: Fraction, m_o: int) -> Fraction:
    alpha = Fraction(alpha)
    if case == SINGLE_GROUP:
        if not 0 <= alpha <= 1:
            raise ValueError(f"single-group alpha must lie in [0, 1], got {alpha}")
        if (alpha * m_o).denominator != 1:
            raise ValueError(
                f"alpha={alpha} gives a fractional row count for m_o={m_o}"
            )
    elif case == MULTI_GROUP:
        if alpha.denominator != 1 or not 1 <= alpha <= m_o - 1:
            raise ValueError(
                f"multi-group alpha must be an integer in 1..{m_o - 1}, got {alpha}"
            )
    else:
        raise ValueError(f"unknown case {case!r}")
    return alpha


@dataclass(frozen=True)
class CovarianceModel:
    """Parameters that pin down the sample covariance: signal power, geometry, case."""

    sigma_x2: float
    m_o: int
    alpha: Fraction
    case: str

    def __post_init__(self):
        if self.sigma_x2 < 0:
            raise ValueError("sigma_x2 must be non-negative")
        if self.m_o < 1:
            raise ValueError("m_o must be at least 1")
        object.__setattr__(self, "alpha", _validate_alpha(self.case, self.alpha, self.m_o))

    @property
    def beta(self) -> float:
        return self.sigma_x2 / (self.sigma_x2 + 1.0)

    @property
    def m_e(self) -> int:
        return int(self.alpha * self.m_o)

    @property
    def m(self) -> int:
        return self.m_o + self.m_e


@dataclass(frozen=True, eq=False)
class StructuredMatrix:
    """A concrete matrix plus the structural tag it was built under."""

    values: np.ndarray
    structure: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {v.shape}")
        if not np.array_equal(v, v.T):
            raise ValueError("matrix is not symmetric")
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape


def _block_pattern(sizes, diag_scale, off_value):
    m = sum(sizes)
    a = np.full((m, m), off_value)
    start = 0
    for size in sizes:
        a[start : start + size, start : start + size] = diag_scale * np.eye(size)
        start += size
    return a


def noiseless_covariance(model: CovarianceModel) -> StructuredMatrix:
    """Covariance of w = Phi x under the model's construction."""
    s = model.sigma_x2
    if model.case == SINGLE_GROUP:
        sizes = [model.m_o, model.m_e]
    else:
        sizes = [model.m_o] * (int(model.alpha) + 1)
    return StructuredMatrix(_block_pattern(sizes, s, s / model.m_o), NOISELESS)


def noisy_covariance(model: CovarianceModel) -> StructuredMatrix:
    """Covariance of y = w + z, unit noise: noiseless plus the identity."""
    base = noiseless_covariance(model).values
    return StructuredMatrix(base + np.eye(base.shape[0]), NOISY)


def nested_block(k: int, sigma_x2: float, m_o: int) -> StructuredMatrix:
    """The k-group noiseless pattern: sigma_x2*I blocks, sigma_x2/m_o off."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if m_o < 1:
        raise ValueError("m_o must be at least 1")
    if sigma_x2 < 0:
        raise ValueError("sigma_x2 must be non-negative")
    return StructuredMatrix(_block_pattern([m_o] * k, sigma_x2, sigma_x2 / m_o), NESTED)


def normalized_nested_block(k: int, beta: float, m_o: int) -> StructuredMatrix:
    """(nested + I)/(sigma_x2+1): unit diagonal blocks, beta/m_o elsewhere."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if m_o < 1:
        raise ValueError("m_o must be at least 1")
    if not 0 <= beta < 1:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    return StructuredMatrix(_block_pattern([m_o] * k, 1.0, beta / m_o), NORMALIZED)


def det_noisy_single_group(model: CovarianceModel) -> float:
    """|sigma_w + I| = (sigma_x2+1)^m (1 - (sigma_x2/(sigma_x2+1))^2 alpha)."""
    if model.case != SINGLE_GROUP:
        raise ValueError("model is not a single-group construction")
    s = model.sigma_x2
    return (s + 1.0) ** model.m * (1.0 - (s / (s + 1.0)) ** 2 * float(model.alpha))


def det_noisy_multi_group(model: CovarianceModel) -> float:
    """|sigma_w + I| = (sigma_x2+1)^m (1-beta)^alpha (1+alpha*beta)."""
    if model.case != MULTI_GROUP:
        raise ValueError("model is not a multi-group construction")
    s = model.sigma_x2
    beta = model.beta
    a = int(model.alpha)
    return (s + 1.0) ** model.m * (1.0 - beta) ** a * (1.0 + a * beta)


def det_normalized_nested(k: int, beta: float) -> float:
    """Closed-form determinant of the normalized k-group block matrix."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 <= beta < 1:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    return (1.0 - beta) ** (k - 1) * (1.0 + (k - 1) * beta)


def eigs_normalized_nested(k: int, beta: float, m_o: int) -> list[tuple[float, int]]:
    """Spectrum of the normalized k-group block matrix as (value, multiplicity).

    1 with multiplicity (m_o-1)k (eigenvectors orthogonal to all-ones),
    1-beta with multiplicity k-1 (also orthogonal to all-ones), and the
    simple eigenvalue 1+(k-1)beta along the all-ones direction.  Values
    that coincide (k = 1 or beta = 0 collapse some of them) are merged.
    Returned sorted ascending.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if m_o < 1:
        raise ValueError("m_o must be at least 1")
    if not 0 <= beta < 1:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    raw = [(1.0, (m_o - 1) * k), (1.0 - beta, k - 1), (1.0 + (k - 1) * beta, 1)]
    merged: dict[float, int] = {}
    for value, mult in raw:
        if mult > 0:
            merged[value] = merged.get(value, 0) + mult
    return sorted(merged.items())


def det_numeric(a) -> float:
    """Determinant oracle: pivoted LU, diagonal product in extended precision.

    Kept independent of the closed forms on purpose; every closed-form
    determinant is tested against this.
    """
    a = np.asarray(a, dtype=np.float64)
    lu, piv = scipy.linalg.lu_factor(a)
    swaps = int(np.sum(piv != np.arange(piv.size)))
    sign = -1.0 if swaps % 2 else 1.0
    return float(sign * np.prod(np.diag(lu).astype(np.longdouble)))


def cluster_eigenvalues(values, tol: float | None = None) -> list[tuple[float, int]]:
    """Group numerically-close eigenvalues into (mean, multiplicity) clusters.

    Default tolerance is 1e-8 scaled by max(1, spectral radius), wide
    enough to absorb eigh rounding and far below the closed-form gaps.
    """
    values = np.sort(np.asarray(values, dtype=np.float64))
    if values.size == 0:
        return []
    if tol is None:
        tol = 1e-8 * max(1.0, float(np.max(np.abs(values))))
    clusters: list[list[float]] = [[float(values[0])]]
    for v in values[1:]:
        if abs(float(v) - clusters[-1][-1]) <= tol:
            clusters[-1].append(float(v))
        else:
            clusters.append([float(v)])
    return [(sum(c) / len(c), len(c)) for c in clusters]


def normalized_nested_report(k: int, beta: float, m_o: int) -> tuple:
    """One CSV row comparing closed-form and numeric determinants."""
    closed = det_normalized_nested(k, beta)
    numeric = det_numeric(normalized_nested_block(k, beta, m_o).values)
    rel = abs(closed - numeric) / max(abs(numeric), math.ulp(0.0))
    return (k, beta, m_o, closed, numeric, rel)
