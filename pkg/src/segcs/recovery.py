"""Sparse recovery from segmented samples.

Two decoders: greedy orthogonal matching pursuit (pick the column most
correlated with the residual, refit by least squares, repeat s times)
and iterative soft-thresholding for the l1-penalized least squares
problem.  mse_experiment runs paired trials of plain versus extended
matrices on the same signals and noise, measuring per-symbol squared
error, to show the extra free rows buy distortion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import permgroup, sampler
from .seeds import child_seed, stream

OMP = "omp"
ISTA = "ista"


@dataclass(frozen=True)
class RecoveryConfig:
    """Decoder choice and its knobs.

    shrinkage_weight is the soft-threshold level for ista; left unset it
    defaults to sqrt(2 ln n), the universal level for unit noise.
    """

    solver: str = OMP
    sparsity: int = 1
    max_iter: int = 500
    tol: float = 1e-10
    shrinkage_weight: float | None = None
    power_iters: int = 50
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.solver not in (OMP, ISTA):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.sparsity < 0:
            raise ValueError("sparsity must be non-negative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.tol < 0:
            raise ValueError("tol must be non-negative")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    x_hat: np.ndarray
    converged: bool
    iterations: int
    residual_norm: float
    rank_deficient: bool = False


def distortion(x, x_hat) -> float:
    """Per-symbol squared error (1/n) sum (x_i - x_hat_i)^2."""
    x = np.asarray(x, dtype=np.float64)
    x_hat = np.asarray(x_hat, dtype=np.float64)
    if x.shape != x_hat.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {x_hat.shape}")
    diff = x - x_hat
    return float(diff @ diff) / x.size


def spike_amplitude_for_snr(gamma: float, n: int, sparsity: int) -> float:
    """Spike magnitude giving per-sample SNR gamma against unit noise.

    Each sample has variance sparsity * amplitude^2 / n under the
    variance-1/n matrix entries, so amplitude = sqrt(gamma n / s).
    """
    if sparsity < 1:
        raise ValueError("sparsity must be positive")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return math.sqrt(gamma * n / sparsity)


def _omp(a, y, sparsity, tol):
    m, n = a.shape
    x = np.zeros(n)
    support: list[int] = []
    coef = np.zeros(0)
    residual = y.copy()
    y_scale = max(1.0, float(np.linalg.norm(y)))
    rank_deficient = False
    for _ in range(min(sparsity, n)):
        if np.linalg.norm(residual) <= tol * y_scale:
            break
        scores = np.abs(a.T @ residual)
        scores[support] = -1.0  # atoms are never re-picked
        pick = int(np.argmax(scores))
        support.append(pick)
        sub = a[:, support]
        coef, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
        if rank < len(support):
            rank_deficient = True
        residual = y - sub @ coef
    x[support] = coef
    return RecoveryResult(
        x_hat=x,
        converged=True,
        iterations=len(support),
        residual_norm=float(np.linalg.norm(residual)),
        rank_deficient=rank_deficient,
    )


def _squared_spectral_norm(a, iters):
    # power iteration on a^T a from a fixed start, so the step size is
    # deterministic
    n = a.shape[1]
    v = np.full(n, 1.0 / math.sqrt(n))
    lam = 1.0
    for _ in range(iters):
        w = a.T @ (a @ v)
        lam = float(np.linalg.norm(w))
        if lam == 0.0:
            return 1.0
        v = w / lam
    return lam


def _soft(v, level):
    return np.sign(v) * np.maximum(np.abs(v) - level, 0.0)


def _ista(a, y, config):
    m, n = a.shape
    level = config.shrinkage_weight
    if level is None:
        level = math.sqrt(2.0 * math.log(n))
    lip = _squared_spectral_norm(a, config.power_iters)
    step = 1.0 / lip
    x = np.zeros(n)
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        grad = a.T @ (a @ x - y)
        x_new = _soft(x - step * grad, level * step)
        delta = float(np.linalg.norm(x_new - x))
        x = x_new
        if delta <= config.tol * max(1.0, float(np.linalg.norm(x))):
            converged = True
            break
    residual = float(np.linalg.norm(a @ x - y))
    return RecoveryResult(x_hat=x, converged=converged, iterations=it,
                          residual_norm=residual)


def recover(y, matrix: sampler.SamplingMatrix, config: RecoveryConfig) -> RecoveryResult:
    """Reconstruct the signal from one sample record's noisy samples."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (matrix.m,):
        raise ValueError(f"y must have shape ({matrix.m},), got {y.shape}")
    if config.sparsity > matrix.m_o:
        raise ValueError(
            f"sparsity {config.sparsity} above m_o={matrix.m_o} is outside the "
            "meaningful recovery regime"
        )
    a = matrix.full()
    if config.solver == OMP:
        return _omp(a, y, config.sparsity, config.tol)
    return _ista(a, y, config)


@dataclass(frozen=True, eq=False)
class DistortionReport:
    """Distortion of one extension-rate arm over the experiment's trials."""

    alpha: Fraction
    distortions: np.ndarray
    converged: np.ndarray

    @property
    def trials(self) -> int:
        return self.distortions.size

    @property
    def mean(self) -> float:
        return float(np.nanmean(self.distortions))

    @property
    def stderr(self) -> float:
        d = self.distortions[np.isfinite(self.distortions)]
        if d.size < 2:
            return float("nan")
        return float(np.std(d, ddof=1) / math.sqrt(d.size))

    @property
    def converged_count(self) -> int:
        return int(np.sum(self.converged))


def mse_experiment(base: sampler.MatrixSpec, signal: sampler.SignalModel,
                   alphas, config: RecoveryConfig) -> list[DistortionReport]:
    """Paired distortion comparison across extension rates.

    Every trial draws one matrix seed, one signal, and one noise vector
    for the m_o original rows; all arms share those bit for bit and only
    the extended rows differ (fresh noise per arm, since the rows are
    new).  Solver failures are recorded per trial, never raised.
    """
    alphas = [Fraction(a) for a in alphas]
    if signal.n != base.n:
        raise ValueError(f"signal has n={signal.n}, spec has n={base.n}")
    if config.sparsity > base.m_o:
        raise ValueError("sparsity above m_o is outside the meaningful recovery regime")
    seq_sets = {a: permgroup.sequences_for_extension(base.m_o, a) for a in alphas}
    dists = {a: np.full(config.trials, np.nan) for a in alphas}
    convs = {a: np.zeros(config.trials, dtype=bool) for a in alphas}
    for t in range(config.trials):
        spec_t = replace(base, seed=child_seed(config.seed, "experiment-matrix", t))
        x = signal.draw(stream(config.seed, "experiment-signal", t))
        z_shared = stream(config.seed, "experiment-noise-shared", t).standard_normal(base.m_o)
        for arm, alpha in enumerate(alphas):
            matrix = sampler.generate(spec_t, seq_sets[alpha])
            w = matrix.full() @ x
            z_ext = stream(config.seed, "experiment-noise-extended", t, arm).standard_normal(
                matrix.m_e
            )
            y = w + np.concatenate([z_shared, z_ext])
            try:
                result = recover(y, matrix, config)
            except np.linalg.LinAlgError:
                continue
            dists[alpha][t] = distortion(x, result.x_hat)
            convs[alpha][t] = result.converged
    return [
        DistortionReport(alpha=a, distortions=dists[a], converged=convs[a]) for a in alphas
    ]
