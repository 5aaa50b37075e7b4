"""Segmented sampling matrices and the sampling model.

The matrix is Phi = [Phi_o; Phi_e].  Phi_o holds m_o original rows with
i.i.d. entries of variance 1/n (Gaussian or Rademacher).  Each extended
row of Phi_e copies one segment of length n/m_o from each original row,
as directed by a permutation sequence, so the extra samples cost no new
analog products.  Samples are y = Phi x + z with unit-variance Gaussian
noise.

empirical_covariance estimates E[w w^T] over fresh (matrix, signal)
pairs and is the Monte Carlo check of the closed forms in covariance.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .permgroup import PermutationSequence
from .seeds import stream

GAUSSIAN = "gaussian"
RADEMACHER = "rademacher"

IID_GAUSSIAN = "iid_gaussian"
SPARSE_SPIKES = "sparse_spikes"

# Trials per RNG batch in empirical_covariance, capped so a batch of
# matrices stays a few MB.  Part of the determinism contract: results
# depend on (seed, trials) only.
_BATCH_CAP = 4096
_BATCH_ELEMENTS = 4_194_304


@dataclass(frozen=True)
class MatrixSpec:
    """Geometry and entry law of the original block Phi_o."""

    m_o: int
    n: int
    distribution: str = GAUSSIAN
    seed: int = 0

    def __post_init__(self):
        if self.m_o < 1:
            raise ValueError("m_o must be at least 1")
        if self.n < self.m_o:
            raise ValueError(f"n={self.n} must be at least m_o={self.m_o}")
        if self.n % self.m_o:
            raise ValueError(f"n={self.n} is not divisible into m_o={self.m_o} segments")
        if self.distribution not in (GAUSSIAN, RADEMACHER):
            raise ValueError(f"unknown distribution {self.distribution!r}")

    @property
    def segment_length(self) -> int:
        return self.n // self.m_o


@dataclass(frozen=True)
class SignalModel:
    """Source of the signals being sampled."""

    n: int
    kind: str
    sigma_x2: float = 0.0
    sparsity: int = 0
    amplitude: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.kind == IID_GAUSSIAN:
            if self.sigma_x2 < 0:
                raise ValueError("sigma_x2 must be non-negative")
        elif self.kind == SPARSE_SPIKES:
            if not 0 <= self.sparsity <= self.n:
                raise ValueError(f"sparsity must lie in 0..{self.n}")
        else:
            raise ValueError(f"unknown signal kind {self.kind!r}")

    @classmethod
    def iid_gaussian(cls, n: int, sigma_x2: float) -> "SignalModel":
        return cls(n=n, kind=IID_GAUSSIAN, sigma_x2=sigma_x2)

    @classmethod
    def sparse_spikes(cls, n: int, sparsity: int, amplitude: float) -> "SignalModel":
        """Exactly `sparsity` entries of magnitude `amplitude`, random support and signs."""
        return cls(n=n, kind=SPARSE_SPIKES, sparsity=sparsity, amplitude=amplitude)

    def draw(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        b = 1 if size is None else size
        if self.kind == IID_GAUSSIAN:
            x = rng.normal(0.0, math.sqrt(self.sigma_x2), size=(b, self.n))
        else:
            x = np.zeros((b, self.n))
            support = rng.random((b, self.n)).argsort(axis=1)[:, : self.sparsity]
            signs = 2.0 * rng.integers(0, 2, size=support.shape) - 1.0
            np.put_along_axis(x, support, self.amplitude * signs, axis=1)
        return x[0] if size is None else x


@dataclass(frozen=True, eq=False)
class SamplingMatrix:
    """Phi_o plus assembled extended rows and the sequences that made them."""

    phi_o: np.ndarray
    phi_e: np.ndarray
    sequences: tuple[PermutationSequence, ...]
    spec: MatrixSpec
    source_rows: np.ndarray  # 0-based (m_e, m_o) gather indices

    @property
    def m_o(self) -> int:
        return self.spec.m_o

    @property
    def m_e(self) -> int:
        return self.phi_e.shape[0]

    @property
    def m(self) -> int:
        return self.m_o + self.m_e

    @property
    def segment_length(self) -> int:
        return self.spec.segment_length

    def full(self) -> np.ndarray:
        return np.vstack([self.phi_o, self.phi_e])


@dataclass(frozen=True, eq=False)
class SampleRecord:
    """One sampling event: noiseless samples w, noisy samples y, noise seed."""

    w: np.ndarray
    y: np.ndarray
    z_seed: int


def _draw_entries(rng, shape, distribution, n):
    if distribution == GAUSSIAN:
        return rng.normal(0.0, 1.0 / math.sqrt(n), size=shape)
    return (2.0 * rng.integers(0, 2, size=shape) - 1.0) / math.sqrt(n)


def sequence_sources(sequences, m_o: int) -> np.ndarray:
    """0-based gather indices, one row per sequence, one column per segment."""
    src = np.zeros((len(sequences), m_o), dtype=np.int64)
    for r, s in enumerate(sequences):
        src[r] = [v - 1 for v in s]
    return src


def _check_sequences(spec: MatrixSpec, sequences) -> tuple[PermutationSequence, ...]:
    seqs = tuple(sequences)
    for s in seqs:
        if s.m_o != spec.m_o:
            raise ValueError(f"sequence {s.elements} has m_o={s.m_o}, spec has {spec.m_o}")
    if len(set(seqs)) != len(seqs):
        raise ValueError("duplicate extension sequences")
    return seqs


def generate(spec: MatrixSpec, sequences=()) -> SamplingMatrix:
    """Draw Phi_o from spec.seed and assemble one extended row per sequence."""
    seqs = _check_sequences(spec, sequences)
    rng = stream(spec.seed, "matrix-entries")
    phi_o = _draw_entries(rng, (spec.m_o, spec.n), spec.distribution, spec.n)
    src = sequence_sources(seqs, spec.m_o)
    phi_e = kernels.assemble_rows(phi_o, src)
    phi_o.setflags(write=False)
    phi_e.setflags(write=False)
    src.setflags(write=False)
    return SamplingMatrix(phi_o=phi_o, phi_e=phi_e, sequences=seqs, spec=spec, source_rows=src)


def sample(matrix: SamplingMatrix, x, noise_seed: int) -> SampleRecord:
    """y = Phi x + z with z i.i.d. standard normal drawn from noise_seed."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (matrix.spec.n,):
        raise ValueError(f"x must have shape ({matrix.spec.n},), got {x.shape}")
    w = matrix.full() @ x
    z = stream(noise_seed, "sample-noise").standard_normal(matrix.m)
    return SampleRecord(w=w, y=w + z, z_seed=noise_seed)


def accumulate_subsamples(matrix: SamplingMatrix, x) -> np.ndarray:
    """All samples via per-segment partial sums instead of dense products.

    The original samples add up their own row's m_o sub-period products;
    each extended sample adds one sub-period product from each source
    row.  Must match matrix.full() @ x to rounding; nothing beyond the
    original rows' products is ever computed.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (matrix.spec.n,):
        raise ValueError(f"x must have shape ({matrix.spec.n},), got {x.shape}")
    return kernels.accumulate_segments(matrix.phi_o, matrix.source_rows, x)


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    trials: int


def _batch_size(m_o: int, n: int) -> int:
    return max(1, min(_BATCH_CAP, _BATCH_ELEMENTS // (m_o * n)))


def empirical_covariance(spec: MatrixSpec, sequences, signal: SignalModel,
                         trials: int, seed: int) -> CovarianceEstimate:
    """Monte Carlo estimate of E[w w^T] with per-entry standard errors.

    Fresh matrix and fresh signal every trial; the covariance being
    estimated is over both sources of randomness.  spec.seed is ignored
    here, the experiment seed drives everything.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard error")
    if signal.n != spec.n:
        raise ValueError(f"signal has n={signal.n}, spec has n={spec.n}")
    seqs = _check_sequences(spec, sequences)
    src = sequence_sources(seqs, spec.m_o)
    m = spec.m_o + len(seqs)
    sum_p = np.zeros((m, m))
    sum_p2 = np.zeros((m, m))
    batch = _batch_size(spec.m_o, spec.n)
    done = 0
    b_idx = 0
    while done < trials:
        b = min(batch, trials - done)
        rng_m = stream(seed, "trial-matrix", b_idx)
        rng_x = stream(seed, "trial-signal", b_idx)
        phi = _draw_entries(rng_m, (b, spec.m_o, spec.n), spec.distribution, spec.n)
        x = signal.draw(rng_x, size=b)
        kernels.covariance_accumulate(phi, src, x, sum_p, sum_p2)
        done += b
        b_idx += 1
    mean = sum_p / trials
    var = (sum_p2 - sum_p * sum_p / trials) / (trials - 1)
    stderr = np.sqrt(np.maximum(var, 0.0) / trials)
    return CovarianceEstimate(mean=mean, stderr=stderr, trials=trials)


def matrix_to_text(a: np.ndarray, **meta) -> str:
    """Dense text format: dimensions header, then one row per line, full precision."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    lines = [f"# dims {a.shape[0]} {a.shape[1]}"]
    lines.extend(f"# {key} {value}" for key, value in meta.items())
    lines.extend(" ".join(format(v, ".17g") for v in row) for row in a)
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(io.StringIO(text), comments="#"))


def record_to_csv(record: SampleRecord) -> str:
    """CSV with one line per sample: index, noiseless w, noisy y."""
    lines = ["index,w,y"]
    lines.extend(
        f"{i},{format(wi, '.17g')},{format(yi, '.17g')}"
        for i, (wi, yi) in enumerate(zip(record.w, record.y))
    )
    return "\n".join(lines) + "\n"
