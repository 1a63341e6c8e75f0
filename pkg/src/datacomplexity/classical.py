"""Classical complexity metrics: spectra, entropy, cumulants, compression.

Covers everything except topology: intrinsic dimension from the covariance
spectrum, distributional entropy over discretized rows, joint cumulants and
the interaction order they induce, the compression-ratio proxy for
algorithmic complexity, and kernel-spectrum effective dimensions.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dataset import Dataset
from .errors import (
    DegenerateSpectrum,
    EmptyDataset,
    InsufficientSamples,
    InvalidConfig,
    InvalidIndexSet,
    NotStandardized,
    NumericalError,
    OrderTooHigh,
)

CUMULANT_ORDER_CAP = 4
EIGENVALUE_ZERO_REL = 1e-10  # eigenvalues below this * lambda_max count as zero
COMPRESSION_LEVEL = 9  # pinned zlib level; recorded in reports


@dataclass(frozen=True)
class Spectrum:
    """Non-negative eigenvalues sorted descending, with their origin."""

    eigenvalues: np.ndarray
    source: str = "covariance"

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        if ev.ndim != 1 or ev.size == 0:
            raise DegenerateSpectrum("spectrum must be a non-empty 1-D array")
        if not np.all(np.isfinite(ev)):
            raise NumericalError("non-finite eigenvalue")
        if np.any(ev < -1e-10 * max(1.0, float(np.max(np.abs(ev))))):
            raise NumericalError(f"negative eigenvalue beyond tolerance: {ev.min()}")
        ev = np.sort(np.clip(ev, 0.0, None))[::-1].copy()
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    def rank(self) -> int:
        """Count of eigenvalues above the relative zero threshold."""
        ev = self.eigenvalues
        if ev[0] <= 0.0:
            return 0
        return int(np.sum(ev > EIGENVALUE_ZERO_REL * ev[0]))


@dataclass(frozen=True)
class CumulantValue:
    index_set: tuple[int, ...]
    order: int
    value: float


def covariance_spectrum(ds: Dataset) -> Spectrum:
    """Eigenvalues of the d x d sample covariance matrix, clamped at zero."""
    if ds.n_samples < 2:
        raise InsufficientSamples("covariance needs N >= 2 rows")
    cov = np.cov(ds.matrix, rowvar=False, ddof=1)
    cov = np.atleast_2d(cov)
    if not np.all(np.isfinite(cov)):
        raise NumericalError("covariance overflowed; standardize the data first")
    ev = np.linalg.eigvalsh(cov)
    return Spectrum(eigenvalues=np.clip(ev, 0.0, None), source="covariance")


def intrinsic_dimension(s: Spectrum) -> float:
    """Participation ratio of the spectrum: (sum)^2 / sum of squares."""
    ev = s.eigenvalues
    total = float(ev.sum())
    sq = float((ev**2).sum())
    if sq <= 0.0:
        raise DegenerateSpectrum("all eigenvalues are zero")
    return total * total / sq


def effective_rank(s: Spectrum) -> float:
    """Same participation-ratio formula applied to a kernel spectrum.

    Checked per call against the regularized effective dimension at zero
    ridge: r_eff can never exceed the count of nonzero eigenvalues.
    """
    r = intrinsic_dimension(s)
    assert r <= s.rank() + 1e-9, "effective rank exceeded the spectrum rank"
    return r


def kernel_effective_dimension(s: Spectrum, lam: float) -> float:
    """Ridge-regularized dimension: sum of eig / (eig + lam).

    The relative zero threshold applies at every lam, not just lam = 0 where
    the value is the nonzero-eigenvalue count; otherwise a sub-threshold
    eigenvalue could push d_eff above the rank for tiny ridges. Each call
    asserts the spectral lower bound (sum)^2 / (sum of squares + lam * sum).
    """
    if lam < 0:
        raise InvalidConfig("regularization must be >= 0")
    ev = s.eigenvalues
    if ev[0] > 0.0:
        ev = ev[ev > EIGENVALUE_ZERO_REL * ev[0]]
    if lam == 0.0:
        d_eff = float(s.rank())
    else:
        d_eff = float(np.sum(ev / (ev + lam)))
    total = float(ev.sum())
    denom = float((ev**2).sum()) + lam * total  # can underflow for subnormal spectra
    if total > 0.0 and denom > 0.0:
        bound = total * total / denom
        assert d_eff >= bound - 1e-9, "effective dimension fell below its spectral lower bound"
    return d_eff


def distributional_entropy(ds: Dataset, bins: int) -> float:
    """Shannon entropy (bits) of the empirical distribution over binned rows.

    Each column is split into `bins` equal-width bins over its own range; a
    row becomes the tuple of its bin ids. Constant columns land in bin 0.
    """
    if bins < 1:
        raise InvalidConfig("bins must be >= 1")
    # bin ids are invariant under per-column scaling; dividing by the max
    # magnitude keeps ranges finite even for near-float64-max values
    scale = np.max(np.abs(ds.matrix), axis=0)
    scale[scale == 0.0] = 1.0
    m = ds.matrix / scale
    lo = m.min(axis=0)
    hi = m.max(axis=0)
    width = (hi - lo) / bins
    ids = np.zeros(m.shape, dtype=np.int64)
    nz = width > 0
    if np.any(nz):
        ids[:, nz] = np.minimum(((m[:, nz] - lo[nz]) / width[nz]).astype(np.int64), bins - 1)
    _, counts = np.unique(ids, axis=0, return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def _set_partitions(items: tuple[int, ...]):
    """All partitions of a small index tuple into non-empty blocks."""
    if len(items) == 1:
        yield [items]
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1 :]
        yield [(first,)] + part


def joint_cumulant(ds: Dataset, index_set: tuple[int, ...] | list[int]) -> CumulantValue:
    """Joint cumulant of distinct columns via the partition (Moebius) formula.

    kappa = sum over set partitions pi of (-1)^(|pi|-1) (|pi|-1)! times the
    product over blocks of the empirical raw moment of that block. Order 2
    therefore reproduces the covariance entry on standardized data.
    """
    idx = tuple(int(i) for i in index_set)
    k = len(idx)
    if len(set(idx)) != k:
        raise InvalidIndexSet(f"repeated index in {idx}")
    if k < 2:
        raise InvalidIndexSet("cumulant order must be >= 2")
    if k > CUMULANT_ORDER_CAP:
        raise OrderTooHigh(f"order {k} above the cap {CUMULANT_ORDER_CAP}")
    if any(i < 0 or i >= ds.n_features for i in idx):
        raise InvalidIndexSet(f"index out of range in {idx}")
    if not ds.is_standardized:
        raise NotStandardized("cumulants are defined on standardized data")

    cols = {i: ds.matrix[:, i] for i in idx}
    moment_cache: dict[tuple[int, ...], float] = {}

    def moment(block: tuple[int, ...]) -> float:
        key = tuple(sorted(block))
        if key not in moment_cache:
            prod = cols[key[0]].copy()
            for i in key[1:]:
                prod *= cols[i]
            moment_cache[key] = float(prod.mean())
        return moment_cache[key]

    value = 0.0
    for part in _set_partitions(idx):
        term = 1.0
        for block in part:
            term *= moment(block)
        r = len(part)
        value += (-1.0) ** (r - 1) * float(math.factorial(r - 1)) * term
    return CumulantValue(index_set=tuple(sorted(idx)), order=k, value=value)


def max_abs_cumulant(ds: Dataset, order: int) -> float:
    """Largest |cumulant| over all distinct index sets of a given order.

    Index sets are scanned in lexicographic order so the maximum is
    bit-stable across runs.
    """
    best = 0.0
    for idx in combinations(range(ds.n_features), order):
        v = abs(joint_cumulant(ds, idx).value)
        if v > best:
            best = v
    return best


def interaction_order(ds: Dataset, epsilon: float) -> int:
    """Highest order k in 2..4 whose strongest cumulant exceeds epsilon.

    Returns 1 when no order is significant: datasets with no detectable
    interactions get a defined floor.
    """
    if epsilon <= 0:
        raise InvalidConfig("epsilon must be > 0")
    if not ds.is_standardized:
        raise NotStandardized("interaction order is defined on standardized data")
    k_max = min(CUMULANT_ORDER_CAP, ds.n_features)
    result = 1
    for k in range(2, k_max + 1):
        if max_abs_cumulant(ds, k) > epsilon:
            result = k
    return result


def compression_ratio(ds: Dataset) -> float:
    """Compressed/original size of the canonical byte layout.

    The codec is pinned: zlib (DEFLATE) level 9 over row-major little-endian
    float64 bytes. Values near 0 mean highly regular data; values near 1 mean
    incompressible payloads.
    """
    raw = ds.canonical_bytes()
    if len(raw) == 0:
        raise EmptyDataset("nothing to compress")
    compressed = zlib.compress(raw, COMPRESSION_LEVEL)
    return len(compressed) / len(raw)


def kernel_gram(ds: Dataset, kind: str = "rbf", bandwidth: float = 1.0) -> np.ndarray:
    """N x N kernel Gram matrix; 'linear' is X X^T, 'rbf' is the Gaussian kernel.

    The rbf kernel exp(-||x - y||^2 / (2 bandwidth^2)) has unit diagonal.
    """
    x = ds.matrix
    if kind == "linear":
        gram = x @ x.T
    elif kind == "rbf":
        if bandwidth <= 0:
            raise InvalidConfig("rbf bandwidth must be > 0")
        sq = np.sum(x**2, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
        np.clip(d2, 0.0, None, out=d2)
        gram = np.exp(-d2 / (2.0 * bandwidth**2))
        np.fill_diagonal(gram, 1.0)
    else:
        raise InvalidConfig(f"unknown kernel kind {kind!r}")
    if not np.all(np.isfinite(gram)):
        raise NumericalError("kernel matrix contains non-finite entries")
    return 0.5 * (gram + gram.T)


def gram_spectrum(gram: np.ndarray) -> Spectrum:
    """Eigenvalues of a PSD Gram matrix as a kernel Spectrum."""
    gram = np.asarray(gram, dtype=np.float64)
    if not np.all(np.isfinite(gram)):
        raise NumericalError("Gram matrix contains non-finite entries")
    ev = np.linalg.eigvalsh(gram)
    return Spectrum(eigenvalues=np.clip(ev, 0.0, None), source="kernel")
