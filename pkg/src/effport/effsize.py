"""Effective portfolio size: exact value and its cheaper estimates.

The effective size of a portfolio of M correlated assets is the number of
hypothetical uncorrelated assets whose optimal portfolio behaves the same;
for both the minimum-variance and the growth-optimal framework it equals the
sum of all entries of the inverse correlation matrix. This module also
provides the closed form for uniform correlations, the average-correlation
(even-investment) estimate, the sector-reduced estimate, and the
variance-ratio estimate from index data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corrmat import InverseCorrelationMatrix, symmetric_inverse, _series_values
from .errors import DomainError, InputShapeError


def _matrix_values(c) -> np.ndarray:
    """Accept a CorrelationMatrix, a ReducedSectorMatrix, or a plain array."""
    values = getattr(c, "values", None)
    if values is None:
        values = np.asarray(c, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise InputShapeError(f"need a square matrix, got shape {values.shape}")
    return values


@dataclass(frozen=True)
class SectorPartition:
    """Assignment of asset indices to named sectors."""

    assignment: Mapping[int, str]

    def __post_init__(self):
        if not self.assignment:
            raise InputShapeError("partition must assign at least one asset")
        object.__setattr__(self, "assignment", dict(self.assignment))

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> "SectorPartition":
        """Partition where asset i belongs to sector labels[i]."""
        return cls({i: str(lab) for i, lab in enumerate(labels)})

    @property
    def sectors(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.assignment.values())))

    @property
    def n(self) -> int:
        return len(self.sectors)

    @property
    def sizes(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for label in self.assignment.values():
            out[label] = out.get(label, 0) + 1
        return out


@dataclass(frozen=True, eq=False)
class ReducedSectorMatrix:
    """Sector-averaged correlation matrix.

    Intra-sector entries average over the full sector block including the
    unit diagonal of the asset matrix, so the diagonal here need not be 1.
    """

    values: np.ndarray
    sectors: tuple[str, ...]

    def __post_init__(self):
        a = np.asarray(self.values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != len(self.sectors):
            raise InputShapeError("reduced matrix shape does not match sector count")
        object.__setattr__(self, "values", a)

    @property
    def dim(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class EffSizeReport:
    """All effective-size numbers for one asset set, side by side.

    Estimates that do not apply to the input are None.
    """

    m: int
    m_exact: float
    m_even: float
    m_uniform: float | None = None
    m_sector: float | None = None
    m_variance_ratio: float | None = None


def m_ef_exact(cinv) -> float:
    """Exact effective size: the sum of all entries of the inverse matrix.

    Parameters
    ----------
    cinv : InverseCorrelationMatrix or square array holding the inverse.
    """
    if isinstance(cinv, InverseCorrelationMatrix):
        return float(np.sum(cinv.values))
    return float(np.sum(_matrix_values(cinv)))


def m_ef_uniform(m: int, c: float) -> float:
    """Closed form M / (1 + (M-1) C) for uniformly correlated assets.

    Equals M at C=0, 1 at C=1, and tends to 1/C as M grows.
    """
    if m < 1:
        raise DomainError(f"asset count must be >= 1, got {m}")
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"uniform correlation must lie in [0, 1], got {c}")
    return m / (1.0 + (m - 1) * c)


def average_correlation(c) -> float:
    """Mean of the strictly off-diagonal entries of a correlation matrix."""
    a = _matrix_values(c)
    m = a.shape[0]
    if m < 2:
        raise InputShapeError("average correlation needs at least 2 assets")
    return float((a.sum() - np.trace(a)) / (m * (m - 1)))


def m_ef_even(c) -> float:
    """Effective size of the evenly weighted portfolio, M / (1 + (M-1)<C>).

    <C> is the average off-diagonal correlation. Raises DomainError when the
    denominator is nonpositive (possible only with strongly negative <C>).
    """
    a = _matrix_values(c)
    m = a.shape[0]
    if m < 2:
        raise InputShapeError("even-investment estimate needs at least 2 assets")
    avg = average_correlation(a)
    denom = 1.0 + (m - 1) * avg
    if denom <= 0.0:
        raise DomainError(
            f"nonpositive denominator 1+(M-1)<C> = {denom:.6g} with <C> = {avg:.6g}; "
            "estimate undefined for such negative average correlation"
        )
    return m / denom


def reduce_to_sectors(c, partition: SectorPartition) -> ReducedSectorMatrix:
    """Average a correlation matrix over a sector partition.

    Intra-sector entries sum over the whole block, diagonal included, divided
    by the squared sector size; inter-sector entries average the rectangular
    cross block.
    """
    a = _matrix_values(c)
    m = a.shape[0]
    if set(partition.assignment.keys()) != set(range(m)):
        raise InputShapeError(
            f"partition must cover asset indices 0..{m - 1} exactly"
        )
    sectors = partition.sectors
    weights = np.zeros((len(sectors), m))
    for i, label in partition.assignment.items():
        weights[sectors.index(label), i] = 1.0
    weights /= weights.sum(axis=1, keepdims=True)
    reduced = weights @ a @ weights.T
    reduced = 0.5 * (reduced + reduced.T)
    return ReducedSectorMatrix(values=reduced, sectors=sectors)


def m_ef_sector(c, partition: SectorPartition) -> float:
    """Sector-reduced effective size: entry sum of the inverse reduced matrix."""
    reduced = reduce_to_sectors(c, partition)
    inv, _ = symmetric_inverse(reduced.values)
    return float(np.sum(inv))


def m_ef_variance_ratio(index_returns, constituents: Sequence) -> float:
    """Ratio of the mean constituent variance to the index return variance."""
    idx = _series_values(index_returns)
    if len(constituents) < 1:
        raise InputShapeError("need at least one constituent series")
    cols = [_series_values(s) for s in constituents]
    if any(c.size != idx.size for c in cols):
        raise InputShapeError("constituent series must cover the same periods as the index")
    idx_var = float(np.mean((idx - idx.mean()) ** 2))
    if idx_var == 0.0:
        raise DomainError("index returns have zero variance")
    mean_var = float(np.mean([np.mean((c - c.mean()) ** 2) for c in cols]))
    return mean_var / idx_var


def inverse_participation_ratio(weights) -> float:
    """Herfindahl-style weight concentration measure 1 / sum(f_i^2).

    Distinct from the effective size: it sees only how unevenly wealth is
    spread, not the correlation structure.
    """
    f = np.asarray(getattr(weights, "fractions", weights), dtype=float)
    if not np.all(np.isfinite(f)):
        raise DomainError("weights must be finite")
    ss = float(np.sum(f * f))
    if ss == 0.0:
        raise DomainError("all-zero weights have no participation ratio")
    return 1.0 / ss


def effsize_report(
    c,
    partition: SectorPartition | None = None,
    index_returns=None,
    constituents: Sequence | None = None,
) -> EffSizeReport:
    """Compute every applicable effective-size estimate for one matrix.

    The uniform closed form is filled in only when all off-diagonal entries
    coincide; the sector estimate needs a partition; the variance ratio needs
    an index series plus its constituents.
    """
    a = _matrix_values(c)
    m = a.shape[0]
    inv, _ = symmetric_inverse(a)
    exact = float(np.sum(inv))
    even = m_ef_even(a) if m >= 2 else float(m)

    uniform = None
    if m >= 2:
        off = a[~np.eye(m, dtype=bool)]
        if np.ptp(off) <= 1e-12 and 0.0 <= off[0] <= 1.0:
            uniform = m_ef_uniform(m, float(off[0]))

    sector = m_ef_sector(a, partition) if partition is not None else None
    ratio = None
    if index_returns is not None and constituents is not None:
        ratio = m_ef_variance_ratio(index_returns, constituents)
    return EffSizeReport(
        m=m,
        m_exact=exact,
        m_even=even,
        m_uniform=uniform,
        m_sector=sector,
        m_variance_ratio=ratio,
    )
