"""Growth-optimal (log-wealth) portfolios and their effective size.

Two solution paths are provided for exchangeable win/lose assets. The
first-order path linearizes the optimality condition (valid while the total
invested fraction stays small) and reuses the inverse correlation matrix.
The numeric path maximizes the exact expected log growth, which for identical
assets is a one-variable concave problem solved by golden-section search on
[0, (1-eps)/M]; the upper bound keeps wealth positive even when every asset
loses at once.

The numeric effective size matches total invested wealth between the
correlated portfolio and a fictitious uncorrelated one, interpolating the
uncorrelated total linearly between integer asset counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .binmodel import BinaryModelParams, JointBinaryDistribution, build_joint
from .corrmat import InverseCorrelationMatrix
from .errors import BankruptcyError, DomainError, ExtrapolationError, InputShapeError
from .meanvar import PortfolioWeights

#: Safety margin keeping 1 + f * sum(R) positive at the all-losses outcome.
FEASIBILITY_EPS = 1e-9

#: Absolute bracket width at which golden-section search stops.
BRACKET_TOL = 1e-12

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GrowthResult:
    """Optimal fraction per asset, growth rate at the optimum, and method tag."""

    f_star: float
    g_star: float
    total_fraction: float
    method: str


@dataclass(frozen=True)
class MisestimationResult:
    """Realized growth when the investor optimized under the wrong correlation."""

    c_true: float
    c_assumed: float
    f_assumed: float
    g_realized: float


def kelly_fraction_binary(p: float) -> float:
    """Optimal fraction 2p - 1 for a single even-odds binary bet, floored at 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"win probability must lie in [0, 1], got {p}")
    return max(2.0 * p - 1.0, 0.0)


def growth_rate(weights, dist: JointBinaryDistribution) -> float:
    """Expected log growth of wealth for given fractions under an exact model.

    Raises BankruptcyError when any positive-probability outcome drives
    1 + sum_i f_i R_i to zero or below.
    """
    f = np.asarray(getattr(weights, "fractions", weights), dtype=float)
    if f.shape != (dist.m,):
        raise InputShapeError(f"expected {dist.m} fractions, got shape {f.shape}")
    probs = dist.probabilities
    gains = dist.outcomes @ f
    live = probs > 0.0
    if np.any(gains[live] <= -1.0):
        raise BankruptcyError(
            "fractions admit total loss: some outcome drives wealth to zero or below"
        )
    return float(probs[live] @ np.log1p(gains[live]))


def kelly_first_order(
    mu: float, sigma: float, cinv: InverseCorrelationMatrix
) -> PortfolioWeights:
    """First-order optimal fractions mu * (C^-1 1) / (sigma^2 + mu^2 * S).

    S is the entry sum of the inverse. Nonpositive mean returns give all-zero
    weights (abstention); negative components are clipped to zero and flagged.
    """
    if sigma <= 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if mu <= 0.0:
        return PortfolioWeights(np.zeros(cinv.dim))
    row_sums = cinv.values @ np.ones(cinv.dim)
    denom = sigma**2 + mu**2 * float(row_sums.sum())
    f = mu * row_sums / denom
    clipped = bool(np.any(f < 0.0))
    if clipped:
        f = np.clip(f, 0.0, None)
    return PortfolioWeights(f, clipped=clipped)


def _golden_section_max(fn, lo: float, hi: float, tol: float = BRACKET_TOL):
    """Maximize a concave function on [lo, hi]; returns (argmax, max)."""
    a, b = float(lo), float(hi)
    width = b - a
    c = b - _INV_PHI * width
    d = a + _INV_PHI * width
    fc, fd = fn(c), fn(d)
    while width > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            width = b - a
            c = b - _INV_PHI * width
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            width = b - a
            d = a + _INV_PHI * width
            fd = fn(d)
    x = 0.5 * (a + b)
    return x, fn(x)


def maximize_growth_symmetric(dist: JointBinaryDistribution) -> GrowthResult:
    """Exact growth maximum for exchangeable assets, solved in one variable.

    With identical assets the optimum spreads wealth evenly, so G depends on
    the common fraction f only through the summed return. Abstention (f = 0)
    is always feasible, hence the optimal growth rate is never negative.
    """
    sums, probs = dist.sum_support
    if float(probs @ sums) <= 0.0:
        return GrowthResult(f_star=0.0, g_star=0.0, total_fraction=0.0, method="numeric-exact")
    upper = (1.0 - FEASIBILITY_EPS) / dist.m

    def g(f: float) -> float:
        return float(probs @ np.log1p(f * sums))

    f_star, g_star = _golden_section_max(g, 0.0, upper)
    # Golden section stalls at ~sqrt(eps) accuracy; a few Newton steps on
    # dG/df restore first-order optimality to well below 1e-9.
    for _ in range(4):
        margins = 1.0 + f_star * sums
        slope = float(probs @ (sums / margins))
        curvature = -float(probs @ (sums / margins) ** 2)
        if curvature >= 0.0:
            break
        step = slope / curvature
        candidate = min(max(f_star - step, 0.0), upper)
        if abs(candidate - f_star) <= 1e-16 * max(1.0, f_star):
            f_star = candidate
            break
        f_star = candidate
    g_star = g(f_star)
    if g_star <= 0.0:
        # abstention is always feasible and gives exactly zero growth
        return GrowthResult(f_star=0.0, g_star=0.0, total_fraction=0.0, method="numeric-exact")
    return GrowthResult(
        f_star=f_star,
        g_star=g_star,
        total_fraction=dist.m * f_star,
        method="numeric-exact",
    )


def uncorrelated_total_curve(m: int, p: float) -> np.ndarray:
    """Total invested fraction k * f*(k) for k = 1..m uncorrelated assets."""
    return np.array(
        [
            maximize_growth_symmetric(build_joint(BinaryModelParams(k, p, 0.0))).total_fraction
            for k in range(1, m + 1)
        ]
    )


def invert_total_curve(totals: np.ndarray, target: float) -> float:
    """Solve totals(m_ef) = target by piecewise-linear interpolation on 1..M."""
    lo, hi = float(totals[0]), float(totals[-1])
    slack = 1e-9
    if target < lo - slack:
        raise ExtrapolationError(
            f"target total fraction {target:.6g} below the single-asset value {lo:.6g}",
            nearest_bound=lo,
        )
    if target > hi + slack:
        raise ExtrapolationError(
            f"target total fraction {target:.6g} above the {totals.size}-asset value {hi:.6g}",
            nearest_bound=hi,
        )
    grid = np.arange(1, totals.size + 1, dtype=float)
    return float(np.interp(min(max(target, lo), hi), totals, grid))


def m_ef_kelly_numeric(m: int, p: float, c: float) -> float:
    """Effective size from exact growth maximization and total-fraction matching.

    Solves sum f*(M, C) = m_ef * f*(m_ef, uncorrelated) for m_ef in [1, M].
    Needs p > 1/2: below that nothing is invested on either side and the
    matching equation is degenerate.
    """
    params = BinaryModelParams(m, p, c)
    if p <= 0.5:
        raise DomainError(f"win probability must exceed 1/2, got {p}")
    target = maximize_growth_symmetric(build_joint(params)).total_fraction
    return invert_total_curve(uncorrelated_total_curve(m, p), target)


def misestimation_experiment(
    m: int, p: float, c_true: float, c_assumed_grid: Sequence[float]
) -> list[MisestimationResult]:
    """Realized growth for an investor optimizing under assumed correlations.

    For each assumed value, the symmetric optimum is computed under the wrong
    model and then evaluated under the true one. The realized curve peaks at
    the true correlation.
    """
    true_dist = build_joint(BinaryModelParams(m, p, c_true))
    results: list[MisestimationResult] = []
    for c_assumed in c_assumed_grid:
        assumed = maximize_growth_symmetric(build_joint(BinaryModelParams(m, p, c_assumed)))
        realized = growth_rate(np.full(m, assumed.f_star), true_dist)
        results.append(
            MisestimationResult(
                c_true=float(c_true),
                c_assumed=float(c_assumed),
                f_assumed=assumed.f_star,
                g_realized=realized,
            )
        )
    return results
