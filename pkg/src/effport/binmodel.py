"""Hidden-asset model for exchangeable win/lose returns with tunable correlation.

A latent coin lands +1 with probability p; each asset then copies its sign
with conditional probabilities

    P(+1 | hidden +1) = p + (1-p) sqrt(C)
    P(-1 | hidden -1) = 1 - p + p sqrt(C)

which gives every asset the marginal win probability p and every pair the
correlation C, for C in [0, 1]. Exact enumeration covers up to 20 assets;
beyond that, use :func:`sample`.

Sampling uses numpy's PCG64 generator seeded explicitly, so identical seeds
reproduce identical draws on one platform; cross-platform reproduction is
guaranteed only at the level of the sampled statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import xlogy

from .errors import DomainError, EnumerationLimitError

#: Largest asset count for exact enumeration of all 2^M outcomes.
ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class BinaryModelParams:
    """Asset count, win probability, and target pairwise correlation."""

    m: int
    p: float
    c: float

    def __post_init__(self):
        if self.m < 1:
            raise DomainError(f"asset count must be >= 1, got {self.m}")
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"win probability must lie in (0, 1), got {self.p}")
        if not 0.0 <= self.c <= 1.0:
            raise DomainError(f"correlation must lie in [0, 1], got {self.c}")

    @property
    def cond_win(self) -> float:
        """P(asset +1 | hidden +1)."""
        return self.p + (1.0 - self.p) * math.sqrt(self.c)

    @property
    def cond_lose(self) -> float:
        """P(asset -1 | hidden -1)."""
        return 1.0 - self.p + self.p * math.sqrt(self.c)

    @property
    def mu(self) -> float:
        """Mean return 2p - 1 of one asset."""
        return 2.0 * self.p - 1.0

    @property
    def sigma2(self) -> float:
        """Return variance 4p(1-p) of one asset."""
        return 4.0 * self.p * (1.0 - self.p)


@dataclass(frozen=True, eq=False)
class JointBinaryDistribution:
    """Exact probability table over all 2^M sign vectors.

    Probabilities are stored as logs internally so enumeration stays accurate
    near the 20-asset limit; :attr:`probabilities` exponentiates on demand.
    The distribution is exchangeable: probability depends only on the number
    of winning assets.
    """

    m: int
    outcomes: np.ndarray
    log_probabilities: np.ndarray

    def __post_init__(self):
        if self.outcomes.shape != (2**self.m, self.m):
            raise DomainError("outcome table shape does not match asset count")
        if self.log_probabilities.shape != (2**self.m,):
            raise DomainError("probability vector shape does not match outcome table")

    @cached_property
    def probabilities(self) -> np.ndarray:
        out = np.exp(self.log_probabilities)
        out.flags.writeable = False
        return out

    @cached_property
    def sum_support(self) -> tuple[np.ndarray, np.ndarray]:
        """Distribution of the summed return over all assets.

        Returns (sums, probabilities) with sums = 2k - M for k winning assets;
        an exact regrouping of the full table that one-variable solvers use.
        """
        k = ((self.outcomes + 1) // 2).sum(axis=1)
        probs = np.bincount(k, weights=self.probabilities, minlength=self.m + 1)
        sums = 2.0 * np.arange(self.m + 1) - self.m
        return sums, probs


def build_joint(params: BinaryModelParams) -> JointBinaryDistribution:
    """Enumerate the exact joint distribution of all 2^M outcome vectors.

    P(R) = p * prod_i P(R_i | hidden +1) + (1-p) * prod_i P(R_i | hidden -1).
    """
    if params.m > ENUMERATION_LIMIT:
        raise EnumerationLimitError(
            f"exact enumeration supports at most {ENUMERATION_LIMIT} assets, "
            f"got {params.m}; draw samples instead"
        )
    m = params.m
    codes = np.arange(2**m, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(m - 1, -1, -1)) & 1
    outcomes = (2 * bits - 1).astype(np.int8)
    wins = bits.sum(axis=1)

    a_win, a_lose = params.cond_win, params.cond_lose
    log_given_up = xlogy(wins, a_win) + xlogy(m - wins, 1.0 - a_win)
    log_given_down = xlogy(wins, 1.0 - a_lose) + xlogy(m - wins, a_lose)
    logp = np.logaddexp(
        math.log(params.p) + log_given_up,
        math.log1p(-params.p) + log_given_down,
    )
    outcomes.flags.writeable = False
    logp.flags.writeable = False
    return JointBinaryDistribution(m=m, outcomes=outcomes, log_probabilities=logp)


def sample(params: BinaryModelParams, n: int, seed: int) -> np.ndarray:
    """Draw an (n, M) matrix of +1/-1 returns from the hidden-asset model.

    Each row first draws the hidden outcome, then every asset independently
    from its conditional. Identical seeds give identical output.
    """
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    hidden_up = rng.random(n) < params.p
    win_prob = np.where(hidden_up, params.cond_win, 1.0 - params.cond_lose)
    draws = rng.random((n, params.m))
    return np.where(draws < win_prob[:, None], 1, -1).astype(np.int8)
