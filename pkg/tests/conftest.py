from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def make_random_correlation(rng, m, factors=None):
    """Well-conditioned random correlation matrix from a factor model."""
    factors = factors or max(2, m // 2)
    loadings = rng.normal(size=(m, factors))
    cov = loadings @ loadings.T + np.diag(rng.uniform(0.5, 1.5, size=m))
    scale = np.sqrt(np.diag(cov))
    corr = cov / np.outer(scale, scale)
    corr = 0.5 * (corr + corr.T)
    np.fill_diagonal(corr, 1.0)
    return corr


@pytest.fixture
def random_correlation():
    return make_random_correlation


@pytest.fixture
def sample_prices_path():
    return DATA_DIR / "synthetic_prices.csv"


@pytest.fixture
def sample_sectors_path():
    return DATA_DIR / "synthetic_sectors.csv"
