import numpy as np
import pytest

from effport import binmodel
from effport.corrmat import (
    CorrelationMatrix,
    InverseCorrelationMatrix,
    ReturnSeries,
    SummaryStats,
    block_diagonal,
    correlation_values,
    estimate_matrix,
    invert,
    pearson,
    symmetric_inverse,
    uniform_inverse_closed_form,
    uniform_matrix,
)
from effport.errors import DomainError, InputShapeError, NearSingularError


class TestReturnSeries:
    def test_basic_construction(self):
        s = ReturnSeries("A", [0.1, -0.1, 0.2])
        assert len(s) == 3
        assert not s.returns.flags.writeable

    def test_single_period_allowed_but_not_correlatable(self):
        s = ReturnSeries("A", [0.1])
        assert len(s) == 1
        with pytest.raises(InputShapeError):
            pearson(s, s)

    def test_empty_rejected(self):
        with pytest.raises(InputShapeError):
            ReturnSeries("A", [])

    def test_return_at_minus_one_rejected(self):
        with pytest.raises(DomainError):
            ReturnSeries("A", [0.1, -1.0])

    def test_stats_population_convention(self):
        s = ReturnSeries("A", [0.0, 0.2])
        st = s.stats()
        assert st.mean == pytest.approx(0.1)
        assert st.variance == pytest.approx(0.01)  # divide by T, not T-1
        assert st.stdev == pytest.approx(0.1)

    def test_stdev_is_sqrt_of_variance(self):
        st = SummaryStats.of(np.array([0.03, -0.01, 0.02, 0.05]))
        assert st.stdev == np.sqrt(st.variance)


class TestPearson:
    def test_identical_series(self):
        x = ReturnSeries("A", [0.1, -0.1, 0.2])
        assert pearson(x, x) == pytest.approx(1.0)

    def test_negated_series(self):
        x = np.array([0.1, -0.1, 0.2])
        assert pearson(x, -x) == pytest.approx(-1.0)

    def test_orthogonal_zero_mean(self):
        assert pearson([1, -1, 1, -1], [1, 1, -1, -1]) == pytest.approx(0.0)

    def test_zero_variance_gives_zero(self):
        # risk-free convention: no correlation with a flat series
        assert pearson([0.1, 0.1, 0.1], [0.3, -0.2, 0.1]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(InputShapeError):
            pearson([0.1, 0.2], [0.1, 0.2, 0.3])

    def test_too_short(self):
        with pytest.raises(InputShapeError):
            pearson([0.1], [0.2])

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_symmetry_and_affine_invariance(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=200)
        y = rng.normal(size=200)
        c = pearson(x, y)
        assert pearson(y, x) == pytest.approx(c, abs=1e-14)
        assert pearson(2.5 * x + 0.03, y) == pytest.approx(c, rel=1e-10)
        assert pearson(-x, y) == pytest.approx(-c, rel=1e-10)


class TestCorrelationMatrixType:
    def test_rejects_asymmetric(self):
        with pytest.raises(InputShapeError):
            CorrelationMatrix(np.array([[1.0, 0.5], [0.2, 1.0]]))

    def test_rejects_bad_diagonal(self):
        with pytest.raises(DomainError):
            CorrelationMatrix(np.array([[1.0, 0.1], [0.1, 0.9]]))

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            CorrelationMatrix(np.array([[1.0, 1.5], [1.5, 1.0]]))

    def test_negative_entries_allowed(self):
        c = CorrelationMatrix(np.array([[1.0, -0.99], [-0.99, 1.0]]))
        assert c.dim == 2


class TestEstimateMatrix:
    def test_two_identical_series(self):
        s = ReturnSeries("A", [0.1, -0.2, 0.05])
        c = estimate_matrix([s, ReturnSeries("B", [0.1, -0.2, 0.05])])
        assert np.allclose(c.values, np.ones((2, 2)))

    def test_entries_match_pairwise_pearson(self):
        rng = np.random.default_rng(3)
        panel = [ReturnSeries(f"A{i}", rng.normal(size=60) * 0.01) for i in range(4)]
        c = estimate_matrix(panel)
        for i in range(4):
            for j in range(4):
                assert c.values[i, j] == pytest.approx(
                    pearson(panel[i], panel[j]), abs=1e-12
                )

    def test_independent_series_near_zero(self):
        # Monte Carlo oracle: independent draws, so any off-diagonal should
        # stay within 3/sqrt(T) of zero.
        t = 10**5
        rng = np.random.default_rng(12)
        panel = [rng.normal(size=t) * 0.01 for _ in range(3)]
        c = estimate_matrix(panel)
        off = c.values[~np.eye(3, dtype=bool)]
        assert np.all(np.abs(off) < 3.0 / np.sqrt(t))

    def test_hidden_asset_samples_recover_target(self):
        params = binmodel.BinaryModelParams(4, 0.55, 0.3)
        draws = binmodel.sample(params, 10**5, seed=99)
        c = estimate_matrix([draws[:, j].astype(float) for j in range(4)])
        off = c.values[~np.eye(4, dtype=bool)]
        assert np.all(np.abs(off - 0.3) < 0.02)

    def test_ragged_panel(self):
        with pytest.raises(InputShapeError):
            estimate_matrix([[0.1, 0.2, 0.3], [0.1, 0.2]])

    def test_single_series_rejected(self):
        with pytest.raises(InputShapeError):
            estimate_matrix([[0.1, 0.2, 0.3]])

    @pytest.mark.parametrize("seed", [0, 5, 9])
    def test_estimated_matrix_is_psd(self, seed):
        rng = np.random.default_rng(seed)
        m = 8
        panel = rng.normal(size=(40, m)) * 0.02
        c = estimate_matrix([panel[:, j] for j in range(m)])
        assert np.linalg.eigvalsh(c.values).min() >= -1e-10 * m

    def test_zero_variance_column_convention(self):
        c = estimate_matrix([[0.0, 0.0, 0.0], [0.1, -0.2, 0.3], [0.2, 0.1, -0.1]])
        assert np.allclose(c.values[0, 1:], 0.0)
        assert c.values[0, 0] == 1.0


class TestInvert:
    def test_identity(self):
        inv = invert(uniform_matrix(5, 0.0))
        assert np.allclose(inv.values, np.eye(5), atol=1e-14)
        assert inv.reciprocal_condition == pytest.approx(1.0)

    def test_uniform_4_05_matches_closed_form(self):
        inv = invert(uniform_matrix(4, 0.5))
        expected = np.full((4, 4), -0.4)
        np.fill_diagonal(expected, 1.6)
        assert np.allclose(inv.values, expected, atol=1e-12)

    def test_duplicated_assets_near_singular(self):
        c = CorrelationMatrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(NearSingularError):
            invert(c)

    def test_product_is_identity(self, random_correlation):
        rng = np.random.default_rng(21)
        c = CorrelationMatrix(random_correlation(rng, 12))
        inv = invert(c)
        assert np.max(np.abs(c.values @ inv.values - np.eye(12))) <= 1e-8

    def test_indefinite_matrix_uses_lu_fallback(self):
        # strongly negative uniform correlation is indefinite but invertible
        a = np.full((4, 4), -0.3)
        np.fill_diagonal(a, 1.0)
        inv, rcond = symmetric_inverse(a)
        assert np.allclose(a @ inv, np.eye(4), atol=1e-10)
        assert rcond > 1e-3

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4, 5, 6, 7])
    def test_double_inversion_roundtrip(self, seed, random_correlation):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(2, 15))
        c = random_correlation(rng, m)
        inv, _ = symmetric_inverse(c)
        back, _ = symmetric_inverse(inv)
        assert np.max(np.abs(back - c)) < 1e-6

    def test_inverse_type_checks_residual(self):
        c = uniform_matrix(3, 0.2)
        with pytest.raises(NearSingularError):
            InverseCorrelationMatrix(values=np.eye(3) * 5.0, source=c, reciprocal_condition=1.0)


class TestUniformClosedForm:
    def test_m2_c0_is_identity(self):
        inv = uniform_inverse_closed_form(2, 0.0)
        assert np.allclose(inv.values, np.eye(2))

    def test_m4_c05(self):
        inv = uniform_inverse_closed_form(4, 0.5)
        assert inv.values[0, 0] == pytest.approx(1.6, abs=1e-14)
        assert inv.values[0, 1] == pytest.approx(-0.4, abs=1e-14)

    def test_m10_c02(self):
        inv = uniform_inverse_closed_form(10, 0.2)
        denom = 0.8 * 2.8
        assert inv.values[0, 0] == pytest.approx(2.6 / denom, abs=1e-14)
        assert inv.values[2, 7] == pytest.approx(-0.2 / denom, abs=1e-14)

    def test_c1_singular(self):
        with pytest.raises(NearSingularError):
            uniform_inverse_closed_form(5, 1.0)

    def test_single_asset_any_correlation(self):
        for c in (0.0, 0.5, 1.0):
            inv = uniform_inverse_closed_form(1, c)
            assert inv.values[0, 0] == 1.0
            assert inv.reciprocal_condition == 1.0

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            uniform_inverse_closed_form(5, -0.1)

    @pytest.mark.parametrize("m", [2, 3, 10, 40, 100])
    @pytest.mark.parametrize("c", [0.0, 0.1, 0.5, 0.9])
    def test_matches_numeric_inversion(self, m, c):
        closed = uniform_inverse_closed_form(m, c)
        numeric = invert(uniform_matrix(m, c))
        assert np.max(np.abs(closed.values - numeric.values)) < 1e-10


class TestUniformMatrix:
    def test_c0_is_identity(self):
        assert np.array_equal(uniform_matrix(3, 0.0).values, np.eye(3))

    def test_c1(self):
        assert np.array_equal(uniform_matrix(2, 1.0).values, np.ones((2, 2)))

    def test_pattern(self):
        v = uniform_matrix(3, 0.5).values
        assert np.array_equal(v, np.array([[1, 0.5, 0.5], [0.5, 1, 0.5], [0.5, 0.5, 1]]))

    @pytest.mark.parametrize("c", [-0.2, 1.4])
    def test_domain(self, c):
        with pytest.raises(DomainError):
            uniform_matrix(3, c)


class TestBlockDiagonal:
    def test_single_block(self):
        b = uniform_matrix(3, 0.4)
        assert np.array_equal(block_diagonal([b]).values, b.values)

    def test_two_singletons(self):
        one = uniform_matrix(1, 0.0)
        assert np.array_equal(block_diagonal([one, one]).values, np.eye(2))

    def test_mixed_blocks(self):
        c = block_diagonal([uniform_matrix(2, 0.5), uniform_matrix(3, 0.2)])
        assert c.dim == 5
        assert c.values[0, 1] == 0.5
        assert c.values[2, 3] == 0.2
        assert np.all(c.values[:2, 2:] == 0.0)

    def test_empty_rejected(self):
        with pytest.raises(InputShapeError):
            block_diagonal([])


def test_correlation_values_requires_matrix():
    with pytest.raises(InputShapeError):
        correlation_values(np.zeros((1, 3)))
