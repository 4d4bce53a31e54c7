"""
经典生灭链测试
"""

import numpy as np
import pytest
from chain.channel import apply_heisenberg
from chain.classical import (
    classical_stationary,
    classical_transition_matrix,
    diagonal_invariance_check,
    perron_vector,
    stationarity_residual,
)
from chain.operators import conditional_expectation_diag, interval_projection
from models.results import ClassicalStationary, NoStationary
from tasks.verify import check_classical_consistency


class TestTransitionMatrix:
    """转移矩阵测试"""

    def test_rates(self, homogeneous_model, make_channel):
        """测试上行、下行与停留概率"""
        lam = 0.3
        chain = classical_transition_matrix(make_channel(homogeneous_model, lam))
        p = chain.transition

        assert p[0, 1] == pytest.approx(lam * 0.64)
        assert p[0, 0] == pytest.approx((1 - lam) + lam * 0.36)
        assert p[5, 6] == pytest.approx(lam * 0.64)
        assert p[5, 4] == pytest.approx((1 - lam) * 0.64)
        assert p[5, 5] == pytest.approx(0.36)
        assert p[5, 7] == 0.0

    @pytest.mark.parametrize("fixture_name", ["baby_model", "homogeneous_model", "jc_model"])
    def test_row_sums(self, request, make_channel, fixture_name):
        """测试除最后一行外行和为1"""
        model = request.getfixturevalue(fixture_name)
        chain = classical_transition_matrix(make_channel(model, 0.4, dim=20))
        sums = chain.transition.sum(axis=1)

        np.testing.assert_allclose(sums[:-1], 1.0, atol=1e-12)
        assert sums[-1] <= 1.0 + 1e-12

    def test_independent_of_zeta(self, jc_model, make_channel):
        """测试转移矩阵与 ζ 无关"""
        base = classical_transition_matrix(make_channel(jc_model, 0.4))
        rotated = classical_transition_matrix(make_channel(jc_model, 0.4, 0.3 + 0.4j))

        np.testing.assert_array_equal(base.transition, rotated.transition)

    def test_matches_diagonal_compression(self, jc_model, make_channel):
        """测试 P_{ℓ∞}(T(p_n)) 的对角即转移矩阵第 n 列（ζ ≠ 0 时 T(p_n) 含非对角项）"""
        ch = make_channel(jc_model, 0.4, 0.3 + 0.4j, dim=12)
        chain = classical_transition_matrix(ch)
        last = ch.dim - 2

        for n in (0, 3, last):
            image = apply_heisenberg(ch, interval_projection(n, n, ch.dim))
            compressed = conditional_expectation_diag(image)

            np.testing.assert_allclose(
                compressed[: last + 1, : last + 1], np.diag(chain.transition[: last + 1, n]), atol=1e-12
            )
        assert check_classical_consistency(ch).passed


class TestClassicalStationary:
    """平稳分布测试"""

    def test_geometric_distribution(self, homogeneous_model, make_channel):
        """测试 λ = ⅓ 时 π_n = (½)ⁿ⁺¹"""
        chain = classical_transition_matrix(make_channel(homogeneous_model, 1 / 3, dim=64))
        result = classical_stationary(chain)

        assert isinstance(result, ClassicalStationary)
        assert result.ratio == pytest.approx(0.5)
        np.testing.assert_allclose(result.distribution[:20], 0.5 ** np.arange(1, 21), rtol=1e-10)
        assert result.residual <= 1e-10

    @pytest.mark.parametrize("lam, ratio", [(0.5, 1.0), (0.75, 3.0), (1.0, float("inf"))])
    def test_no_stationary(self, baby_model, make_channel, lam, ratio):
        """测试 λ ≥ ½ 时不存在平稳分布"""
        result = classical_stationary(classical_transition_matrix(make_channel(baby_model, lam)))

        assert isinstance(result, NoStationary)
        assert result.ratio == pytest.approx(ratio)
        assert result.diagnosis == "geometric ratio ≥ 1"

    def test_residual_detects_wrong_distribution(self, homogeneous_model, make_channel):
        """测试均匀分布的残差明显大于0"""
        chain = classical_transition_matrix(make_channel(homogeneous_model, 0.3))
        uniform = np.full(chain.dim, 1.0 / chain.dim)

        assert stationarity_residual(chain, uniform) > 1e-3

    def test_perron_vector_matches(self, homogeneous_model, make_channel):
        """测试数值左不动向量与闭式解一致"""
        chain = classical_transition_matrix(make_channel(homogeneous_model, 1 / 3, dim=48))
        closed = classical_stationary(chain)
        numeric = perron_vector(chain)

        assert numeric.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(numeric, closed.distribution, atol=1e-8)


class TestDiagonalInvariance:
    """对角子代数不变性测试"""

    def test_invariant_when_zeta_zero(self, jc_model, make_channel):
        """测试 ζ = 0 时 T(p_n) 为对角"""
        result = diagonal_invariance_check(make_channel(jc_model, 0.4))

        assert result.invariant
        assert result.max_off_diagonal <= 1e-12

    def test_not_invariant_when_zeta_nonzero(self, homogeneous_model, make_channel):
        """测试 ζ ≠ 0 时出现非对角元"""
        result = diagonal_invariance_check(make_channel(homogeneous_model, 0.4, 0.5j))

        assert not result.invariant
        assert result.max_off_diagonal > 1e-3
