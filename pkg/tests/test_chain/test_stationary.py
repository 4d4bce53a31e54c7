"""
不变态与显式不动点测试
"""

import numpy as np
import pytest
from chain.model import qubit_state
from chain.stationary import (
    boundary_mass,
    closed_form_invariant,
    explicit_fixed_points,
    fixed_point_residual,
    fixed_point_seed,
    invariant_pure_state_homogeneous,
    invariant_state_baby,
    invariant_state_diagonal,
    mass_centre,
    pure_state_parameter,
    solve_invariant_numeric,
    trace_distance,
    verify_invariant,
)
from config.settings import settings
from core.exceptions import ConvergenceFailure, PreconditionViolated
from models.parameters import Truncation
from models.results import InvariantKind
from utils.linalg import min_eigenvalue


def _is_state(rho):
    return (
        abs(np.trace(rho) - 1.0) <= 1e-12
        and np.allclose(rho, rho.conj().T, atol=1e-14)
        and min_eigenvalue(rho) >= -1e-10
    )


class TestDiagonalInvariant:
    """对角闭式不变态测试"""

    def test_geometric_state(self, homogeneous_model):
        """测试 λ = ⅓ 时 ρ_nn = (½)ⁿ⁺¹"""
        result = invariant_state_diagonal(homogeneous_model, qubit_state(1 / 3), Truncation(dim=64))

        assert result.kind == InvariantKind.CLOSED_FORM_DIAGONAL
        assert result.exists
        assert result.parameter == pytest.approx(0.5)
        np.testing.assert_allclose(np.real(np.diag(result.rho))[:20], 0.5 ** np.arange(1, 21), rtol=1e-10)
        assert result.residual <= 1e-10
        assert _is_state(result.rho)

    def test_any_model(self, jc_model):
        """测试对角解与模型无关"""
        result = invariant_state_diagonal(jc_model, qubit_state(0.2), Truncation(dim=32))

        assert result.residual <= 1e-10

    @pytest.mark.parametrize("lam", [0.5, 0.7, 1.0])
    def test_not_exists(self, homogeneous_model, lam):
        """测试 λ ≥ ½ 时不存在"""
        result = invariant_state_diagonal(homogeneous_model, qubit_state(lam), Truncation(dim=16))

        assert result.kind == InvariantKind.NONE
        assert not result.exists
        assert result.rho is None

    def test_requires_zero_zeta(self, homogeneous_model):
        """测试 ζ ≠ 0 时报错"""
        with pytest.raises(PreconditionViolated, match="ζ=0"):
            invariant_state_diagonal(homogeneous_model, qubit_state(0.3, 0.2j), Truncation(dim=16))


class TestBabyInvariant:
    """baby 模型闭式不变态测试"""

    def test_residual(self, baby_model):
        """测试 λ = 0.25, ζ = 0.6 时残差 ≤ 1e-8"""
        result = invariant_state_baby(qubit_state(0.25, 0.6), Truncation(dim=48), baby_model)

        assert result.kind == InvariantKind.CLOSED_FORM_BABY
        assert result.residual <= 1e-8
        assert _is_state(result.rho)

    def test_complex_zeta(self, baby_model):
        """测试复 ζ 同样满足不变性"""
        result = invariant_state_baby(qubit_state(0.3, 0.4 + 0.5j), Truncation(dim=48), baby_model)

        assert result.residual <= 1e-8
        assert abs(result.rho[1, 0]) > 1e-3

    def test_reduces_to_diagonal(self, baby_model):
        """测试 ζ = 0 时与对角解一致"""
        trunc = Truncation(dim=24)
        baby = invariant_state_baby(qubit_state(0.3), trunc, baby_model)
        diagonal = invariant_state_diagonal(baby_model, qubit_state(0.3), trunc)

        assert trace_distance(baby.rho, diagonal.rho) <= 1e-14

    def test_default_model(self):
        """测试缺省按 N 生成 baby 模型"""
        result = invariant_state_baby(qubit_state(0.25, 0.6), Truncation(dim=24))

        assert result.exists

    def test_not_exists(self, baby_model):
        """测试 λ = 0.6 时不存在"""
        result = invariant_state_baby(qubit_state(0.6, 0.3), Truncation(dim=24), baby_model)

        assert result.kind == InvariantKind.NONE
        assert result.diagnosis == "geometric ratio ≥ 1"

    def test_requires_baby(self, homogeneous_model):
        """测试非 baby 模型报错"""
        with pytest.raises(PreconditionViolated, match="baby"):
            invariant_state_baby(qubit_state(0.3), Truncation(dim=16), homogeneous_model)


class TestPureInvariant:
    """齐次模型纯不变态测试"""

    def test_pure_state(self, homogeneous_model):
        """测试 α = 0.6, λ = 0.15, ζ = i 时 |q| ≈ 0.8402"""
        psi = qubit_state(0.15, 1j)
        result = invariant_pure_state_homogeneous(homogeneous_model, psi, Truncation(dim=64))

        assert result.kind == InvariantKind.CLOSED_FORM_PURE
        assert abs(result.parameter) == pytest.approx(0.8402, abs=1e-4)
        assert result.parameter == pytest.approx(pure_state_parameter(homogeneous_model, psi))
        assert result.residual <= 1e-8
        np.testing.assert_allclose(result.rho @ result.rho, result.rho, atol=1e-12)

    def test_threshold(self, homogeneous_model):
        """测试 λ ≥ ½(1−α) 时不存在"""
        result = invariant_pure_state_homogeneous(homogeneous_model, qubit_state(0.2, 1j), Truncation(dim=16))

        assert result.kind == InvariantKind.NONE
        assert "½(1−α)" in result.diagnosis

    def test_requires_pure_state(self, homogeneous_model):
        """测试混合态报错"""
        with pytest.raises(PreconditionViolated, match="纯不变态"):
            invariant_pure_state_homogeneous(homogeneous_model, qubit_state(0.1, 0.5j), Truncation(dim=16))

    def test_requires_homogeneous(self, jc_model):
        """测试非齐次模型报错"""
        with pytest.raises(PreconditionViolated, match="齐次模型"):
            invariant_pure_state_homogeneous(jc_model, qubit_state(0.1, 1j), Truncation(dim=16))


class TestClosedFormDispatch:
    """闭式解选择测试"""

    def test_baby(self, baby_model, make_channel):
        """测试 baby 模型选 baby 闭式解"""
        result = closed_form_invariant(make_channel(baby_model, 0.3, 0.2j))

        assert result.kind == InvariantKind.CLOSED_FORM_BABY

    def test_diagonal(self, jc_model, make_channel):
        """测试 ζ = 0 选对角解"""
        result = closed_form_invariant(make_channel(jc_model, 0.3))

        assert result.kind == InvariantKind.CLOSED_FORM_DIAGONAL

    def test_pure(self, homogeneous_model, make_channel):
        """测试齐次纯态选纯不变态"""
        result = closed_form_invariant(make_channel(homogeneous_model, 0.15, 1j, dim=32))

        assert result.kind == InvariantKind.CLOSED_FORM_PURE

    def test_none(self, jc_model, make_channel):
        """测试没有适用闭式时返回 None"""
        assert closed_form_invariant(make_channel(jc_model, 0.3, 0.2j)) is None


class TestNumericSolver:
    """幂迭代求解测试"""

    def test_matches_closed_form(self, baby_model, make_channel):
        """测试数值解与 baby 闭式解一致"""
        ch = make_channel(baby_model, 0.25, 0.6, dim=32)
        numeric = solve_invariant_numeric(ch)
        closed = closed_form_invariant(ch)

        assert numeric.kind == InvariantKind.NUMERIC
        assert numeric.iterations > 0
        assert numeric.residual <= 1e-6
        assert trace_distance(numeric.rho, closed.rho) <= 1e-6

    def test_faithful_state(self, homogeneous_model, make_channel):
        """测试无闭式解的忠实态也能收敛"""
        result = solve_invariant_numeric(make_channel(homogeneous_model, 0.3, 0.5j, dim=40))

        assert result.kind == InvariantKind.NUMERIC
        # 残差由截断泄漏主导: ‖T_*ρ − ρ‖ ≤ 泄漏 + 2·步长
        assert result.residual <= result.renormalization + 2 * settings.tolerance.invariant + 1e-12
        assert result.residual <= 1e-4
        assert _is_state(result.rho)

    def test_escaping_mass(self, baby_model, make_channel):
        """测试 λ > ½ 时质量逃向边界"""
        result = solve_invariant_numeric(make_channel(baby_model, 0.6, dim=24))

        assert result.kind == InvariantKind.NONE
        assert result.diagnosis in ("boundary mass", "escaping mass")

    def test_shift_exhausts_trace(self, baby_model, make_channel):
        """测试 baby 模型 ψ₊ 为纯上移，迹耗尽后判定为逃逸"""
        result = solve_invariant_numeric(make_channel(baby_model, 1.0, dim=16))

        assert result.kind == InvariantKind.NONE
        assert result.diagnosis == "escaping mass"
        assert result.iterations <= 16

    def test_convergence_failure(self, homogeneous_model, make_channel):
        """测试无泄漏且未收敛时抛出异常"""
        with pytest.raises(ConvergenceFailure):
            solve_invariant_numeric(make_channel(homogeneous_model, 0.0, dim=16), max_iter=2)

    def test_invalid_tol(self, homogeneous_model, make_channel):
        """测试 tol ≤ 0 报错"""
        with pytest.raises(PreconditionViolated, match="tol"):
            solve_invariant_numeric(make_channel(homogeneous_model, 0.3), tol=0.0)


class TestHelpers:
    """辅助量测试"""

    def test_boundary_mass_and_centre(self):
        """测试边界质量与质心"""
        rho = np.diag([0.5, 0.0, 0.0, 0.25, 0.25]).astype(complex)

        assert boundary_mass(rho) == pytest.approx(0.5)
        assert mass_centre(rho) == pytest.approx((0.75 + 1.0) / 4)

    def test_verify_invariant_rejects_wrong_state(self, homogeneous_model, make_channel):
        """测试非不变态的残差明显大于0"""
        ch = make_channel(homogeneous_model, 0.3)
        rho = np.zeros((ch.dim, ch.dim), dtype=complex)
        rho[3, 3] = 1.0

        assert verify_invariant(ch, rho) > 0.1


class TestExplicitFixedPoints:
    """λ > ½ 时的显式不动点测试"""

    @pytest.mark.parametrize("zeta", [0.0, 0.5j, 0.3 - 0.4j])
    def test_baby_fixed_points(self, baby_model, make_channel, zeta):
        """测试 baby 模型任意 ζ 的不动点族"""
        ch = make_channel(baby_model, 0.75, zeta, dim=24)
        points = explicit_fixed_points(ch, 5)

        assert len(points) == 5
        for n, y in enumerate(points, start=1):
            assert fixed_point_residual(ch, y, shift_power=n) <= 1e-10

    def test_homogeneous_fixed_points(self, homogeneous_model, make_channel):
        """测试 homogeneous 模型 ζ = 0 的不动点族"""
        ch = make_channel(homogeneous_model, 0.75, dim=24)
        points = explicit_fixed_points(ch, 5)

        for n, y in enumerate(points, start=1):
            assert fixed_point_residual(ch, y, shift_power=n) <= 1e-10

    def test_points_independent(self, baby_model, make_channel):
        """测试不动点族与单位元线性无关"""
        ch = make_channel(baby_model, 0.75, dim=24)
        stacked = np.array([np.eye(24).ravel()] + [y.ravel() for y in explicit_fixed_points(ch, 5)])

        assert np.linalg.matrix_rank(stacked) == 6

    def test_homogeneous_seed(self, homogeneous_model, make_channel):
        """测试 α = 0.6, λ = 0.75 时种子为 4.2·1 − d"""
        seed = fixed_point_seed(make_channel(homogeneous_model, 0.75, dim=8))
        expected = 4.2 - (1 / 3) ** np.arange(8)

        np.testing.assert_allclose(np.diag(seed), expected, atol=1e-12)

    def test_baby_seed(self, baby_model, make_channel):
        """测试 λ = 0.75 时 baby 种子为 ¾·diag(2/3, 8/9, ...)"""
        seed = fixed_point_seed(make_channel(baby_model, 0.75, dim=8))
        expected = 0.75 * (1 - (1 / 3) ** np.arange(1, 8))

        np.testing.assert_allclose(np.diag(seed)[:7], expected, atol=1e-12)

    def test_unit_lambda_seed(self, homogeneous_model, make_channel):
        """测试 λ = 1 时 homogeneous 种子为单位元"""
        seed = fixed_point_seed(make_channel(homogeneous_model, 1.0, dim=8))

        np.testing.assert_allclose(seed, np.eye(8))

    @pytest.mark.parametrize(
        "fixture_name, lam, zeta, match",
        [
            ("baby_model", 0.5, 0.0, "λ > ½"),
            ("jc_model", 0.75, 0.0, "baby或homogeneous"),
            ("homogeneous_model", 0.75, 0.5j, "ζ=0"),
        ],
    )
    def test_preconditions(self, request, make_channel, fixture_name, lam, zeta, match):
        """测试前置条件"""
        ch = make_channel(request.getfixturevalue(fixture_name), lam, zeta)

        with pytest.raises(PreconditionViolated, match=match):
            explicit_fixed_points(ch, 3)

    def test_count_validation(self, baby_model, make_channel):
        """测试 count < 1 报错"""
        with pytest.raises(PreconditionViolated, match="count"):
            explicit_fixed_points(make_channel(baby_model, 0.75), 0)
