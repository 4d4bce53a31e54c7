"""
异常层次测试
"""

import pytest
from core.exceptions import (
    ConfigurationInvalid,
    ConvergenceFailure,
    DimensionGuard,
    EigensolveFailure,
    NumericFailure,
    OutOfRange,
    QBDError,
    TrappingState,
    ValidationFailure,
)


class TestExceptionHierarchy:
    """异常层次与退出码测试"""

    def test_validation_exit_code(self):
        """测试校验类异常退出码为2"""
        assert TrappingState(1, 0.0, 1e-9).exit_code == 2
        assert OutOfRange("lambda", 1.2).exit_code == 2
        assert DimensionGuard(80, 64).exit_code == 2
        assert isinstance(ConfigurationInvalid(["a"]), ValidationFailure)

    def test_numeric_exit_code(self):
        """测试数值类异常退出码为3"""
        assert ConvergenceFailure(10, 1e-3).exit_code == 3
        assert issubclass(EigensolveFailure, NumericFailure)
        assert issubclass(NumericFailure, QBDError)


class TestExceptionMessages:
    """异常消息测试"""

    def test_trapping_state_message(self):
        """测试陷阱态消息以异常名开头"""
        e = TrappingState(1, 1.2e-16, 1e-9)
        assert str(e).startswith("TrappingState(1)")
        assert e.index == 1

    def test_out_of_range_message(self):
        """测试越界消息"""
        e = OutOfRange("lambda", 1.2)
        assert "lambda out of range" in str(e)
        assert e.value == 1.2

    def test_dimension_guard_message(self):
        """测试维数上限消息"""
        e = DimensionGuard(80, 64)
        assert "dim exceeds QBD_MAX_N" in str(e)
        assert (e.dim, e.limit) == (80, 64)

    def test_convergence_failure_fields(self):
        """测试收敛失败字段"""
        e = ConvergenceFailure(500, 2.5e-4, detail="N=24")
        assert e.iterations == 500
        assert e.residual == 2.5e-4
        assert "N=24" in str(e)

    def test_configuration_invalid_aggregates(self):
        """测试配置错误汇总"""
        e = ConfigurationInvalid(["state.lambda: lambda out of range: 1.2", "tasks: unknown task: plot"])
        assert len(e.errors) == 2
        assert "共2处错误" in str(e)
        with pytest.raises(ValidationFailure, match="unknown task"):
            raise e
