"""
异常定义

所有领域异常的统一层次结构：
- ValidationFailure: 输入或前置条件错误（CLI退出码2）
- NumericFailure: 数值计算失败（CLI退出码3）
"""

from typing import Optional


class QBDError(Exception):
    """QBD Lab 异常基类"""

    exit_code: int = 1


class ValidationFailure(QBDError):
    """输入校验失败"""

    exit_code = 2


class ConfigurationInvalid(ValidationFailure):
    """配置校验失败，errors 汇总全部错误"""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__(f"配置校验失败，共{len(self.errors)}处错误: " + "; ".join(self.errors))


class TrappingState(ValidationFailure):
    """存在陷阱态：某个 n ≥ 1 满足 |β_n| ≤ 容差"""

    def __init__(self, index: int, value: float, tol: float):
        self.index = index
        self.value = value
        self.tol = tol
        super().__init__(f"TrappingState({index}): |β_{index}| = {abs(value):.3e} ≤ {tol:g}")


class NormalizationViolation(ValidationFailure):
    """α_n² + β_n² 偏离 1"""

    def __init__(self, index: int, deviation: float):
        self.index = index
        self.deviation = deviation
        super().__init__(
            f"NormalizationViolation({index}): |α_{index}² + β_{index}² - 1| = {deviation:.3e}"
        )


class OutOfRange(ValidationFailure):
    """参数超出允许范围"""

    def __init__(self, name: str, value: object, detail: str = ""):
        self.name = name
        self.value = value
        message = f"{name} out of range: {value}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class IndexOutOfRange(ValidationFailure):
    """基向量下标越界"""


class ShapeMismatch(ValidationFailure):
    """矩阵形状不匹配"""


class PreconditionViolated(ValidationFailure):
    """操作的前置条件不满足（模型类型、态类型、λ范围等）"""


class DimensionGuard(ValidationFailure):
    """稠密超算子维数超过上限"""

    def __init__(self, dim: int, limit: int, name: str = "QBD_MAX_N"):
        self.dim = dim
        self.limit = limit
        super().__init__(f"dim exceeds {name}: N={dim} > {limit}")


class NumericFailure(QBDError):
    """数值计算失败"""

    exit_code = 3


class ConvergenceFailure(NumericFailure):
    """迭代未收敛"""

    def __init__(self, iterations: int, residual: float, detail: Optional[str] = None):
        self.iterations = iterations
        self.residual = residual
        message = f"未在{iterations}次迭代内收敛，残差 {residual:.3e}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class EigensolveFailure(NumericFailure):
    """特征值分解失败"""


__all__ = [
    "QBDError",
    "ValidationFailure",
    "ConfigurationInvalid",
    "TrappingState",
    "NormalizationViolation",
    "OutOfRange",
    "IndexOutOfRange",
    "ShapeMismatch",
    "PreconditionViolated",
    "DimensionGuard",
    "NumericFailure",
    "ConvergenceFailure",
    "EigensolveFailure",
]
