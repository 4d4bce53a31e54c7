"""
运行配置模型

定义 CLI 读取的 JSON 配置结构（run / sweep / verify 共用）。
所有模型禁止未知字段，校验错误统一由 tasks.runner 汇总后输出。
"""

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.settings import settings
from models.parameters import ModelKind

# 任务的规范执行顺序
TASK_ORDER = ("classical", "evolve", "stationary", "spectrum", "extremal", "verify", "sweep")
# 需要稠密超算子的任务
DENSE_TASKS = frozenset({"spectrum", "verify", "sweep"})


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ModelSpec(_Strict):
    """模型参数配置"""

    kind: ModelKind = Field(..., description="baby / homogeneous / general / jaynes_cummings")
    alpha: Optional[float] = Field(None, description="homogeneous 的 α")
    beta: Optional[float] = Field(None, description="homogeneous 的 β")
    g: Optional[float] = Field(None, description="jaynes_cummings 的场常数 g")
    alphas: Optional[list[float]] = Field(None, description="general 的 α_n 序列")
    betas: Optional[list[float]] = Field(None, description="general 的 β_n 序列")
    n_max: Optional[int] = Field(None, description="物化的最大下标，缺省取截断维数")

    @model_validator(mode="after")
    def check_kind_arguments(self) -> "ModelSpec":
        """参数与 kind 匹配"""
        if self.kind == ModelKind.HOMOGENEOUS and (self.alpha is None or self.beta is None):
            raise ValueError("homogeneous模型需要alpha和beta")
        if self.kind == ModelKind.JAYNES_CUMMINGS and self.g is None:
            raise ValueError("jaynes_cummings模型需要g")
        if self.kind == ModelKind.GENERAL and (self.alphas is None or self.betas is None):
            raise ValueError("general模型需要alphas和betas")
        return self

    def generator_args(self) -> dict:
        """make_model 的 args 参数"""
        if self.kind == ModelKind.HOMOGENEOUS:
            return {"alpha": self.alpha, "beta": self.beta}
        if self.kind == ModelKind.JAYNES_CUMMINGS:
            return {"g": self.g}
        if self.kind == ModelKind.GENERAL:
            return {"alphas": self.alphas, "betas": self.betas}
        return {}


class StateSpec(_Strict):
    """态 ψ = (λ, ζ) 配置"""

    lam: float = Field(..., alias="lambda", description="λ ∈ [0, 1]")
    zeta_re: float = Field(default=0.0, description="Re ζ")
    zeta_im: float = Field(default=0.0, description="Im ζ")

    @field_validator("lam")
    @classmethod
    def validate_lambda(cls, v: float) -> float:
        """验证 λ 范围"""
        if math.isnan(v) or not (0.0 <= v <= 1.0):
            raise ValueError(f"lambda out of range: {v}")
        return v

    @model_validator(mode="after")
    def validate_zeta(self) -> "StateSpec":
        """验证 |ζ| ≤ 1"""
        if abs(complex(self.zeta_re, self.zeta_im)) > 1.0 + 1e-15:
            raise ValueError(f"|zeta| out of range: {abs(complex(self.zeta_re, self.zeta_im))}")
        return self

    @property
    def zeta(self) -> complex:
        return complex(self.zeta_re, self.zeta_im)


class TruncationSpec(_Strict):
    """截断配置"""

    dim: int = Field(default=24, description="截断维数N")
    interior_margin: int = Field(default=1, description="边界宽度")

    @field_validator("dim")
    @classmethod
    def validate_dim(cls, v: int) -> int:
        """验证截断维数"""
        if v < 4:
            raise ValueError(f"截断维数必须不小于4，当前值: {v}")
        return v


class SweepSpec(_Strict):
    """相图扫描网格"""

    lambda_min: float = Field(default=0.0, description="λ下界")
    lambda_max: float = Field(default=1.0, description="λ上界")
    lambda_steps: int = Field(default_factory=lambda: settings.sweep.lambda_steps, description="λ方向点数")
    abs_zeta_min: float = Field(default=0.0, description="|ζ|下界")
    abs_zeta_max: float = Field(default=1.0, description="|ζ|上界")
    abs_zeta_steps: int = Field(default_factory=lambda: settings.sweep.abs_zeta_steps, description="|ζ|方向点数")
    zeta_phase: float = Field(default=0.0, description="ζ 的辐角（弧度）")
    workers: int = Field(default_factory=lambda: settings.sweep.workers, description="并行线程数")
    max_iter: int = Field(default_factory=lambda: settings.sweep.solver_max_iter, description="每点不变态求解的最大迭代次数")

    @field_validator("lambda_min", "lambda_max")
    @classmethod
    def validate_lambda(cls, v: float) -> float:
        """验证 λ 范围"""
        if math.isnan(v) or not (0.0 <= v <= 1.0):
            raise ValueError(f"lambda out of range: {v}")
        return v

    @field_validator("abs_zeta_min", "abs_zeta_max")
    @classmethod
    def validate_abs_zeta(cls, v: float) -> float:
        """验证 |ζ| 范围"""
        if math.isnan(v) or not (0.0 <= v <= 1.0):
            raise ValueError(f"|zeta| out of range: {v}")
        return v

    @field_validator("lambda_steps", "abs_zeta_steps", "workers", "max_iter")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """验证为正整数"""
        if v < 1:
            raise ValueError(f"必须为正整数，当前值: {v}")
        return v

    @model_validator(mode="after")
    def check_bounds(self) -> "SweepSpec":
        """下界不大于上界"""
        if self.lambda_min > self.lambda_max:
            raise ValueError(f"lambda_min({self.lambda_min}) 大于 lambda_max({self.lambda_max})")
        if self.abs_zeta_min > self.abs_zeta_max:
            raise ValueError(f"abs_zeta_min({self.abs_zeta_min}) 大于 abs_zeta_max({self.abs_zeta_max})")
        return self


class EvolveSpec(_Strict):
    """预对偶演化配置"""

    steps: int = Field(default=50, ge=1, description="演化步数")
    initial_level: int = Field(default=0, ge=0, description="初态 p_k 的下标k")


class SolverSpec(_Strict):
    """数值不变态求解配置"""

    tol: float = Field(default=1e-10, gt=0, description="收敛容差")
    max_iter: int = Field(default=20000, ge=1, description="最大迭代次数")


class OutputSpec(_Strict):
    """输出配置"""

    report: str = Field(default="reports/report.json", description="JSON报告路径")
    csv_dir: Optional[str] = Field(default="reports/csv", description="CSV输出目录")
    write_matrices: bool = Field(default=False, description="是否输出矩阵CSV")


class RunConfig(_Strict):
    """完整运行配置"""

    model: ModelSpec
    state: Optional[StateSpec] = Field(None, description="单点任务使用的态")
    truncation: TruncationSpec = Field(default_factory=TruncationSpec)
    tasks: list[str] = Field(default_factory=lambda: ["stationary", "spectrum"], description="任务列表")
    sweep: SweepSpec = Field(default_factory=SweepSpec)
    evolve: EvolveSpec = Field(default_factory=EvolveSpec)
    solver: SolverSpec = Field(default_factory=SolverSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)
    seed: int = Field(default=0, description="随机输入种子")

    @field_validator("tasks")
    @classmethod
    def validate_tasks(cls, v: list[str]) -> list[str]:
        """验证任务名"""
        unknown = [t for t in v if t not in TASK_ORDER]
        if unknown:
            raise ValueError(f"unknown task: {', '.join(unknown)}")
        return v

    @model_validator(mode="after")
    def check_consistency(self) -> "RunConfig":
        """单点任务需要 state；稠密任务受 QBD_MAX_N 限制；n_max ≥ N"""
        problems = []
        single_point = [t for t in self.tasks if t != "sweep"]
        if single_point and self.state is None:
            problems.append(f"任务 {', '.join(single_point)} 需要state配置")
        if DENSE_TASKS.intersection(self.tasks) and self.truncation.dim > settings.max_n:
            problems.append(f"dim exceeds QBD_MAX_N: N={self.truncation.dim} > {settings.max_n}")
        if self.model.n_max is not None and self.model.n_max < self.truncation.dim:
            problems.append(f"n_max({self.model.n_max}) 小于截断维数N={self.truncation.dim}")
        if problems:
            raise ValueError("; ".join(problems))
        return self

    @property
    def n_max(self) -> int:
        return self.model.n_max if self.model.n_max is not None else self.truncation.dim

    def ordered_tasks(self) -> list[str]:
        """按规范顺序去重后的任务"""
        return [t for t in TASK_ORDER if t in self.tasks]


def format_validation_errors(error: ValidationError) -> list[str]:
    """pydantic 校验错误 → 每条一行的可读消息"""
    messages = []
    for item in error.errors():
        location = ".".join(str(part) for part in item.get("loc", ()))
        message = item.get("msg", "")
        if message.startswith("Value error, "):
            message = message[len("Value error, "):]
        messages.append(f"{location}: {message}" if location else message)
    return messages


__all__ = [
    "TASK_ORDER",
    "DENSE_TASKS",
    "ModelSpec",
    "StateSpec",
    "TruncationSpec",
    "SweepSpec",
    "EvolveSpec",
    "SolverSpec",
    "OutputSpec",
    "RunConfig",
    "format_validation_errors",
]
