"""
配置管理模块

使用pydantic-settings管理应用配置，支持：
- 环境变量加载（统一前缀 QBD_）
- 嵌套配置结构（容差、扫描默认值）
- 配置验证
- 默认值设置
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class ToleranceConfig(BaseSettings):
    """数值容差配置"""

    trapping: float = Field(default=1e-9, description="陷阱态判定阈值 |β_n| ≤ trapping")
    normalization: float = Field(default=1e-12, description="α_n² + β_n² = 1 的允许偏差")
    exact: float = Field(default=1e-12, description="精确恒等式的最大元素误差")
    psd: float = Field(default=1e-10, description="半正定判定的最小特征值下界（取负）")
    peripheral: float = Field(default=1e-7, description="外围谱容差 |μ| ≥ 1 - tol")
    subharmonic: float = Field(default=1e-9, description="次调和投影探测容差")
    rank_rel: float = Field(default=1e-12, description="数值秩相对阈值（乘以N·σ_max）")
    invariant: float = Field(default=1e-10, description="不变态数值求解的残差阈值")
    boundary_mass: float = Field(default=0.1, description="边界质量诊断阈值（比例）")

    @field_validator(
        "trapping", "normalization", "exact", "psd", "peripheral",
        "subharmonic", "rank_rel", "invariant", "boundary_mass",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """验证容差为正数"""
        if v <= 0:
            raise ValueError(f"容差必须大于0，当前值: {v}")
        return v

    model_config = SettingsConfigDict(
        env_prefix="QBD_TOL__",
        case_sensitive=False,
    )


class SweepDefaults(BaseSettings):
    """相图扫描默认值"""

    lambda_steps: int = Field(default=21, description="λ方向网格点数")
    abs_zeta_steps: int = Field(default=11, description="|ζ|方向网格点数")
    dim: int = Field(default=24, description="扫描使用的截断维数N")
    workers: int = Field(default=1, description="并行线程数（1为顺序执行）")
    solver_max_iter: int = Field(default=5000, description="扫描中数值不变态求解的最大迭代次数")

    @field_validator("lambda_steps", "abs_zeta_steps", "workers", "solver_max_iter")
    @classmethod
    def validate_positive_int(cls, v: int) -> int:
        """验证为正整数"""
        if v < 1:
            raise ValueError(f"必须为正整数，当前值: {v}")
        return v

    @field_validator("dim")
    @classmethod
    def validate_dim(cls, v: int) -> int:
        """验证截断维数"""
        if v < 4:
            raise ValueError(f"截断维数必须不小于4，当前值: {v}")
        return v

    model_config = SettingsConfigDict(
        env_prefix="QBD_SWEEP__",
        case_sensitive=False,
    )


class Settings(BaseSettings):
    """应用主配置类"""

    # 应用基础配置
    app_name: str = Field(default="QBD Lab", description="应用名称")
    debug: bool = Field(default=False, description="调试模式")
    log_level: str = Field(default="INFO", description="日志级别")

    # 数值配置
    max_n: int = Field(default=64, description="稠密超算子的最大截断维数（QBD_MAX_N）")
    default_seed: int = Field(default=0, description="随机输入的默认种子")
    output_dir: str = Field(default="reports", description="报告输出目录")

    tolerance: ToleranceConfig = Field(default_factory=ToleranceConfig)
    sweep: SweepDefaults = Field(default_factory=SweepDefaults)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """验证日志级别"""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"日志级别必须是{valid_levels}之一，当前值: {v}")
        return v_upper

    @field_validator("max_n")
    @classmethod
    def validate_max_n(cls, v: int) -> int:
        """验证稠密维数上限"""
        if v < 4:
            raise ValueError(f"QBD_MAX_N必须不小于4，当前值: {v}")
        return v

    model_config = SettingsConfigDict(
        env_prefix="QBD_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )


# 全局配置实例
settings = Settings()
