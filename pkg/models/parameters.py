"""
链参数数据模型

定义模型参数序列 (α_n), (β_n)、二能级态 ψ 以及截断配置。
所有模型均为不可变对象，可在线程间共享。
"""

import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ModelKind(str, Enum):
    """模型参数生成方式"""

    GENERAL = "general"
    HOMOGENEOUS = "homogeneous"
    BABY = "baby"
    JAYNES_CUMMINGS = "jaynes_cummings"


class ModelParameters(BaseModel):
    """
    模型参数序列

    alpha[n], beta[n] 对 n = 0..n_max 均已物化，构造后只读。
    校验（陷阱态、归一化）由 chain.model.make_model 完成。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ModelKind = Field(..., description="参数生成方式")
    alpha: np.ndarray = Field(..., description="α_0..α_{n_max}")
    beta: np.ndarray = Field(..., description="β_0..β_{n_max}")
    g: Optional[float] = Field(None, description="Jaynes-Cummings 场常数")
    homogeneous_pair: Optional[tuple[float, float]] = Field(None, description="齐次模型的 (α, β)")

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def freeze_array(cls, v: np.ndarray) -> np.ndarray:
        """转为只读 float64 数组"""
        arr = np.array(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError(f"参数序列必须是一维数组，当前维数: {arr.ndim}")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_lengths(self) -> "ModelParameters":
        """α 与 β 长度一致"""
        if self.alpha.shape != self.beta.shape:
            raise ValueError(f"α与β长度不一致: {self.alpha.shape} != {self.beta.shape}")
        return self

    @property
    def n_max(self) -> int:
        """最大下标"""
        return int(self.alpha.shape[0] - 1)

    @property
    def alpha_value(self) -> Optional[float]:
        """齐次模型的 α（baby 模型为 0）"""
        if self.kind == ModelKind.BABY:
            return 0.0
        if self.homogeneous_pair is not None:
            return self.homogeneous_pair[0]
        return None

    @property
    def beta_value(self) -> Optional[float]:
        """齐次模型的 β（baby 模型为 1）"""
        if self.kind == ModelKind.BABY:
            return 1.0
        if self.homogeneous_pair is not None:
            return self.homogeneous_pair[1]
        return None

    @property
    def is_homogeneous(self) -> bool:
        """baby 是 α=0, β=1 的齐次模型"""
        return self.kind in (ModelKind.HOMOGENEOUS, ModelKind.BABY)


class QubitState(BaseModel):
    """
    M₂ 上的态 ψ，密度矩阵 [[λ, ζ̄√(λ(1-λ))], [ζ√(λ(1-λ)), 1-λ]]

    ν = iζ√(λ(1-λ)) 每次读取时重新计算。
    """

    model_config = ConfigDict(frozen=True)

    lam: float = Field(..., description="λ ∈ [0, 1]")
    zeta: complex = Field(default=0j, description="ζ，|ζ| ≤ 1")

    @property
    def nu(self) -> complex:
        """ν = iζ√(λ(1-λ))"""
        return 1j * self.zeta * math.sqrt(self.lam * (1.0 - self.lam))

    @property
    def abs_zeta(self) -> float:
        return abs(self.zeta)


class StateFlags(BaseModel):
    """态分类标记"""

    model_config = ConfigDict(frozen=True)

    faithful: bool
    pure: bool
    diagonal: bool


class Truncation(BaseModel):
    """截断配置：基 e_0..e_{N-1}，内部区域为下标 ≤ N-1-margin"""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(..., description="截断维数 N")
    interior_margin: int = Field(default=1, description="边界宽度")

    @model_validator(mode="after")
    def check_dims(self) -> "Truncation":
        """N ≥ 4，margin ≥ 1，N - 2·margin ≥ 2"""
        if self.dim < 4:
            raise ValueError(f"截断维数必须不小于4，当前值: {self.dim}")
        if self.interior_margin < 1:
            raise ValueError(f"interior_margin必须不小于1，当前值: {self.interior_margin}")
        if self.dim - 2 * self.interior_margin < 2:
            raise ValueError(
                f"截断维数{self.dim}不足以容纳边界宽度{self.interior_margin}"
            )
        return self

    @property
    def interior(self) -> int:
        """内部区域最后一个下标"""
        return self.dim - 1 - self.interior_margin


__all__ = ["ModelKind", "ModelParameters", "QubitState", "StateFlags", "Truncation"]
