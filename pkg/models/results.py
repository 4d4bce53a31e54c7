"""
数值结果数据模型

定义通道、经典链、不变态、遍历性报告等结果类型。
结果对象持有 numpy 数组，使用不可变 dataclass；
报告输出时通过 utils.serialization.to_jsonable 转换。
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from models.parameters import ModelParameters, QubitState, Truncation


@dataclass(frozen=True, eq=False)
class KrausTerm:
    """带权 Kraus 项 (w, t)，T(x) = Σ w t* x t"""

    label: str
    weight: float
    op: np.ndarray


@dataclass(frozen=True, eq=False)
class Channel:
    """转移算子 T_ψ 的截断实现"""

    model: ModelParameters
    psi: QubitState
    trunc: Truncation
    kraus: tuple[KrausTerm, ...]

    @property
    def dim(self) -> int:
        return self.trunc.dim


@dataclass(frozen=True, eq=False)
class LocalitySandwich:
    """p₍m+1,n−1₎ ≤ T(p₍m,n₎) ≤ p₍m−1,n+1₎ 的检查结果"""

    m: int
    n: int
    lower_ok: bool
    upper_ok: bool
    lower_margin: float
    upper_margin: float


@dataclass(frozen=True, eq=False)
class ClassicalChain:
    """经典生灭链（Schrödinger 约定，行随机矩阵）"""

    dim: int
    lam: float
    transition: np.ndarray


@dataclass(frozen=True, eq=False)
class ClassicalStationary:
    """经典链的平稳分布"""

    distribution: np.ndarray
    ratio: float
    residual: float


@dataclass(frozen=True, eq=False)
class NoStationary:
    """不存在平稳分布（几何比 ≥ 1）"""

    ratio: float
    diagnosis: str


@dataclass(frozen=True, eq=False)
class DiagonalInvariance:
    """对角子代数不变性检查"""

    invariant: bool
    max_off_diagonal: float


class InvariantKind(str, Enum):
    """不变态来源"""

    CLOSED_FORM_DIAGONAL = "closed_form_diagonal"
    CLOSED_FORM_PURE = "closed_form_pure"
    CLOSED_FORM_BABY = "closed_form_baby"
    NUMERIC = "numeric"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class InvariantStateResult:
    """
    不变态结果

    rho 存在时为 Hermite、半正定、迹为1；kind = none 时 diagnosis 给出原因。
    renormalization 记录截断后的归一化因子偏差 |1 - Σ 尾部|。
    """

    kind: InvariantKind
    rho: Optional[np.ndarray] = None
    residual: float = 0.0
    diagnosis: Optional[str] = None
    renormalization: float = 0.0
    boundary_mass: Optional[float] = None
    iterations: Optional[int] = None
    parameter: Optional[complex] = None

    @property
    def exists(self) -> bool:
        return self.kind != InvariantKind.NONE


@dataclass(frozen=True, eq=False)
class PeripheralEigenvalue:
    """外围特征值及其内部残差"""

    value: complex
    residual: float


@dataclass(frozen=True, eq=False)
class SpectrumSummary:
    """外围谱、不动空间维数与谱隙"""

    peripheral: tuple[PeripheralEigenvalue, ...]
    fixed_dim: int
    gap: float
    dim: int
    candidates: int = 0


class SubharmonicVerdict(str, Enum):
    NO_SUBHARMONIC_FOUND = "no_subharmonic_found"
    SUBHARMONIC_FOUND = "subharmonic_found"


@dataclass(frozen=True, eq=False)
class SubharmonicProbe:
    """次调和投影探测结果（半判定：未找到不等于证明不可约）"""

    verdict: SubharmonicVerdict
    projection: Optional[np.ndarray] = None
    label: Optional[str] = None
    margin: Optional[float] = None
    kraus_residual: Optional[float] = None
    candidates_tested: int = 0


class ExtremalVerdict(str, Enum):
    EXTREMAL = "extremal"
    NOT_EXTREMAL = "not_extremal"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True, eq=False)
class Decomposition:
    """T = Σ c_k T_k，每个 T_k 由 Kraus 族给出"""

    weights: tuple[float, ...]
    components: tuple[tuple[np.ndarray, ...], ...]
    unital_residual: float
    recombination_residual: float
    witness_01: tuple[complex, complex] = (0j, 0j)
    witness_max_diff: float = 0.0


@dataclass(frozen=True, eq=False)
class ExtremalityReport:
    verdict: ExtremalVerdict
    theorem_extremal: bool
    numeric_extremal: bool
    gram_rank: int
    active_terms: int
    kraus_rank: int
    decomposition: Optional[Decomposition] = None


@dataclass(frozen=True, eq=False)
class RecursionReport:
    """系数递推方程残差与 2×2 转移矩阵"""

    residual: float
    transfer: np.ndarray
    omegas: tuple[complex, complex]
    det: complex
    trace: complex


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True, eq=False)
class CitedVerdict:
    verdict: Verdict
    citation: str


@dataclass(frozen=True, eq=False)
class TheoremVerdicts:
    irreducible: CitedVerdict
    invariant_state: CitedVerdict
    weak_mixing: CitedVerdict
    pure_invariant_state: Optional[CitedVerdict] = None


@dataclass(frozen=True, eq=False)
class ErgodicReport:
    fixed_dim: int
    peripheral: tuple[PeripheralEigenvalue, ...]
    gap: float
    irreducible_probe: SubharmonicProbe
    expected: TheoremVerdicts
    extremality: ExtremalityReport
    commutation_residuals: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class PsiPlusMixingReport:
    """β_n = (½)ⁿ、ψ₊ 例子的检查结果"""

    requested_dim: int
    resolved_dim: int
    fixed_dim: int
    peripheral: tuple[PeripheralEigenvalue, ...]
    min_growth_factor: float
    growth_bound_ok: bool
    diagonal_factor_at_one: float
    growth_factors: dict = field(default_factory=dict)


__all__ = [
    "KrausTerm",
    "Channel",
    "LocalitySandwich",
    "ClassicalChain",
    "ClassicalStationary",
    "NoStationary",
    "DiagonalInvariance",
    "InvariantKind",
    "InvariantStateResult",
    "PeripheralEigenvalue",
    "SpectrumSummary",
    "SubharmonicVerdict",
    "SubharmonicProbe",
    "ExtremalVerdict",
    "Decomposition",
    "ExtremalityReport",
    "RecursionReport",
    "Verdict",
    "CitedVerdict",
    "TheoremVerdicts",
    "ErgodicReport",
    "PsiPlusMixingReport",
]
