"""
模型参数与二能级态

功能：
- make_model: 生成并校验 (α_n), (β_n)（general / homogeneous / baby / jaynes_cummings）
- qubit_state: 构造态 ψ = (λ, ζ)
- density_matrix: ψ 的 2×2 密度矩阵
- rotate_state: ζ ↦ ζθ
- classify_state: faithful / pure / diagonal 分类
"""

import math
from typing import Any, Mapping, Optional, Union

import numpy as np

from config.settings import settings
from core.exceptions import NormalizationViolation, OutOfRange, TrappingState
from core.logger import logger
from models.parameters import ModelKind, ModelParameters, QubitState, StateFlags

# 纯态判定容差
PURE_TOL = 1e-12
# |ζ| ≤ 1 的舍入余量
ZETA_SLACK = 1e-15
# |θ| = 1 的容差
THETA_TOL = 1e-12


def _validate_sequences(alpha: np.ndarray, beta: np.ndarray) -> None:
    """校验归一化与陷阱态，违规时抛出对应异常"""
    norm_tol = settings.tolerance.normalization
    trap_tol = settings.tolerance.trapping

    for n in range(alpha.shape[0]):
        deviation = abs(alpha[n] ** 2 + beta[n] ** 2 - 1.0)
        if deviation > norm_tol:
            raise NormalizationViolation(n, deviation)
        if abs(alpha[n]) > 1.0 + norm_tol or abs(beta[n]) > 1.0 + norm_tol:
            raise NormalizationViolation(n, deviation)

    for n in range(1, beta.shape[0]):
        if abs(beta[n]) <= trap_tol:
            raise TrappingState(n, float(beta[n]), trap_tol)


def make_model(
    kind: Union[ModelKind, str],
    args: Optional[Mapping[str, Any]] = None,
    n_max: int = 2,
) -> ModelParameters:
    """
    生成模型参数序列

    Args:
        kind: general / homogeneous / baby / jaynes_cummings
        args: general 需要 alphas、betas 序列；homogeneous 需要 alpha、beta；
              jaynes_cummings 需要 g；baby 无参数
        n_max: 最大下标（通常取截断维数 N），至少为2

    Returns:
        校验通过的 ModelParameters，α₀ = 1、β₀ = 0

    Raises:
        TrappingState: 存在 1 ≤ n ≤ n_max 使 |β_n| ≤ 1e-9
        NormalizationViolation: α_n² + β_n² 偏离 1
        ValueError: 参数与 kind 不匹配
    """
    kind = ModelKind(kind)
    args = dict(args or {})
    if n_max < 2:
        raise ValueError(f"n_max必须不小于2，当前值: {n_max}")

    n = np.arange(n_max + 1)
    g: Optional[float] = None
    pair: Optional[tuple[float, float]] = None

    if kind == ModelKind.BABY:
        alpha = np.zeros(n_max + 1)
        beta = np.ones(n_max + 1)
    elif kind == ModelKind.HOMOGENEOUS:
        if "alpha" not in args or "beta" not in args:
            raise ValueError("homogeneous模型需要参数alpha和beta")
        a, b = float(args["alpha"]), float(args["beta"])
        alpha = np.full(n_max + 1, a)
        beta = np.full(n_max + 1, b)
        pair = (a, b)
    elif kind == ModelKind.JAYNES_CUMMINGS:
        if "g" not in args:
            raise ValueError("jaynes_cummings模型需要参数g")
        g = float(args["g"])
        alpha = np.cos(g * np.sqrt(n))
        beta = -np.sin(g * np.sqrt(n))
    else:
        if "alphas" not in args or "betas" not in args:
            raise ValueError("general模型需要序列alphas和betas")
        alpha = np.asarray(args["alphas"], dtype=float)
        beta = np.asarray(args["betas"], dtype=float)
        if alpha.shape[0] < n_max + 1 or beta.shape[0] < n_max + 1:
            raise ValueError(
                f"general模型序列长度不足: 需要{n_max + 1}项，"
                f"实际alphas={alpha.shape[0]}, betas={beta.shape[0]}"
            )
        alpha = alpha[: n_max + 1].copy()
        beta = beta[: n_max + 1].copy()

    alpha = np.array(alpha, dtype=float)
    beta = np.array(beta, dtype=float)
    alpha[0] = 1.0
    beta[0] = 0.0

    _validate_sequences(alpha, beta)

    model = ModelParameters(kind=kind, alpha=alpha, beta=beta, g=g, homogeneous_pair=pair)
    logger.debug(f"模型参数生成完成: kind={kind.value}, n_max={n_max}")
    return model


def qubit_state(lam: float, zeta: complex = 0j) -> QubitState:
    """
    构造态 ψ = (λ, ζ)

    λ ∈ {0, 1} 时 ζ 被置为0。

    Raises:
        OutOfRange: λ ∉ [0, 1] 或 |ζ| > 1
    """
    lam = float(lam)
    zeta = complex(zeta)
    if not (0.0 <= lam <= 1.0) or math.isnan(lam):
        raise OutOfRange("lambda", lam, "λ必须在[0, 1]内")
    if abs(zeta) > 1.0 + ZETA_SLACK or math.isnan(abs(zeta)):
        raise OutOfRange("|zeta|", abs(zeta), "|ζ|必须不大于1")
    if lam in (0.0, 1.0):
        zeta = 0j
    return QubitState(lam=lam, zeta=zeta)


def density_matrix(psi: QubitState) -> np.ndarray:
    """ψ 的密度矩阵 [[λ, ζ̄√(λ(1-λ))], [ζ√(λ(1-λ)), 1-λ]]"""
    r = math.sqrt(psi.lam * (1.0 - psi.lam))
    return np.array(
        [
            [psi.lam, np.conj(psi.zeta) * r],
            [psi.zeta * r, 1.0 - psi.lam],
        ],
        dtype=complex,
    )


def rotate_state(psi: QubitState, theta: complex) -> QubitState:
    """
    旋转态：(λ, ζ) ↦ (λ, ζθ)

    Raises:
        OutOfRange: |θ| ≠ 1
    """
    theta = complex(theta)
    if abs(abs(theta) - 1.0) > THETA_TOL:
        raise OutOfRange("theta", theta, "|θ|必须等于1")
    return QubitState(lam=psi.lam, zeta=psi.zeta * theta)


def classify_state(psi: QubitState) -> StateFlags:
    """faithful ⇔ 0<λ<1 且 |ζ|<1；pure ⇔ λ∈{0,1} 或 |ζ|=1；diagonal ⇔ ζ=0"""
    on_circle = abs(psi.abs_zeta - 1.0) <= PURE_TOL
    pole = psi.lam in (0.0, 1.0)
    return StateFlags(
        faithful=(0.0 < psi.lam < 1.0) and not on_circle and psi.abs_zeta < 1.0,
        pure=pole or on_circle,
        diagonal=psi.zeta == 0,
    )


def is_psi_plus(psi: QubitState) -> bool:
    """ψ₊: λ = 1"""
    return psi.lam == 1.0


def is_psi_minus(psi: QubitState) -> bool:
    """ψ₋: λ = 0"""
    return psi.lam == 0.0


__all__ = [
    "make_model",
    "qubit_state",
    "density_matrix",
    "rotate_state",
    "classify_state",
    "is_psi_plus",
    "is_psi_minus",
]
