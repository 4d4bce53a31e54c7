"""
经典生灭链

对角子代数上的限制 P_{ℓ∞} ∘ T_ψ，按 Schrödinger（分布演化）约定给出行随机三对角矩阵：
- P(n→n+1) = λβ_{n+1}²
- P(n→n−1) = (1−λ)β_n²
- P(n→n)   = (1−λ)α_n² + λα_{n+1}²
最后一行的上行概率被截断丢弃。
"""

from typing import Union

import numpy as np
from scipy import linalg as la

from chain.channel import ApplyMode, apply_heisenberg
from chain.operators import conditional_expectation_diag, interval_projection
from config.settings import settings
from core.logger import logger
from models.results import Channel, ClassicalChain, ClassicalStationary, DiagonalInvariance, NoStationary


def classical_transition_matrix(ch: Channel) -> ClassicalChain:
    """
    经典转移矩阵（与 ζ 无关）

    Args:
        ch: 通道

    Returns:
        ClassicalChain，transition[n, k] = P(n→k)
    """
    dim = ch.dim
    lam = ch.psi.lam
    alpha, beta = ch.model.alpha, ch.model.beta
    p = np.zeros((dim, dim))
    for n in range(dim):
        p[n, n] = (1.0 - lam) * alpha[n] ** 2 + lam * alpha[n + 1] ** 2
        if n + 1 < dim:
            p[n, n + 1] = lam * beta[n + 1] ** 2
        if n >= 1:
            p[n, n - 1] = (1.0 - lam) * beta[n] ** 2
    return ClassicalChain(dim=dim, lam=lam, transition=p)


def stationarity_residual(chain: ClassicalChain, pi: np.ndarray) -> float:
    """‖πP − π‖₁，排除最后两个下标"""
    diff = pi @ chain.transition - pi
    return float(np.sum(np.abs(diff[: chain.dim - 2])))


def classical_stationary(chain: ClassicalChain) -> Union[ClassicalStationary, NoStationary]:
    """
    细致平衡解 π_n = (1−2λ)/(1−λ)·(λ/(1−λ))ⁿ

    λ ≥ ½ 时几何比 ≥ 1，返回 NoStationary。
    """
    lam = chain.lam
    if lam >= 0.5:
        ratio = float("inf") if lam == 1.0 else lam / (1.0 - lam)
        logger.debug(f"经典链无平稳分布: λ={lam}, 几何比={ratio}")
        return NoStationary(ratio=ratio, diagnosis="geometric ratio ≥ 1")

    ratio = lam / (1.0 - lam)
    pi = (1.0 - 2.0 * lam) / (1.0 - lam) * ratio ** np.arange(chain.dim)
    pi = pi / pi.sum()
    return ClassicalStationary(distribution=pi, ratio=ratio, residual=stationarity_residual(chain, pi))


def perron_vector(chain: ClassicalChain) -> np.ndarray:
    """截断矩阵的数值左不动向量（最大实部特征值对应的左特征向量，归一化为概率）"""
    values, vectors = la.eig(chain.transition.T)
    k = int(np.argmax(values.real))
    v = np.real(vectors[:, k])
    v = np.abs(v) if v.sum() >= 0 else np.abs(-v)
    return v / v.sum()


def diagonal_invariance_check(ch: Channel) -> DiagonalInvariance:
    """
    检查 T(p_n)（n ≤ N−2）是否仍为对角算子

    ζ = 0 时恒成立；否则返回最大非对角元模。
    """
    worst = 0.0
    for n in range(ch.dim - 1):
        image = apply_heisenberg(ch, interval_projection(n, n, ch.dim), ApplyMode.COEFFICIENT)
        off = image - conditional_expectation_diag(image)
        worst = max(worst, float(np.max(np.abs(off))))
    return DiagonalInvariance(invariant=worst <= settings.tolerance.exact, max_off_diagonal=worst)


__all__ = [
    "classical_transition_matrix",
    "stationarity_residual",
    "classical_stationary",
    "perron_vector",
    "diagonal_invariance_check",
]
