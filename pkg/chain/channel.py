"""
转移算子 T_ψ 及其预对偶

三条相互独立的计算路径：
- kraus: T(x) = Σ w t* x t
- dilation: T(x) = P_ψ(u*(x ⊗ 1)u)
- coefficient: 矩阵单位上的显式系数公式（不含算子乘积，作为基准）

以及结构性检查：旋转协变、时间反演、局部性夹逼、完全正性、Kadison–Schwarz。
"""

import math
from enum import Enum
from typing import Iterator, Union

import numpy as np

from chain.model import density_matrix, rotate_state
from chain.operators import (
    basis_operators,
    conditional_expectation_psi,
    dilation_unitary,
    interval_projection,
    tensor_identity,
)
from config.settings import settings
from core.exceptions import DimensionGuard, IndexOutOfRange, ShapeMismatch
from core.logger import logger
from models.parameters import ModelParameters, QubitState, Truncation
from models.results import Channel, KrausTerm, LocalitySandwich
from utils.linalg import max_entry, psd_margin

# Choi 矩阵的维数上限（N² × N²）
CHOI_MAX_N = 8


class ApplyMode(str, Enum):
    KRAUS = "kraus"
    DILATION = "dilation"
    COEFFICIENT = "coefficient"


def kraus_set(model: ModelParameters, psi: QubitState, trunc: Truncation) -> Channel:
    """
    构造带权 Kraus 族

    t₁ = s*as + iζc·s*b，t₂ = bs − iζc·a（权重 λ），
    t₃ = s*b，t₄ = a（权重 (1−λ)(1−|ζ|²)），c = √((1−λ)/λ)。
    权重为0的项直接省略；c 仅在 λ > 0 时计算。

    Args:
        model: 模型参数
        psi: 态 ψ
        trunc: 截断配置

    Returns:
        Channel
    """
    if model.n_max < trunc.dim:
        raise ShapeMismatch(f"模型参数需物化到n_max ≥ N={trunc.dim}，实际n_max={model.n_max}")
    s, a, b = basis_operators(model, trunc.dim)
    sh = s.conj().T
    lam = psi.lam
    outer_weight = (1.0 - lam) * (1.0 - psi.abs_zeta ** 2)

    terms: list[KrausTerm] = []
    if lam > 0.0:
        c = math.sqrt((1.0 - lam) / lam)
        t1 = sh @ a @ s + 1j * psi.zeta * c * (sh @ b)
        t2 = b @ s - 1j * psi.zeta * c * a
        terms.append(KrausTerm("t1", lam, t1))
        terms.append(KrausTerm("t2", lam, t2))
    if outer_weight > 0.0:
        terms.append(KrausTerm("t3", outer_weight, sh @ b))
        terms.append(KrausTerm("t4", outer_weight, a.copy()))

    logger.debug(
        f"Kraus族构造完成: λ={lam:.4g}, |ζ|={psi.abs_zeta:.4g}, N={trunc.dim}, 项数={len(terms)}"
    )
    return Channel(model=model, psi=psi, trunc=trunc, kraus=tuple(terms))


def _check_square(ch: Channel, x: np.ndarray, name: str = "x") -> None:
    if x.shape != (ch.dim, ch.dim):
        raise ShapeMismatch(f"{name} 形状 {x.shape} 与截断维数 N={ch.dim} 不一致")


def matrix_unit_image(ch: Channel, n: int, m: int) -> Iterator[tuple[int, int, complex]]:
    """
    T(e_{n,m}) 的系数展开，逐项产出 (row, col, coeff)

    主项：
        (λα_{n+1}α_{m+1} + (1−λ)α_nα_m) e_{n,m}
        + (1−λ)β_{n+1}β_{m+1} e_{n+1,m+1}
        + α_{m+1}β_{n+1}ν̄ e_{n+1,m} + α_{n+1}β_{m+1}ν e_{n,m+1}
    下移项按四种边界情况区分。超出 [0, N−1] 的目标被丢弃。
    """
    alpha, beta = ch.model.alpha, ch.model.beta
    lam = ch.psi.lam
    nu = ch.psi.nu
    nu_bar = nu.conjugate()
    top = ch.dim - 1

    terms: list[tuple[int, int, complex]] = [
        (n, m, lam * alpha[n + 1] * alpha[m + 1] + (1.0 - lam) * alpha[n] * alpha[m]),
        (n + 1, m + 1, (1.0 - lam) * beta[n + 1] * beta[m + 1]),
        (n + 1, m, alpha[m + 1] * beta[n + 1] * nu_bar),
        (n, m + 1, alpha[n + 1] * beta[m + 1] * nu),
    ]
    if n >= 1 and m >= 1:
        terms.append((n - 1, m - 1, lam * beta[n] * beta[m]))
        terms.append((n - 1, m, -alpha[m] * beta[n] * nu))
        terms.append((n, m - 1, -alpha[n] * beta[m] * nu_bar))
    elif n == 0 and m >= 1:
        terms.append((0, m - 1, -alpha[0] * beta[m] * nu_bar))
    elif n >= 1 and m == 0:
        terms.append((n - 1, 0, -alpha[0] * beta[n] * nu))

    for row, col, coeff in terms:
        if row <= top and col <= top and coeff != 0:
            yield row, col, complex(coeff)


def _heisenberg_kraus(ch: Channel, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=complex)
    for term in ch.kraus:
        out += term.weight * (term.op.conj().T @ x @ term.op)
    return out


def _heisenberg_dilation(ch: Channel, x: np.ndarray) -> np.ndarray:
    u = dilation_unitary(ch.model, ch.dim)
    big = u.conj().T @ tensor_identity(x) @ u
    return conditional_expectation_psi(big, density_matrix(ch.psi))


def _heisenberg_coefficient(ch: Channel, x: np.ndarray) -> np.ndarray:
    out = np.zeros((ch.dim, ch.dim), dtype=complex)
    rows, cols = np.nonzero(x)
    for n, m in zip(rows.tolist(), cols.tolist()):
        value = x[n, m]
        for row, col, coeff in matrix_unit_image(ch, n, m):
            out[row, col] += coeff * value
    return out


def apply_heisenberg(
    ch: Channel,
    x: np.ndarray,
    mode: Union[ApplyMode, str] = ApplyMode.KRAUS,
) -> np.ndarray:
    """
    计算 T_ψ(x)

    三种模式在支撑于 p₍₀,N−2₎ 的输入上逐元素一致（≤ 1e-12）。

    Args:
        ch: 通道
        x: N×N 矩阵
        mode: kraus / dilation / coefficient

    Raises:
        ShapeMismatch: x 的形状与 N 不符
    """
    _check_square(ch, x)
    mode = ApplyMode(mode)
    x = np.asarray(x, dtype=complex)
    if mode == ApplyMode.KRAUS:
        return _heisenberg_kraus(ch, x)
    if mode == ApplyMode.DILATION:
        return _heisenberg_dilation(ch, x)
    return _heisenberg_coefficient(ch, x)


def apply_schrodinger(ch: Channel, rho: np.ndarray) -> np.ndarray:
    """
    预对偶 T_*(ρ) = Σ w t ρ t*

    Raises:
        ShapeMismatch: ρ 的形状与 N 不符
    """
    _check_square(ch, rho, "rho")
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for term in ch.kraus:
        out += term.weight * (term.op @ rho @ term.op.conj().T)
    return out


def apply_time_reversed(ch: Channel, x: np.ndarray) -> np.ndarray:
    """时间反演过程 T⁺_ψ(x) = P_ψ(u(x ⊗ 1)u*)，等于 (λ, −ζ) 的转移算子"""
    _check_square(ch, x)
    u = dilation_unitary(ch.model, ch.dim)
    big = u @ tensor_identity(np.asarray(x, dtype=complex)) @ u.conj().T
    return conditional_expectation_psi(big, density_matrix(ch.psi))


def boundary_leakage(ch: Channel) -> float:
    """截断泄漏 ‖T(1) − 1‖_max（非零元只出现在下标 ≥ N−2）"""
    identity = np.eye(ch.dim, dtype=complex)
    return max_entry(apply_heisenberg(ch, identity) - identity)


def rotation_unitary(theta: complex, dim: int) -> np.ndarray:
    """u = diag(θ̄^k)，使 T_{(λ,ζθ)}(x) = u T_ψ(u* x u) u*"""
    return np.diag(np.conj(complex(theta)) ** np.arange(dim))


def conjugate_rotation(ch: Channel, theta: complex) -> tuple[Channel, np.ndarray]:
    """
    旋转共轭

    Args:
        ch: 原通道 T_ψ
        theta: 单位模复数

    Returns:
        (ψθ = (λ, ζθ) 的通道, 对角酉 u)

    Raises:
        OutOfRange: |θ| ≠ 1
    """
    rotated = rotate_state(ch.psi, theta)
    return kraus_set(ch.model, rotated, ch.trunc), rotation_unitary(theta, ch.dim)


def rotation_covariance_residual(ch: Channel, theta: complex, x: np.ndarray) -> float:
    """max |T_{ψθ}(x) − u T_ψ(u* x u) u*|"""
    rotated, u = conjugate_rotation(ch, theta)
    uh = u.conj().T
    lhs = apply_heisenberg(rotated, x)
    rhs = u @ apply_heisenberg(ch, uh @ x @ u) @ uh
    return max_entry(lhs - rhs)


def locality_sandwich_check(ch: Channel, m: int, n: int) -> LocalitySandwich:
    """
    检查 p₍m+1,n−1₎ ≤ T(p₍m,n₎) ≤ p₍m−1,n+1₎

    Raises:
        IndexOutOfRange: 不满足 1 ≤ m ≤ n ≤ N−3
    """
    if not (1 <= m <= n <= ch.dim - 3):
        raise IndexOutOfRange(f"夹逼检查需要 1 ≤ m ≤ n ≤ N−3，实际 m={m}, n={n}, N={ch.dim}")

    image = apply_heisenberg(ch, interval_projection(m, n, ch.dim), ApplyMode.COEFFICIENT)
    if m + 1 <= n - 1:
        lower = interval_projection(m + 1, n - 1, ch.dim)
    else:
        lower = np.zeros((ch.dim, ch.dim), dtype=complex)
    upper = interval_projection(m - 1, n + 1, ch.dim)

    tol = settings.tolerance.psd
    lower_margin = psd_margin(image - lower)
    upper_margin = psd_margin(upper - image)
    return LocalitySandwich(
        m=m,
        n=n,
        lower_ok=lower_margin >= -tol,
        upper_ok=upper_margin >= -tol,
        lower_margin=lower_margin,
        upper_margin=upper_margin,
    )


def choi_matrix(ch: Channel) -> np.ndarray:
    """
    Choi 矩阵 Σ_{m,n} e_{m,n} ⊗ T_*(e_{m,n})

    Raises:
        DimensionGuard: N > 8
    """
    if ch.dim > CHOI_MAX_N:
        raise DimensionGuard(ch.dim, CHOI_MAX_N, name="Choi limit")
    dim = ch.dim
    choi = np.zeros((dim * dim, dim * dim), dtype=complex)
    for m in range(dim):
        for n in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[m, n] = 1.0
            choi += np.kron(unit, apply_schrodinger(ch, unit))
    return choi


def kadison_schwarz_margin(ch: Channel, x: np.ndarray) -> float:
    """T(x*x) − T(x)*T(x) 的半正定裕度"""
    tx = apply_heisenberg(ch, x)
    return psd_margin(apply_heisenberg(ch, x.conj().T @ x) - tx.conj().T @ tx)


def duality_gap(ch: Channel, rho: np.ndarray, x: np.ndarray) -> float:
    """|Tr(T_*(ρ)x) − Tr(ρT(x))|"""
    left = np.trace(apply_schrodinger(ch, rho) @ x)
    right = np.trace(rho @ apply_heisenberg(ch, x))
    return float(abs(left - right))


def random_interior_operator(rng: np.random.Generator, dim: int, hermitian: bool = False) -> np.ndarray:
    """支撑于 p₍₀,N−2₎ 的随机复矩阵"""
    x = np.zeros((dim, dim), dtype=complex)
    k = dim - 1
    x[:k, :k] = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    if hermitian:
        x = 0.5 * (x + x.conj().T)
    return x


def random_interior_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    """支撑于 p₍₀,N−2₎ 的随机密度矩阵"""
    g = random_interior_operator(rng, dim)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


__all__ = [
    "ApplyMode",
    "kraus_set",
    "matrix_unit_image",
    "apply_heisenberg",
    "apply_schrodinger",
    "apply_time_reversed",
    "boundary_leakage",
    "rotation_unitary",
    "conjugate_rotation",
    "rotation_covariance_residual",
    "locality_sandwich_check",
    "choi_matrix",
    "kadison_schwarz_margin",
    "duality_gap",
    "random_interior_operator",
    "random_interior_state",
]
