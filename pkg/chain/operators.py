"""
截断算子工具箱

截断空间为 span{e_0..e_{N-1}}，矩阵元约定 x_{m,n} = ⟨x e_n, e_m⟩。
所有算子均以 N×N complex128 的 numpy 数组表示（压缩 p₍₀,N−1₎ x p₍₀,N−1₎）。

功能：
- basis_operators: 截断移位 s 与对角算子 a、b
- matrix_unit / interval_projection
- dilation_unitary: 2N×2N 酉膨胀 [[s*as, i s*b], [i bs, a]]
- conditional_expectation_psi / conditional_expectation_diag
"""

import numpy as np

from chain.model import density_matrix
from core.exceptions import IndexOutOfRange, ShapeMismatch
from models.parameters import ModelParameters, QubitState

# 类型别名：N×N 截断算子
TruncatedOperator = np.ndarray


def shift(dim: int) -> np.ndarray:
    """截断等距移位 s：s e_n = e_{n+1}（n < N-1），e_{N-1} ↦ 0"""
    return np.eye(dim, k=-1, dtype=complex)


def basis_operators(model: ModelParameters, dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    截断基本算子

    Args:
        model: 已校验的模型参数（n_max ≥ dim - 1）
        dim: 截断维数 N

    Returns:
        (s, a, b)，a = diag(α_0..α_{N-1})，b = diag(β_0..β_{N-1})
    """
    if model.n_max < dim - 1:
        raise ShapeMismatch(f"模型参数只物化到n_max={model.n_max}，无法截断到N={dim}")
    s = shift(dim)
    a = np.diag(model.alpha[:dim]).astype(complex)
    b = np.diag(model.beta[:dim]).astype(complex)
    return s, a, b


def matrix_unit(m: int, n: int, dim: int) -> np.ndarray:
    """
    矩阵单位 e_{m,n}：第 m 行第 n 列为1

    Raises:
        IndexOutOfRange: 下标不在 [0, N) 内
    """
    if not (0 <= m < dim and 0 <= n < dim):
        raise IndexOutOfRange(f"矩阵单位下标越界: ({m}, {n})，N={dim}")
    e = np.zeros((dim, dim), dtype=complex)
    e[m, n] = 1.0
    return e


def interval_projection(m: int, n: int, dim: int) -> np.ndarray:
    """
    区间投影 p₍m,n₎ = Σ_{k=m}^{n} p_k

    Raises:
        IndexOutOfRange: 不满足 0 ≤ m ≤ n < N
    """
    if not (0 <= m <= n < dim):
        raise IndexOutOfRange(f"区间投影下标越界: [{m}, {n}]，N={dim}")
    diag = np.zeros(dim, dtype=complex)
    diag[m : n + 1] = 1.0
    return np.diag(diag)


def complement(p: np.ndarray) -> np.ndarray:
    """p^⊥ = 1 - p"""
    return np.eye(p.shape[0], dtype=complex) - p


def dilation_unitary(model: ModelParameters, dim: int) -> np.ndarray:
    """
    酉膨胀 u = [[s*as, i s*b], [i bs, a]]

    块顺序为 (H ⊗ e₁, H ⊗ e₂)。截断后 u*u 只在涉及下标 N-1 的行列上偏离单位阵。
    """
    s, a, b = basis_operators(model, dim)
    sh = s.conj().T
    u = np.zeros((2 * dim, 2 * dim), dtype=complex)
    u[:dim, :dim] = sh @ a @ s
    u[:dim, dim:] = 1j * sh @ b
    u[dim:, :dim] = 1j * b @ s
    u[dim:, dim:] = a
    return u


def conditional_expectation_psi(big: np.ndarray, psi: QubitState | np.ndarray) -> np.ndarray:
    """
    条件期望 P_ψ(X) = ρ₁₁X₁₁ + ρ₂₁X₁₂ + ρ₁₂X₂₁ + ρ₂₂X₂₂

    Args:
        big: 2N×2N 分块矩阵
        psi: 态 ψ 或其 2×2 密度矩阵

    Raises:
        ShapeMismatch: big 不是偶数边长的方阵
    """
    if big.ndim != 2 or big.shape[0] != big.shape[1] or big.shape[0] % 2:
        raise ShapeMismatch(f"P_ψ 需要 2N×2N 分块矩阵，实际形状: {big.shape}")
    psi_rho = density_matrix(psi) if isinstance(psi, QubitState) else np.asarray(psi)
    if psi_rho.shape != (2, 2):
        raise ShapeMismatch(f"密度矩阵必须为2×2，实际形状: {psi_rho.shape}")
    d = big.shape[0] // 2
    return (
        psi_rho[0, 0] * big[:d, :d]
        + psi_rho[1, 0] * big[:d, d:]
        + psi_rho[0, 1] * big[d:, :d]
        + psi_rho[1, 1] * big[d:, d:]
    )


def conditional_expectation_diag(x: np.ndarray) -> np.ndarray:
    """P_{ℓ∞}(x) = Σ p_n x p_n，保留对角"""
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ShapeMismatch(f"需要方阵，实际形状: {x.shape}")
    return np.diag(np.diag(x))


def tensor_identity(x: np.ndarray) -> np.ndarray:
    """x ⊗ 1 在 (H ⊗ e₁, H ⊗ e₂) 块顺序下为 diag(x, x)"""
    return np.kron(np.eye(2), x)


__all__ = [
    "TruncatedOperator",
    "shift",
    "basis_operators",
    "matrix_unit",
    "interval_projection",
    "complement",
    "dilation_unitary",
    "conditional_expectation_psi",
    "conditional_expectation_diag",
    "tensor_identity",
]
