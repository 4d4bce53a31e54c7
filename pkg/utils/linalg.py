"""
线性代数辅助工具

提供：
- 最大元素范数、迹范数
- Hermite 矩阵的半正定裕度
- 数值秩（奇异值阈值）
- 角块截取与带宽估计
"""

import numpy as np
from scipy import linalg as la


def max_entry(x: np.ndarray) -> float:
    """最大元素模，空矩阵返回0"""
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(x)))


def trace_norm(x: np.ndarray) -> float:
    """迹范数 ‖x‖₁（奇异值之和）"""
    if x.size == 0:
        return 0.0
    return float(np.sum(la.svdvals(x)))


def hermitian_part(x: np.ndarray) -> np.ndarray:
    """(x + x*) / 2"""
    return 0.5 * (x + x.conj().T)


def min_eigenvalue(h: np.ndarray) -> float:
    """Hermite 矩阵的最小特征值"""
    if h.size == 0:
        return 0.0
    return float(la.eigvalsh(hermitian_part(h))[0])


def psd_margin(h: np.ndarray) -> float:
    """
    半正定裕度：最小特征值除以 max(1, ‖h‖_max)

    结果 ≥ -tol 即视为半正定。
    """
    return min_eigenvalue(h) / max(1.0, max_entry(h))


def numerical_rank(mat: np.ndarray, rel_tol: float = 1e-12, scale: int | None = None) -> int:
    """
    数值秩：奇异值 > scale·rel_tol·σ_max 的个数

    Args:
        mat: 任意矩阵
        rel_tol: 相对阈值
        scale: 阈值乘子，默认取 max(mat.shape)

    Returns:
        数值秩
    """
    if mat.size == 0:
        return 0
    sv = la.svdvals(mat)
    if sv[0] == 0.0:
        return 0
    factor = max(mat.shape) if scale is None else scale
    return int(np.sum(sv > factor * rel_tol * sv[0]))


def corner(x: np.ndarray, last: int) -> np.ndarray:
    """取角块 x[0..last, 0..last]"""
    return x[: last + 1, : last + 1]


def bandwidth(x: np.ndarray, tol: float = 0.0) -> tuple[int, int]:
    """
    非零模式的带宽 (lower, upper)

    lower = max(m - n)，upper = max(n - m)，只统计 |x_{m,n}| > tol 的元素。
    """
    rows, cols = np.nonzero(np.abs(x) > tol)
    if rows.size == 0:
        return (0, 0)
    diff = rows - cols
    return (int(max(diff.max(), 0)), int(max((-diff).max(), 0)))


__all__ = [
    "max_entry",
    "trace_norm",
    "hermitian_part",
    "min_eigenvalue",
    "psd_margin",
    "numerical_rank",
    "corner",
    "bandwidth",
]
