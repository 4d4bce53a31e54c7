"""
不变态与显式不动点

功能：
- invariant_state_diagonal: ζ = 0 时的对角闭式不变态（λ < ½）
- invariant_pure_state_homogeneous: 齐次模型、纯态 ψ 的纯不变态（λ < ½(1−α)）
- invariant_state_baby: baby 模型的闭式不变态（任意 ζ，λ < ½）
- solve_invariant_numeric: 预对偶幂迭代
- explicit_fixed_points: λ > ½ 时的显式不动点族 y_n
- verify_invariant: ‖T_*(ρ) − ρ‖_tr（内部角块）

截断后的闭式态统一重新归一化，截掉的几何尾部记录在 renormalization 字段。
"""

import math
from typing import Optional

import numpy as np

from chain.channel import apply_heisenberg, apply_schrodinger, kraus_set
from chain.model import classify_state, make_model
from chain.operators import basis_operators
from config.settings import settings
from core.exceptions import ConvergenceFailure, PreconditionViolated
from core.logger import logger
from models.parameters import ModelKind, ModelParameters, QubitState, Truncation
from models.results import Channel, InvariantKind, InvariantStateResult
from utils.linalg import corner, hermitian_part, max_entry, trace_norm

# 边界质量检查的预热轮数（乘以 N）
BURN_IN_FACTOR = 4
# 迹低于此值视为质量全部逃逸
MIN_TRACE = 1e-300


def verify_invariant(ch: Channel, rho: np.ndarray) -> float:
    """
    不变性残差 ‖T_*(ρ) − ρ‖_tr

    两侧均投影到角块 p₍₀,N−2₎ 后计算。
    """
    last = ch.dim - 2
    return trace_norm(corner(apply_schrodinger(ch, rho) - rho, last))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """迹距离 ½‖ρ − σ‖_tr"""
    return 0.5 * trace_norm(rho - sigma)


def boundary_mass(rho: np.ndarray, width: int = 2) -> float:
    """下标 ≥ N−width 的对角质量"""
    return float(np.sum(np.real(np.diag(rho))[-width:]))


def mass_centre(rho: np.ndarray) -> float:
    """对角质量的平均下标，按 N−1 归一化到 [0, 1]"""
    populations = np.real(np.diag(rho))
    total = float(np.sum(populations))
    if total <= 0.0:
        return 0.0
    return float(np.dot(np.arange(rho.shape[0]), populations)) / (total * (rho.shape[0] - 1))


def _normalized(rho: np.ndarray) -> tuple[np.ndarray, float]:
    """归一化到迹1，返回 (ρ, |1 − 原迹|)"""
    trace = float(np.real(np.trace(rho)))
    return rho / trace, abs(1.0 - trace)


def invariant_state_diagonal(
    model: ModelParameters,
    psi: QubitState,
    trunc: Truncation,
) -> InvariantStateResult:
    """
    对角闭式不变态 ρ = (1−2λ)/(1−λ)·diag(1, r, r², ...)，r = λ/(1−λ)

    Args:
        model: 任意模型
        psi: ζ = 0 的态
        trunc: 截断配置

    Returns:
        λ < ½ 时为 closed_form_diagonal，否则 kind = none

    Raises:
        PreconditionViolated: ζ ≠ 0
    """
    if psi.zeta != 0:
        raise PreconditionViolated(f"对角闭式不变态要求ζ=0，当前ζ={psi.zeta}")

    lam = psi.lam
    if lam >= 0.5:
        logger.debug(f"对角不变态不存在: λ={lam} ≥ ½")
        return InvariantStateResult(kind=InvariantKind.NONE, diagnosis="geometric ratio ≥ 1")

    r = lam / (1.0 - lam)
    weights = (1.0 - 2.0 * lam) / (1.0 - lam) * r ** np.arange(trunc.dim)
    rho, renorm = _normalized(np.diag(weights).astype(complex))

    ch = kraus_set(model, psi, trunc)
    residual = verify_invariant(ch, rho)
    logger.debug(f"对角闭式不变态: λ={lam}, N={trunc.dim}, 残差={residual:.3e}")
    return InvariantStateResult(
        kind=InvariantKind.CLOSED_FORM_DIAGONAL,
        rho=rho,
        residual=residual,
        renormalization=renorm,
        boundary_mass=boundary_mass(rho),
        parameter=complex(r),
    )


def pure_state_parameter(model: ModelParameters, psi: QubitState) -> complex:
    """q = iζ̄·β/(1−α)·√(λ/(1−λ))"""
    alpha, beta = model.alpha_value, model.beta_value
    return 1j * np.conj(psi.zeta) * beta / (1.0 - alpha) * math.sqrt(psi.lam / (1.0 - psi.lam))


def invariant_pure_state_homogeneous(
    model: ModelParameters,
    psi: QubitState,
    trunc: Truncation,
) -> InvariantStateResult:
    """
    齐次模型、纯态 ψ 的纯不变态 ρ = |ξ⟩⟨ξ|，ξ_n ∝ qⁿ

    Args:
        model: homogeneous 或 baby 模型
        psi: |ζ| = 1 且 0 < λ < 1
        trunc: 截断配置

    Returns:
        λ < ½(1−α) 时为 closed_form_pure（parameter = q），否则 kind = none

    Raises:
        PreconditionViolated: 模型非齐次，或 ψ 不满足纯态条件
    """
    if not model.is_homogeneous:
        raise PreconditionViolated(f"纯不变态要求齐次模型，当前模型: {model.kind.value}")
    if not (0.0 < psi.lam < 1.0) or not classify_state(psi).pure:
        raise PreconditionViolated(f"纯不变态要求|ζ|=1且0<λ<1，当前λ={psi.lam}, |ζ|={psi.abs_zeta}")

    alpha = model.alpha_value
    threshold = 0.5 * (1.0 - alpha)
    if psi.lam >= threshold:
        logger.debug(f"纯不变态不存在: λ={psi.lam} ≥ ½(1−α)={threshold}")
        return InvariantStateResult(kind=InvariantKind.NONE, diagnosis="pure threshold λ ≥ ½(1−α)")

    q = pure_state_parameter(model, psi)
    xi = q ** np.arange(trunc.dim)
    rho, renorm = _normalized(np.outer(xi, xi.conj()))

    ch = kraus_set(model, psi, trunc)
    residual = verify_invariant(ch, rho)
    logger.debug(f"纯不变态: q={q:.6g}, |q|²={abs(q) ** 2:.6g}, 残差={residual:.3e}")
    return InvariantStateResult(
        kind=InvariantKind.CLOSED_FORM_PURE,
        rho=rho,
        residual=residual,
        renormalization=renorm,
        boundary_mass=boundary_mass(rho),
        parameter=complex(q),
    )


def invariant_state_baby(
    psi: QubitState,
    trunc: Truncation,
    model: Optional[ModelParameters] = None,
) -> InvariantStateResult:
    """
    baby 模型的闭式不变态

    ρ_{n+k,n} = C·wᵏ·rⁿ，ρ_{n,n+k} 取共轭，
    C = (1−2λ)/(1−λ)，w = iζ̄√(λ/(1−λ))，r = λ/(1−λ)。
    k = 0 时与对角闭式一致。

    Args:
        psi: 任意 ζ
        trunc: 截断配置
        model: baby 模型（缺省时按 N 生成）

    Raises:
        PreconditionViolated: 模型不是 baby
    """
    if model is None:
        model = make_model(ModelKind.BABY, {}, n_max=trunc.dim)
    if model.kind != ModelKind.BABY:
        raise PreconditionViolated(f"invariant_state_baby要求baby模型，当前模型: {model.kind.value}")

    lam = psi.lam
    if lam >= 0.5:
        logger.debug(f"baby不变态不存在: λ={lam} ≥ ½")
        return InvariantStateResult(kind=InvariantKind.NONE, diagnosis="geometric ratio ≥ 1")

    dim = trunc.dim
    r = lam / (1.0 - lam)
    w = 1j * np.conj(psi.zeta) * math.sqrt(r)
    c = (1.0 - 2.0 * lam) / (1.0 - lam)
    rows, cols = np.indices((dim, dim))
    k = np.abs(rows - cols)
    n = np.minimum(rows, cols)
    lower = c * w ** k * r ** n
    rho = np.where(rows >= cols, lower, np.conj(lower)).astype(complex)
    rho, renorm = _normalized(rho)

    ch = kraus_set(model, psi, trunc)
    residual = verify_invariant(ch, rho)
    logger.debug(f"baby闭式不变态: λ={lam}, ζ={psi.zeta}, N={dim}, 残差={residual:.3e}")
    return InvariantStateResult(
        kind=InvariantKind.CLOSED_FORM_BABY,
        rho=rho,
        residual=residual,
        renormalization=renorm,
        boundary_mass=boundary_mass(rho),
        parameter=complex(w),
    )


def closed_form_invariant(ch: Channel) -> Optional[InvariantStateResult]:
    """
    按模型与态选择适用的闭式不变态

    baby 用 invariant_state_baby；ζ = 0 用对角解；齐次模型的纯态用纯不变态。
    没有适用闭式时返回 None。
    """
    model, psi, trunc = ch.model, ch.psi, ch.trunc
    if model.kind == ModelKind.BABY:
        return invariant_state_baby(psi, trunc, model)
    if psi.zeta == 0:
        return invariant_state_diagonal(model, psi, trunc)
    if model.is_homogeneous and 0.0 < psi.lam < 1.0 and classify_state(psi).pure:
        return invariant_pure_state_homogeneous(model, psi, trunc)
    return None


def solve_invariant_numeric(
    ch: Channel,
    tol: Optional[float] = None,
    max_iter: int = 20000,
) -> InvariantStateResult:
    """
    预对偶幂迭代求不变态

    从均匀对角态出发，每步 ρ ← T_*(ρ)/Tr T_*(ρ)。相邻迭代的迹距离 ≤ tol 视为收敛，
    收敛后报告不变性残差。预热 4N 轮后每 N 轮检查一次边界质量；
    收敛到质心位于上半区且仍在泄漏的准平稳态时同样判定为质量逃逸。

    Args:
        ch: 通道
        tol: 收敛容差，缺省取 settings.tolerance.invariant
        max_iter: 最大迭代次数

    Returns:
        kind = numeric；边界质量超过阈值时 kind = none（boundary mass），
        迹耗尽、收敛到上半区准平稳态或未收敛但每步迹泄漏超过 tol 时
        kind = none（escaping mass）

    Raises:
        PreconditionViolated: tol ≤ 0
        ConvergenceFailure: 达到 max_iter 仍未收敛且无逃逸质量
    """
    tol = settings.tolerance.invariant if tol is None else tol
    if tol <= 0:
        raise PreconditionViolated(f"tol必须为正数，当前值: {tol}")

    dim = ch.dim
    threshold = settings.tolerance.boundary_mass
    burn_in = BURN_IN_FACTOR * dim
    rho = np.eye(dim, dtype=complex) / dim
    step = float("inf")
    leak = 0.0

    for iteration in range(1, max_iter + 1):
        image = apply_schrodinger(ch, rho)
        trace = float(np.real(np.trace(image)))
        if not trace > MIN_TRACE:
            logger.debug(f"幂迭代第{iteration}轮迹降为 {trace:.3e}，质量已全部逃逸")
            return InvariantStateResult(
                kind=InvariantKind.NONE,
                diagnosis="escaping mass",
                boundary_mass=boundary_mass(rho),
                iterations=iteration,
            )
        leak = 1.0 - trace
        new_rho = hermitian_part(image / trace)
        step = trace_norm(new_rho - rho)
        rho = new_rho

        if iteration >= burn_in and iteration % dim == 0:
            mass = boundary_mass(rho)
            if mass > threshold:
                logger.debug(f"幂迭代第{iteration}轮边界质量 {mass:.3f} 超过阈值 {threshold}")
                return InvariantStateResult(
                    kind=InvariantKind.NONE,
                    diagnosis="boundary mass",
                    boundary_mass=mass,
                    iterations=iteration,
                )

        if step <= tol:
            mass = boundary_mass(rho)
            if mass > threshold:
                return InvariantStateResult(
                    kind=InvariantKind.NONE,
                    diagnosis="boundary mass",
                    boundary_mass=mass,
                    iterations=iteration,
                )
            centre = mass_centre(rho)
            if centre > 0.5 and leak > tol:
                logger.debug(f"幂迭代收敛到上半区的准平稳态: 质心 {centre:.3f}, 每步泄漏 {leak:.3e}")
                return InvariantStateResult(
                    kind=InvariantKind.NONE,
                    diagnosis="escaping mass",
                    boundary_mass=mass,
                    iterations=iteration,
                )
            residual = verify_invariant(ch, rho)
            logger.debug(f"幂迭代收敛: {iteration}轮, 残差={residual:.3e}, 泄漏={leak:.3e}")
            return InvariantStateResult(
                kind=InvariantKind.NUMERIC,
                rho=rho,
                residual=residual,
                renormalization=abs(leak),
                boundary_mass=mass,
                iterations=iteration,
            )

    if leak > tol:
        logger.warning(f"幂迭代未收敛且每步泄漏 {leak:.3e}，判定为质量逃逸")
        return InvariantStateResult(
            kind=InvariantKind.NONE,
            diagnosis="escaping mass",
            boundary_mass=boundary_mass(rho),
            iterations=max_iter,
        )
    raise ConvergenceFailure(max_iter, step)


def _check_fixed_point_family(ch: Channel) -> None:
    kind = ch.model.kind
    if kind not in (ModelKind.BABY, ModelKind.HOMOGENEOUS):
        raise PreconditionViolated(f"显式不动点只适用于baby或homogeneous模型，当前模型: {kind.value}")
    if ch.psi.lam <= 0.5:
        raise PreconditionViolated(f"显式不动点要求λ > ½，当前λ={ch.psi.lam}")
    if kind == ModelKind.HOMOGENEOUS and ch.psi.zeta != 0:
        raise PreconditionViolated("homogeneous模型的显式不动点要求ζ=0")


def _decay_operator(lam: float, dim: int) -> np.ndarray:
    """d = diag(1, ρ, ρ², ...)，ρ = (1−λ)/λ"""
    ratio = (1.0 - lam) / lam
    return np.diag(ratio ** np.arange(dim)).astype(complex)


def fixed_point_seed(ch: Channel) -> np.ndarray:
    """
    显式不动点族的对角种子 x

    baby: λ(1 − s*ds)；homogeneous: (λ/(1−λ) + (2λ−1)α/(1−λ))·1 − d，λ = 1 时取 1。

    Raises:
        PreconditionViolated: 模型或 λ 不满足条件
    """
    _check_fixed_point_family(ch)
    lam = ch.psi.lam
    dim = ch.dim
    s, _, _ = basis_operators(ch.model, dim)
    identity = np.eye(dim, dtype=complex)
    d = _decay_operator(lam, dim)

    if ch.model.kind == ModelKind.BABY:
        return lam * (identity - s.conj().T @ d @ s)
    if lam == 1.0:
        return identity
    alpha = ch.model.alpha_value
    scale = lam / (1.0 - lam) + (2.0 * lam - 1.0) * alpha / (1.0 - lam)
    return scale * identity - d


def explicit_fixed_points(ch: Channel, count: int) -> list[np.ndarray]:
    """
    λ > ½ 时的显式不动点 y_1..y_count

    homogeneous（ζ = 0）: y_n = sⁿx；
    baby（任意 ζ）: y_n = sⁿ⁻¹(λs(1 − s*ds) + ν(1 − d))，ζ = 0 时即 sⁿ·λ(1 − s*ds)。
    每个 y_n 在下标 ≤ N−2−n 的内部满足 T(y_n) = y_n。

    Raises:
        PreconditionViolated: λ ≤ ½、模型不是 baby/homogeneous、homogeneous 且 ζ ≠ 0、count < 1
    """
    if count < 1:
        raise PreconditionViolated(f"count必须不小于1，当前值: {count}")
    _check_fixed_point_family(ch)

    dim = ch.dim
    s, _, _ = basis_operators(ch.model, dim)
    if ch.model.kind == ModelKind.BABY:
        lam = ch.psi.lam
        identity = np.eye(dim, dtype=complex)
        d = _decay_operator(lam, dim)
        base = lam * s @ (identity - s.conj().T @ d @ s) + ch.psi.nu * (identity - d)
        power = 0
    else:
        base = fixed_point_seed(ch)
        power = 1

    points = []
    current = np.linalg.matrix_power(s, power) @ base
    for _ in range(count):
        points.append(current)
        current = s @ current
    logger.debug(f"显式不动点族: kind={ch.model.kind.value}, λ={ch.psi.lam}, count={count}")
    return points


def fixed_point_residual(ch: Channel, y: np.ndarray, shift_power: int = 1) -> float:
    """‖T(y) − y‖_max，限制在下标 ≤ N−2−shift_power 的内部"""
    last = max(ch.dim - 2 - shift_power, 0)
    return max_entry(corner(apply_heisenberg(ch, y) - y, last))


__all__ = [
    "verify_invariant",
    "trace_distance",
    "boundary_mass",
    "mass_centre",
    "invariant_state_diagonal",
    "pure_state_parameter",
    "invariant_pure_state_homogeneous",
    "invariant_state_baby",
    "closed_form_invariant",
    "solve_invariant_numeric",
    "fixed_point_seed",
    "explicit_fixed_points",
    "fixed_point_residual",
]
