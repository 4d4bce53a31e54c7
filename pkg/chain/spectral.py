"""
遍历性分析

功能：
- superoperator_matrix: 向量化超算子 M（N² × N²，系数路径构造）
- peripheral_spectrum: 外围谱、不动空间维数、谱隙
- subharmonic_probe: 次调和投影的结构化搜索（半判定）
- extremality_report: UCP 端点判定与显式分解
- recursion_residuals: 系数递推方程残差与 2×2 转移矩阵
- theorem_verdicts: 定理给出的预期结论（附出处）
- example_psiplus_mixing_check: β_n = (½)ⁿ、ψ₊ 的弱混合例子
"""

import math
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy import linalg as la

from chain.channel import apply_heisenberg, kraus_set, matrix_unit_image
from chain.model import classify_state, is_psi_minus, is_psi_plus, make_model, qubit_state
from chain.operators import basis_operators, complement, interval_projection
from chain.stationary import explicit_fixed_points
from config.settings import settings
from core.exceptions import DimensionGuard, EigensolveFailure, PreconditionViolated
from core.logger import logger
from models.parameters import ModelKind, ModelParameters, QubitState, Truncation
from models.results import (
    Channel,
    CitedVerdict,
    Decomposition,
    ErgodicReport,
    ExtremalityReport,
    ExtremalVerdict,
    PeripheralEigenvalue,
    PsiPlusMixingReport,
    RecursionReport,
    SpectrumSummary,
    SubharmonicProbe,
    SubharmonicVerdict,
    TheoremVerdicts,
    Verdict,
)
from utils.linalg import corner, hermitian_part, max_entry, numerical_rank, psd_margin

# 不动元线性无关判定的相对剩余阈值下限
FIXED_SPAN_TOL = 1e-2
# ψ₊ 例子允许的最大截断维数
PSIPLUS_MAX_N = 32
# s*a²s 判定容差
MULTIPLE_TOL = 1e-12
# 显式不动点探针个数
PROBE_COUNT = 5

CITATIONS = {
    "irreducible_faithful": "Irreducibility theorem: 'The transition operator T_ψ is irreducible' (faithful ψ)",
    "irreducible_poles": "ψ± example: 'T_{ψ₊}(p₀^⊥) = 1 − α₁² p₀ ≥ p₀^⊥' and 'T_{ψ₋}(p₀) = β₁² p₁ + p₀ ≥ p₀'",
    "irreducible_pure": "Homogeneous pure-state proposition: 'admits a pure invariant normal state' (support is subharmonic)",
    "irreducible_unknown": "Summary: 'we do not have any results concerning irreducibility'",
    "inv_psi_minus": "ψ± example: 'the vector state ... is invariant'",
    "inv_baby": "Baby maser invariant-state theorem: 'In this case φ is given by' (iff λ < ½)",
    "inv_diagonal": "Diagonal invariant-state proposition: 'if and only if λ < ½'",
    "inv_pure": "Homogeneous pure-state proposition: 'admits a pure invariant normal state if and only if λ < ½(1−α)'",
    "inv_unknown": "Summary: 'we do not have general results about invariant normal states'",
    "mix_psi_minus": "ψ± example: 'T_{ψ₋} is weakly mixing ... for any choice of model parameters'",
    "mix_baby": "Baby maser mixing theorem: 'weakly mixing ... if and only if λ ≤ ½'",
    "mix_homogeneous": "Homogeneous mixing proposition: 'weakly mixing (hence ergodic) if and only if λ ≤ ½'",
    "mix_diagonal": "Weak mixing theorem: 'T_ψ is weakly mixing' (ζ = 0, λ < ½)",
    "mix_unknown": "ψ± example: 'either case can be true'",
}


def superoperator_matrix(ch: Channel) -> np.ndarray:
    """
    向量化超算子 M

    展平约定 idx(m, n) = m·N + n，第 idx(c, d) 列为 T(e_{c,d}) 的系数，
    即 vec(T(x)) = M·vec(x)，vec 为行优先展平。

    Raises:
        DimensionGuard: N > settings.max_n
    """
    dim = ch.dim
    if dim > settings.max_n:
        raise DimensionGuard(dim, settings.max_n)

    m = np.zeros((dim * dim, dim * dim), dtype=complex)
    for c in range(dim):
        for d in range(dim):
            column = c * dim + d
            for row, col, coeff in matrix_unit_image(ch, c, d):
                m[row * dim + col, column] += coeff
    logger.debug(f"超算子矩阵构造完成: N={dim}, 非零元={np.count_nonzero(m)}")
    return m


def _interior_residual(ch: Channel, x: np.ndarray, mu: complex) -> float:
    """‖T(x) − μx‖_max / ‖x‖_max，限制在内部区域"""
    scale = max_entry(x)
    if scale == 0.0:
        return 0.0
    x = x / scale
    return max_entry(corner(apply_heisenberg(ch, x) - mu * x, ch.trunc.interior))


def inner_window(dim: int) -> int:
    """内窗口的最后一个下标 (N−1)//2"""
    return (dim - 1) // 2


def span_tolerance(tol: float) -> float:
    """
    不动元线性无关判定的相对剩余阈值

    λ < ½ 时截断把 𝟙 扰动成 |μ−1| ≈ rᴺ 的特征向量，它在内窗口上偏离 𝟙 约 √|μ−1| 量级。
    """
    return max(FIXED_SPAN_TOL, 10.0 * math.sqrt(tol))


def _independent_fixed(candidates: Sequence[np.ndarray], dim: int, span_tol: float) -> list[np.ndarray]:
    """
    内窗口上的逐个 Gram–Schmidt

    候选归一后减去已接受方向的分量，剩余 > span_tol 时接受。第一个候选应为 𝟙。
    """
    window = inner_window(dim)
    basis: list[np.ndarray] = []
    kept: list[np.ndarray] = []
    for x in candidates:
        part = corner(x, window).ravel()
        norm = np.linalg.norm(part)
        if norm == 0.0:
            continue
        rest = part / norm
        for q in basis:
            rest = rest - np.vdot(q, rest) * q
        remainder = float(np.linalg.norm(rest))
        if remainder > span_tol:
            basis.append(rest / remainder)
            kept.append(x)
    return kept


def _spectral_data(
    ch: Channel,
    tol: Optional[float] = None,
    probes: Iterable[np.ndarray] = (),
) -> tuple[SpectrumSummary, list[np.ndarray], list[np.ndarray]]:
    """特征分解并筛选不动元，返回 (摘要, 已验证的不动元, 与 𝟙 线性无关的不动元)"""
    tol = settings.tolerance.peripheral if tol is None else tol
    dim = ch.dim
    m = superoperator_matrix(ch)
    try:
        values, vectors = la.eig(m)
    except la.LinAlgError as e:
        raise EigensolveFailure(f"超算子特征分解失败: N={dim}, {e}") from e
    if not np.all(np.isfinite(values)):
        raise EigensolveFailure(f"特征值包含非有限数: N={dim}")

    identity = np.eye(dim, dtype=complex)
    peripheral: list[PeripheralEigenvalue] = []
    fixed: list[np.ndarray] = []
    has_one = False
    inner_moduli = []

    for k, mu in enumerate(values):
        modulus = abs(mu)
        if modulus < 1.0 - tol:
            inner_moduli.append(modulus)
            continue
        x = vectors[:, k].reshape(dim, dim)
        residual = _interior_residual(ch, x, mu)
        peripheral.append(PeripheralEigenvalue(value=complex(mu), residual=residual))
        if abs(mu - 1.0) <= tol:
            has_one = True
            if _interior_residual(ch, x, 1.0) <= 10 * tol:
                fixed.append(x)

    if not has_one:
        peripheral.append(PeripheralEigenvalue(value=1.0 + 0j, residual=_interior_residual(ch, identity, 1.0)))
    peripheral.sort(key=lambda p: (-abs(p.value), np.angle(p.value)))

    verified_probes = []
    for y in probes:
        if _interior_residual(ch, y, 1.0) <= 10 * tol:
            verified_probes.append(y)
        else:
            logger.warning(f"探针未通过不动点检查，已忽略: N={dim}")

    verified = fixed + verified_probes
    candidates = [identity] + verified
    independent = _independent_fixed(candidates, dim, span_tolerance(tol))
    fixed_dim = max(1, len(independent))
    gap = 1.0 - max(inner_moduli) if inner_moduli else 1.0

    summary = SpectrumSummary(
        peripheral=tuple(peripheral),
        fixed_dim=fixed_dim,
        gap=float(gap),
        dim=dim,
        candidates=len(candidates),
    )
    logger.debug(f"外围谱: N={dim}, 外围特征值{len(peripheral)}个, fixed_dim={fixed_dim}, gap={gap:.3e}")
    return summary, verified, independent[1:]


def default_probes(ch: Channel) -> list[np.ndarray]:
    """baby（任意 ζ）与 homogeneous（ζ = 0）在 λ > ½ 时的显式不动点探针"""
    kind = ch.model.kind
    if ch.psi.lam <= 0.5:
        return []
    if kind == ModelKind.BABY or (kind == ModelKind.HOMOGENEOUS and ch.psi.zeta == 0):
        return explicit_fixed_points(ch, PROBE_COUNT)
    return []


def peripheral_spectrum(
    ch: Channel,
    tol: Optional[float] = None,
    probes: Iterable[np.ndarray] = (),
) -> SpectrumSummary:
    """
    外围谱与不动空间维数

    fixed_dim 为单位元、通过内部残差检查（≤ 10·tol）的 |μ−1| ≤ tol 特征向量
    以及给定探针在内窗口上张成的维数，是截断下的下界。
    与已接受方向的相对剩余不超过 span_tolerance(tol) 的候选（如被截断扰动的 𝟙）不计入。

    Args:
        ch: 通道
        tol: 外围容差，缺省取 settings.tolerance.peripheral
        probes: 额外的候选不动元（如显式不动点）

    Raises:
        DimensionGuard: N > settings.max_n
        EigensolveFailure: 特征分解失败
    """
    summary, _, _ = _spectral_data(ch, tol, probes)
    return summary


def fixed_space(
    ch: Channel,
    tol: Optional[float] = None,
    probes: Iterable[np.ndarray] = (),
) -> tuple[SpectrumSummary, list[np.ndarray]]:
    """peripheral_spectrum 的摘要，以及全部已验证不动元（近 1 特征向量与通过检查的探针）"""
    summary, verified, _ = _spectral_data(ch, tol, probes)
    return summary, verified


def _is_nontrivial(p: np.ndarray, last: int) -> bool:
    block = corner(p, last)
    return max_entry(block) > 0.0 and max_entry(block - np.eye(last + 1)) > 0.0


def _kraus_residual(ch: Channel, p: np.ndarray) -> float:
    """max_i ‖t_i p − p t_i p‖_max（内部）"""
    last = ch.trunc.interior
    return max(
        (max_entry(corner(term.op @ p - p @ term.op @ p, last)) for term in ch.kraus),
        default=0.0,
    )


def _projection_candidates(
    dim: int,
    fixed_elements: Sequence[np.ndarray],
) -> Iterable[tuple[str, np.ndarray]]:
    for k in range(dim - 2):
        p = interval_projection(0, k, dim)
        yield f"p[0,{k}]", p
        yield f"p[0,{k}]^⊥", complement(p)
    for index, x in enumerate(fixed_elements):
        _, vectors = la.eigh(hermitian_part(x))
        for j in range(vectors.shape[1]):
            v = vectors[:, j : j + 1]
            yield f"spectral[{index},{j}]", v @ v.conj().T


def subharmonic_probe(
    ch: Channel,
    tol: Optional[float] = None,
    fixed_elements: Sequence[np.ndarray] = (),
) -> SubharmonicProbe:
    """
    次调和投影探测：T(p) − p 在内部（下标 ≤ N−2）半正定

    候选族依次为 p₍₀,k₎、p₍₀,k₎^⊥（0 ≤ k ≤ N−3）以及不动元的一维谱投影。
    未找到不等于证明不可约。

    Args:
        ch: 通道
        tol: 半正定裕度容差，缺省取 settings.tolerance.subharmonic
        fixed_elements: 非单位不动元
    """
    tol = settings.tolerance.subharmonic if tol is None else tol
    last = ch.trunc.interior
    tested = 0
    for label, p in _projection_candidates(ch.dim, fixed_elements):
        if not _is_nontrivial(p, last):
            continue
        tested += 1
        margin = psd_margin(corner(apply_heisenberg(ch, p) - p, last))
        if margin >= -tol:
            logger.debug(f"找到次调和投影 {label}，裕度 {margin:.3e}")
            return SubharmonicProbe(
                verdict=SubharmonicVerdict.SUBHARMONIC_FOUND,
                projection=p,
                label=label,
                margin=margin,
                kraus_residual=_kraus_residual(ch, p),
                candidates_tested=tested,
            )
    return SubharmonicProbe(verdict=SubharmonicVerdict.NO_SUBHARMONIC_FOUND, candidates_tested=tested)


def kraus_rank(ch: Channel) -> int:
    """Kraus 族本身的数值秩（线性无关的 t_i 个数）"""
    if not ch.kraus:
        return 0
    stacked = np.array([math.sqrt(term.weight) * term.op.ravel() for term in ch.kraus])
    return numerical_rank(stacked, rel_tol=settings.tolerance.rank_rel, scale=ch.dim)


def _minimal_family(ch: Channel) -> list[np.ndarray]:
    """同一映射的极小 Kraus 族（对堆叠后的 √w·t_i 做 SVD）"""
    dim = ch.dim
    active = [term for term in ch.kraus if max_entry(term.op) > 0.0]
    if not active:
        return []
    stacked = np.array([math.sqrt(term.weight) * term.op.ravel() for term in active])
    _, sv, vh = la.svd(stacked, full_matrices=False)
    rank = numerical_rank(stacked, rel_tol=settings.tolerance.rank_rel, scale=dim)
    return [(sv[i] * vh[i]).reshape(dim, dim) for i in range(rank)]


def _product_rank(ops: Sequence[np.ndarray], last: int, dim: int) -> int:
    """{k_i* k_j} 在角块 p₍₀,last₎ 上的数值秩"""
    if not ops:
        return 0
    rows = [corner(a.conj().T @ b, last).ravel() for a in ops for b in ops]
    return numerical_rank(np.array(rows), rel_tol=settings.tolerance.rank_rel, scale=dim)


def _apply_family(ops: Sequence[np.ndarray], x: np.ndarray) -> np.ndarray:
    return sum(k.conj().T @ x @ k for k in ops)


def _psiplus_split(model: ModelParameters) -> Optional[tuple[str, float]]:
    """ψ₊ 非端点判据：s*a²s = μ·1 返回 ("identity", μ)，= μ·p₀ 返回 ("p0", μ)"""
    tail = model.alpha[1:] ** 2
    mu = float(tail[0])
    if mu <= MULTIPLE_TOL:
        return None
    if np.all(np.abs(tail - mu) <= MULTIPLE_TOL):
        return "identity", mu
    if np.all(np.abs(tail[1:]) <= MULTIPLE_TOL):
        return "p0", mu
    return None


def _decomposition(
    ch: Channel,
    weights: tuple[float, ...],
    components: tuple[tuple[np.ndarray, ...], ...],
) -> Decomposition:
    dim = ch.dim
    last = dim - 2
    identity = np.eye(dim, dtype=complex)
    unital = max(max_entry(corner(_apply_family(ops, identity) - identity, last)) for ops in components)

    rng = np.random.default_rng(settings.default_seed)
    tests = [identity, interval_projection(0, 0, dim)]
    block = rng.standard_normal((dim - 1, dim - 1)) + 1j * rng.standard_normal((dim - 1, dim - 1))
    random_x = np.zeros((dim, dim), dtype=complex)
    random_x[: dim - 1, : dim - 1] = block
    tests.append(random_x)
    recombination = 0.0
    for x in tests:
        mixed = sum(w * _apply_family(ops, x) for w, ops in zip(weights, components))
        recombination = max(recombination, max_entry(corner(mixed - apply_heisenberg(ch, x), last)))

    p0 = interval_projection(0, 0, dim)
    first = _apply_family(components[0], p0)
    second = _apply_family(components[1], p0)
    return Decomposition(
        weights=weights,
        components=components,
        unital_residual=unital,
        recombination_residual=recombination,
        witness_01=(complex(first[0, 1]), complex(second[0, 1])),
        witness_max_diff=max_entry(corner(first - second, last)),
    )


def extremality_report(ch: Channel) -> ExtremalityReport:
    """
    UCP 端点判定

    数值判据：对极小 Kraus 族 {k_i}（r 个），{k_i* k_j} 在内部角块上线性无关（秩 = r²）。
    定理判据：ψ ≠ ψ₊ 时端点当且仅当 ψ 为纯态；ψ₊ 时非端点当且仅当 s*a²s 为 1 或 p₀ 的非零倍数。
    两者不一致时结论为 undetermined。非端点时给出显式凸分解。
    """
    dim = ch.dim
    last = dim - 2
    psi = ch.psi
    active = sum(1 for term in ch.kraus if max_entry(term.op) > 0.0)
    minimal = _minimal_family(ch)
    rank = len(minimal)
    gram_rank = _product_rank(minimal, last, dim)
    numeric_extremal = gram_rank == rank * rank

    decomposition: Optional[Decomposition] = None
    if is_psi_plus(psi):
        split = _psiplus_split(ch.model)
        theorem_extremal = split is None
        if split is not None:
            s, a, b = basis_operators(ch.model, dim)
            sh = s.conj().T
            shape, mu = split
            if shape == "identity":
                decomposition = _decomposition(
                    ch,
                    (mu, 1.0 - mu),
                    ((sh @ a @ s / math.sqrt(mu),), (b @ s / math.sqrt(1.0 - mu),)),
                )
            else:
                p0 = interval_projection(0, 0, dim)
                decomposition = _decomposition(
                    ch,
                    (0.5, 0.5),
                    ((math.sqrt(mu) * p0 + b @ s,), (math.sqrt(mu) * p0 - b @ s,)),
                )
    else:
        theorem_extremal = classify_state(psi).pure
        if not theorem_extremal:
            c1 = (1.0 - psi.lam) * (1.0 - psi.abs_zeta ** 2)
            c2 = 1.0 - c1
            ops = {term.label: term.op for term in ch.kraus}
            scale = math.sqrt(psi.lam / c2)
            decomposition = _decomposition(
                ch,
                (c1, c2),
                ((ops["t3"], ops["t4"]), (scale * ops["t1"], scale * ops["t2"])),
            )

    if theorem_extremal == numeric_extremal:
        verdict = ExtremalVerdict.EXTREMAL if theorem_extremal else ExtremalVerdict.NOT_EXTREMAL
    else:
        logger.warning(
            f"端点判定不一致: 定理={theorem_extremal}, 数值={numeric_extremal} "
            f"(gram_rank={gram_rank}, kraus_rank={rank})"
        )
        verdict = ExtremalVerdict.UNDETERMINED

    return ExtremalityReport(
        verdict=verdict,
        theorem_extremal=theorem_extremal,
        numeric_extremal=numeric_extremal,
        gram_rank=gram_rank,
        active_terms=active,
        kraus_rank=rank,
        decomposition=decomposition,
    )


def transfer_matrix(model: ModelParameters, psi: QubitState, mu: complex) -> np.ndarray:
    """A = [[(μ − α²)/(λβ²), −(1−λ)/λ], [1, 0]]"""
    alpha, beta = model.alpha_value, model.beta_value
    lam = psi.lam
    return np.array(
        [[(mu - alpha ** 2) / (lam * beta ** 2), -(1.0 - lam) / lam], [1.0, 0.0]],
        dtype=complex,
    )


def _baby_image(x: np.ndarray, psi: QubitState) -> np.ndarray:
    """T(x) = (1−λ)(sxs* + p₀xp₀) + λs*xs − ν s*xp₀ − ν̄ p₀xs，在下标 ≤ N−2 上逐元素给出"""
    lam, nu = psi.lam, psi.nu
    last = x.shape[0] - 2
    out = np.zeros((last + 1, last + 1), dtype=complex)
    out += lam * x[1 : last + 2, 1 : last + 2]
    out[1:, 1:] += (1.0 - lam) * x[:last, :last]
    out[0, 0] += (1.0 - lam) * x[0, 0]
    out[:, 0] -= nu * x[1 : last + 2, 0]
    out[0, :] -= np.conj(nu) * x[0, 1 : last + 2]
    return out


def _homogeneous_image(x: np.ndarray, model: ModelParameters, psi: QubitState) -> np.ndarray:
    """ζ = 0：T(x) = λα²x + λβ²s*xs + (1−λ)β²sxs* + (1−λ)axa，在下标 ≤ N−2 上逐元素给出"""
    alpha, beta = model.alpha_value, model.beta_value
    lam = psi.lam
    last = x.shape[0] - 2
    diag_a = np.full(last + 1, alpha)
    diag_a[0] = 1.0
    out = (lam * alpha ** 2 + (1.0 - lam) * np.outer(diag_a, diag_a)) * x[: last + 1, : last + 1]
    out += lam * beta ** 2 * x[1 : last + 2, 1 : last + 2]
    out[1:, 1:] += (1.0 - lam) * beta ** 2 * x[:last, :last]
    return out


def recursion_residuals(ch: Channel, x: np.ndarray, mu: complex) -> RecursionReport:
    """
    本征方程 T(x) = μx 的系数递推残差

    baby（任意 ζ）与 homogeneous（ζ = 0）分别按各自的逐元素方程求值，
    同时给出转移矩阵 A 及其特征值 ω₁, ω₂（ω₁ω₂ = det A，ω₁ + ω₂ = Tr A）。

    Raises:
        PreconditionViolated: 模型类型不符、homogeneous 且 ζ ≠ 0、λ = 0 或 |μ| ≠ 1
    """
    model, psi = ch.model, ch.psi
    if model.kind not in (ModelKind.BABY, ModelKind.HOMOGENEOUS):
        raise PreconditionViolated(f"递推方程只适用于baby或homogeneous模型，当前模型: {model.kind.value}")
    if model.kind == ModelKind.HOMOGENEOUS and psi.zeta != 0:
        raise PreconditionViolated("homogeneous模型的递推方程要求ζ=0")
    if psi.lam == 0.0:
        raise PreconditionViolated("递推方程要求λ > 0")
    mu = complex(mu)
    if abs(abs(mu) - 1.0) > settings.tolerance.peripheral:
        raise PreconditionViolated(f"递推方程要求|μ|=1，当前|μ|={abs(mu)}")

    x = np.asarray(x, dtype=complex)
    if model.kind == ModelKind.BABY:
        image = _baby_image(x, psi)
    else:
        image = _homogeneous_image(x, model, psi)
    last = x.shape[0] - 2
    residual = max_entry(image - mu * x[: last + 1, : last + 1])

    a = transfer_matrix(model, psi, mu)
    omegas = la.eigvals(a)
    return RecursionReport(
        residual=residual,
        transfer=a,
        omegas=(complex(omegas[0]), complex(omegas[1])),
        det=complex(np.linalg.det(a)),
        trace=complex(np.trace(a)),
    )


def kraus_commutation_residual(
    ch: Channel,
    x: np.ndarray,
    mu: complex = 1.0,
    last: Optional[int] = None,
) -> float:
    """max_i ‖x t_i − μ t_i x‖_max（角块 ≤ last，缺省为内部），本征元判据 x t_i = μ t_i x"""
    last = ch.trunc.interior if last is None else last
    return max(
        (max_entry(corner(x @ term.op - mu * term.op @ x, last)) for term in ch.kraus),
        default=0.0,
    )


def fixed_commutation_residuals(ch: Channel, fixed: Sequence[np.ndarray]) -> tuple[float, ...]:
    """
    已验证不动元的 Kraus 交换残差

    每个不动元按最大元归一，在内窗口上计算。存在忠实不变态（λ < ½）时应不超过
    span_tolerance；λ > ½ 的显式不动点不与 t_i 交换。
    """
    window = inner_window(ch.dim)
    residuals = []
    for x in fixed:
        scale = max_entry(x)
        if scale == 0.0:
            continue
        residuals.append(kraus_commutation_residual(ch, x / scale, last=window))
    return tuple(residuals)


def _cite(verdict: Verdict, key: str) -> CitedVerdict:
    return CitedVerdict(verdict=verdict, citation=CITATIONS[key])


def _yes_no(condition: bool) -> Verdict:
    return Verdict.YES if condition else Verdict.NO


def theorem_verdicts(model: ModelParameters, psi: QubitState) -> TheoremVerdicts:
    """
    定理给出的预期结论（irreducible / invariant_state / weak_mixing），每项附出处

    齐次模型（含 baby）且 ψ 为纯态、0 < λ < 1 时额外给出 pure_invariant_state。
    """
    flags = classify_state(psi)
    lam = psi.lam
    kind = model.kind
    alpha = model.alpha_value
    homogeneous_pure = model.is_homogeneous and flags.pure and 0.0 < lam < 1.0
    pure_threshold = 0.5 * (1.0 - alpha) if alpha is not None else None

    if flags.faithful:
        irreducible = _cite(Verdict.YES, "irreducible_faithful")
    elif is_psi_plus(psi) or is_psi_minus(psi):
        irreducible = _cite(Verdict.NO, "irreducible_poles")
    elif homogeneous_pure and lam < pure_threshold:
        irreducible = _cite(Verdict.NO, "irreducible_pure")
    else:
        irreducible = _cite(Verdict.UNKNOWN, "irreducible_unknown")

    if is_psi_minus(psi):
        invariant = _cite(Verdict.YES, "inv_psi_minus")
    elif kind == ModelKind.BABY:
        invariant = _cite(_yes_no(lam < 0.5), "inv_baby")
    elif flags.diagonal:
        invariant = _cite(_yes_no(lam < 0.5), "inv_diagonal")
    elif homogeneous_pure and lam < pure_threshold:
        invariant = _cite(Verdict.YES, "inv_pure")
    else:
        invariant = _cite(Verdict.UNKNOWN, "inv_unknown")

    if is_psi_minus(psi):
        mixing = _cite(Verdict.YES, "mix_psi_minus")
    elif kind == ModelKind.BABY:
        mixing = _cite(_yes_no(lam <= 0.5), "mix_baby")
    elif kind == ModelKind.HOMOGENEOUS:
        if flags.diagonal:
            mixing = _cite(_yes_no(lam <= 0.5), "mix_homogeneous")
        else:
            mixing = _cite(Verdict.UNKNOWN, "mix_unknown")
    elif flags.diagonal and lam < 0.5:
        mixing = _cite(Verdict.YES, "mix_diagonal")
    else:
        mixing = _cite(Verdict.UNKNOWN, "mix_unknown")

    pure_invariant = None
    if homogeneous_pure:
        pure_invariant = _cite(_yes_no(lam < pure_threshold), "inv_pure")

    return TheoremVerdicts(
        irreducible=irreducible,
        invariant_state=invariant,
        weak_mixing=mixing,
        pure_invariant_state=pure_invariant,
    )


def growth_factor(m: int, k: int, mu: complex = 1.0) -> float:
    """|2^{2m+k+2}(μ − √((1−4^{−m−1})(1−4^{−m−k−1})))|"""
    root = math.sqrt((1.0 - 4.0 ** (-m - 1)) * (1.0 - 4.0 ** (-m - k - 1)))
    return abs(2.0 ** (2 * m + k + 2) * (complex(mu) - root))


def psiplus_example_model(n_max: int) -> ModelParameters:
    """β_n = (½)ⁿ，α_n = √(1 − β_n²)（n ≥ 1）"""
    n = np.arange(n_max + 1)
    beta = 0.5 ** n
    alpha = np.sqrt(1.0 - beta ** 2)
    return make_model(ModelKind.GENERAL, {"alphas": alpha, "betas": beta}, n_max=n_max)


def example_psiplus_mixing_check(trunc: Union[Truncation, int]) -> PsiPlusMixingReport:
    """
    β_n = (½)ⁿ 时 T_{ψ₊} 弱混合的数值检查

    特征分解在最大的 N' ≤ N（满足 β_{N'}² ≥ 10·tol）上进行并记录 N'；
    同时直接检查递推增长因子 ≥ 2^{k−1} + 2^{−k−1} ≥ 5/4（k = 1..5，m = 0..10）。

    Raises:
        PreconditionViolated: N > 32
    """
    requested = trunc.dim if isinstance(trunc, Truncation) else int(trunc)
    if requested > PSIPLUS_MAX_N:
        raise PreconditionViolated(f"ψ₊例子要求N ≤ {PSIPLUS_MAX_N}，当前N={requested}")

    tol = settings.tolerance.peripheral
    resolved = requested
    while resolved > 4 and 0.25 ** resolved < 10 * tol:
        resolved -= 1
    if resolved != requested:
        logger.info(f"ψ₊例子: β_N过小，截断维数由{requested}调整为{resolved}")

    model = psiplus_example_model(resolved)
    ch = kraus_set(model, qubit_state(1.0), Truncation(dim=resolved))
    summary = peripheral_spectrum(ch, tol)

    factors: dict[str, float] = {}
    bound_ok = True
    for k in range(1, 6):
        bound = 2.0 ** (k - 1) + 2.0 ** (-k - 1)
        values = [growth_factor(m, k) for m in range(11)]
        factors[f"k={k}"] = min(values)
        bound_ok = bound_ok and min(values) >= bound * (1.0 - 1e-9)
    diagonal_factor = growth_factor(0, 0)

    return PsiPlusMixingReport(
        requested_dim=requested,
        resolved_dim=resolved,
        fixed_dim=summary.fixed_dim,
        peripheral=summary.peripheral,
        min_growth_factor=min(factors.values()),
        growth_bound_ok=bound_ok and min(factors.values()) >= 1.25,
        diagonal_factor_at_one=diagonal_factor,
        growth_factors=factors,
    )


def ergodic_report(ch: Channel, probes: Optional[Iterable[np.ndarray]] = None) -> ErgodicReport:
    """
    完整遍历性报告：外围谱、不动空间维数、次调和探测、预期结论、端点判定

    probes 缺省时对 baby/homogeneous 且 λ > ½ 自动加入显式不动点。
    """
    if probes is None:
        probes = default_probes(ch)
    summary, verified, fixed_elements = _spectral_data(ch, probes=probes)
    probe = subharmonic_probe(ch, fixed_elements=fixed_elements)
    return ErgodicReport(
        fixed_dim=summary.fixed_dim,
        peripheral=summary.peripheral,
        gap=summary.gap,
        irreducible_probe=probe,
        expected=theorem_verdicts(ch.model, ch.psi),
        extremality=extremality_report(ch),
        commutation_residuals=fixed_commutation_residuals(ch, verified),
    )


__all__ = [
    "superoperator_matrix",
    "default_probes",
    "peripheral_spectrum",
    "fixed_space",
    "subharmonic_probe",
    "kraus_rank",
    "extremality_report",
    "transfer_matrix",
    "recursion_residuals",
    "kraus_commutation_residual",
    "fixed_commutation_residuals",
    "inner_window",
    "span_tolerance",
    "theorem_verdicts",
    "growth_factor",
    "psiplus_example_model",
    "example_psiplus_mixing_check",
    "ergodic_report",
]
