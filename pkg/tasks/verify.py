"""
性质验证套件

对配置给定的通道逐项检查结构性质，每项返回 (名称, 数值, 阈值, 是否通过)。
任一性质失败时 CLI 以退出码 3 结束。
"""

import cmath
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from chain.channel import (
    ApplyMode,
    apply_heisenberg,
    apply_time_reversed,
    choi_matrix,
    duality_gap,
    kadison_schwarz_margin,
    kraus_set,
    locality_sandwich_check,
    random_interior_operator,
    random_interior_state,
    rotation_covariance_residual,
)
from chain.classical import classical_transition_matrix
from chain.model import classify_state, qubit_state
from chain.operators import conditional_expectation_diag, dilation_unitary, interval_projection
from chain.spectral import (
    default_probes,
    example_psiplus_mixing_check,
    extremality_report,
    fixed_commutation_residuals,
    fixed_space,
    span_tolerance,
    theorem_verdicts,
)
from chain.stationary import closed_form_invariant, fixed_point_residual
from config.settings import settings
from core.logger import logger
from models.results import Channel, ExtremalVerdict, SpectrumSummary, Verdict
from utils.linalg import corner, max_entry, min_eigenvalue

# 随机输入个数
RANDOM_INPUTS = 10
# 旋转协变检查使用的 θ
ROTATIONS = (1j, cmath.exp(1j * cmath.pi / 5), -1.0)

# (外围谱摘要, 已验证不动元)，由无参函数按需给出以共用一次特征分解
FixedSpace = tuple[SpectrumSummary, list[np.ndarray]]
SpaceSource = Callable[[], FixedSpace]


@dataclass(frozen=True)
class PropertyResult:
    """单项性质检查结果"""

    name: str
    value: float
    threshold: float
    passed: bool
    detail: str = ""


def _at_most(name: str, value: float, threshold: float, detail: str = "") -> PropertyResult:
    return PropertyResult(name=name, value=float(value), threshold=threshold, passed=value <= threshold, detail=detail)


def _at_least(name: str, value: float, threshold: float, detail: str = "") -> PropertyResult:
    return PropertyResult(name=name, value=float(value), threshold=threshold, passed=value >= threshold, detail=detail)


def check_normalization(ch: Channel) -> PropertyResult:
    deviation = np.max(np.abs(ch.model.alpha ** 2 + ch.model.beta ** 2 - 1.0))
    return _at_most("model_normalization", deviation, settings.tolerance.normalization)


def check_dilation_unitarity(ch: Channel) -> PropertyResult:
    """u*u = 1，排除涉及下标 N−1 的行列"""
    dim = ch.dim
    u = dilation_unitary(ch.model, dim)
    defect = u.conj().T @ u - np.eye(2 * dim)
    keep = [i for i in range(2 * dim) if i % dim != dim - 1]
    return _at_most("dilation_unitarity", max_entry(defect[np.ix_(keep, keep)]), settings.tolerance.exact)


def check_three_paths(ch: Channel, rng: np.random.Generator) -> PropertyResult:
    worst = 0.0
    for _ in range(RANDOM_INPUTS):
        x = random_interior_operator(rng, ch.dim)
        kraus = apply_heisenberg(ch, x, ApplyMode.KRAUS)
        dilation = apply_heisenberg(ch, x, ApplyMode.DILATION)
        coefficient = apply_heisenberg(ch, x, ApplyMode.COEFFICIENT)
        worst = max(worst, max_entry(kraus - dilation), max_entry(kraus - coefficient))
    return _at_most("three_path_equality", worst, settings.tolerance.exact)


def check_unitality(ch: Channel) -> PropertyResult:
    identity = np.eye(ch.dim, dtype=complex)
    image = apply_heisenberg(ch, identity)
    last = ch.dim - 2
    return _at_most("interior_unitality", max_entry(corner(image - identity, last)), settings.tolerance.exact)


def check_locality_sandwich(ch: Channel) -> PropertyResult:
    worst = 0.0
    for m in range(1, ch.dim - 2):
        for n in range(m, ch.dim - 2):
            result = locality_sandwich_check(ch, m, n)
            worst = min(worst, result.lower_margin, result.upper_margin)
    return _at_least("locality_sandwich", worst, -settings.tolerance.psd)


def check_duality(ch: Channel, rng: np.random.Generator) -> PropertyResult:
    worst = 0.0
    for _ in range(RANDOM_INPUTS):
        rho = random_interior_state(rng, ch.dim)
        x = random_interior_operator(rng, ch.dim)
        worst = max(worst, duality_gap(ch, rho, x) / max(1.0, max_entry(x)))
    return _at_most("trace_duality", worst, settings.tolerance.exact * ch.dim)


def check_complete_positivity(ch: Channel) -> PropertyResult:
    dim = min(ch.dim, 8)
    small = ch if dim == ch.dim else kraus_set(ch.model, ch.psi, ch.trunc.model_copy(update={"dim": dim}))
    choi = choi_matrix(small)
    return _at_least("choi_positivity", min_eigenvalue(choi), -settings.tolerance.psd, f"N={dim}")


def check_kadison_schwarz(ch: Channel, rng: np.random.Generator) -> PropertyResult:
    """随机 x 支撑在 p₍₀,N−3₎ 上"""
    worst = 0.0
    for _ in range(RANDOM_INPUTS):
        x = random_interior_operator(rng, ch.dim)
        x[ch.dim - 2, :] = 0.0
        x[:, ch.dim - 2] = 0.0
        worst = min(worst, kadison_schwarz_margin(ch, x))
    return _at_least("kadison_schwarz", worst, -settings.tolerance.psd)


def check_rotation_covariance(ch: Channel, rng: np.random.Generator) -> PropertyResult:
    worst = 0.0
    for theta in ROTATIONS:
        x = random_interior_operator(rng, ch.dim)
        worst = max(worst, rotation_covariance_residual(ch, theta, x))
    return _at_most("rotation_covariance", worst, settings.tolerance.exact)


def check_time_reversal(ch: Channel, rng: np.random.Generator) -> PropertyResult:
    reversed_ch = kraus_set(ch.model, qubit_state(ch.psi.lam, -ch.psi.zeta), ch.trunc)
    last = ch.dim - 2
    worst = 0.0
    for _ in range(RANDOM_INPUTS):
        x = random_interior_operator(rng, ch.dim)
        worst = max(worst, max_entry(corner(apply_time_reversed(ch, x) - apply_heisenberg(reversed_ch, x), last)))
    return _at_most("time_reversal", worst, settings.tolerance.exact)


def check_classical_consistency(ch: Channel) -> PropertyResult:
    """P_{ℓ∞}(T(p_n)) 等于以经典转移矩阵第 n 列为对角的矩阵（内部）"""
    chain = classical_transition_matrix(ch)
    last = ch.dim - 2
    worst = 0.0
    for n in range(last + 1):
        image = conditional_expectation_diag(apply_heisenberg(ch, interval_projection(n, n, ch.dim)))
        worst = max(worst, max_entry(corner(image - np.diag(chain.transition[:, n]), last)))
    return _at_most("classical_consistency", worst, settings.tolerance.exact)


def check_invariant_state(ch: Channel) -> Optional[PropertyResult]:
    """存在闭式不变态时检查其残差"""
    result = closed_form_invariant(ch)
    if result is None or not result.exists:
        return None
    return _at_most(f"invariant_state_{result.kind.value}", result.residual, 1e-8)


def check_fixed_points(ch: Channel) -> Optional[PropertyResult]:
    probes = default_probes(ch)
    if not probes:
        return None
    worst = 0.0
    for n, y in enumerate(probes, start=1):
        if ch.dim - 2 - n >= 0:
            worst = max(worst, fixed_point_residual(ch, y, shift_power=n))
    return _at_most("explicit_fixed_points", worst, settings.tolerance.invariant)


def _resolve_space(ch: Channel, space: Optional[SpaceSource]) -> FixedSpace:
    if space is not None:
        return space()
    return fixed_space(ch, probes=default_probes(ch))


def check_mixing_verdict(ch: Channel, space: Optional[SpaceSource] = None) -> Optional[PropertyResult]:
    """fixed_dim = 1 ⟺ 预期弱混合（预期为 unknown 时跳过）"""
    expected = theorem_verdicts(ch.model, ch.psi).weak_mixing.verdict
    if expected == Verdict.UNKNOWN:
        return None
    summary, _ = _resolve_space(ch, space)
    consistent = (summary.fixed_dim == 1) == (expected == Verdict.YES)
    return PropertyResult(
        name="weak_mixing_verdict",
        value=float(summary.fixed_dim),
        threshold=1.0,
        passed=consistent,
        detail=f"expected={expected.value}",
    )


def check_fixed_commutation(ch: Channel, space: Optional[SpaceSource] = None) -> Optional[PropertyResult]:
    """忠实 ψ 且 λ < ½ 时，每个已验证不动元与全部 t_i 交换（内窗口）"""
    if not (classify_state(ch.psi).faithful and ch.psi.lam < 0.5):
        return None
    _, verified = _resolve_space(ch, space)
    residuals = fixed_commutation_residuals(ch, verified)
    threshold = span_tolerance(settings.tolerance.peripheral)
    return _at_most(
        "kraus_commutation_fixed",
        max(residuals, default=0.0),
        threshold,
        detail=f"fixed_elements={len(residuals)}",
    )


def check_extremality(ch: Channel) -> PropertyResult:
    report = extremality_report(ch)
    recombination = report.decomposition.recombination_residual if report.decomposition else 0.0
    passed = report.verdict != ExtremalVerdict.UNDETERMINED and recombination <= settings.tolerance.exact
    return PropertyResult(
        name="extremality",
        value=recombination,
        threshold=settings.tolerance.exact,
        passed=passed,
        detail=f"verdict={report.verdict.value}, gram_rank={report.gram_rank}",
    )


def check_psiplus_example(dim: int) -> PropertyResult:
    report = example_psiplus_mixing_check(min(dim, 32))
    others = [p for p in report.peripheral if abs(p.value - 1.0) > settings.tolerance.peripheral]
    passed = report.fixed_dim == 1 and not others and report.growth_bound_ok
    return PropertyResult(
        name="psiplus_mixing_example",
        value=report.min_growth_factor,
        threshold=1.25,
        passed=passed,
        detail=f"N'={report.resolved_dim}, fixed_dim={report.fixed_dim}",
    )


def run_property_suite(ch: Channel, seed: int = 0) -> list[PropertyResult]:
    """
    运行完整性质套件

    Args:
        ch: 通道
        seed: 随机输入种子

    Returns:
        各项检查结果（顺序固定）
    """
    rng = np.random.default_rng(seed)
    cached: list[FixedSpace] = []

    def space() -> FixedSpace:
        if not cached:
            cached.append(fixed_space(ch, probes=default_probes(ch)))
        return cached[0]

    checks: list[Callable[[], Optional[PropertyResult]]] = [
        lambda: check_normalization(ch),
        lambda: check_dilation_unitarity(ch),
        lambda: check_three_paths(ch, rng),
        lambda: check_unitality(ch),
        lambda: check_locality_sandwich(ch),
        lambda: check_duality(ch, rng),
        lambda: check_complete_positivity(ch),
        lambda: check_kadison_schwarz(ch, rng),
        lambda: check_rotation_covariance(ch, rng),
        lambda: check_time_reversal(ch, rng),
        lambda: check_classical_consistency(ch),
        lambda: check_invariant_state(ch),
        lambda: check_fixed_points(ch),
        lambda: check_mixing_verdict(ch, space),
        lambda: check_fixed_commutation(ch, space),
        lambda: check_extremality(ch),
        lambda: check_psiplus_example(ch.dim),
    ]
    results = []
    for check in checks:
        result = check()
        if result is None:
            continue
        results.append(result)
        if result.passed:
            logger.info(f"✅ {result.name}: {result.value:.3e} (阈值 {result.threshold:g})")
        else:
            logger.error(f"❌ {result.name}: {result.value:.3e} (阈值 {result.threshold:g}) {result.detail}")
    return results


__all__ = ["PropertyResult", "run_property_suite"]
