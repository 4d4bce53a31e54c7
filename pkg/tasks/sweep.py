"""
相图扫描

在 (λ, |ζ|) 网格上逐点计算定理预期结论与数值证据，
每个网格点独立求值，单点失败只记录在该行的 error 列。
"""

import cmath
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Optional

import numpy as np
from tqdm import tqdm

from chain.channel import kraus_set
from chain.model import make_model, qubit_state
from chain.spectral import default_probes, peripheral_spectrum, subharmonic_probe, theorem_verdicts
from chain.stationary import solve_invariant_numeric
from core.exceptions import ConvergenceFailure, QBDError
from core.logger import logger
from models.parameters import ModelParameters, Truncation
from models.results import SubharmonicVerdict, Verdict
from models.schemas import RunConfig, SweepSpec


def grid_points(spec: SweepSpec) -> list[tuple[float, float]]:
    """网格点（λ 行优先）"""
    lambdas = np.linspace(spec.lambda_min, spec.lambda_max, spec.lambda_steps)
    zetas = np.linspace(spec.abs_zeta_min, spec.abs_zeta_max, spec.abs_zeta_steps)
    return [(float(lam), float(z)) for lam in lambdas for z in zetas]


def _consistency(expected: Verdict, fixed_dim: int) -> Optional[bool]:
    """fixed_dim = 1 ⟺ 预期弱混合；预期 unknown 时不判定"""
    if expected == Verdict.YES:
        return fixed_dim == 1
    if expected == Verdict.NO:
        return fixed_dim > 1
    return None


def evaluate_point(
    model: ModelParameters,
    trunc: Truncation,
    lam: float,
    abs_zeta: float,
    phase: float = 0.0,
    max_iter: int = 5000,
) -> dict:
    """
    单个网格点

    Returns:
        与 storage.report_writer.GRID_COLUMNS 对应的行字典
    """
    row = {
        "lambda": lam,
        "abs_zeta": abs_zeta,
        "irreducible_expected": "",
        "irreducible_numeric": "",
        "inv_state_expected": "",
        "inv_state_numeric": "",
        "weakmix_expected": "",
        "fixed_dim": None,
        "gap": None,
        "pure_inv_state_expected": "",
        "consistent": None,
        "error": "",
    }
    try:
        psi = qubit_state(lam, abs_zeta * cmath.exp(1j * phase))
        verdicts = theorem_verdicts(model, psi)
        row["irreducible_expected"] = verdicts.irreducible.verdict.value
        row["inv_state_expected"] = verdicts.invariant_state.verdict.value
        row["weakmix_expected"] = verdicts.weak_mixing.verdict.value
        if verdicts.pure_invariant_state is not None:
            row["pure_inv_state_expected"] = verdicts.pure_invariant_state.verdict.value

        ch = kraus_set(model, psi, trunc)
        summary = peripheral_spectrum(ch, probes=default_probes(ch))
        row["fixed_dim"] = summary.fixed_dim
        row["gap"] = summary.gap
        row["consistent"] = _consistency(verdicts.weak_mixing.verdict, summary.fixed_dim)

        probe = subharmonic_probe(ch)
        found = probe.verdict == SubharmonicVerdict.SUBHARMONIC_FOUND
        row["irreducible_numeric"] = Verdict.NO.value if found else Verdict.YES.value

        try:
            state = solve_invariant_numeric(ch, max_iter=max_iter)
            row["inv_state_numeric"] = Verdict.YES.value if state.exists else Verdict.NO.value
        except ConvergenceFailure as e:
            logger.debug(f"网格点 λ={lam}, |ζ|={abs_zeta} 不变态未收敛: {e}")
            row["inv_state_numeric"] = "unconverged"
    except QBDError as e:
        logger.error(f"网格点 λ={lam}, |ζ|={abs_zeta} 计算失败: {e}")
        row["error"] = str(e)
    return row


def sweep_phase_diagram(config: RunConfig) -> list[dict]:
    """
    相图扫描

    Args:
        config: 运行配置（使用 model、truncation、sweep）

    Returns:
        按网格行优先排列的行列表
    """
    spec = config.sweep
    trunc = Truncation(dim=config.truncation.dim, interior_margin=config.truncation.interior_margin)
    model = make_model(config.model.kind, config.model.generator_args(), n_max=config.n_max)
    points = grid_points(spec)

    start_time = time.perf_counter()
    logger.info("=" * 60)
    logger.info(f"开始相图扫描: kind={model.kind.value}, N={trunc.dim}, 网格 {spec.lambda_steps}×{spec.abs_zeta_steps}")

    rows: list[Optional[dict]] = [None] * len(points)
    with tqdm(total=len(points), desc="扫描进度", unit="点", ncols=100) as pbar:
        if spec.workers > 1:
            with ThreadPoolExecutor(max_workers=spec.workers) as pool:
                futures = {
                    pool.submit(evaluate_point, model, trunc, lam, z, spec.zeta_phase, spec.max_iter): index
                    for index, (lam, z) in enumerate(points)
                }
                for future in as_completed(futures):
                    rows[futures[future]] = future.result()
                    pbar.update(1)
        else:
            for index, (lam, z) in enumerate(points):
                pbar.set_postfix_str(f"λ={lam:.3f}, |ζ|={z:.3f}")
                rows[index] = evaluate_point(model, trunc, lam, z, spec.zeta_phase, spec.max_iter)
                pbar.update(1)

    failed = sum(1 for row in rows if row["error"])
    inconsistent = sum(1 for row in rows if row["consistent"] is False)
    duration = time.perf_counter() - start_time
    logger.info(f"相图扫描完成: {len(rows)}点, 失败{failed}点, 不一致{inconsistent}点, 耗时{duration:.1f}秒")
    logger.info("=" * 60)
    return rows


def sweep_summary(rows: list[dict]) -> dict:
    """扫描汇总（JSON 报告使用）"""
    return {
        "points": len(rows),
        "failed": sum(1 for row in rows if row["error"]),
        "consistent": sum(1 for row in rows if row["consistent"] is True),
        "inconsistent": sum(1 for row in rows if row["consistent"] is False),
        "undetermined": sum(1 for row in rows if row["consistent"] is None),
    }


__all__ = ["grid_points", "evaluate_point", "sweep_phase_diagram", "sweep_summary"]
