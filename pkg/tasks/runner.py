"""
配置驱动的任务执行

读取 JSON 配置，先完成全部校验（schema + 领域前置条件，错误汇总），
再按固定顺序执行任务并写出报告。
"""

import json
import time
from pathlib import Path
from typing import Any, Callable, Optional, Union

import numpy as np
from pydantic import ValidationError

from chain.channel import apply_schrodinger, boundary_leakage, kraus_set
from chain.classical import (
    classical_stationary,
    classical_transition_matrix,
    diagonal_invariance_check,
    perron_vector,
)
from chain.model import classify_state, make_model, qubit_state
from chain.operators import interval_projection
from chain.spectral import (
    CITATIONS,
    ergodic_report,
    extremality_report,
    kraus_commutation_residual,
    recursion_residuals,
    span_tolerance,
)
from chain.stationary import (
    boundary_mass,
    closed_form_invariant,
    explicit_fixed_points,
    fixed_point_residual,
    fixed_point_seed,
    solve_invariant_numeric,
)
from config.settings import settings
from core.exceptions import ConfigurationInvalid, ConvergenceFailure, QBDError, ValidationFailure
from core.logger import logger
from models.parameters import ModelKind, Truncation
from models.results import (
    Channel,
    CitedVerdict,
    ClassicalStationary,
    ErgodicReport,
    ExtremalityReport,
    InvariantStateResult,
    PeripheralEigenvalue,
    SubharmonicProbe,
)
from models.schemas import ModelSpec, RunConfig, TruncationSpec, format_validation_errors
from storage.report_writer import ReportWriter
from tasks.sweep import sweep_phase_diagram, sweep_summary
from tasks.verify import run_property_suite

PathLike = Union[str, Path]


# ==================== 配置读取与校验 ====================


def _model_errors(model: ModelSpec, n_max: int) -> list[str]:
    try:
        make_model(model.kind, model.generator_args(), n_max=n_max)
    except (ValidationFailure, ValueError) as e:
        return [f"model: {e}"]
    return []


def validate_domain(config: RunConfig) -> list[str]:
    """
    领域前置条件检查（schema 之外的部分）

    Returns:
        错误消息列表，空列表表示通过
    """
    errors: list[str] = []
    errors.extend(_model_errors(config.model, config.n_max))

    if config.state is not None:
        try:
            qubit_state(config.state.lam, config.state.zeta)
        except ValidationFailure as e:
            errors.append(f"state: {e}")

    try:
        Truncation(dim=config.truncation.dim, interior_margin=config.truncation.interior_margin)
    except ValidationError as e:
        errors.extend(f"truncation: {message}" for message in format_validation_errors(e))

    if "evolve" in config.tasks and config.evolve.initial_level >= config.truncation.dim:
        errors.append(
            f"evolve.initial_level: 初态下标{config.evolve.initial_level}超出截断维数N={config.truncation.dim}"
        )
    return errors


def partial_domain_errors(data: object) -> list[str]:
    """
    schema 未通过时，对自身合法的 model / truncation 段仍做模型领域检查

    Returns:
        模型领域错误（陷阱态、归一化等）；相关段本身不合法时为空
    """
    if not isinstance(data, dict):
        return []
    try:
        model = ModelSpec.model_validate(data.get("model"))
        truncation = TruncationSpec.model_validate(data.get("truncation", {}))
    except ValidationError:
        return []
    n_max = model.n_max if model.n_max is not None else truncation.dim
    return _model_errors(model, max(n_max, truncation.dim))


def load_config(path: PathLike) -> RunConfig:
    """
    读取并校验配置

    Raises:
        ConfigurationInvalid: 文件不可读、JSON 非法、schema 或领域校验失败（汇总全部错误）
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigurationInvalid([f"无法读取配置文件 {path}: {e}"]) from e
    except json.JSONDecodeError as e:
        raise ConfigurationInvalid([f"配置文件不是合法JSON: {e}"]) from e

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        errors = format_validation_errors(e) + partial_domain_errors(data)
        raise ConfigurationInvalid(errors) from e

    errors = validate_domain(config)
    if errors:
        raise ConfigurationInvalid(errors)
    logger.debug(f"配置校验通过: {path}, 任务={config.ordered_tasks()}")
    return config


def build_channel(config: RunConfig) -> Channel:
    """由配置生成模型、态和截断通道"""
    model = make_model(config.model.kind, config.model.generator_args(), n_max=config.n_max)
    psi = qubit_state(config.state.lam, config.state.zeta)
    trunc = Truncation(dim=config.truncation.dim, interior_margin=config.truncation.interior_margin)
    return kraus_set(model, psi, trunc)


# ==================== 结果摘要 ====================


def _cited(verdict: Optional[CitedVerdict]) -> Optional[dict]:
    if verdict is None:
        return None
    return {"verdict": verdict.verdict.value, "citation": verdict.citation}


def _invariant_summary(result: InvariantStateResult) -> dict:
    return {
        "kind": result.kind.value,
        "exists": result.exists,
        "residual": result.residual if result.exists else None,
        "diagnosis": result.diagnosis,
        "renormalization": result.renormalization,
        "boundary_mass": result.boundary_mass,
        "iterations": result.iterations,
        "parameter": result.parameter,
    }


def _probe_summary(probe: SubharmonicProbe) -> dict:
    return {
        "verdict": probe.verdict.value,
        "label": probe.label,
        "margin": probe.margin,
        "kraus_residual": probe.kraus_residual,
        "candidates_tested": probe.candidates_tested,
    }


def _extremality_summary(report: ExtremalityReport) -> dict:
    summary = {
        "verdict": report.verdict.value,
        "theorem_extremal": report.theorem_extremal,
        "numeric_extremal": report.numeric_extremal,
        "gram_rank": report.gram_rank,
        "active_terms": report.active_terms,
        "kraus_rank": report.kraus_rank,
        "decomposition": None,
    }
    if report.decomposition is not None:
        d = report.decomposition
        summary["decomposition"] = {
            "weights": d.weights,
            "components": len(d.components),
            "unital_residual": d.unital_residual,
            "recombination_residual": d.recombination_residual,
            "witness_01": d.witness_01,
            "witness_max_diff": d.witness_max_diff,
        }
    return summary


def _ergodic_summary(report: ErgodicReport) -> dict:
    return {
        "fixed_dim": report.fixed_dim,
        "gap": report.gap,
        "peripheral": [{"value": p.value, "residual": p.residual} for p in report.peripheral],
        "irreducible_probe": _probe_summary(report.irreducible_probe),
        "expected": {
            "irreducible": _cited(report.expected.irreducible),
            "invariant_state": _cited(report.expected.invariant_state),
            "weak_mixing": _cited(report.expected.weak_mixing),
            "pure_invariant_state": _cited(report.expected.pure_invariant_state),
        },
        "extremality": _extremality_summary(report.extremality),
    }


# ==================== 任务 ====================


class TaskContext:
    """单次运行的共享状态：配置、通道以及待输出的矩阵与外围谱"""

    def __init__(self, config: RunConfig, channel: Optional[Channel] = None):
        self.config = config
        self.channel = channel
        self.matrices: dict[str, np.ndarray] = {}
        self.spectra: dict[str, list[PeripheralEigenvalue]] = {}


def task_classical(ctx: TaskContext) -> dict:
    """经典生灭链：转移矩阵、平稳分布、Perron 向量、对角不变性"""
    ch = ctx.channel
    chain = classical_transition_matrix(ch)
    stationary = classical_stationary(chain)
    invariance = diagonal_invariance_check(ch)
    ctx.matrices["classical_transition"] = chain.transition

    result: dict[str, Any] = {
        "lambda": chain.lam,
        "row_sum_deviation": float(np.max(np.abs(chain.transition[:-1].sum(axis=1) - 1.0))),
        "diagonal_invariance": {
            "invariant": invariance.invariant,
            "max_off_diagonal": invariance.max_off_diagonal,
        },
    }
    if isinstance(stationary, ClassicalStationary):
        perron = perron_vector(chain)
        last = chain.dim - 2
        result["stationary"] = {
            "exists": True,
            "ratio": stationary.ratio,
            "residual": stationary.residual,
            "head": stationary.distribution[:8],
            "perron_distance": float(np.sum(np.abs(perron[:last] - stationary.distribution[:last]))),
        }
    else:
        result["stationary"] = {"exists": False, "ratio": stationary.ratio, "diagnosis": stationary.diagnosis}
    logger.info(f"经典链: λ={chain.lam}, 平稳分布存在={result['stationary']['exists']}")
    return result


def task_evolve(ctx: TaskContext) -> dict:
    """从 p_k 出发迭代预对偶，记录每步的迹、边界质量与占据数"""
    ch = ctx.channel
    spec = ctx.config.evolve
    rho = interval_projection(spec.initial_level, spec.initial_level, ch.dim)
    trajectory = []
    for step in range(1, spec.steps + 1):
        rho = apply_schrodinger(ch, rho)
        trajectory.append(
            {
                "step": step,
                "trace": float(np.real(np.trace(rho))),
                "boundary_mass": boundary_mass(rho),
                "populations": np.real(np.diag(rho)),
            }
        )
    ctx.matrices["evolve_final"] = rho
    final = trajectory[-1]
    logger.info(f"预对偶演化 {spec.steps} 步: 迹={final['trace']:.6g}, 边界质量={final['boundary_mass']:.3e}")
    return {"initial_level": spec.initial_level, "leakage": boundary_leakage(ch), "trajectory": trajectory}


def task_stationary(ctx: TaskContext) -> dict:
    """闭式不变态、数值不变态与 λ > ½ 时的显式不动点"""
    ch, solver = ctx.channel, ctx.config.solver
    closed = closed_form_invariant(ch)
    result: dict[str, Any] = {"closed_form": _invariant_summary(closed) if closed else None}
    if closed is not None and closed.exists:
        ctx.matrices["invariant_closed_form"] = closed.rho

    try:
        numeric = solve_invariant_numeric(ch, tol=solver.tol, max_iter=solver.max_iter)
        result["numeric"] = _invariant_summary(numeric)
        if numeric.exists:
            ctx.matrices["invariant_numeric"] = numeric.rho
    except ConvergenceFailure as e:
        if closed is None:
            raise
        logger.warning(f"数值不变态未收敛，保留闭式结果: {e}")
        result["numeric"] = {"kind": "unconverged", "exists": None, "diagnosis": str(e)}

    model, psi = ch.model, ch.psi
    family = model.kind == ModelKind.BABY or (model.kind == ModelKind.HOMOGENEOUS and psi.zeta == 0)
    if family and psi.lam > 0.5:
        seed = fixed_point_seed(ch)
        points = explicit_fixed_points(ch, 5)
        result["fixed_points"] = {
            "seed_diagonal_head": np.real(np.diag(seed))[:6],
            "residuals": [
                fixed_point_residual(ch, y, shift_power=n)
                for n, y in enumerate(points, start=1)
            ],
        }
    return result


def task_spectrum(ctx: TaskContext) -> dict:
    """外围谱、不动空间维数、次调和探测、定理预期；适用时附加 x = 1 的递推残差"""
    ch = ctx.channel
    report = ergodic_report(ch)
    result = _ergodic_summary(report)
    ctx.spectra["peripheral_spectrum"] = list(report.peripheral)

    model, psi = ch.model, ch.psi
    identity = np.eye(ch.dim, dtype=complex)
    if model.kind in (ModelKind.BABY, ModelKind.HOMOGENEOUS) and psi.lam > 0.0 and (
        model.kind == ModelKind.BABY or psi.zeta == 0
    ):
        recursion = recursion_residuals(ch, identity, 1.0)
        result["recursion"] = {
            "residual": recursion.residual,
            "omegas": recursion.omegas,
            "det": recursion.det,
            "trace": recursion.trace,
        }
    residuals = report.commutation_residuals
    tolerance = span_tolerance(settings.tolerance.peripheral)
    result["kraus_commutation"] = {
        "identity": kraus_commutation_residual(ch, identity),
        "fixed_max": max(residuals, default=0.0),
        "fixed_count": len(residuals),
        "tolerance": tolerance,
    }
    if classify_state(psi).faithful and psi.lam < 0.5 and max(residuals, default=0.0) > tolerance:
        logger.warning(f"忠实 ψ、λ < ½ 时存在不与 t_i 交换的不动元: 残差={max(residuals):.3e}")
    logger.info(f"谱分析: fixed_dim={report.fixed_dim}, gap={report.gap:.4g}")
    return result


def task_extremal(ctx: TaskContext) -> dict:
    """UCP 端点判定"""
    report = extremality_report(ctx.channel)
    logger.info(f"端点判定: {report.verdict.value}, gram_rank={report.gram_rank}")
    return _extremality_summary(report)


def task_verify(ctx: TaskContext) -> dict:
    """性质验证套件"""
    results = run_property_suite(ctx.channel, seed=ctx.config.seed)
    return {
        "passed": all(r.passed for r in results),
        "properties": [
            {"name": r.name, "passed": r.passed, "value": r.value, "threshold": r.threshold, "detail": r.detail}
            for r in results
        ],
    }


TASKS: dict[str, Callable[[TaskContext], dict]] = {
    "classical": task_classical,
    "evolve": task_evolve,
    "stationary": task_stationary,
    "spectrum": task_spectrum,
    "extremal": task_extremal,
    "verify": task_verify,
}


# ==================== 运行入口 ====================


def _report_header(config: RunConfig, ch: Optional[Channel]) -> dict:
    report: dict[str, Any] = {"config": config.model_dump(mode="json", by_alias=True)}
    if ch is not None:
        flags = classify_state(ch.psi)
        report["model"] = {
            "kind": ch.model.kind.value,
            "n_max": int(ch.model.alpha.shape[0] - 1),
            "alpha_head": ch.model.alpha[:6],
            "beta_head": ch.model.beta[:6],
        }
        report["state"] = {
            "lambda": ch.psi.lam,
            "zeta": ch.psi.zeta,
            "nu": ch.psi.nu,
            "faithful": flags.faithful,
            "pure": flags.pure,
            "diagonal": flags.diagonal,
        }
    report["citations"] = CITATIONS
    return report


def execute(config: RunConfig, writer: Optional[ReportWriter] = None) -> dict:
    """
    按固定顺序执行配置中的任务

    Args:
        config: 已校验的配置
        writer: 报告写入器，缺省按 settings.output_dir 创建

    Returns:
        完整报告字典（同时写出 JSON，可选矩阵 CSV 与扫描 CSV）
    """
    writer = writer or ReportWriter()
    tasks = config.ordered_tasks()
    ch = build_channel(config) if any(t != "sweep" for t in tasks) else None
    ctx = TaskContext(config, ch)

    start_time = time.perf_counter()
    logger.info("=" * 60)
    logger.info(f"开始执行任务: {', '.join(tasks)}")

    report = _report_header(config, ch)
    results: dict[str, Any] = {}
    for name in tasks:
        task_start = time.perf_counter()
        if name == "sweep":
            rows = sweep_phase_diagram(config)
            csv_dir = Path(config.output.csv_dir or writer.output_dir)
            results["sweep"] = {
                "summary": sweep_summary(rows),
                "csv": str(writer.write_grid_csv(rows, csv_dir / "sweep.csv")),
            }
        else:
            results[name] = TASKS[name](ctx)
        logger.info(f"✅ 任务 {name} 完成，耗时{time.perf_counter() - task_start:.2f}秒")
    report["results"] = results

    writer.write_json(report, config.output.report)
    if config.output.write_matrices:
        for name, matrix in ctx.matrices.items():
            writer.write_matrix_csv(name, matrix, config.output.csv_dir)
        for name, peripheral in ctx.spectra.items():
            writer.write_spectrum_csv(name, peripheral, config.output.csv_dir)

    logger.info(f"全部任务完成: {len(tasks)}项，总耗时{time.perf_counter() - start_time:.2f}秒")
    logger.info("=" * 60)
    return report


def execute_sweep(config: RunConfig, writer: Optional[ReportWriter] = None) -> dict:
    """仅执行相图扫描（忽略 tasks），写出网格 CSV 与 JSON 汇总"""
    writer = writer or ReportWriter()
    rows = sweep_phase_diagram(config)
    csv_dir = Path(config.output.csv_dir or writer.output_dir)
    csv_path = writer.write_grid_csv(rows, csv_dir / "sweep.csv")
    report = {
        "config": config.model_dump(mode="json", by_alias=True),
        "citations": CITATIONS,
        "summary": sweep_summary(rows),
        "csv": str(csv_path),
    }
    writer.write_json(report, config.output.report)
    return report


def execute_verify(config: RunConfig, writer: Optional[ReportWriter] = None) -> dict:
    """仅执行性质验证套件"""
    writer = writer or ReportWriter()
    ch = build_channel(config)
    report = _report_header(config, ch)
    report["results"] = {"verify": task_verify(TaskContext(config, ch))}
    writer.write_json(report, config.output.report)
    return report


def _mode_errors(config: RunConfig, mode: str) -> list[str]:
    """sweep / verify 子命令不看 tasks，需要单独检查各自的前置条件"""
    errors = []
    if mode == "verify" and config.state is None:
        errors.append("state: verify需要state配置")
    if mode in ("sweep", "verify") and config.truncation.dim > settings.max_n:
        errors.append(f"truncation.dim: dim exceeds QBD_MAX_N: N={config.truncation.dim} > {settings.max_n}")
    return errors


def run_config(path: PathLike, writer: Optional[ReportWriter] = None, mode: str = "run") -> int:
    """
    CLI 入口：读取配置、执行并返回退出码

    Args:
        path: 配置文件路径
        writer: 报告写入器
        mode: run / sweep / verify

    Returns:
        0 成功；2 校验失败（全部错误已列出）；3 数值失败或验证性质不通过
    """
    try:
        config = load_config(path)
        mode_errors = _mode_errors(config, mode)
        if mode_errors:
            raise ConfigurationInvalid(mode_errors)
        if mode == "sweep":
            execute_sweep(config, writer)
            return 0
        if mode == "verify":
            report = execute_verify(config, writer)
            return 0 if report["results"]["verify"]["passed"] else 3
        execute(config, writer)
        return 0
    except ConfigurationInvalid as e:
        logger.error(f"配置校验失败，共{len(e.errors)}处错误")
        for message in e.errors:
            logger.error(f"  - {message}")
            print(message)
        return 2
    except ValidationFailure as e:
        logger.error(f"❌ 前置条件不满足: {e}")
        print(str(e))
        return 2
    except QBDError as e:
        logger.error(f"❌ 数值计算失败: {e}")
        print(str(e))
        return 3


__all__ = [
    "validate_domain",
    "load_config",
    "build_channel",
    "TaskContext",
    "TASKS",
    "execute",
    "execute_sweep",
    "execute_verify",
    "run_config",
]
