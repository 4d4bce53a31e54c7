"""
配置驱动任务执行测试
"""

import json
import math

import pytest
from config.settings import settings
from core.exceptions import ConfigurationInvalid, ConvergenceFailure
from storage.report_writer import GRID_COLUMNS, ReportWriter
from tasks.runner import build_channel, execute, load_config, run_config
from tasks.verify import PropertyResult


@pytest.fixture
def writer(tmp_path):
    return ReportWriter(tmp_path)


@pytest.fixture
def base_config(tmp_path):
    """baby 模型、λ = 0.25、ζ = 0.6 的小规模配置"""
    return {
        "model": {"kind": "baby"},
        "state": {"lambda": 0.25, "zeta_re": 0.6},
        "truncation": {"dim": 12},
        "tasks": ["stationary"],
        "output": {"report": str(tmp_path / "report.json"), "csv_dir": str(tmp_path / "csv")},
    }


def _read_report(tmp_path):
    return json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))


class TestLoadConfig:
    """配置读取测试"""

    def test_valid(self, write_config, base_config):
        """测试合法配置"""
        config = load_config(write_config(base_config))

        assert config.state.lam == 0.25
        assert config.ordered_tasks() == ["stationary"]

    def test_missing_file(self, tmp_path):
        """测试文件不存在"""
        with pytest.raises(ConfigurationInvalid, match="无法读取配置文件"):
            load_config(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        """测试非法 JSON"""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        with pytest.raises(ConfigurationInvalid, match="不是合法JSON"):
            load_config(path)

    def test_all_schema_errors_reported(self, write_config, base_config):
        """测试一次列出全部 schema 错误"""
        base_config["state"]["lambda"] = 1.5
        base_config["tasks"] = ["stationary", "bogus"]
        base_config["unexpected"] = 1

        with pytest.raises(ConfigurationInvalid) as exc_info:
            load_config(write_config(base_config))

        errors = exc_info.value.errors
        assert len(errors) >= 3
        assert any("lambda out of range" in e for e in errors)
        assert any("unknown task" in e for e in errors)

    def test_domain_errors(self, write_config, base_config):
        """测试领域前置条件错误汇总"""
        base_config["model"] = {"kind": "homogeneous", "alpha": 0.6, "beta": 0.5}
        base_config["tasks"] = ["evolve"]
        base_config["evolve"] = {"steps": 3, "initial_level": 12}

        with pytest.raises(ConfigurationInvalid) as exc_info:
            load_config(write_config(base_config))

        errors = exc_info.value.errors
        assert any(e.startswith("model:") for e in errors)
        assert any(e.startswith("evolve.initial_level") for e in errors)

    def test_schema_and_model_errors_together(self, write_config, base_config):
        """测试 schema 错误与陷阱态一并报告"""
        base_config["model"] = {"kind": "jaynes_cummings", "g": math.pi}
        base_config["state"]["lambda"] = 1.2

        with pytest.raises(ConfigurationInvalid) as exc_info:
            load_config(write_config(base_config))

        errors = exc_info.value.errors
        assert any("lambda out of range" in e for e in errors)
        assert any(e.startswith("model: TrappingState(1)") for e in errors)

    def test_invalid_model_section_not_rechecked(self, write_config, base_config):
        """测试 model 段本身不合法时只报告 schema 错误"""
        base_config["model"] = {"kind": "homogeneous", "alpha": 0.6}
        base_config["state"]["lambda"] = 1.2

        with pytest.raises(ConfigurationInvalid) as exc_info:
            load_config(write_config(base_config))

        assert not any(e.startswith("model: ") for e in exc_info.value.errors)

    def test_build_channel(self, write_config, base_config):
        """测试由配置生成通道"""
        ch = build_channel(load_config(write_config(base_config)))

        assert ch.dim == 12
        assert ch.psi.zeta == 0.6
        assert ch.model.alpha.shape[0] == 13


class TestExecute:
    """任务执行测试"""

    def test_stationary_report(self, write_config, base_config, writer, tmp_path):
        """测试不变态报告内容"""
        execute(load_config(write_config(base_config)), writer)
        report = _read_report(tmp_path)

        stationary = report["results"]["stationary"]
        assert stationary["closed_form"]["kind"] == "closed_form_baby"
        assert stationary["closed_form"]["residual"] <= 1e-8
        assert stationary["numeric"]["kind"] == "numeric"
        assert report["config"]["state"]["lambda"] == 0.25
        assert report["state"]["faithful"] is True
        assert report["citations"]

    def test_task_order_and_matrices(self, write_config, base_config, writer, tmp_path):
        """测试任务按规范顺序执行并输出矩阵 CSV"""
        base_config["tasks"] = ["extremal", "evolve", "classical"]
        base_config["evolve"] = {"steps": 4, "initial_level": 2}
        base_config["output"]["write_matrices"] = True
        execute(load_config(write_config(base_config)), writer)
        report = _read_report(tmp_path)

        assert list(report["results"]) == ["classical", "evolve", "extremal"]
        assert len(report["results"]["evolve"]["trajectory"]) == 4
        assert report["results"]["classical"]["stationary"]["exists"] is True
        assert (tmp_path / "csv" / "classical_transition.csv").exists()
        assert (tmp_path / "csv" / "evolve_final.csv").exists()

    def test_spectrum_outputs(self, write_config, base_config, writer, tmp_path):
        """测试谱任务写出外围谱 CSV 并报告不动元的交换残差"""
        base_config["tasks"] = ["spectrum"]
        base_config["output"]["write_matrices"] = True
        execute(load_config(write_config(base_config)), writer)
        spectrum = _read_report(tmp_path)["results"]["spectrum"]

        lines = (tmp_path / "csv" / "peripheral_spectrum.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "index,re,im,modulus,residual"
        assert len(lines) - 1 == len(spectrum["peripheral"])
        commutation = spectrum["kraus_commutation"]
        assert commutation["identity"] == 0.0
        assert commutation["fixed_max"] <= commutation["tolerance"]

    def test_fixed_points_reported(self, write_config, base_config, writer, tmp_path):
        """测试 λ > ½ 时报告显式不动点"""
        base_config["state"] = {"lambda": 0.75}
        execute(load_config(write_config(base_config)), writer)
        stationary = _read_report(tmp_path)["results"]["stationary"]

        assert stationary["closed_form"]["exists"] is False
        assert stationary["numeric"]["exists"] is False
        assert stationary["fixed_points"]["seed_diagonal_head"][0] == pytest.approx(0.5)
        assert max(stationary["fixed_points"]["residuals"]) <= 1e-10

    def test_sweep_task(self, write_config, base_config, writer, tmp_path):
        """测试 sweep 任务写出网格 CSV"""
        base_config["tasks"] = ["sweep"]
        base_config["truncation"] = {"dim": 8}
        base_config["sweep"] = {"lambda_steps": 2, "abs_zeta_steps": 2}
        execute(load_config(write_config(base_config)), writer)

        header = (tmp_path / "csv" / "sweep.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header.split(",") == GRID_COLUMNS
        assert _read_report(tmp_path)["results"]["sweep"]["summary"]["points"] == 4

    def test_deterministic_output(self, write_config, base_config, tmp_path):
        """测试相同配置输出逐字节相同"""
        base_config["tasks"] = ["classical", "stationary"]
        config = load_config(write_config(base_config))
        execute(config, ReportWriter(tmp_path))
        first = (tmp_path / "report.json").read_bytes()
        execute(config, ReportWriter(tmp_path))

        assert (tmp_path / "report.json").read_bytes() == first


class TestRunConfig:
    """退出码测试"""

    def test_success(self, write_config, base_config, writer):
        """测试成功返回0"""
        assert run_config(write_config(base_config), writer) == 0

    def test_invalid_config(self, write_config, base_config, writer, capsys):
        """测试校验失败返回2并逐条输出"""
        base_config["state"]["lambda"] = -0.1
        base_config["truncation"]["dim"] = 2

        assert run_config(write_config(base_config), writer) == 2
        output = capsys.readouterr().out
        assert "lambda out of range" in output
        assert "截断维数必须不小于4" in output

    def test_dimension_guard(self, write_config, base_config, writer, capsys):
        """测试稠密任务超过 QBD_MAX_N 返回2"""
        base_config["tasks"] = ["spectrum"]
        base_config["truncation"]["dim"] = settings.max_n + 1

        assert run_config(write_config(base_config), writer) == 2
        assert "dim exceeds QBD_MAX_N" in capsys.readouterr().out

    def test_numeric_failure(self, write_config, base_config, writer, mocker):
        """测试无闭式解且数值求解失败返回3"""
        base_config["model"] = {"kind": "jaynes_cummings", "g": 0.7}
        base_config["state"] = {"lambda": 0.3, "zeta_im": 0.2}
        mocker.patch("tasks.runner.solve_invariant_numeric", side_effect=ConvergenceFailure(10, 1e-3))

        assert run_config(write_config(base_config), writer) == 3

    def test_convergence_failure_with_closed_form(self, write_config, base_config, writer, mocker, tmp_path):
        """测试有闭式解时保留结果并继续"""
        mocker.patch("tasks.runner.solve_invariant_numeric", side_effect=ConvergenceFailure(10, 1e-3))

        assert run_config(write_config(base_config), writer) == 0
        assert _read_report(tmp_path)["results"]["stationary"]["numeric"]["kind"] == "unconverged"

    def test_verify_requires_state(self, write_config, base_config, writer, capsys):
        """测试 verify 缺少 state 返回2"""
        del base_config["state"]
        base_config["tasks"] = ["sweep"]

        assert run_config(write_config(base_config), writer, mode="verify") == 2
        assert "verify需要state配置" in capsys.readouterr().out

    def test_verify_failure(self, write_config, base_config, writer, mocker):
        """测试性质不通过返回3"""
        failed = PropertyResult(name="choi_positivity", value=-1.0, threshold=-1e-10, passed=False)
        mocker.patch("tasks.runner.run_property_suite", return_value=[failed])

        assert run_config(write_config(base_config), writer, mode="verify") == 3

    def test_verify_success(self, write_config, base_config, writer, tmp_path):
        """测试 verify 子命令写出性质列表"""
        base_config["truncation"]["dim"] = 10

        assert run_config(write_config(base_config), writer, mode="verify") == 0
        verify = _read_report(tmp_path)["results"]["verify"]
        assert verify["passed"] is True
        assert verify["properties"][0]["name"] == "model_normalization"

    def test_sweep_mode_ignores_tasks(self, write_config, base_config, writer, tmp_path):
        """测试 sweep 子命令忽略 tasks"""
        base_config["truncation"]["dim"] = 8
        base_config["sweep"] = {"lambda_steps": 2, "abs_zeta_steps": 1}

        assert run_config(write_config(base_config), writer, mode="sweep") == 0
        report = _read_report(tmp_path)
        assert report["summary"]["points"] == 2
        assert report["csv"].endswith("sweep.csv")
