"""
配置管理模块测试
"""

import pytest
from pydantic import ValidationError
from config.settings import Settings, SweepDefaults, ToleranceConfig


class TestToleranceConfig:
    """容差配置测试"""

    def test_default_config(self):
        """测试默认配置"""
        config = ToleranceConfig()
        assert config.trapping == 1e-9
        assert config.exact == 1e-12
        assert config.psd == 1e-10
        assert config.peripheral == 1e-7
        assert config.invariant == 1e-10
        assert config.boundary_mass == 0.1

    def test_positive_validation(self):
        """测试容差必须为正"""
        with pytest.raises(ValidationError, match="容差必须大于0"):
            ToleranceConfig(exact=0.0)

        with pytest.raises(ValidationError, match="容差必须大于0"):
            ToleranceConfig(peripheral=-1e-7)

    def test_env_override(self, monkeypatch):
        """测试环境变量覆盖"""
        monkeypatch.setenv("QBD_TOL__PERIPHERAL", "1e-6")
        monkeypatch.setenv("QBD_TOL__BOUNDARY_MASS", "0.2")

        config = ToleranceConfig()
        assert config.peripheral == 1e-6
        assert config.boundary_mass == 0.2


class TestSweepDefaults:
    """扫描默认值测试"""

    def test_default_config(self):
        """测试默认网格"""
        config = SweepDefaults()
        assert config.lambda_steps == 21
        assert config.abs_zeta_steps == 11
        assert config.dim == 24
        assert config.workers == 1

    def test_validation(self):
        """测试正整数与维数下限"""
        with pytest.raises(ValidationError, match="必须为正整数"):
            SweepDefaults(workers=0)

        with pytest.raises(ValidationError, match="截断维数必须不小于4"):
            SweepDefaults(dim=3)


class TestSettings:
    """主配置类测试"""

    def test_default_config(self):
        """测试默认配置"""
        settings = Settings()
        assert settings.app_name == "QBD Lab"
        assert settings.max_n == 64
        assert settings.output_dir == "reports"
        assert isinstance(settings.tolerance, ToleranceConfig)
        assert isinstance(settings.sweep, SweepDefaults)

    def test_log_level_validation(self):
        """测试日志级别验证"""
        assert Settings(log_level="debug").log_level == "DEBUG"

        with pytest.raises(ValidationError, match="日志级别必须是"):
            Settings(log_level="VERBOSE")

    def test_max_n_env_override(self, monkeypatch):
        """测试 QBD_MAX_N 覆盖稠密维数上限"""
        monkeypatch.setenv("QBD_MAX_N", "96")
        assert Settings().max_n == 96

    def test_max_n_validation(self):
        """测试稠密维数上限下界"""
        with pytest.raises(ValidationError, match="QBD_MAX_N必须不小于4"):
            Settings(max_n=2)

    def test_nested_env_override(self, monkeypatch):
        """测试嵌套环境变量"""
        monkeypatch.setenv("QBD_SWEEP__WORKERS", "4")
        settings = Settings()
        assert settings.sweep.workers == 4
