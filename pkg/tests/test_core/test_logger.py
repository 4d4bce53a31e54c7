"""
日志系统测试
"""

import pytest
from loguru import logger
from config.settings import settings
from core.logger import setup_logger


@pytest.fixture
def log_dir(tmp_path):
    """指向临时目录的日志配置，结束后关闭全部 sink"""
    path = tmp_path / "run_logs"
    yield path
    logger.remove()


def _read(log_dir, pattern):
    logger.complete()
    files = sorted(log_dir.glob(pattern))
    assert files, f"未生成 {pattern}"
    return files[0].read_text(encoding="utf-8")


class TestSetupLogger:
    """setup_logger 测试"""

    def test_creates_log_dir(self, log_dir):
        """测试日志目录按参数创建"""
        setup_logger(log_dir=str(log_dir))

        assert log_dir.is_dir()
        assert "日志系统初始化完成" in _read(log_dir, "qbd_*.log")

    def test_console_uses_stderr(self, log_dir, capsys):
        """测试控制台日志走 stderr，stdout 保持干净"""
        setup_logger(log_dir=str(log_dir))
        logger.warning("fixed_dim 检查")
        logger.complete()

        captured = capsys.readouterr()
        assert captured.out == ""
        assert "fixed_dim 检查" in captured.err

    def test_console_level_from_settings(self, log_dir, capsys, monkeypatch):
        """测试控制台级别取自 settings.log_level，文件仍记录 INFO"""
        monkeypatch.setattr(settings, "log_level", "WARNING")
        setup_logger(log_dir=str(log_dir))
        logger.info("谱分析完成")
        logger.complete()

        assert "谱分析完成" not in capsys.readouterr().err
        assert "谱分析完成" in _read(log_dir, "qbd_*.log")

    def test_error_file_split(self, log_dir):
        """测试 ERROR 及以上单独写入 error 文件"""
        setup_logger(log_dir=str(log_dir))
        logger.debug("调试细节")
        logger.info("幂迭代收敛")
        logger.error("❌ weak_mixing_verdict")

        general = _read(log_dir, "qbd_*.log")
        errors = _read(log_dir, "error_*.log")
        assert "调试细节" not in general
        assert "幂迭代收敛" in general
        assert "❌ weak_mixing_verdict" in general
        assert "❌ weak_mixing_verdict" in errors
        assert "幂迭代收敛" not in errors

    def test_file_format(self, log_dir):
        """测试文件行包含时间、级别与调用位置"""
        setup_logger(log_dir=str(log_dir))
        logger.info("格式检查")

        line = next(l for l in _read(log_dir, "qbd_*.log").splitlines() if "格式检查" in l)
        timestamp, level, location, message = (part.strip() for part in line.split(" | ", 3))
        assert len(timestamp) == len("2024-01-01 00:00:00")
        assert level == "INFO"
        assert ":test_file_format:" in location
        assert message == "格式检查"
