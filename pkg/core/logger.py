"""
日志系统

使用loguru配置应用日志，支持：
- 控制台和文件双输出
- 日志级别配置
- 日志文件轮转（按日期）
"""

import sys
from pathlib import Path
from loguru import logger
from config.settings import settings

_CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
    "<level>{message}</level>"
)
_FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}"


def setup_logger(log_dir: str = "logs") -> None:
    """
    配置应用日志系统

    - 移除默认handler
    - 添加控制台输出（stderr，彩色格式，保持stdout干净）
    - 添加文件输出（按日期轮转）

    Args:
        log_dir: 日志目录
    """
    logger.remove()

    logger.add(
        sys.stderr,
        level=settings.log_level,
        format=_CONSOLE_FORMAT,
        colorize=True,
    )

    Path(log_dir).mkdir(exist_ok=True)

    # INFO级别及以上
    logger.add(
        f"{log_dir}/qbd_{{time:YYYY-MM-DD}}.log",
        level="INFO",
        format=_FILE_FORMAT,
        rotation="00:00",
        retention="30 days",
        encoding="utf-8",
        enqueue=True,
    )

    # ERROR级别及以上
    logger.add(
        f"{log_dir}/error_{{time:YYYY-MM-DD}}.log",
        level="ERROR",
        format=_FILE_FORMAT,
        rotation="00:00",
        retention="90 days",
        encoding="utf-8",
        enqueue=True,
    )

    logger.info(f"日志系统初始化完成，日志级别: {settings.log_level}")


__all__ = ["logger", "setup_logger"]
