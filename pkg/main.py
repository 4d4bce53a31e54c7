"""
QBD Lab 主程序入口

用途:
- run: 按配置中的 tasks 执行单点分析并写出 JSON 报告
- sweep: 在 (λ, |ζ|) 网格上扫描相图，写出 CSV 与 JSON 汇总
- verify: 对配置给定的通道运行完整性质验证套件

使用方式:
    python main.py run configs/baby_stationary.json
    python main.py sweep configs/baby_sweep.json
    python main.py verify configs/homogeneous_verify.json

退出码:
    0 成功；2 配置或前置条件校验失败；3 数值失败或性质验证不通过
"""

import sys
import argparse
import time
from pathlib import Path
from typing import Optional

# 添加项目根目录到Python路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from core.logger import setup_logger, logger
from config.settings import settings
from tasks.runner import run_config


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = argparse.ArgumentParser(
        prog="qbd",
        description="QBD Lab - 量子生灭链数值实验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  qbd run configs/baby_stationary.json       执行配置中的任务
  qbd sweep configs/baby_sweep.json          相图扫描
  qbd verify configs/homogeneous_verify.json 性质验证套件

环境变量:
  QBD_MAX_N        稠密超算子的最大截断维数（默认64）
  QBD_LOG_LEVEL    控制台日志级别
        """
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "按配置执行任务并写出JSON报告"),
        ("sweep", "相图扫描，写出网格CSV"),
        ("verify", "运行性质验证套件"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("config", type=str, help="JSON配置文件路径")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """
    主函数

    Returns:
        退出码
    """
    # 初始化日志
    setup_logger()

    args = build_parser().parse_args(argv)

    start_time = time.perf_counter()
    logger.info("=" * 60)
    logger.info(f"🚀 {settings.app_name} {args.command}: {args.config}")
    logger.info("=" * 60)

    try:
        code = run_config(args.config, mode=args.command)
    except KeyboardInterrupt:
        logger.info("程序被用户中断")
        return 130

    duration = time.perf_counter() - start_time
    if code == 0:
        logger.info(f"✅ 完成，耗时{duration:.2f}秒")
    else:
        logger.error(f"❌ 退出码{code}，耗时{duration:.2f}秒")
    return code


if __name__ == "__main__":
    sys.exit(main())
