"""
报告存储

提供 JSON 报告、矩阵 CSV、外围谱 CSV 与扫描网格 CSV 的写入。
输出不含时间戳，相同输入得到逐字节相同的文件。
"""

import json
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config.settings import settings
from core.logger import logger
from models.results import PeripheralEigenvalue
from utils.serialization import matrix_to_frame, to_jsonable

# 扫描 CSV 的固定列顺序
GRID_COLUMNS = [
    "lambda",
    "abs_zeta",
    "irreducible_expected",
    "irreducible_numeric",
    "inv_state_expected",
    "inv_state_numeric",
    "weakmix_expected",
    "fixed_dim",
    "gap",
    "pure_inv_state_expected",
    "consistent",
    "error",
]

# 外围谱 CSV 的列顺序
SPECTRUM_COLUMNS = ["index", "re", "im", "modulus", "residual"]

PathLike = Union[str, Path]


class ReportWriter:
    """报告写入器"""

    def __init__(self, output_dir: Optional[PathLike] = None):
        """
        初始化写入器

        Args:
            output_dir: 相对路径的根目录，缺省取 settings.output_dir
        """
        self.output_dir = Path(output_dir or settings.output_dir)

    def _resolve(self, path: PathLike) -> Path:
        target = Path(path)
        if not target.is_absolute() and not target.parts[:1] == self.output_dir.parts[:1]:
            target = self.output_dir / target
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def write_json(self, report: Any, path: PathLike) -> Path:
        """
        写入 JSON 报告

        Args:
            report: 报告对象（dict / dataclass / pydantic 模型）
            path: 目标路径

        Returns:
            实际写入路径
        """
        target = self._resolve(path)
        text = json.dumps(to_jsonable(report), indent=2, ensure_ascii=False)
        target.write_text(text + "\n", encoding="utf-8")
        logger.info(f"JSON报告已写入: {target}")
        return target

    def write_matrix_csv(self, name: str, matrix: np.ndarray, csv_dir: Optional[PathLike] = None) -> Path:
        """
        写入矩阵 CSV（长格式 row, col, re, im）

        Args:
            name: 文件名（不含扩展名）
            matrix: 复矩阵
            csv_dir: 目录，缺省为 output_dir/csv
        """
        directory = Path(csv_dir) if csv_dir else self.output_dir / "csv"
        target = self._resolve(directory / f"{name}.csv")
        frame = matrix_to_frame(np.asarray(matrix))
        frame.to_csv(target, index=False, float_format="%.12g", encoding="utf-8")
        logger.debug(f"矩阵CSV已写入: {target}, {len(frame)}行")
        return target

    def write_spectrum_csv(
        self,
        name: str,
        peripheral: Sequence[PeripheralEigenvalue],
        csv_dir: Optional[PathLike] = None,
    ) -> Path:
        """
        写入外围谱 CSV

        每个特征值一行，列顺序为 SPECTRUM_COLUMNS，行顺序与输入一致。
        """
        directory = Path(csv_dir) if csv_dir else self.output_dir / "csv"
        target = self._resolve(directory / f"{name}.csv")
        frame = pd.DataFrame(
            {
                "index": range(len(peripheral)),
                "re": [p.value.real for p in peripheral],
                "im": [p.value.imag for p in peripheral],
                "modulus": [abs(p.value) for p in peripheral],
                "residual": [p.residual for p in peripheral],
            },
            columns=SPECTRUM_COLUMNS,
        )
        frame.to_csv(target, index=False, float_format="%.12g", encoding="utf-8")
        logger.debug(f"外围谱CSV已写入: {target}, {len(frame)}行")
        return target

    def write_grid_csv(self, rows: Sequence[dict], path: PathLike) -> Path:
        """
        写入扫描网格 CSV

        列顺序固定为 GRID_COLUMNS，行顺序与输入一致（网格行优先）。
        """
        target = self._resolve(path)
        frame = pd.DataFrame(list(rows), columns=GRID_COLUMNS)
        frame.to_csv(target, index=False, float_format="%.12g", encoding="utf-8")
        logger.info(f"扫描CSV已写入: {target}, {len(frame)}行")
        return target


__all__ = ["GRID_COLUMNS", "SPECTRUM_COLUMNS", "ReportWriter"]
