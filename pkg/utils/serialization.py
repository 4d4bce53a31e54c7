"""
报告序列化工具

将数值结果转换为 JSON 友好的结构：
- 复数 → {"re": ..., "im": ...}
- numpy 数组 → 嵌套列表
- dataclass / pydantic 模型 → 字典（保持字段顺序）
- Enum → 值
"""

import dataclasses
import math
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel


def complex_to_dict(z: complex) -> dict[str, float]:
    """复数编码为 {re, im}"""
    z = complex(z)
    return {"re": _clean_float(z.real), "im": _clean_float(z.imag)}


def _clean_float(v: float) -> Any:
    """NaN/Inf 编码为字符串，-0.0 归一为 0.0"""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v + 0.0


def to_jsonable(obj: Any) -> Any:
    """
    递归转换为可 JSON 序列化的对象

    Args:
        obj: 任意结果对象

    Returns:
        仅包含 dict / list / str / int / float / bool / None 的结构
    """
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _clean_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_dict(obj)
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [to_jsonable(v) for v in obj.tolist()]
        return to_jsonable(obj.tolist())
    if isinstance(obj, BaseModel):
        return {k: to_jsonable(getattr(obj, k)) for k in type(obj).model_fields}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"无法序列化的类型: {type(obj)}")


def matrix_to_frame(x: np.ndarray, tol: float = 0.0) -> pd.DataFrame:
    """
    矩阵转长格式 DataFrame（列 row, col, re, im）

    只保留 |x_{m,n}| > tol 的元素，按行优先排序。
    """
    rows, cols = np.nonzero(np.abs(x) > tol)
    values = x[rows, cols]
    return pd.DataFrame(
        {
            "row": rows.astype(int),
            "col": cols.astype(int),
            "re": np.real(values).astype(float),
            "im": np.imag(values).astype(float),
        }
    )


__all__ = ["complex_to_dict", "to_jsonable", "matrix_to_frame"]
