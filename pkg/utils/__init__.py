"""
Utils Module
"""

from utils.linalg import (
    max_entry,
    trace_norm,
    hermitian_part,
    min_eigenvalue,
    psd_margin,
    numerical_rank,
    corner,
    bandwidth,
)
from utils.serialization import complex_to_dict, to_jsonable, matrix_to_frame

__all__ = [
    # linalg
    "max_entry",
    "trace_norm",
    "hermitian_part",
    "min_eigenvalue",
    "psd_margin",
    "numerical_rank",
    "corner",
    "bandwidth",
    # serialization
    "complex_to_dict",
    "to_jsonable",
    "matrix_to_frame",
]
