"""
pytest配置文件

定义全局fixtures和配置
"""
import json
import pytest
import numpy as np
from pathlib import Path
import sys

# 添加项目根目录到Python路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from chain.channel import kraus_set
from chain.model import make_model, qubit_state
from models.parameters import Truncation


@pytest.fixture
def project_root_dir():
    """项目根目录"""
    return project_root


@pytest.fixture
def rng():
    """固定种子的随机数生成器"""
    return np.random.default_rng(20240601)


@pytest.fixture
def baby_model():
    """baby 模型（n_max = 64）"""
    return make_model("baby", n_max=64)


@pytest.fixture
def homogeneous_model():
    """homogeneous 模型 α = 0.6, β = 0.8（n_max = 64）"""
    return make_model("homogeneous", {"alpha": 0.6, "beta": 0.8}, n_max=64)


@pytest.fixture
def jc_model():
    """Jaynes-Cummings 模型 g = 0.7（n_max = 64）"""
    return make_model("jaynes_cummings", {"g": 0.7}, n_max=64)


@pytest.fixture
def make_channel():
    """通道工厂：make_channel(model, lam, zeta, dim)"""

    def _make(model, lam, zeta=0j, dim=16):
        return kraus_set(model, qubit_state(lam, zeta), Truncation(dim=dim))

    return _make


@pytest.fixture
def write_config(tmp_path):
    """把配置字典写成 JSON 文件并返回路径"""

    def _write(data, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
