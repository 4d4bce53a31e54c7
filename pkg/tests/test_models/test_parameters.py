"""
链参数数据模型测试
"""

import numpy as np
import pytest
from pydantic import ValidationError
from models.parameters import ModelKind, ModelParameters, QubitState, Truncation


class TestModelParameters:
    """模型参数测试"""

    def test_arrays_read_only(self):
        """测试参数序列只读"""
        model = ModelParameters(kind=ModelKind.GENERAL, alpha=[1.0, 0.6, 0.6], beta=[0.0, 0.8, 0.8])
        assert model.n_max == 2
        with pytest.raises(ValueError):
            model.alpha[1] = 0.5

    def test_length_mismatch(self):
        """测试 α 与 β 长度不一致"""
        with pytest.raises(ValidationError, match="长度不一致"):
            ModelParameters(kind=ModelKind.GENERAL, alpha=[1.0, 0.6], beta=[0.0, 0.8, 0.8])

    def test_homogeneous_values(self):
        """测试齐次参数读取"""
        baby = ModelParameters(kind=ModelKind.BABY, alpha=[1.0, 0.0], beta=[0.0, 1.0])
        assert (baby.alpha_value, baby.beta_value) == (0.0, 1.0)
        assert baby.is_homogeneous

        general = ModelParameters(kind=ModelKind.GENERAL, alpha=[1.0, 0.6], beta=[0.0, 0.8])
        assert general.alpha_value is None
        assert not general.is_homogeneous


class TestQubitState:
    """二能级态测试"""

    def test_nu(self):
        """测试 ν = iζ√(λ(1−λ))"""
        psi = QubitState(lam=0.5, zeta=1.0)
        np.testing.assert_allclose(psi.nu, 0.5j)
        assert psi.abs_zeta == 1.0

    def test_frozen(self):
        """测试不可变"""
        psi = QubitState(lam=0.3)
        with pytest.raises(ValidationError):
            psi.lam = 0.4


class TestTruncation:
    """截断配置测试"""

    def test_interior(self):
        """测试内部区域最后下标"""
        assert Truncation(dim=16).interior == 14
        assert Truncation(dim=16, interior_margin=2).interior == 13

    def test_validation(self):
        """测试维数与边界宽度校验"""
        with pytest.raises(ValidationError, match="截断维数必须不小于4"):
            Truncation(dim=3)
        with pytest.raises(ValidationError, match="interior_margin必须不小于1"):
            Truncation(dim=8, interior_margin=0)
        with pytest.raises(ValidationError, match="不足以容纳边界宽度"):
            Truncation(dim=6, interior_margin=3)
