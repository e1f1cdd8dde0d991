"""
几何层测试 - Stiefel 框架
验证正交规范性、两种投影的过渡关系、旋转不变性与尺度漂移
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest
from scipy.stats import ks_2samp

from tests.script_runner import run_tests
from geometry import StiefelFrame, sample_frame
from numerics import RngStream
from utils.errors import DimensionError, SingularMatrixError


def _rotation(seed, size):
    q, r = np.linalg.qr(RngStream(seed, 99).normals((size, size)))
    return q * np.sign(np.diag(r))


def test_frame_rows_orthonormal():
    """I*·I*ᵀ = Id"""
    stream = RngStream(2020)
    worst = 0.0
    for _ in range(1000):
        frame = sample_frame(stream, 3, 20)
        worst = max(worst, np.max(np.abs(frame.i_star @ frame.i_star.T - np.eye(3))))
    assert worst < 1e-10


def test_frame_is_read_only():
    """构造后的矩阵不可写"""
    frame = sample_frame(RngStream(1), 2, 5)
    with pytest.raises(ValueError):
        frame.i_star[0, 0] = 1.0
    with pytest.raises(ValueError):
        frame.g[0, 0] = 1.0


def test_orthogonal_generator():
    """GG* = n·Id 时 I* = G/√n，尺度漂移为 0"""
    g = np.zeros((2, 4))
    g[0, 0] = g[1, 1] = 2.0
    frame = StiefelFrame.from_gaussian(g)
    expected = np.zeros((2, 4))
    expected[0, 0] = expected[1, 1] = 1.0
    assert np.array_equal(frame.i_star, expected)
    assert frame.scale_drift_norm() == 0.0
    assert np.allclose(frame.project_uniform([2.0, 0.0, 0.0, 0.0]), [1.0, 0.0], atol=1e-15)


def test_projection_linearity():
    """投影线性且零向量映到零"""
    frame = sample_frame(RngStream(4), 3, 12)
    stream = RngStream(4, 1)
    x, y = stream.normals(12), stream.normals(12)
    for project in (frame.project_uniform, frame.project_gaussian):
        assert np.allclose(project(2.5 * x - y), 2.5 * project(x) - project(y), atol=1e-12)
        assert np.array_equal(project(np.zeros(12)), np.zeros(3))

    batch = np.vstack([x, y])
    assert np.allclose(frame.project_uniform(batch)[1], frame.project_uniform(y), atol=1e-15)


def test_projection_dimension_mismatch():
    """输入长度与 n 不一致时报错"""
    frame = sample_frame(RngStream(4), 2, 6)
    with pytest.raises(DimensionError):
        frame.project_uniform(np.ones(5))
    with pytest.raises(DimensionError):
        sample_frame(RngStream(4), 4, 3)


def test_singular_generator():
    """秩亏的 G 无法构造框架"""
    with pytest.raises(SingularMatrixError):
        StiefelFrame.from_gaussian([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])


def test_uniform_gaussian_transition():
    """(1/√n)(GG*)^{1/2}·投影_均匀 = 投影_高斯，且可逆"""
    stream = RngStream(77)
    worst_forward = worst_backward = 0.0
    for _ in range(200):
        frame = sample_frame(stream, 3, 40)
        x = stream.normals((50, 40))
        uniform = frame.project_uniform(x)
        gaussian = frame.project_gaussian(x)
        worst_forward = max(worst_forward, np.max(np.abs(uniform @ frame.scale_to_identity.T - gaussian)))
        worst_backward = max(worst_backward, np.max(np.abs(gaussian @ frame.scale_inverse().T - uniform)))
    assert worst_forward < 1e-10
    assert worst_backward < 1e-10


def test_scale_drift_matches_spectrum():
    """漂移范数等于 max|√(λ/n) − 1|"""
    frame = sample_frame(RngStream(5), 2, 30)
    eigenvalues = np.linalg.eigvalsh(frame.g @ frame.g.T)
    expected = np.max(np.abs(np.sqrt(eigenvalues / 30) - 1.0))
    assert abs(frame.scale_drift_norm() - expected) < 1e-12


def test_scale_drift_shrinks_with_n():
    """尺度漂移的中位数随 n 增大而减小"""
    medians = []
    for n in (100, 1000, 10000):
        stream = RngStream(6, n)
        medians.append(np.median([sample_frame(stream, 3, n).scale_drift_norm() for _ in range(20)]))
    assert medians[0] > medians[1] > medians[2]
    assert medians[2] < 0.1


def test_first_coordinate_moments():
    """d=1 时 I*₁₁ 的均值为 0，方差为 1/n"""
    n, frames = 1000, 10000
    stream = RngStream(8)
    values = np.array([sample_frame(stream, 1, n).i_star[0, 0] for _ in range(frames)])
    assert abs(values.mean()) * math.sqrt(n) < 0.04
    assert abs(values.var() * n - 1.0) < 0.1


def test_rotation_invariance():
    """V·I*·U 与 I* 同分布 (KS 检验)"""
    d, n, frames = 2, 6, 10000
    u = _rotation(1, n)
    v = _rotation(2, d)
    first, second = RngStream(31), RngStream(32)
    rotated = np.array([(v @ sample_frame(first, d, n).i_star @ u)[0, 0] for _ in range(frames)])
    plain = np.array([sample_frame(second, d, n).i_star[0, 0] for _ in range(frames)])
    assert ks_2samp(rotated, plain).pvalue > 0.01


def test_gaussian_projection_of_ones():
    """(1/n)·G·𝟙 ~ N(0, 1/n)"""
    n = 10 ** 6
    for seed in range(10):
        frame = sample_frame(RngStream(seed, 3), 1, n)
        assert abs(frame.project_gaussian(np.ones(n))[0]) < 5.0 / math.sqrt(n)


TESTS = [
    test_frame_rows_orthonormal,
    test_frame_is_read_only,
    test_orthogonal_generator,
    test_projection_linearity,
    test_projection_dimension_mismatch,
    test_singular_generator,
    test_uniform_gaussian_transition,
    test_scale_drift_matches_spectrum,
    test_scale_drift_shrinks_with_n,
    test_first_coordinate_moments,
    test_rotation_invariance,
    test_gaussian_projection_of_ones,
]


if __name__ == "__main__":
    sys.exit(run_tests("Stiefel 框架测试", TESTS))
