"""
几何层测试 - 投影立方体
验证支撑函数、方向网格、到极限球的 Hausdorff 距离以及内禀体积
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest
from scipy.special import gamma

from tests.script_runner import run_tests
from geometry import (
    LIMIT_RADIUS, StiefelFrame, Zonotope, DirectionGrid, LimitBall, sample_frame,
    hausdorff_to_ball, intrinsic_volume_exact, intrinsic_volume_mc, intrinsic_volume_limit,
    limit_support_function,
)
from numerics import RngStream
from utils.errors import BudgetExceededError, DimensionError

SQUARE = Zonotope([[1.0, 0.0], [0.0, 1.0]])


def test_generators_from_frame():
    """生成元为 I* 的各列，平方范数之和为 d"""
    g = np.zeros((2, 5))
    g[0, 0] = g[1, 1] = 1.0
    zonotope = Zonotope.from_frame(StiefelFrame.from_gaussian(g))
    assert zonotope.n == 5 and zonotope.d == 2
    assert np.array_equal(zonotope.generators[:2], np.eye(2))
    assert np.array_equal(zonotope.generators[2:], np.zeros((3, 2)))

    random_body = Zonotope.from_frame(sample_frame(RngStream(3), 3, 50))
    assert abs(np.sum(random_body.generators ** 2) - 3.0) < 1e-8


def test_support_function_values():
    """已知的支撑函数值"""
    assert abs(SQUARE.support_function(np.array([1.0, 1.0]) / math.sqrt(2.0)) - math.sqrt(2.0)) < 1e-12
    assert SQUARE.support_function([0.0, 0.0]) == 0.0
    body = Zonotope([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    assert body.support_function([1.0, 0.0]) == 2.0
    with pytest.raises(DimensionError):
        SQUARE.support_function([1.0, 0.0, 0.0])


def test_support_function_properties():
    """齐次、次可加、对称与旋转协变"""
    body = Zonotope(RngStream(9).normals((30, 3)))
    stream = RngStream(9, 1)
    q, _ = np.linalg.qr(stream.normals((3, 3)))
    rotated = Zonotope(body.generators @ q.T)
    for _ in range(200):
        u, v = stream.normals(3), stream.normals(3)
        lam = abs(float(stream.normals(1)[0])) * 3.0
        hu, hv = body.support_function(u), body.support_function(v)
        assert abs(body.support_function(lam * u) - lam * hu) < 1e-10 * max(1.0, lam * hu)
        assert body.support_function(u + v) <= hu + hv + 1e-10
        assert body.support_function(-u) == hu
        assert abs(rotated.support_function(q @ u) - hu) < 1e-10 * max(1.0, hu)


def test_support_function_batch():
    """批量求值 (含分块) 与逐个求值一致"""
    body = Zonotope(RngStream(10).normals((40, 2)))
    directions = RngStream(10, 1).normals((100, 2))
    batch = body.support_function(directions, chunk_size=400)
    single = np.array([body.support_function(u) for u in directions])
    assert np.max(np.abs(batch - single)) < 1e-12 * np.max(single)


def test_direction_grids():
    """单位范数且包含坐标轴方向"""
    for d, count in ((1, None), (2, 4096), (2, 1001), (3, 500), (5, 300)):
        grid = DirectionGrid.build(d, count=count, seed=123)
        assert grid.directions.shape[1] == d
        assert np.allclose(np.linalg.norm(grid.directions, axis=1), 1.0, atol=1e-12)
        for axis in np.vstack([np.eye(d), -np.eye(d)]):
            assert np.any(np.all(np.abs(grid.directions - axis) < 1e-15, axis=1))

    assert len(DirectionGrid.build(2, count=1001)) == 1004
    again = DirectionGrid.build(5, count=300, seed=123)
    assert np.array_equal(again.directions, DirectionGrid.build(5, count=300, seed=123).directions)


def test_limit_ball():
    """极限支撑函数 √(2/π)‖u‖"""
    assert abs(LIMIT_RADIUS - math.sqrt(2.0 / math.pi)) < 1e-15
    assert abs(limit_support_function([3.0, 4.0]) - 5.0 * LIMIT_RADIUS) < 1e-14
    assert np.allclose(LimitBall(d=2).support_function(np.eye(2)), LIMIT_RADIUS)


def test_hausdorff_known_cases():
    """球到自身距离为 0，单位正方形到单位球为 √2 − 1"""
    grid = DirectionGrid.build(2, count=4096)
    ball = LimitBall(d=2)
    assert hausdorff_to_ball(ball, 1.0, ball, grid) == 0.0

    unit_ball = LimitBall(d=2, radius=1.0)
    assert abs(hausdorff_to_ball(SQUARE, 1.0, unit_ball, grid) - (math.sqrt(2.0) - 1.0)) < 1e-3

    with pytest.raises(DimensionError):
        hausdorff_to_ball(SQUARE, 1.0, ball, DirectionGrid(d=2, directions=np.empty((0, 2))))
    with pytest.raises(DimensionError):
        hausdorff_to_ball(SQUARE, 1.0, LimitBall(d=3), grid)


def test_hausdorff_converges():
    """(1/√n)Z_n 到极限球的距离: n=4000 时多数小于 0.1，中位数随 n 减小"""
    grid = DirectionGrid.build(2, count=4096)
    ball = LimitBall(d=2)
    medians = {}
    for n in (250, 4000):
        stream = RngStream(2024, n)
        distances = [hausdorff_to_ball(Zonotope.from_frame(sample_frame(stream, 2, n)),
                                       1.0 / math.sqrt(n), ball, grid) for _ in range(20)]
        medians[n] = float(np.median(distances))
        if n == 4000:
            assert sum(dist < 0.1 for dist in distances) >= 18
    assert medians[4000] < medians[250]


def test_intrinsic_volume_exact_small():
    """正方形: V₂ = 4 (面积)，V₁ = 4 (半周长)；单个线段 V₁ = 长度"""
    assert abs(intrinsic_volume_exact(SQUARE, 2) - 4.0) < 1e-12
    assert abs(intrinsic_volume_exact(SQUARE, 1) - 4.0) < 1e-12
    segment = Zonotope([[0.6, 0.8]])
    assert abs(intrinsic_volume_exact(segment, 1) - 2.0) < 1e-12
    with pytest.raises(DimensionError):
        intrinsic_volume_exact(SQUARE, 3)


def test_intrinsic_volume_permutation_invariant():
    """生成元重排不改变 V_k"""
    generators = RngStream(14).normals((12, 3))
    forward = intrinsic_volume_exact(Zonotope(generators), 2, chunk_size=7)
    reverse = intrinsic_volume_exact(Zonotope(generators[::-1]), 2)
    assert abs(forward - reverse) < 1e-12 * forward


def test_intrinsic_volume_budget():
    """C(n,k) 超出预算时拒绝枚举"""
    body = Zonotope(RngStream(15).normals((5000, 2)))
    with pytest.raises(BudgetExceededError) as info:
        intrinsic_volume_exact(body, 2)
    assert info.value.requested == math.comb(5000, 2)


def test_intrinsic_volume_mc():
    """蒙特卡洛估计在 4 倍标准误内与精确值一致，样本加倍标准误约缩小 √2"""
    body = Zonotope.from_frame(sample_frame(RngStream(16), 3, 30))
    exact = intrinsic_volume_exact(body, 2)
    estimate = intrinsic_volume_mc(body, 2, 100000, RngStream(16, 1))
    assert estimate.estimator == 'mc' and estimate.samples == 100000
    assert abs(estimate.value - exact) < 4.0 * estimate.std_err

    small = intrinsic_volume_mc(body, 2, 10000, RngStream(16, 2))
    large = intrinsic_volume_mc(body, 2, 20000, RngStream(16, 3))
    assert 0.6 < large.std_err / small.std_err < 0.8

    single = intrinsic_volume_mc(Zonotope([[0.7]]), 1, 100, RngStream(16, 4))
    assert abs(single.value - 1.4) < 1e-12 and single.std_err < 1e-12

    with pytest.raises(ValueError):
        intrinsic_volume_mc(body, 2, 50, RngStream(16, 5))


def test_intrinsic_volume_limit_constants():
    """极限常数: d=2 时 k=2 为 2，k=1 为 √(2π)"""
    assert abs(intrinsic_volume_limit(2, 2) - 2.0) < 1e-12
    assert abs(intrinsic_volume_limit(2, 1) - math.sqrt(2.0 * math.pi)) < 1e-10
    assert abs(gamma(1.0) - 1.0) < 1e-15
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14
    # d 维球半径 √(2/π) 的体积
    volume = math.pi ** 1.5 / gamma(2.5) * LIMIT_RADIUS ** 3
    assert abs(intrinsic_volume_limit(3, 3) - volume) < 1e-12
    with pytest.raises(DimensionError):
        intrinsic_volume_limit(2, 3)


TESTS = [
    test_generators_from_frame,
    test_support_function_values,
    test_support_function_properties,
    test_support_function_batch,
    test_direction_grids,
    test_limit_ball,
    test_hausdorff_known_cases,
    test_hausdorff_converges,
    test_intrinsic_volume_exact_small,
    test_intrinsic_volume_permutation_invariant,
    test_intrinsic_volume_budget,
    test_intrinsic_volume_mc,
    test_intrinsic_volume_limit_constants,
]


if __name__ == "__main__":
    sys.exit(run_tests("投影立方体测试", TESTS))
