"""
分布层测试
验证对数矩母函数的数值形式、对称性与凸性、采样矩以及离散分布文件读取
"""

import json
import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from tests.script_runner import run_tests
from distributions import (
    DistributionFactory, FiniteDiscreteDistribution, GaussianDistribution,
    RademacherDistribution, UniformSymmetricDistribution, load_discrete_json,
)
from numerics import RngStream
from utils.errors import DistributionError, UnsupportedDistributionError

SYMMETRIC = [
    GaussianDistribution(),
    RademacherDistribution(),
    UniformSymmetricDistribution(),
    FiniteDiscreteDistribution(atoms=(-2.0, 0.0, 2.0), weights=(0.25, 0.5, 0.25)),
]
SKEWED = FiniteDiscreteDistribution(atoms=(-1.0, 3.0), weights=(0.75, 0.25))


def _write_json(directory, document):
    path = os.path.join(directory, 'nu.json')
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f)
    return path


def test_log_mgf_known_values():
    """闭式值与大参数下不溢出"""
    assert RademacherDistribution().log_mgf(0.0) == 0.0
    assert GaussianDistribution().log_mgf(3.0) == 4.5
    assert abs(RademacherDistribution().log_mgf(1.0) - math.log(math.cosh(1.0))) < 1e-15
    uniform = UniformSymmetricDistribution()
    assert abs(uniform.log_mgf(1.0) - math.log(math.sinh(1.0))) < 1e-15
    assert abs(uniform.log_mgf(700.0) - (700.0 - math.log(1400.0))) < 1e-9
    assert abs(RademacherDistribution().log_mgf(1000.0) - (1000.0 - math.log(2.0))) < 1e-9
    assert abs(uniform.log_mgf(1e-3) - math.log(math.sinh(1e-3) / 1e-3)) < 1e-15


def test_log_mgf_zero_at_origin():
    """所有分布在 y=0 处恰为 0 (标量与数组)"""
    for nu in SYMMETRIC + [SKEWED]:
        assert nu.log_mgf(0.0) == 0.0
        assert nu.log_mgf(np.zeros(3))[1] == 0.0


def test_discrete_matches_rademacher():
    """{−1, +1} 等权离散分布与 Rademacher 一致"""
    coin = FiniteDiscreteDistribution(atoms=(-1.0, 1.0), weights=(0.5, 0.5))
    y = np.linspace(-20.0, 20.0, 100)
    assert np.max(np.abs(coin.log_mgf(y) - RademacherDistribution().log_mgf(y))) < 1e-12
    assert np.max(np.abs(coin.log_mgf_prime(y) - np.tanh(y))) < 1e-12


def test_symmetry_and_convexity():
    """对称分布的 log M 为偶函数，所有分布的 log M 为凸函数"""
    stream = RngStream(21)
    y = 100.0 * stream.uniform(1000) - 50.0
    for nu in SYMMETRIC:
        assert np.max(np.abs(nu.log_mgf(y) - nu.log_mgf(-y))) < 1e-12 * np.max(np.abs(nu.log_mgf(y)))

    triples = np.sort(60.0 * stream.uniform((1000, 3)) - 30.0, axis=1)
    for nu in SYMMETRIC + [SKEWED]:
        f = nu.log_mgf(triples)
        lo, mid, hi = triples[:, 0], triples[:, 1], triples[:, 2]
        span = np.where(hi > lo, hi - lo, 1.0)
        chord = f[:, 0] + (mid - lo) / span * (f[:, 2] - f[:, 0])
        assert np.all(f[:, 1] <= chord + 1e-10 * np.maximum(1.0, np.abs(chord)))


def test_scalar_and_array_agree():
    """标量快速路径与数组路径一致"""
    y = np.array([-40.0, -3.0, -0.005, 0.0, 0.002, 0.7, 12.0, 300.0])
    for nu in SYMMETRIC + [SKEWED]:
        array_values = nu.log_mgf(y)
        array_primes = nu.log_mgf_prime(y)
        for i, value in enumerate(y):
            assert abs(nu.log_mgf(float(value)) - array_values[i]) <= 1e-14 * max(1.0, abs(array_values[i]))
            assert abs(nu.log_mgf_prime(float(value)) - array_primes[i]) <= 1e-14


def test_log_mgf_prime_matches_difference():
    """导数与中心差分一致"""
    h = 1e-5
    for nu in SYMMETRIC + [SKEWED]:
        for y in (-8.0, -1.0, -0.004, 0.0, 0.003, 0.5, 2.0, 9.0):
            difference = (nu.log_mgf(y + h) - nu.log_mgf(y - h)) / (2.0 * h)
            assert abs(nu.log_mgf_prime(y) - difference) < 1e-6


def test_sample_moments():
    """采样的一阶、二阶矩"""
    n = 10 ** 6
    rademacher = RademacherDistribution().sample(RngStream(22, 1), n)
    assert set(np.unique(rademacher)) == {-1.0, 1.0}
    assert abs(rademacher.mean()) < 0.004

    uniform = UniformSymmetricDistribution().sample(RngStream(22, 2), n)
    assert np.all(np.abs(uniform) <= 1.0)
    assert 0.330 <= uniform.var() <= 0.337

    gaussian = GaussianDistribution().sample(RngStream(22, 3), n)
    assert abs(gaussian.var() - 1.0) < 0.006

    point = FiniteDiscreteDistribution(atoms=(0.0,), weights=(1.0,))
    assert np.all(point.sample(RngStream(22, 4), 1000) == 0.0)

    skewed = SKEWED.sample(RngStream(22, 5), n)
    assert abs(np.mean(skewed == 3.0) - 0.25) < 0.002

    assert isinstance(RademacherDistribution().sample(RngStream(22, 6)), float)


def test_empirical_mgf():
    """经验矩母函数与 log M 在 4 倍 (delta 方法) 标准误内一致"""
    n = 10 ** 6
    for index, nu in enumerate(SYMMETRIC + [SKEWED]):
        x = nu.sample(RngStream(23, index), n)
        for y in (-1.0, -0.5, 0.5, 1.0):
            values = np.exp(y * x)
            mean = values.mean()
            std_err = values.std(ddof=1) / (math.sqrt(n) * mean)
            assert abs(math.log(mean) - nu.log_mgf(y)) < 4.0 * std_err + 1e-12


def test_recession_slopes():
    """解析递归斜率"""
    rho = math.sqrt(2.0 / math.pi)
    assert GaussianDistribution().mean_abs_gaussian_slope() is None
    assert abs(RademacherDistribution().mean_abs_gaussian_slope() - rho) < 1e-15
    assert abs(UniformSymmetricDistribution().mean_abs_gaussian_slope() - rho) < 1e-15
    assert abs(SYMMETRIC[3].mean_abs_gaussian_slope() - 2.0 * rho) < 1e-15
    assert abs(SKEWED.mean_abs_gaussian_slope() - 2.0 * rho) < 1e-15


def test_discrete_validation():
    """权重必须为正且和为 1"""
    with pytest.raises(DistributionError):
        FiniteDiscreteDistribution(atoms=(0.0, 1.0), weights=(1.5, -0.5))
    with pytest.raises(DistributionError):
        FiniteDiscreteDistribution(atoms=(0.0, 1.0), weights=(0.5, 0.6))
    with pytest.raises(DistributionError):
        FiniteDiscreteDistribution(atoms=(0.0,), weights=(0.5, 0.5))


def test_load_discrete_json():
    """读取 JSON: 轻微偏差重新归一化，明显偏差拒绝"""
    with tempfile.TemporaryDirectory() as tmp:
        path = _write_json(tmp, {'atoms': [{'x': -1, 'p': 0.5}, {'x': 1, 'p': 0.5 + 5e-10}]})
        nu = load_discrete_json(path)
        assert abs(sum(nu.weights) - 1.0) < 1e-15
        assert nu.descriptor() == f'discrete:{path}'
        assert nu == DistributionFactory.create_distribution(f'discrete:{path}')

        path = _write_json(tmp, {'atoms': [{'x': -1, 'p': 0.5}, {'x': 1, 'p': 0.6}]})
        with pytest.raises(DistributionError):
            load_discrete_json(path)

        path = _write_json(tmp, {'points': []})
        with pytest.raises(DistributionError):
            load_discrete_json(path)

    with pytest.raises(DistributionError):
        load_discrete_json(os.path.join(tempfile.gettempdir(), 'no-such-file-projlab.json'))


def test_factory():
    """按名称创建分布，未知名称报错"""
    assert isinstance(DistributionFactory.create_distribution('gaussian'), GaussianDistribution)
    assert isinstance(DistributionFactory.create_distribution('rademacher'), RademacherDistribution)
    assert DistributionFactory.create_distribution('uniform') == UniformSymmetricDistribution()
    with pytest.raises(UnsupportedDistributionError):
        DistributionFactory.create_distribution('cauchy')
    with pytest.raises(DistributionError):
        DistributionFactory.create_distribution('discrete:')


TESTS = [
    test_log_mgf_known_values,
    test_log_mgf_zero_at_origin,
    test_discrete_matches_rademacher,
    test_symmetry_and_convexity,
    test_scalar_and_array_agree,
    test_log_mgf_prime_matches_difference,
    test_sample_moments,
    test_empirical_mgf,
    test_recession_slopes,
    test_discrete_validation,
    test_load_discrete_json,
    test_factory,
]


if __name__ == "__main__":
    sys.exit(run_tests("分布层测试", TESTS))
