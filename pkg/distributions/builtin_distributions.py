"""
内置分布 (Built-in Distributions)
高斯、Rademacher、对称均匀分布与有限离散分布

对数矩母函数均采用不溢出的形式，速率函数在 |y| ~ 10³ 处仍会调用。
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp, softmax

from numerics.rng import sample_standard_normal
from utils.errors import DistributionError
from .base_distribution import NuDistribution, SQRT_TWO_OVER_PI

logger = logging.getLogger(__name__)

LOG_TWO = math.log(2.0)

# sinh(y)/y 改用级数展开的阈值
_SERIES_CUTOFF = 1e-2


def _is_scalar(y):
    return np.ndim(y) == 0


@dataclass(frozen=True)
class GaussianDistribution(NuDistribution):
    """标准正态分布 N(0,1): log M(y) = y²/2"""

    kind = 'gaussian'

    def log_mgf(self, y):
        if _is_scalar(y):
            return 0.5 * float(y) * float(y)
        y = np.asarray(y, dtype=float)
        return 0.5 * y * y

    def log_mgf_prime(self, y):
        if _is_scalar(y):
            return float(y)
        return np.asarray(y, dtype=float).copy()

    def sample(self, stream, size=None):
        if size is None:
            return sample_standard_normal(stream)
        return stream.normals(size)


@dataclass(frozen=True)
class RademacherDistribution(NuDistribution):
    """±1 等概率: log M(y) = log cosh(y) = |y| + log((1+e^{−2|y|})/2)"""

    kind = 'rademacher'

    @property
    def support_bound(self):
        return 1.0

    def log_mgf(self, y):
        if _is_scalar(y):
            a = abs(float(y))
            if a == 0.0:
                return 0.0
            return a + math.log1p(math.exp(-2.0 * a)) - LOG_TWO
        a = np.abs(np.asarray(y, dtype=float))
        value = a + np.log1p(np.exp(-2.0 * a)) - LOG_TWO
        return np.where(a == 0.0, 0.0, value)

    def log_mgf_prime(self, y):
        if _is_scalar(y):
            return math.tanh(float(y))
        return np.tanh(np.asarray(y, dtype=float))

    def sample(self, stream, size=None):
        bits = stream.integers(0, 2, size=size)
        values = 2.0 * bits - 1.0
        return float(values) if size is None else values

    def atoms_and_weights(self):
        return np.array([-1.0, 1.0]), np.array([0.5, 0.5])


@dataclass(frozen=True)
class UniformSymmetricDistribution(NuDistribution):
    """U[−1,1]: log M(y) = log(sinh(y)/y)"""

    kind = 'uniform_symmetric'

    @property
    def support_bound(self):
        return 1.0

    def log_mgf(self, y):
        if _is_scalar(y):
            a = abs(float(y))
            if a == 0.0:
                return 0.0
            if a < _SERIES_CUTOFF:
                a2 = a * a
                return math.log1p(a2 / 6.0 + a2 * a2 / 120.0)
            # log(sinh a / a) = a + log((1 − e^{−2a}) / (2a))
            return a + math.log(-math.expm1(-2.0 * a) / (2.0 * a))

        a = np.abs(np.asarray(y, dtype=float))
        small = a < _SERIES_CUTOFF
        a_safe = np.where(small, 1.0, a)
        a2 = a * a
        series = np.log1p(a2 / 6.0 + a2 * a2 / 120.0)
        closed = a_safe + np.log(-np.expm1(-2.0 * a_safe) / (2.0 * a_safe))
        value = np.where(small, series, closed)
        return np.where(a == 0.0, 0.0, value)

    def log_mgf_prime(self, y):
        # coth(y) − 1/y，零点附近用 y/3 − y³/45 + 2y⁵/945
        if _is_scalar(y):
            y = float(y)
            a = abs(y)
            if a < _SERIES_CUTOFF:
                return y / 3.0 - y ** 3 / 45.0 + 2.0 * y ** 5 / 945.0
            return math.copysign(1.0 / math.tanh(a) - 1.0 / a, y)

        y = np.asarray(y, dtype=float)
        a = np.abs(y)
        small = a < _SERIES_CUTOFF
        a_safe = np.where(small, 1.0, a)
        series = y / 3.0 - y ** 3 / 45.0 + 2.0 * y ** 5 / 945.0
        closed = np.sign(y) * (1.0 / np.tanh(a_safe) - 1.0 / a_safe)
        return np.where(small, series, closed)

    def sample(self, stream, size=None):
        values = 2.0 * stream.uniform(size) - 1.0
        return float(values) if size is None else values


@dataclass(frozen=True)
class FiniteDiscreteDistribution(NuDistribution):
    """
    有限离散分布 Σⱼ pⱼ δ_{xⱼ}

    Attributes:
        atoms: 原子位置
        weights: 正权重，和为 1 (误差 1e-12 以内)
        source: 来源文件 (不参与比较)
    """
    atoms: tuple
    weights: tuple
    source: str = field(default='', compare=False)

    kind = 'finite_discrete'

    def __post_init__(self):
        atoms = tuple(float(x) for x in self.atoms)
        weights = tuple(float(p) for p in self.weights)
        if len(atoms) == 0 or len(atoms) != len(weights):
            raise DistributionError(f"原子数 {len(atoms)} 与权重数 {len(weights)} 不一致或为空")
        if not all(math.isfinite(x) for x in atoms):
            raise DistributionError("原子位置必须有限")
        if not all(p > 0.0 and math.isfinite(p) for p in weights):
            raise DistributionError(f"权重必须为正: {weights}")
        total = math.fsum(weights)
        if abs(total - 1.0) > 1e-12:
            raise DistributionError(f"权重和必须为 1，实际: {total!r}")
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'weights', weights)

    @property
    def support_bound(self):
        return max(abs(x) for x in self.atoms)

    def mean_abs_gaussian_slope(self):
        """Ψ(s) 的线性增长率 ((max − min)/2)·√(2/π)，对称分布时即 a·√(2/π)"""
        return 0.5 * (max(self.atoms) - min(self.atoms)) * SQRT_TWO_OVER_PI

    def _arrays(self):
        return np.asarray(self.atoms), np.asarray(self.weights)

    def log_mgf(self, y):
        atoms, weights = self._arrays()
        scalar = _is_scalar(y)
        y = np.asarray(y, dtype=float)
        value = logsumexp(y[..., None] * atoms, b=weights, axis=-1)
        value = np.where(y == 0.0, 0.0, value)
        return float(value) if scalar else value

    def log_mgf_prime(self, y):
        atoms, weights = self._arrays()
        scalar = _is_scalar(y)
        y = np.asarray(y, dtype=float)
        tilted = softmax(y[..., None] * atoms + np.log(weights), axis=-1)
        value = tilted @ atoms
        return float(value) if scalar else value

    def sample(self, stream, size=None):
        atoms, weights = self._arrays()
        cumulative = np.cumsum(weights)
        u = stream.uniform(size)
        index = np.minimum(np.searchsorted(cumulative, u, side='right'), len(atoms) - 1)
        values = atoms[index]
        return float(values) if size is None else values

    def atoms_and_weights(self):
        return self._arrays()

    def descriptor(self):
        return f'discrete:{self.source}' if self.source else self.kind

    def describe(self):
        info = super().describe()
        info['atoms'] = list(self.atoms)
        info['weights'] = list(self.weights)
        return info
