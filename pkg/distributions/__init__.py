"""
分布层 (Distributions)
职责: 一维分布 ν 的注册表 - 采样器、对数矩母函数及其导数
"""

from .base_distribution import NuDistribution, DistributionFactory, load_discrete_json
from .builtin_distributions import (
    GaussianDistribution,
    RademacherDistribution,
    UniformSymmetricDistribution,
    FiniteDiscreteDistribution,
)

__all__ = [
    'NuDistribution',
    'DistributionFactory',
    'load_discrete_json',
    'GaussianDistribution',
    'RademacherDistribution',
    'UniformSymmetricDistribution',
    'FiniteDiscreteDistribution',
]
