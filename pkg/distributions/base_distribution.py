"""
分布基类模块 (Base Distribution Module)
定义所有一维分布的通用接口和工厂类
"""

import json
import logging
import math
from abc import ABC, abstractmethod

from utils.errors import DistributionError, UnsupportedDistributionError

logger = logging.getLogger(__name__)

SQRT_TWO_OVER_PI = math.sqrt(2.0 / math.pi)

# JSON 权重和允许的偏差，超出则拒绝而不是重新归一化
_JSON_WEIGHT_TOLERANCE = 1e-9


class NuDistribution(ABC):
    """分布基类 - 子类为不可变、可哈希的数据类"""

    kind = 'base'

    # 矩母函数处处有限的条件对所有内置分布成立，仅作记录不做数值验证
    mgf_condition_documented = True

    @property
    def support_bound(self):
        """支撑界 a (支撑 ⊆ [−a, a])，无界时为 None"""
        return None

    @abstractmethod
    def log_mgf(self, y):
        """
        对数矩母函数 log E[e^{yX}]

        Args:
            y: 标量或数组

        Returns:
            与 y 同形状，y=0 处恰为 0
        """
        pass

    @abstractmethod
    def log_mgf_prime(self, y):
        """对数矩母函数的导数"""
        pass

    @abstractmethod
    def sample(self, stream, size=None):
        """
        从 ν 抽样

        Args:
            stream: RngStream
            size: None 时返回单个浮点数，否则返回该形状的数组
        """
        pass

    def atoms_and_weights(self):
        """有限支撑分布返回 (atoms, weights)，否则为 None"""
        return None

    def mean_abs_gaussian_slope(self):
        """解析递归斜率 a·√(2/π)，支撑无界时为 None"""
        bound = self.support_bound
        if bound is None:
            return None
        return bound * SQRT_TWO_OVER_PI

    def descriptor(self):
        return self.kind

    def describe(self):
        """用于输出元数据的描述字典"""
        return {
            'kind': self.kind,
            'support_bound': self.support_bound,
            'mgf_condition_documented': self.mgf_condition_documented,
        }


def load_discrete_json(path):
    """
    读取 {"atoms":[{"x":…,"p":…},…]} 格式的有限离散分布

    权重和在 [1−1e-9, 1+1e-9] 内时重新归一化，否则拒绝。

    Returns:
        FiniteDiscreteDistribution
    """
    from .builtin_distributions import FiniteDiscreteDistribution

    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = json.load(f)
    except OSError as e:
        raise DistributionError(f"无法读取分布文件 {path}: {e}")
    except json.JSONDecodeError as e:
        raise DistributionError(f"分布文件不是合法 JSON {path}: {e}")

    entries = document.get('atoms') if isinstance(document, dict) else None
    if not entries:
        raise DistributionError(f"分布文件缺少 atoms 列表: {path}")

    try:
        atoms = [float(entry['x']) for entry in entries]
        weights = [float(entry['p']) for entry in entries]
    except (KeyError, TypeError, ValueError) as e:
        raise DistributionError(f"atoms 条目必须包含数值字段 x 和 p: {e}")

    total = math.fsum(weights)
    if abs(total - 1.0) > _JSON_WEIGHT_TOLERANCE:
        raise DistributionError(f"权重和 {total!r} 偏离 1 超过 {_JSON_WEIGHT_TOLERANCE}")
    weights = [w / total for w in weights]

    logger.info(f"[分布层] 已读取离散分布 {path}: {len(atoms)} 个原子")
    return FiniteDiscreteDistribution(atoms=tuple(atoms), weights=tuple(weights), source=str(path))


class DistributionFactory:
    """分布工厂 - 由描述字符串创建分布实例"""

    @staticmethod
    def create_distribution(descriptor):
        """
        根据描述创建分布

        Args:
            descriptor: gaussian | rademacher | uniform | discrete:<path>

        Returns:
            NuDistribution: 分布实例
        """
        from .builtin_distributions import (
            GaussianDistribution, RademacherDistribution, UniformSymmetricDistribution
        )

        name = str(descriptor).strip()
        if name.startswith('discrete:'):
            path = name[len('discrete:'):]
            if not path:
                raise DistributionError("discrete: 之后需要给出 JSON 文件路径")
            return load_discrete_json(path)

        distributions = {
            'gaussian': GaussianDistribution,
            'rademacher': RademacherDistribution,
            'uniform': UniformSymmetricDistribution,
            'uniform_symmetric': UniformSymmetricDistribution,
        }

        distribution_class = distributions.get(name)

        if distribution_class is None:
            available = ', '.join(list(distributions.keys()) + ['discrete:<path>'])
            raise UnsupportedDistributionError(f"不支持的分布: {name}。可用分布: {available}")

        return distribution_class()
