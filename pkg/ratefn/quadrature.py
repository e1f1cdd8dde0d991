"""
Gauss-Hermite 求积 (Probabilists' Convention)
职责: 以 Golub-Welsch 方法构造关于标准正态密度的求积规则
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from numerics.linalg import jacobi_eigen

logger = logging.getLogger(__name__)

MIN_ORDER = 2
MAX_ORDER = 512


@dataclass(frozen=True, eq=False)
class HermiteRule:
    """
    m 点规则: E[f(g)] ≈ Σⱼ wⱼ f(xⱼ)，g ~ N(0,1)，对不超过 2m−1 次多项式精确
    """
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def expectation(self, values):
        """对在节点上取值的数组求加权和"""
        return float(np.dot(self.weights, values))


def _orthonormal_hermite(x, order):
    """返回 (p_order(x), p_{order-1}(x))，p_k = He_k / √k!"""
    previous = np.zeros_like(x)
    current = np.ones_like(x)
    for k in range(order):
        previous, current = current, (x * current - math.sqrt(k) * previous) / math.sqrt(k + 1)
    return current, previous


def _polish_nodes(nodes, order, iterations=3):
    """以 Jacobi 特征值为初值做 Newton 迭代: p_m(x) = 0，p_m' = √m·p_{m-1}"""
    x = nodes.copy()
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        for _ in range(iterations):
            value, lower = _orthonormal_hermite(x, order)
            step = value / (math.sqrt(order) * lower)
            x = np.where(np.isfinite(step), x - step, x)
    return x


def _christoffel_weights(nodes, order):
    """w_j = 1 / Σ_{k<m} p_k(x_j)²"""
    previous = np.zeros_like(nodes)
    current = np.ones_like(nodes)
    total = np.ones_like(nodes)
    with np.errstate(over='ignore', invalid='ignore'):
        for k in range(order - 1):
            previous, current = current, (nodes * current - math.sqrt(k) * previous) / math.sqrt(k + 1)
            total += current * current
        return 1.0 / total


def _even_block(order):
    """
    Jacobi 矩阵 T 的平方在偶数下标上的主子块 E = BBᵀ

    T 对角为零，按奇偶下标分块为 [[0, B], [Bᵀ, 0]]，故 E 的特征值 σ² 对应节点 ±σ
    (奇数阶多出的零特征值对应节点 0)，E 的规模约为 order/2。
    """
    size = (order + 1) // 2
    even = 2.0 * np.arange(size)
    diagonal = even + np.where(even <= order - 2, even + 1.0, 0.0)
    upper = np.sqrt((even[:-1] + 1.0) * (even[:-1] + 2.0))
    return np.diag(diagonal) + np.diag(upper, 1) + np.diag(upper, -1)


def _golub_welsch(order):
    """由 E 的特征分解得到升序节点与特征向量权重 (只跟踪特征向量第一行)"""
    eigen = jacobi_eigen(_even_block(order), vector_rows=[0])
    sigma = np.sqrt(np.clip(eigen.eigenvalues, 0.0, None))
    first = eigen.eigenvectors[0] ** 2

    if order % 2:
        # 最小特征值为零: 节点 0 独占该特征向量
        positive, half = sigma[:-1], 0.5 * first[:-1]
        nodes = np.concatenate([-positive, [0.0], positive[::-1]])
        weights = np.concatenate([half, [first[-1]], half[::-1]])
    else:
        half = 0.5 * first
        nodes = np.concatenate([-sigma, sigma[::-1]])
        weights = np.concatenate([half, half[::-1]])
    return nodes, weights, eigen.sweeps


@lru_cache(maxsize=None)
def build_hermite_rule(order):
    """
    构造 order 点 Hermite 规则

    三对角 Jacobi 矩阵的次对角元为 √k (k = 1..m−1)，其特征值即节点，
    第一特征向量分量的平方即权重 (总质量为 1)。对角为零，故只需对 T² 的
    偶数下标子块做 Jacobi 分解。节点再用三项递推做 Newton 修正，权重改取 Christoffel 数。

    Args:
        order: 节点数，2 <= order <= 512

    Returns:
        HermiteRule
    """
    if not MIN_ORDER <= int(order) <= MAX_ORDER:
        raise ValueError(f"求积阶数必须在 [{MIN_ORDER}, {MAX_ORDER}] 内，实际: {order}")
    order = int(order)

    initial, fallback, sweeps = _golub_welsch(order)
    nodes = _polish_nodes(initial, order)
    weights = _christoffel_weights(nodes, order)
    # 递推出现非有限值的节点退回特征向量给出的权重
    weights = np.where(np.isfinite(weights), weights, fallback)

    # 规则关于 0 对称
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    weights = weights / np.sum(weights)

    nodes.setflags(write=False)
    weights.setflags(write=False)
    logger.debug(f"[速率层] 构造 Hermite 规则: 阶数 {order}, Jacobi 扫描 {sweeps} 轮")
    return HermiteRule(order=order, nodes=nodes, weights=weights)
