"""
投影立方体 (Zonotopes)
职责: I*([−1,1]ⁿ) = ⊕ᵢ[−vᵢ, vᵢ] 的支撑函数、到极限球的 Hausdorff 距离、内禀体积
"""

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma

from config import GEOMETRY_CONFIG
from numerics.linalg import gram_determinants
from numerics.rng import RngStream, derive_stream_id
from utils.errors import DimensionError, BudgetExceededError

logger = logging.getLogger(__name__)

# E|g| = √(2/π)
LIMIT_RADIUS = math.sqrt(2.0 / math.pi)

# 随机方向网格使用的流标签
_GRID_STREAM_TAG = 0x6772


@dataclass(frozen=True, eq=False)
class Zonotope:
    """线段 Minkowski 和，generators 形状为 (n, d)，每行一个生成元"""
    generators: np.ndarray

    def __post_init__(self):
        generators = np.array(self.generators, dtype=float)
        if generators.ndim != 2 or generators.shape[0] < 1:
            raise DimensionError(f"生成元需为非空 (n, d) 数组，实际形状: {generators.shape}")
        generators.setflags(write=False)
        object.__setattr__(self, 'generators', generators)

    @classmethod
    def from_frame(cls, frame):
        """生成元取 I* 的各列 (不缩放)"""
        return cls(generators=frame.i_star.T)

    @classmethod
    def from_gaussian_frame(cls, frame):
        """高斯情形: 生成元取 G 的各列，配合缩放 1/n 使用"""
        return cls(generators=frame.g.T)

    @property
    def d(self):
        return self.generators.shape[1]

    @property
    def n(self):
        return self.generators.shape[0]

    def support_function(self, u, chunk_size=None):
        """
        h(u) = Σᵢ |⟨u, vᵢ⟩|

        Args:
            u: 单个方向 (d,) 或方向批次 (m, d)
            chunk_size: 每块处理的 方向数×生成元数 上限

        Returns:
            float 或 np.ndarray (m,)
        """
        u = np.asarray(u, dtype=float)
        if u.ndim == 0 or u.shape[-1] != self.d:
            raise DimensionError(f"方向维数应为 d={self.d}，实际形状: {u.shape}")
        if u.ndim == 1:
            return float(np.sum(np.abs(self.generators @ u)))

        chunk_size = GEOMETRY_CONFIG['chunk_size'] if chunk_size is None else chunk_size
        rows = max(1, chunk_size // self.n)
        values = np.empty(u.shape[0])
        # 固定分块，保证归约顺序与调度无关
        for start in range(0, u.shape[0], rows):
            block = u[start:start + rows] @ self.generators.T
            values[start:start + rows] = np.sum(np.abs(block), axis=1)
        return values


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """单位方向网格，总是包含 ±e₁,…,±e_d"""
    d: int
    directions: np.ndarray
    descriptor: str = ''

    @classmethod
    def build(cls, d, count=None, seed=None):
        """
        按维数构造网格: d=2 等角度，d=3 Fibonacci 球面点，d>=4 种子随机方向

        Args:
            d: 维数
            count: 网格规模 (默认取 GEOMETRY_CONFIG)
            seed: d>=4 时随机方向的种子
        """
        if d < 1:
            raise DimensionError(f"维数必须为正: d={d}")
        axes = np.vstack([np.eye(d), -np.eye(d)])

        if d == 1:
            return cls(d=1, directions=np.array([[1.0], [-1.0]]), descriptor='axis:2')

        if d == 2:
            count = GEOMETRY_CONFIG['grid_count_2d'] if count is None else count
            # 取 4 的倍数，使坐标轴方向落在网格上
            count = 4 * max(1, math.ceil(count / 4))
            angles = 2.0 * math.pi * np.arange(count) / count
            directions = np.column_stack([np.cos(angles), np.sin(angles)])
            quarter = count // 4
            directions[0::quarter] = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
            return cls(d=2, directions=directions, descriptor=f'angular:{count}')

        if d == 3:
            count = GEOMETRY_CONFIG['grid_count_3d'] if count is None else count
            index = np.arange(count)
            z = 1.0 - (2.0 * index + 1.0) / count
            radius = np.sqrt(1.0 - z * z)
            phi = index * math.pi * (3.0 - math.sqrt(5.0))
            points = np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])
            descriptor = f'fibonacci:{count}+axes'
        else:
            count = GEOMETRY_CONFIG['grid_count_nd'] if count is None else count
            seed = GEOMETRY_CONFIG['grid_seed'] if seed is None else seed
            stream = RngStream(seed, derive_stream_id(_GRID_STREAM_TAG, index=d))
            points = stream.normals((count, d))
            descriptor = f'random:{count}+axes(seed={seed})'

        points = points / np.linalg.norm(points, axis=1, keepdims=True)
        return cls(d=d, directions=np.vstack([points, axes]), descriptor=descriptor)

    def __len__(self):
        return self.directions.shape[0]


@dataclass(frozen=True)
class LimitBall:
    """中心球 B(0, radius)，默认半径 √(2/π)"""
    d: int
    radius: float = LIMIT_RADIUS

    def support_function(self, u):
        u = np.asarray(u, dtype=float)
        if u.ndim == 1:
            return self.radius * float(np.linalg.norm(u))
        return self.radius * np.linalg.norm(u, axis=-1)


def limit_support_function(u):
    """E|⟨u, X⟩| (X ~ N(0, I_d)) = √(2/π)‖u‖"""
    u = np.asarray(u, dtype=float)
    return LimitBall(d=u.shape[-1]).support_function(u)


def hausdorff_to_ball(body, scale, ball, grid):
    """
    d_H(scale·body, ball) 在方向网格上的估计: max_u |scale·h_body(u) − h_ball(u)|

    Args:
        body: 任何带 support_function 的凸体 (Zonotope / LimitBall)
        scale: 缩放因子 (均匀框架取 1/√n，高斯情形取 1/n)
        ball: LimitBall
        grid: DirectionGrid
    """
    if scale <= 0:
        raise ValueError(f"缩放因子必须为正: {scale}")
    if len(grid) == 0:
        raise DimensionError("方向网格为空")
    if grid.d != ball.d:
        raise DimensionError(f"网格维数 {grid.d} 与球维数 {ball.d} 不一致")
    body_values = np.asarray(body.support_function(grid.directions), dtype=float)
    ball_values = np.asarray(ball.support_function(grid.directions), dtype=float)
    return float(np.max(np.abs(scale * body_values - ball_values)))


@dataclass
class IntrinsicVolumeEstimate:
    """内禀体积估计值"""
    value: float
    std_err: float = 0.0
    samples: int = 0
    estimator: str = 'exact'
    extra: dict = field(default_factory=dict)


def _check_order(zonotope, k):
    if not 1 <= k <= zonotope.d:
        raise DimensionError(f"要求 1 <= k <= d，实际 k={k}, d={zonotope.d}")


def intrinsic_volume_exact(zonotope, k, budget=None, chunk_size=None):
    """
    V_k = 2ᵏ Σ_{|S|=k} √det Gram(v_S)，枚举全部 k 元子集

    Raises:
        BudgetExceededError: C(n,k) 超出预算
    """
    _check_order(zonotope, k)
    budget = GEOMETRY_CONFIG['intrinsic_budget'] if budget is None else budget
    chunk_size = GEOMETRY_CONFIG['chunk_size'] if chunk_size is None else chunk_size
    total = math.comb(zonotope.n, k)
    if total > budget:
        raise BudgetExceededError(total, budget, hint="请改用蒙特卡洛估计 intrinsic_volume_mc")

    generators = zonotope.generators
    combos = itertools.combinations(range(zonotope.n), k)
    accumulated = 0.0
    remaining = total
    while remaining > 0:
        batch = min(chunk_size, remaining)
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, batch)),
                           dtype=np.intp, count=batch * k)
        subsets = flat.reshape(batch, k)
        accumulated += float(np.sum(gram_determinants(generators[subsets])))
        remaining -= batch

    return (2.0 ** k) * accumulated


def _sample_subsets(stream, n, k, samples):
    """均匀抽取 k 元子集 (拒绝含重复下标的行)"""
    collected = []
    filled = 0
    while filled < samples:
        block = stream.integers(0, n, size=(samples, k))
        if k > 1:
            ordered = np.sort(block, axis=1)
            distinct = np.all(ordered[:, 1:] != ordered[:, :-1], axis=1)
            block = block[distinct]
        collected.append(block[:samples - filled])
        filled += len(collected[-1])
    return np.vstack(collected)


def intrinsic_volume_mc(zonotope, k, samples, stream):
    """
    无偏估计 2ᵏ·C(n,k)·mean √det Gram(v_S)，S 为均匀随机 k 元子集

    Returns:
        IntrinsicVolumeEstimate: 估计值与样本标准误
    """
    _check_order(zonotope, k)
    if k > zonotope.n:
        raise DimensionError(f"k={k} 超过生成元个数 n={zonotope.n}")
    if samples < 100:
        raise ValueError(f"样本数至少为 100，实际: {samples}")

    subsets = _sample_subsets(stream, zonotope.n, k, samples)
    volumes = gram_determinants(zonotope.generators[subsets])
    factor = (2.0 ** k) * math.comb(zonotope.n, k)
    std_err = factor * float(np.std(volumes, ddof=1)) / math.sqrt(samples)
    return IntrinsicVolumeEstimate(value=factor * float(np.mean(volumes)),
                                   std_err=std_err, samples=samples, estimator='mc')


def intrinsic_volume_limit(d, k):
    """
    V_k(Z_n)/n^{k/2} 的极限常数 2^{k/2}·C(d,k)·Γ(1+(d−k)/2)/Γ(1+d/2)
    """
    if not 1 <= k <= d:
        raise DimensionError(f"要求 1 <= k <= d，实际 k={k}, d={d}")
    return float(2.0 ** (k / 2.0) * math.comb(d, k) * gamma(1.0 + (d - k) / 2.0) / gamma(1.0 + d / 2.0))
