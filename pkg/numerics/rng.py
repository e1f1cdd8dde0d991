"""
随机数流 (Random Streams)
职责: 基于 (master_seed, stream_id) 派生独立随机流，保证并行试验可复现
"""

import logging

import numpy as np

from utils.errors import DimensionError

logger = logging.getLogger(__name__)

_MAX_UINT64 = 2 ** 64

# 每次补充正态缓冲区时生成的候选点对数，固定不变以保证序列与调用方式无关
_POLAR_BLOCK_PAIRS = 16384

# stream_id 位域: tag(16位) | trial(24位) | index(24位)
_TAG_BITS = 16
_TRIAL_BITS = 24
_INDEX_BITS = 24


def derive_stream_id(tag, trial=0, index=0):
    """
    由 (tag, trial, index) 组合出 64 位 stream_id

    Args:
        tag: 用途标签 (例如 1=框架, 2=样本)
        trial: 试验编号
        index: 序号 (通常为 n)

    Returns:
        int: stream_id
    """
    if not 0 <= tag < 2 ** _TAG_BITS:
        raise ValueError(f"tag 超出范围: {tag}")
    if not 0 <= trial < 2 ** _TRIAL_BITS:
        raise ValueError(f"trial 超出范围: {trial}")
    if not 0 <= index < 2 ** _INDEX_BITS:
        raise ValueError(f"index 超出范围: {index}")
    return (tag << (_TRIAL_BITS + _INDEX_BITS)) | (trial << _INDEX_BITS) | index


class RngStream:
    """单一所有者的随机流 - Philox 计数器生成器 + 极坐标法正态采样"""

    def __init__(self, master_seed, stream_id=0):
        """
        初始化随机流

        Args:
            master_seed: 64 位主种子
            stream_id: 64 位流编号
        """
        if not 0 <= int(master_seed) < _MAX_UINT64:
            raise ValueError(f"master_seed 必须是 64 位非负整数: {master_seed}")
        if not 0 <= int(stream_id) < _MAX_UINT64:
            raise ValueError(f"stream_id 必须是 64 位非负整数: {stream_id}")

        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        seed_sequence = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.stream_id,)
        )
        self._generator = np.random.Generator(np.random.Philox(seed_sequence))
        self._normal_buffer = np.empty(0)
        self._normal_position = 0

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

    def _polar_block(self):
        """极坐标拒绝法生成一块正态样本 (整对产生)"""
        uv = 2.0 * self._generator.random((_POLAR_BLOCK_PAIRS, 2)) - 1.0
        radius_sq = uv[:, 0] ** 2 + uv[:, 1] ** 2
        accepted = (radius_sq > 0.0) & (radius_sq < 1.0)
        uv = uv[accepted]
        radius_sq = radius_sq[accepted]
        factor = np.sqrt(-2.0 * np.log(radius_sq) / radius_sq)
        return (uv * factor[:, None]).ravel()

    def normals(self, size):
        """
        抽取标准正态样本

        Args:
            size: 样本个数或形状

        Returns:
            np.ndarray: 指定形状的 N(0,1) 样本
        """
        shape = (size,) if np.isscalar(size) else tuple(size)
        count = int(np.prod(shape, dtype=np.int64))
        available = len(self._normal_buffer) - self._normal_position
        if available < count:
            blocks = [self._normal_buffer[self._normal_position:]]
            while available < count:
                blocks.append(self._polar_block())
                available += len(blocks[-1])
            self._normal_buffer = np.concatenate(blocks)
            self._normal_position = 0
        start = self._normal_position
        self._normal_position += count
        return self._normal_buffer[start:start + count].reshape(shape).copy()

    def uniform(self, size=None):
        """[0,1) 上的均匀样本"""
        return self._generator.random(size)

    def integers(self, low, high, size=None):
        """[low, high) 上的均匀整数"""
        return self._generator.integers(low, high, size=size)


def sample_standard_normal(stream):
    """抽取一个标准正态样本"""
    return float(stream.normals(1)[0])


def sample_gaussian_matrix(stream, d, n):
    """
    按行优先顺序生成 d×n 的独立标准正态矩阵

    Args:
        stream: RngStream
        d: 行数 (投影维数)
        n: 列数 (环境维数)

    Returns:
        np.ndarray: 形状 (d, n)
    """
    if d < 1 or n < 1:
        raise DimensionError(f"维数必须为正: d={d}, n={n}")
    if d > n:
        raise DimensionError(f"要求 d <= n，实际 d={d}, n={n}")
    return stream.normals(d * n).reshape(d, n)
