"""
Stiefel 框架 (Stiefel Frames)
职责: 由高斯矩阵 G 构造 I* = (GG*)^{-1/2}G，并提供均匀投影与高斯投影
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from numerics.linalg import (
    SymmetricEigen, as_dense_matrix, jacobi_eigen, symmetric_power,
    check_positive_definite,
)
from numerics.rng import sample_gaussian_matrix
from utils.errors import DimensionError

logger = logging.getLogger(__name__)


def _frozen(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StiefelFrame:
    """
    正交 d-框架 (构造后不可变，可在读者之间共享)

    Attributes:
        g: 生成矩阵 G (d×n)
        i_star: I* = (GG*)^{-1/2}G (d×n)，行向量正交规范
        scale_to_identity: (1/√n)(GG*)^{1/2} (d×d)
        gram_eigen: GG* 的特征分解
    """
    g: np.ndarray
    i_star: np.ndarray
    scale_to_identity: np.ndarray
    gram_eigen: SymmetricEigen

    @classmethod
    def from_gaussian(cls, g):
        """
        由 d×n 矩阵构造框架

        Raises:
            DimensionError: d > n
            SingularMatrixError: GG* 数值奇异
        """
        g = as_dense_matrix(g)
        d, n = g.shape
        if d > n:
            raise DimensionError(f"要求 d <= n，实际 d={d}, n={n}")

        gram = g @ g.T
        eigen = jacobi_eigen(0.5 * (gram + gram.T))
        check_positive_definite(eigen)

        inverse_sqrt = symmetric_power(eigen, -0.5)
        i_star = inverse_sqrt @ g
        scale = symmetric_power(eigen, 0.5) / math.sqrt(n)
        return cls(g=_frozen(g.copy()), i_star=_frozen(i_star),
                   scale_to_identity=_frozen(scale), gram_eigen=eigen)

    @property
    def d(self):
        return self.g.shape[0]

    @property
    def n(self):
        return self.g.shape[1]

    def _check_points(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0 or x.shape[-1] != self.n:
            raise DimensionError(f"输入维数应为 n={self.n}，实际形状: {x.shape}")
        return x

    def project_uniform(self, x):
        """
        (1/√n)·I*·x，x 可以是单个向量 (n,) 或按行堆叠的批次 (m, n)
        """
        x = self._check_points(x)
        return (x @ self.i_star.T) / math.sqrt(self.n)

    def project_gaussian(self, x):
        """(1/n)·G·x"""
        x = self._check_points(x)
        return (x @ self.g.T) / self.n

    def scale_inverse(self):
        """((1/√n)(GG*)^{1/2})⁻¹ = √n·(GG*)^{-1/2}"""
        return symmetric_power(self.gram_eigen, -0.5) * math.sqrt(self.n)

    def scale_drift_norm(self):
        """‖(1/√n)(GG*)^{1/2} − Id‖_op = max_i |√(λ_i/n) − 1|"""
        eigenvalues = np.clip(self.gram_eigen.eigenvalues, 0.0, None)
        return float(np.max(np.abs(np.sqrt(eigenvalues / self.n) - 1.0)))


def sample_frame(stream, d, n):
    """
    从新的高斯矩阵构造 Stiefel 框架 (在 Stiefel 流形上均匀分布)

    Args:
        stream: RngStream
        d: 投影维数
        n: 环境维数

    Returns:
        StiefelFrame
    """
    g = sample_gaussian_matrix(stream, d, n)
    frame = StiefelFrame.from_gaussian(g)
    logger.debug(f"[几何层] 采样框架 d={d}, n={n}, 漂移={frame.scale_drift_norm():.4e}")
    return frame
