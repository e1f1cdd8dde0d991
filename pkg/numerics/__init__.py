"""
数值层 (Core Numerics)
职责: 可复现的高斯采样与小规模稠密线性代数 (Gram、对称特征分解、逆平方根、行列式)
"""

from .rng import (
    RngStream,
    sample_standard_normal,
    sample_gaussian_matrix,
    derive_stream_id,
)
from .linalg import (
    SymmetricEigen,
    as_dense_matrix,
    jacobi_eigen,
    symmetric_power,
    check_positive_definite,
    inverse_sqrt_sym,
    sqrt_sym,
    gram_determinant,
    gram_determinants,
)

__all__ = [
    'RngStream',
    'sample_standard_normal',
    'sample_gaussian_matrix',
    'derive_stream_id',
    'SymmetricEigen',
    'as_dense_matrix',
    'jacobi_eigen',
    'symmetric_power',
    'check_positive_definite',
    'inverse_sqrt_sym',
    'sqrt_sym',
    'gram_determinant',
    'gram_determinants',
]
