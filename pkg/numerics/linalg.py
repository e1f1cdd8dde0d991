"""
线性代数 (Dense Linear Algebra)
职责: 对称特征分解 (并行循环 Jacobi)、谱函数、Gram 行列式
"""

import logging
from dataclasses import dataclass

import numpy as np

from config import LINALG_CONFIG
from utils.errors import ShapeError, SingularMatrixError, DimensionError, ConvergenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SymmetricEigen:
    """对称特征分解结果: 特征值降序，特征向量按列正交 (只跟踪部分行时为这些行)"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self):
        """V·diag(λ)·Vᵀ"""
        v = self.eigenvectors
        if v.shape[0] != v.shape[1]:
            raise ShapeError(f"只保留了 {v.shape[0]} 行特征向量，无法重构")
        return (v * self.eigenvalues) @ v.T


def as_dense_matrix(a):
    """
    转换为二维有限浮点矩阵

    Raises:
        ShapeError: 维数不是2、为空或含非有限值
    """
    matrix = np.array(a, dtype=float)
    if matrix.ndim != 2:
        raise ShapeError(f"需要二维矩阵，实际维数: {matrix.ndim}")
    if matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise ShapeError(f"矩阵为空: 形状 {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ShapeError("矩阵含有非有限值")
    return matrix


def _round_robin_schedule(size):
    """
    生成一轮扫描的循环赛配对 (每一步的配对互不相交)

    Returns:
        list: 每步一对 (p 索引数组, q 索引数组)，p < q
    """
    players = list(range(size + (size % 2)))
    half = len(players) // 2
    schedule = []
    for _ in range(len(players) - 1):
        p_list, q_list = [], []
        for i in range(half):
            a, b = players[i], players[-1 - i]
            # 奇数阶时多出的虚拟下标轮空
            if a >= size or b >= size:
                continue
            p_list.append(min(a, b))
            q_list.append(max(a, b))
        schedule.append((np.array(p_list, dtype=np.intp), np.array(q_list, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return schedule


def _off_diagonal_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigen(a, tolerance=None, max_sweeps=None, vector_rows=None):
    """
    并行循环 Jacobi 对称特征分解

    每一步对一组互不相交的 (p, q) 同时施加旋转，直到非对角 Frobenius 范数
    小于 tolerance × max(1, ‖A‖_F)。

    Args:
        a: 对称方阵
        tolerance: 收敛阈值 (默认取 LINALG_CONFIG)
        max_sweeps: 最大扫描轮数
        vector_rows: 只跟踪特征向量矩阵的这些行 (V ← V·J 逐行独立)，默认全部

    Returns:
        SymmetricEigen: 特征值降序排列

    Raises:
        ConvergenceError: max_sweeps 轮后仍未收敛
    """
    tolerance = LINALG_CONFIG['jacobi_tolerance'] if tolerance is None else tolerance
    max_sweeps = LINALG_CONFIG['jacobi_max_sweeps'] if max_sweeps is None else max_sweeps

    matrix = as_dense_matrix(a)
    rows, cols = matrix.shape
    if rows != cols:
        raise ShapeError(f"需要方阵，实际形状: {matrix.shape}")
    scale = max(1.0, float(np.max(np.abs(matrix))))
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if asymmetry > LINALG_CONFIG['symmetry_tolerance'] * scale:
        raise ShapeError(f"矩阵不对称: 最大偏差 {asymmetry:.3e}")

    work = 0.5 * (matrix + matrix.T)
    vectors = np.eye(rows)
    if vector_rows is not None:
        vectors = vectors[np.atleast_1d(np.asarray(vector_rows, dtype=np.intp))]
    threshold = tolerance * max(1.0, float(np.linalg.norm(work)))
    schedule = _round_robin_schedule(rows)

    sweeps = 0
    while _off_diagonal_norm(work) >= threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi 未在 {max_sweeps} 轮内收敛, "
                                   f"非对角范数 = {_off_diagonal_norm(work):.3e}")
        for p, q in schedule:
            if len(p) == 0:
                continue
            apq = work[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            app = work[p, p]
            aqq = work[q, q]

            theta = (aqq - app) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            # A ← A·J
            col_p = work[:, p].copy()
            col_q = work[:, q].copy()
            work[:, p] = c * col_p - s * col_q
            work[:, q] = s * col_p + c * col_q
            # A ← Jᵀ·A
            row_p = work[p, :].copy()
            row_q = work[q, :].copy()
            work[p, :] = c[:, None] * row_p - s[:, None] * row_q
            work[q, :] = s[:, None] * row_p + c[:, None] * row_q
            work[p, q] = 0.0
            work[q, p] = 0.0
            # V ← V·J
            vec_p = vectors[:, p].copy()
            vec_q = vectors[:, q].copy()
            vectors[:, p] = c * vec_p - s * vec_q
            vectors[:, q] = s * vec_p + c * vec_q
        sweeps += 1

    eigenvalues = np.diag(work).copy()
    order = np.argsort(-eigenvalues, kind='stable')
    return SymmetricEigen(eigenvalues=eigenvalues[order],
                          eigenvectors=vectors[:, order],
                          sweeps=sweeps)


def symmetric_power(eigen, power):
    """
    由已有特征分解构造 V·diag(λ^power)·Vᵀ (结果对称化)
    """
    v = eigen.eigenvectors
    result = (v * eigen.eigenvalues ** power) @ v.T
    return 0.5 * (result + result.T)


def check_positive_definite(eigen, cutoff=None):
    """最小特征值需大于 cutoff × 最大特征值，否则抛出 SingularMatrixError"""
    cutoff = LINALG_CONFIG['singular_cutoff'] if cutoff is None else cutoff
    largest = float(eigen.eigenvalues[0])
    smallest = float(eigen.eigenvalues[-1])
    if largest <= 0.0 or smallest <= cutoff * largest:
        raise SingularMatrixError(smallest)


def inverse_sqrt_sym(a, cutoff=None):
    """
    对称正定矩阵的逆平方根 V·diag(λ^{-1/2})·Vᵀ

    Raises:
        SingularMatrixError: 最小特征值 <= cutoff × 最大特征值
    """
    eigen = jacobi_eigen(a)
    check_positive_definite(eigen, cutoff)
    return symmetric_power(eigen, -0.5)


def sqrt_sym(a, cutoff=None):
    """对称正定矩阵的平方根"""
    eigen = jacobi_eigen(a)
    check_positive_definite(eigen, cutoff)
    return symmetric_power(eigen, 0.5)


def _volume_from_gram_eigenvalues(eigenvalues):
    # 数值零特征值截断为 0，退化向量组返回精确 0
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    largest = np.max(eigenvalues, axis=-1, keepdims=True)
    cutoff = LINALG_CONFIG['singular_cutoff'] * np.maximum(largest, 0.0)
    clipped = np.where(eigenvalues <= cutoff, 0.0, eigenvalues)
    return np.sqrt(np.prod(clipped, axis=-1))


def gram_determinant(vectors):
    """
    向量组张成的平行体的 k 维体积 √det(VᵀV)

    Args:
        vectors: k 个 d 维向量 (形状 k×d)

    Returns:
        float: 体积，退化时为 0
    """
    stack = as_dense_matrix(vectors)
    k, d = stack.shape
    if k > d:
        raise DimensionError(f"向量个数 k={k} 超过维数 d={d}")
    gram = stack @ stack.T
    eigen = jacobi_eigen(0.5 * (gram + gram.T))
    return float(_volume_from_gram_eigenvalues(eigen.eigenvalues))


def gram_determinants(stacks):
    """
    批量计算 Gram 体积

    Args:
        stacks: 形状 (B, k, d) 的向量组批次

    Returns:
        np.ndarray: 形状 (B,)
    """
    stacks = np.asarray(stacks, dtype=float)
    if stacks.ndim != 3:
        raise ShapeError(f"需要三维数组 (B, k, d)，实际形状: {stacks.shape}")
    if stacks.shape[1] == 1:
        return np.sqrt(np.einsum('bij,bij->b', stacks, stacks))
    grams = stacks @ np.swapaxes(stacks, 1, 2)
    eigenvalues = np.linalg.eigvalsh(grams)
    return _volume_from_gram_eigenvalues(eigenvalues)
