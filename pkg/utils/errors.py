"""
异常定义 (Error Definitions)
职责: 为各层提供统一的异常类型，便于主控层映射退出码
"""


class ProjectionLabError(ValueError):
    """所有库内异常的基类"""


class DimensionError(ProjectionLabError):
    """维度不合法或不匹配 (例如 d > n)"""


class ShapeError(ProjectionLabError):
    """矩阵形状错误 (非方阵、非对称、含非有限值)"""


class SingularMatrixError(ProjectionLabError):
    """矩阵数值奇异，携带最小特征值"""

    def __init__(self, smallest_eigenvalue, message=None):
        self.smallest_eigenvalue = float(smallest_eigenvalue)
        if message is None:
            message = f"矩阵数值奇异: 最小特征值 = {self.smallest_eigenvalue:.3e}"
        super().__init__(message)


class BudgetExceededError(ProjectionLabError):
    """枚举规模超出预算"""

    def __init__(self, requested, budget, hint=''):
        self.requested = requested
        self.budget = budget
        message = f"枚举规模 {requested} 超出预算 {budget}"
        if hint:
            message = f"{message}，{hint}"
        super().__init__(message)


class DistributionError(ProjectionLabError):
    """分布参数不合法 (权重为负、权重和偏离1等)"""


class UnsupportedDistributionError(ProjectionLabError):
    """当前操作不支持该分布类型"""


class ConfigError(ProjectionLabError):
    """运行配置错误"""


class ConvergenceError(ProjectionLabError):
    """迭代算法在给定轮数内未收敛"""
