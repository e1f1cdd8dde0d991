"""
工具模块 - 异常定义与日志配置
"""

from .errors import (
    ProjectionLabError,
    DimensionError,
    ShapeError,
    SingularMatrixError,
    BudgetExceededError,
    DistributionError,
    UnsupportedDistributionError,
    ConfigError,
    ConvergenceError,
)
from .logging_setup import setup_logging

__all__ = [
    'ProjectionLabError',
    'DimensionError',
    'ShapeError',
    'SingularMatrixError',
    'BudgetExceededError',
    'DistributionError',
    'UnsupportedDistributionError',
    'ConfigError',
    'setup_logging',
]
