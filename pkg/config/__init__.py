"""
配置模块 (Configuration Module)
职责: 管理所有配置参数，提供统一的配置接口
"""

from .config import (
    TOOL_NAME,
    TOOL_VERSION,
    ConfigManager,
    config_manager,
    LINALG_CONFIG,
    GEOMETRY_CONFIG,
    QUADRATURE_CONFIG,
    RATE_CONFIG,
    LDP_CONFIG,
    OUTPUT_CONFIG,
    LOGGING_CONFIG,
    DEBUG_MODE
)

__all__ = [
    'TOOL_NAME',
    'TOOL_VERSION',
    'ConfigManager',
    'config_manager',
    'LINALG_CONFIG',
    'GEOMETRY_CONFIG',
    'QUADRATURE_CONFIG',
    'RATE_CONFIG',
    'LDP_CONFIG',
    'OUTPUT_CONFIG',
    'LOGGING_CONFIG',
    'DEBUG_MODE'
]
