"""
配置文件 - 项目的"控制面板"
从config.ini读取数值参数，实现配置驱动的设计理念
"""

import os
import configparser
from pathlib import Path

TOOL_NAME = 'projlab'
TOOL_VERSION = '1.0.0'

DEFAULT_CONFIG_FILE = Path(__file__).resolve().parent.parent / 'config.ini'


class ConfigManager:
    """配置管理器 - 从config.ini读取配置"""

    def __init__(self, config_file=DEFAULT_CONFIG_FILE):
        """初始化配置管理器"""
        self.config_file = str(config_file)
        self.config = configparser.ConfigParser()

        # 检查配置文件是否存在
        if not os.path.exists(self.config_file):
            raise FileNotFoundError(f"配置文件不存在: {self.config_file}")

        self.config.read(self.config_file, encoding='utf-8')

    def get_linalg_config(self):
        """获取线性代数配置"""
        section = 'LINALG'
        return {
            'jacobi_tolerance': self.config.getfloat(section, 'jacobi_tolerance', fallback=1e-13),
            'jacobi_max_sweeps': self.config.getint(section, 'jacobi_max_sweeps', fallback=60),
            'symmetry_tolerance': self.config.getfloat(section, 'symmetry_tolerance', fallback=1e-12),
            'singular_cutoff': self.config.getfloat(section, 'singular_cutoff', fallback=1e-12),
        }

    def get_geometry_config(self):
        """获取几何配置"""
        section = 'GEOMETRY'
        return {
            'grid_count_2d': self.config.getint(section, 'grid_count_2d', fallback=4096),
            'grid_count_3d': self.config.getint(section, 'grid_count_3d', fallback=4096),
            'grid_count_nd': self.config.getint(section, 'grid_count_nd', fallback=8192),
            'grid_seed': self.config.getint(section, 'grid_seed', fallback=20201019),
            'intrinsic_budget': self.config.getint(section, 'intrinsic_budget', fallback=10_000_000),
            'chunk_size': self.config.getint(section, 'chunk_size', fallback=262144),
        }

    def get_quadrature_config(self):
        """获取求积配置"""
        section = 'QUADRATURE'
        return {
            'start_order': self.config.getint(section, 'start_order', fallback=64),
            'max_order': self.config.getint(section, 'max_order', fallback=512),
            'tolerance': self.config.getfloat(section, 'tolerance', fallback=1e-10),
            'fallback_window': self.config.getfloat(section, 'fallback_window', fallback=12.0),
            'stall_gap': self.config.getfloat(section, 'stall_gap', fallback=1e-6),
        }

    def get_rate_config(self):
        """获取速率函数配置"""
        section = 'RATE'
        return {
            'recession_s': self.config.getfloat(section, 'recession_s', fallback=1e3),
            'slope_ratio': self.config.getfloat(section, 'slope_ratio', fallback=1.5),
            'boundary_s': self.config.getfloat(section, 'boundary_s', fallback=1e4),
            'boundary_cap': self.config.getfloat(section, 'boundary_cap', fallback=1e6),
            'divergence_increment': self.config.getfloat(section, 'divergence_increment', fallback=0.5),
            'golden_tolerance': self.config.getfloat(section, 'golden_tolerance', fallback=1e-10),
            'table_points': self.config.getint(section, 'table_points', fallback=200),
        }

    def get_ldp_config(self):
        """获取大偏差实验配置"""
        section = 'LDP'
        return {
            'min_hits': self.config.getint(section, 'min_hits', fallback=50),
            'enumeration_budget': self.config.getint(section, 'enumeration_budget', fallback=2 ** 24),
            'pilot_fraction': self.config.getfloat(section, 'pilot_fraction', fallback=0.01),
            'chunk_rows': self.config.getint(section, 'chunk_rows', fallback=65536),
        }

    def get_output_config(self):
        """获取输出配置"""
        section = 'OUTPUT'
        return {
            'output_dir': self.config.get(section, 'output_dir', fallback='./output'),
            'format': self.config.get(section, 'format', fallback='csv'),
        }

    def get_logging_config(self):
        """获取日志配置"""
        section = 'LOGGING'
        return {
            'level': self.config.get(section, 'level', fallback='INFO'),
            'format': self.config.get(section, 'format', fallback='%(asctime)s - %(name)s - %(levelname)s - %(message)s'),
            'file': self.config.get(section, 'file', fallback=''),
        }

    def get_global_config(self):
        """获取全局配置"""
        section = 'GLOBAL'
        return {
            'debug_mode': self.config.getboolean(section, 'debug_mode', fallback=False),
        }


# 创建全局配置管理器实例
try:
    config_manager = ConfigManager()

    LINALG_CONFIG = config_manager.get_linalg_config()
    GEOMETRY_CONFIG = config_manager.get_geometry_config()
    QUADRATURE_CONFIG = config_manager.get_quadrature_config()
    RATE_CONFIG = config_manager.get_rate_config()
    LDP_CONFIG = config_manager.get_ldp_config()
    OUTPUT_CONFIG = config_manager.get_output_config()
    LOGGING_CONFIG = config_manager.get_logging_config()
    DEBUG_MODE = config_manager.get_global_config()['debug_mode']

except FileNotFoundError as e:
    print(f"警告: {e}")
    print("将使用默认配置...")

    # 提供默认配置作为后备
    LINALG_CONFIG = {
        'jacobi_tolerance': 1e-13,
        'jacobi_max_sweeps': 60,
        'symmetry_tolerance': 1e-12,
        'singular_cutoff': 1e-12,
    }

    GEOMETRY_CONFIG = {
        'grid_count_2d': 4096,
        'grid_count_3d': 4096,
        'grid_count_nd': 8192,
        'grid_seed': 20201019,
        'intrinsic_budget': 10_000_000,
        'chunk_size': 262144,
    }

    QUADRATURE_CONFIG = {
        'start_order': 64,
        'max_order': 512,
        'tolerance': 1e-10,
        'fallback_window': 12.0,
        'stall_gap': 1e-6,
    }

    RATE_CONFIG = {
        'recession_s': 1e3,
        'slope_ratio': 1.5,
        'boundary_s': 1e4,
        'boundary_cap': 1e6,
        'divergence_increment': 0.5,
        'golden_tolerance': 1e-10,
        'table_points': 200,
    }

    LDP_CONFIG = {
        'min_hits': 50,
        'enumeration_budget': 2 ** 24,
        'pilot_fraction': 0.01,
        'chunk_rows': 65536,
    }

    OUTPUT_CONFIG = {
        'output_dir': './output',
        'format': 'csv',
    }

    LOGGING_CONFIG = {
        'level': 'INFO',
        'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        'file': '',
    }

    DEBUG_MODE = False
    config_manager = None
