"""
日志配置 (Logging Setup)
根据 [LOGGING] 配置初始化根日志器
"""

import logging
import os
import sys


def setup_logging(logging_config, debug_mode=False):
    """
    初始化日志

    Args:
        logging_config: 日志配置字典 (LOGGING_CONFIG)
        debug_mode: 调试模式下强制 DEBUG 级别
    """
    level_name = 'DEBUG' if debug_mode else logging_config.get('level', 'INFO')
    level = getattr(logging, str(level_name).upper(), logging.INFO)
    formatter = logging.Formatter(logging_config.get('format'))

    root = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    # 诊断信息只走错误通道，结果文件由报告层单独写出
    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    root.addHandler(stream_handler)

    log_file = logging_config.get('file', '')
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    return root
