"""
报告层 (Reporter)
职责: 唯一的结果写出者 - CSV (带 '#' 元数据注释行) 与 JSON (带 metadata 字段)

输出不含时间戳，相同配置与种子重跑得到逐字节相同的文件。
"""

import json
import logging
import math
import os

import numpy as np
import pandas as pd

from config import TOOL_NAME, TOOL_VERSION

logger = logging.getLogger(__name__)


def to_serializable(value):
    """递归转换为 JSON 可写的值，+∞ 写为字符串 "inf" """
    if isinstance(value, dict):
        return {str(k): to_serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_serializable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_serializable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


class ResultReporter:
    """结果写出器"""

    def __init__(self, resolved_config):
        """
        Args:
            resolved_config: 已解析的完整运行配置 (写入每个输出文件)
        """
        self.metadata = {
            'tool': TOOL_NAME,
            'version': TOOL_VERSION,
            'config': to_serializable(resolved_config),
        }

    @staticmethod
    def _ensure_directory(path):
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)

    def write_csv(self, table, path, extra=None):
        """
        写出 CSV: '#' 注释行 (工具版本、配置 JSON、附加键值) + 表头 + 数据

        Args:
            table: pd.DataFrame
            path: 输出路径
            extra: 附加的元数据字典
        """
        self._ensure_directory(path)
        lines = [
            f"# tool: {self.metadata['tool']} {self.metadata['version']}",
            f"# config: {json.dumps(self.metadata['config'], sort_keys=True, ensure_ascii=False)}",
        ]
        for key, value in (extra or {}).items():
            value = to_serializable(value)
            text = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
            lines.append(f"# {key}: {text}")

        body = table.to_csv(index=False, lineterminator='\n', float_format='%.15g')
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write('\n'.join(lines) + '\n')
            f.write(body)
        logger.info(f"[报告层] 已写出 {len(table)} 行到 {path}")
        return path

    def write_json(self, payload, path):
        """写出 JSON，metadata 字段包含工具版本与完整配置"""
        self._ensure_directory(path)
        document = {'metadata': self.metadata}
        document.update(to_serializable(payload))
        text = json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text + '\n')
        logger.info(f"[报告层] 已写出 JSON 报告到 {path}")
        return path

    def write(self, table, path, output_format, payload=None, extra=None):
        """按格式写出；JSON 时优先使用 payload，否则写出表格记录"""
        if output_format == 'json':
            if payload is None:
                payload = {'rows': table.to_dict(orient='records')}
            elif extra:
                payload = dict(payload, **extra)
            return self.write_json(payload, path)
        return self.write_csv(table, path, extra=extra)


def read_result_csv(path):
    """读取带 '#' 注释行的结果 CSV"""
    return pd.read_csv(path, comment='#')
