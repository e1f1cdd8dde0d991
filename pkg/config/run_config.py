"""
运行配置 (Run Configuration)
职责: 合并 JSON 配置文件与命令行参数 (命令行优先)，校验后交给各子命令
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields, asdict
from typing import Optional

from utils.errors import ConfigError

logger = logging.getLogger(__name__)

COMMANDS = ('slln', 'rate', 'ldp-check', 'intrinsic', 'project')

# 依赖随机数的命令必须显式给出种子
SEEDED_COMMANDS = ('slln', 'ldp-check', 'intrinsic', 'project')

OUTPUT_FORMATS = ('csv', 'json')

_MAX_SEED = 2 ** 64


def parse_int_list(text):
    """'250,1000,4000' → [250, 1000, 4000]"""
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(',') if x.strip()]
    except ValueError as e:
        raise ConfigError(f"无法解析整数列表 '{text}': {e}")


def parse_float_list(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(',') if x.strip()]
    except ValueError as e:
        raise ConfigError(f"无法解析数值列表 '{text}': {e}")


@dataclass
class RunConfig:
    """一次运行的完整配置"""
    command: str
    seed: Optional[int] = None
    nu: str = 'gaussian'
    d: int = 2
    n: Optional[int] = None
    n_list: Optional[list] = None
    k: int = 1
    samples: int = 100000
    trials: int = 1
    region: Optional[str] = None
    estimators: list = field(default_factory=lambda: ['mc_uniform'])
    grid_count: Optional[int] = None
    points: Optional[int] = None
    vector: Optional[list] = None
    out: Optional[str] = None
    format: str = 'csv'

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def load_json(cls, path):
        """读取 JSON 配置文件，拒绝未知字段"""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                document = json.load(f)
        except OSError as e:
            raise ConfigError(f"无法读取配置文件 {path}: {e}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"配置文件不是合法 JSON {path}: {e}")

        if not isinstance(document, dict):
            raise ConfigError(f"配置文件顶层必须是对象: {path}")
        unknown = sorted(set(document) - set(cls.field_names()))
        if unknown:
            raise ConfigError(f"配置文件包含未知字段: {', '.join(unknown)}")
        return document

    @classmethod
    def build(cls, command, config_file=None, overrides=None, default_format='csv'):
        """
        构造运行配置

        Args:
            command: 子命令
            config_file: 可选 JSON 配置文件路径
            overrides: 命令行给出的字段 (值为 None 的字段忽略)
            default_format: 未指定时的输出格式

        Returns:
            RunConfig: 已校验的配置
        """
        values = {'format': default_format}
        if config_file:
            document = cls.load_json(config_file)
            file_command = document.pop('command', None)
            if file_command is not None and file_command != command:
                raise ConfigError(f"配置文件的 command={file_command} 与子命令 {command} 不一致")
            values.update(document)

        for key, value in (overrides or {}).items():
            if key not in cls.field_names():
                raise ConfigError(f"未知参数: {key}")
            if value is not None:
                values[key] = value

        values['command'] = command
        config = cls(**values)
        config.normalize()
        config.validate()
        return config

    def normalize(self):
        """统一列表字段的类型"""
        if self.n_list is not None:
            self.n_list = parse_int_list(self.n_list)
        if isinstance(self.estimators, str):
            self.estimators = [e.strip() for e in self.estimators.split(',') if e.strip()]
        if self.vector is not None:
            self.vector = parse_float_list(self.vector)

    def validate(self):
        """校验: 计数 >= 1，种子存在，输出格式合法"""
        if self.command not in COMMANDS:
            raise ConfigError(f"不支持的命令: {self.command}。可用命令: {', '.join(COMMANDS)}")

        if self.command in SEEDED_COMMANDS:
            if self.seed is None:
                raise ConfigError(f"命令 {self.command} 需要 --seed (没有默认种子)")
        if self.seed is not None:
            if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < _MAX_SEED:
                raise ConfigError(f"种子必须是 64 位非负整数: {self.seed!r}")

        counts = {'d': self.d, 'k': self.k, 'samples': self.samples, 'trials': self.trials}
        for optional in ('n', 'grid_count', 'points'):
            if getattr(self, optional) is not None:
                counts[optional] = getattr(self, optional)
        for name, value in counts.items():
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} 必须是 >= 1 的整数，实际: {value!r}")
        if self.n_list is not None and (not self.n_list or min(self.n_list) < 1):
            raise ConfigError(f"n_list 的元素必须 >= 1: {self.n_list}")

        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"不支持的输出格式: {self.format}。可用格式: {', '.join(OUTPUT_FORMATS)}")

    def n_values(self):
        """n_list 优先，否则为 [n]"""
        if self.n_list:
            return list(self.n_list)
        if self.n is not None:
            return [self.n]
        raise ConfigError(f"命令 {self.command} 需要 --n 或 --n-list")

    def output_path(self, output_dir):
        if self.out:
            return self.out
        return os.path.join(output_dir, f"{self.command}.{self.format}")

    def to_dict(self):
        return asdict(self)
