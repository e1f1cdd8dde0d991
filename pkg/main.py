"""
主程序 (Main Entry Point)
职责: 解析命令行，串联配置、实验与报告，映射退出码

退出码: 0 成功，2 配置或其他错误，3 枚举预算超限
"""

import argparse
import logging
import math
import os
import sys
import traceback

# 设置Windows控制台编码为UTF-8（解决中文乱码问题）
if sys.platform == 'win32':
    try:
        os.system('chcp 65001 >nul 2>&1')
        if hasattr(sys.stdout, 'reconfigure'):
            sys.stdout.reconfigure(encoding='utf-8')
            sys.stderr.reconfigure(encoding='utf-8')
    except Exception as e:
        print(f"Warning: Failed to set UTF-8 encoding: {e}", file=sys.stderr)

import numpy as np
import pandas as pd

from config import (
    TOOL_NAME,
    TOOL_VERSION,
    GEOMETRY_CONFIG,
    RATE_CONFIG,
    OUTPUT_CONFIG,
    LOGGING_CONFIG,
    DEBUG_MODE
)
from config.run_config import RunConfig, COMMANDS
from distributions import DistributionFactory
from experiments import (
    EventRegion,
    IntrinsicExperiment,
    ResultReporter,
    SllnExperiment,
    rate_convergence_scan,
)
from geometry import LIMIT_RADIUS, sample_frame
from numerics import RngStream, derive_stream_id
from ratefn import get_rate_profile
from utils.errors import BudgetExceededError, ConfigError, ProjectionLabError
from utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_BUDGET_ERROR = 3

PROJECT_STREAM_TAG = 7


def print_header():
    """打印程序启动标题 (错误通道)"""
    print("=" * 70, file=sys.stderr)
    print(" " * 15 + f"随机投影数值实验室 {TOOL_NAME} {TOOL_VERSION}", file=sys.stderr)
    print("=" * 70, file=sys.stderr)


def build_parser():
    """构造命令行解析器"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON 配置文件 (命令行参数优先)')
    common.add_argument('--nu', help='gaussian | rademacher | uniform | discrete:<path>')
    common.add_argument('--d', type=int, help='投影维数')
    common.add_argument('--n', type=int, help='环境维数')
    common.add_argument('--n-list', dest='n_list', help='逗号分隔的 n 列表')
    common.add_argument('--k', type=int, help='内禀体积阶数')
    common.add_argument('--samples', type=int, help='蒙特卡洛样本数')
    common.add_argument('--trials', type=int, help='试验次数 (每次使用新的框架)')
    common.add_argument('--seed', type=int, help='主种子 (必填，无默认值)')
    common.add_argument('--region', help='half:<u_csv>:<a> | ballc:<r>')
    common.add_argument('--estimators', help='逗号分隔: mc_uniform,mc_gaussian,exact_enum,exact_gauss')
    common.add_argument('--grid-count', dest='grid_count', type=int, help='方向网格规模')
    common.add_argument('--points', type=int, help='速率表点数')
    common.add_argument('--vector', help='project 命令的输入向量 (逗号分隔)')
    common.add_argument('--out', help='输出文件路径')
    common.add_argument('--format', choices=['csv', 'json'], help='输出格式')

    parser = argparse.ArgumentParser(prog=TOOL_NAME, description='随机投影乘积测度的数值实验')
    subparsers = parser.add_subparsers(dest='command', required=True)
    descriptions = {
        'slln': '投影立方体到 √(2/π) 球的 Hausdorff 距离',
        'rate': '速率函数 Ψ* 表',
        'ldp-check': '经验大偏差速率扫描',
        'intrinsic': '投影立方体的内禀体积',
        'project': '采样一个框架并投影给定向量',
    }
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common], help=descriptions[command])
    return parser


def cmd_slln(config, reporter):
    """Hausdorff 距离实验"""
    experiment = SllnExperiment(GEOMETRY_CONFIG, grid_count=config.grid_count)
    table = experiment.run(config.d, config.n_values(), config.trials, config.seed)
    extra = {'grid': experiment.grid.descriptor, 'ball_radius': LIMIT_RADIUS}
    payload = {'d': config.d, 'grid': experiment.grid.descriptor, 'ball_radius': LIMIT_RADIUS,
               'rows': table.to_dict(orient='records')}
    return reporter.write(table, config.output_path(OUTPUT_CONFIG['output_dir']), config.format,
                          payload=payload, extra=extra)


def cmd_rate(config, reporter):
    """速率函数表"""
    nu = DistributionFactory.create_distribution(config.nu)
    profile = get_rate_profile(nu)
    table = profile.rate_table(points=config.points)
    rho = profile.recession_slope
    extra = {
        'nu': nu.descriptor(),
        'recession_slope': rho,
        'boundary_value': profile.boundary_value if math.isfinite(rho) else None,
        'boundary_s': RATE_CONFIG['boundary_s'],
        'boundary_cap': RATE_CONFIG['boundary_cap'],
        'mgf_condition_documented': nu.mgf_condition_documented,
        'quadrature_warnings': len(profile.warnings),
    }
    payload = dict(extra, table=table.to_dict(orient='records'))
    return reporter.write(table, config.output_path(OUTPUT_CONFIG['output_dir']), config.format,
                          payload=payload, extra=extra)


def cmd_ldp_check(config, reporter):
    """经验大偏差扫描；不可靠的行照常写出"""
    if not config.region:
        raise ConfigError("ldp-check 需要 --region")
    nu = DistributionFactory.create_distribution(config.nu)
    region = EventRegion.parse(config.region)
    report = rate_convergence_scan(nu, config.d, region, config.n_values(), config.samples,
                                   config.seed, estimators=config.estimators, trials=config.trials)
    extra = {
        'nu': report.nu,
        'd': report.d,
        'region': report.region,
        'theoretical_rate': report.theoretical_rate,
        'boundary_cap': RATE_CONFIG['boundary_cap'],
    }
    return reporter.write(report.to_frame(), config.output_path(OUTPUT_CONFIG['output_dir']),
                          config.format, payload=report.to_dict(), extra=extra)


def cmd_intrinsic(config, reporter):
    """内禀体积实验"""
    experiment = IntrinsicExperiment(GEOMETRY_CONFIG)
    table = experiment.run(config.d, config.k, config.n_values(), config.trials, config.seed,
                           samples=config.samples)
    limit = float(table['limit'].iloc[0])
    extra = {'d': config.d, 'k': config.k, 'limit': limit}
    payload = dict(extra, rows=table.to_dict(orient='records'))
    return reporter.write(table, config.output_path(OUTPUT_CONFIG['output_dir']), config.format,
                          payload=payload, extra=extra)


def cmd_project(config, reporter):
    """采样一个框架，将给定向量投影后打印到标准输出"""
    if config.n is None:
        raise ConfigError("project 需要 --n")
    n = config.n
    if config.vector is None:
        logger.info("[主控层] 未给出 --vector，使用全 1 向量")
        x = np.ones(n)
    else:
        x = np.asarray(config.vector, dtype=float)
        if x.shape != (n,):
            raise ConfigError(f"--vector 的长度应为 n={n}，实际: {x.size}")

    frame = sample_frame(RngStream(config.seed, derive_stream_id(PROJECT_STREAM_TAG)), config.d, n)
    uniform = frame.project_uniform(x)
    gaussian = frame.project_gaussian(x)
    print('uniform: ' + ','.join(f'{v:.15g}' for v in uniform))
    print('gaussian: ' + ','.join(f'{v:.15g}' for v in gaussian))

    if config.out:
        table = pd.DataFrame({'component': np.arange(config.d), 'uniform': uniform, 'gaussian': gaussian})
        extra = {'scale_drift': frame.scale_drift_norm()}
        return reporter.write(table, config.out, config.format, extra=extra,
                              payload=dict(extra, rows=table.to_dict(orient='records')))
    return None


COMMAND_HANDLERS = {
    'slln': cmd_slln,
    'rate': cmd_rate,
    'ldp-check': cmd_ldp_check,
    'intrinsic': cmd_intrinsic,
    'project': cmd_project,
}


def run(argv=None):
    """主函数 - 程序入口，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(LOGGING_CONFIG, DEBUG_MODE)

    try:
        print_header()
        overrides = {name: getattr(args, name) for name in RunConfig.field_names()
                     if name != 'command' and hasattr(args, name)}
        config = RunConfig.build(args.command, args.config, overrides,
                                 default_format=OUTPUT_CONFIG['format'])
        logger.info(f"[主控层] 执行命令 {config.command}")

        reporter = ResultReporter(config.to_dict())
        path = COMMAND_HANDLERS[config.command](config, reporter)
        if path:
            logger.info(f"[主控层] ✓ 结果已保存: {path}")
        return EXIT_OK

    except BudgetExceededError as e:
        logger.error(f"[主控层] ✗ {e}")
        return EXIT_BUDGET_ERROR

    except ProjectionLabError as e:
        logger.error(f"[主控层] ✗ {e}")
        return EXIT_CONFIG_ERROR

    except KeyboardInterrupt:
        logger.error("[主控层] ⚠️  用户中断程序")
        return EXIT_CONFIG_ERROR

    except Exception as e:
        logger.error(f"[主控层] ❌ 程序执行出错: {e}")
        if DEBUG_MODE:
            traceback.print_exc()
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(run())
