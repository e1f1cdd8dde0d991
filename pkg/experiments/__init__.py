"""
实验层 (Experiments)
职责: 大偏差经验速率、SLLN 距离与内禀体积实验，以及结果写出
"""

from .empirical_ldp import (
    ESTIMATORS,
    EventRegion,
    MeasureEstimate,
    ExactMeasure,
    LdpRow,
    LdpReport,
    estimate_measure_mc,
    enumerate_exact,
    exact_gaussian_measure,
    quenched_log_mgf,
    rate_convergence_scan,
)
from .slln_experiment import SllnExperiment
from .intrinsic_experiment import IntrinsicExperiment
from .reporter import ResultReporter, read_result_csv, to_serializable

__all__ = [
    'ESTIMATORS',
    'EventRegion',
    'MeasureEstimate',
    'ExactMeasure',
    'LdpRow',
    'LdpReport',
    'estimate_measure_mc',
    'enumerate_exact',
    'exact_gaussian_measure',
    'quenched_log_mgf',
    'rate_convergence_scan',
    'SllnExperiment',
    'IntrinsicExperiment',
    'ResultReporter',
    'read_result_csv',
    'to_serializable',
]
