"""
内禀体积实验 (Intrinsic Volume Experiment)
职责: 计算 V_k(Z_n)/n^{k/2} 并与极限常数比较，超出枚举预算时自动改用蒙特卡洛
"""

import logging
import math

import pandas as pd

from config import GEOMETRY_CONFIG
from geometry.stiefel import sample_frame
from geometry.zonotope import (
    Zonotope, intrinsic_volume_exact, intrinsic_volume_mc, intrinsic_volume_limit
)
from numerics.rng import RngStream, derive_stream_id
from utils.errors import DimensionError

logger = logging.getLogger(__name__)

INTRINSIC_FRAME_TAG = 5
INTRINSIC_SUBSET_TAG = 6


class IntrinsicExperiment:
    """内禀体积收敛实验"""

    def __init__(self, config=None):
        """
        Args:
            config: 几何配置字典 (GEOMETRY_CONFIG)
        """
        self.config = config or GEOMETRY_CONFIG

    def run(self, d, k, n_values, trials, master_seed, samples=100000):
        """
        Returns:
            pd.DataFrame: 列 n, trial, estimator, v_k, normalized, std_err, limit；
                          trials > 1 时追加 trial='median' 行
        """
        if not 1 <= k <= d:
            raise DimensionError(f"要求 1 <= k <= d，实际 k={k}, d={d}")
        limit = intrinsic_volume_limit(d, k)
        budget = self.config['intrinsic_budget']
        logger.info(f"[实验层] 内禀体积实验: d={d}, k={k}, n={list(n_values)}, "
                    f"trials={trials}, 极限常数={limit:.10g}")

        records = []
        for n in n_values:
            use_exact = math.comb(n, k) <= budget
            if not use_exact:
                logger.info(f"[实验层] C({n},{k}) 超出枚举预算 {budget}，改用蒙特卡洛 ({samples} 个子集)")
            for trial in range(trials):
                stream = RngStream(master_seed, derive_stream_id(INTRINSIC_FRAME_TAG, trial=trial, index=n))
                zonotope = Zonotope.from_frame(sample_frame(stream, d, n))
                if use_exact:
                    value = intrinsic_volume_exact(zonotope, k, budget=budget)
                    std_err, estimator = 0.0, 'exact'
                else:
                    subset_stream = RngStream(master_seed, derive_stream_id(INTRINSIC_SUBSET_TAG, trial=trial, index=n))
                    estimate = intrinsic_volume_mc(zonotope, k, samples, subset_stream)
                    value, std_err, estimator = estimate.value, estimate.std_err, 'mc'
                scale = n ** (k / 2.0)
                records.append({
                    'n': n,
                    'trial': trial,
                    'estimator': estimator,
                    'v_k': value,
                    'normalized': value / scale,
                    'std_err': std_err / scale,
                    'limit': limit,
                })

        result = pd.DataFrame.from_records(records)
        if trials > 1:
            medians = (result.drop(columns=['trial', 'estimator'])
                       .groupby('n', sort=False).median().reset_index())
            medians.insert(1, 'trial', 'median')
            medians.insert(2, 'estimator', result.groupby('n', sort=False)['estimator'].first().values)
            result = pd.concat([result.astype({'trial': object}), medians], ignore_index=True)
        return result
