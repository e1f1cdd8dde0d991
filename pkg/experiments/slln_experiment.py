"""
强大数定律实验 (SLLN Experiment)
职责: 度量 (1/√n)·I*([−1,1]ⁿ) 与 (1/n)·G([−1,1]ⁿ) 到半径 √(2/π) 球的 Hausdorff 距离
"""

import logging
import math

import pandas as pd

from config import GEOMETRY_CONFIG
from geometry.stiefel import sample_frame
from geometry.zonotope import Zonotope, DirectionGrid, LimitBall, hausdorff_to_ball
from numerics.rng import RngStream, derive_stream_id

logger = logging.getLogger(__name__)

SLLN_STREAM_TAG = 4


class SllnExperiment:
    """Hausdorff 距离收敛实验"""

    def __init__(self, config=None, grid_count=None):
        """
        初始化实验

        Args:
            config: 几何配置字典 (GEOMETRY_CONFIG)
            grid_count: 覆盖默认的方向网格规模
        """
        self.config = config or GEOMETRY_CONFIG
        self.grid_count = grid_count
        self.grid = None

    def run(self, d, n_values, trials, master_seed):
        """
        对每个 (n, trial) 采样一个框架并计算距离

        Returns:
            pd.DataFrame: 列 n, trial, hausdorff_uniform, hausdorff_gaussian, scale_drift；
                          trials > 1 时追加 trial='median' 行
        """
        self.grid = DirectionGrid.build(d, count=self.grid_count, seed=self.config['grid_seed'])
        ball = LimitBall(d=d)
        logger.info(f"[实验层] SLLN 实验: d={d}, n={list(n_values)}, trials={trials}, "
                    f"网格={self.grid.descriptor}")

        records = []
        for n in n_values:
            for trial in range(trials):
                stream = RngStream(master_seed, derive_stream_id(SLLN_STREAM_TAG, trial=trial, index=n))
                frame = sample_frame(stream, d, n)
                uniform_body = Zonotope.from_frame(frame)
                gaussian_body = Zonotope.from_gaussian_frame(frame)
                records.append({
                    'n': n,
                    'trial': trial,
                    'hausdorff_uniform': hausdorff_to_ball(uniform_body, 1.0 / math.sqrt(n), ball, self.grid),
                    'hausdorff_gaussian': hausdorff_to_ball(gaussian_body, 1.0 / n, ball, self.grid),
                    'scale_drift': frame.scale_drift_norm(),
                })
            logger.debug(f"[实验层] SLLN n={n} 完成")

        result = pd.DataFrame.from_records(records)
        if trials > 1:
            medians = result.drop(columns='trial').groupby('n', sort=False).median().reset_index()
            medians.insert(1, 'trial', 'median')
            result = pd.concat([result.astype({'trial': object}), medians], ignore_index=True)
        return result
