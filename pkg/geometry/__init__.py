"""
几何层 (Geometry Layer)
职责: Stiefel 框架构造、投影立方体 (zonotope) 的支撑函数、Hausdorff 距离与内禀体积
"""

from .stiefel import StiefelFrame, sample_frame
from .zonotope import (
    LIMIT_RADIUS,
    Zonotope,
    DirectionGrid,
    LimitBall,
    IntrinsicVolumeEstimate,
    hausdorff_to_ball,
    intrinsic_volume_exact,
    intrinsic_volume_mc,
    intrinsic_volume_limit,
    limit_support_function,
)

__all__ = [
    'StiefelFrame',
    'sample_frame',
    'LIMIT_RADIUS',
    'Zonotope',
    'DirectionGrid',
    'LimitBall',
    'IntrinsicVolumeEstimate',
    'hausdorff_to_ball',
    'intrinsic_volume_exact',
    'intrinsic_volume_mc',
    'intrinsic_volume_limit',
    'limit_support_function',
]
