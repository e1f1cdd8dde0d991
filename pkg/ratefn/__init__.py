"""
速率函数层 (Rate Functions)
职责: Hermite 求积、Ψ / Ψ′ / Ψ*、递归斜率与渐近残差
"""

from .quadrature import HermiteRule, build_hermite_rule
from .rate_function import (
    POS_INF,
    EULER_GAMMA,
    QuadratureEstimate,
    RateProfile,
    get_rate_profile,
    psi,
    psi_prime,
    recession_slope,
    conjugate,
    lambda_star,
    asymptote_residuals,
    rate_table,
    cube_mass_exponent,
)

__all__ = [
    'HermiteRule',
    'build_hermite_rule',
    'POS_INF',
    'EULER_GAMMA',
    'QuadratureEstimate',
    'RateProfile',
    'get_rate_profile',
    'psi',
    'psi_prime',
    'recession_slope',
    'conjugate',
    'lambda_star',
    'asymptote_residuals',
    'rate_table',
    'cube_mass_exponent',
]
