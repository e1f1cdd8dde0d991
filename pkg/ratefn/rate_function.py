"""
速率函数层 (Rate Function Layer)
职责: 计算 Ψ(s) = E[log M_ν(s·g)]、Ψ′、递归斜率与 Legendre-Fenchel 共轭 Ψ*，
      并由此给出 Λ(t) = Ψ(‖t‖)、Λ*(t) = Ψ*(‖t‖)
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np
import pandas as pd
from scipy import integrate

from config import QUADRATURE_CONFIG, RATE_CONFIG
from utils.errors import UnsupportedDistributionError
from .quadrature import build_hermite_rule

logger = logging.getLogger(__name__)

# 扩展实数 +∞ 的专用标记
POS_INF = math.inf

EULER_GAMMA = float(np.euler_gamma)
LOG_TWO = math.log(2.0)
SQRT_TWO_OVER_PI = math.sqrt(2.0 / math.pi)

# u 与 ρ 视为相等的距离
_BOUNDARY_TOLERANCE = 1e-12

# 括区间倍增次数上限 (s 最大约 2^40)
_MAX_EXPANSIONS = 40

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

_ASYMPTOTE_KINDS = ('rademacher', 'uniform_symmetric')


@dataclass
class QuadratureEstimate:
    """求积结果: 数值、所用阶数、是否收敛、方法 (hermite / quad / exact) 与精度警告"""
    value: float
    order: int
    converged: bool
    method: str
    warning: Optional[str] = None


def _standard_normal_density(x):
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


class RateProfile:
    """单个分布 ν 的速率函数 - Ψ 与 Ψ′ 的数值按 s 缓存"""

    def __init__(self, nu, quadrature_config=None, rate_config=None):
        """
        初始化速率函数

        Args:
            nu: NuDistribution
            quadrature_config: 求积配置字典 (QUADRATURE_CONFIG)
            rate_config: 速率配置字典 (RATE_CONFIG)
        """
        self.nu = nu
        self.quadrature_config = quadrature_config or QUADRATURE_CONFIG
        self.rate_config = rate_config or RATE_CONFIG
        self._psi_cache = {}
        self._psi_prime_cache = {}
        self.warnings = []

    def __repr__(self):
        return f"RateProfile(nu={self.nu.descriptor()})"

    # ------------------------------------------------------------------
    # 求积
    # ------------------------------------------------------------------
    def _adaptive_expectation(self, on_nodes, scalar_integrand, s, label):
        """
        自适应 Hermite 求积: 阶数从 start_order 倍增到 max_order，
        相邻两次差值小于 tolerance 即收敛；相邻差过大或不再减半时提前停止。
        未收敛时记录警告并改用 quad 细化。
        """
        start = self.quadrature_config['start_order']
        max_order = self.quadrature_config['max_order']
        tolerance = self.quadrature_config['tolerance']
        stall_gap = self.quadrature_config.get('stall_gap', 1e-6)

        previous = None
        difference = math.inf
        order = start
        while order <= max_order:
            rule = build_hermite_rule(order)
            value = rule.expectation(on_nodes(rule.nodes))
            if previous is not None:
                last_difference = difference
                difference = abs(value - previous)
                if difference < tolerance:
                    return QuadratureEstimate(value=value, order=order, converged=True, method='hermite')
                # 继续倍增阶数也无法收敛
                if difference > stall_gap * max(1.0, abs(value)) or difference > 0.5 * last_difference:
                    break
            previous = value
            order *= 2
        order = min(order, max_order)

        warning = (f"{label}(s={s:.6g}) 的 Hermite 求积在阶数 {order} 未收敛 "
                   f"(相邻差 {difference:.2e})，已改用自适应积分")
        if not self.warnings:
            logger.warning(f"[速率层] {self.nu.descriptor()}: {warning}")
        else:
            logger.debug(f"[速率层] {self.nu.descriptor()}: {warning}")
        if len(self.warnings) < 100:
            self.warnings.append(warning)

        refined = self._quad_expectation(scalar_integrand, s)
        return QuadratureEstimate(value=refined, order=order, converged=False,
                                  method='quad', warning=warning)

    def _quad_expectation(self, scalar_integrand, s):
        """∫ f(x)φ(x)dx，对 f 作对称化后在 [0, window] 上积分，断点位于 1/s 的倍数"""
        window = self.quadrature_config['fallback_window']

        def symmetric(x):
            return 0.5 * (scalar_integrand(x) + scalar_integrand(-x)) * _standard_normal_density(x)

        points = [c / s for c in (1.0, 4.0, 16.0) if 0.0 < c / s < window] if s > 0 else None
        value, _ = integrate.quad(symmetric, 0.0, window, points=points or None,
                                  limit=400, epsabs=1e-13, epsrel=1e-12)
        return 2.0 * value

    # ------------------------------------------------------------------
    # Ψ 与 Ψ′
    # ------------------------------------------------------------------
    def psi_estimate(self, s):
        """Ψ(s) 的求积结果 (s >= 0)"""
        s = float(s)
        if s < 0.0:
            raise ValueError(f"Ψ 只在 s >= 0 上求值，实际 s={s}")
        if s == 0.0:
            return QuadratureEstimate(value=0.0, order=0, converged=True, method='exact')
        cached = self._psi_cache.get(s)
        if cached is None:
            nu = self.nu
            cached = self._adaptive_expectation(
                lambda nodes: nu.log_mgf(s * nodes),
                lambda x: nu.log_mgf(s * x),
                s, 'Ψ')
            self._psi_cache[s] = cached
        return cached

    def psi(self, s):
        return self.psi_estimate(s).value

    def psi_prime_estimate(self, s):
        """Ψ′(s) = E[g·(log M)′(s·g)]，s=0 处取单侧导数"""
        s = float(s)
        if s < 0.0:
            raise ValueError(f"Ψ′ 只在 s >= 0 上求值，实际 s={s}")
        cached = self._psi_prime_cache.get(s)
        if cached is None:
            nu = self.nu
            cached = self._adaptive_expectation(
                lambda nodes: nodes * nu.log_mgf_prime(s * nodes),
                lambda x: x * nu.log_mgf_prime(s * x),
                s, 'Ψ′')
            self._psi_prime_cache[s] = cached
        return cached

    def psi_prime(self, s):
        return self.psi_prime_estimate(s).value

    # ------------------------------------------------------------------
    # 递归斜率与边界
    # ------------------------------------------------------------------
    @cached_property
    def recession_slope(self):
        """
        ρ = lim Ψ′(s)；有支撑界时取解析值，否则用 Ψ′(2S)/Ψ′(S) 判定超线性增长 (→ +∞)
        """
        analytic = self.nu.mean_abs_gaussian_slope()
        if analytic is not None:
            return float(analytic)

        start = self.rate_config['recession_s']
        near = self.psi_prime(start)
        far = self.psi_prime(2.0 * start)
        if near > 0.0 and far / near > self.rate_config['slope_ratio']:
            logger.info(f"[速率层] {self.nu.descriptor()}: Ψ 超线性增长，递归斜率 = +∞")
            return POS_INF
        return float(far)

    @cached_property
    def boundary_value(self):
        """
        Ψ*(ρ): 取 ρ·S − Ψ(S) 于 S = boundary_s；超过上限或在最后两个数量级内
        仍增长超过 divergence_increment 时判定为 +∞
        """
        rho = self.recession_slope
        if not math.isfinite(rho):
            return POS_INF

        far_s = self.rate_config['boundary_s']
        near_s = far_s / 100.0
        far = rho * far_s - self.psi(far_s)
        near = rho * near_s - self.psi(near_s)

        if far > self.rate_config['boundary_cap']:
            return POS_INF
        if far - near > self.rate_config['divergence_increment']:
            logger.debug(f"[速率层] 边界目标函数从 {near:.6g} 增长到 {far:.6g}，判定发散")
            return POS_INF
        return max(far, 0.0)

    # ------------------------------------------------------------------
    # 共轭
    # ------------------------------------------------------------------
    def _golden_section_max(self, objective, lo, hi):
        """凹函数在 [lo, hi] 上的黄金分割搜索"""
        tolerance = self.rate_config['golden_tolerance']
        a, b = lo, hi
        c = b - _INV_PHI * (b - a)
        d = a + _INV_PHI * (b - a)
        fc, fd = objective(c), objective(d)
        for _ in range(400):
            # 区间宽度受浮点分辨率限制
            if b - a <= max(tolerance, 4.0 * np.finfo(float).eps * abs(b)):
                break
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _INV_PHI * (b - a)
                fc = objective(c)
            else:
                a, c, fc = c, d, fd
                d = a + _INV_PHI * (b - a)
                fd = objective(d)
        return max(fc, fd)

    def _interior_supremum(self, u):
        """sup_{s>=0} (u·s − Ψ(s))，u < ρ"""
        if u == 0.0:
            return 0.0

        def objective(s):
            return u * s - self.psi(s)

        before, previous_s, previous_f = 0.0, 0.0, 0.0
        s = 1.0
        current = objective(s)
        expansions = 0
        while current > previous_f:
            if expansions >= _MAX_EXPANSIONS:
                logger.warning(f"[速率层] u={u:.6g} 的括区间在 s={s:.3g} 仍未闭合，返回当前下界")
                return max(current, 0.0)
            before, previous_s, previous_f = previous_s, s, current
            s *= 2.0
            current = objective(s)
            expansions += 1

        best = self._golden_section_max(objective, before, s)
        return max(best, previous_f, 0.0)

    def conjugate(self, u):
        """
        Ψ*(u) = sup_{s>=0} (u·s − Ψ(s))，负 u 取绝对值

        Returns:
            float: 有限值或 POS_INF
        """
        u = abs(float(u))
        rho = self.recession_slope
        if math.isfinite(rho):
            if u > rho + _BOUNDARY_TOLERANCE:
                return POS_INF
            if abs(u - rho) <= _BOUNDARY_TOLERANCE:
                return self.boundary_value
        return self._interior_supremum(u)

    def lambda_star(self, t):
        """Λ*(t) = Ψ*(‖t‖₂)"""
        return self.conjugate(float(np.linalg.norm(np.atleast_1d(np.asarray(t, dtype=float)))))

    # ------------------------------------------------------------------
    # 表格与渐近
    # ------------------------------------------------------------------
    def rate_table(self, points=None, u_max=None):
        """
        在 [0, u_max] 上等距 points 个点的 (u, Ψ*(u)) 表

        u_max 默认为 1.25ρ (ρ 有限且为正) 或 3。

        Returns:
            pd.DataFrame: 列 u, psi_star, finite_flag
        """
        points = self.rate_config['table_points'] if points is None else int(points)
        if u_max is None:
            rho = self.recession_slope
            u_max = 1.25 * rho if math.isfinite(rho) and rho > 0.0 else 3.0

        logger.info(f"[速率层] 计算 {self.nu.descriptor()} 的速率表: {points} 个点, u ∈ [0, {u_max:.6g}]")
        grid = np.linspace(0.0, u_max, points)
        values = [self.conjugate(u) for u in grid]
        return pd.DataFrame({
            'u': grid,
            'psi_star': values,
            'finite_flag': [math.isfinite(v) for v in values],
        })

    def asymptote_residuals(self, s_values):
        """
        与线性渐近线的残差

        rademacher: r(s) = Ψ(s) − (−log 2 + √(2/π)s)
        uniform_symmetric: r(s) = Ψ(s) + log s − √(2/π)s − ½(γ − log 2)
        """
        kind = self.nu.kind
        if kind not in _ASYMPTOTE_KINDS:
            raise UnsupportedDistributionError(f"渐近残差只支持 {', '.join(_ASYMPTOTE_KINDS)}，实际: {kind}")

        residuals = []
        for s in s_values:
            s = float(s)
            if s <= 0.0:
                raise ValueError(f"渐近残差要求 s > 0，实际 s={s}")
            if kind == 'rademacher':
                residuals.append(self.psi(s) - (-LOG_TWO + SQRT_TWO_OVER_PI * s))
            else:
                constant = 0.5 * (EULER_GAMMA - LOG_TWO)
                residuals.append(self.psi(s) + math.log(s) - SQRT_TWO_OVER_PI * s - constant)
        return residuals

    def cube_mass_exponent(self, t):
        """
        投影到 t 附近的立方体顶点数 (或体积) 的指数增长率 log 2 − Λ*(t)
        """
        if self.nu.kind not in _ASYMPTOTE_KINDS:
            raise UnsupportedDistributionError(f"立方体质量指数只支持 {', '.join(_ASYMPTOTE_KINDS)}")
        rate = self.lambda_star(t)
        if not math.isfinite(rate):
            return -math.inf
        return LOG_TWO - rate


@lru_cache(maxsize=None)
def get_rate_profile(nu):
    """每个分布共享一个带缓存的 RateProfile"""
    return RateProfile(nu)


def psi(nu, s, rule=None):
    """Ψ(s)；给定 rule 时用该固定规则求积，否则自适应"""
    if rule is not None:
        return rule.expectation(nu.log_mgf(float(s) * rule.nodes))
    return get_rate_profile(nu).psi(s)


def psi_prime(nu, s, rule=None):
    """Ψ′(s)；给定 rule 时用该固定规则求积，否则自适应"""
    if rule is not None:
        return rule.expectation(rule.nodes * nu.log_mgf_prime(float(s) * rule.nodes))
    return get_rate_profile(nu).psi_prime(s)


def recession_slope(nu):
    return get_rate_profile(nu).recession_slope


def conjugate(nu, u):
    return get_rate_profile(nu).conjugate(u)


def lambda_star(nu, t):
    return get_rate_profile(nu).lambda_star(t)


def asymptote_residuals(nu, s_values):
    return get_rate_profile(nu).asymptote_residuals(s_values)


def rate_table(nu, points=None, u_max=None):
    return get_rate_profile(nu).rate_table(points=points, u_max=u_max)


def cube_mass_exponent(nu, t):
    return get_rate_profile(nu).cube_mass_exponent(t)
