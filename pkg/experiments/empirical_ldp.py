"""
经验大偏差层 (Empirical Large Deviations)
职责: 用蒙特卡洛、精确枚举和高斯闭式估计投影测度 μ(A)，计算经验衰减率
      −(1/n)log μ̂(A)，并与 inf_A Λ* 比较
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from scipy.special import logsumexp
from scipy.stats import chi2, norm

from config import LDP_CONFIG
from geometry.stiefel import sample_frame
from numerics.rng import RngStream, derive_stream_id
from ratefn.rate_function import conjugate
from utils.errors import (
    BudgetExceededError, ConfigError, DimensionError, UnsupportedDistributionError
)

logger = logging.getLogger(__name__)

ESTIMATORS = ('mc_uniform', 'mc_gaussian', 'exact_enum', 'exact_gauss')
MODES = ('uniform', 'gaussian')

FRAME_STREAM_TAG = 1
SAMPLE_STREAM_TAG = 2
PILOT_STREAM_TAG = 3

# 单块最多处理的浮点数个数
_MAX_CHUNK_ELEMENTS = 2 ** 22


@dataclass(frozen=True)
class EventRegion:
    """
    事件区域

    half_space: {x : ⟨x, u⟩ >= a}，u 为单位向量
    ball_complement: {x : ‖x‖ >= r}
    """
    kind: str
    direction: tuple = ()
    threshold: float = 0.0
    radius: float = 0.0

    @classmethod
    def half_space(cls, direction, threshold):
        u = np.asarray(direction, dtype=float).ravel()
        length = float(np.linalg.norm(u))
        if u.size == 0 or not math.isfinite(length) or length == 0.0:
            raise DimensionError(f"半空间方向必须是非零有限向量: {direction}")
        if not math.isfinite(float(threshold)):
            raise ValueError(f"半空间阈值必须有限: {threshold}")
        return cls(kind='half_space', direction=tuple(float(x) for x in u / length),
                   threshold=float(threshold))

    @classmethod
    def ball_complement(cls, radius):
        if not math.isfinite(float(radius)):
            raise ValueError(f"球补半径必须有限: {radius}")
        return cls(kind='ball_complement', radius=float(radius))

    @classmethod
    def parse(cls, text):
        """解析 half:<u_csv>:<a> 或 ballc:<r>"""
        parts = str(text).strip().split(':')
        try:
            if parts[0] == 'half' and len(parts) == 3:
                direction = [float(x) for x in parts[1].split(',')]
                return cls.half_space(direction, float(parts[2]))
            if parts[0] == 'ballc' and len(parts) == 2:
                return cls.ball_complement(float(parts[1]))
        except ValueError as e:
            raise ConfigError(f"无法解析区域 '{text}': {e}")
        raise ConfigError(f"区域格式应为 half:<u_csv>:<a> 或 ballc:<r>，实际: '{text}'")

    def check_dimension(self, d):
        if self.kind == 'half_space' and len(self.direction) != d:
            raise DimensionError(f"半空间方向维数 {len(self.direction)} 与 d={d} 不一致")

    def contains(self, points):
        """逐点判断是否落在区域内 (points 形状 (m, d) 或 (d,))"""
        points = np.asarray(points, dtype=float)
        if self.kind == 'half_space':
            return points @ np.asarray(self.direction) >= self.threshold
        return np.linalg.norm(points, axis=-1) >= self.radius

    def infimum_rate(self, nu):
        """inf_{x∈A} Λ*(x)：半空间为 Ψ*(max(a,0))，球补为 Ψ*(max(r,0))"""
        level = self.threshold if self.kind == 'half_space' else self.radius
        if level <= 0.0:
            return 0.0
        return conjugate(nu, level)

    def transformed(self, frame):
        """
        高斯投影下的等价半空间: 方向 S⁻¹u/‖S⁻¹u‖，阈值 a/‖S⁻¹u‖，
        其中 S = (1/√n)(GG*)^{1/2}
        """
        if self.kind != 'half_space':
            raise ValueError("只有半空间可以做过渡变换")
        self.check_dimension(frame.d)
        w = frame.scale_inverse() @ np.asarray(self.direction)
        length = float(np.linalg.norm(w))
        return EventRegion(kind='half_space', direction=tuple(float(x) for x in w / length),
                           threshold=self.threshold / length)

    def describe(self):
        if self.kind == 'half_space':
            return {'kind': self.kind, 'direction': list(self.direction), 'threshold': self.threshold}
        return {'kind': self.kind, 'radius': self.radius}


@dataclass
class MeasureEstimate:
    """蒙特卡洛估计: 命中比例及二项标准误"""
    mu_hat: float
    std_err: float
    hits: int
    samples: int

    @property
    def log_mu(self):
        return math.log(self.mu_hat) if self.hits > 0 else -math.inf


@dataclass
class ExactMeasure:
    """精确测度 (log_mu 避免下溢)"""
    mu: float
    log_mu: float
    states: int = 0


def _project(frame, points, mode):
    if mode == 'uniform':
        return frame.project_uniform(points)
    if mode == 'gaussian':
        return frame.project_gaussian(points)
    raise ValueError(f"未知的投影模式: {mode}，可用: {', '.join(MODES)}")


def _chunk_rows(n, chunk_rows=None):
    chunk_rows = LDP_CONFIG['chunk_rows'] if chunk_rows is None else chunk_rows
    return max(1, min(chunk_rows, _MAX_CHUNK_ELEMENTS // max(1, n)))


def estimate_measure_mc(nu, frame, region, samples, stream, mode='uniform', chunk_rows=None):
    """
    蒙特卡洛估计 μ(A)

    Args:
        nu: NuDistribution
        frame: StiefelFrame
        region: EventRegion
        samples: 样本数 (>= 1000)
        stream: RngStream
        mode: uniform 使用 (1/√n)I*x，gaussian 使用 (1/n)Gx

    Returns:
        MeasureEstimate
    """
    if samples < 1000:
        raise ValueError(f"蒙特卡洛样本数至少为 1000，实际: {samples}")
    region.check_dimension(frame.d)

    rows = _chunk_rows(frame.n, chunk_rows)
    hits = 0
    for start in range(0, samples, rows):
        count = min(rows, samples - start)
        x = nu.sample(stream, (count, frame.n))
        hits += int(np.count_nonzero(region.contains(_project(frame, x, mode))))

    mu_hat = hits / samples
    std_err = math.sqrt(mu_hat * (1.0 - mu_hat) / samples)
    return MeasureEstimate(mu_hat=mu_hat, std_err=std_err, hits=hits, samples=samples)


def _finite_support(nu):
    support = nu.atoms_and_weights()
    if support is None:
        raise UnsupportedDistributionError(f"精确枚举需要有限支撑分布，实际: {nu.kind}")
    return support


def enumeration_size(nu, n):
    atoms, _ = _finite_support(nu)
    return len(atoms) ** n


def enumerate_exact(nu, frame, region, budget=None, mode='uniform', chunk_rows=None):
    """
    对全部 kⁿ 个坐标组合求和，得到精确 μ(A)

    Raises:
        BudgetExceededError: kⁿ 超出预算
    """
    budget = LDP_CONFIG['enumeration_budget'] if budget is None else budget
    atoms, weights = _finite_support(nu)
    region.check_dimension(frame.d)
    k, n = len(atoms), frame.n
    states = k ** n
    if states > budget:
        raise BudgetExceededError(states, budget, hint="请减小 n 或改用蒙特卡洛估计")

    log_weights = np.log(weights)
    powers = k ** np.arange(n, dtype=np.int64)
    rows = _chunk_rows(n, chunk_rows)
    partial = []
    for start in range(0, states, rows):
        index = np.arange(start, min(states, start + rows), dtype=np.int64)
        digits = (index[:, None] // powers[None, :]) % k
        hit = region.contains(_project(frame, atoms[digits], mode))
        if np.any(hit):
            partial.append(logsumexp(log_weights[digits[hit]].sum(axis=1)))

    log_mu = float(logsumexp(partial)) if partial else -math.inf
    log_mu = min(log_mu, 0.0)
    return ExactMeasure(mu=math.exp(log_mu), log_mu=log_mu, states=states)


def exact_gaussian_measure(nu, frame, region, mode='uniform'):
    """
    高斯 ν 下的闭式测度: 投影服从 N(0, Σ)，均匀模式 Σ = I*I*ᵀ/n，
    高斯模式 Σ = GGᵀ/n²
    """
    if nu.kind != 'gaussian':
        raise UnsupportedDistributionError(f"闭式估计只适用于 gaussian，实际: {nu.kind}")
    region.check_dimension(frame.d)
    n = frame.n

    if mode == 'uniform':
        covariance = frame.i_star @ frame.i_star.T / n
    elif mode == 'gaussian':
        covariance = frame.g @ frame.g.T / (n * n)
    else:
        raise ValueError(f"未知的投影模式: {mode}")

    if region.kind == 'half_space':
        u = np.asarray(region.direction)
        sigma = math.sqrt(float(u @ covariance @ u))
        log_mu = float(norm.logsf(region.threshold / sigma))
    elif mode == 'uniform':
        if region.radius <= 0.0:
            log_mu = 0.0
        else:
            log_mu = float(chi2.logsf(region.radius ** 2 * n, df=frame.d))
    else:
        raise UnsupportedDistributionError("高斯模式下的球补区域没有闭式解")

    return ExactMeasure(mu=math.exp(log_mu), log_mu=log_mu)


def quenched_log_mgf(nu, frame, t, mode='uniform'):
    """
    固定框架下投影测度的归一化对数矩母函数 (1/n)·log E[exp(n⟨t, y⟩)]

    坐标独立，故等于 (1/n)·Σᵢ log M(cᵢ)：均匀模式 cᵢ = √n⟨t, vᵢ⟩ (vᵢ 为 I* 的列)，
    高斯模式 cᵢ = ⟨t, gᵢ⟩。n → ∞ 时两者都收敛到 Ψ(‖t‖)。
    """
    t = np.asarray(t, dtype=float).ravel()
    if t.size != frame.d:
        raise DimensionError(f"t 的维数 {t.size} 与 d={frame.d} 不一致")
    if mode == 'uniform':
        coefficients = math.sqrt(frame.n) * (t @ frame.i_star)
    elif mode == 'gaussian':
        coefficients = t @ frame.g
    else:
        raise ValueError(f"未知的投影模式: {mode}，可用: {', '.join(MODES)}")
    return float(np.sum(nu.log_mgf(coefficients))) / frame.n


@dataclass
class LdpRow:
    n: int
    trial: int
    estimator: str
    mu_hat: float
    log_mu: float
    empirical_rate: float
    std_err: Optional[float]
    samples: int
    hits: Optional[int]
    reliable: bool
    frame_stream: int


@dataclass
class LdpReport:
    """经验速率报告"""
    nu: str
    nu_info: dict
    d: int
    region: dict
    theoretical_rate: float
    rows: list = field(default_factory=list)
    median_rows: list = field(default_factory=list)
    pilot_checks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    COLUMNS = ['n', 'trial', 'estimator', 'mu_hat', 'log_mu', 'empirical_rate',
               'std_err', 'samples', 'hits', 'reliable', 'frame_stream']

    def to_frame(self):
        """逐行结果与中位数行合并为一张表"""
        records = [vars(row) for row in self.rows] + list(self.median_rows)
        return pd.DataFrame.from_records(records, columns=self.COLUMNS)

    def to_dict(self):
        return {
            'nu': self.nu,
            'nu_info': self.nu_info,
            'd': self.d,
            'region': self.region,
            'theoretical_rate': self.theoretical_rate,
            'rows': [vars(row) for row in self.rows],
            'medians': list(self.median_rows),
            'pilot_checks': list(self.pilot_checks),
            'warnings': list(self.warnings),
        }


def _empirical_rate(log_mu, n):
    if log_mu == -math.inf:
        return math.inf
    return -log_mu / n


def _median_rows(rows):
    """按 (n, estimator) 汇总中位数"""
    frame = pd.DataFrame.from_records([vars(row) for row in rows])
    medians = []
    for (n, estimator), group in frame.groupby(['n', 'estimator'], sort=True):
        medians.append({
            'n': int(n),
            'trial': 'median',
            'estimator': estimator,
            'mu_hat': float(group['mu_hat'].median()),
            'log_mu': float(group['log_mu'].median()),
            'empirical_rate': float(group['empirical_rate'].median()),
            'std_err': None,
            'samples': int(group['samples'].max()),
            'hits': None,
            'reliable': bool(group['reliable'].all()),
            'frame_stream': None,
        })
    return medians


def rate_convergence_scan(nu, d, region, n_values, samples, master_seed,
                          estimators=('mc_uniform',), trials=1, budget=None, ldp_config=None):
    """
    对每个 n (每个试验) 采样一个新框架，按所选估计器计算经验速率

    Args:
        nu: NuDistribution
        d: 投影维数
        region: EventRegion
        n_values: n 列表
        samples: 蒙特卡洛样本数
        master_seed: 主种子
        estimators: mc_uniform / mc_gaussian / exact_enum / exact_gauss 的子集
        trials: 试验次数 (> 1 时追加中位数行)
        budget: 精确枚举预算

    Returns:
        LdpReport
    """
    ldp_config = ldp_config or LDP_CONFIG
    budget = ldp_config['enumeration_budget'] if budget is None else budget
    estimators = tuple(estimators)
    unknown = [e for e in estimators if e not in ESTIMATORS]
    if not estimators or unknown:
        raise ConfigError(f"不支持的估计器: {unknown}。可用估计器: {', '.join(ESTIMATORS)}")
    if trials < 1:
        raise ConfigError(f"trials 必须 >= 1，实际: {trials}")
    n_values = [int(n) for n in n_values]
    if not n_values or min(n_values) < d:
        raise DimensionError(f"每个 n 都必须 >= d={d}: {n_values}")
    region.check_dimension(d)

    # 超预算的枚举请求在开始前即失败
    if 'exact_enum' in estimators:
        for n in n_values:
            size = enumeration_size(nu, n)
            if size > budget:
                raise BudgetExceededError(size, budget, hint=f"n={n} 的精确枚举不可行")

    theoretical_rate = region.infimum_rate(nu)
    report = LdpReport(nu=nu.descriptor(), nu_info=nu.describe(), d=d,
                       region=region.describe(), theoretical_rate=theoretical_rate)
    logger.info(f"[实验层] 大偏差扫描: ν={nu.descriptor()}, d={d}, n={n_values}, "
                f"trials={trials}, 理论速率={theoretical_rate:.6g}")

    min_hits = ldp_config['min_hits']
    monte_carlo = [e for e in estimators if e.startswith('mc_')]

    for trial in range(trials):
        for n in n_values:
            frame_stream = derive_stream_id(FRAME_STREAM_TAG, trial=trial, index=n)
            frame = sample_frame(RngStream(master_seed, frame_stream), d, n)

            if trial == 0 and n == max(n_values) and monte_carlo:
                _pilot_check(report, nu, frame, region, samples, master_seed, n,
                             monte_carlo, ldp_config)

            for estimator in estimators:
                row = _estimate_row(nu, frame, region, samples, master_seed, n, trial,
                                    estimator, budget, min_hits, frame_stream)
                report.rows.append(row)
                if estimator.startswith('mc_') and not row.reliable:
                    message = (f"n={n}, trial={trial}, {estimator}: 命中数 {row.hits} "
                               f"少于 {min_hits}，该行标记为不可靠")
                    logger.warning(f"[实验层] {message}")
                    report.warnings.append(message)
            logger.debug(f"[实验层] 完成 trial={trial}, n={n}")

    if trials > 1:
        report.median_rows = _median_rows(report.rows)
    return report


def _estimate_row(nu, frame, region, samples, master_seed, n, trial, estimator,
                  budget, min_hits, frame_stream):
    if estimator.startswith('mc_'):
        # 两种模式共享同一组样本 (共同随机数)
        stream = RngStream(master_seed, derive_stream_id(SAMPLE_STREAM_TAG, trial=trial, index=n))
        mode = estimator[len('mc_'):]
        estimate = estimate_measure_mc(nu, frame, region, samples, stream, mode=mode)
        log_mu = estimate.log_mu
        return LdpRow(n=n, trial=trial, estimator=estimator, mu_hat=estimate.mu_hat,
                      log_mu=log_mu, empirical_rate=_empirical_rate(log_mu, n),
                      std_err=estimate.std_err, samples=samples, hits=estimate.hits,
                      reliable=estimate.hits >= min_hits, frame_stream=frame_stream)

    if estimator == 'exact_enum':
        exact = enumerate_exact(nu, frame, region, budget=budget)
        samples_used = exact.states
    else:
        exact = exact_gaussian_measure(nu, frame, region)
        samples_used = 0
    return LdpRow(n=n, trial=trial, estimator=estimator, mu_hat=exact.mu,
                  log_mu=exact.log_mu, empirical_rate=_empirical_rate(exact.log_mu, n),
                  std_err=None, samples=samples_used, hits=None, reliable=True,
                  frame_stream=frame_stream)


def _pilot_check(report, nu, frame, region, samples, master_seed, n, monte_carlo, ldp_config):
    """最大 n 处的试算: 预测命中数不足 min_hits 时给出警告"""
    pilot_samples = max(1000, int(samples * ldp_config['pilot_fraction']))
    for estimator in monte_carlo:
        stream = RngStream(master_seed, derive_stream_id(PILOT_STREAM_TAG, index=n))
        pilot = estimate_measure_mc(nu, frame, region, pilot_samples, stream,
                                    mode=estimator[len('mc_'):])
        predicted = pilot.mu_hat * samples
        sufficient = predicted >= ldp_config['min_hits']
        report.pilot_checks.append({
            'estimator': estimator,
            'n': n,
            'pilot_samples': pilot_samples,
            'pilot_hits': pilot.hits,
            'predicted_hits': predicted,
            'sufficient': sufficient,
        })
        if not sufficient:
            message = (f"试算预测 n={n} 处 {estimator} 的命中数约为 {predicted:.1f}，"
                       f"低于 {ldp_config['min_hits']}，结果可能不可靠")
            logger.warning(f"[实验层] {message}")
            report.warnings.append(message)
