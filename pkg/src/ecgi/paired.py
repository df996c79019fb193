"""Paired comparison of two score vectors (side A vs side B).

The Student-t tail probability is computed in-house from the regularized
incomplete beta function, evaluated by the modified Lentz continued
fraction.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import LengthMismatch, TooFewSamples

CF_EPS = 1e-16
CF_TINY = 1e-300
CF_MAX_ITER = 10_000


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b), modified Lentz."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < CF_TINY:
        d = CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # the fraction converges fast only below the mean of the beta density
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isnan(t):
        return math.nan
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return min(1.0, betainc(0.5 * df, 0.5, df / (df + t * t)))


def paired_t_test(a, b) -> tuple[float, float]:
    """Two-sided paired t-test; returns ``(t, p)`` with df = n - 1."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch(f"vectors of length {a.size} and {b.size}")
    n = a.size
    if n < 2:
        raise TooFewSamples("paired t-test needs at least 2 pairs")
    d = a - b
    mean = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean * math.sqrt(n) / sd
    return t, t_two_sided_p(t, n - 1)


@dataclass(frozen=True)
class PairScore:
    pair_id: str
    s_a: float
    s_b: float

    @property
    def delta(self) -> float:
        return self.s_a - self.s_b


@dataclass
class BoxplotSummary:
    median: float
    q25: float
    q75: float
    whisker_low: float
    whisker_high: float
    outliers: list = field(default_factory=list)


def boxplot_stats(v) -> BoxplotSummary:
    """Tukey box: linearly interpolated quartiles, 1.5 IQR whiskers."""
    v = np.sort(np.asarray(v, dtype=np.float64))
    if v.size == 0:
        raise TooFewSamples("boxplot of an empty vector")
    q25, median, q75 = (float(q) for q in np.quantile(v, [0.25, 0.5, 0.75]))
    iqr = q75 - q25
    lo, hi = q25 - 1.5 * iqr, q75 + 1.5 * iqr
    inside = v[(v >= lo) & (v <= hi)]
    return BoxplotSummary(
        median=median,
        q25=q25,
        q75=q75,
        whisker_low=float(inside.min()),
        whisker_high=float(inside.max()),
        outliers=[float(x) for x in v[(v < lo) | (v > hi)]],
    )


@dataclass
class PairedReport:
    n: int
    mean_a: float
    mean_b: float
    t_statistic: float
    p_value: float
    pct_a_greater: float
    boxplot_a: BoxplotSummary
    boxplot_b: BoxplotSummary
    pairs: list = field(default_factory=list)

    def as_dict(self) -> dict:
        out = asdict(self)
        out.pop("pairs")
        return out


def summarize(pairs) -> PairedReport:
    """Means, two-sided paired t-test, strict win rate of side A, boxplots."""
    pairs = list(pairs)
    if len(pairs) < 2:
        raise TooFewSamples("a paired report needs at least 2 pairs")
    a = np.array([p.s_a for p in pairs])
    b = np.array([p.s_b for p in pairs])
    t, p = paired_t_test(a, b)
    return PairedReport(
        n=len(pairs),
        mean_a=float(a.mean()),
        mean_b=float(b.mean()),
        t_statistic=t,
        p_value=p,
        pct_a_greater=100.0 * int(np.sum(a > b)) / len(pairs),
        boxplot_a=boxplot_stats(a),
        boxplot_b=boxplot_stats(b),
        pairs=pairs,
    )
