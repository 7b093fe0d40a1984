"""Shared statistical kernels: correlation, t-test p-values, log-log fits.

Kept dependency-light on purpose: the regularized incomplete beta used
for Student-t tail probabilities is evaluated by continued fraction so
results can be validated against published tables and a quadrature
oracle in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    stderr_slope: float
    r2: float
    n: int


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation coefficient of two equal-length series.

    Raises
    ------
    ValueError
        If the series are shorter than 3, have mismatched lengths, or
        either has zero variance.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape:
        raise ValueError("series lengths differ")
    if xa.size < 3:
        raise ValueError("need at least 3 points")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sx = float(np.sqrt(np.sum(dx * dx)))
    sy = float(np.sqrt(np.sum(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance series")
    r = float(np.sum(dx * dy) / (sx * sy))
    return max(-1.0, min(1.0, r))


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (Lentz's method)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-12:
            break
    return h


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b), relative tolerance ~1e-10."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def two_sided_t_p(t: float, df: int) -> float:
    """Two-sided p-value of a Student-t statistic with df degrees of freedom."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if math.isinf(t):
        return 0.0
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t))


def t_test_p(rho: float, n: int) -> float:
    """Two-sided p-value for a Pearson correlation of n paired samples.

    Uses t = rho * sqrt((n - 2) / (1 - rho^2)) against Student-t with
    n - 2 degrees of freedom; |rho| = 1 maps to p = 0 by convention.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho outside [-1, 1]")
    if abs(rho) == 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return two_sided_t_p(t, n - 2)


def linear_fit(x: Sequence[float], y: Sequence[float]) -> FitResult:
    """Ordinary least squares y = slope*x + intercept with slope stderr."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    n = xa.size
    if n < 2 or ya.size != n:
        raise ValueError("need >= 2 paired points")
    xm, ym = xa.mean(), ya.mean()
    sxx = float(np.sum((xa - xm) ** 2))
    if sxx == 0.0:
        raise ValueError("need >= 2 distinct x values")
    slope = float(np.sum((xa - xm) * (ya - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = ya - (slope * xa + intercept)
    ss_res = float(np.sum(resid * resid))
    ss_tot = float(np.sum((ya - ym) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res <= 1e-30 else 0.0
    else:
        r2 = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 else 0.0
    return FitResult(slope, intercept, stderr, r2, int(n))


def loglog_fit(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least-squares power-law fit: slope of ln v against ln k.

    All coordinates must be strictly positive.
    """
    if len(points) < 2:
        raise ValueError("need >= 2 points")
    ks = [p[0] for p in points]
    vs = [p[1] for p in points]
    if min(ks) <= 0 or min(vs) <= 0:
        raise ValueError("log-log fit requires positive values")
    return linear_fit(np.log(ks), np.log(vs))


def exp_survival_fit(points: Sequence[tuple[float, float]]) -> float:
    """Exponential decay rate fitted to survival-curve points.

    Fits ln P = -rate * d + c by least squares over (duration, P) pairs
    with P in (0, 1].
    """
    if len(points) < 2:
        raise ValueError("need >= 2 points")
    ds = [p[0] for p in points]
    ps = [p[1] for p in points]
    if min(ps) <= 0 or max(ps) > 1.0:
        raise ValueError("probabilities must lie in (0, 1]")
    fit = linear_fit(ds, np.log(ps))
    return -fit.slope
