"""Mutant sampling: batch strategies and FSCI sequential sampling.

The Clopper-Pearson bounds are computed dependency-free: beta quantiles
by bisection on the regularized incomplete beta function, evaluated with
the standard continued fraction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

DEFAULT_WIDTH = 0.10
DEFAULT_ALPHA = 0.05

_BISECT_ITERS = 200
_BISECT_TOL = 1e-12


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    alpha: float

    @property
    def width(self):
        return self.upper - self.lower


@dataclass
class FsciResult:
    examined: list  # ordered (mutant id, killed) pairs
    estimate: float
    interval: ConfidenceInterval
    stopped_by: str  # width-threshold | pool-exhausted
    threshold_w: float
    alpha: float


def _betacf(a, b, x):
    """Continued fraction for the incomplete beta (Lentz's method)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
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
        if abs(delta - 1.0) < 1e-15:
            break
    return h


def betainc_reg(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def beta_quantile(q, a, b):
    """Inverse of I_x(a, b) by bisection."""
    lo, hi = 0.0, 1.0
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if betainc_reg(a, b, mid) < q:
            lo = mid
        else:
            hi = mid
        if hi - lo < _BISECT_TOL:
            break
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def clopper_pearson(k, n, alpha):
    """Exact binomial confidence interval at level 1 - alpha."""
    if not (0 < alpha < 1):
        raise DomainError("alpha must be in (0, 1)")
    if n < 0 or k < 0 or k > n:
        raise DomainError("need 0 <= k <= n")
    if n == 0:
        return ConfidenceInterval(0.0, 1.0, alpha)
    half = alpha / 2.0
    if k == 0:
        lower = 0.0
    elif k == n:
        lower = half ** (1.0 / n)
    else:
        lower = beta_quantile(half, k, n - k + 1)
    if k == n:
        upper = 1.0
    elif k == 0:
        upper = 1.0 - half ** (1.0 / n)
    else:
        upper = beta_quantile(1.0 - half, k + 1, n - k)
    return ConfidenceInterval(lower, upper, alpha)


def sample(mutants, strategy, value, rng_seed):
    """Batch sampling; returns selected mutants in input order.

    strategy: proportional-uniform | proportional-method | fixed-size
    value: ratio r in (0, 1] for the proportional strategies, size n for
    fixed-size.
    """
    rng = random.Random(rng_seed)
    if strategy == "proportional-uniform":
        r = float(value)
        if not (0 < r <= 1):
            raise DomainError("ratio must be in (0, 1]")
        count = math.ceil(r * len(mutants))
        chosen = set(rng.sample(range(len(mutants)), count))
        return [m for i, m in enumerate(mutants) if i in chosen]
    if strategy == "proportional-method":
        r = float(value)
        if not (0 < r <= 1):
            raise DomainError("ratio must be in (0, 1]")
        groups = {}
        for i, m in enumerate(mutants):
            groups.setdefault(m.function, []).append(i)
        chosen = set()
        for indices in groups.values():
            count = max(1, math.ceil(r * len(indices)))
            chosen.update(rng.sample(indices, count))
        return [m for i, m in enumerate(mutants) if i in chosen]
    if strategy == "fixed-size":
        n = int(value)
        if n < 0:
            raise DomainError("sample size must be >= 0")
        count = min(n, len(mutants))
        chosen = set(rng.sample(range(len(mutants)), count))
        return [m for i, m in enumerate(mutants) if i in chosen]
    raise DomainError("unknown strategy: %s" % strategy)


def fsci(pool, execute, threshold_w=DEFAULT_WIDTH, alpha=DEFAULT_ALPHA, rng_seed=0,
         trace=None):
    """Sequential sampling with the fixed-width stopping rule.

    Draws mutants uniformly without replacement, executing each via the
    `execute` callback (mutant -> killed). Stops once the interval width
    drops below threshold_w, or when the pool is exhausted.
    """
    if not pool:
        raise DomainError("empty mutant pool")
    if not (0 < threshold_w < 1):
        raise DomainError("threshold must be in (0, 1)")
    rng = random.Random(rng_seed)
    order = rng.sample(list(pool), len(pool))
    examined = []
    kills = 0
    interval = clopper_pearson(0, 0, alpha)
    stopped_by = "pool-exhausted"
    for mutant in order:
        killed = bool(execute(mutant))
        kills += killed
        examined.append((getattr(mutant, "id", mutant), killed))
        interval = clopper_pearson(kills, len(examined), alpha)
        if trace is not None:
            trace(len(examined), kills, interval)
        if interval.width < threshold_w:
            stopped_by = "width-threshold"
            break
    return FsciResult(
        examined=examined,
        estimate=kills / len(examined),
        interval=interval,
        stopped_by=stopped_by,
        threshold_w=threshold_w,
        alpha=alpha,
    )
