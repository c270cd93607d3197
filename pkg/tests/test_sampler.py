"""Sampler tests against an independent incomplete-beta oracle."""

import math
import random
from dataclasses import dataclass

import pytest
from scipy.special import betainc as scipy_betainc

from mutafuzz.errors import DomainError
from mutafuzz.sampler import ConfidenceInterval, clopper_pearson, fsci, sample


def oracle_beta_quantile(q, a, b):
    """Bisection on scipy's regularized incomplete beta (independent of
    the implementation's own continued-fraction evaluation)."""
    lo, hi = 0.0, 1.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if scipy_betainc(a, b, mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def oracle_clopper_pearson(k, n, alpha):
    if n == 0:
        return (0.0, 1.0)
    lower = 0.0 if k == 0 else oracle_beta_quantile(alpha / 2, k, n - k + 1)
    upper = 1.0 if k == n else oracle_beta_quantile(1 - alpha / 2, k + 1, n - k)
    return (lower, upper)


@dataclass(frozen=True)
class FakeMutant:
    id: str


def pool(n):
    return [FakeMutant("m%d" % i) for i in range(n)]


def test_k0_closed_form():
    ci = clopper_pearson(0, 10, 0.05)
    assert ci.lower == 0.0
    assert abs(ci.upper - (1 - 0.025 ** (1 / 10))) <= 1e-12
    assert abs(ci.upper - 0.30850) < 5e-6


def test_half_kills():
    ci = clopper_pearson(5, 10, 0.05)
    assert abs(ci.lower - 0.18709) < 5e-6
    assert abs(ci.upper - 0.81291) < 5e-6


def test_no_data():
    ci = clopper_pearson(0, 0, 0.3)
    assert (ci.lower, ci.upper) == (0.0, 1.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        clopper_pearson(5, 4, 0.05)
    with pytest.raises(DomainError):
        clopper_pearson(-1, 4, 0.05)
    with pytest.raises(DomainError):
        clopper_pearson(1, 4, 1.5)


@pytest.mark.parametrize("alpha", [0.01, 0.05, 0.10])
def test_oracle_equivalence_small_grid(alpha):
    for n in range(1, 21):
        for k in range(0, n + 1):
            ci = clopper_pearson(k, n, alpha)
            lo, hi = oracle_clopper_pearson(k, n, alpha)
            assert abs(ci.lower - lo) <= 1e-9, (k, n, alpha)
            assert abs(ci.upper - hi) <= 1e-9, (k, n, alpha)


def test_symmetry():
    for n in range(1, 30):
        for k in range(0, n + 1):
            a = clopper_pearson(k, n, 0.05)
            b = clopper_pearson(n - k, n, 0.05)
            assert abs(a.lower - (1 - b.upper)) <= 1e-9


def test_interval_nesting():
    for (k, n) in [(0, 1), (1, 2), (2, 4), (5, 10), (9, 10)]:
        w1 = clopper_pearson(k, n, 0.05).width
        w2 = clopper_pearson(2 * k, 2 * n, 0.05).width
        assert w2 < w1


def test_fsci_always_live_stops_at_36():
    result = fsci(pool(100), lambda m: False, 0.10, 0.05, rng_seed=7)
    assert result.stopped_by == "width-threshold"
    assert len(result.examined) == 36
    assert result.estimate == 0.0
    assert result.interval.lower == 0.0
    assert abs(result.interval.upper - 0.097393) < 1e-5
    # one step earlier the rule must not have fired
    assert clopper_pearson(0, 35, 0.05).width >= 0.10


def test_fsci_always_kill_symmetric():
    result = fsci(pool(100), lambda m: True, 0.10, 0.05, rng_seed=7)
    assert len(result.examined) == 36
    assert result.interval.upper == 1.0
    assert abs(result.interval.lower - 0.902607) < 1e-5


def test_fsci_pool_exhausted():
    result = fsci(pool(5), lambda m: random.Random(0).random() < 0.5, 0.10, 0.05, 1)
    assert result.stopped_by == "pool-exhausted"
    assert len(result.examined) == 5
    assert result.estimate == sum(k for _, k in result.examined) / 5


def test_fsci_estimate_inside_interval():
    for seed in range(5):
        rng = random.Random(seed)
        result = fsci(pool(400), lambda m: rng.random() < 0.3, 0.10, 0.05, seed)
        assert result.interval.lower <= result.estimate <= result.interval.upper


def test_fsci_no_duplicates_and_deterministic():
    rng_out = []
    for _ in range(2):
        rng = random.Random(3)
        result = fsci(pool(300), lambda m: rng.random() < 0.5, 0.10, 0.05, 42)
        ids = [mid for mid, _ in result.examined]
        assert len(ids) == len(set(ids))
        rng_out.append(ids)
    assert rng_out[0] == rng_out[1]


def test_fsci_empty_pool():
    with pytest.raises(DomainError):
        fsci([], lambda m: False)


def test_fsci_monte_carlo_coverage():
    hits = 0
    runs = 0
    for p in [i / 10 for i in range(1, 10)]:
        for seed in range(200):
            rng = random.Random(1000 * int(p * 10) + seed)
            result = fsci(pool(600), lambda m: rng.random() < p, 0.10, 0.05, seed)
            if result.stopped_by == "width-threshold":
                assert result.interval.width < 0.10
            if result.interval.lower <= p <= result.interval.upper:
                hits += 1
            runs += 1
    assert hits / runs >= 0.93


def test_proportional_uniform_exact_count():
    mutants = pool(10)
    out = sample(mutants, "proportional-uniform", 0.5, 11)
    assert len(out) == 5
    assert len({m.id for m in out}) == 5


def test_proportional_method_ceiling():
    @dataclass(frozen=True)
    class M:
        id: str
        function: str

    mutants = [M("a%d" % i, "f") for i in range(4)] + [M("b%d" % i, "g") for i in range(3)]
    out = sample(mutants, "proportional-method", 0.5, 5)
    by_fn = {}
    for m in out:
        by_fn[m.function] = by_fn.get(m.function, 0) + 1
    assert by_fn == {"f": 2, "g": 2}  # ceil(2.0)=2, ceil(1.5)=2


def test_fixed_size_clamps():
    out = sample(pool(10), "fixed-size", 100, 0)
    assert len(out) == 10


def test_sample_determinism_and_domain():
    a = sample(pool(50), "proportional-uniform", 0.3, 9)
    b = sample(pool(50), "proportional-uniform", 0.3, 9)
    assert [m.id for m in a] == [m.id for m in b]
    with pytest.raises(DomainError):
        sample(pool(5), "proportional-uniform", 1.5, 0)
    with pytest.raises(DomainError):
        sample(pool(5), "proportional-uniform", 0.0, 0)
