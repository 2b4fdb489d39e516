"""Monte Carlo period-timing protocol and level discrimination.

One trial times 2s momentum inversions of the orbit (s full periods) with a
single clock of accuracy delta_t, so the period estimate is

    tau_hat = (s tau_n + eps) / s,   eps ~ N(0, delta_t^2),

with standard deviation delta_t / s. The alternative reading of the accuracy
(one error per inversion) is available behind ``per_inversion`` and yields
delta_t sqrt(2s) / (2s); the default stays with the single-clock model.

Adjacent levels are then compared by the d' statistic of their estimate
clouds. d' >= 2 (clouds separated by about their width) is the operational
definition of "distinguishable"; the sweep reports how the crossover level
moves under stricter and looser cuts. With the saturating accuracy
delta_t = hbar / (2 dE_n) the population d' equals 4 y(n) / hbar, which is
what ties the simulation back to the y criterion it validates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .criterion import DEGENERATE_PERIOD_NOTE, level_gap, y_function
from .errors import DegeneratePeriodError, OutOfRangeError
from .models import ModelSpec, classical_period, energy_level, level_gap_energy, n_min
from .noise import fmean, fvariance

__all__ = [
    "PeriodProtocol",
    "PeriodSampleSet",
    "DiscriminationResult",
    "SweepSummary",
    "simulate_period_measurement",
    "discriminate",
    "consistency_sweep",
    "D_PRIME_CUT",
    "D_PRIME_CAP",
]

D_PRIME_CUT = 2.0
D_PRIME_CAP = 1e9  # stands in for an infinite separation when delta_t = 0
_SENSITIVITY_CUTS = (1.5, 2.0, 3.0)


@dataclass(frozen=True)
class PeriodProtocol:
    """Timing protocol: s inversion pairs per trial, clock accuracy delta_t."""

    s: int = 1
    delta_t: float | None = None  # None: saturate per level at hbar / (2 dE_n)
    trials: int = 10000
    seed: int = 0
    per_inversion: bool = False

    def __post_init__(self):
        if not (isinstance(self.s, int) and not isinstance(self.s, bool) and self.s >= 1):
            raise ValueError(f"s must be an integer >= 1, got {self.s!r}")
        if not (isinstance(self.trials, int) and not isinstance(self.trials, bool) and self.trials >= 10):
            raise ValueError(f"trials must be an integer >= 10, got {self.trials!r}")
        if self.delta_t is not None:
            ok = isinstance(self.delta_t, (int, float)) and not isinstance(self.delta_t, bool)
            if not (ok and math.isfinite(self.delta_t) and self.delta_t >= 0.0):
                raise ValueError(f"delta_t must be None or a finite number >= 0, got {self.delta_t!r}")
        if not (isinstance(self.seed, int) and not isinstance(self.seed, bool) and 0 <= self.seed < 2**64):
            raise ValueError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")

    def estimator_sd(self, delta_t: float) -> float:
        if self.per_inversion:
            return delta_t * math.sqrt(2.0 * self.s) / (2.0 * self.s)
        return delta_t / self.s


@dataclass(frozen=True)
class PeriodSampleSet:
    n: int
    estimates: tuple[float, ...]
    protocol: PeriodProtocol
    tau_true: float
    delta_t: float  # the accuracy actually used (protocol value or saturating default)

    def mean(self) -> float:
        return fmean(self.estimates)

    def stdev(self) -> float:
        return math.sqrt(fvariance(self.estimates))


def _level_and_period(model: ModelSpec, n: int) -> tuple[float, float]:
    if model.kind == "numeric":
        from . import semiclassical

        e = semiclassical.quantize(model, n).energy
        return e, semiclassical.period_of_energy(model, e, self_check=False)
    return energy_level(model, n).energy, classical_period(model, n).tau


def _gap_energy(model: ModelSpec, n: int) -> float:
    if model.kind == "numeric":
        e_hi, _ = _level_and_period(model, n)
        e_lo, _ = _level_and_period(model, n - 1)
        return (e_hi - e_lo) / 2.0
    return level_gap_energy(model, n)


def _auto_delta_t(model: ModelSpec, n: int) -> float:
    # saturating accuracy hbar / (2 dE) at this level's gap (the gap above,
    # for the bottom level, which has no lower neighbor)
    gap_at = max(n, n_min(model) + 1)
    return model.units.hbar / (2.0 * _gap_energy(model, gap_at))


def simulate_period_measurement(model: ModelSpec, n: int, protocol: PeriodProtocol) -> PeriodSampleSet:
    """Monte Carlo period estimates for level n; trial i occupies RNG slot i."""
    if model.kind == "harmonic":
        raise DegeneratePeriodError(DEGENERATE_PERIOD_NOTE)
    _, tau = _level_and_period(model, n)
    delta_t = protocol.delta_t if protocol.delta_t is not None else _auto_delta_t(model, n)
    sd = protocol.estimator_sd(delta_t)
    gen = np.random.Generator(np.random.Philox(key=np.array([protocol.seed, n], dtype=np.uint64)))
    noise = gen.standard_normal(protocol.trials)
    estimates = tuple(float(tau + sd * z) for z in noise)
    return PeriodSampleSet(n=n, estimates=estimates, protocol=protocol, tau_true=tau, delta_t=delta_t)


@dataclass(frozen=True)
class DiscriminationResult:
    n_low: int
    n_high: int
    tau_low: float
    tau_high: float
    mean_low: float
    mean_high: float
    sd_low: float
    sd_high: float
    delta_t: float
    d_prime: float
    bayes_error: float
    noise_free: bool
    mc_resolvable: bool
    criterion_resolvable: bool


def _bayes_overlap(m1: float, s1: float, m2: float, s2: float) -> float:
    """Equal-prior error rate of the two fitted Gaussians, 0.5 * integral min."""
    if s1 <= 0.0 or s2 <= 0.0:
        return 0.5 if m1 == m2 else 0.0
    lo = min(m1 - 10.0 * s1, m2 - 10.0 * s2)
    hi = max(m1 + 10.0 * s1, m2 + 10.0 * s2)
    x, dx = np.linspace(lo, hi, 20001, retstep=True)
    f1 = np.exp(-0.5 * ((x - m1) / s1) ** 2) / (s1 * math.sqrt(2.0 * math.pi))
    f2 = np.exp(-0.5 * ((x - m2) / s2) ** 2) / (s2 * math.sqrt(2.0 * math.pi))
    g = np.minimum(f1, f2)
    integral = float(dx * (np.sum(g) - 0.5 * (g[0] + g[-1])))
    return min(max(0.5 * integral, 0.0), 0.5)


def discriminate(model: ModelSpec, n: int, protocol: PeriodProtocol) -> DiscriminationResult:
    """Simulate levels n-1 and n under one protocol and compare the clouds."""
    if n <= n_min(model):
        raise OutOfRangeError(f"{model.kind}: discrimination at n={n} needs level n-1")
    delta_t = protocol.delta_t if protocol.delta_t is not None else _auto_delta_t(model, n)
    fixed = replace(protocol, delta_t=delta_t)
    low = simulate_period_measurement(model, n - 1, fixed)
    high = simulate_period_measurement(model, n, fixed)
    mean_low, mean_high = low.mean(), high.mean()
    var_low, var_high = fvariance(low.estimates), fvariance(high.estimates)
    sd_low, sd_high = math.sqrt(var_low), math.sqrt(var_high)
    pooled = math.sqrt((var_low + var_high) / 2.0)
    noise_free = pooled == 0.0
    if noise_free:
        d_prime = 0.0 if mean_low == mean_high else D_PRIME_CAP
        bayes = 0.5 if mean_low == mean_high else 0.0
    else:
        d_prime = min(abs(mean_high - mean_low) / pooled, D_PRIME_CAP)
        bayes = _bayes_overlap(mean_low, sd_low, mean_high, sd_high)
    return DiscriminationResult(
        n_low=n - 1,
        n_high=n,
        tau_low=low.tau_true,
        tau_high=high.tau_true,
        mean_low=mean_low,
        mean_high=mean_high,
        sd_low=sd_low,
        sd_high=sd_high,
        delta_t=delta_t,
        d_prime=d_prime,
        bayes_error=bayes,
        noise_free=noise_free,
        mc_resolvable=d_prime >= D_PRIME_CUT,
        criterion_resolvable=level_gap(model, n).resolvable,
    )


@dataclass(frozen=True)
class SweepSummary:
    results: tuple[DiscriminationResult, ...]
    y_values: tuple[tuple[int, float], ...]
    mc_crossover: int | None
    criterion_threshold: int | None
    agreement_by_n: tuple[tuple[int, bool], ...]
    agreements: int
    disagreements: int
    sensitivity: tuple[tuple[float, int | None], ...]  # (d' cut, crossover under that cut)
    seed: int
    delta_t_mode: str  # "auto-saturating" or "fixed"

    @property
    def crossover_within_one(self) -> bool:
        if self.mc_crossover is None or self.criterion_threshold is None:
            return self.mc_crossover == self.criterion_threshold
        return abs(self.mc_crossover - self.criterion_threshold) <= 1


def consistency_sweep(model: ModelSpec, n_range: tuple[int, int], protocol: PeriodProtocol) -> SweepSummary:
    """Run discriminate over the range and compare MC and criterion verdicts.

    With delta_t = None each pair is timed at its own saturating accuracy
    hbar / (2 dE_n), which is the regime where the MC crossover and the
    y-threshold are expected to land within one level of each other.
    """
    lo, hi = n_range
    first = n_min(model) + 1
    if not (isinstance(lo, int) and isinstance(hi, int) and first <= lo <= hi):
        raise OutOfRangeError(f"n_range must be integers with {first} <= lo <= hi, got {n_range!r}")
    results = []
    ys = []
    for n in range(lo, hi + 1):
        results.append(discriminate(model, n, protocol))
        ys.append((n, y_function(model, n)))

    def crossover(cut: float):
        return next((r.n_high for r in results if r.d_prime < cut), None)

    mc_cross = crossover(D_PRIME_CUT)
    crit = next((n for n, y in ys if y < 0.5), None)
    agree = tuple((r.n_high, r.mc_resolvable == r.criterion_resolvable) for r in results)
    n_agree = sum(1 for _, ok in agree if ok)
    return SweepSummary(
        results=tuple(results),
        y_values=tuple(ys),
        mc_crossover=mc_cross,
        criterion_threshold=crit,
        agreement_by_n=agree,
        agreements=n_agree,
        disagreements=len(agree) - n_agree,
        sensitivity=tuple((cut, crossover(cut)) for cut in _SENSITIVITY_CUTS),
        seed=protocol.seed,
        delta_t_mode="fixed" if protocol.delta_t is not None else "auto-saturating",
    )
