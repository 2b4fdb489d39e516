"""Gaussian measurement noise: ensembles, ensemble-mean state, SQL bookkeeping.

A position (or momentum) measurement of accuracy delta returns
x_i = center + xi_i with xi_i ~ N(0, delta^2). Averaging exp(-i p xi / hbar)
over the ensemble gives the Gaussian characteristic factor
exp(-p^2 delta^2 / (2 hbar^2)), which is the testable content of the
ensemble-mean-state picture. The preparation bound is the standard quantum
limit delta_x * delta_p >= hbar / 2.

Reproducibility contract: ensembles are drawn from the counter-based
Philox(4x64-10) bit generator with the 128-bit key (seed, stream), so a
fixed (seed, stream, count) triple yields the same samples on every platform
and independent streams never overlap. Means and variances are accumulated
with exact floating-point summation (math.fsum).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    DegenerateEnsembleError,
    InvalidCountError,
    InvalidSigmaError,
    UnsupportedModelError,
)
from .models import ModelSpec, energy_level

__all__ = [
    "NoiseBudget",
    "MeasurementEnsemble",
    "CharacteristicCheck",
    "GaussianState",
    "sample_ensemble",
    "characteristic_factor",
    "characteristic_check",
    "characteristic_sample_mean",
    "reconstruct_state",
    "noise_widths",
    "harmonic_energy_error",
    "required_noise_product_for_resolution",
    "fmean",
    "fvariance",
]

SQL_SLACK = 1e-12  # widths at hbar/2 - slack still count as preparable


def fmean(values) -> float:
    vals = list(values)
    if not vals:
        raise ValueError("mean of an empty sequence")
    return math.fsum(vals) / len(vals)


def fvariance(values, ddof: int = 1) -> float:
    vals = list(values)
    if len(vals) <= ddof:
        raise ValueError(f"variance needs more than {ddof} values, got {len(vals)}")
    m = math.fsum(vals) / len(vals)
    # second pass with a correction term for the residual mean error
    ss = math.fsum((v - m) ** 2 for v in vals)
    corr = math.fsum(v - m for v in vals) ** 2 / len(vals)
    return (ss - corr) / (len(vals) - ddof)


@dataclass(frozen=True)
class NoiseBudget:
    delta_x: float
    delta_p: float
    hbar: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.delta_x) and self.delta_x >= 0.0):
            raise InvalidSigmaError(f"delta_x must be finite and >= 0, got {self.delta_x!r}")
        if not (math.isfinite(self.delta_p) and self.delta_p >= 0.0):
            raise InvalidSigmaError(f"delta_p must be finite and >= 0, got {self.delta_p!r}")
        if not (math.isfinite(self.hbar) and self.hbar > 0.0):
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")

    @property
    def product_over_hbar(self) -> float:
        return self.delta_x * self.delta_p / self.hbar

    @property
    def preparable(self) -> bool:
        return self.product_over_hbar >= 0.5 - SQL_SLACK


@dataclass(frozen=True)
class MeasurementEnsemble:
    samples: tuple[float, ...]
    seed: int
    stream: int
    true_center: float
    sigma: float

    @property
    def count(self) -> int:
        return len(self.samples)

    def mean(self) -> float:
        return fmean(self.samples)

    def stdev(self) -> float:
        return math.sqrt(fvariance(self.samples))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seed", "stream", "center", "sigma", "count"])
            w.writerow([self.seed, self.stream, repr(self.true_center), repr(self.sigma), self.count])
            w.writerow(["outcome"])
            for v in self.samples:
                w.writerow([repr(v)])

    @classmethod
    def from_csv(cls, path) -> "MeasurementEnsemble":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if len(rows) < 3 or rows[0] != ["seed", "stream", "center", "sigma", "count"] or rows[2] != ["outcome"]:
            raise ValueError(f"not an ensemble CSV: {path}")
        seed, stream, center, sigma, count = rows[1]
        samples = tuple(float(r[0]) for r in rows[3:])
        if len(samples) != int(count):
            raise ValueError(f"ensemble CSV declares {count} outcomes but holds {len(samples)}")
        return cls(samples=samples, seed=int(seed), stream=int(stream),
                   true_center=float(center), sigma=float(sigma))


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def sample_ensemble(center: float, sigma: float, count: int, seed: int, stream: int = 0) -> MeasurementEnsemble:
    """Draw count outcomes center + N(0, sigma^2); bit-reproducible per (seed, stream)."""
    if not (isinstance(count, int) and not isinstance(count, bool) and count >= 2):
        raise InvalidCountError(f"count must be an integer >= 2, got {count!r}")
    if isinstance(sigma, bool) or not isinstance(sigma, (int, float)) or not math.isfinite(sigma) or sigma < 0:
        raise InvalidSigmaError(f"sigma must be finite and >= 0, got {sigma!r}")
    if not math.isfinite(center):
        raise ValueError(f"center must be finite, got {center!r}")
    if not (isinstance(seed, int) and not isinstance(seed, bool) and 0 <= seed < 2**64):
        raise ValueError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    if not (isinstance(stream, int) and not isinstance(stream, bool) and 0 <= stream < 2**64):
        raise ValueError(f"stream must be an integer in [0, 2^64), got {stream!r}")
    noise = _rng(seed, stream).standard_normal(count)
    samples = tuple(float(center + sigma * z) for z in noise)
    return MeasurementEnsemble(samples=samples, seed=seed, stream=stream,
                               true_center=float(center), sigma=float(sigma))


def characteristic_factor(delta_x: float, p: float, hbar: float = 1.0) -> float:
    """Ensemble-mean attenuation exp(-p^2 delta_x^2 / (2 hbar^2))."""
    if not (math.isfinite(delta_x) and math.isfinite(p)):
        raise ValueError("delta_x and p must be finite")
    if not (math.isfinite(hbar) and hbar > 0.0):
        raise ValueError(f"hbar must be positive, got {hbar!r}")
    return math.exp(-(p * delta_x) ** 2 / (2.0 * hbar**2))


@dataclass(frozen=True)
class CharacteristicCheck:
    p: float
    delta_x: float
    mc_real: float
    mc_imag: float
    exact: float
    se_real: float
    se_imag: float

    @property
    def within_3se(self) -> bool:
        re_ok = abs(self.mc_real - self.exact) <= 3.0 * self.se_real
        im_ok = abs(self.mc_imag) <= 3.0 * self.se_imag
        return re_ok and im_ok


def characteristic_check(ensemble: MeasurementEnsemble, p: float, hbar: float = 1.0) -> CharacteristicCheck:
    """Monte Carlo mean of exp(-i p xi / hbar) against the Gaussian factor."""
    xi = [x - ensemble.true_center for x in ensemble.samples]
    cos_terms = [math.cos(p * v / hbar) for v in xi]
    sin_terms = [-math.sin(p * v / hbar) for v in xi]
    n = len(xi)
    return CharacteristicCheck(
        p=p,
        delta_x=ensemble.sigma,
        mc_real=fmean(cos_terms),
        mc_imag=fmean(sin_terms),
        exact=characteristic_factor(ensemble.sigma, p, hbar),
        se_real=math.sqrt(fvariance(cos_terms) / n),
        se_imag=math.sqrt(fvariance(sin_terms) / n),
    )


def characteristic_sample_mean(ensemble: MeasurementEnsemble, p: float, hbar: float = 1.0) -> complex:
    chk = characteristic_check(ensemble, p, hbar)
    return complex(chk.mc_real, chk.mc_imag)


@dataclass(frozen=True)
class GaussianState:
    """Ensemble-mean Gaussian profile after noisy position/momentum readout."""

    r: float
    d: float
    delta_x: float
    delta_p: float
    hbar: float = 1.0

    @property
    def budget(self) -> NoiseBudget:
        return NoiseBudget(self.delta_x, self.delta_p, self.hbar)

    @property
    def sub_sql(self) -> bool:
        """True when the widths are too sharp to prepare, product < hbar/2."""
        return not self.budget.preparable

    def position_density(self, x):
        if self.delta_x <= 0.0:
            raise ValueError("position density undefined for a zero width")
        arr = np.asarray(x, dtype=float)
        norm = 1.0 / (self.delta_x * math.sqrt(2.0 * math.pi))
        return norm * np.exp(-((arr - self.r) ** 2) / (2.0 * self.delta_x**2))

    def momentum_density(self, p):
        if self.delta_p <= 0.0:
            raise ValueError("momentum density undefined for a zero width")
        arr = np.asarray(p, dtype=float)
        norm = 1.0 / (self.delta_p * math.sqrt(2.0 * math.pi))
        return norm * np.exp(-((arr - self.d) ** 2) / (2.0 * self.delta_p**2))


def reconstruct_state(position_ens: MeasurementEnsemble, momentum_ens: MeasurementEnsemble,
                      hbar: float = 1.0) -> GaussianState:
    """Fit the ensemble-mean Gaussian: centers from means, widths from sample sd."""

    def width(ens: MeasurementEnsemble, label: str) -> float:
        if ens.count < 2:
            raise InvalidCountError(f"{label} ensemble needs at least 2 outcomes")
        w = math.sqrt(fvariance(ens.samples))
        if w == 0.0 and ens.sigma > 0.0:
            raise DegenerateEnsembleError(
                f"{label} ensemble declares sigma={ens.sigma:.6g} but its sample variance is zero"
            )
        return w

    return GaussianState(
        r=position_ens.mean(),
        d=momentum_ens.mean(),
        delta_x=width(position_ens, "position"),
        delta_p=width(momentum_ens, "momentum"),
        hbar=hbar,
    )


# -- harmonic-oscillator error propagation --------------------------------


def noise_widths(m: float, k: float, a: float, hbar: float = 1.0) -> tuple[float, float]:
    """Balanced noise pair (delta_q, delta_p) with product a^2 hbar / 2."""
    if m <= 0 or k <= 0:
        raise ValueError("m and k must be positive")
    if a < 0:
        raise ValueError(f"noise scale a must be >= 0, got {a!r}")
    omega = math.sqrt(k / m)
    return math.sqrt(hbar / (2.0 * m * omega)) * a, math.sqrt(m * hbar * omega / 2.0) * a


def harmonic_energy_error(q: float, p: float, m: float, k: float, a: float,
                          hbar: float = 1.0) -> float:
    """First-order energy error |p/m| delta_p + |k q| delta_q at noise scale a.

    Equals [|p| sqrt(hbar w / 2m) + k |q| sqrt(hbar / 2mw)] a, and its square
    is (2/hbar) [same bracket]^2 delta_p delta_q.
    """
    if m <= 0 or k <= 0:
        raise ValueError("m and k must be positive")
    if a < 0:
        raise ValueError(f"noise scale a must be >= 0, got {a!r}")
    omega = math.sqrt(k / m)
    bracket = abs(p) * math.sqrt(hbar * omega / (2.0 * m)) + k * abs(q) * math.sqrt(hbar / (2.0 * m * omega))
    return bracket * a


def required_noise_product_for_resolution(model: ModelSpec, n: int) -> float:
    """Smallest delta_p delta_q / hbar that lets a classical energy readout
    tell level n from its neighbors.

    The worst-case (largest) first-order error over the classical orbit of
    E_n is maximized numerically over the phase; the noise scale a is then
    chosen so that error equals the half spacing hbar w / 2, and the
    corresponding product a^2/2 is returned. Stays below 1/2 for every n.
    """
    if model.kind != "harmonic":
        raise UnsupportedModelError(f"noise-product resolution analysis is for harmonic models, not {model.kind!r}")
    if not (isinstance(n, int) and not isinstance(n, bool) and n >= 0):
        raise ValueError(f"n must be an integer >= 0, got {n!r}")
    hbar = model.units.hbar
    m = model.params.mass
    k = model.params.stiffness
    omega = math.sqrt(k / m)
    e = energy_level(model, n).energy
    p_amp = math.sqrt(2.0 * m * e)
    q_amp = math.sqrt(2.0 * e / k)
    c_p = math.sqrt(hbar * omega / (2.0 * m))
    c_q = k * math.sqrt(hbar / (2.0 * m * omega))

    def bracket(phi):
        return np.abs(p_amp * np.cos(phi)) * c_p + np.abs(q_amp * np.sin(phi)) * c_q

    # coarse scan, then a bounded polish around the best grid point
    phis = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
    vals = bracket(phis)
    i = int(np.argmax(vals))
    step = phis[1] - phis[0]
    res = minimize_scalar(lambda t: -float(bracket(t)),
                          bounds=(phis[i] - step, phis[i] + step),
                          method="bounded", options={"xatol": 1e-12})
    b_max = max(float(vals[i]), -float(res.fun))
    a_req = hbar * omega / (2.0 * b_max)
    return a_req**2 / 2.0
