"""Closed-form 1-D bound systems and their classical periods.

Four analytic wells plus a sampled-table potential:

* box: infinite square well of width a, E_n = (hbar pi n)^2 / (2 m a^2), n >= 1.
* harmonic: U = k x^2 / 2, E_n = hbar omega (n + 1/2), n >= 0; the classical
  period 2 pi / omega does not depend on the level.
* hydrogenoid: radial s-orbit in U = -Z e^2 / r with reduced mass mu,
  E_n = -mu Z^2 e^4 / (2 hbar^2 n^2) and Kepler period
  tau_n = 2 pi hbar^3 n^3 / (mu Z^2 e^4), n >= 1. The coupling e^2 carries
  dimension energy x length (Gaussian convention), so e = 1 in atomic units.
* morse: U = D (exp(-2 a x) - 2 exp(-a x)) with omega = a sqrt(2 D / M) and
  zeta = 2 D / (hbar omega). The bound spectrum of this potential is
  E_n = -D (1 - (n + 1/2) / zeta)^2, which Bohr-Sommerfeld quantization with
  the half-integer correction reproduces exactly. Levels are enumerated while
  (n + 1/2) < zeta / 2, i.e. while E_n stays below a quarter of the well
  depth; the well supports further near-dissociation orbits, reachable
  explicitly through the semiclassical engine, but they are outside the
  declared level budget of this model.
* numeric: a strictly increasing table of (x, U) samples with an interior
  minimum, interpolated by a monotone cubic (PCHIP). No closed forms; use the
  semiclassical engine.

Parameters are stated in the model's declared unit system and converted to SI
once; every formula is evaluated in SI and converted back on return.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    ConfigError,
    ModelDefinitionError,
    OutOfRangeError,
    PotentialDomainError,
    UnsupportedModelError,
)
from .units import HBAR_SI, UnitSystem, get_unit_system, MOLECULAR, NATURAL_BOX, OSCILLATOR, ATOMIC

__all__ = [
    "BoxParams",
    "HarmonicParams",
    "HydrogenoidParams",
    "MorseParams",
    "NumericPotentialParams",
    "ModelSpec",
    "EnergyLevel",
    "PeriodPoint",
    "WellProfile",
    "energy_level",
    "classical_period",
    "bound_levels",
    "level_gap_energy",
    "level_gap_period",
    "n_min",
    "n_max",
    "well_profile",
    "model_from_dict",
    "model_from_json",
    "PRESETS",
    "get_preset",
]

KINDS = ("box", "harmonic", "hydrogenoid", "morse", "numeric")


@dataclass(frozen=True)
class BoxParams:
    mass: float
    width: float


@dataclass(frozen=True)
class HarmonicParams:
    mass: float
    stiffness: float


@dataclass(frozen=True)
class HydrogenoidParams:
    reduced_mass: float
    z: int
    charge: float = 1.0


@dataclass(frozen=True)
class MorseParams:
    mass: float
    depth: float
    alpha: float  # inverse-length range parameter


@dataclass(frozen=True)
class NumericPotentialParams:
    mass: float
    x: tuple[float, ...]
    u: tuple[float, ...]


Params = Union[BoxParams, HarmonicParams, HydrogenoidParams, MorseParams, NumericPotentialParams]


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    energy: float
    bound: bool = True


@dataclass(frozen=True)
class PeriodPoint:
    n: int
    tau: float


def _positive(name: str, value, kind: str) -> float:
    if not (isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value) and value > 0):
        raise ModelDefinitionError(f"{kind}: {name} must be a positive finite number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ModelSpec:
    """A model kind, its parameters, and the unit system they are stated in."""

    kind: str
    params: Params
    units: UnitSystem

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelDefinitionError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        expected = {
            "box": BoxParams,
            "harmonic": HarmonicParams,
            "hydrogenoid": HydrogenoidParams,
            "morse": MorseParams,
            "numeric": NumericPotentialParams,
        }[self.kind]
        if not isinstance(self.params, expected):
            raise ModelDefinitionError(f"{self.kind}: params must be {expected.__name__}")
        getattr(self, f"_validate_{self.kind}")()

    def _validate_box(self):
        _positive("mass", self.params.mass, "box")
        _positive("width", self.params.width, "box")

    def _validate_harmonic(self):
        _positive("mass", self.params.mass, "harmonic")
        _positive("stiffness", self.params.stiffness, "harmonic")

    def _validate_hydrogenoid(self):
        p = self.params
        _positive("reduced_mass", p.reduced_mass, "hydrogenoid")
        _positive("charge", p.charge, "hydrogenoid")
        if not (isinstance(p.z, int) and not isinstance(p.z, bool) and p.z >= 1):
            raise ModelDefinitionError(f"hydrogenoid: z must be an integer >= 1, got {p.z!r}")

    def _validate_morse(self):
        _positive("mass", self.params.mass, "morse")
        _positive("depth", self.params.depth, "morse")
        _positive("alpha", self.params.alpha, "morse")
        zeta = self.zeta
        if zeta <= 1.0:
            raise ModelDefinitionError(
                f"morse: zeta = 2 depth / (hbar omega) must exceed 1 for a bound level to exist, got {zeta:.6g}"
            )

    def _validate_numeric(self):
        p = self.params
        _positive("mass", p.mass, "numeric")
        if not (isinstance(p.x, tuple) and isinstance(p.u, tuple)):
            raise ModelDefinitionError("numeric: x and u must be tuples of floats")
        if len(p.x) < 3 or len(p.x) != len(p.u):
            raise ModelDefinitionError(
                f"numeric: need at least 3 samples with matching lengths, got {len(p.x)} x and {len(p.u)} u"
            )
        xs = np.asarray(p.x, dtype=float)
        us = np.asarray(p.u, dtype=float)
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(us))):
            raise ModelDefinitionError("numeric: table entries must be finite")
        if not np.all(np.diff(xs) > 0):
            raise ModelDefinitionError("numeric: abscissae must be strictly increasing")
        imin = int(np.argmin(us))
        if imin == 0 or imin == len(us) - 1:
            raise ModelDefinitionError("numeric: potential must attain an interior minimum")

    # -- constructors --------------------------------------------------

    @classmethod
    def box(cls, mass: float = 1.0, width: float = 1.0, units: UnitSystem = NATURAL_BOX) -> "ModelSpec":
        return cls("box", BoxParams(float(mass), float(width)), units)

    @classmethod
    def harmonic(cls, mass: float = 1.0, stiffness: float = 1.0, units: UnitSystem = OSCILLATOR) -> "ModelSpec":
        return cls("harmonic", HarmonicParams(float(mass), float(stiffness)), units)

    @classmethod
    def hydrogenoid(cls, reduced_mass: float = 1.0, z: int = 1, charge: float = 1.0,
                    units: UnitSystem = ATOMIC) -> "ModelSpec":
        return cls("hydrogenoid", HydrogenoidParams(float(reduced_mass), int(z), float(charge)), units)

    @classmethod
    def morse(cls, mass: float, depth: float, alpha: float, units: UnitSystem = MOLECULAR) -> "ModelSpec":
        return cls("morse", MorseParams(float(mass), float(depth), float(alpha)), units)

    @classmethod
    def numeric(cls, mass: float, x, u, units: UnitSystem = OSCILLATOR) -> "ModelSpec":
        return cls("numeric", NumericPotentialParams(float(mass), tuple(map(float, x)), tuple(map(float, u))), units)

    # -- derived quantities --------------------------------------------

    @property
    def hbar(self) -> float:
        """hbar in the model's unit system."""
        return self.units.hbar

    @property
    def omega(self) -> float:
        """Angular frequency at the well bottom, in system units (1/time)."""
        si = _si_view(self)
        if self.kind == "harmonic":
            return si.omega * self.units.time_s
        if self.kind == "morse":
            return si.omega * self.units.time_s
        raise UnsupportedModelError(f"omega is defined for harmonic and morse models, not {self.kind!r}")

    @property
    def zeta(self) -> float:
        """Morse well capacity 2 D / (hbar omega), dimensionless."""
        if self.kind != "morse":
            raise UnsupportedModelError(f"zeta is defined for morse models, not {self.kind!r}")
        return _si_view(self).zeta

    def converted(self, units: UnitSystem) -> "ModelSpec":
        """Re-express the same physical model in another unit system."""
        f = lambda dim: self.units.factor(dim) / units.factor(dim)
        p = self.params
        if self.kind == "box":
            new = BoxParams(p.mass * f("mass"), p.width * f("length"))
        elif self.kind == "harmonic":
            new = HarmonicParams(p.mass * f("mass"), p.stiffness * f("stiffness"))
        elif self.kind == "hydrogenoid":
            new = HydrogenoidParams(p.reduced_mass * f("mass"), p.z, p.charge * math.sqrt(f("coulomb")))
        elif self.kind == "morse":
            new = MorseParams(p.mass * f("mass"), p.depth * f("energy"), p.alpha * f("inverse_length"))
        else:
            new = NumericPotentialParams(
                p.mass * f("mass"),
                tuple(x * f("length") for x in p.x),
                tuple(u * f("energy") for u in p.u),
            )
        return ModelSpec(self.kind, new, units)

    def to_dict(self) -> dict:
        """JSON-ready echo of the model, matching the config schema."""
        p = self.params
        if self.kind == "box":
            params = {"mass": p.mass, "width": p.width}
        elif self.kind == "harmonic":
            params = {"mass": p.mass, "stiffness": p.stiffness}
        elif self.kind == "hydrogenoid":
            params = {"reduced_mass": p.reduced_mass, "z": p.z, "charge": p.charge}
        elif self.kind == "morse":
            params = {"mass": p.mass, "depth": p.depth, "range": p.alpha}
        else:
            params = {"mass": p.mass, "x": list(p.x), "u": list(p.u)}
        return {"kind": self.kind, "units": self.units.name, "params": params}


# -- SI views ----------------------------------------------------------


@dataclass(frozen=True)
class _SiView:
    mass: float = 0.0
    width: float = 0.0
    stiffness: float = 0.0
    omega: float = 0.0
    coupling: float = 0.0  # Z e^2, J m
    depth: float = 0.0
    alpha: float = 0.0
    zeta: float = 0.0
    x: tuple[float, ...] = ()
    u: tuple[float, ...] = ()


@lru_cache(maxsize=512)
def _si_view(model: ModelSpec) -> _SiView:
    u, p = model.units, model.params
    if model.kind == "box":
        return _SiView(mass=u.to_si(p.mass, "mass"), width=u.to_si(p.width, "length"))
    if model.kind == "harmonic":
        m = u.to_si(p.mass, "mass")
        k = u.to_si(p.stiffness, "stiffness")
        return _SiView(mass=m, stiffness=k, omega=math.sqrt(k / m))
    if model.kind == "hydrogenoid":
        mu = u.to_si(p.reduced_mass, "mass")
        coupling = p.z * u.to_si(p.charge**2, "coulomb")
        return _SiView(mass=mu, coupling=coupling)
    if model.kind == "morse":
        m = u.to_si(p.mass, "mass")
        d = u.to_si(p.depth, "energy")
        a = u.to_si(p.alpha, "inverse_length")
        omega = a * math.sqrt(2.0 * d / m)
        return _SiView(mass=m, depth=d, alpha=a, omega=omega, zeta=2.0 * d / (HBAR_SI * omega))
    xs = tuple(u.to_si(v, "length") for v in p.x)
    us = tuple(u.to_si(v, "energy") for v in p.u)
    return _SiView(mass=u.to_si(p.mass, "mass"), x=xs, u=us)


# -- level range -------------------------------------------------------


def n_min(model: ModelSpec) -> int:
    """Lowest quantum number of the model."""
    return 1 if model.kind in ("box", "hydrogenoid") else 0


def n_max(model: ModelSpec):
    """Largest enumerated level, or None when the ladder is unbounded."""
    if model.kind == "morse":
        return math.ceil(_si_view(model).zeta / 2.0 - 0.5) - 1
    if model.kind == "numeric":
        from . import semiclassical

        return semiclassical.numeric_level_count(model) - 1
    return None


def _check_n(model: ModelSpec, n: int) -> int:
    if not (isinstance(n, int) and not isinstance(n, bool)):
        raise OutOfRangeError(f"quantum number must be an integer, got {n!r}")
    lo = n_min(model)
    if n < lo:
        raise OutOfRangeError(f"{model.kind}: n must be >= {lo}, got {n}")
    hi = n_max(model)
    if hi is not None and n > hi:
        raise OutOfRangeError(f"{model.kind}: n must be <= {hi} for these parameters, got {n}")
    return n


# -- closed forms ------------------------------------------------------


def energy_level(model: ModelSpec, n: int) -> EnergyLevel:
    """Closed-form level energy in the model's unit system."""
    if model.kind == "numeric":
        raise UnsupportedModelError("numeric: no closed-form levels; use semiclassical.quantize")
    _check_n(model, n)
    si = _si_view(model)
    if model.kind == "box":
        e = (HBAR_SI * math.pi * n) ** 2 / (2.0 * si.mass * si.width**2)
    elif model.kind == "harmonic":
        e = HBAR_SI * si.omega * (n + 0.5)
    elif model.kind == "hydrogenoid":
        e = -si.mass * si.coupling**2 / (2.0 * HBAR_SI**2 * n**2)
    else:  # morse
        e = -si.depth * (1.0 - (n + 0.5) / si.zeta) ** 2
    return EnergyLevel(n=n, energy=model.units.from_si(e, "energy"), bound=True)


def classical_period(model: ModelSpec, n: int) -> PeriodPoint:
    """Closed-form classical period of the orbit with energy E_n."""
    if model.kind == "numeric":
        raise UnsupportedModelError("numeric: no closed-form periods; use semiclassical.period_of_energy")
    _check_n(model, n)
    si = _si_view(model)
    if model.kind == "box":
        tau = 2.0 * si.width**2 * si.mass / (HBAR_SI * math.pi * n)
    elif model.kind == "harmonic":
        tau = 2.0 * math.pi / si.omega
    elif model.kind == "hydrogenoid":
        tau = 2.0 * math.pi * HBAR_SI**3 * n**3 / (si.mass * si.coupling**2)
    else:  # morse
        e_abs = si.depth * (1.0 - (n + 0.5) / si.zeta) ** 2
        tau = (2.0 * math.pi / si.alpha) * math.sqrt(si.mass / (2.0 * e_abs))
    return PeriodPoint(n=n, tau=model.units.from_si(tau, "time"))


def bound_levels(model: ModelSpec, n_limit: int) -> list[EnergyLevel]:
    """First ``n_limit`` bound levels, fewer if the ladder ends earlier."""
    if not (isinstance(n_limit, int) and n_limit >= 1):
        raise OutOfRangeError(f"n_limit must be an integer >= 1, got {n_limit!r}")
    lo = n_min(model)
    if model.kind == "numeric":
        from . import semiclassical

        return semiclassical.numeric_bound_levels(model, n_limit)
    hi = n_max(model)
    last = lo + n_limit - 1 if hi is None else min(lo + n_limit - 1, hi)
    return [energy_level(model, n) for n in range(lo, last + 1)]


def level_gap_energy(model: ModelSpec, n: int) -> float:
    """Half the spacing (E_n - E_{n-1}) / 2 in closed form, system units.

    Evaluated from per-kind difference formulas rather than by subtracting
    levels, so no precision is lost to cancellation at large n.
    """
    if model.kind == "numeric":
        raise UnsupportedModelError("numeric: no closed-form gaps; difference semiclassical levels instead")
    _check_n(model, n)
    if n == n_min(model):
        raise OutOfRangeError(f"{model.kind}: gap at n={n} needs level n-1; lowest level is {n_min(model)}")
    si = _si_view(model)
    if model.kind == "box":
        de = HBAR_SI**2 * math.pi**2 * (2 * n - 1) / (4.0 * si.mass * si.width**2)
    elif model.kind == "harmonic":
        de = HBAR_SI * si.omega / 2.0
    elif model.kind == "hydrogenoid":
        de = si.mass * si.coupling**2 * (2 * n - 1) / (4.0 * HBAR_SI**2 * n**2 * (n - 1) ** 2)
    else:  # morse: (E_n - E_{n-1})/2 = (hbar omega / 2)(1 - n / zeta)
        de = HBAR_SI * si.omega * (1.0 - n / si.zeta) / 2.0
    return model.units.from_si(de, "energy")


def level_gap_period(model: ModelSpec, n: int) -> float:
    """Signed half spacing (tau_n - tau_{n-1}) / 2 in closed form, system units."""
    if model.kind == "numeric":
        raise UnsupportedModelError("numeric: no closed-form gaps; difference semiclassical periods instead")
    _check_n(model, n)
    if n == n_min(model):
        raise OutOfRangeError(f"{model.kind}: gap at n={n} needs level n-1; lowest level is {n_min(model)}")
    si = _si_view(model)
    if model.kind == "box":
        dt = -si.width**2 * si.mass / (HBAR_SI * math.pi * n * (n - 1))
    elif model.kind == "harmonic":
        dt = 0.0
    elif model.kind == "hydrogenoid":
        dt = math.pi * HBAR_SI**3 * (3 * n**2 - 3 * n + 1) / (si.mass * si.coupling**2)
    else:  # morse
        z = si.zeta
        dt = (math.pi / (si.omega * z)) / ((1.0 - (n + 0.5) / z) * (1.0 - (n - 0.5) / z))
    return model.units.from_si(dt, "time")


# -- classical well profile (for the semiclassical engine) -------------


@dataclass(frozen=True)
class WellProfile:
    """SI description of one confining well for action/period quadrature."""

    mass: float
    potential: Callable  # vectorized, SI in / SI out
    x_min: float  # anchor for the turning-point scan
    u_min: float  # potential at the anchor; -inf for the Coulomb singularity
    e_ceiling: float  # exclusive upper bound on bound-motion energies
    x_scale: float  # characteristic length
    e_scale: float  # characteristic energy
    left_wall: float | None  # hard or singular left boundary, if any
    x_domain: tuple[float, float]
    breakpoints: tuple[float, ...] = ()  # interior quadrature split points


@lru_cache(maxsize=512)
def _numeric_interpolant(model: ModelSpec):
    si = _si_view(model)
    return PchipInterpolator(np.asarray(si.x), np.asarray(si.u), extrapolate=False)


def _numeric_potential(model: ModelSpec) -> Callable:
    si = _si_view(model)
    lo, hi = si.x[0], si.x[-1]
    slack = 1e-12 * (hi - lo)
    pchip = _numeric_interpolant(model)

    def u(x):
        arr = np.asarray(x, dtype=float)
        if np.any(arr < lo - slack) or np.any(arr > hi + slack):
            raise PotentialDomainError(f"numeric: query outside tabulated range [{lo:.6g}, {hi:.6g}] m")
        return pchip(np.clip(arr, lo, hi))

    return u


def _numeric_x_min(model: ModelSpec) -> tuple[float, float]:
    # Refine the interior minimum using the exact roots of the interpolant's
    # derivative near the smallest table value.
    si = _si_view(model)
    us = np.asarray(si.u)
    imin = int(np.argmin(us))
    pchip = _numeric_interpolant(model)
    roots = pchip.derivative().roots(extrapolate=False)
    best_x, best_u = si.x[imin], us[imin]
    for r in np.atleast_1d(roots):
        if si.x[0] < r < si.x[-1]:
            val = float(pchip(r))
            if val < best_u:
                best_x, best_u = float(r), val
    return best_x, best_u


@lru_cache(maxsize=512)
def well_profile(model: ModelSpec) -> WellProfile:
    """Build the SI well description used by the semiclassical engine."""
    si = _si_view(model)
    if model.kind == "box":
        raise UnsupportedModelError("box wells are handled analytically; no quadrature profile")
    if model.kind == "harmonic":
        m, k, w = si.mass, si.stiffness, si.omega
        return WellProfile(
            mass=m,
            potential=lambda x: 0.5 * k * np.square(x),
            x_min=0.0,
            u_min=0.0,
            e_ceiling=math.inf,
            x_scale=math.sqrt(HBAR_SI / (m * w)),
            e_scale=HBAR_SI * w,
            left_wall=None,
            x_domain=(-math.inf, math.inf),
        )
    if model.kind == "hydrogenoid":
        mu, c = si.mass, si.coupling

        def coulomb(x):
            # the x = 0 wall maps to -inf; keep numpy quiet about it
            with np.errstate(divide="ignore"):
                return -c / np.asarray(x, dtype=float)

        return WellProfile(
            mass=mu,
            potential=coulomb,
            x_min=0.0,
            u_min=-math.inf,
            e_ceiling=0.0,
            x_scale=HBAR_SI**2 / (mu * c),
            e_scale=mu * c**2 / (2.0 * HBAR_SI**2),
            left_wall=0.0,
            x_domain=(0.0, math.inf),
        )
    if model.kind == "morse":
        d, a = si.depth, si.alpha

        def u(x):
            ex = np.exp(-a * np.asarray(x, dtype=float))
            return d * (ex * ex - 2.0 * ex)

        return WellProfile(
            mass=si.mass,
            potential=u,
            x_min=0.0,
            u_min=-d,
            e_ceiling=0.0,
            x_scale=1.0 / a,
            e_scale=d,
            left_wall=None,
            x_domain=(-math.inf, math.inf),
        )
    if model.kind == "numeric":
        x0, x1 = si.x[0], si.x[-1]
        xm, um = _numeric_x_min(model)
        ceiling = min(si.u[0], si.u[-1])
        return WellProfile(
            mass=si.mass,
            potential=_numeric_potential(model),
            x_min=xm,
            u_min=um,
            e_ceiling=ceiling,
            x_scale=(x1 - x0) / max(len(si.x) - 1, 1),
            e_scale=ceiling - um,
            left_wall=None,
            x_domain=(x0, x1),
            breakpoints=tuple(v for v in si.x if x0 < v < x1),
        )
    raise UnsupportedModelError(model.kind)


# -- JSON loading and presets ------------------------------------------


def _expect_object(doc, path):
    if not isinstance(doc, dict):
        raise ConfigError(path, f"expected an object, got {type(doc).__name__}")


def _reject_unknown(doc: dict, allowed, path: str):
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown key")


def _get_number(doc: dict, key: str, path: str, required=True, default=None):
    if key not in doc:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required key")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{path}.{key}", f"expected a finite number, got {v!r}")
    return float(v)


def _get_int(doc: dict, key: str, path: str, required=True, default=None):
    if key not in doc:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required key")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {v!r}")
    return v


_PARAM_KEYS = {
    "box": ("mass", "width"),
    "harmonic": ("mass", "stiffness"),
    "hydrogenoid": ("reduced_mass", "z", "charge"),
    "morse": ("mass", "depth", "range"),
    "numeric": ("mass", "x", "u"),
}


def model_from_dict(doc: dict, path: str = "model") -> ModelSpec:
    """Build a ModelSpec from ``{"kind", "units", "params"}`` or ``{"preset"}``.

    Raises ConfigError with a dotted path locating any offending key.
    """
    _expect_object(doc, path)
    if "preset" in doc:
        _reject_unknown(doc, ("preset",), path)
        name = doc["preset"]
        if not isinstance(name, str):
            raise ConfigError(f"{path}.preset", f"expected a string, got {name!r}")
        try:
            return get_preset(name)
        except ModelDefinitionError as exc:
            raise ConfigError(f"{path}.preset", str(exc)) from None
    _reject_unknown(doc, ("kind", "units", "params"), path)
    for key in ("kind", "units", "params"):
        if key not in doc:
            raise ConfigError(f"{path}.{key}", "missing required key")
    kind = doc["kind"]
    if kind not in KINDS:
        raise ConfigError(f"{path}.kind", f"unknown kind {kind!r}; expected one of {list(KINDS)}")
    if not isinstance(doc["units"], str):
        raise ConfigError(f"{path}.units", f"expected a unit-system name, got {doc['units']!r}")
    try:
        units = get_unit_system(doc["units"])
    except ModelDefinitionError as exc:
        raise ConfigError(f"{path}.units", str(exc)) from None
    params = doc["params"]
    ppath = f"{path}.params"
    _expect_object(params, ppath)
    _reject_unknown(params, _PARAM_KEYS[kind], ppath)
    try:
        if kind == "box":
            spec = ModelSpec.box(_get_number(params, "mass", ppath), _get_number(params, "width", ppath), units)
        elif kind == "harmonic":
            spec = ModelSpec.harmonic(_get_number(params, "mass", ppath), _get_number(params, "stiffness", ppath), units)
        elif kind == "hydrogenoid":
            spec = ModelSpec.hydrogenoid(
                _get_number(params, "reduced_mass", ppath),
                _get_int(params, "z", ppath),
                _get_number(params, "charge", ppath, required=False, default=1.0),
                units,
            )
        elif kind == "morse":
            spec = ModelSpec.morse(
                _get_number(params, "mass", ppath),
                _get_number(params, "depth", ppath),
                _get_number(params, "range", ppath),
                units,
            )
        else:
            for key in ("x", "u"):
                seq = params.get(key)
                if not isinstance(seq, list) or not all(
                    isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in seq
                ):
                    raise ConfigError(f"{ppath}.{key}", "expected a list of finite numbers")
            spec = ModelSpec.numeric(_get_number(params, "mass", ppath), params["x"], params["u"], units)
    except ModelDefinitionError as exc:
        raise ConfigError(ppath, str(exc)) from None
    return spec


def model_from_json(text: str) -> ModelSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("model", f"invalid JSON: {exc}") from None
    return model_from_dict(doc)


def _preset_box() -> ModelSpec:
    return ModelSpec.box(1.0, 1.0, NATURAL_BOX)


def _preset_harmonic() -> ModelSpec:
    return ModelSpec.harmonic(1.0, 1.0, OSCILLATOR)


def _preset_hydrogen() -> ModelSpec:
    return ModelSpec.hydrogenoid(1.0, 1, 1.0, ATOMIC)


def _preset_morse_h2() -> ModelSpec:
    # Standard literature constants for the hydrogen molecule ground state:
    # well depth 4.7446 eV, range 1.9426 1/angstrom, reduced mass 0.50391 amu.
    return ModelSpec.morse(mass=0.50391, depth=4.7446, alpha=1.9426, units=MOLECULAR)


PRESETS = {
    "box-natural": _preset_box,
    "harmonic-natural": _preset_harmonic,
    "hydrogen-atomic": _preset_hydrogen,
    "morse-h2": _preset_morse_h2,
}


def get_preset(name: str) -> ModelSpec:
    """Instantiate a named model preset."""
    try:
        builder = PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ModelDefinitionError(f"unknown preset {name!r}; available: {known}") from None
    return builder()


# module-level constructor aliases
box = ModelSpec.box
harmonic = ModelSpec.harmonic
hydrogenoid = ModelSpec.hydrogenoid
morse = ModelSpec.morse
numeric = ModelSpec.numeric
