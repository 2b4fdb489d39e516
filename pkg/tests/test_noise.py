from __future__ import annotations

import math

import numpy as np
import pytest

import speclimit as sl
from speclimit.errors import (
    DegenerateEnsembleError,
    InvalidCountError,
    InvalidSigmaError,
    UnsupportedModelError,
)
from speclimit.noise import fmean, fvariance

# First standard-normal draws of Philox(4x64-10) keyed (12345, 0); frozen to
# pin the bit-reproducibility contract.
PHILOX_12345_0 = (
    -0.22588271269700672,
    -0.133523796357427,
    0.50694626941401,
    0.4574163448870907,
    -1.1245093619573874,
)


# -- summation helpers -------------------------------------------------------


def test_fmean_fvariance_match_numpy():
    rng = np.random.default_rng(99)
    data = list(rng.normal(5.0, 2.0, 4001))
    assert fmean(data) == pytest.approx(float(np.mean(data)), rel=1e-13)
    assert fvariance(data) == pytest.approx(float(np.var(data, ddof=1)), rel=1e-12)


def test_fvariance_shifted_catastrophic_case():
    # classic cancellation trap: huge offset, tiny spread
    base = [1.0, 2.0, 3.0, 4.0]
    shifted = [v + 1e9 for v in base]
    assert fvariance(shifted) == pytest.approx(fvariance(base), rel=1e-9)


def test_fmean_empty():
    with pytest.raises(ValueError):
        fmean([])
    with pytest.raises(ValueError):
        fvariance([1.0])


# -- ensembles ----------------------------------------------------------------


def test_sample_ensemble_deterministic():
    a = sl.sample_ensemble(0.0, 1.0, 5, seed=12345, stream=0)
    assert a.samples == pytest.approx(PHILOX_12345_0, abs=0.0)
    b = sl.sample_ensemble(0.0, 1.0, 5, seed=12345, stream=0)
    assert a.samples == b.samples


def test_sample_ensemble_streams_differ():
    a = sl.sample_ensemble(0.0, 1.0, 100, seed=7, stream=0)
    b = sl.sample_ensemble(0.0, 1.0, 100, seed=7, stream=1)
    c = sl.sample_ensemble(0.0, 1.0, 100, seed=8, stream=0)
    assert a.samples != b.samples
    assert a.samples != c.samples


def test_sample_ensemble_zero_sigma():
    ens = sl.sample_ensemble(3.25, 0.0, 50, seed=1)
    assert all(v == 3.25 for v in ens.samples)
    assert ens.stdev() == 0.0


def test_sample_ensemble_statistics():
    ens = sl.sample_ensemble(2.0, 0.5, 100000, seed=42)
    # mean within 5 standard errors, sd within 2 percent
    se = 0.5 / math.sqrt(ens.count)
    assert abs(ens.mean() - 2.0) <= 5 * se
    assert ens.stdev() == pytest.approx(0.5, rel=0.02)


def test_sample_ensemble_validation():
    with pytest.raises(InvalidCountError):
        sl.sample_ensemble(0.0, 1.0, 1, seed=0)
    with pytest.raises(InvalidSigmaError):
        sl.sample_ensemble(0.0, -1.0, 10, seed=0)
    with pytest.raises(ValueError):
        sl.sample_ensemble(0.0, 1.0, 10, seed=-1)
    with pytest.raises(ValueError):
        sl.sample_ensemble(math.inf, 1.0, 10, seed=0)


def test_ensemble_csv_round_trip(tmp_path):
    ens = sl.sample_ensemble(-1.0, 1.2, 256, seed=11, stream=3)
    path = tmp_path / "ens.csv"
    ens.to_csv(path)
    back = sl.MeasurementEnsemble.from_csv(path)
    assert back == ens  # exact float round trip via repr
    header = path.read_text().splitlines()[0]
    assert header == "seed,stream,center,sigma,count"


# -- characteristic factor ------------------------------------------------------


def test_characteristic_factor_example():
    assert sl.characteristic_factor(1.0, 1.0, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_characteristic_factor_limits():
    assert sl.characteristic_factor(0.0, 5.0) == 1.0
    assert sl.characteristic_factor(3.0, 0.0) == 1.0
    assert sl.characteristic_factor(10.0, 10.0) < 1e-21


def test_characteristic_mc_within_3se_grid():
    # 20-point (p, delta_x) grid at N = 1e5: MC mean of exp(-i p xi / hbar)
    # must match the Gaussian factor within 3 empirical standard errors
    n = 100000
    failures = []
    for j, dx in enumerate((0.25, 0.5, 1.0, 2.0)):
        ens = sl.sample_ensemble(0.7, dx, n, seed=2024, stream=j)
        for u in (0.25, 0.5, 1.0, 1.5, 2.0):
            p = u / dx
            chk = sl.characteristic_check(ens, p)
            if not chk.within_3se:
                failures.append((dx, p))
    assert not failures


def test_characteristic_sample_mean_complex():
    ens = sl.sample_ensemble(0.0, 0.8, 20000, seed=5)
    z = sl.characteristic_sample_mean(ens, 1.1)
    assert isinstance(z, complex)
    assert z.real == pytest.approx(sl.characteristic_factor(0.8, 1.1), abs=0.02)
    assert abs(z.imag) < 0.02


# -- budgets and states -----------------------------------------------------------


def test_noise_budget_example():
    budget = sl.NoiseBudget(0.5, 1.2)
    assert budget.product_over_hbar == pytest.approx(0.6, rel=1e-15)
    assert budget.preparable


def test_noise_budget_sql_boundary():
    assert sl.NoiseBudget(1.0, 0.5).preparable  # exactly hbar/2
    assert sl.NoiseBudget(1.0, 0.5 - 1e-13).preparable  # inside the slack
    assert not sl.NoiseBudget(1.0, 0.4).preparable


def test_noise_budget_validation():
    with pytest.raises(InvalidSigmaError):
        sl.NoiseBudget(-0.1, 1.0)
    with pytest.raises(InvalidSigmaError):
        sl.NoiseBudget(0.1, math.nan)


def test_reconstruct_state_example():
    pos = sl.sample_ensemble(2.0, 0.5, 100000, seed=42, stream=0)
    mom = sl.sample_ensemble(-1.0, 1.2, 100000, seed=42, stream=1)
    st = sl.reconstruct_state(pos, mom)
    assert st.r == pytest.approx(2.0, abs=0.02)
    assert st.d == pytest.approx(-1.0, abs=0.03)
    assert st.budget.product_over_hbar == pytest.approx(0.6, rel=0.02)
    assert st.budget.preparable
    assert not st.sub_sql


def test_position_density_normalized():
    st = sl.GaussianState(r=1.5, d=0.0, delta_x=0.7, delta_p=1.0)
    x = np.linspace(1.5 - 8 * 0.7, 1.5 + 8 * 0.7, 20001)
    integral = float(np.trapezoid(st.position_density(x), x))
    assert abs(integral - 1.0) <= 1e-8


def test_momentum_density_normalized():
    st = sl.GaussianState(r=0.0, d=-2.0, delta_x=1.0, delta_p=0.9)
    p = np.linspace(-2.0 - 8 * 0.9, -2.0 + 8 * 0.9, 20001)
    integral = float(np.trapezoid(st.momentum_density(p), p))
    assert abs(integral - 1.0) <= 1e-8


def test_degenerate_ensemble_rejected():
    pos = sl.MeasurementEnsemble(samples=(1.0, 1.0, 1.0), seed=0, stream=0,
                                 true_center=1.0, sigma=0.5)
    mom = sl.sample_ensemble(0.0, 1.0, 100, seed=0, stream=1)
    with pytest.raises(DegenerateEnsembleError):
        sl.reconstruct_state(pos, mom)


def test_zero_width_density_rejected():
    st = sl.GaussianState(r=0.0, d=0.0, delta_x=0.0, delta_p=1.0)
    with pytest.raises(ValueError):
        st.position_density(0.0)


# -- harmonic error propagation ------------------------------------------------


def test_noise_widths_product():
    for a in (0.1, 0.5, 1.0):
        dq, dp = sl.noise_widths(2.0, 8.0, a)
        assert dq * dp == pytest.approx(a**2 / 2.0, rel=1e-12)


def test_harmonic_energy_error_two_routes():
    # route 1: the closed bracket form; route 2: |p/m| dp + |k q| dq with the
    # balanced widths. They must agree identically.
    m, k, a = 1.7, 3.1, 0.35
    dq, dp = sl.noise_widths(m, k, a)
    rng = np.random.default_rng(321)
    for _ in range(1000):
        q = float(rng.uniform(-2, 2))
        p = float(rng.uniform(-2, 2))
        direct = abs(p / m) * dp + abs(k * q) * dq
        assert sl.harmonic_energy_error(q, p, m, k, a) == pytest.approx(direct, rel=1e-12)


def test_required_product_examples(osc):
    assert sl.required_noise_product_for_resolution(osc, 0) == pytest.approx(1 / 8, abs=1e-9)
    assert sl.required_noise_product_for_resolution(osc, 1) == pytest.approx(1 / 24, abs=1e-9)


def test_required_product_closed_form(osc):
    # the phase maximum sits at phi = pi/4 giving bracket sqrt(2 hbar w E);
    # the product is then 1 / (16 (n + 1/2))
    for n in list(range(20)) + [50, 199, 1000]:
        got = sl.required_noise_product_for_resolution(osc, n)
        assert got == pytest.approx(1.0 / (16.0 * (n + 0.5)), abs=1e-9)


def test_required_product_below_half(osc):
    for n in range(0, 1001, 37):
        assert sl.required_noise_product_for_resolution(osc, n) < 0.5


def test_required_product_other_models(box):
    with pytest.raises(UnsupportedModelError):
        sl.required_noise_product_for_resolution(box, 3)
