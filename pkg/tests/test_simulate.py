from __future__ import annotations

import math

import pytest

import speclimit as sl
from speclimit.errors import DegeneratePeriodError, OutOfRangeError
from speclimit.simulate import D_PRIME_CAP, D_PRIME_CUT


def test_protocol_validation():
    with pytest.raises(ValueError):
        sl.PeriodProtocol(s=0)
    with pytest.raises(ValueError):
        sl.PeriodProtocol(trials=5)
    with pytest.raises(ValueError):
        sl.PeriodProtocol(delta_t=-1.0)
    with pytest.raises(ValueError):
        sl.PeriodProtocol(seed=-1)


def test_estimator_sd_scaling():
    # averaging 2s inversion timestamps: sd = delta_t / s
    for s in (1, 2, 4, 8):
        proto = sl.PeriodProtocol(s=s)
        assert proto.estimator_sd(0.3) == pytest.approx(0.3 / s, rel=1e-15)


def test_estimator_sd_per_inversion_variant():
    # independent per-inversion errors: sd = delta_t sqrt(2s) / (2s)
    for s in (1, 2, 4, 8):
        proto = sl.PeriodProtocol(s=s, per_inversion=True)
        expect = 0.3 * math.sqrt(2 * s) / (2 * s)
        assert proto.estimator_sd(0.3) == pytest.approx(expect, rel=1e-15)


def test_simulation_matches_estimator_sd(box):
    proto = sl.PeriodProtocol(s=2, delta_t=0.05, trials=10000, seed=3)
    sample = sl.simulate_period_measurement(box, 4, proto)
    assert sample.delta_t == 0.05
    # sample sd within 5 percent of delta_t/s at 1e4 trials
    assert sample.stdev() == pytest.approx(0.05 / 2, rel=0.05)
    assert sample.mean() == pytest.approx(sample.tau_true, abs=5 * 0.025 / math.sqrt(10000))


def test_simulation_sd_one_over_s(box):
    sds = []
    for s in (1, 2, 4, 8):
        proto = sl.PeriodProtocol(s=s, delta_t=0.1, trials=20000, seed=17)
        sds.append(sl.simulate_period_measurement(box, 3, proto).stdev())
    for i, s in enumerate((1, 2, 4, 8)):
        assert sds[i] == pytest.approx(0.1 / s, rel=0.10)


def test_simulation_mean_converges(box):
    tau = sl.classical_period(box, 3).tau
    for trials in (1000, 100000):
        proto = sl.PeriodProtocol(delta_t=0.02, trials=trials, seed=29)
        sample = sl.simulate_period_measurement(box, 3, proto)
        assert abs(sample.mean() - tau) <= 4 * 0.02 / math.sqrt(trials)


def test_simulation_deterministic(box):
    proto = sl.PeriodProtocol(delta_t=0.05, trials=500, seed=123)
    a = sl.simulate_period_measurement(box, 2, proto)
    b = sl.simulate_period_measurement(box, 2, proto)
    assert a.estimates == b.estimates
    c = sl.simulate_period_measurement(box, 2, sl.PeriodProtocol(delta_t=0.05, trials=500, seed=124))
    assert a.estimates != c.estimates


def test_harmonic_period_degenerate(osc):
    with pytest.raises(DegeneratePeriodError):
        sl.simulate_period_measurement(osc, 1, sl.PeriodProtocol())


def test_zero_delta_t_noise_free(box):
    proto = sl.PeriodProtocol(delta_t=0.0, trials=100, seed=0)
    result = sl.discriminate(box, 3, proto)
    assert result.noise_free
    assert result.d_prime == D_PRIME_CAP
    assert result.bayes_error == 0.0
    assert result.mc_resolvable


def test_discriminate_box_crossover_levels(box):
    proto = sl.PeriodProtocol(trials=10000, seed=7)
    r3 = sl.discriminate(box, 3, proto)
    assert r3.mc_resolvable and r3.criterion_resolvable
    assert r3.d_prime == pytest.approx(4 * sl.y_function(box, 3), rel=0.1)
    r5 = sl.discriminate(box, 5, proto)
    assert not r5.mc_resolvable and not r5.criterion_resolvable
    assert r5.d_prime < D_PRIME_CUT


def test_discriminate_auto_delta_t_is_saturating(box):
    # delta_t = hbar / (2 dE_n) when the protocol leaves it unset
    proto = sl.PeriodProtocol(trials=100, seed=1)
    r = sl.discriminate(box, 4, proto)
    assert r.delta_t == pytest.approx(1.0 / (2 * sl.level_gap_energy(box, 4)), rel=1e-12)


def test_discriminate_needs_lower_level(box):
    with pytest.raises(OutOfRangeError):
        sl.discriminate(box, 1, sl.PeriodProtocol())


def test_bayes_error_range(box):
    proto = sl.PeriodProtocol(trials=2000, seed=5)
    for n in (2, 3, 6, 9):
        r = sl.discriminate(box, n, proto)
        assert 0.0 <= r.bayes_error <= 0.5
    # overlapping clouds err toward 0.5, separated ones toward 0
    r2 = sl.discriminate(box, 2, proto)
    r9 = sl.discriminate(box, 9, proto)
    assert r2.bayes_error < r9.bayes_error


def test_bayes_error_gaussian_oracle(box):
    # for equal widths the minimum-error rate has the closed form
    # 0.5 erfc(d'/(2 sqrt 2)); the fitted-cloud estimate stays close
    proto = sl.PeriodProtocol(trials=40000, seed=13)
    r = sl.discriminate(box, 4, proto)
    oracle = 0.5 * math.erfc(r.d_prime / (2 * math.sqrt(2)))
    assert r.bayes_error == pytest.approx(oracle, abs=0.01)


def test_consistency_sweep_box(box):
    proto = sl.PeriodProtocol(trials=10000, seed=0)
    sweep = sl.consistency_sweep(box, (2, 12), proto)
    assert sweep.criterion_threshold == 4
    assert sweep.mc_crossover is not None
    assert abs(sweep.mc_crossover - 4) <= 1
    assert sweep.crossover_within_one
    assert sweep.delta_t_mode == "auto-saturating"
    assert len(sweep.results) == 11
    assert sweep.agreements + sweep.disagreements == 11


def test_sweep_sensitivity_cuts(box):
    proto = sl.PeriodProtocol(trials=10000, seed=2)
    sweep = sl.consistency_sweep(box, (2, 12), proto)
    cuts = [cut for cut, _ in sweep.sensitivity]
    assert cuts == [1.5, 2.0, 3.0]
    crossings = [c for _, c in sweep.sensitivity]
    # a laxer cut never crosses earlier than a stricter one
    assert crossings[0] >= crossings[1] >= crossings[2]


def test_sweep_y_values_match_criterion(box):
    proto = sl.PeriodProtocol(trials=500, seed=1)
    sweep = sl.consistency_sweep(box, (2, 6), proto)
    for n, y in sweep.y_values:
        assert y == pytest.approx(sl.y_function(box, n), rel=1e-12)


def test_sweep_fixed_delta_t_mode(box):
    proto = sl.PeriodProtocol(delta_t=0.01, trials=500, seed=1)
    sweep = sl.consistency_sweep(box, (2, 4), proto)
    assert sweep.delta_t_mode == "fixed"
    assert all(r.delta_t == 0.01 for r in sweep.results)


def test_sweep_range_validation(box):
    with pytest.raises(OutOfRangeError):
        sl.consistency_sweep(box, (1, 5), sl.PeriodProtocol())


def test_sweep_morse(morse_h2):
    # every H2 pair is below threshold; MC at saturating accuracy agrees
    proto = sl.PeriodProtocol(trials=4000, seed=9)
    sweep = sl.consistency_sweep(morse_h2, (1, 8), proto)
    assert sweep.criterion_threshold == 1
    assert sweep.mc_crossover == 1
    assert sweep.disagreements == 0
