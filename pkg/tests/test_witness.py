import math

import numpy as np
import pytest

from qloss.channels import (
    RateFunction,
    amplitude_damping_channel,
    decoherence_amplitude,
    dephasing_channel,
    generic_channel,
    pauli_channel,
)
from qloss.qmath import SIGMA_Z
from qloss.states import StateValidationError
from qloss.witness import (
    VERDICT_MARKOVIAN,
    VERDICT_NON_MARKOVIAN,
    VERDICT_UNAVAILABLE,
    analytic_verdict,
    default_horizon,
    detect_intervals,
    loss_at,
    measure,
    mutual_info_witness,
    sample_trajectory,
)

H2_OF_HALF_PLUS_EXP2 = 0.9867474300396561  # binary entropy of (1 + e^-2)/2


def sin_dephasing():
    return dephasing_channel(RateFunction.sinusoid(1.0, 1.0))


def strong_damping():
    return amplitude_damping_channel(0.2, 2.0)


def test_constant_dephasing_trajectory_monotone():
    channel = dephasing_channel(RateFunction.constant(1.0))
    traj = sample_trajectory(channel, 5.0, 501)
    assert abs(traj.snapshots[0].quantum_loss) < 1e-9
    assert np.all(np.diff(traj.loss) > 0)
    assert traj.loss[-1] == pytest.approx(0.9999672506254316, abs=1e-9)


def test_zero_rate_trajectory_is_flat():
    channel = dephasing_channel(RateFunction.constant(0.0))
    traj = sample_trajectory(channel, 5.0, 101)
    assert np.abs(traj.loss).max() < 1e-12


def test_strong_damping_loss_peaks_at_amplitude_zeros():
    channel = strong_damping()
    lam, g0 = 0.2, 2.0
    d = math.sqrt(2 * g0 * lam - lam * lam)
    zeros = [2 * (math.pi * k - math.atan(d / lam)) / d for k in (1, 2, 3)]
    for t_zero in zeros:
        assert loss_at(channel, t_zero) == pytest.approx(2.0, abs=1e-9)


def test_detect_intervals_empty_for_monotone_loss():
    channel = dephasing_channel(RateFunction.constant(1.0))
    traj = sample_trajectory(channel, 5.0, 501)
    assert detect_intervals(traj) == []


def test_detect_intervals_sinusoid_dephasing():
    traj = sample_trajectory(sin_dephasing(), 4 * math.pi, 4001)
    intervals = detect_intervals(traj)
    assert len(intervals) == 2
    expected = [(math.pi, 2 * math.pi), (3 * math.pi, 4 * math.pi)]
    for (a, b), (ea, eb) in zip(intervals, expected):
        assert abs(a - ea) < 1e-3
        assert abs(b - eb) < 1e-3


def test_detect_intervals_strong_damping_tracks_amplitude_growth():
    # Decreasing-loss intervals run from each zero of the decoherence
    # amplitude to the following extremum of its magnitude.
    traj = sample_trajectory(strong_damping(), 30.0, 3001)
    intervals = detect_intervals(traj)
    lam, g0 = 0.2, 2.0
    d = math.sqrt(2 * g0 * lam - lam * lam)
    starts = [2 * (math.pi * k - math.atan(d / lam)) / d for k in (1, 2, 3, 4)]
    ends = [2 * math.pi * k / d for k in (1, 2, 3, 4)]
    assert len(intervals) == 4
    for (a, b), ea, eb in zip(intervals, starts, ends):
        assert abs(a - ea) < 1e-2
        assert abs(b - eb) < 1e-2


def test_detect_intervals_threshold_validation():
    traj = sample_trajectory(sin_dephasing(), 2 * math.pi, 201)
    with pytest.raises(ValueError, match="positive"):
        detect_intervals(traj, deriv_threshold=0.0)


def test_measure_constant_dephasing_is_zero():
    channel = dephasing_channel(RateFunction.constant(1.0))
    report = measure(sample_trajectory(channel, 5.0, 501))
    assert report.measure == 0.0
    assert report.intervals == ()
    assert report.numeric_verdict == VERDICT_MARKOVIAN
    assert report.analytic_verdict == VERDICT_MARKOVIAN
    assert report.markovian


def test_measure_single_period_drop():
    report = measure(sample_trajectory(sin_dephasing(), 2 * math.pi, 2001))
    assert report.measure == pytest.approx(-H2_OF_HALF_PLUS_EXP2, abs=1e-6)
    assert report.magnitude == pytest.approx(H2_OF_HALF_PLUS_EXP2, abs=1e-6)
    assert report.numeric_verdict == VERDICT_NON_MARKOVIAN
    assert not report.markovian


def test_measure_weak_damping_markovian():
    channel = amplitude_damping_channel(4.0, 1.0)
    report = measure(sample_trajectory(channel, 10.0, 1001))
    assert report.measure == 0.0
    assert report.numeric_verdict == VERDICT_MARKOVIAN
    assert report.analytic_verdict == VERDICT_MARKOVIAN


def test_measure_is_sum_of_drops_and_nonpositive():
    report = measure(sample_trajectory(strong_damping(), 30.0, 3001))
    assert report.measure == pytest.approx(sum(iv.drop for iv in report.intervals), abs=1e-12)
    assert report.measure < 0
    assert all(iv.drop < 0 for iv in report.intervals)
    assert all(a.end <= b.start for a, b in zip(report.intervals, report.intervals[1:]))


def test_analytic_verdicts():
    c = RateFunction.constant
    assert analytic_verdict(dephasing_channel(c(1.0)), 5.0) == VERDICT_MARKOVIAN
    assert analytic_verdict(sin_dephasing(), 4 * math.pi) == VERDICT_NON_MARKOVIAN
    assert analytic_verdict(pauli_channel(c(1.0), c(1.0), c(-1.5)), 5.0) == VERDICT_NON_MARKOVIAN
    assert analytic_verdict(pauli_channel(c(1.0), c(1.0), c(1.0)), 5.0) == VERDICT_MARKOVIAN
    assert analytic_verdict(strong_damping(), 30.0) == VERDICT_NON_MARKOVIAN
    assert analytic_verdict(amplitude_damping_channel(4.0, 1.0), 10.0) == VERDICT_MARKOVIAN
    generic = generic_channel([(c(0.5), SIGMA_Z)])
    assert analytic_verdict(generic, 5.0) == VERDICT_UNAVAILABLE


def test_mutual_info_witness_coincides_with_loss_intervals():
    for traj in (
        sample_trajectory(sin_dephasing(), 4 * math.pi, 2001),
        sample_trajectory(strong_damping(), 30.0, 2001),
    ):
        loss_intervals = detect_intervals(traj)
        info_intervals = mutual_info_witness(traj)
        assert len(loss_intervals) == len(info_intervals)
        for (a1, b1), (a2, b2) in zip(loss_intervals, info_intervals):
            assert abs(a1 - a2) < 1e-3
            assert abs(b1 - b2) < 1e-3


def test_mutual_info_witness_empty_for_markovian():
    channel = dephasing_channel(RateFunction.constant(1.0))
    traj = sample_trajectory(channel, 5.0, 501)
    assert mutual_info_witness(traj) == []


def test_rate_duality_along_trajectories():
    c = RateFunction.constant
    for channel, t_max in (
        (sin_dephasing(), 2 * math.pi),
        (strong_damping(), 15.0),
        (pauli_channel(c(1.0), c(1.0), c(1.0)), 5.0),
    ):
        traj = sample_trajectory(channel, t_max, 801)
        residual = np.abs(traj.mutual_info_rate + traj.loss_rate)[1:-1]
        scale = np.maximum(1.0, np.abs(traj.loss_rate)[1:-1])
        assert float((residual / scale).max()) < 1e-7


def test_environment_entropy_grows_slower_inside_intervals():
    # Inside a detected interval the environment gains entropy more slowly
    # than the system does.
    traj = sample_trajectory(strong_damping(), 30.0, 3001)
    s_env_rate = np.gradient(np.array([s.s_exchange for s in traj.snapshots]), traj.times)
    s_sys_rate = np.gradient(np.array([s.s_system for s in traj.snapshots]), traj.times)
    intervals = detect_intervals(traj)
    inside = np.zeros(traj.times.size, dtype=bool)
    for a, b in intervals:
        inside |= (traj.times > a) & (traj.times < b)
    assert inside.any()
    assert np.all(s_env_rate[inside] < s_sys_rate[inside] + 1e-9)


def test_measure_stable_under_grid_refinement():
    coarse = measure(sample_trajectory(sin_dephasing(), 4 * math.pi, 1001))
    fine = measure(sample_trajectory(sin_dephasing(), 4 * math.pi, 4001))
    spacing = 4 * math.pi / 1000
    max_rate = np.abs(
        sample_trajectory(sin_dephasing(), 4 * math.pi, 1001).loss_rate
    ).max()
    tolerance = 2 * (spacing * 1e-3) * len(coarse.intervals) * max_rate
    assert abs(coarse.measure - fine.measure) <= max(tolerance, 1e-9)


def test_conservation_along_trajectories():
    traj = sample_trajectory(sin_dephasing(), 4 * math.pi, 1001)
    assert np.abs(traj.mutual_info + traj.loss - 2.0).max() < 1e-9


def test_loss_bound_along_trajectories():
    traj = sample_trajectory(strong_damping(), 30.0, 1001)
    for snap in traj.snapshots:
        cap = 2.0 * min(1.0, snap.s_exchange)
        assert snap.quantum_loss >= -1e-9
        assert snap.quantum_loss <= cap + 1e-9


def test_nonphysical_channel_propagates():
    c = RateFunction.constant
    channel = pauli_channel(c(1.0), c(1.0), c(-1.5))
    with pytest.raises(StateValidationError):
        sample_trajectory(channel, 5.0, 101)


def test_sample_trajectory_validates_arguments():
    channel = dephasing_channel(RateFunction.constant(1.0))
    with pytest.raises(ValueError, match="grid points"):
        sample_trajectory(channel, 5.0, 2)
    with pytest.raises(ValueError, match="positive"):
        sample_trajectory(channel, -1.0, 101)


def test_generic_channel_trajectory():
    generic = generic_channel([(RateFunction.constant(0.5), SIGMA_Z)], step=1e-2)
    reference = dephasing_channel(RateFunction.constant(1.0))
    traj = sample_trajectory(generic, 2.0, 21)
    ref = sample_trajectory(reference, 2.0, 21)
    assert np.abs(traj.loss - ref.loss).max() < 1e-5
    report = measure(traj)
    assert report.numeric_verdict == VERDICT_MARKOVIAN
    assert report.analytic_verdict == VERDICT_UNAVAILABLE


def test_default_horizon():
    assert default_horizon(dephasing_channel(RateFunction.constant(2.0))) == pytest.approx(10.0)
    assert default_horizon(amplitude_damping_channel(4.0, 1.0)) == pytest.approx(20.0)
    assert default_horizon(dephasing_channel(RateFunction.constant(0.0))) == pytest.approx(20.0)
