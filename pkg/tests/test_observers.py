import math

import numpy as np
import pytest

from seaforce.model import _rk4
from seaforce.observers import MdobState, QFilter, TfobState, hz_to_rad, mdob_step, q_step, tfob_step

from conftest import hz, sine_fit

DT = 1e-4


def run_filter(f, u):
    return np.array([q_step(f, x) for x in u])


@pytest.mark.parametrize("f_q", [0.1, 1.0, 5.0, 10.0])
def test_q_dc_gain_and_settling(f_q):
    f = QFilter.from_hz(f_q, DT)
    tau = 1 / hz_to_rad(f_q)
    y = run_filter(f, np.full(int(round(5 * tau / DT)) + 1, 3.0))
    assert abs(y[-1] - 3.0) < 0.01 * 3.0


@pytest.mark.parametrize("f_q", [1.0, 5.0, 10.0])
def test_q_gain_at_cutoff(f_q):
    f = QFilter.from_hz(f_q, DT)
    t = np.arange(0, 10 / f_q + 2.0, DT)
    y = run_filter(f, np.sin(hz(f_q) * t))
    m = t > 2.0
    assert abs(sine_fit(t[m], y[m], f_q)) == pytest.approx(1 / math.sqrt(2), rel=0.02)


def test_q_step_response_at_time_constant():
    f = QFilter.from_hz(5.0, DT)
    n = int(round(1 / hz_to_rad(5.0) / DT))
    y = run_filter(f, np.ones(n + 1))
    assert y[n] == pytest.approx(1 - math.exp(-1), rel=0.01)


def test_q_zero_bandwidth_outputs_zero():
    f = QFilter(0.0, DT)
    assert np.all(run_filter(f, np.random.default_rng(0).normal(size=100)) == 0.0)
    assert f.cutoff_hz == 0.0
    with pytest.raises(ValueError):
        QFilter(-1.0, DT)


def test_mdob_stalled_motor_returns_applied_torque():
    st = MdobState(hz_to_rad(5.0), DT, 0.625, 1.023)
    n = int(round(5 / hz_to_rad(5.0) / DT)) + 1
    for _ in range(n):
        y = mdob_step(st, 0.0, 2.5)
    assert y == pytest.approx(2.5, rel=0.01)


def _open_loop_mdob(params, f_sig, f_q, duration):
    """Drive the free SEA with a sinusoidal torque; return t, true spring torque, mDOB estimate."""
    st = MdobState(hz_to_rad(f_q), params.dt, params.J_m, params.B_m)
    n = int(round(duration / params.dt))
    x = (0.0, 0.0, 0.0, 0.0)
    tau_prev = 0.0
    t_log, ts, est = [], [], []
    for k in range(n):
        t = k * params.dt
        y = st.step(x[1], tau_prev)
        if k % 10 == 0:
            t_log.append(t)
            ts.append(params.K_s * (x[0] - x[2]))
            est.append(y)
        tau = 3.0 * math.sin(hz(f_sig) * t)
        x = _rk4(x, tau, params)
        tau_prev = tau
    return np.array(t_log), np.array(ts), np.array(est)


def test_mdob_tracks_filtered_spring_torque(sea_free):
    f_sig, f_q = 0.5, 1.0
    t, ts, est = _open_loop_mdob(sea_free, f_sig, f_q, 12.0)
    m = t > 6.0
    ratio = sine_fit(t[m], est[m], f_sig) / sine_fit(t[m], ts[m], f_sig)
    Q = 1 / (1j * f_sig / f_q + 1)
    assert abs(ratio / Q - 1) < 0.03


def test_mdob_in_band_amplitude(sea_free):
    t, ts, est = _open_loop_mdob(sea_free, 0.5, 5.0, 12.0)
    m = t > 6.0
    assert abs(sine_fit(t[m], est[m], 0.5)) == pytest.approx(abs(sine_fit(t[m], ts[m], 0.5)), rel=0.01)


def test_tfob_removes_constant_dfm_offset():
    f_q = 5.0
    st = TfobState(hz_to_rad(f_q), DT, 0.625, 1.023)
    n = int(round(5 / hz_to_rad(f_q) / DT)) + 1
    # stalled motor holding 1 N*m, DFM reads the torque plus a 2 N*m offset
    for _ in range(n):
        y = tfob_step(st, 0.0, 1.0, 1.0 + 2.0)
    assert abs(y - 1.0) < 0.01 * 2.0
    for _ in range(20 * n):
        y = tfob_step(st, 0.0, 1.0, 3.0)
    assert abs(y - 1.0) < 1e-9


def test_tfob_zero_bandwidth_is_dfm():
    st = TfobState(0.0, DT, 0.625, 1.023)
    rng = np.random.default_rng(1)
    for w, tau, d in rng.normal(size=(200, 3)):
        assert tfob_step(st, w, tau, d) == d


def test_tfob_large_bandwidth_matches_mdob_at_dc():
    st = TfobState(hz_to_rad(200.0), DT, 0.625, 1.023)
    ref = MdobState(hz_to_rad(200.0), DT, 0.625, 1.023)
    for _ in range(2000):
        y = st.step(0.0, 1.5, 7.0)
        r = ref.step(0.0, 1.5)
    assert y == pytest.approx(r, abs=1e-9)


def test_spring_disturbance_high_passed():
    f_q, f_d = 5.0, 0.2
    st = TfobState(hz_to_rad(f_q), DT, 0.625, 1.023)
    t = np.arange(0, 12.0, DT)
    y = np.array([st.step(0.0, 0.0, math.sin(hz(f_d) * tk)) for tk in t])
    m = t > 2.0
    assert abs(sine_fit(t[m], y[m], f_d)) == pytest.approx(f_d / f_q, rel=0.2)


def test_motor_velocity_disturbance_low_passed():
    f_q, f_d = 1.0, 20.0
    J, B = 0.625, 1.023
    st = TfobState(hz_to_rad(f_q), DT, J, B)
    t = np.arange(0, 4.0, DT)
    y = np.array([st.step(math.sin(hz(f_d) * tk), 0.0, 0.0) for tk in t])
    m = t > 2.0
    unfiltered = abs(1j * hz(f_d) * J + B)
    expected = abs(1 / (1j * f_d / f_q + 1))
    assert abs(sine_fit(t[m], y[m], f_d)) / unfiltered == pytest.approx(expected, rel=0.2)


def test_tfob_does_not_drift():
    st = TfobState(hz_to_rad(5.0), DT, 0.625, 1.023)
    for _ in range(200_000):
        y = st.step(0.0, 0.0, 0.0)
    assert y == 0.0
    st.reset()
    for _ in range(200_000):
        y = st.step(0.0, 0.0, 1e-3)
    assert abs(y) < 1e-9


def test_tfob_from_params(sea_blocked):
    st = TfobState.from_params(5.0, sea_blocked)
    assert st.omega_Q == pytest.approx(hz_to_rad(5.0))
    assert st.mdob.J_nominal == sea_blocked.J_m
    with pytest.raises(ValueError):
        MdobState(1.0, DT, 0.0, 1.0)


def test_tfob_complementary_reconstruction(sea_blocked):
    """Exact sensing: the two branches sum back to the spring torque."""
    p = sea_blocked
    st = TfobState.from_params(5.0, p)
    x = (0.0, 0.0, 0.0, 0.0)
    tau_prev = 0.0
    err, sig = [], []
    for k in range(int(round(4.0 / p.dt))):
        t = k * p.dt
        ts = p.K_s * x[0]
        y = st.step(x[1], tau_prev, ts)
        if t >= 1.0:
            err.append(y - ts)
            sig.append(ts)
        tau = 2.0 * math.sin(hz(1.0) * t)
        x = _rk4(x, tau, p)
        tau_prev = tau
    assert math.sqrt(np.mean(np.square(err))) < 0.005 * math.sqrt(np.mean(np.square(sig)))
