import csv
import math

import numpy as np
import pytest

from seaforce.analysis import closed_loop_pcl, fit_sinusoid, sensitivity_maps
from seaforce.control import (DFM, SERIES, TFOB, Injection, LoopConfig, PdController, PdParams,
                              Reference, RunResult, Sensing, pd_step, rmse, run_closed_loop)
from seaforce.model import DivergenceError
from seaforce.sensing import EncoderModel, default_backlash_halfwidth

DT = 1e-4


def test_pd_zero_error_zero_torque():
    c = PdController(PdParams(), DT)
    assert all(pd_step(c, 0.0) == 0.0 for _ in range(100))


def test_pd_constant_error_settles_to_proportional_term():
    c = PdController(PdParams(), DT)
    for _ in range(2000):
        u = pd_step(c, 1.0)
    assert u == pytest.approx(1.0, abs=1e-9)


def test_pd_ramp_gives_derivative_gain():
    c = PdController(PdParams(K_p=0.0, K_d=0.014), DT)
    for k in range(2000):
        u = pd_step(c, k * DT)
    assert u == pytest.approx(0.014, rel=1e-6)


def test_pd_params_validation():
    with pytest.raises(ValueError):
        PdParams(K_p=-1.0)
    with pytest.raises(ValueError):
        PdParams(derivative_cutoff=0.0)


def test_pd_tf_matches_discrete_at_low_frequency():
    pd = PdParams()
    assert pd.tf(0.0) == 1.0
    s = 1j * 2 * math.pi * 1.0
    assert abs(pd.tf(s) - (1 + 0.014 * s / (s / pd.derivative_cutoff + 1))) < 1e-12


def test_reference_shapes():
    step = Reference("step", 6.0, start=1.0, stop=6.0)
    assert [step(t) for t in (0.5, 1.0, 5.99, 6.0)] == [0.0, 6.0, 6.0, 0.0]
    sine = Reference("sine", 2.0, 1.0, start=0.0)
    assert sine(0.25) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        Reference("ramp")
    with pytest.raises(ValueError):
        Reference("step", math.nan)


def test_loop_config_validation():
    with pytest.raises(ValueError):
        LoopConfig(feedback="MDOB")
    with pytest.raises(ValueError):
        LoopConfig(duration=1.0, reference=Reference("step", 1.0, start=2.0))
    with pytest.raises(ValueError):
        LoopConfig(duration=1.0, injections=(Injection("spring", start=3.0),))
    with pytest.raises(ValueError):
        Injection("load")


def test_zero_reference_perfect_sensing_stays_zero(sea_blocked):
    run = run_closed_loop(LoopConfig(duration=0.5), sea_blocked)
    for name in SERIES:
        assert np.all(run[name] == 0.0), name


def test_series_lengths_and_sample_period(sea_blocked):
    run = run_closed_loop(LoopConfig(duration=0.5, reference=Reference("step", 1.0)), sea_blocked)
    assert run.sample_period == pytest.approx(1e-3)
    assert all(len(run[n]) == len(run.time) == 500 for n in SERIES)


def test_reproducible_with_seed(sea_blocked):
    enc = EncoderModel(counts_per_turn=2000, quadrature_multiplier=4, reduction=100,
                       gaussian_sigma=2e-6, effects={"quantize", "gaussian"})
    sensing = Sensing(enc, EncoderModel(bits=19), default_backlash_halfwidth(4950))
    cfg = LoopConfig(reference=Reference("sine", 3.0, 1.0), duration=0.5, seed=4)
    a = run_closed_loop(cfg, sea_blocked, sensing)
    b = run_closed_loop(cfg, sea_blocked, sensing)
    c = run_closed_loop(LoopConfig(reference=Reference("sine", 3.0, 1.0), duration=0.5, seed=5),
                        sea_blocked, sensing)
    for n in SERIES:
        np.testing.assert_array_equal(a[n], b[n])
    assert not np.array_equal(a["omega_m_measured"], c["omega_m_measured"])
    assert a.metadata["config_hash"] == b.metadata["config_hash"] != c.metadata["config_hash"]


def test_divergence_reports_step(sea_blocked):
    with pytest.raises(DivergenceError) as exc:
        run_closed_loop(LoopConfig(feedback=DFM, reference=Reference("step", 1.0), duration=1.0),
                        sea_blocked, pd=PdParams(K_p=1e4))
    assert exc.value.step is not None and exc.value.step > 0


def test_torque_limit_saturates(sea_blocked):
    run = run_closed_loop(LoopConfig(reference=Reference("step", 6.0), duration=0.3, torque_limit=2.0),
                          sea_blocked)
    assert np.max(np.abs(run["tau_m"])) <= 2.0


def test_step_with_backlash_dfm_error_tfob_none(sea_blocked):
    sensing = Sensing(backlash_halfwidth=default_backlash_halfwidth(4950.0))
    ref = Reference("step", 6.0, start=1.0, stop=6.0)
    ideal = 6.0 * closed_loop_pcl(0.0, sea_blocked).real
    window = (4.0, 6.0)
    out = {}
    for fb in (DFM, TFOB):
        run = run_closed_loop(LoopConfig(feedback=fb, reference=ref, duration=6.0, q_bandwidth_hz=5.0),
                              sea_blocked, sensing)
        out[fb] = rmse(run, "tau_s_true", ideal, window)
    assert out[DFM] >= 0.6
    assert out[TFOB] <= 0.1


def test_spring_noise_step_decays_faster_with_bandwidth(sea_blocked):
    inj = (Injection("spring", "step", 0.0005, start=1.0, stop=5.0),)
    dev = {}
    for fb, q in ((DFM, 1.0), (TFOB, 1.0), (TFOB, 5.0), (TFOB, 10.0)):
        run = run_closed_loop(LoopConfig(feedback=fb, duration=3.0, q_bandwidth_hz=q, injections=inj),
                              sea_blocked)
        dev[(fb, q)] = abs(run["tau_s_true"][(run.time > 1.5) & (run.time < 3.0)]).mean()
    assert dev[(DFM, 1.0)] > dev[(TFOB, 1.0)] > dev[(TFOB, 5.0)] > dev[(TFOB, 10.0)]


def test_perfect_sensing_feedback_sources_share_tracking(sea_blocked):
    ref = Reference("sine", 3.0, 2.0)
    a = run_closed_loop(LoopConfig(feedback=DFM, reference=ref, duration=2.0), sea_blocked)
    b = run_closed_loop(LoopConfig(feedback=TFOB, reference=ref, duration=2.0), sea_blocked)
    rel = rmse(a, "tau_s_true", "reference") / rmse(b, "tau_s_true", "reference") - 1
    assert abs(rel) < 0.005


@pytest.mark.parametrize("f", [0.1, 1.0, 10.0])
def test_closed_loop_gain_matches_pcl(sea_blocked, f):
    settle = 2.0
    dur = settle + max(2.0, 3 / f)
    run = run_closed_loop(LoopConfig(feedback=DFM, reference=Reference("sine", 1.0, f), duration=dur),
                          sea_blocked)
    m = run.time >= settle
    g = fit_sinusoid(run.time[m], run["tau_s_true"][m], f) / fit_sinusoid(run.time[m], run["reference"][m], f)
    assert abs(g) == pytest.approx(abs(closed_loop_pcl(2 * math.pi * f, sea_blocked)), rel=0.03)


@pytest.mark.parametrize("fb,key", [(DFM, "xi_s_dfm"), (TFOB, "xi_s_tfob")])
def test_spring_noise_to_output_matches_map(sea_blocked, fb, key):
    f, a = 1.0, 1e-4
    inj = (Injection("spring", "sine", a, f),)
    run = run_closed_loop(LoopConfig(feedback=fb, duration=6.0, q_bandwidth_hz=5.0, injections=inj),
                          sea_blocked)
    m = run.time >= 3.0
    amp = abs(fit_sinusoid(run.time[m], run["tau_s_true"][m], f))
    expected = a * abs(sensitivity_maps(2 * math.pi * f, sea_blocked, PdParams(), 5.0)[key])
    assert amp == pytest.approx(expected, rel=0.05)


def test_rmse_examples(sea_blocked):
    t = np.arange(0, 1, 1e-3)
    series = {n: np.zeros_like(t) for n in SERIES}
    series["tau_s_true"] = np.sin(2 * math.pi * 5 * t) * 2.0
    series["tau_m"] = np.full_like(t, 0.5)
    run = RunResult(t, series)
    assert rmse(run, "tau_s_true", "tau_s_true") == 0.0
    assert rmse(run, "tau_m", "reference") == pytest.approx(0.5)
    assert rmse(run, "tau_s_true", 0.0) == pytest.approx(2.0 / math.sqrt(2), abs=1e-6)
    with pytest.raises(ValueError):
        rmse(run, "tau_m", 0.0, window=(2.0, 3.0))


def test_csv_layout(tmp_path, sea_blocked):
    run = run_closed_loop(LoopConfig(reference=Reference("step", 1.0), duration=0.05), sea_blocked)
    path = tmp_path / "run.csv"
    run.to_csv(path)
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["time_s", *SERIES]
    assert len(rows) == len(run.time) + 1
    assert float(rows[-1][1]) == run["tau_s_true"][-1]
