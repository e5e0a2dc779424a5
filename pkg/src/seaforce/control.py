"""PD force control loop around the SEA with DFM or TFOB feedback."""
from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .model import DIVERGENCE_BOUND, DivergenceError, PlantState, _rk4
from .observers import TfobState, hz_to_rad
from .sensing import EncoderChannel, SpringErrorModel

DFM = "DFM"
TFOB = "TFOB"

SERIES = (
    "tau_s_true", "tau_hat_feedback", "tau_hat_dfm", "tau_hat_tfob", "tau_m",
    "theta_s_true", "theta_s_measured", "omega_m_true", "omega_m_measured", "reference",
)


@dataclass(frozen=True)
class PdParams:
    K_p: float = 1.0
    K_d: float = 0.014
    derivative_cutoff: float = 2 * math.pi * 100.0  # rad/s

    def __post_init__(self):
        if self.K_p < 0 or self.K_d < 0:
            raise ValueError("PD gains must be non-negative")
        if not (self.derivative_cutoff > 0 and math.isfinite(self.derivative_cutoff)):
            raise ValueError("derivative filter cutoff must be finite and positive")

    def tf(self, s):
        """Continuous C_f(s) = K_p + K_d s / (s/omega_d + 1)."""
        wd = self.derivative_cutoff
        return self.K_p + self.K_d * s * wd / (s + wd)


class PdController:
    """Bilinear-discretized PD with first-order band-limited derivative."""

    def __init__(self, pd, dt):
        self.pd = pd
        wT = pd.derivative_cutoff * dt
        self._a = (2.0 - wT) / (2.0 + wT)
        self._c = pd.K_d * pd.derivative_cutoff * 2.0 / (2.0 + wT)
        self.reset()

    def reset(self):
        self._d = 0.0
        self._e = 0.0

    def step(self, e):
        self._d = self._a * self._d + self._c * (e - self._e)
        self._e = e
        return self.pd.K_p * e + self._d


def pd_step(ctrl, error):
    return ctrl.step(error)


@dataclass(frozen=True)
class Reference:
    """Torque reference: ``zero``, ``step`` or ``sine``, active on [start, stop)."""

    kind: str = "zero"
    amplitude: float = 0.0
    frequency_hz: float = 0.0
    start: float = 0.0
    stop: float = math.inf

    def __post_init__(self):
        if self.kind not in ("zero", "step", "sine"):
            raise ValueError(f"unknown reference kind {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise ValueError("reference amplitude must be finite")

    def __call__(self, t):
        if self.kind == "zero" or not (self.start <= t < self.stop):
            return 0.0
        if self.kind == "step":
            return self.amplitude
        return self.amplitude * math.sin(2 * math.pi * self.frequency_hz * (t - self.start))


@dataclass(frozen=True)
class Injection:
    """Additive error on a measured angle [rad]: ``step``, ``sine`` or ``gaussian``."""

    target: str  # "spring" or "motor"
    kind: str = "step"
    amplitude: float = 0.0
    frequency_hz: float = 0.0
    phase: float = 0.0
    start: float = 0.0
    stop: float = math.inf
    seed: int = 0

    def __post_init__(self):
        if self.target not in ("spring", "motor"):
            raise ValueError(f"injection target must be 'spring' or 'motor', got {self.target!r}")
        if self.kind not in ("step", "sine", "gaussian"):
            raise ValueError(f"unknown injection kind {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise ValueError("injection amplitude must be finite")


def _injection_fn(inj):
    if inj.kind == "gaussian":
        rng = np.random.default_rng(inj.seed)

        def f(t):
            return inj.amplitude * rng.standard_normal() if inj.start <= t < inj.stop else 0.0
    elif inj.kind == "sine":
        w = 2 * math.pi * inj.frequency_hz

        def f(t):
            return inj.amplitude * math.sin(w * t + inj.phase) if inj.start <= t < inj.stop else 0.0
    else:
        def f(t):
            return inj.amplitude if inj.start <= t < inj.stop else 0.0
    return f


@dataclass(frozen=True)
class LoopConfig:
    feedback: str = TFOB
    reference: Reference = Reference()
    duration: float = 1.0
    q_bandwidth_hz: float = 5.0
    injections: tuple = ()
    log_rate_hz: float = 1000.0
    torque_limit: float | None = None
    J_nominal: float | None = None
    B_nominal: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.feedback not in (DFM, TFOB):
            raise ValueError(f"feedback must be 'DFM' or 'TFOB', got {self.feedback!r}")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if not self.q_bandwidth_hz >= 0:
            raise ValueError("q_bandwidth_hz must be >= 0")
        for inj in self.injections:
            if inj.start > self.duration:
                raise ValueError("injection starts after the end of the run")
        if self.reference.start > self.duration:
            raise ValueError("reference starts after the end of the run")

    def config_hash(self):
        blob = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Sensing:
    """Measurement chain of one run.  ``None`` entries mean perfect sensing."""

    motor_encoder: object = None  # EncoderModel
    spring_encoder: object = None  # EncoderModel
    backlash_halfwidth: float = 0.0

    @property
    def perfect(self):
        return self.motor_encoder is None and self.spring_encoder is None and self.backlash_halfwidth == 0


@dataclass
class RunResult:
    time: np.ndarray
    series: dict
    metadata: dict = field(default_factory=dict)

    def __getitem__(self, key):
        if key in ("time", "time_s"):
            return self.time
        return self.series[key]

    @property
    def sample_period(self):
        return self.metadata.get("sample_period")

    def to_csv(self, path):
        cols = [self.series[name] for name in SERIES]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(("time_s",) + SERIES)
            for i, t in enumerate(self.time):
                w.writerow([repr(float(t))] + [repr(float(c[i])) for c in cols])


def run_closed_loop(cfg, params, sensing=None, pd=None, state=None):
    """Simulate the force loop of ``cfg`` on the plant ``params``.

    Per step: read the (corrupted) sensors, form the DFM and TFOB estimates,
    compute the PD torque from the selected estimate and advance the plant by
    one RK4 step.  Output is decimated to ``cfg.log_rate_hz``.
    """
    sensing = sensing or Sensing()
    pd = pd or PdParams()
    dt = params.dt
    n_steps = int(round(cfg.duration / dt))
    decim = max(1, int(round(1.0 / (cfg.log_rate_hz * dt))))

    seeds = np.random.SeedSequence(cfg.seed).generate_state(2)
    motor_ch = EncoderChannel(sensing.motor_encoder, int(seeds[0])) if sensing.motor_encoder else None
    spring = SpringErrorModel(sensing.backlash_halfwidth, sensing.spring_encoder, int(seeds[1]))
    spring_perfect = sensing.spring_encoder is None and sensing.backlash_halfwidth == 0

    spring_inj = [_injection_fn(i) for i in cfg.injections if i.target == "spring"]
    motor_inj = [_injection_fn(i) for i in cfg.injections if i.target == "motor"]

    tfob = TfobState(hz_to_rad(cfg.q_bandwidth_hz), dt,
                     params.J_m if cfg.J_nominal is None else cfg.J_nominal,
                     params.B_m if cfg.B_nominal is None else cfg.B_nominal)
    ctrl = PdController(pd, dt)
    use_tfob = cfg.feedback == TFOB
    K_s, K_n = params.K_s, params.K_s_nominal
    limit = cfg.torque_limit
    ref = cfg.reference
    blocked = params.blocked

    x = (state or PlantState()).as_tuple()
    n_log = (n_steps + decim - 1) // decim
    log = np.zeros((n_log, len(SERIES)))
    times = np.zeros(n_log)
    th_m_prev = None
    tau_m = 0.0
    j = 0
    for k in range(n_steps):
        t = k * dt
        th_m, w_m, th_l, _ = x
        th_s = th_m - th_l

        # measurements
        th_m_meas = motor_ch.read(th_m) if motor_ch else th_m
        for f in motor_inj:
            th_m_meas += f(t)
        th_s_meas = th_s if spring_perfect else spring.measure(th_s)
        for f in spring_inj:
            th_s_meas += f(t)
        w_m_meas = 0.0 if th_m_prev is None else (th_m_meas - th_m_prev) / dt
        th_m_prev = th_m_meas

        # estimates; the mDOB sees the torque applied over the last interval
        tau_dfm = K_n * th_s_meas
        tau_tfob = tfob.step(w_m_meas, tau_m, tau_dfm)
        fb = tau_tfob if use_tfob else tau_dfm
        r = ref(t)
        tau_m = ctrl.step(r - fb)
        if limit is not None:
            tau_m = min(max(tau_m, -limit), limit)

        if k % decim == 0:
            times[j] = t
            log[j] = (K_s * th_s, fb, tau_dfm, tau_tfob, tau_m, th_s, th_s_meas, w_m, w_m_meas, r)
            j += 1

        x = _rk4(x, tau_m, params)
        if blocked:
            x = (x[0], x[1], 0.0, 0.0)
        for name, v in zip(("theta_m", "omega_m", "theta_l", "omega_l"), x):
            if not abs(v) <= DIVERGENCE_BOUND:
                raise DivergenceError(name, v, step=k)

    series = {name: log[:, i].copy() for i, name in enumerate(SERIES)}
    meta = {"config_hash": cfg.config_hash(), "seed": cfg.seed, "sample_period": dt * decim,
            "feedback": cfg.feedback, "q_bandwidth_hz": cfg.q_bandwidth_hz}
    return RunResult(times, series, meta)


def rmse(run, a, b, window=None):
    """RMS of series ``a - b`` over the time window ``(t0, t1)``.

    ``b`` may also be a constant.
    """
    t = run.time
    mask = np.ones_like(t, dtype=bool)
    if window is not None:
        t0, t1 = window
        mask = (t >= t0) & (t < t1)
    if not mask.any():
        raise ValueError("empty RMSE window")
    ya = run[a][mask]
    yb = run[b][mask] if isinstance(b, str) else b
    return float(np.sqrt(np.mean((ya - yb) ** 2)))
