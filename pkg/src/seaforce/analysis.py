"""Closed-loop error maps, finite-band norms and the Q-bandwidth tuning rule.

Frequency maps are continuous-time and evaluated at s = j*omega.  Because a
first-order Q makes ``s Q P_m^-1`` improper, every norm here is a maximum
over a declared :class:`FreqGrid` band rather than over all frequencies.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .control import DFM, TFOB, LoopConfig, PdParams, Reference, rmse, run_closed_loop
from .model import _inv_Ts, _s, motor_tf


@dataclass(frozen=True)
class FreqGrid:
    """Logarithmic angular-frequency grid [rad/s]."""

    omega_min: float
    omega_max: float
    points_per_decade: int = 50

    def __post_init__(self):
        if not (self.omega_min > 0 and self.omega_max > self.omega_min):
            raise ValueError("need 0 < omega_min < omega_max")
        if self.points_per_decade < 20:
            raise ValueError("points_per_decade must be >= 20")

    @classmethod
    def from_hz(cls, f_min=0.01, f_max=100.0, points_per_decade=50):
        return cls(2 * math.pi * f_min, 2 * math.pi * f_max, points_per_decade)

    @property
    def omega(self):
        decades = math.log10(self.omega_max / self.omega_min)
        n = int(math.ceil(decades * self.points_per_decade)) + 1
        return np.logspace(math.log10(self.omega_min), math.log10(self.omega_max), n)

    @property
    def hz(self):
        return self.omega / (2 * math.pi)

    def describe(self):
        return (f"band {self.omega_min / (2 * math.pi):g}-{self.omega_max / (2 * math.pi):g} Hz, "
                f"{self.points_per_decade} points/decade")


DEFAULT_BAND = FreqGrid.from_hz(0.01, 100.0, 50)


def _q(s, q_hz):
    wq = 2 * math.pi * q_hz
    return wq / (s + wq)


def closed_loop_pcl(omega, params, pd=None):
    """Reference-to-torque map C_f K_s P_m T_s / (1 + (1 + C_f) K_s P_m T_s)."""
    pd = pd or PdParams()
    s = _s(omega)
    Cf = pd.tf(s)
    KPm = params.K_s * motor_tf(s, params)
    # numerator and denominator multiplied by 1/T_s so a blocked load is finite at DC
    out = Cf * KPm / (_inv_Ts(s, params) + (1 + Cf) * KPm)
    return complex(out) if np.ndim(omega) == 0 else out


def sensitivity_maps(omega, params, pd, q_hz):
    """Measurement-error to output-torque maps.

    ``xi_s_tfob``  spring error under TFOB feedback, (1 - Q) K_s P_cl
    ``xi_m_tfob``  motor-angle error under TFOB feedback, s Q P_m^-1 P_cl
    ``xi_s_dfm``   spring error under DFM feedback, K_s P_cl
    """
    s = _s(omega)
    pcl = closed_loop_pcl(omega, params, pd)
    Q = _q(s, q_hz)
    return {
        "xi_s_tfob": (1 - Q) * params.K_s * pcl,
        "xi_m_tfob": s * Q * (params.J_m * s + params.B_m) * pcl,
        "xi_s_dfm": params.K_s * pcl,
    }


def tfob_error_bound(omega, params, pd, q_hz, H):
    """Triangle-inequality output-torque bound per unit |xi_s| with |xi_m| = H |xi_s|."""
    if H < 0:
        raise ValueError("H must be >= 0")
    m = sensitivity_maps(omega, params, pd, q_hz)
    return np.abs(m["xi_s_tfob"]) + H * np.abs(m["xi_m_tfob"])


def dfm_error_bound(omega, params, pd):
    return np.abs(params.K_s * closed_loop_pcl(omega, params, pd))


def band_inf_norm(curve, grid=None):
    """Largest magnitude of ``curve`` over the grid it was sampled on."""
    c = np.abs(np.asarray(curve))
    if c.size == 0:
        raise ValueError("empty curve")
    if grid is not None and len(grid.omega) != c.size:
        raise ValueError("curve does not match grid length")
    return float(np.max(c))


def tuning_objective(q_hz, H, params, grid=DEFAULT_BAND):
    """Both sides of ||(1-Q) K_s|| + ||s Q H P_m^-1|| < ||K_s|| over the band."""
    s = 1j * grid.omega
    Q = _q(s, q_hz)
    lhs = (band_inf_norm((1 - Q) * params.K_s)
           + band_inf_norm(s * Q * H * (params.J_m * s + params.B_m)))
    return lhs, float(params.K_s)


@dataclass
class TuningCurve:
    q_hz: np.ndarray
    lhs: np.ndarray
    rhs: float
    H: float
    band: FreqGrid

    @property
    def argmin_index(self):
        return int(np.argmin(self.lhs))

    @property
    def argmin_hz(self):
        return float(self.q_hz[self.argmin_index])

    @property
    def boundary(self):
        """True when the minimum sits on the first or last sampled bandwidth."""
        return self.argmin_index in (0, len(self.q_hz) - 1)

    @property
    def interior_minimum(self):
        i = self.argmin_index
        return (not self.boundary) and self.lhs[i] < self.lhs[i - 1] and self.lhs[i] < self.lhs[i + 1]

    @property
    def satisfiable(self):
        return bool(np.any(self.lhs < self.rhs))


def sweep_tuning(q_hz, H_values, params, grid=DEFAULT_BAND):
    q_hz = np.asarray(q_hz, dtype=float)
    if q_hz.size == 0 or len(H_values) == 0:
        raise ValueError("empty sweep")
    curves = []
    for H in H_values:
        lhs = np.array([tuning_objective(q, H, params, grid)[0] for q in q_hz])
        curves.append(TuningCurve(q_hz, lhs, float(params.K_s), float(H), grid))
    return curves


def fit_sinusoid(t, y, f_hz):
    """Least-squares complex amplitude of the ``f_hz`` component (y ~ Re(A e^{jwt}))."""
    w = 2 * math.pi * f_hz
    M = np.column_stack([np.cos(w * t), np.sin(w * t), np.ones_like(t)])
    a, b, _ = np.linalg.lstsq(M, y, rcond=None)[0]
    return complex(a, -b)


def steady_window(f_hz, settle, min_duration=2.0):
    """(start, stop) covering an integer number of periods after ``settle``."""
    period = 1.0 / f_hz
    n = max(2, int(math.ceil(min_duration / period)))
    return settle, settle + n * period


@dataclass
class SweepRow:
    frequency_hz: float
    controller: str
    q_bandwidth_hz: float
    tracking_rmse: float
    estimation_rmse: float


def frequency_rmse_sweep(freqs_hz, amplitude, params, sensing=None, pd=None,
                         q_bandwidths_hz=(0.1, 1.0, 5.0, 10.0), settle=2.0, seed=0):
    """Tracking and estimation RMSE for sinusoidal references, DFM versus TFOB feedback."""
    rows = []
    for f in freqs_hz:
        if f <= 0 or f >= 0.5 / params.dt:
            raise ValueError(f"frequency {f} Hz not resolvable at dt={params.dt}")
        window = steady_window(f, settle)
        ref = Reference("sine", amplitude, f, 0.0)
        runs = [(DFM, q_bandwidths_hz[0] if q_bandwidths_hz else 1.0)]
        runs += [(TFOB, q) for q in q_bandwidths_hz]
        for fb, q in runs:
            cfg = LoopConfig(feedback=fb, reference=ref, duration=window[1], q_bandwidth_hz=q, seed=seed)
            run = run_closed_loop(cfg, params, sensing, pd)
            label = DFM if fb == DFM else f"TFOB@{q:g}Hz"
            rows.append(SweepRow(f, label, q if fb == TFOB else float("nan"),
                                 rmse(run, "tau_s_true", "reference", window),
                                 rmse(run, "tau_hat_feedback", "tau_s_true", window)))
    return rows


def write_curves_csv(path, grid_name, grid_values, curves):
    """CSV with the grid column first and one column per named curve."""
    names = list(curves)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([grid_name] + names)
        for i, g in enumerate(grid_values):
            w.writerow([repr(float(g))] + [repr(float(curves[n][i])) for n in names])
