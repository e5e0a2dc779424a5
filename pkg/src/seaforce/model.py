"""Two-mass SEA dynamics: continuous model, RK4 stepping and analytic transfer functions.

All quantities live in output-side coordinates.  ``tau_m`` is the motor torque
seen at the output of the gearbox and ``theta_m`` the motor angle divided by
the gear ratio.  Use :meth:`SeaParams.from_motor_side` when the motor inertia
and damping are quoted on the motor shaft.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

FREE = "free"
BLOCKED = "blocked"

# default magnitude bound for the divergence guard
DIVERGENCE_BOUND = 1e6


class DivergenceError(RuntimeError):
    """Raised when a plant state field leaves the allowed magnitude bound."""

    def __init__(self, field, value, step=None):
        self.field = field
        self.value = value
        self.step = step
        where = "" if step is None else f" at step {step}"
        super().__init__(f"plant state diverged{where}: {field}={value!r}")


@dataclass(frozen=True)
class SeaParams:
    """Physical constants of the series elastic actuator.

    Units: inertias kg*m^2, dampings N*m*s/rad, stiffnesses N*m/rad, dt s.
    """

    J_m: float
    B_m: float
    J_l: float
    B_l: float
    K_s: float
    K_s_nominal: float | None = None
    N_gear: float = 1.0
    dt: float = 1e-4
    load_mode: str = FREE

    def __post_init__(self):
        if self.K_s_nominal is None:
            object.__setattr__(self, "K_s_nominal", self.K_s)
        for name in ("J_m", "B_m", "J_l", "B_l", "K_s", "K_s_nominal", "N_gear", "dt"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if self.load_mode not in (FREE, BLOCKED):
            raise ValueError(f"load_mode must be 'free' or 'blocked', got {self.load_mode!r}")
        limit = 1.0 / (20.0 * self.fastest_pole_hz())
        if self.dt > limit:
            raise ValueError(
                f"dt={self.dt:g} s too coarse for fastest pole "
                f"{self.fastest_pole_hz():.4g} Hz (need dt <= {limit:.3g} s)"
            )

    @classmethod
    def from_motor_side(cls, J_motor, B_motor, J_l, B_l, K_s, N_gear, **kw):
        """Build parameters from motor-shaft inertia/damping, reflecting them by N^2."""
        n2 = float(N_gear) ** 2
        return cls(J_m=J_motor * n2, B_m=B_motor * n2, J_l=J_l, B_l=B_l, K_s=K_s, N_gear=N_gear, **kw)

    @property
    def blocked(self):
        return self.load_mode == BLOCKED

    def state_matrix(self):
        """Continuous-time A matrix of the state [theta_m, omega_m, theta_l, omega_l]."""
        A = np.zeros((4, 4))
        A[0, 1] = 1.0
        A[1, 0] = -self.K_s / self.J_m
        A[1, 1] = -self.B_m / self.J_m
        if not self.blocked:
            A[1, 2] = self.K_s / self.J_m
            A[2, 3] = 1.0
            A[3, 0] = self.K_s / self.J_l
            A[3, 2] = -self.K_s / self.J_l
            A[3, 3] = -self.B_l / self.J_l
        return A

    def fastest_pole_hz(self):
        return float(np.max(np.abs(np.linalg.eigvals(self.state_matrix())))) / (2 * math.pi)

    def replace(self, **changes):
        kw = {f.name: getattr(self, f.name) for f in fields(self)}
        if "K_s" in changes and "K_s_nominal" not in changes and self.K_s_nominal == self.K_s:
            kw["K_s_nominal"] = None
        kw.update(changes)
        return SeaParams(**kw)


def reference_params(dt=1e-4, load_mode=BLOCKED, K_s=4950.0):
    """Reference actuator parameters; motor inertia and damping reflected through N=100."""
    return SeaParams.from_motor_side(
        J_motor=0.0000625, B_motor=0.0001023, J_l=0.216, B_l=0.0005,
        K_s=K_s, N_gear=100.0, dt=dt, load_mode=load_mode,
    )


@dataclass(frozen=True)
class PlantState:
    theta_m: float = 0.0
    omega_m: float = 0.0
    theta_l: float = 0.0
    omega_l: float = 0.0

    @property
    def theta_s(self):
        return self.theta_m - self.theta_l

    def as_tuple(self):
        return (self.theta_m, self.omega_m, self.theta_l, self.omega_l)

    def energy(self, params):
        return 0.5 * (params.J_m * self.omega_m**2 + params.J_l * self.omega_l**2
                      + params.K_s * self.theta_s**2)


_FIELDS = ("theta_m", "omega_m", "theta_l", "omega_l")


def _check_finite(values, names=_FIELDS):
    for name, v in zip(names, values):
        if not math.isfinite(v):
            raise ValueError(f"non-finite state field {name}={v!r}")


def _deriv(x, tau_m, p):
    th_m, w_m, th_l, w_l = x
    tau_s = p.K_s * (th_m - th_l)
    dw_m = (tau_m - p.B_m * w_m - tau_s) / p.J_m
    if p.load_mode == BLOCKED:
        return (w_m, dw_m, 0.0, 0.0)
    return (w_m, dw_m, w_l, (tau_s - p.B_l * w_l) / p.J_l)


def _rk4(x, u, p):
    h = p.dt
    k1 = _deriv(x, u, p)
    k2 = _deriv(tuple(a + 0.5 * h * b for a, b in zip(x, k1)), u, p)
    k3 = _deriv(tuple(a + 0.5 * h * b for a, b in zip(x, k2)), u, p)
    k4 = _deriv(tuple(a + h * b for a, b in zip(x, k3)), u, p)
    return tuple(a + h / 6.0 * (b + 2.0 * c + 2.0 * d + e)
                 for a, b, c, d, e in zip(x, k1, k2, k3, k4))


def plant_derivative(state, tau_m, params):
    """Time derivative of ``state`` under motor torque ``tau_m``.

    Returned as a :class:`PlantState` whose fields hold the rates
    (d theta_m/dt, d omega_m/dt, d theta_l/dt, d omega_l/dt).
    """
    x = state.as_tuple()
    _check_finite(x)
    if not math.isfinite(tau_m):
        raise ValueError(f"non-finite motor torque {tau_m!r}")
    if params.blocked:
        x = (x[0], x[1], 0.0, 0.0)
    return PlantState(*_deriv(x, tau_m, params))


def step_plant(state, tau_m, params, bound=DIVERGENCE_BOUND):
    """Advance ``state`` by ``params.dt`` with classical RK4, holding ``tau_m`` constant."""
    x = state.as_tuple()
    _check_finite(x)
    if params.blocked:
        x = (x[0], x[1], 0.0, 0.0)
    y = _rk4(x, float(tau_m), params)
    for name, v in zip(_FIELDS, y):
        if not abs(v) <= bound:
            raise DivergenceError(name, v)
    return PlantState(*y)


def simulate_open_loop(params, torque, duration, state=None, log_every=1, bound=DIVERGENCE_BOUND):
    """Integrate the plant under ``torque(t)`` (zero-order hold per step).

    Returns ``(t, X)`` with ``X[:, i]`` the state fields theta_m, omega_m,
    theta_l, omega_l sampled every ``log_every`` steps.
    """
    n = int(round(duration / params.dt))
    x = (state or PlantState()).as_tuple()
    _check_finite(x)
    if params.blocked:
        x = (x[0], x[1], 0.0, 0.0)
    n_log = (n + log_every - 1) // log_every
    t_out = np.empty(n_log)
    X = np.empty((n_log, 4))
    j = 0
    for k in range(n):
        t = k * params.dt
        if k % log_every == 0:
            t_out[j] = t
            X[j] = x
            j += 1
        x = _rk4(x, float(torque(t)), params)
        for name, v in zip(_FIELDS, x):
            if not abs(v) <= bound:
                raise DivergenceError(name, v, step=k)
    return t_out, X


@dataclass(frozen=True)
class FrequencyResponse:
    omega_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega_grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if w.ndim != 1 or w.shape != v.shape:
            raise ValueError("omega_grid and values must be 1-D and of equal length")
        if np.any(np.diff(w) <= 0):
            raise ValueError("omega_grid must be strictly increasing")
        if np.any(np.isnan(v)):
            raise ValueError("frequency response contains NaN")
        object.__setattr__(self, "omega_grid", w)
        object.__setattr__(self, "values", v)

    @property
    def magnitude(self):
        return np.abs(self.values)

    @property
    def phase_deg(self):
        return np.degrees(np.angle(self.values))


def frequency_response(tf, omega_grid, params, **kw):
    """Sample one of the ``eval_tf_*`` maps on a grid."""
    w = np.asarray(omega_grid, dtype=float)
    return FrequencyResponse(w, tf(w, params, **kw))


def _s(omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("omega must be finite and >= 0")
    return 1j * w


def motor_tf(s, params):
    """P_m(s) = 1/(J_m s + B_m)."""
    return 1.0 / (params.J_m * s + params.B_m)


def load_tf(s, params):
    """P_l(s) = 1/(J_l s + B_l); identically zero for a blocked load."""
    if params.blocked:
        return np.zeros_like(s)
    return 1.0 / (params.J_l * s + params.B_l)


def _inv_Ts(s, params):
    return s + params.K_s * load_tf(s, params)


def _scalarize(out, omega):
    return complex(out) if np.ndim(omega) == 0 else out


def eval_tf_theta_s(omega, params):
    """theta_s/tau_m = P_m / (s + K_s (P_m + P_l))."""
    s = _s(omega)
    Pm = motor_tf(s, params)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = Pm / (s + params.K_s * (Pm + load_tf(s, params)))
    return _scalarize(out, omega)


def eval_tf_Ts(omega, params):
    """T_s = theta_s/omega_m = 1 / (s + K_s P_l).

    A blocked load puts a pole at the origin; ``omega == 0`` then returns
    ``complex(inf, 0)`` rather than NaN.
    """
    den = np.atleast_1d(_inv_Ts(_s(omega), params))
    zero = den == 0
    out = np.full(den.shape, complex(np.inf, 0.0))
    out[~zero] = 1.0 / den[~zero]
    return complex(out[0]) if np.ndim(omega) == 0 else out


def eval_tf_Tm(omega, params):
    """T_m = omega_m/tau_m = P_m / (1 + K_s P_m T_s)."""
    s = _s(omega)
    Pm = motor_tf(s, params)
    inv_ts = _inv_Ts(s, params)
    # P_m / (1 + K_s P_m / inv_ts) rewritten to stay finite when inv_ts = 0
    out = Pm * inv_ts / (inv_ts + params.K_s * Pm)
    return _scalarize(out, omega)


def eval_tf_Tm_direct(omega, params):
    """omega_m/tau_m in the unreduced form P_m (s + K_s P_l) / (s + K_s (P_m + P_l))."""
    s = _s(omega)
    Pm = motor_tf(s, params)
    Pl = load_tf(s, params)
    out = Pm * (s + params.K_s * Pl) / (s + params.K_s * (Pm + Pl))
    return _scalarize(out, omega)


def eval_tf_tau_s(omega, params):
    """tau_s/tau_m = K_s P_m T_s / (1 + K_s P_m T_s)."""
    s = _s(omega)
    Pm = motor_tf(s, params)
    inv_ts = _inv_Ts(s, params)
    out = params.K_s * Pm / (inv_ts + params.K_s * Pm)
    return _scalarize(out, omega)
