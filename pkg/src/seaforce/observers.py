"""Discrete Q filter, motor-side disturbance observer and the transmission force observer.

Every filter is the bilinear (Tustin) image of its continuous prototype, so
DC gains are exact for any ``omega_Q * dt``.
"""
from __future__ import annotations

import math


def hz_to_rad(f):
    return 2.0 * math.pi * f


class QFilter:
    """First-order low-pass Q(s) = 1/(tau_Q s + 1), tau_Q = 1/omega_Q.

    ``omega_Q == 0`` is allowed and makes the filter output identically zero.
    """

    def __init__(self, omega_Q, dt):
        if not omega_Q >= 0:
            raise ValueError("omega_Q must be >= 0")
        if not dt > 0:
            raise ValueError("dt must be > 0")
        self.omega_Q = float(omega_Q)
        self.dt = float(dt)
        wT = self.omega_Q * self.dt
        self._a = (2.0 - wT) / (2.0 + wT)
        self._b = wT / (2.0 + wT)
        self.reset()

    @classmethod
    def from_hz(cls, f_Q, dt):
        return cls(hz_to_rad(f_Q), dt)

    @property
    def cutoff_hz(self):
        return self.omega_Q / (2.0 * math.pi)

    def reset(self, y=0.0, u=0.0):
        self._y = y
        self._u = u

    def step(self, u):
        y = self._a * self._y + self._b * (u + self._u)
        self._y, self._u = y, u
        return y


def q_step(f, u):
    return f.step(u)


class MdobState:
    """Motor-side DOB estimating the spring reaction torque.

    Computes Q(tau_m - P_m^n^-1 omega_m) with P_m^n^-1 = J s + B.  The
    improper part is split as Q s = omega_Q (1 - Q), so one Q state acting on
    ``tau_m - B omega + J omega_Q omega`` plus the static term
    ``-J omega_Q omega`` realizes the whole observer.
    """

    def __init__(self, omega_Q, dt, J_nominal, B_nominal):
        if not (J_nominal > 0 and B_nominal > 0):
            raise ValueError("nominal motor parameters must be positive")
        self.J_nominal = float(J_nominal)
        self.B_nominal = float(B_nominal)
        self.q = QFilter(omega_Q, dt)

    def reset(self):
        self.q.reset()

    def step(self, omega_m_measured, tau_m):
        jw = self.J_nominal * self.q.omega_Q * omega_m_measured
        u = tau_m - self.B_nominal * omega_m_measured + jw
        return self.q.step(u) - jw


def mdob_step(st, omega_m_measured, tau_m):
    return st.step(omega_m_measured, tau_m)


class TfobState:
    """Transmission force observer: mDOB below omega_Q, high-passed DFM above."""

    def __init__(self, omega_Q, dt, J_nominal, B_nominal):
        self.mdob = MdobState(omega_Q, dt, J_nominal, B_nominal)
        self.q_dfm = QFilter(omega_Q, dt)

    @classmethod
    def from_params(cls, f_Q_hz, params, J_nominal=None, B_nominal=None):
        return cls(hz_to_rad(f_Q_hz), params.dt,
                   params.J_m if J_nominal is None else J_nominal,
                   params.B_m if B_nominal is None else B_nominal)

    @property
    def omega_Q(self):
        return self.mdob.q.omega_Q

    def reset(self):
        self.mdob.reset()
        self.q_dfm.reset()

    def step(self, omega_m_measured, tau_m, tau_dfm):
        return self.mdob.step(omega_m_measured, tau_m) + (tau_dfm - self.q_dfm.step(tau_dfm))


def tfob_step(st, omega_m_measured, tau_m, tau_dfm):
    return st.step(omega_m_measured, tau_m, tau_dfm)
