"""Open-loop plant: simulate a sinusoidal torque and compare with the analytic response."""
import math

import numpy as np

from seaforce.analysis import fit_sinusoid
from seaforce.model import FREE, eval_tf_theta_s, eval_tf_Tm, simulate_open_loop, reference_params

params = reference_params(load_mode=FREE)
print(params)
print(f"fastest pole {params.fastest_pole_hz():.1f} Hz, dt {params.dt:g} s")

# drive with a 1 Hz torque, let transients settle, then fit the steady sinusoid
f = 1.0
t, X = simulate_open_loop(params, lambda t: math.sin(2 * math.pi * f * t), 10.0, log_every=10)
m = t >= 6.0
u = fit_sinusoid(t[m], np.sin(2 * math.pi * f * t[m]), f)
sim_theta_s = fit_sinusoid(t[m], X[m, 0] - X[m, 2], f) / u
sim_omega_m = fit_sinusoid(t[m], X[m, 1], f) / u

w = 2 * math.pi * f
for name, sim, ana in (("theta_s/tau_m", sim_theta_s, eval_tf_theta_s(w, params)),
                       ("omega_m/tau_m", sim_omega_m, eval_tf_Tm(w, params))):
    print(f"{name:14s} simulated |{abs(sim):.5g}| {math.degrees(np.angle(sim)):7.2f} deg   "
          f"analytic |{abs(ana):.5g}| {math.degrees(np.angle(ana)):7.2f} deg")

# a constant torque spins the coupled system up to tau / (B_m + B_l)
t, X = simulate_open_loop(params, lambda t: 1.0, 10.0, log_every=1000)
print(f"terminal velocity {X[-1, 3]:.4f} rad/s, expected {1 / (params.B_m + params.B_l):.4f}")
