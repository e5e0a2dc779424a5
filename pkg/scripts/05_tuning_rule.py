"""Band-limited tuning objective against the Q-filter bandwidth for several error ratios."""
import numpy as np

from seaforce.analysis import DEFAULT_BAND, sweep_tuning
from seaforce.model import reference_params

params = reference_params()
q = np.logspace(np.log10(0.05), np.log10(50.0), 13)
curves = sweep_tuning(q, [0.0, 0.5, 2.621, 32.0, 2048.0], params)
print(DEFAULT_BAND.describe(), f"; rhs = K_s = {params.K_s:g} N*m/rad")
print("omega_Q [Hz] " + " ".join(f"H={c.H:<8g}" for c in curves))
for i, f in enumerate(q):
    print(f"{f:11.3f}  " + " ".join(f"{c.lhs[i]:10.1f}" for c in curves))
for c in curves:
    print(f"H={c.H:g}: argmin {c.argmin_hz:.3g} Hz, boundary={c.boundary}, satisfiable={c.satisfiable}")
