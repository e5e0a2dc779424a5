"""Step tracking with a backlash offset, then regulation against a spring-measurement step."""
import numpy as np

from seaforce.analysis import closed_loop_pcl
from seaforce.control import DFM, TFOB, Injection, LoopConfig, Reference, Sensing, run_closed_loop
from seaforce.model import reference_params
from seaforce.sensing import default_backlash_halfwidth

params = reference_params()
ideal = 6.0 * closed_loop_pcl(0.0, params).real
print(f"perfect-sensing response to a 6 N*m step: {ideal:.3f} N*m")

sensing = Sensing(backlash_halfwidth=default_backlash_halfwidth(params.K_s_nominal))
for fb in (DFM, TFOB):
    cfg = LoopConfig(feedback=fb, reference=Reference("step", 6.0, start=1.0, stop=6.0),
                     duration=7.0, q_bandwidth_hz=5.0)
    run = run_closed_loop(cfg, params, sensing)
    m = (run.time >= 4.0) & (run.time < 6.0)
    print(f"{fb:4s} steady torque {np.mean(run['tau_s_true'][m]):.3f} N*m")

inj = (Injection("spring", "step", 0.0005, start=1.0, stop=5.0),)
for fb, q in ((DFM, 5.0), (TFOB, 1.0), (TFOB, 5.0), (TFOB, 10.0)):
    run = run_closed_loop(LoopConfig(feedback=fb, duration=6.0, q_bandwidth_hz=q, injections=inj), params)
    tau = run["tau_s_true"]
    print(f"{fb:4s} omega_Q={q:4.1f} Hz  torque at 1.5 s {tau[1500]:+.4f}, at 4.5 s {tau[4500]:+.4f} N*m")
