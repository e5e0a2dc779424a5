"""Estimation accuracy of DFM and TFOB under backlash and encoder noise."""
from seaforce.analysis import steady_window
from seaforce.control import TFOB, LoopConfig, Reference, Sensing, rmse, run_closed_loop
from seaforce.model import reference_params
from seaforce.sensing import EncoderModel, default_backlash_halfwidth

params = reference_params()
motor = EncoderModel(counts_per_turn=2000, quadrature_multiplier=4, reduction=100)
motor = EncoderModel(counts_per_turn=2000, quadrature_multiplier=4, reduction=100,
                     gaussian_sigma=motor.equivalent_sigma, effects={"quantize", "gaussian"})
sensing = Sensing(motor, EncoderModel(bits=19), default_backlash_halfwidth(params.K_s_nominal))

window = steady_window(0.5, 2.0, 8.0)
print(" omega_Q   TFOB RMSE   DFM RMSE   [N*m]")
for q in (0.1, 1.0, 5.0, 10.0):
    cfg = LoopConfig(feedback=TFOB, reference=Reference("sine", 6.0, 0.5), duration=window[1],
                     q_bandwidth_hz=q, seed=1)
    run = run_closed_loop(cfg, params, sensing)
    print(f"{q:6.1f} Hz  {rmse(run, 'tau_hat_tfob', 'tau_s_true', window):9.3f}"
          f"  {rmse(run, 'tau_hat_dfm', 'tau_s_true', window):9.3f}")
