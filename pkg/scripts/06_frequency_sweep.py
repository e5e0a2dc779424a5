"""Tracking and estimation RMSE for 3 N*m sinusoids across frequency."""
from seaforce.analysis import frequency_rmse_sweep
from seaforce.control import Sensing
from seaforce.model import reference_params
from seaforce.sensing import EncoderModel, default_backlash_halfwidth

params = reference_params()
motor = EncoderModel(counts_per_turn=2000, quadrature_multiplier=4, reduction=100)
motor = EncoderModel(counts_per_turn=2000, quadrature_multiplier=4, reduction=100,
                     gaussian_sigma=motor.equivalent_sigma, effects={"quantize", "gaussian"})
sensing = Sensing(motor, EncoderModel(bits=19), default_backlash_halfwidth(params.K_s_nominal))

rows = frequency_rmse_sweep([0.5, 2.0], 3.0, params, sensing, q_bandwidths_hz=(1.0, 5.0), seed=11)
print(" freq   controller   tracking   estimation  [N*m]")
for r in rows:
    print(f"{r.frequency_hz:4.1f} Hz  {r.controller:10s}  {r.tracking_rmse:8.3f}  {r.estimation_rmse:10.3f}")
