"""Encoder quantization, backlash offsets and the distribution of DFM errors."""
import math

import numpy as np

from seaforce.sensing import (EncoderModel, SpringErrorModel, collect_error_stats,
                              corrupt_spring_deflection, default_backlash_halfwidth,
                              dfm_estimate, error_ratio_H, quantize)

spring = EncoderModel(bits=19)
motor = EncoderModel(counts_per_turn=2000, quadrature_multiplier=4, reduction=100)
print(f"spring encoder step {spring.step:.4e} rad, motor step at the output {motor.step:.4e} rad")
print(f"error ratio H = {error_ratio_H(EncoderModel(counts_per_turn=2000), spring, 100):.4f}")

# backlash: a triangle wave of deflection traces a loop of height 2 K theta_h
K = 4950.0
h = default_backlash_halfwidth(K)
t = np.linspace(0, 2, 4001)
theta = 2e-3 * (2 / math.pi) * np.arcsin(np.sin(2 * math.pi * t))
measured = corrupt_spring_deflection(theta, SpringErrorModel(h, spring))
err = dfm_estimate(measured, K) - K * theta
print(f"backlash half-width {h:.3e} rad; DFM error range {err.min():+.3f} .. {err.max():+.3f} N*m")

# DFM error variance grows with the square of the stiffness
torque = 3.0 * np.sin(2 * math.pi * 0.7 * np.arange(100_000) / 1000.0)
for K in (60.0, 2500.0, 9100.0):
    st = collect_error_stats(torque, dfm_estimate(quantize(torque / K, spring), K))
    print(f"K_s={K:6.0f}  mean {st.mean:+.3e}  std {st.std:.3e} N*m  excess kurtosis {st.excess_kurtosis:+.2f}")
