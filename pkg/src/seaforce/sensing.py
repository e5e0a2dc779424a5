"""Measurement corruption models and deformation-based force measurement (DFM)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

QUANTIZE = "quantize"
GAUSSIAN = "gaussian"

FREE = "free"
ENGAGED_POSITIVE = "engaged_positive"
ENGAGED_NEGATIVE = "engaged_negative"


@dataclass(frozen=True)
class EncoderModel:
    """Angle encoder description.

    Exactly one of ``counts_per_turn`` (incremental encoder, multiplied by
    ``quadrature_multiplier``) or ``bits`` (absolute encoder) is given.
    ``reduction`` is the ratio between the shaft the encoder sits on and the
    output coordinate; a motor encoder mounted ahead of an N:1 gearbox has
    ``reduction = N`` and therefore an N times finer output-side step.
    """

    counts_per_turn: int | None = None
    bits: int | None = None
    quadrature_multiplier: int = 1
    gaussian_sigma: float = 0.0
    seed: int = 0
    effects: frozenset = frozenset({QUANTIZE})
    reduction: float = 1.0

    def __post_init__(self):
        if (self.counts_per_turn is None) == (self.bits is None):
            raise ValueError("give exactly one of counts_per_turn or bits")
        if self.counts_per_turn is not None and self.counts_per_turn <= 0:
            raise ValueError("counts_per_turn must be positive")
        if self.bits is not None and self.bits <= 0:
            raise ValueError("bits must be positive")
        if self.quadrature_multiplier < 1:
            raise ValueError("quadrature_multiplier must be >= 1")
        if not self.gaussian_sigma >= 0:
            raise ValueError("gaussian_sigma must be >= 0")
        if self.reduction <= 0:
            raise ValueError("reduction must be > 0")
        effects = frozenset(self.effects)
        if not effects <= {QUANTIZE, GAUSSIAN}:
            raise ValueError(f"unknown encoder effects {sorted(effects - {QUANTIZE, GAUSSIAN})}")
        object.__setattr__(self, "effects", effects)

    @property
    def counts(self):
        """Counts per revolution of the encoder shaft."""
        if self.bits is not None:
            return 2**self.bits
        return self.counts_per_turn * self.quadrature_multiplier

    @property
    def step(self):
        """Quantization step in output-side radians."""
        return 2.0 * math.pi / (self.counts * self.reduction)

    @property
    def equivalent_sigma(self):
        """Std of a Gaussian with the same variance as the quantization error."""
        return self.step / math.sqrt(12.0)

    def rng(self):
        return np.random.default_rng(self.seed)


def quantize(angle, enc, rng=None):
    """Floor-quantize ``angle`` to the encoder step, then add Gaussian noise if enabled.

    Works on scalars and arrays.  ``rng`` defaults to a fresh generator seeded
    from ``enc.seed``; pass a long-lived generator to draw a stream.
    """
    x = np.asarray(angle, dtype=float)
    if QUANTIZE in enc.effects:
        step = enc.step
        x = np.floor(x / step) * step
    if GAUSSIAN in enc.effects and enc.gaussian_sigma > 0:
        if rng is None:
            rng = enc.rng()
        x = x + enc.gaussian_sigma * rng.standard_normal(x.shape)
    return float(x) if x.ndim == 0 else x


class EncoderChannel:
    """Stateful per-sample reader for one encoder, owning its own noise stream."""

    _BLOCK = 4096

    def __init__(self, enc, seed=None):
        self.enc = enc
        self._rng = np.random.default_rng(enc.seed if seed is None else seed)
        self._quant = QUANTIZE in enc.effects
        self._step = enc.step
        self._sigma = enc.gaussian_sigma if GAUSSIAN in enc.effects else 0.0
        self._buf = ()
        self._i = 0

    def _normal(self):
        if self._i >= len(self._buf):
            self._buf = self._rng.standard_normal(self._BLOCK).tolist()
            self._i = 0
        z = self._buf[self._i]
        self._i += 1
        return z

    def read(self, angle):
        if self._quant:
            angle = math.floor(angle / self._step) * self._step
        if self._sigma:
            angle += self._sigma * self._normal()
        return angle


def dfm_estimate(theta_s_measured, K_s_nominal):
    """Deformation-based force estimate K_s^n * theta_s^m [N*m]."""
    return K_s_nominal * theta_s_measured


class SpringErrorModel:
    """Spring-deflection measurement: backlash offset automaton plus an encoder.

    The automaton reports an offset of -theta_h while the deflection is being
    loaded upward, +theta_h while loaded downward and 0 before the first
    engagement.  Engagement happens once the deflection has moved more than
    ``engage_travel`` (default: any motion) away from its starting value; a
    switch between engaged states needs 2*theta_h of travel back from the
    last extreme.
    """

    def __init__(self, backlash_halfwidth=0.0, encoder=None, seed=None, engage_travel=0.0):
        if not backlash_halfwidth >= 0:
            raise ValueError("backlash_halfwidth must be >= 0")
        if not engage_travel >= 0:
            raise ValueError("engage_travel must be >= 0")
        self.backlash_halfwidth = float(backlash_halfwidth)
        self.engage_travel = float(engage_travel)
        self.encoder = encoder
        self._channel = EncoderChannel(encoder, seed) if encoder is not None else None
        self.reset()

    def reset(self):
        self.state = FREE
        self._anchor = None

    @property
    def offset(self):
        if self.state == ENGAGED_POSITIVE:
            return -self.backlash_halfwidth
        if self.state == ENGAGED_NEGATIVE:
            return self.backlash_halfwidth
        return 0.0

    def update(self, theta):
        """Advance the backlash automaton with the true deflection and return the offset."""
        h = self.backlash_halfwidth
        if h == 0.0:
            return 0.0
        if self._anchor is None:
            self._anchor = theta
        if self.state == FREE:
            d = theta - self._anchor
            if d != 0.0 and abs(d) >= self.engage_travel:
                self.state = ENGAGED_POSITIVE if d > 0 else ENGAGED_NEGATIVE
                self._anchor = theta
        elif self.state == ENGAGED_POSITIVE:
            if theta > self._anchor:
                self._anchor = theta
            elif theta <= self._anchor - 2 * h:
                self.state, self._anchor = ENGAGED_NEGATIVE, theta
        else:
            if theta < self._anchor:
                self._anchor = theta
            elif theta >= self._anchor + 2 * h:
                self.state, self._anchor = ENGAGED_POSITIVE, theta
        return self.offset

    def measure(self, theta_s_true):
        theta = theta_s_true + self.update(theta_s_true)
        if self._channel is not None:
            theta = self._channel.read(theta)
        return theta


def corrupt_spring_deflection(theta_s_true, model):
    """Measured spring deflection for one sample (or a sequence fed in order)."""
    if np.ndim(theta_s_true) == 0:
        return model.measure(float(theta_s_true))
    return np.array([model.measure(float(t)) for t in np.asarray(theta_s_true, dtype=float)])


def default_backlash_halfwidth(K_s_nominal, offset_nm=2.0):
    """Half-width giving a DFM offset of ``offset_nm`` once engaged."""
    return offset_nm / K_s_nominal


def error_ratio_H(motor_enc, spring_enc, N_gear):
    """Ratio of output-side motor encoder step to spring encoder step.

    Uses the raw counts per turn of the motor encoder (no quadrature factor),
    which is the pairing that yields 2.621 for a 2000 CPT motor encoder behind
    a 100:1 gearbox and a 19-bit spring encoder.
    """
    def raw_counts(enc):
        return 2**enc.bits if enc.bits is not None else enc.counts_per_turn

    if N_gear <= 0:
        raise ValueError("N_gear must be positive")
    return raw_counts(spring_enc) / (raw_counts(motor_enc) * N_gear)


@dataclass
class ErrorStats:
    mean: float
    variance: float
    counts: np.ndarray
    edges: np.ndarray
    n: int
    excess_kurtosis: float = field(default=float("nan"))

    @property
    def std(self):
        return math.sqrt(self.variance)


def collect_error_stats(true_torque, dfm_torque, bins=50):
    """Mean, variance, histogram and excess kurtosis of ``dfm - true``."""
    a = np.asarray(true_torque, dtype=float)
    b = np.asarray(dfm_torque, dtype=float)
    if a.shape != b.shape:
        raise ValueError("series must have equal length")
    if a.size == 0:
        raise ValueError("empty series")
    err = b - a
    counts, edges = np.histogram(err, bins=bins)
    var = float(np.var(err))
    kurt = float(stats.kurtosis(err, fisher=True)) if var > 0 else float("nan")
    return ErrorStats(float(np.mean(err)), var, counts, edges, int(err.size), kurt)
