import math

import numpy as np
import pytest

from seaforce.model import BLOCKED, FREE, SeaParams, reference_params

# Motor inertia and damping exactly as printed in the parameter table,
# taken as output-side values.  Stable only with a fine timestep, which is
# enough for the algebraic checks that use these numbers.
RAW = dict(J_m=0.0000625, B_m=0.0001023, J_l=0.216, B_l=0.0005, K_s=4950.0)


@pytest.fixture
def raw_free():
    return SeaParams(**RAW, dt=1e-5, load_mode=FREE)


@pytest.fixture
def raw_blocked():
    return SeaParams(**RAW, dt=1e-5, load_mode=BLOCKED)


@pytest.fixture
def sea_free():
    return reference_params(load_mode=FREE)


@pytest.fixture
def sea_blocked():
    return reference_params(load_mode=BLOCKED)


def hz(f):
    return 2 * math.pi * f


def sine_fit(t, y, f_hz):
    """Complex amplitude of the f_hz component, with a constant and a linear trend removed."""
    w = hz(f_hz)
    M = np.column_stack([np.cos(w * t), np.sin(w * t), np.ones_like(t), t])
    a, b, *_ = np.linalg.lstsq(M, y, rcond=None)[0]
    return complex(a, -b)
