"""Shared fixtures: reference parameter sets and random-parameter helpers."""

import numpy as np
import pytest
from hypothesis import strategies as st

from lics import Params

# strong drive: deep ionization within a few T, convenient for trapping studies
STRONG = dict(
    gamma_g=5.5, gamma_e=12.74, stark_g=0.5, stark_e=0.6, q_gg=2.3, q_eg=3.4, q_ee=5.0
)
# weak drive: slow dynamics, used for the level-splitting comparisons
WEAK = dict(
    gamma_g=1.08, gamma_e=2.09, stark_g=0.33, stark_e=0.26, q_gg=2.3, q_eg=2.4, q_ee=2.5
)


@pytest.fixture
def strong_params() -> Params:
    return Params(**STRONG)


@pytest.fixture
def weak_params() -> Params:
    return Params(**WEAK)


def make_random_params(rng: np.random.Generator, delta_span: float = 10.0) -> Params:
    """Random physically valid parameters: rates in (0, 20], Fano q in
    [-10, 10], Stark shifts in [-5, 5]."""
    return Params(
        gamma_g=float(rng.uniform(1e-3, 20.0)),
        gamma_e=float(rng.uniform(1e-3, 20.0)),
        stark_g=float(rng.uniform(-5.0, 5.0)),
        stark_e=float(rng.uniform(-5.0, 5.0)),
        q_gg=float(rng.uniform(-10.0, 10.0)),
        q_ee=float(rng.uniform(-10.0, 10.0)),
        q_eg=float(rng.uniform(-10.0, 10.0)),
        delta=float(rng.uniform(-delta_span, delta_span)),
    )


_rate = st.floats(min_value=1e-3, max_value=20.0, allow_nan=False, allow_infinity=False)
_q = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
_shift = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)

params_strategy = st.builds(
    Params,
    gamma_g=_rate,
    gamma_e=_rate,
    stark_g=_shift,
    stark_e=_shift,
    q_gg=_q,
    q_ee=_q,
    q_eg=_q,
    delta=st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False),
)
