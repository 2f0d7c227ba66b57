"""Shared hypothesis strategies and sample generators."""

import numpy as np
from hypothesis import strategies as st

from bosonspec.forms import OneModeForm

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


@st.composite
def forms(draw, a_positive=True):
    """Random one-mode forms; A is real and positive unless requested otherwise."""
    if a_positive:
        A = complex(draw(st.floats(0.1, 3)))
    else:
        A = draw(cplx.filter(lambda z: abs(z) > 0.1))
    return OneModeForm(A, draw(cplx), draw(cplx))


def random_forms(n, seed=0, scale=2.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        A = rng.uniform(0.2, 2.0)
        Bp, Bm = scale * (rng.normal(size=2) + 1j * rng.normal(size=2))
        out.append(OneModeForm(A, Bp, Bm))
    return out
