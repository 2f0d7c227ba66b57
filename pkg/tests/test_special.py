import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from bosonspec.special import (
    PoleError,
    gamma_c,
    hermite_nu,
    hermite_nu_pair,
    hermite_nu_scaled,
    hermite_poly,
    loggamma_c,
    rgamma_c,
    xi,
)

mpmath.mp.dps = 30


def mp_hermite(nu, z):
    return complex(mpmath.hermite(mpmath.mpc(nu), mpmath.mpc(z)))


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestGamma:
    def test_factorial(self):
        assert abs(gamma_c(5) - 24) < 1e-12

    def test_half(self):
        assert abs(gamma_c(0.5) - math.sqrt(math.pi)) < 1e-14

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            gamma_c(z)
        assert rgamma_c(z) == 0

    def test_reflection_50_points(self, rng):
        for _ in range(50):
            z = complex(rng.uniform(-4, 4), rng.uniform(-3, 3))
            lhs = gamma_c(z) * gamma_c(1 - z)
            rhs = math.pi / cmath.sin(math.pi * z)
            assert rel(lhs, rhs) < 1e-12

    def test_against_mpmath(self, rng):
        worst = 0.0
        for _ in range(300):
            r = rng.uniform(0, 50)
            z = r * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            if abs(z - round(z.real)) < 1e-3 and z.real < 0.5:
                continue
            ref = mpmath.gamma(mpmath.mpc(z))
            worst = max(worst, float(abs(mpmath.mpc(gamma_c(z)) - ref) / abs(ref)))
        assert worst < 1e-13 * 50

    def test_loggamma_consistent(self, rng):
        for _ in range(50):
            z = complex(rng.uniform(0.5, 30), rng.uniform(-20, 20))
            assert rel(cmath.exp(loggamma_c(z)), gamma_c(z)) < 1e-12


class TestXi:
    @pytest.mark.parametrize(
        "nu, value",
        [(0, 1.0), (-2, 1.0), (3, 1 / math.sqrt(6)), (-1, 1.0), (-4, math.sqrt(6))],
    )
    def test_values(self, nu, value):
        assert abs(xi(nu) - value) < 1e-14

    def test_generic(self):
        nu = 0.4 - 1.3j
        assert rel(xi(nu), 1 / cmath.sqrt(gamma_c(nu + 1))) < 1e-14


class TestHermite:
    def test_examples(self):
        assert hermite_nu(2, 1) == 2
        z = np.array([0.3, -2 + 1j, 4j])
        assert np.all(hermite_nu(0, z) == 1)

    def test_integer_order_exact_polynomials(self):
        # exact integer-coefficient polynomials from numpy's physicists' Hermite basis
        zs = np.array([r * cmath.exp(1j * t) for r in (0.1, 1.3, 2.9, 5.0) for t in np.linspace(-3, 3, 9)])
        for n in range(21):
            coeffs = np.polynomial.hermite.herm2poly([0] * n + [1])
            exact = np.array([complex(sum(mpmath.mpf(int(c)) * mpmath.mpc(z) ** k for k, c in enumerate(coeffs))) for z in zs])
            got = hermite_nu(n, zs)
            assert np.max(np.abs(got - exact) / np.maximum(np.abs(exact), 1e-300)) < 1e-12

    def test_noninteger_integer_limit(self):
        z = np.array([0.7, -1.2 + 0.4j, 3.1j])
        assert np.max(np.abs(hermite_nu(3 + 1e-13, z) - hermite_poly(3, z))) < 1e-9

    def test_against_mpmath(self, rng):
        worst = 0.0
        for _ in range(150):
            nu = complex(rng.uniform(-5, 5), rng.uniform(-3, 3))
            z = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
            if abs(z.real) < abs(z.imag) and abs(z) > 4:
                continue  # near the anti-Stokes lines values are ~e^{z^2} mixtures; covered elsewhere
            worst = max(worst, rel(hermite_nu(nu, z), mp_hermite(nu, z)))
        assert worst < 1e-10

    def test_against_mpmath_real_axis(self):
        x = np.linspace(-9, 9, 37)
        for nu in (0.5 + 0.3j, -1.7 + 2j, 2.2 - 1.1j, -3.5, 4.25):
            got = hermite_nu(nu, x)
            ref = np.array([mp_hermite(nu, t) for t in x])
            assert np.max(np.abs(got - ref) / np.abs(ref)) < 1e-10

    def test_connection_formula_100_points(self, rng):
        for _ in range(100):
            nu = complex(rng.uniform(0, 3), rng.uniform(-1, 1))
            z = complex(rng.uniform(0, 3), rng.uniform(-1, 1))
            lhs = hermite_nu(nu, z)
            pref = 2**nu * gamma_c(nu + 1) / math.sqrt(math.pi) * cmath.exp(z * z)
            rhs = pref * (
                cmath.exp(1j * math.pi * nu / 2) * hermite_nu(-nu - 1, 1j * z)
                + cmath.exp(-1j * math.pi * nu / 2) * hermite_nu(-nu - 1, -1j * z)
            )
            assert rel(lhs, rhs) < 1e-10

    def test_connection_formula_example(self):
        nu, z = 0.3 + 0.2j, 1.5
        pref = 2**nu * gamma_c(nu + 1) / math.sqrt(math.pi) * cmath.exp(z * z)
        rhs = pref * (
            cmath.exp(1j * math.pi * nu / 2) * hermite_nu(-nu - 1, 1j * z)
            + cmath.exp(-1j * math.pi * nu / 2) * hermite_nu(-nu - 1, -1j * z)
        )
        assert rel(hermite_nu(nu, z), mp_hermite(nu, z)) < 1e-12
        assert rel(rhs, mp_hermite(nu, z)) < 1e-10

    def test_recurrence_200_points(self, rng):
        for _ in range(200):
            nu = complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) * 0.7
            z = 5 * rng.uniform() * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            lhs = hermite_nu(nu + 1, z)
            rhs = 2 * z * hermite_nu(nu, z) - 2 * nu * hermite_nu(nu - 1, z)
            scale = max(abs(lhs), abs(2 * z * hermite_nu(nu, z)), abs(2 * nu * hermite_nu(nu - 1, z)))
            assert abs(lhs - rhs) / scale < 1e-10

    def test_derivative_identity(self, rng):
        h = 1e-5
        for _ in range(50):
            nu = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            fd = (hermite_nu(nu, z + h) - hermite_nu(nu, z - h)) / (2 * h)
            an = 2 * nu * hermite_nu(nu - 1, z)
            assert abs(fd - an) / max(abs(an), 1e-12) < 1e-6

    def test_ode_residual(self, rng):
        for _ in range(100):
            nu = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
            z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            f = hermite_nu(nu, z)
            d1 = 2 * nu * hermite_nu(nu - 1, z)
            d2 = 4 * nu * (nu - 1) * hermite_nu(nu - 2, z)
            res = d2 - 2 * z * d1 + 2 * nu * f
            scale = max(abs(d2), abs(2 * z * d1), abs(2 * nu * f))
            assert abs(res) / scale < 1e-9

    def test_large_argument_growth(self):
        for nu in (0.5 + 0.3j, -2.5, 3.3 - 1j):
            for t in (-0.6, 0.0, 0.7):
                z = 40 * cmath.exp(1j * t)
                assert rel(hermite_nu(nu, z), (2 * z) ** nu) < 0.01

    def test_negative_axis_dominant_term(self):
        # at z = -20 the e^{z^2} part dominates by e^400: compare in log form
        z = -20.0
        for nu in (0.5 + 0.3j, -1.5, 1.25 - 0.5j):
            mant, scale = hermite_nu_scaled(nu, z)
            log_h = cmath.log(complex(mant)) + float(scale)
            log_dom = (
                cmath.log(-math.sqrt(math.pi) * cmath.exp(1j * math.pi * nu) * rgamma_c(-nu))
                + z * z
                + (-nu - 1) * cmath.log(complex(z))
            )
            ratio = cmath.exp(log_h - log_dom)
            assert abs(ratio - 1) < 0.01

    def test_overflow_reported(self):
        with pytest.raises(OverflowError):
            hermite_nu(0.5, -40.0)

    def test_pair(self):
        z = np.array([0.7, 1.5 - 2j])
        a, b = hermite_nu_pair(-1.5, z)
        assert np.allclose(a, hermite_nu(-1.5, z), rtol=0, atol=0)
        assert np.allclose(b, hermite_nu(-1.5, -z), rtol=0, atol=0)
        for n in range(6):
            p, m = hermite_nu_pair(n, z)
            assert np.allclose(p, (-1) ** n * m, rtol=1e-15)

    @given(
        st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
        st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
    )
    def test_recurrence_property(self, nu, z):
        # dyadic order so that nu +- 1 are exact and all three calls see the same nu
        nu = complex(round(nu.real * 2**20), round(nu.imag * 2**20)) / 2**20
        lhs = hermite_nu(nu + 1, z)
        a = 2 * z * hermite_nu(nu, z)
        b = 2 * nu * hermite_nu(nu - 1, z)
        assert abs(lhs - (a - b)) <= 1e-10 * max(abs(lhs), abs(a), abs(b), 1e-300)
