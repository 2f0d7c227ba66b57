"""
Gamma function and Hermite functions of complex order and argument.

``hermite_nu(nu, z)`` is the solution of

    phi'' - 2 z phi' + 2 nu phi = 0

that reduces to the Hermite polynomial for nu = 0, 1, 2, ... and behaves as
(2z)^nu for large |z| with |arg z| < 3 pi / 4.

Evaluation strategy:

* integer nu >= 0: three-term recurrence of the polynomials;
* |z| <= 8, any half plane: the two Kummer-type power series in z^2, accepted when the
  cancellation between their terms costs less than 30 in log scale;
* Re z >= 0 and |z| >= 7 + 0.75 |nu|: the asymptotic series
  (2z)^nu sum_k (-1)^k (-nu)_2k / (k! (2z)^2k);
* remaining Re z >= 0 points: Taylor-series integration of the ODE, started in the
  asymptotic zone on the positive real axis, run inward to |z| and then
  along the arc of radius |z| to arg z. On the real axis the wanted
  solution is the recessive one when integrating inward, so start-value
  errors are damped rather than amplified.

Remaining points with Re z < 0 use the reflection identity

    H_nu(z) = e^{+-i pi nu} H_nu(-z)
              + 2^{nu+1} sqrt(pi) / Gamma(-nu) e^{+-i pi (nu+1)/2} e^{z^2} H_{-nu-1}(-+iz)

which maps them back to the right half plane.
"""

import cmath
import math

import numpy as np

__all__ = [
    "PoleError",
    "gamma_c",
    "loggamma_c",
    "rgamma_c",
    "xi",
    "hermite_nu",
    "hermite_nu_pair",
    "hermite_nu_scaled",
    "hermite_poly",
]

SQRT_PI = math.sqrt(math.pi)
LOG_2PI_HALF = 0.5 * math.log(2 * math.pi)

# Bernoulli numbers B_2k / (2k (2k-1)) for the Stirling series
_STIRLING = [
    1 / 12,
    -1 / 360,
    1 / 1260,
    -1 / 1680,
    1 / 1188,
    -691 / 360360,
    1 / 156,
    -3617 / 122400,
    43867 / 244188,
    -174611 / 125400,
]
_STIRLING_MIN = 15.0

SERIES_RADIUS = 8.0
SERIES_MAX_LOSS = 30.0
STEP = 2.5  # bound on |2 z h| per Taylor step


class PoleError(ZeroDivisionError):
    """Gamma evaluated at a non-positive integer."""


def _is_pole(z):
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def _sinpi(z):
    # sin(pi z) with the integer part removed first (exactly, by Sterbenz),
    # so that the result keeps full relative accuracy next to the zeros
    n = round(z.real)
    s = cmath.sin(math.pi * (z - n))
    return -s if n % 2 else s


def _loggamma_right(z):
    # Re z >= 0.5: shift to |z| >= 15, then Stirling
    shift = 0.0 + 0j
    while abs(z) < _STIRLING_MIN:
        shift += cmath.log(z)
        z += 1
    zinv = 1 / z
    zinv2 = zinv * zinv
    series = 0j
    p = zinv
    for c in _STIRLING:
        series += c * p
        p *= zinv2
    return (z - 0.5) * cmath.log(z) - z + LOG_2PI_HALF + series - shift


def loggamma_c(z):
    """log Gamma(z) (not necessarily the principal branch for Re z < 0.5)."""
    z = complex(z)
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return _loggamma_right(z)
    # reflection
    return cmath.log(math.pi / _sinpi(z)) - _loggamma_right(1 - z)


def gamma_c(z):
    """Gamma(z) for complex z via reflection plus shifted Stirling series."""
    z = complex(z)
    if _is_pole(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real >= 0.5:
        return cmath.exp(_loggamma_right(z))
    return math.pi / (_sinpi(z) * cmath.exp(_loggamma_right(1 - z)))


def rgamma_c(z):
    """1 / Gamma(z); zero at the poles of Gamma."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    if z.real >= 0.5:
        return cmath.exp(-_loggamma_right(z))
    return _sinpi(z) * cmath.exp(_loggamma_right(1 - z)) / math.pi


def xi(nu, tol=1e-12):
    """Normalization factor of the continuous eigenfunction families.

    sqrt((|nu| - 1)!) at negative integers, 1 / sqrt(Gamma(nu + 1)) otherwise.
    """
    nu = complex(nu)
    n = round(nu.real)
    if n < 0 and abs(nu - n) <= tol:
        return complex(math.sqrt(math.factorial(-n - 1)))
    return 1 / cmath.sqrt(gamma_c(nu + 1))


def _integer_order(nu):
    # exact integers only: next to an integer the e^{z^2} part of H_nu is
    # small in absolute terms but not relative to H_n on the real axis
    if nu.imag == 0 and nu.real >= 0 and nu.real == math.floor(nu.real):
        return int(nu.real)
    return None


def hermite_poly(n, z):
    """Hermite polynomial H_n(z) by recurrence, vectorized over z."""
    z = np.asarray(z, dtype=complex)
    h0 = np.ones_like(z)
    if n == 0:
        return h0
    h1 = 2 * z
    for k in range(1, n):
        h0, h1 = h1, 2 * z * h1 - 2 * k * h0
    return h1


def _kummer_series(a, b, w, rtol=1e-16, max_terms=5000):
    """M(a, b, w) by direct summation; also returns sum of |terms|."""
    term = np.ones_like(w)
    total = term.copy()
    absum = np.abs(term)
    small = 0
    k = 0
    while k < max_terms:
        term = term * (a + k) / ((b + k) * (k + 1)) * w
        total = total + term
        absum = absum + np.abs(term)
        k += 1
        if np.all(np.abs(term) <= rtol * np.maximum(np.abs(total), 1e-300)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return total, absum


def _hermite_series(nu, z):
    """Power series around z = 0 and its condition estimate."""
    w = z * z
    c1 = rgamma_c((1 - nu) / 2)
    c2 = rgamma_c(-nu / 2)
    pref = 2**nu * SQRT_PI
    m1, s1 = _kummer_series(-nu / 2, 0.5, w)
    m2, s2 = _kummer_series((1 - nu) / 2, 1.5, w)
    value = pref * (c1 * m1 - 2 * z * c2 * m2)
    bound = abs(pref) * (abs(c1) * s1 + 2 * np.abs(z) * abs(c2) * s2)
    return value, bound


def _hermite_asymptotic(nu, z, max_terms=400):
    """Asymptotic series valid for |arg z| <= pi/2 and large |z|.

    Returns the value and the relative size of the last term used.
    """
    inv = 1 / (2 * z) ** 2
    term = np.ones_like(z)
    total = term.copy()
    best = np.full(z.shape, np.inf)
    done = np.zeros(z.shape, dtype=bool)
    for k in range(max_terms):
        nxt = -term * (2 * k - nu) * (2 * k + 1 - nu) / (k + 1) * inv
        growing = np.abs(nxt) > np.abs(term)
        done |= growing
        term = np.where(done, 0, nxt)
        total = total + term
        best = np.where(done, best, np.abs(term))
        if np.all(done | (np.abs(term) <= 1e-18 * np.abs(total))):
            break
    rel_err = best / np.maximum(np.abs(total), 1e-300)
    return (2 * z) ** nu * total, rel_err


def _asymptotic_radius(nu):
    return 7.0 + 0.75 * abs(nu)


def _taylor_transport(nu, z0, f0, d0, z1, order=32):
    """Carry (phi, phi') of the Hermite ODE from z0 to z1 along a line."""
    z0 = np.asarray(z0, dtype=complex)
    z1 = np.asarray(z1, dtype=complex)
    if z0.size == 0:
        return f0, d0
    length = np.max(np.abs(z1 - z0))
    reach = np.max(np.maximum(np.abs(z0), np.abs(z1)))
    nsteps = max(1, int(math.ceil(length * (2 * reach + math.sqrt(abs(nu)) + 1) / STEP)))
    if z0.size == 1:
        # plain complex arithmetic: numpy overhead dominates for one point
        f, d = _taylor_scalar(nu, complex(z0.flat[0]), complex(np.ravel(f0)[0]), complex(np.ravel(d0)[0]),
                              complex(z1.flat[0]), nsteps, order)
        return np.full(z0.shape, f), np.full(z0.shape, d)
    h = (z1 - z0) / nsteps
    zc = z0.copy()
    f, d = f0.copy(), d0.copy()
    for _ in range(nsteps):
        c_prev, c_cur = f, d
        val = f + d * h
        der = d.copy()
        hp = h.copy()  # h^(k+1)
        for k in range(order - 1):
            c_next = (2 * zc * (k + 1) * c_cur + 2 * (k - nu) * c_prev) / ((k + 1) * (k + 2))
            der = der + (k + 2) * c_next * hp
            hp = hp * h
            val = val + c_next * hp
            c_prev, c_cur = c_cur, c_next
        f, d = val, der
        zc = zc + h
    return f, d


def _taylor_scalar(nu, z0, f, d, z1, nsteps, order):
    h = (z1 - z0) / nsteps
    zc = z0
    for _ in range(nsteps):
        c_prev, c_cur = f, d
        val = f + d * h
        der = d
        hp = h
        for k in range(order - 1):
            c_next = (2 * zc * (k + 1) * c_cur + 2 * (k - nu) * c_prev) / ((k + 1) * (k + 2))
            der += (k + 2) * c_next * hp
            hp *= h
            val += c_next * hp
            c_prev, c_cur = c_cur, c_next
        f, d = val, der
        zc += h
    return f, d


def _hermite_right(nu, z):
    """H_nu(z) for Re z >= 0 (vectorized, scalar order)."""
    out = np.empty(z.shape, dtype=complex)
    if z.size == 0:
        return out
    r = np.abs(z)
    R = _asymptotic_radius(nu)

    far = r >= R
    if np.any(far):
        out[far], _ = _hermite_asymptotic(nu, z[far])

    near = ~far
    if np.any(near):
        out[near] = _hermite_transport(nu, z[near], R)
    return out


def _hermite_transport(nu, z, R):
    # Start on the positive real axis at |z| = R, run inward to |z|, then
    # along the circle to arg z. On both legs the second solution
    # ~ e^{z^2} z^{-nu-1} shrinks relative to H_nu, so start-up and
    # rounding errors are damped rather than amplified.
    zs = np.full(z.shape, R, dtype=complex)
    f, _ = _hermite_asymptotic(nu, zs)
    if nu == 0:
        d = np.zeros_like(f)
    else:
        g, _ = _hermite_asymptotic(nu - 1, zs)
        d = 2 * nu * g
    rad = np.abs(z).astype(complex)
    f, d = _taylor_transport(nu, zs, f, d, rad)
    phi = np.angle(z)
    nchord = int(math.ceil(np.max(np.abs(phi)) * 8)) if z.size else 0
    cur = rad
    for k in range(1, nchord + 1):
        nxt = rad * np.exp(1j * phi * k / nchord)
        f, d = _taylor_transport(nu, cur, f, d, nxt)
        cur = nxt
    return f


def hermite_nu_scaled(nu, z):
    """H_nu(z) as ``(mantissa, log_scale)`` with H = mantissa * exp(log_scale).

    ``log_scale`` is real and only nonzero where the e^{z^2} growth of the
    left half plane would otherwise overflow.
    """
    nu = complex(nu)
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    scale = np.zeros(z.shape)
    n = _integer_order(nu)
    if n is not None:
        return hermite_poly(n, z).reshape(shape), scale.reshape(shape)

    mant = np.empty(z.shape, dtype=complex)
    todo = np.ones(z.shape, dtype=bool)
    # power series wherever its cancellation stays mild
    cand = np.abs(z) <= SERIES_RADIUS
    if np.any(cand):
        val, bound = _hermite_series(nu, z[cand])
        ok = bound <= SERIES_MAX_LOSS * np.maximum(np.abs(val), 1e-300)
        idx = np.flatnonzero(cand)[ok]
        mant[idx] = val[ok]
        todo[idx] = False
    right = todo & (z.real >= 0)
    mant[right] = _hermite_right(nu, z[right])
    left = todo & (z.real < 0)
    if np.any(left):
        zl = z[left]
        upper = zl.imag >= 0
        sgn = np.where(upper, 1.0, -1.0)
        first = np.exp(1j * math.pi * nu * sgn)
        base = _hermite_right(nu, -zl)
        # -i z for the upper half, +i z for the lower half: both have Re >= 0
        w = -1j * sgn * zl
        other = _hermite_right(-nu - 1, w)
        coef = 2 ** (nu + 1) * SQRT_PI * rgamma_c(-nu) * np.exp(1j * math.pi * (nu + 1) / 2 * sgn)
        z2 = zl * zl
        s = np.maximum(z2.real, 0.0)
        mant[left] = first * base * np.exp(-s) + coef * np.exp(z2 - s) * other
        scale[left] = s
    return mant.reshape(shape), scale.reshape(shape)


def hermite_nu(nu, z):
    """Hermite function H_nu(z) for complex order and argument.

    Raises OverflowError when the value exceeds the double range; use
    ``hermite_nu_scaled`` in that case.
    """
    mant, scale = hermite_nu_scaled(nu, z)
    if np.any(scale > 700):
        raise OverflowError("e^{z^2} growth exceeds double range; use hermite_nu_scaled")
    val = mant * np.exp(scale)
    return val if val.ndim else complex(val)


def hermite_nu_pair(nu, z):
    """(H_nu(z), H_nu(-z)) evaluated in one pass."""
    z = np.asarray(z, dtype=complex)
    both = hermite_nu(nu, np.concatenate([z.ravel(), -z.ravel()]))
    both = np.asarray(both)
    m = z.size
    a, b = both[:m].reshape(z.shape), both[m:].reshape(z.shape)
    if z.ndim == 0:
        return complex(a), complex(b)
    return a, b
