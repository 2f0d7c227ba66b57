"""
Coordinate-space eigenfunctions of one-mode quadratic forms.

With Q = x and P = -i d/dx the normal-mode operators act as

    b        = (alpha x + beta d/dx) / sqrt(2)
    bbar^dag = (alphabar* x - betabar* d/dx) / sqrt(2)

where (alpha, beta) = u +- v and (alphabar, betabar) = ubar +- vbar.

Every evaluator returns psi on the grid, or (psi, psi', psi'') when called
with ``derivatives=True``. Derivatives are analytic: Hermite functions use
H'_nu = 2 nu H_{nu-1} and the Hermite equation for H''.

A global phase of A is divided out before the normal modes are built
(H = g H1 with A1 = |A|); eigenfunctions are shared and energies scale by g.
The coordinate x keeps its meaning, so no mode rotation is applied.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .forms import OneModeForm, to_coordinate
from .normal_modes import REGION_CODES, Region, bogoliubov, classify, lambda_of
from .special import hermite_nu_scaled, xi

__all__ = [
    "DegenerateError",
    "DomainError",
    "GreekCoeffs",
    "WaveSpec",
    "FAMILIES",
    "greek_coeffs",
    "vacuum_norms",
    "evaluate",
    "energy",
    "is_bounded",
    "eval_vacuum_b",
    "eval_vacuum_bbar",
    "eval_excited",
    "eval_continuous",
    "eval_parity_partner",
    "eval_negative_band",
    "eval_border",
    "eval_coherent",
    "ladder_apply",
    "ladder_ratio",
    "ladder_target",
    "adjoint",
    "growth_rates",
]

DEFAULT_TOL = 1e-9

FAMILIES = (
    "vacuum_b",
    "vacuum_bbar",
    "excited_b",
    "excited_bbar",
    "continuous_b",
    "continuous_bbar_dag",
    "negative_band",
    "border",
    "coherent",
)


class DegenerateError(ValueError):
    """beta or betabar vanishes: the corresponding Gaussian collapses."""


class DomainError(ValueError):
    """The requested family is not a bounded eigenfunction for this form."""


@dataclass(frozen=True)
class GreekCoeffs:
    alpha: complex
    beta: complex
    alpha_bar: complex
    beta_bar: complex
    gamma: complex

    def det_check(self):
        """alpha betabar* + beta alphabar*, equal to 2."""
        return self.alpha * self.beta_bar.conjugate() + self.beta * self.alpha_bar.conjugate()


@dataclass(frozen=True)
class WaveSpec:
    """An eigenfunction family, its form and its label.

    ``param`` is the integer level for vacuum/excited/negative_band, the
    complex order nu for continuous and border families, and the coherent
    amplitude for ``coherent``.
    """

    family: str
    form: OneModeForm
    param: complex = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")


def _csqrt(w):
    # principal root with -0.0 imaginary parts folded to +0.0, so that
    # e.g. -2.2 - 0j gives +1.48j and not -1.48j
    w = complex(w)
    return cmath.sqrt(complex(w.real + 0.0, w.imag + 0.0))


def greek_coeffs(b, tol=DEFAULT_TOL):
    alpha, beta = b.u + b.v, b.u - b.v
    alpha_bar, beta_bar = b.u_bar + b.v_bar, b.u_bar - b.v_bar
    scale = max(abs(b.u), abs(b.v), abs(b.u_bar), abs(b.v_bar))
    if abs(beta) <= tol * scale:
        raise DegenerateError("beta = u - v vanishes")
    if abs(beta_bar) <= tol * scale:
        raise DegenerateError("betabar = ubar - vbar vanishes")
    gamma = _csqrt(beta * beta_bar.conjugate())
    return GreekCoeffs(alpha, beta, alpha_bar, beta_bar, gamma)


# -- shared per-form quantities ------------------------------------------------


@dataclass(frozen=True)
class _Modes:
    phase: complex  # H = phase * H1
    form1: OneModeForm
    lam: complex  # normal-mode eigenvalue of H1
    greek: GreekCoeffs
    a_plus: complex
    a_minus: complex
    b_tilde: complex
    s_b: complex  # sqrt(betabar* / 2 beta)


def _strip_phase(form):
    A, Bp, Bm = form.as_tuple()
    g = A / abs(A) if A != 0 else 1.0 + 0j
    return g, OneModeForm(A / g, Bp / g, Bm / g)


def _modes(form, tol=DEFAULT_TOL):
    g, f1 = _strip_phase(form)
    coeffs = bogoliubov(f1, tol)
    greek = greek_coeffs(coeffs, tol)
    c = to_coordinate(f1)
    s_b = _csqrt(greek.beta_bar.conjugate() / (2 * greek.beta))
    return _Modes(g, f1, coeffs.lam, greek, c.a_tilde_plus, c.a_tilde_minus, c.b_tilde, s_b)


def vacuum_norms(form, tol=DEFAULT_TOL):
    """Prefactors (N_b, N_bbar) of the two Gaussian vacua.

    N_b = (sqrt(pi) beta)^(-1/2) on the principal branch; N_bbar equals
    (sqrt(pi) betabar)^(-1/2) up to a sign, the sign being fixed so that
    <0_bbar|0_b> = conj(N_bbar) N_b sqrt(pi) gamma = 1 exactly.
    """
    m = _modes(form, tol)
    n_b = 1 / cmath.sqrt(math.sqrt(math.pi) * m.greek.beta)
    n_bbar = (1 / (math.sqrt(math.pi) * m.greek.gamma * n_b)).conjugate()
    return n_b, n_bbar


def _region_code(form, tol):
    return classify(form, tol).code


# -- building blocks ---------------------------------------------------------


def _gauss_hermite(nu, terms, q, x, derivatives):
    """sum_k w_k e^{q x^2} H_nu(c_k x) for terms = [(c_k, w_k), ...]."""
    nu = complex(nu)
    f = np.zeros(x.shape, dtype=complex)
    d1 = np.zeros_like(f)
    d2 = np.zeros_like(f)
    for c, w in terms:
        z = c * x
        m0, s0 = hermite_nu_scaled(nu, z)
        if derivatives and nu != 0:
            m1, s1 = hermite_nu_scaled(nu - 1, z)
        else:
            m1, s1 = np.zeros_like(m0), s0
        s = np.maximum(s0, s1)
        h0 = m0 * np.exp(s0 - s)
        h1 = m1 * np.exp(s1 - s)
        with np.errstate(over="ignore", invalid="ignore"):
            env = w * np.exp(q * x * x + s)
            f += env * h0
            if derivatives:
                dh = 2 * nu * h1  # H'_nu / e^s
                ddh = 2 * z * dh - 2 * nu * h0
                d1 += env * (2 * q * x * h0 + c * dh)
                d2 += env * ((2 * q + 4 * q * q * x * x) * h0 + 4 * q * x * c * dh + c * c * ddh)
    if derivatives:
        return f, d1, d2
    return f


def _scaled(out, factor):
    if isinstance(out, tuple):
        return tuple(factor * o for o in out)
    return factor * out


def _level(n, name="n"):
    if int(n) != n or n < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {n!r}")
    return int(n)


# -- families ----------------------------------------------------------------


def eval_vacuum_b(form, x, derivatives=False, tol=DEFAULT_TOL, strict=True):
    """psi_0^b(x) = N_b exp(-alpha x^2 / 2 beta)."""
    return eval_excited(WaveSpec("excited_b", form, 0), x, derivatives, tol, strict)


def eval_vacuum_bbar(form, x, derivatives=False, tol=DEFAULT_TOL, strict=True):
    """psi_0^bbar(x) = N_bbar exp(-alphabar x^2 / 2 betabar)."""
    return eval_excited(WaveSpec("excited_bbar", form, 0), x, derivatives, tol, strict)


def eval_excited(spec, x, derivatives=False, tol=DEFAULT_TOL, strict=True):
    """Hermite-polynomial levels of the b or bbar ladder.

    psi_n^b    = N_b    s_b^n    / sqrt(n!) H_n(x / gamma)  exp(-alpha x^2 / 2 beta)
    psi_m^bbar = N_bbar s_bbar^m / sqrt(m!) H_m(x / gamma*) exp(-alphabar x^2 / 2 betabar)

    with s_b = sqrt(betabar* / 2 beta) and s_bbar = 1 / (2 s_b)*, which is
    sqrt(beta* / 2 betabar) with the sign tied to s_b.

    On the line betabar = 0 the b family is returned as its limit
    N_b (sqrt(2) x / beta)^n / sqrt(n!) exp(-alpha x^2 / 2 beta).
    """
    x = np.asarray(x, dtype=float)
    n = _level(spec.param)
    try:
        m = _modes(spec.form, tol)
    except DegenerateError:
        if spec.family in ("excited_b", "vacuum_b"):
            return _excited_b_collapsed(n, spec.form, x, derivatives, tol, strict)
        raise
    gk = m.greek
    n_b, n_bbar = vacuum_norms(spec.form, tol)
    if spec.family in ("excited_b", "vacuum_b"):
        if strict and _region_code(spec.form, tol) not in _B_OK:
            raise DomainError("the b-vacuum is not normalizable here (|v/u| >= 1)")
        pref = n_b * m.s_b**n / math.sqrt(math.factorial(n))
        q = -gk.alpha / (2 * gk.beta)
        c = 1 / gk.gamma
    elif spec.family in ("excited_bbar", "vacuum_bbar"):
        if strict and _region_code(spec.form, tol) not in _BBAR_OK:
            raise DomainError("the bbar-vacuum does not give a finite pairing here (|vbar/ubar| > 1)")
        s_bbar = (1 / (2 * m.s_b)).conjugate()
        pref = n_bbar * s_bbar**n / math.sqrt(math.factorial(n))
        q = -gk.alpha_bar / (2 * gk.beta_bar)
        c = 1 / gk.gamma.conjugate()
    else:
        raise ValueError(f"eval_excited does not handle {spec.family!r}")
    return _scaled(_gauss_hermite(n, [(c, 1.0)], q, x, derivatives), pref)


def _excited_b_collapsed(n, form, x, derivatives, tol, strict):
    # betabar -> 0 limit of psi_n^b: only the leading power of H_n(x / gamma)
    # survives the s_b^n factor, leaving N_b (sqrt(2) x / beta)^n / sqrt(n!)
    if strict and _region_code(form, tol) not in _B_OK:
        raise DomainError("the b-vacuum is not normalizable here (|v/u| >= 1)")
    _, f1 = _strip_phase(form)
    b = bogoliubov(f1, tol)
    alpha, beta = b.u + b.v, b.u - b.v
    if abs(beta) <= tol * max(abs(b.u), abs(b.v)):
        raise DegenerateError("beta = u - v vanishes")
    n_b = 1 / cmath.sqrt(math.sqrt(math.pi) * beta)
    k = math.sqrt(2) / beta
    pref = n_b * k**n / math.sqrt(math.factorial(n))
    q = -alpha / (2 * beta)
    g = np.exp(q * x * x)
    p = x.astype(complex) ** n
    f = pref * p * g
    if not derivatives:
        return f
    p1 = n * x.astype(complex) ** (n - 1) if n >= 1 else np.zeros_like(p)
    p2 = n * (n - 1) * x.astype(complex) ** (n - 2) if n >= 2 else np.zeros_like(p)
    g1 = 2 * q * x * g
    g2 = (2 * q + 4 * q * q * x * x) * g
    return f, pref * (p1 * g + p * g1), pref * (p2 * g + 2 * p1 * g1 + p * g2)


def _continuous_terms(spec, tol, strict, flip):
    nu = complex(spec.param)
    m = _modes(spec.form, tol)
    n = math.floor(nu.real)
    if strict:
        code = _region_code(spec.form, tol)
        integer = nu.imag == 0 and nu.real == n and n >= 0
        if spec.family == "continuous_b":
            ok = code == REGION_CODES[Region.II] or (integer and code in _B_OK)
            why = "outside region II only non-negative integer orders give a decaying solution"
        else:
            ok = code == REGION_CODES[Region.II]
            why = "divergent for every nu outside region II"
        if not ok:
            raise DomainError(f"{spec.family}({nu}) is not bounded here: {why}")
    sign = -1.0 if n % 2 else 1.0
    if flip:
        sign = -sign
    if spec.family == "continuous_b":
        pref = xi(nu) * m.s_b**n
        q = -(1j * m.b_tilde + m.lam) / (2 * m.a_minus)
        c = 1 / m.greek.gamma
    elif spec.family == "continuous_bbar_dag":
        pref = xi(nu) * (1 / (2 * m.s_b)) ** n
        q = -(1j * m.b_tilde - m.lam) / (2 * m.a_minus)
        c = 1j / m.greek.gamma
    else:
        raise ValueError(f"{spec.family!r} is not a continuous family")
    return nu, [(c, 1.0), (-c, sign)], q, pref


def eval_continuous(spec, x, derivatives=False, tol=DEFAULT_TOL, strict=True):
    """Eigenfunctions for arbitrary complex nu.

    continuous_b:
        Xi(nu) s_b^n exp(-(iB~ + lam) x^2 / 2A~-) [H_nu(x/gamma) + (-1)^n H_nu(-x/gamma)]
    continuous_bbar_dag:
        Xi(nu) t^n exp(-(iB~ - lam) x^2 / 2A~-) [H_nu(ix/gamma) + (-1)^n H_nu(-ix/gamma)]

    with n = floor(Re nu) and t = 1 / (2 s_b) = sqrt(beta / 2 betabar*).
    Energies are lam (nu + 1/2) and -lam (nu + 1/2) respectively.
    """
    x = np.asarray(x, dtype=float)
    nu, terms, q, pref = _continuous_terms(spec, tol, strict, flip=False)
    return _scaled(_gauss_hermite(nu, terms, q, x, derivatives), pref)


def eval_parity_partner(spec, x, derivatives=False, tol=DEFAULT_TOL, strict=True):
    """Opposite-parity eigenfunction at the energy of a continuous family member.

    Both families have parity (-1)^n with n = floor(Re nu), so that e.g.
    continuous_bbar_dag(-nu-1) is proportional to continuous_b(nu). The
    combination with the relative sign flipped, H_nu(z) - (-1)^n H_nu(-z),
    solves the same equation at the same energy and is the second,
    linearly independent state. It vanishes identically for integer
    nu >= 0, where ValueError is raised.
    """
    nu = complex(spec.param)
    if nu.imag == 0 and nu.real >= 0 and nu.real == math.floor(nu.real):
        raise ValueError("the opposite-parity combination vanishes for integer nu >= 0")
    x = np.asarray(x, dtype=float)
    nu, terms, q, pref = _continuous_terms(spec, tol, strict, flip=True)
    return _scaled(_gauss_hermite(nu, terms, q, x, derivatives), pref)


def eval_negative_band(n, form, x, derivatives=False, tol=DEFAULT_TOL, strict=True):
    """Negative-energy levels: t^n / sqrt(n!) H_n(ix/gamma) exp(alphabar* x^2 / 2 betabar*).

    Eigenvalue -lam (n + 1/2); t = 1 / (2 s_b) as in ``eval_continuous``.
    """
    x = np.asarray(x, dtype=float)
    n = _level(n)
    if strict and _region_code(form, tol) != REGION_CODES[Region.II]:
        raise DomainError("the bbar^dag vacuum is normalizable only in region II")
    m = _modes(form, tol)
    gk = m.greek
    pref = (1 / (2 * m.s_b)) ** n / math.sqrt(math.factorial(n))
    q = (gk.alpha_bar / gk.beta_bar).conjugate() / 2
    return _scaled(_gauss_hermite(n, [(1j / gk.gamma, 1.0)], q, x, derivatives), pref)


def _border_params(form, tol):
    g, f1 = _strip_phase(form)
    c = to_coordinate(f1)
    A = f1.a_coeff
    scale = abs(A) + abs(f1.b_plus) + abs(f1.b_minus)
    if abs(c.a_tilde_minus) > tol * max(scale, 1e-300):
        raise DomainError(f"border solution needs A~- = 0, got {c.a_tilde_minus}")
    k = -1j * c.b_tilde  # equals B- - A on the real border
    if abs(k) <= tol * max(scale, 1e-300):
        raise DomainError("border solution needs A != B-")
    return g, k, c.a_tilde_plus / (4 * k)


def _power(x, nu):
    """x^nu: principal branch for x > 0, e^{i pi nu} |x|^nu for x < 0."""
    n = round(nu.real)
    if nu.imag == 0 and nu.real == n and n >= 0:
        return x.astype(complex) ** n
    with np.errstate(divide="ignore", invalid="ignore"):
        mag = np.abs(x).astype(complex) ** nu
    return np.where(x < 0, np.exp(1j * math.pi * nu) * mag, mag)


def eval_border(nu, form, x, derivatives=False, tol=DEFAULT_TOL):
    """Solution x^nu exp(-c x^2) on the line A~- = 0.

    There the equation is first order; with k = -i B~ (= B- - A for real
    B+-) one gets c = A~+ / 4k and energy k (nu + 1/2). For real B+- this is
    exp(-A x^2 / 2 (B- - A)) x^nu.
    """
    x = np.asarray(x, dtype=float)
    nu = complex(nu)
    _, _, c = _border_params(form, tol)
    with np.errstate(over="ignore"):
        g = np.exp(-c * x * x)
    p = _power(x, nu)
    f = p * g
    if not derivatives:
        return f
    p1 = nu * _power(x, nu - 1) if nu != 0 else np.zeros_like(p)
    p2 = nu * (nu - 1) * _power(x, nu - 2) if nu not in (0, 1) else np.zeros_like(p)
    g1 = -2 * c * x * g
    g2 = (4 * c * c * x * x - 2 * c) * g
    return f, p1 * g + p * g1, p2 * g + 2 * p1 * g1 + p * g2


def _coherent_params(form, tol):
    if _region_code(form, tol) != REGION_CODES[Region.NONDIAG_II]:
        raise DomainError("coherent eigenfunctions exist only on the lam = 0 curve inside region II")
    g, f1 = _strip_phase(form)
    r_minus = cmath.sqrt(f1.b_minus)
    r_plus = f1.a_coeff / r_minus  # so that r_plus r_minus = A exactly
    d = abs(f1.b_minus) - abs(f1.b_plus)
    return g, r_minus, r_plus, d


def eval_coherent(alpha_c, form, x, derivatives=False, tol=DEFAULT_TOL):
    """Eigenfunctions of btilde on the curve B+ B- = A^2 with |B+| < |B-|.

    H = (|B-| - |B+|)/2 btilde^2, btilde = (sqrt(B-) a + sqrt(B+) a^dag) / sqrt(|B-| - |B+|),
    where sqrt(B+) is taken as A / sqrt(B-) so the square reproduces H.
    """
    x = np.asarray(x, dtype=float)
    _, rm, rp, d = _coherent_params(form, tol)
    k = (rm + rp) / (rm - rp)
    x0 = math.sqrt(2) * complex(alpha_c) * math.sqrt(d) / (rm + rp)
    y = x - x0
    with np.errstate(over="ignore"):
        f = np.exp(-0.5 * k * y * y)
    if not derivatives:
        return f
    return f, -k * y * f, (k * k * y * y - k) * f


# -- dispatch ----------------------------------------------------------------

_B_OK = {REGION_CODES[r] for r in (Region.I, Region.II, Region.BORDER_I_II)}
_BBAR_OK = {REGION_CODES[r] for r in (Region.I, Region.III, Region.BORDER_I_III, Region.BORDER_I_II)}


def evaluate(spec, x, derivatives=False, tol=DEFAULT_TOL, strict=True):
    """Evaluate any family described by ``spec`` on the grid ``x``."""
    fam = spec.family
    if fam in ("vacuum_b", "vacuum_bbar"):
        if spec.param != 0:
            raise ValueError("vacuum families take no level")
        return eval_excited(spec, x, derivatives, tol, strict)
    if fam in ("excited_b", "excited_bbar"):
        return eval_excited(spec, x, derivatives, tol, strict)
    if fam in ("continuous_b", "continuous_bbar_dag"):
        return eval_continuous(spec, x, derivatives, tol, strict)
    if fam == "negative_band":
        return eval_negative_band(spec.param, spec.form, x, derivatives, tol, strict)
    if fam == "border":
        return eval_border(spec.param, spec.form, x, derivatives, tol)
    return eval_coherent(spec.param, spec.form, x, derivatives, tol)


def energy(spec, tol=DEFAULT_TOL):
    """Eigenvalue of H (or of H^dag for the bbar families) for ``spec``.

    The bbar families solve the adjoint equation, whose coefficients are
    the complex conjugates of those of H; see ``adjoint(spec)``.
    """
    fam = spec.family
    if fam == "border":
        g, k, _ = _border_params(spec.form, tol)
        return g * k * (complex(spec.param) + 0.5)
    if fam == "coherent":
        g, _, _, d = _coherent_params(spec.form, tol)
        return g * d / 2 * complex(spec.param) ** 2
    g, f1 = _strip_phase(spec.form)
    lam = lambda_of(f1)
    p = complex(spec.param)
    if fam in ("vacuum_b", "excited_b", "continuous_b"):
        return g * lam * (p + 0.5)
    if fam in ("vacuum_bbar", "excited_bbar"):
        return (g * lam).conjugate() * (p + 0.5)
    return -g * lam * (p + 0.5)


def adjoint(spec):
    """True when ``spec`` solves the H^dag equation rather than the H one."""
    return spec.family in ("vacuum_bbar", "excited_bbar")


def growth_rates(spec, tol=DEFAULT_TOL):
    """Real parts of the Gaussian decay rates that govern |x| -> infinity.

    The function is bounded iff every returned rate is positive. For the
    continuous families a non-integer order brings in the e^{z^2} branch of
    H_nu, which adds the second rate.
    """
    fam = spec.family
    if fam == "border":
        _, _, c = _border_params(spec.form, tol)
        return [c.real]
    if fam == "coherent":
        _, rm, rp, _ = _coherent_params(spec.form, tol)
        return [((rm + rp) / (rm - rp)).real / 2]
    m = _modes(spec.form, tol)
    gk = m.greek
    kappa = gk.alpha / gk.beta
    dual = -(gk.alpha_bar / gk.beta_bar).conjugate()  # (iB~ - lam) / A~-
    if fam in ("vacuum_b", "excited_b"):
        return [kappa.real / 2]
    if fam in ("vacuum_bbar", "excited_bbar"):
        return [(gk.alpha_bar / gk.beta_bar).real / 2]
    if fam == "negative_band":
        return [dual.real / 2]
    nu = complex(spec.param)
    integer = nu.imag == 0 and nu.real == math.floor(nu.real) and nu.real >= 0
    if fam == "continuous_b":
        return [kappa.real / 2] if integer else [kappa.real / 2, dual.real / 2]
    return [dual.real / 2] if integer else [kappa.real / 2, dual.real / 2]


def is_bounded(spec, tol=DEFAULT_TOL):
    return all(r > 0 for r in growth_rates(spec, tol))


# -- ladder operators ---------------------------------------------------------

_LADDER_OPS = ("b", "bbar_dag", "minus_b")


def ladder_apply(op, spec, x, tol=DEFAULT_TOL, strict=True):
    """Apply b, bbar^dag or -b to the sampled eigenfunction ``spec``."""
    if op not in _LADDER_OPS:
        raise ValueError(f"op must be one of {_LADDER_OPS}")
    f, d1, _ = evaluate(spec, x, True, tol, strict)
    gk = _modes(spec.form, tol).greek
    x = np.asarray(x, dtype=float)
    if op == "bbar_dag":
        return (gk.alpha_bar.conjugate() * x * f - gk.beta_bar.conjugate() * d1) / math.sqrt(2)
    out = (gk.alpha * x * f + gk.beta * d1) / math.sqrt(2)
    return -out if op == "minus_b" else out


def ladder_target(op, spec):
    """Family member that ``op`` maps ``spec`` onto, and the expected |ratio|.

    For nu = -1 the raising operator lands on the vacuum of the family and
    no magnitude is asserted (None).
    """
    nu = complex(spec.param)
    fam = spec.family
    lowering = (fam == "continuous_b" and op == "b") or (fam == "continuous_bbar_dag" and op == "bbar_dag")
    raising = (fam == "continuous_b" and op == "bbar_dag") or (fam == "continuous_bbar_dag" and op == "minus_b")
    if lowering:
        return WaveSpec(fam, spec.form, nu - 1), math.sqrt(abs(nu))
    if raising:
        if nu == -1:
            vac = WaveSpec("vacuum_b", spec.form, 0) if fam == "continuous_b" else WaveSpec("negative_band", spec.form, 0)
            return vac, None
        return WaveSpec(fam, spec.form, nu + 1), math.sqrt(abs(nu + 1))
    raise ValueError(f"{op} is not a ladder operator of {fam}")


def ladder_ratio(op, spec, x, tol=DEFAULT_TOL, strict=True, rel_floor=1e-6):
    """Pointwise ratio (op psi) / psi_target and the expected |ratio|.

    Points where |psi_target| < rel_floor * max |psi_target| are returned as
    nan: there the target is a tiny remainder of a cancellation between the
    slower-decaying parts of op psi, and the ratio carries no information.
    """
    target, expected = ladder_target(op, spec)
    num = ladder_apply(op, spec, x, tol, strict)
    den = evaluate(target, x, False, tol, strict)
    keep = np.abs(den) >= rel_floor * np.max(np.abs(den))
    ratio = np.full(den.shape, np.nan + 0j)
    ratio[keep] = num[keep] / den[keep]
    return ratio, expected
