"""
Numerical checks of the coordinate-space eigenfunctions.

* ``inner_biorthogonal``: the pairing int conj(psi_m^bbar) psi_n^b dx;
* ``schrodinger_residual``: pointwise residual of the coordinate equation
  -1/2 A~- psi'' - i B~ (x psi' + psi/2) + 1/2 A~+ x^2 psi = E psi;
* ``overlap_convergence``: the vacuum overlap <0_bbar|0_b> and its convergence.

Integrands are entire functions times a Gaussian, so both the tanh-sinh and
the uniform trapezoid rule converge geometrically once the interval covers
the envelope.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import wavefunctions as wf
from .forms import to_coordinate
from .normal_modes import bogoliubov

__all__ = [
    "QuadratureGrid",
    "ResidualReport",
    "nodes_weights",
    "half_width_for",
    "inner_biorthogonal",
    "biorthogonal_matrix",
    "schrodinger_residual",
    "overlap_convergence",
]

ENVELOPE_LOG = 18 * math.log(10)  # envelope below 1e-18 at the ends
RULES = ("tanh-sinh", "uniform-trapezoid")
TANH_SINH_TMAX = 3.2
MAX_POINTS = 2_000_001


@dataclass(frozen=True)
class QuadratureGrid:
    half_width: float
    points: int
    rule: str = "tanh-sinh"

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}")
        if self.points < 3 or self.half_width <= 0:
            raise ValueError("need points >= 3 and half_width > 0")

    def doubled(self):
        return QuadratureGrid(self.half_width, 2 * self.points - 1, self.rule)

    def to_json(self):
        return asdict(self)


@dataclass(frozen=True)
class ResidualReport:
    max_rel_residual: float
    grid: QuadratureGrid
    energy: complex

    def to_json(self):
        return {
            "max_rel_residual": self.max_rel_residual,
            "grid": self.grid.to_json(),
            "energy": [self.energy.real, self.energy.imag],
        }


def nodes_weights(grid):
    """Nodes and weights of ``grid`` on [-L, L]."""
    L, n = grid.half_width, grid.points
    if grid.rule == "uniform-trapezoid":
        x = np.linspace(-L, L, n)
        w = np.full(n, x[1] - x[0])
        w[[0, -1]] *= 0.5
        return x, w
    k = n // 2
    h = TANH_SINH_TMAX / k
    t = h * np.arange(-k, k + 1)
    s = 0.5 * math.pi * np.sinh(t)
    x = np.tanh(s)
    w = h * 0.5 * math.pi * np.cosh(t) / np.cosh(s) ** 2
    return L * x, L * w


def half_width_for(rate, degree=0, scale=1.0):
    """Half width at which x^degree e^{-rate x^2} has dropped below 1e-18.

    ``scale`` is the length unit of the polynomial factor (|gamma| for
    Hermite polynomials of x / gamma).
    """
    if rate <= 0:
        raise ValueError(f"integrand envelope does not decay (rate {rate})")
    L = math.sqrt(ENVELOPE_LOG / rate)
    if degree:
        L = math.sqrt((ENVELOPE_LOG + degree * math.log(max(2 * L / scale, 1.0))) / rate)
    return L


def _pair_rate(form):
    gk = wf._modes(form).greek
    return (1 / gk.gamma**2).real, abs(gk.gamma)


def _resolved_points(q, L, points):
    # spacing at which the trapezoid rule resolves exp(-q x^2) to 1e-18;
    # matters when the exponent is mostly imaginary
    h = math.pi * math.sqrt((1 / q).real / ENVELOPE_LOG)
    return max(points, int(math.ceil(2 * L / h)) + 1)


def inner_biorthogonal(m, n, form, grid=None, rule="tanh-sinh", points=801):
    """<m_bbar|n_b> = int conj(psi_m^bbar(x)) psi_n^b(x) dx with normalized vacua.

    On the line A~- = 0 (betabar = 0) the bbar functions collapse onto
    delta-function derivatives. The pairing is then returned as its limit,
    computed in the scaled variable t = x / gamma where it reads

        int H_m(t) H_n(t) e^{-t^2} dt / (sqrt(pi) sqrt(2^m m! 2^n n!)),

    i.e. the value in the basis rescaled by (sqrt(2) s_b)^n, which leaves the
    delta_mn structure unchanged and stays finite as betabar -> 0.
    """
    m, n = int(m), int(n)
    try:
        rate, gscale = _pair_rate(form)
    except wf.DegenerateError:
        return _border_limit(m, n)
    if grid is None:
        L = half_width_for(rate, m + n, gscale)
        q = 1 / wf._modes(form).greek.gamma ** 2
        grid = QuadratureGrid(L, _resolved_points(q, L, points), rule)
    x, w = nodes_weights(grid)
    left = wf.evaluate(wf.WaveSpec("excited_bbar", form, m), x)
    right = wf.evaluate(wf.WaveSpec("excited_b", form, n), x)
    return complex(np.sum(w * np.conj(left) * right))


def _border_limit(m, n):
    t, w = np.polynomial.hermite.hermgauss(max(m + n, 2) // 2 + 2)
    hm = np.polynomial.hermite.hermval(t, [0] * m + [1])
    hn = np.polynomial.hermite.hermval(t, [0] * n + [1])
    norm = math.sqrt(math.pi) * math.sqrt(2.0 ** (m + n) * math.factorial(m) * math.factorial(n))
    return complex(np.sum(w * hm * hn) / norm)


def biorthogonal_matrix(form, nmax, **kw):
    """Matrix of <m_bbar|n_b> for m, n = 0..nmax."""
    G = np.empty((nmax + 1, nmax + 1), dtype=complex)
    for m in range(nmax + 1):
        for n in range(nmax + 1):
            G[m, n] = inner_biorthogonal(m, n, form, **kw)
    return G


def schrodinger_residual(spec, energy=None, grid=None, tol=wf.DEFAULT_TOL, strict=True):
    """Maximum pointwise relative residual of the coordinate equation.

    The residual at each x is divided by max(|E psi|, 1e-300) and the
    maximum is taken over points with |psi| > 1e-12 max |psi|. When E = 0
    exactly (e.g. the alpha = 0 coherent state) that denominator is
    meaningless, and the largest term on the left-hand side is used instead.
    Families solving the adjoint equation get conjugated coefficients.
    """
    if energy is None:
        energy = wf.energy(spec, tol)
    energy = complex(energy)
    if grid is None:
        grid = QuadratureGrid(5.0, 1001, "uniform-trapezoid")
    x, _ = nodes_weights(grid)
    f, d1, d2 = wf.evaluate(spec, x, True, tol, strict)
    c = to_coordinate(spec.form)
    ap, am, bt = c.as_tuple()
    if wf.adjoint(spec):
        ap, am, bt = ap.conjugate(), am.conjugate(), bt.conjugate()
    t_kin = -0.5 * am * d2
    t_mix = -1j * bt * (x * d1 + 0.5 * f)
    t_pot = 0.5 * ap * x * x * f
    res = t_kin + t_mix + t_pot - energy * f
    if energy != 0:
        den = np.maximum(np.abs(energy * f), 1e-300)
    else:
        den = np.maximum.reduce([np.abs(t_kin), np.abs(t_mix), np.abs(t_pot), np.full(x.shape, 1e-300)])
    keep = np.abs(f) > 1e-12 * np.max(np.abs(f))
    worst = float(np.max(np.abs(res[keep]) / den[keep]))
    return ResidualReport(worst, grid, energy)


def overlap_convergence(form, points=801, tol=1e-9):
    """Check |(A - lam)/(A + lam)| <= 1 and that <0_bbar|0_b> is finite.

    The overlap is evaluated as the number-basis series
    sum_n conj(cbar_n) c_n = sum_n (w/4)^n (2n)!/(n!)^2 with
    w = conj(vbar/ubar) (v/u) and |w| = |A - lam| / |A + lam|, so it
    converges wherever the ratio is below one, also in regions II and III
    where one vacuum alone is not normalizable. When additionally
    Re(1/gamma^2) > 0 the coordinate integral of the two unnormalized
    Gaussians exists and is compared with its closed form sqrt(pi) gamma.
    """
    from .fock import pairing_series

    g, f1 = wf._strip_phase(form)
    b = bogoliubov(f1)
    A = f1.a_coeff
    ratio = abs((A - b.lam) / (A + b.lam))
    out = {"ratio": ratio, "ratio_ok": ratio <= 1 + 1e-12}
    series = pairing_series(b, tol=tol)
    out["series"] = series
    out["finite"] = series["verdict"] == "convergent"
    if out["finite"]:
        out["series_rel_err"] = abs(series["partial_sum"] - series["closed_form"]) / abs(series["closed_form"])
    try:
        gk = wf.greek_coeffs(b)
    except wf.DegenerateError:
        out["note"] = "betabar = 0: coordinate overlap only as a delta-function limit"
        return out
    q = gk.alpha / (2 * gk.beta) + (gk.alpha_bar / (2 * gk.beta_bar)).conjugate()  # = 1 / gamma^2
    out["coordinate_integrable"] = bool(q.real > 0)
    if q.real > 0:
        closed = math.sqrt(math.pi) * gk.gamma
        # trapezoid on exp(-q x^2): aliasing error ~ exp(-pi^2 Re(1/q) / h^2)
        L = half_width_for(q.real)
        n = _resolved_points(q, L, points)
        if n > MAX_POINTS:
            out["note"] = f"integrand too oscillatory for direct quadrature ({n} points needed)"
            return out
        grid = QuadratureGrid(L, n, "uniform-trapezoid")
        x, w = nodes_weights(grid)
        val = complex(np.sum(w * np.exp(-q * x * x)))
        out["closed_form"] = closed
        out["numeric"] = val
        out["rel_err"] = abs(val - closed) / abs(closed)
    return out
