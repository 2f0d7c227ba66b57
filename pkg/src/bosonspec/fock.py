"""
Truncated Fock-space oracle.

The one-mode form is represented on |0>, ..., |N_c> with

    <n|H|n>     = A (n + 1/2)
    <n+2|H|n>   = (B+/2) sqrt((n+1)(n+2))
    <n|H|n+2>   = (B-/2) sqrt((n+1)(n+2))

and diagonalized densely. H only couples n to n +- 2, so the even and odd
sectors are solved separately. For N modes the symmetric-ordered form
(1/2) (a^dag a) H (a a^dag)^T is assembled from Kronecker products, which
includes the zero-point term Tr(A)/2.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.special import gammaln

from .normal_modes import bogoliubov, classify, lambda_of

__all__ = [
    "FockMatrix",
    "VacuumSeries",
    "EigenSolveError",
    "build_matrix",
    "eigen_truncated",
    "vacuum_series",
    "pairing_series",
    "series_verdict",
    "compare_spectrum",
    "build_matrix_nd",
    "eigen_truncated_nd",
    "annihilators",
]

MAX_CUTOFF = 2000


class EigenSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class FockMatrix:
    cutoff: int
    data: np.ndarray = field(repr=False)

    def to_csv(self):
        """Rows of ``i,j,re,im`` for the nonzero entries."""
        lines = ["i,j,re,im"]
        for i, j in zip(*np.nonzero(self.data)):
            z = complex(self.data[i, j])
            lines.append(f"{i},{j},{z.real!r},{z.imag!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VacuumSeries:
    which: str
    coefficients: np.ndarray = field(repr=False)
    z: complex  # squared-ratio argument (2r)^2, the limit of (c_{n+1}/c_n)^2
    ratio_trend: float  # |c_{n+1}/c_n|^2 at the last computed n, tends to |z|
    verdict: str  # "convergent" | "conditional" | "divergent"

    def to_json(self):
        return {
            "which": self.which,
            "z": [self.z.real, self.z.imag],
            "ratio_trend": self.ratio_trend,
            "verdict": self.verdict,
        }


def series_verdict(z, tol=1e-9):
    """Convergence of sum_n (z/4)^n (2n)!/(n!)^2.

    Absolutely convergent for |z| < 1, conditionally for |z| = 1 with
    z != 1, divergent otherwise.
    """
    az = abs(z)
    if az < 1 - tol:
        return "convergent"
    if az <= 1 + tol and abs(z - 1) > tol:
        return "conditional"
    return "divergent"


def build_matrix(form, cutoff):
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    A, Bp, Bm = form.as_tuple()
    n = np.arange(cutoff + 1)
    H = np.diag(A * (n + 0.5)).astype(complex)
    off = np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0))
    H[n[:-2] + 2, n[:-2]] = Bp / 2 * off
    H[n[:-2], n[:-2] + 2] = Bm / 2 * off
    return FockMatrix(cutoff, H)


def _sorted(ev):
    ev = np.asarray(ev, dtype=complex)
    return ev[np.lexsort((ev.imag, ev.real))]


def eigen_truncated(form, cutoff):
    """All eigenvalues of the truncated matrix, sorted by real then imaginary part."""
    if cutoff > MAX_CUTOFF:
        raise ValueError(f"cutoff above {MAX_CUTOFF} is outside the dense-solver range")
    H = build_matrix(form, cutoff).data
    parts = []
    for start in (0, 1):
        idx = np.arange(start, cutoff + 1, 2)
        try:
            parts.append(sla.eigvals(H[np.ix_(idx, idx)]))
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise EigenSolveError(str(exc)) from exc
    ev = np.concatenate(parts)
    if not np.all(np.isfinite(ev)):
        raise EigenSolveError("eigensolver returned non-finite values")
    return _sorted(ev)


_SERIES_BASE = {
    "b": lambda c: -c.v / (2 * c.u),
    "b_bar": lambda c: -c.v_bar / (2 * c.u_bar),
    "b_dagger_bar": lambda c: -c.u_bar.conjugate() / (2 * c.v_bar.conjugate()),
}


def vacuum_series(which, coeffs, n_max=200, tol=1e-9):
    """Coefficients c_n = r^n sqrt((2n)!) / n! of a vacuum on |2n_a>.

    r is -v/2u for b, -vbar/2ubar for bbar and -ubar*/2vbar* for bbar^dag.
    With z = (2r)^2 the expansion is governed by sum (z/4)^n (2n)!/(n!)^2,
    whose verdict is returned; the norm sum |c_n|^2 converges iff |z| < 1.
    """
    if which not in _SERIES_BASE:
        raise ValueError(f"which must be one of {tuple(_SERIES_BASE)}")
    try:
        r = complex(_SERIES_BASE[which](coeffs))
    except ZeroDivisionError as exc:
        raise ZeroDivisionError(f"{which} vacuum series has a vanishing denominator") from exc
    n = np.arange(n_max + 1)
    logmag = np.full(n.shape, -np.inf)
    if r != 0:
        logmag = n * math.log(abs(r)) + 0.5 * gammaln(2 * n + 1) - gammaln(n + 1)
    else:
        logmag[0] = 0.0
    phase = np.exp(1j * n * np.angle(r)) if r != 0 else (n == 0).astype(complex)
    with np.errstate(over="ignore"):
        c = np.exp(logmag) * phase
    z = 4 * r * r
    if n_max >= 1 and np.isfinite(logmag[-1]):
        trend = float(np.exp(2 * (logmag[-1] - logmag[-2])))
    else:
        trend = 0.0
    return VacuumSeries(which, c, z, trend, series_verdict(z, tol))


def pairing_series(coeffs, n_terms=4000, tol=1e-9):
    """<0_bbar|0_b> as sum_n conj(cbar_n) c_n with unnormalized vacua.

    The terms are (w/4)^n (2n)! / (n!)^2 with w = conj(vbar/ubar) (v/u); the
    sum is 1/sqrt(1 - w) for |w| < 1, converges only conditionally on
    |w| = 1 with w != 1, and diverges otherwise.
    """
    w = (coeffs.v_bar / coeffs.u_bar).conjugate() * (coeffs.v / coeffs.u)
    verdict = series_verdict(w, tol)
    out = {"w": w, "verdict": verdict}
    if verdict == "convergent":
        n = np.arange(n_terms)
        # central binomial coefficients / 4^n, built by their ratio recurrence
        t = np.ones(n_terms, dtype=complex)
        t[1:] = np.cumprod((2 * n[1:] - 1) / (2 * n[1:]) * w)
        out["partial_sum"] = complex(np.sum(t))
        out["closed_form"] = 1 / np.sqrt(1 - w)
    return out


def _match(targets, ev):
    """Nearest eigenvalue (complex distance) for each target."""
    idx = [int(np.argmin(np.abs(ev - t))) for t in targets]
    return ev[idx]


def compare_spectrum(form, cutoff=300, k=5, stability_tol=1e-8):
    """Match the truncated spectrum against the ladder lam (n + 1/2).

    Each analytic level is paired with the nearest truncated eigenvalue; the
    match is then repeated at twice the cutoff and the drift of every matched
    eigenvalue is reported. Outside region I the truncated spectrum does not
    converge and the instability flag is the expected diagnostic.
    """
    A = form.a_coeff
    g = A / abs(A) if A != 0 else 1.0 + 0j
    lam = g * lambda_of(type(form)(A / g, form.b_plus / g, form.b_minus / g))
    targets = lam * (np.arange(k) + 0.5)
    first = _match(targets, eigen_truncated(form, cutoff))
    second = _match(first, eigen_truncated(form, 2 * cutoff))
    dev = np.abs(first - targets)
    drift = np.abs(second - first)
    return {
        "region": classify(form).label.value,
        "lambda": lam,
        "targets": targets,
        "matched": first,
        "max_deviation": float(dev.max()),
        "drift": drift,
        "max_drift": float(drift.max()),
        "unstable": bool(drift.max() > stability_tol),
        "cutoff": cutoff,
    }


def annihilators(n_modes, cutoff):
    """Truncated a_i for each mode on the product space (cutoff+1)^N."""
    d = cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)
    eye = np.eye(d)
    ops = []
    for i in range(n_modes):
        mats = [a if j == i else eye for j in range(n_modes)]
        op = mats[0]
        for m in mats[1:]:
            op = np.kron(op, m)
        ops.append(op)
    return ops


def build_matrix_nd(form, cutoff):
    """Truncated Fock matrix of the N-mode form including Tr(A)/2."""
    A, Bp, Bm = form.a_matrix, form.b_plus_matrix, form.b_minus_matrix
    a = annihilators(form.n_modes, cutoff)
    ad = [op.T for op in a]
    dim = a[0].shape[0]
    H = 0.5 * np.trace(A) * np.eye(dim, dtype=complex)
    N = form.n_modes
    for i in range(N):
        for j in range(N):
            H = H + A[i, j] * (ad[i] @ a[j])
            H = H + 0.5 * Bp[i, j] * (ad[i] @ ad[j]) + 0.5 * Bm[i, j] * (a[i] @ a[j])
    return H


def eigen_truncated_nd(form, cutoff):
    """Eigenvalues of the N-mode truncated matrix, sorted like ``eigen_truncated``.

    Total boson-number parity is conserved, so the two parity sectors are
    solved separately; a Hermitian input uses the Hermitian solver.
    """
    H = build_matrix_nd(form, cutoff)
    occ = np.indices((cutoff + 1,) * form.n_modes).reshape(form.n_modes, -1).sum(axis=0)
    hermitian = np.allclose(H, H.conj().T, atol=1e-14, rtol=0)
    parts = []
    for p in (0, 1):
        idx = np.flatnonzero(occ % 2 == p)
        block = H[np.ix_(idx, idx)]
        parts.append(sla.eigvalsh(block) if hermitian else sla.eigvals(block))
    return _sorted(np.concatenate(parts))


def ladder_levels(lams, count, n_max=None):
    """The ``count`` sums sum_i lam_i (n_i + 1/2) closest to the bottom of the ladder."""
    lams = np.asarray(lams, dtype=complex)
    n_max = count if n_max is None else n_max
    grids = np.indices((n_max + 1,) * lams.size).reshape(lams.size, -1)
    vals = (lams[:, None] * (grids + 0.5)).sum(axis=0)
    order = np.argsort(np.abs(vals - 0.5 * lams.sum()), kind="stable")
    return vals[order][:count]


def coeffs_for(form):
    """Bogoliubov coefficients after removing the global phase of A."""
    A = form.a_coeff
    g = A / abs(A) if A != 0 else 1.0 + 0j
    return bogoliubov(type(form)(A / g, form.b_plus / g, form.b_minus / g))


def gaussian_state_nd(X, cutoff, tol=1e-18, max_terms=500):
    """exp(-1/2 sum_ij X_ij a_i^dag a_j^dag)|0> on the truncated product space."""
    X = np.asarray(X, dtype=complex)
    a = annihilators(X.shape[0], cutoff)
    G = -0.5 * sum(X[i, j] * (a[i].T @ a[j].T) for i in range(len(a)) for j in range(len(a)))
    term = np.zeros(a[0].shape[0], dtype=complex)
    term[0] = 1.0
    psi = term.copy()
    for k in range(1, max_terms):
        term = G @ term / k
        psi += term
        if np.linalg.norm(term) < tol * np.linalg.norm(psi):
            break
    return psi


def biorthogonal_gram_nd(w, cutoff, max_total=3):
    """<m_bbar|n_b> for all occupations with |n| <= max_total, divided by <0_bbar|0_b>.

    |n_b> = prod_i (bbar_i^dag)^{n_i} / sqrt(n_i!) |0_b> and
    |m_bbar> = prod_i (b_i^dag)^{m_i} / sqrt(m_i!) |0_bbar>, both built in the
    truncated number basis from the blocks of ``w`` (a ``SymplecticW``).
    Returns the Gram matrix and the list of occupation tuples.
    """
    n = w.U.shape[0]
    a = annihilators(n, cutoff)
    ad = [op.T for op in a]
    Ubc, Vbc = w.U_bar.conj(), w.V_bar.conj()
    bbar_dag = [sum(Vbc[i, j] * a[j] + Ubc[i, j] * ad[j] for j in range(n)) for i in range(n)]
    b_dag = [sum(w.U[i, j].conjugate() * ad[j] + w.V[i, j].conjugate() * a[j] for j in range(n)) for i in range(n)]
    vac_b = gaussian_state_nd(np.linalg.solve(w.U, w.V), cutoff)
    vac_bbar = gaussian_state_nd(np.linalg.solve(w.U_bar, w.V_bar), cutoff)
    occs = [o for o in np.ndindex(*(max_total + 1,) * n) if sum(o) <= max_total]

    def excite(ops, vac, occ):
        psi = vac
        for i, k in enumerate(occ):
            for _ in range(k):
                psi = ops[i] @ psi
            psi = psi / math.sqrt(math.factorial(k))
        return psi

    kets = np.array([excite(bbar_dag, vac_b, o) for o in occs])
    bras = np.array([excite(b_dag, vac_bbar, o) for o in occs])
    G = bras.conj() @ kets.T
    return G / G[0, 0], occs
