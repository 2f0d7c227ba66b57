"""
Normal modes of N-mode quadratic forms.

With alpha = (a_1..a_N, a_1^dag..a_N^dag) the commutator [H, alpha] equals
-K alpha, where K = M Hmat = [[A, B+], [-B-, -A^T]] and M = diag(1, -1).
K is Hamiltonian for the (non-conjugating) bilinear form with matrix
J = M R, R the block swap, i.e. K^T J = -J K; its spectrum is therefore
symmetric under negation.

Right eigenvectors Z_i (eigenvalue lam_i) and Z_ibar (eigenvalue -lam_i)
are normalized so that Z_i^T R M Z_ibar = 1; eigenvectors of non-opposite
eigenvalues are R M orthogonal automatically. The rows of W follow from

    Z_i    = ( Ubar*_i, -Vbar*_i ),
    Z_ibar = ( V_i,     -U_i     ),

so that b_i = U_i a + V_i a^dag and bbar^dag_i = Vbar*_i a + Ubar*_i a^dag
satisfy [b_i, bbar^dag_j] = delta_ij and H = sum_i lam_i (bbar^dag_i b_i + 1/2).
"""

import cmath
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .forms import MultiModeForm, _branch
from .normal_modes import CODE_REGIONS, codes_from_ratios

__all__ = [
    "NonDiagonalizableError",
    "PairingAmbiguousError",
    "ConstraintError",
    "CommutatorMatrixND",
    "SymplecticW",
    "JordanInfo",
    "VacuumReport",
    "NormalModeDecomposition",
    "commutator_matrix_nd",
    "form_from_commutator",
    "eigen_pairs",
    "build_w",
    "decompose",
    "vacuum_existence",
    "detect_jordan",
    "random_symplectic",
]

DEFAULT_TOL = 1e-9
CLUSTER_TOL = 1e-6  # relative; a size-k Jordan block splits by ~eps^(1/k)


class NonDiagonalizableError(ValueError):
    def __init__(self, msg, jordan_info=None):
        super().__init__(msg)
        self.jordan_info = jordan_info


class PairingAmbiguousError(ValueError):
    pass


class ConstraintError(ValueError):
    def __init__(self, msg, residuals):
        super().__init__(msg)
        self.residuals = residuals


def _enc(M):
    return [[[complex(z).real, complex(z).imag] for z in row] for row in np.atleast_2d(M)]


def _encv(v):
    return [[complex(z).real, complex(z).imag] for z in v]


@dataclass(frozen=True)
class CommutatorMatrixND:
    data: np.ndarray = field(repr=False)

    @property
    def n_modes(self):
        return self.data.shape[0] // 2

    def symmetry_residual(self):
        """Distance between the spectrum and its negation, relative to ||K||."""
        ev = np.linalg.eigvals(self.data)
        scale = max(np.linalg.norm(self.data, 2), 1e-300)
        return _multiset_distance(ev, -ev) / scale


def _multiset_distance(x, y):
    from scipy.optimize import linear_sum_assignment

    cost = np.abs(x[:, None] - y[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()) if len(r) else 0.0


@dataclass(frozen=True)
class SymplecticW:
    U: np.ndarray
    V: np.ndarray
    U_bar: np.ndarray
    V_bar: np.ndarray
    residuals: dict = field(default_factory=dict)

    def matrix(self):
        """W = [[U, V], [Vbar*, Ubar*]]."""
        return np.block([[self.U, self.V], [self.V_bar.conj(), self.U_bar.conj()]])

    def to_json(self):
        return {
            "U": _enc(self.U),
            "V": _enc(self.V),
            "U_bar": _enc(self.U_bar),
            "V_bar": _enc(self.V_bar),
            "residuals": dict(self.residuals),
        }


@dataclass(frozen=True)
class JordanInfo:
    eigenvalues: list  # cluster centers
    algebraic: list
    geometric: list

    @property
    def diagonalizable(self):
        return all(a == g for a, g in zip(self.algebraic, self.geometric))

    def blocks(self):
        """(eigenvalue, algebraic, geometric) for every defective cluster."""
        return [(e, a, g) for e, a, g in zip(self.eigenvalues, self.algebraic, self.geometric) if a != g]

    def max_block_size(self):
        # lower bound on the largest block: a cluster of multiplicity a with
        # g blocks has one of size at least ceil(a / g)
        sizes = [-(-a // max(g, 1)) for a, g in zip(self.algebraic, self.geometric)]
        return max(sizes) if sizes else 0

    def to_json(self):
        return {
            "clusters": [
                {"eigenvalue": [complex(e).real, complex(e).imag], "algebraic": a, "geometric": g}
                for e, a, g in zip(self.eigenvalues, self.algebraic, self.geometric)
            ],
            "diagonalizable": self.diagonalizable,
            "max_block_size": self.max_block_size(),
        }


@dataclass(frozen=True)
class VacuumReport:
    sigma: np.ndarray
    sigma_bar: np.ndarray
    b_vacuum_exists: bool
    bbar_vacuum_exists: bool
    kernel: np.ndarray = field(repr=False, default=None)  # -1/2 U^-1 V
    symmetry_residual: float = 0.0
    note: str = ""

    def to_json(self):
        out = {
            "sigma": [float(s) for s in self.sigma],
            "sigma_bar": [float(s) for s in self.sigma_bar],
            "b_vacuum_exists": self.b_vacuum_exists,
            "bbar_vacuum_exists": self.bbar_vacuum_exists,
            "symmetry_residual": self.symmetry_residual,
        }
        if self.kernel is not None:
            out["kernel"] = _enc(self.kernel)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class NormalModeDecomposition:
    lambdas: np.ndarray
    w: SymplecticW
    diagonalizable: bool
    jordan_info: JordanInfo
    vacuum: VacuumReport
    offdiag_residual: float = 0.0
    mode_regions: tuple = ()

    def to_json(self):
        out = {
            "diagonalizable": self.diagonalizable,
            "jordan_info": self.jordan_info.to_json(),
        }
        if self.diagonalizable:
            out.update(
                lambdas=_encv(self.lambdas),
                W=self.w.to_json(),
                offdiag_residual=self.offdiag_residual,
                vacuum=self.vacuum.to_json(),
                mode_regions=list(self.mode_regions),
            )
        return out


_J_CACHE = {}


def _rm(n):
    """R M = [[0, -1], [1, 0]] in N x N blocks."""
    if n not in _J_CACHE:
        I, Z = np.eye(n), np.zeros((n, n))
        _J_CACHE[n] = np.block([[Z, -I], [I, Z]])
    return _J_CACHE[n]


def commutator_matrix_nd(form):
    A, Bp, Bm = form.a_matrix, form.b_plus_matrix, form.b_minus_matrix
    return CommutatorMatrixND(np.block([[A, Bp], [-Bm, -A.T]]))


def form_from_commutator(K):
    """Inverse of ``commutator_matrix_nd`` for a Hamiltonian matrix K."""
    K = np.asarray(K, dtype=complex)
    n = K.shape[0] // 2
    return MultiModeForm(K[:n, :n], K[:n, n:], -K[n:, :n])


def random_symplectic(n, rng, scale=0.3):
    """exp(K) for a random Hamiltonian K; preserves the R M bilinear form."""
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B1 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    B2 = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    K = np.block([[A, B1 + B1.T], [-(B2 + B2.T), -A.T]])
    return sla.expm(scale * K / np.linalg.norm(K, 2))


def _clusters(ev, tol):
    """Group eigenvalues closer than tol (single linkage)."""
    order = np.lexsort((ev.imag, ev.real))
    groups = []
    for i in order:
        for g in groups:
            if np.min(np.abs(ev[g] - ev[i])) <= tol:
                g.append(i)
                break
        else:
            groups.append([i])
    # single-pass linkage can split a chain; merge until stable
    merged = True
    while merged:
        merged = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                if np.min(np.abs(ev[groups[a]][:, None] - ev[groups[b]][None, :])) <= tol:
                    groups[a] += groups.pop(b)
                    merged = True
                    break
            if merged:
                break
    return [np.array(sorted(g)) for g in groups]


def _scale(K):
    return max(np.linalg.norm(K, 2), 1e-300)


def detect_jordan(m, tol=DEFAULT_TOL, cluster_tol=CLUSTER_TOL):
    """Algebraic vs geometric multiplicity of every eigenvalue cluster of K.

    The geometric multiplicity is the number of singular values of
    K - mu 1 below max(tol ||K||, 10 r), with mu the cluster mean and r its
    radius; zero eigenvalues are treated like any other, so a diagonalizable
    K with vanishing eigenvalues is reported as such.
    """
    K = m.data if isinstance(m, CommutatorMatrixND) else np.asarray(m, dtype=complex)
    ev = np.linalg.eigvals(K)
    scale = _scale(K)
    centers, alg, geo = [], [], []
    for g in _clusters(ev, cluster_tol * scale):
        mu = ev[g].mean()
        radius = float(np.max(np.abs(ev[g] - mu)))
        s = np.linalg.svd(K - mu * np.eye(K.shape[0]), compute_uv=False)
        thresh = max(tol * scale, 10 * radius)
        centers.append(complex(mu))
        alg.append(len(g))
        geo.append(int(np.sum(s <= thresh)))
    return JordanInfo(centers, alg, [min(a, g) for a, g in zip(alg, geo)])


def _positive(z):
    return z.real > 0 or (z.real == 0 and z.imag > 0)


def _split_zero(Zs, n):
    """Split a basis of the zero eigenspace into R M dual halves (symplectic Gram-Schmidt)."""
    RM = _rm(n)
    vecs = [Zs[:, k] for k in range(Zs.shape[1])]
    left, right = [], []
    while vecs:
        x = vecs.pop(0)
        prods = [x @ RM @ y for y in vecs]
        if not prods:
            raise PairingAmbiguousError("zero eigenspace has odd dimension")
        j = int(np.argmax(np.abs(prods)))
        if abs(prods[j]) < 1e-12:
            raise PairingAmbiguousError("zero eigenspace is degenerate for the commutator form")
        y = vecs.pop(j) / prods[j]
        # remove components along the new pair from the remaining vectors
        rest = []
        for v in vecs:
            v = v - (v @ RM @ y) * x + (v @ RM @ x) * y
            rest.append(v)
        vecs = rest
        left.append(x)
        right.append(y)
    return np.array(left).T, np.array(right).T


def eigen_pairs(m, tol=DEFAULT_TOL, cluster_tol=CLUSTER_TOL):
    """Pairs (lam_i, Z_i, Z_ibar) with Z_i^T R M Z_ibar = 1.

    Clusters of equal eigenvalues are normalized as a block: with
    G = Z^T R M Zbar over the cluster, Zbar is replaced by Zbar G^-1.
    """
    K = m.data
    n = m.n_modes
    info = detect_jordan(m, tol, cluster_tol)
    if not info.diagonalizable:
        raise NonDiagonalizableError("commutator matrix has a nontrivial Jordan block", info)
    ev, Z = sla.eig(K)
    scale = _scale(K)
    groups = _clusters(ev, cluster_tol * scale)
    centers = [ev[g].mean() for g in groups]
    RM = _rm(n)
    used = set()
    out = []
    for gi, g in enumerate(groups):
        if gi in used:
            continue
        mu = centers[gi]
        if abs(mu) <= cluster_tol * scale:
            used.add(gi)
            Zl, Zr = _split_zero(Z[:, g], n)
            out += [(0j, Zl[:, k], Zr[:, k]) for k in range(Zl.shape[1])]
            continue
        dist = [abs(c + mu) if j not in used and j != gi else np.inf for j, c in enumerate(centers)]
        gj = int(np.argmin(dist))
        if dist[gj] > cluster_tol * scale or len(groups[gj]) != len(g):
            raise PairingAmbiguousError(f"no partner cluster of matching size for eigenvalue {mu}")
        used |= {gi, gj}
        if not _positive(complex(mu)):
            g, gj_idx = groups[gj], g
        else:
            gj_idx = groups[gj]
        Zp, Zm = Z[:, g], Z[:, gj_idx]
        G = Zp.T @ RM @ Zm
        Zm = Zm @ np.linalg.inv(G)
        lam = _branch(complex(np.mean(ev[g])))
        out += [(lam, Zp[:, k], Zm[:, k]) for k in range(len(g))]
    out.sort(key=lambda p: (round(p[0].real, 12), round(p[0].imag, 12)))
    # cross-pair check of the R M orthogonality
    Zp = np.array([p[1] for p in out]).T
    Zm = np.array([p[2] for p in out]).T
    resid = float(np.max(np.abs(Zp.T @ RM @ Zm - np.eye(len(out)))))
    if resid > 1e-6:
        raise PairingAmbiguousError(f"pairing matrix deviates from identity by {resid:.3g}")
    return [_balance(lam, zp, zm, n) for lam, zp, zm in out]


def _balance(lam, zp, zm, n):
    """Fix the pair rescaling Z -> c Z, Zbar -> Zbar / c.

    c^2 is chosen so that U_i . Ubar*_i = Ubar*_i . Ubar*_i (non-conjugated
    dot products), which in one mode is u = ubar*; the sign of c puts the
    largest entry of U_i in the right half plane (ties: upper half).
    """
    ubc, v = zp[:n], zm[:n]  # Ubar*_i and V_i
    u = -zm[n:]
    num, den = u @ ubc, ubc @ ubc
    if abs(den) > 1e-14 * max(np.linalg.norm(ubc) ** 2, 1e-300) and num != 0:
        c = cmath.sqrt(num / den)
    else:
        c = cmath.sqrt(np.linalg.norm(u) / max(np.linalg.norm(ubc), 1e-300))
    zp, zm = c * zp, zm / c
    u = -zm[n:]
    k = int(np.argmax(np.abs(u)))
    if _branch(complex(u[k])) != complex(u[k]):
        zp, zm = -zp, -zm
    return lam, zp, zm


def build_w(pairs, tol=1e-8):
    """Assemble W from the normalized pairs and verify the constraints."""
    n = len(pairs)
    Zp = np.array([p[1] for p in pairs]).T
    Zm = np.array([p[2] for p in pairs]).T
    # row i of each block comes from pair i
    U_bar_conj = Zp[:n].T
    V_bar_conj = -Zp[n:].T
    V = Zm[:n].T
    U = -Zm[n:].T
    w = SymplecticW(U, V, U_bar_conj.conj(), V_bar_conj.conj())
    res = w_residuals(w)
    w = SymplecticW(w.U, w.V, w.U_bar, w.V_bar, res)
    if max(res.values()) > tol:
        raise ConstraintError("W violates the commutation constraints", res)
    return w


def w_residuals(w):
    n = w.U.shape[0]
    I = np.eye(n)
    M = np.diag(np.r_[np.ones(n), -np.ones(n)])
    R = np.block([[np.zeros((n, n)), I], [I, np.zeros((n, n))]])
    W = w.matrix()
    Ubc, Vbc = w.U_bar.conj(), w.V_bar.conj()
    return {
        "WMRWtR": float(np.max(np.abs(W @ M @ R @ W.T @ R - M))),
        "U_Ubar_dag": float(np.max(np.abs(w.U @ Ubc.T - w.V @ Vbc.T - I))),
        "VUt_sym": float(np.max(np.abs(w.V @ w.U.T - w.U @ w.V.T))),
        "VbarUbart_sym": float(np.max(np.abs(w.V_bar @ w.U_bar.T - w.U_bar @ w.V_bar.T))),
    }


def vacuum_existence(w, tol=DEFAULT_TOL):
    """Singular values of U^-1 V and Ubar^-1 Vbar; a vacuum exists iff all are < 1."""
    n = w.U.shape[0]
    try:
        cond = max(np.linalg.cond(w.U), np.linalg.cond(w.U_bar))
        if not np.isfinite(cond) or cond > 1 / tol:
            raise np.linalg.LinAlgError
        X = np.linalg.solve(w.U, w.V)
        Xb = np.linalg.solve(w.U_bar, w.V_bar)
    except np.linalg.LinAlgError:
        nan = np.full(n, np.nan)
        return VacuumReport(nan, nan, False, False, None, np.nan, "U or Ubar is singular: no Gaussian vacuum")
    s = np.linalg.svd(X, compute_uv=False)
    sb = np.linalg.svd(Xb, compute_uv=False)
    sym = float(max(np.max(np.abs(X - X.T)), np.max(np.abs(Xb - Xb.T))))
    return VacuumReport(s, sb, bool(np.all(s < 1 - tol)), bool(np.all(sb < 1 - tol)), -0.5 * X, sym)


def _mode_regions(w):
    """Per-mode labels from |(V U^-1)_ii| and |(Vbar Ubar^-1)_ii| (meaningful for decoupled modes).

    Rows of W are normal modes, so the right inverse keeps the labels in
    the order of ``lambdas``.
    """
    try:
        r1 = np.abs(np.diag(np.linalg.solve(w.U.T, w.V.T)))
        r2 = np.abs(np.diag(np.linalg.solve(w.U_bar.T, w.V_bar.T)))
    except np.linalg.LinAlgError:
        return ()
    codes = codes_from_ratios(r1, r2)
    return tuple(CODE_REGIONS[int(c)].value if int(c) in CODE_REGIONS else "undetermined" for c in codes)


def decompose(form, tol=DEFAULT_TOL):
    """Full normal-mode pipeline for a ``MultiModeForm``."""
    m = commutator_matrix_nd(form)
    info = detect_jordan(m, tol)
    n = form.n_modes
    if not info.diagonalizable:
        return NormalModeDecomposition(np.array([]), None, False, info, None)
    w = build_w(eigen_pairs(m, tol))
    pairs_lam = np.array([p for p in _lambdas(m, w)])
    W = w.matrix()
    M = np.diag(np.r_[np.ones(n), -np.ones(n)])
    Hmat = form.hamiltonian_matrix()
    Hp = M @ W @ M @ Hmat @ np.linalg.inv(W)
    off = Hp - np.diag(np.diag(Hp))
    offres = float(np.max(np.abs(off)) / max(np.max(np.abs(Hmat)), 1e-300))
    return NormalModeDecomposition(
        pairs_lam, w, True, info, vacuum_existence(w, tol), offres, _mode_regions(w)
    )


def _lambdas(m, w):
    # lam_i from the transformed commutator matrix, diag(lam, -lam)
    W = w.matrix()
    D = W @ m.data @ np.linalg.inv(W)
    n = m.n_modes
    return [_branch(complex(z)) for z in np.diag(D)[:n]]
