"""
Quadratic bosonic forms in boson-operator and coordinate representation.

A one-mode form is

    H = A (a^dag a + 1/2) + (B+ a^dag^2 + B- a^2) / 2

and its N-mode generalization is described by an N x N matrix A and two
symmetric N x N matrices B+, B-.
"""

import cmath
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OneModeForm",
    "CoordinateForm",
    "MultiModeForm",
    "normalize_phase",
    "to_coordinate",
    "from_coordinate",
    "embed_one_mode",
    "lambda_from_coordinate",
]

SYMMETRY_WARN_TOL = 1e-10


@dataclass(frozen=True)
class OneModeForm:
    """Coefficients (A, B+, B-) of a one-mode quadratic form."""

    a_coeff: complex
    b_plus: complex
    b_minus: complex

    def __post_init__(self):
        object.__setattr__(self, "a_coeff", complex(self.a_coeff))
        object.__setattr__(self, "b_plus", complex(self.b_plus))
        object.__setattr__(self, "b_minus", complex(self.b_minus))

    def as_tuple(self):
        return self.a_coeff, self.b_plus, self.b_minus

    def matrix(self):
        """The 2x2 matrix [[A, B+], [B-, A]] of the symmetric-ordered form."""
        A, Bp, Bm = self.as_tuple()
        return np.array([[A, Bp], [Bm, A]], dtype=complex)

    def is_hermitian(self, tol=1e-12):
        A, Bp, Bm = self.as_tuple()
        return abs(A.imag) <= tol and abs(Bp - Bm.conjugate()) <= tol

    def to_json(self):
        return {
            "A": [self.a_coeff.real, self.a_coeff.imag],
            "Bp": [self.b_plus.real, self.b_plus.imag],
            "Bm": [self.b_minus.real, self.b_minus.imag],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(*(_pair(obj[key]) for key in ("A", "Bp", "Bm")))
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed one-mode form: {exc!r}") from exc


@dataclass(frozen=True)
class CoordinateForm:
    """H = [A~- P^2 + A~+ Q^2 + B~ (QP + PQ)] / 2."""

    a_tilde_plus: complex
    a_tilde_minus: complex
    b_tilde: complex

    def __post_init__(self):
        object.__setattr__(self, "a_tilde_plus", complex(self.a_tilde_plus))
        object.__setattr__(self, "a_tilde_minus", complex(self.a_tilde_minus))
        object.__setattr__(self, "b_tilde", complex(self.b_tilde))

    def as_tuple(self):
        return self.a_tilde_plus, self.a_tilde_minus, self.b_tilde


@dataclass(frozen=True, eq=False)
class MultiModeForm:
    """N-mode form with matrices A (N x N) and symmetric B+, B-.

    The B matrices are symmetrized on construction; only their symmetric
    part enters the operator.
    """

    a_matrix: np.ndarray
    b_plus_matrix: np.ndarray
    b_minus_matrix: np.ndarray

    def __post_init__(self):
        A = np.array(self.a_matrix, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
            raise ValueError(f"A must be a non-empty square matrix, got shape {A.shape}")
        n = A.shape[0]
        mats = [A]
        for name, B in (("B+", self.b_plus_matrix), ("B-", self.b_minus_matrix)):
            B = np.array(B, dtype=complex)
            if B.shape != (n, n):
                raise ValueError(f"{name} must have shape {(n, n)}, got {B.shape}")
            asym = np.max(np.abs(B - B.T)) if n > 1 else 0.0
            if asym > SYMMETRY_WARN_TOL:
                warnings.warn(f"{name} is not symmetric (max asymmetry {asym:.3g}); using (B + B^T)/2")
            mats.append((B + B.T) / 2)
        for name, M in zip(("a_matrix", "b_plus_matrix", "b_minus_matrix"), mats):
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @property
    def n_modes(self):
        return self.a_matrix.shape[0]

    def hamiltonian_matrix(self):
        """Block matrix [[A, B+], [B-, A^T]]."""
        A, Bp, Bm = self.a_matrix, self.b_plus_matrix, self.b_minus_matrix
        return np.block([[A, Bp], [Bm, A.T]])

    def to_json(self):
        def enc(M):
            return [[[z.real, z.imag] for z in row] for row in M]

        return {
            "N": self.n_modes,
            "A": enc(self.a_matrix),
            "Bp": enc(self.b_plus_matrix),
            "Bm": enc(self.b_minus_matrix),
        }

    @classmethod
    def from_json(cls, obj):
        try:
            n = int(obj["N"])
            mats = []
            for key in ("A", "Bp", "Bm"):
                rows = obj[key]
                M = np.array([[_pair(e) for e in row] for row in rows], dtype=complex)
                if M.shape != (n, n):
                    raise ValueError(f"{key} has shape {M.shape}, expected {(n, n)}")
                mats.append(M)
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed multimode form: {exc!r}") from exc
        return cls(*mats)


def _pair(entry):
    if isinstance(entry, (int, float)):
        return complex(entry)
    re, im = entry
    return complex(float(re), float(im))


def _unit(z):
    return z / abs(z) if z != 0 else 1.0 + 0j


def normalize_phase(form):
    """Bring a form to A >= 0 with B+ and B- sharing a common phase.

    Returns ``(normalized, global_phase, mode_phase)``. The input is
    recovered as ``global_phase`` times the normalized form after undoing
    the mode rotation, i.e.

        A  = g A',   B+ = g m^2 B+',   B- = g m^-2 B-'.

    When A = 0 the global phase is taken from arg(B+ B-)/2.
    """
    A, Bp, Bm = form.as_tuple()
    if A != 0:
        g = _unit(A)
    elif Bp * Bm != 0:
        g = cmath.exp(0.5j * cmath.phase(Bp * Bm))
    else:
        g = 1.0 + 0j
    A1, Bp1, Bm1 = A / g, Bp / g, Bm / g
    A1 = complex(abs(A1), 0.0)
    if Bp1 != 0 and Bm1 != 0:
        phi = (cmath.phase(Bp1) - cmath.phase(Bm1)) / 4
        m = cmath.exp(1j * phi)
    else:
        m = 1.0 + 0j
    Bp2 = Bp1 / (m * m)
    Bm2 = Bm1 * (m * m)
    return OneModeForm(A1, Bp2, Bm2), g, m


def to_coordinate(form):
    A, Bp, Bm = form.as_tuple()
    return CoordinateForm(A + (Bp + Bm) / 2, A - (Bp + Bm) / 2, (Bp - Bm) / 2j)


def from_coordinate(cform):
    Ap, Am, Bt = cform.as_tuple()
    A = (Ap + Am) / 2
    s = (Ap - Am) / 2  # (B+ + B-)/2
    d = 1j * Bt  # (B+ - B-)/2
    return OneModeForm(A, s + d, s - d)


def lambda_from_coordinate(cform):
    """Normal-mode eigenvalue from coordinate coefficients, Re >= 0 branch."""
    Ap, Am, Bt = cform.as_tuple()
    return _branch(cmath.sqrt(Ap * Am - Bt * Bt))


def _branch(lam):
    if lam.real < 0 or (lam.real == 0 and lam.imag < 0):
        return -lam
    return lam


def embed_one_mode(form):
    A, Bp, Bm = form.as_tuple()
    return MultiModeForm([[A]], [[Bp]], [[Bm]])
