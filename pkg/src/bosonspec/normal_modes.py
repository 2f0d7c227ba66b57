"""
Normal modes of one-mode quadratic forms.

The form is written as H = lam (bbar^dag b + 1/2) with

    b = u a + v a^dag,    bbar^dag = vbar* a + ubar* a^dag,

u ubar* - v vbar* = 1, and lam = sqrt(A^2 - B+ B-) on the Re(lam) >= 0
branch (Im(lam) >= 0 when Re(lam) = 0).
"""

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .forms import OneModeForm, _branch, normalize_phase

__all__ = [
    "NonDiagonalizableError",
    "Region",
    "REGION_CODES",
    "BogoliubovCoeffs",
    "RegionClass",
    "TransformedForm",
    "lambda_of",
    "bogoliubov",
    "commutator_matrix",
    "transform_form",
    "transform_matrix",
    "classify",
    "classify_arrays",
    "codes_from_ratios",
    "region_one_condition",
]

DEFAULT_TOL = 1e-9


class NonDiagonalizableError(ValueError):
    """Raised when lam = 0 and no normal-mode transformation exists."""


class Region(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    BORDER_I_II = "BorderI_II"
    BORDER_I_III = "BorderI_III"
    NONDIAG_II = "NonDiagII"
    NONDIAG_III = "NonDiagIII"
    CRITICAL_HERMITIAN = "CriticalHermitian"
    ZERO_FORM = "ZeroForm"


# integer codes used by the sweep output
REGION_CODES = {
    Region.ZERO_FORM: 0,
    Region.I: 1,
    Region.II: 2,
    Region.III: 3,
    Region.BORDER_I_II: -1,
    Region.BORDER_I_III: -2,
    Region.NONDIAG_II: -3,
    Region.NONDIAG_III: -4,
    Region.CRITICAL_HERMITIAN: -5,
}
CODE_REGIONS = {code: region for region, code in REGION_CODES.items()}


@dataclass(frozen=True)
class BogoliubovCoeffs:
    u: complex
    v: complex
    u_bar: complex
    v_bar: complex
    lam: complex

    def det(self):
        """u ubar* - v vbar*, equal to one for a valid transformation."""
        return self.u * self.u_bar.conjugate() - self.v * self.v_bar.conjugate()

    def matrix(self):
        """W = [[u, v], [vbar*, ubar*]]."""
        return np.array(
            [[self.u, self.v], [self.v_bar.conjugate(), self.u_bar.conjugate()]],
            dtype=complex,
        )

    def ratios(self):
        return abs(self.v / self.u), abs(self.v_bar / self.u_bar)


@dataclass(frozen=True)
class RegionClass:
    label: Region
    ratios: tuple
    note: str = ""

    @property
    def code(self):
        return REGION_CODES[self.label]

    def to_json(self):
        out = {"label": self.label.value, "code": self.code, "ratios": list(self.ratios)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class TransformedForm:
    a_prime: complex
    b_plus_prime: complex
    b_minus_prime: complex


def lambda_of(form):
    """lam = sqrt(A^2 - B+ B-) on the Re >= 0 (then Im >= 0) branch."""
    A, Bp, Bm = form.as_tuple()
    return _branch(cmath.sqrt(A * A - Bp * Bm))


def _scale(form):
    A, Bp, Bm = form.as_tuple()
    return abs(A) + abs(Bp * Bm) ** 0.5


def bogoliubov(form, tol=DEFAULT_TOL):
    """Generalized Bogoliubov coefficients diagonalizing ``form``.

    Uses u = ubar* = sqrt((A + lam) / 2 lam), v = B+ / (2 lam u) and
    vbar* = B- / (2 lam u), which is the standard choice with the sign
    constraints 2 lam u vbar* = B-, 2 lam ubar* v = B+ built in; the limits
    B+ -> 0 or B- -> 0 come out continuously.
    """
    A, Bp, Bm = form.as_tuple()
    lam = lambda_of(form)
    scale = _scale(form)
    if abs(lam) <= tol * scale or scale == 0:
        raise NonDiagonalizableError(f"lambda = {lam} vanishes; M H is not diagonalizable")
    u = cmath.sqrt((A + lam) / (2 * lam))
    v = Bp / (2 * lam * u)
    v_bar_conj = Bm / (2 * lam * u)
    return BogoliubovCoeffs(u, v, u.conjugate(), v_bar_conj.conjugate(), lam)


def commutator_matrix(form):
    """M H = [[A, B+], [-B-, -A]]; its eigenvalues are +-lam."""
    A, Bp, Bm = form.as_tuple()
    return np.array([[A, Bp], [-Bm, -A]], dtype=complex)


def transform_form(form, coeffs):
    """Coefficients (A', B+', B-') of H in the transformed operators."""
    A, Bp, Bm = form.as_tuple()
    u, v = coeffs.u, coeffs.v
    ubc, vbc = coeffs.u_bar.conjugate(), coeffs.v_bar.conjugate()
    a_prime = A * (u * ubc + v * vbc) - Bp * u * vbc - Bm * ubc * v
    bp_prime = Bp * u * u + Bm * v * v - 2 * A * u * v
    bm_prime = Bm * ubc * ubc + Bp * vbc * vbc - 2 * A * ubc * vbc
    return TransformedForm(a_prime, bp_prime, bm_prime)


def transform_matrix(form, coeffs):
    """H' = M W M H W^-1 as a 2x2 matrix."""
    M = np.diag([1.0, -1.0])
    W = coeffs.matrix()
    return M @ W @ M @ form.matrix() @ np.linalg.inv(W)


def classify(form, tol=DEFAULT_TOL):
    """Spectral region of a one-mode form.

    The ratios |v/u| = |B+| / |A + lam| and |vbar/ubar| = |B-| / |A + lam|
    decide the label: I when both are below one, II when only |vbar/ubar|
    exceeds one, III when only |v/u| does. ``tol`` is relative and sets the
    width of the border bands and of the lam = 0 curve.
    """
    norm, _, _ = normalize_phase(form)
    A, Bp, Bm = norm.as_tuple()
    code, r1, r2 = classify_arrays(A.real, Bp, Bm, tol)
    code, r1, r2 = int(code), float(r1), float(r2)
    note = ""
    region = CODE_REGIONS[code]
    if region in (Region.BORDER_I_II, Region.BORDER_I_III):
        z = (Bp if region is Region.BORDER_I_III else Bm) / (A + lambda_of(norm))
        if abs(z - 1) > tol:
            note = "ratio has unit modulus but is not 1: vacuum series converges only conditionally"
    if code == 99:
        raise RuntimeError(f"both coefficient ratios exceed one: {r1}, {r2}")
    return RegionClass(region, (r1, r2), note)


def codes_from_ratios(r1, r2, tol=DEFAULT_TOL):
    """Region codes from the ratios |v/u| and |vbar/ubar| alone (99: both above one)."""
    r1, r2 = np.broadcast_arrays(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float))
    code = np.full(r1.shape, 99, dtype=int)
    lo1, hi1 = r1 < 1 - tol, r1 > 1 + tol
    lo2, hi2 = r2 < 1 - tol, r2 > 1 + tol
    mid1, mid2 = ~lo1 & ~hi1, ~lo2 & ~hi2
    code[lo1 & lo2] = 1
    code[lo1 & hi2] = 2
    code[hi1 & lo2] = 3
    code[mid2 & lo1] = -1
    code[mid1 & lo2] = -2
    # both ratios at one: the merging point of I, II and III
    code[mid1 & mid2] = -5
    return code


def classify_arrays(A, Bp, Bm, tol=DEFAULT_TOL):
    """Vectorized classifier.

    ``A`` must be real and non-negative (phase-normalized); ``Bp`` and
    ``Bm`` are complex arrays broadcastable against it. Returns the integer
    codes of ``REGION_CODES`` and the two ratios. Code 99 signals the
    (never expected) case where both ratios exceed one.
    """
    A = np.asarray(A, dtype=float)
    Bp = np.asarray(Bp, dtype=complex)
    Bm = np.asarray(Bm, dtype=complex)
    A, Bp, Bm = np.broadcast_arrays(A, Bp, Bm)
    lam = np.sqrt(A * A - Bp * Bm + 0j)
    flip = (lam.real < 0) | ((lam.real == 0) & (lam.imag < 0))
    lam = np.where(flip, -lam, lam)
    aBp, aBm = np.abs(Bp), np.abs(Bm)
    scale = np.abs(A) + np.sqrt(aBp * aBm)
    denom = np.abs(A + lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(denom > 0, aBp / denom, np.inf)
        r2 = np.where(denom > 0, aBm / denom, np.inf)

    code = codes_from_ratios(r1, r2, tol)
    zero_lam = np.abs(lam) <= tol * scale
    diff = aBp - aBm
    dtol = tol * np.maximum(scale, 1e-300)
    code[zero_lam & (diff < -dtol)] = -3
    code[zero_lam & (diff > dtol)] = -4
    code[zero_lam & (np.abs(diff) <= dtol)] = -5
    zero = (np.abs(A) <= tol) & (aBp <= tol) & (aBm <= tol)
    code[zero] = 0
    return code, r1, r2


def region_one_condition(form):
    """Whether H + H^dag is positive definite, i.e. |B+ + B-*| < 2A.

    Applies only when lam is real (B+ B- real and below A^2 after phase
    normalization); raises ValueError otherwise.
    """
    norm, _, _ = normalize_phase(form)
    A, Bp, Bm = norm.as_tuple()
    prod = Bp * Bm
    scale = max(abs(A.real) ** 2, abs(prod), 1e-300)
    if abs(prod.imag) > 1e-12 * scale or prod.real >= A.real**2:
        raise ValueError("region_one_condition applies only when lambda is real and nonzero")
    herm = norm.matrix() + norm.matrix().conj().T
    eig_ok = bool(np.all(np.linalg.eigvalsh(herm) > 0))
    strict = abs(Bp + Bm.conjugate()) < 2 * A.real
    # the eigenvalue test can pass by rounding exactly on the border; the
    # strict inequality settles it
    return eig_ok and strict
