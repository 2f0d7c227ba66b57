"""
Region maps over parameter planes.

Two planes are supported, both at fixed real A > 0:

* ``real``: B+ and B- real, each on [lo, hi];
* ``modulus``: B+- = |B+-| e^{i theta} with the moduli on [lo, hi].

Each grid point gets the integer region code of ``classify_arrays``. A
cell (the box of one grid spacing around a point) crossed by the curve
lam = 0 is flagged with the corresponding non-diagonalizable code even when
the grid point itself misses the curve.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from .normal_modes import REGION_CODES, Region, classify_arrays

__all__ = ["SweepConfig", "SweepResult", "run_sweep", "default_workers", "refine_boundary", "VALID_CODES"]

VALID_CODES = frozenset(REGION_CODES.values())
PLANES = ("real", "modulus")


@dataclass(frozen=True)
class SweepConfig:
    plane: str = "real"
    A: float = 1.0
    lo: float = -4.0
    hi: float = 4.0
    grid: int = 201
    theta: float = 0.0
    tol: float = 1e-9

    def __post_init__(self):
        if self.plane not in PLANES:
            raise ValueError(f"plane must be one of {PLANES}")
        if self.grid < 2:
            raise ValueError("grid resolution must be >= 2 per axis")
        vals = (self.A, self.lo, self.hi, self.theta, self.tol)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("sweep parameters must be finite")
        if not self.hi > self.lo:
            raise ValueError("need hi > lo")
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.plane == "modulus" and self.lo < 0:
            raise ValueError("moduli must be non-negative")

    @property
    def step(self):
        return (self.hi - self.lo) / (self.grid - 1)

    def axis(self):
        return np.linspace(self.lo, self.hi, self.grid)

    def to_complex(self, p, q):
        """Map plane coordinates to (B+, B-)."""
        if self.plane == "real":
            return np.asarray(p, dtype=complex), np.asarray(q, dtype=complex)
        ph = np.exp(1j * self.theta)
        return p * ph, q * ph

    def to_json(self):
        return asdict(self)


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    bp: np.ndarray  # plane coordinate along B+ (value or modulus)
    bm: np.ndarray
    code: np.ndarray
    lam: np.ndarray

    def rows(self):
        for p, q, c, l in zip(self.bp.ravel(), self.bm.ravel(), self.code.ravel(), self.lam.ravel()):
            yield float(p), float(q), int(c), complex(l)

    def to_csv(self):
        lines = ["bp,bm,code,lambda_re,lambda_im"]
        lines += [f"{p!r},{q!r},{c},{l.real!r},{l.imag!r}" for p, q, c, l in self.rows()]
        return "\n".join(lines) + "\n"


def default_workers():
    env = os.environ.get("BOSONSPEC_WORKERS")
    if env:
        return max(1, int(env))
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # not on every platform
        return os.cpu_count() or 1


def _lam(A, Bp, Bm):
    lam = np.sqrt(A * A - Bp * Bm + 0j)
    flip = (lam.real < 0) | ((lam.real == 0) & (lam.imag < 0))
    return np.where(flip, -lam, lam)


def _rows(cfg, row_slice):
    ax = cfg.axis()
    q = ax[row_slice]
    P, Q = np.meshgrid(ax, q)  # rows: fixed B-, columns: B+
    Bp, Bm = cfg.to_complex(P, Q)
    code, _, _ = classify_arrays(np.full(P.shape, float(cfg.A)), Bp, Bm, cfg.tol)
    lam = _lam(cfg.A, Bp, Bm)

    # cells crossed by lam^2 = 0: lam^2 is bilinear in (p, q), so its extreme
    # values over the cell sit at the corners
    h = cfg.step / 2
    corners = []
    for dp in (-h, h):
        for dq in (-h, h):
            cp, cm = cfg.to_complex(P + dp, Q + dq)
            corners.append(cfg.A**2 - cp * cm)
    corners = np.array(corners)
    scale = cfg.A**2 + np.max(np.abs(corners), axis=0)
    real_curve = np.all(np.abs(corners.imag) <= cfg.tol * scale, axis=0)
    crossed = real_curve & (corners.real.min(axis=0) <= 0) & (corners.real.max(axis=0) >= 0)
    diag_codes = np.isin(code, [REGION_CODES[r] for r in (Region.NONDIAG_II, Region.NONDIAG_III, Region.CRITICAL_HERMITIAN)])
    flag = crossed & ~diag_codes
    aP, aQ = np.abs(Bp), np.abs(Bm)
    nd = np.where(aQ > aP, REGION_CODES[Region.NONDIAG_II], np.where(aQ < aP, REGION_CODES[Region.NONDIAG_III], REGION_CODES[Region.CRITICAL_HERMITIAN]))
    code = np.where(flag, nd, code)
    return P, Q, code, lam


def run_sweep(cfg, workers=None):
    """Classify every grid point of ``cfg``; rows are split across processes."""
    workers = default_workers() if workers is None else max(1, int(workers))
    n = cfg.grid
    chunks = [slice(i, min(i + max(1, -(-n // workers)), n)) for i in range(0, n, max(1, -(-n // workers)))]
    if workers == 1 or len(chunks) == 1:
        parts = [_rows(cfg, s) for s in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_rows, [cfg] * len(chunks), chunks))
    P, Q, code, lam = (np.concatenate([p[k] for p in parts]) for k in range(4))
    return SweepResult(cfg, P, Q, code, lam)


def _is_region_one(cfg, p, q):
    Bp, Bm = cfg.to_complex(np.array([p]), np.array([q]))
    code, _, _ = classify_arrays(np.array([float(cfg.A)]), Bp, Bm, cfg.tol)
    return code[0] == REGION_CODES[Region.I]


def refine_boundary(result, xtol=1e-10):
    """Bisect every I / non-I transition along the rows of a sweep.

    Returns an array of (bp, bm) points on the boundary of region I, one
    per sign change between horizontally adjacent grid points.
    """
    cfg = result.config
    one = result.code == REGION_CODES[Region.I]
    pts = []
    rows, cols = np.nonzero(one[:, 1:] != one[:, :-1])
    for r, c in zip(rows, cols):
        q = result.bm[r, c]
        p0, p1 = result.bp[r, c], result.bp[r, c + 1]
        inside0 = one[r, c]

        def f(p):
            return 1.0 if _is_region_one(cfg, p, q) == inside0 else -1.0

        # f is a step function; brentq on it reduces to bisection
        pts.append((brentq(f, p0, p1, xtol=xtol), q))
    return np.array(pts).reshape(-1, 2)
