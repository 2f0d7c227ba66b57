"""A non-Hermitian form with a real ladder: A = 1, B+ = 0.5, B- = 0.3.

The analytic levels lam (n + 1/2) with lam = sqrt(A^2 - B+ B-) are compared
with brute-force eigenvalues of the truncated number-basis matrix, and the
left/right eigenfunctions are checked to form a biorthogonal set.
"""

import numpy as np

from bosonspec import fock, quadrature as qd
from bosonspec.forms import OneModeForm
from bosonspec.normal_modes import bogoliubov, classify

form = OneModeForm(1.0, 0.5, 0.3)
c = bogoliubov(form)
print("region:", classify(form).label.value)
print(f"lam = {c.lam.real:.12f}   u, v, ubar, vbar = {c.u:.6f}, {c.v:.6f}, {c.u_bar:.6f}, {c.v_bar:.6f}")
print(f"u ubar* - v vbar* = {c.det():.15f}")

rep = fock.compare_spectrum(form, cutoff=300, k=5)
print("\n n   analytic           truncated matrix    |diff|")
for n, (t, m) in enumerate(zip(rep["targets"], rep["matched"])):
    print(f"{n:2d}   {t.real:.12f}   {m.real:.12f}      {abs(t - m):.1e}")
print(f"drift when the cutoff is doubled: {rep['max_drift']:.1e}")

G = qd.biorthogonal_matrix(form, 4)
print("\n<m_bbar | n_b>, m, n <= 4 (should be the identity):")
print(np.array2string(G.real, precision=3, suppress_small=True))
