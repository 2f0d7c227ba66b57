"""Region II: every complex energy is an eigenvalue of H.

At A = 1, B+ = 0.1, B- = 5 the b-vacuum is normalizable but the bbar one is
not. The eigenfunctions are Gaussians times Hermite functions of complex
order nu with energy lam (nu + 1/2); two independent bounded solutions
exist for each energy.
"""

import numpy as np

from bosonspec import quadrature as qd, wavefunctions as wf
from bosonspec.forms import OneModeForm
from bosonspec.wavefunctions import WaveSpec

form = OneModeForm(1.0, 0.1, 5.0)
x = np.linspace(-5, 5, 11)

for nu in (0.5 + 0.3j, -1.7 + 1.1j, 2.0):
    spec = WaveSpec("continuous_b", form, nu)
    rep = qd.schrodinger_residual(spec)
    print(f"nu = {nu!s:>12}  E = {rep.energy:.6f}  residual = {rep.max_rel_residual:.1e}  bounded = {wf.is_bounded(spec)}")

nu = 0.5 + 0.3j
spec = WaveSpec("continuous_b", form, nu)
f, d, _ = wf.evaluate(spec, np.array([0.37]), True)
g, e, _ = wf.eval_parity_partner(spec, np.array([0.37]), True)
print(f"\nopposite-parity partner at the same energy: Wronskian at x = 0.37 is {complex(f[0] * e[0] - d[0] * g[0]):.3e}")

print("\n|psi| on a coarse grid (it stays bounded and decays):")
for xi, v in zip(x, np.abs(wf.evaluate(spec, x))):
    print(f"  x = {xi:5.1f}   {v:.3e}")
