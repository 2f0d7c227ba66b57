"""Where does a one-mode quadratic form have a discrete spectrum?

Sweeps the real (B+, B-) plane at A = 1 and draws the region codes as
characters: '#' region I (discrete, biorthogonal ladder), '+' region II
(continuous spectrum of H), '-' region III (continuum only for H^dag),
'x' cells crossed by the curve lam = 0, ':' borders.
"""

from bosonspec.sweep import SweepConfig, run_sweep

GLYPH = {1: "#", 2: "+", 3: "-", -1: ":", -2: ":", -3: "x", -4: "x", -5: "x", 0: "0"}

cfg = SweepConfig("real", A=1.0, lo=-4.0, hi=4.0, grid=41)
res = run_sweep(cfg, workers=1)

print("B- increases downwards, B+ to the right; A = 1\n")
for row in res.code:
    print(" ".join(GLYPH[int(c)] for c in row))

inside = (res.code == 1).mean()
print(f"\nfraction of the square in region I: {inside:.3f}")
print("region I is the stripe |B+ + B-| < 2A; the hyperbola B+ B- = A^2 bounds II and III")
