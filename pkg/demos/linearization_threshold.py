"""
Spectral threshold vs. the explicit formula
===========================================

Assemble the k = 1 linearized operator at the radial maximizer and locate
the value of a where its lowest eigenvalue crosses zero.  It should land on
a_bar(theta, p).
"""
from symbreak import closed_forms as cf
from symbreak.spectral import spectral_threshold, symmetry_verdict

for d in (3, 4, 5):
    for p in (3.0, 4.0):
        num = spectral_threshold(1.0, p, d)
        print(f"d={d} p={p}: spectral {num:+.8f}  formula {cf.a_bar(1.0, p, d):+.8f}")

###############################################################################
# One full report, including the constrained k = 0 sector.  Its lowest
# eigenvalue is zero: translations in s leave the functional unchanged.
theta, p, d = 0.9, 3.0, 3
for a in (cf.a_bar(theta, p, d) - 0.3, cf.a_bar(theta, p, d) + 0.3):
    rep = symmetry_verdict(theta, p, cf.Lambda_of(a, d), d, kmax=2, with_tangent=True)
    eigs = ", ".join(f"k={k}: {v:+.5f}" for k, v in rep.sector_eigenvalues.items())
    print(f"a={a:+.4f}: {rep.verdict:8s} [{eigs}] tangent k=0 {rep.tangent_k0:+.5f}")
