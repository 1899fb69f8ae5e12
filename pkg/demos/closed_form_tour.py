"""
Closed-form thresholds
======================

Walk through the explicit quantities: the critical parameter a_c, the
linearization threshold a_bar, the WLH threshold a_tilde and the
symmetry-breaking level Lambda_SB, then check the coincidence
Lambda_SB(d/4) = Lambda_star_WLH(d) for a few dimensions.
"""
from symbreak import closed_forms as cf

###############################################################################
# Linearization threshold along theta = 1 for d = 3, where 2* = 6.
d = 3
print(f"d={d}: a_c={cf.a_c(d)}, 2*={cf.critical_exponent(d)}")
for p in (2.5, 3.0, 4.0, 5.0, 6.0):
    print(f"  p={p}: a_bar(1, p) = {cf.a_bar(1.0, p, d):+.6f}")

###############################################################################
# At p = 2* = 6 the threshold sits exactly at a = 0 = a_c - 1/2.

###############################################################################
# WLH at gamma = d/4: the two Lambda levels agree, and both stay below the
# linearization level Lambda(a_tilde).
for d in (3, 4, 5, 10):
    g = d / 4.0
    sb, star = cf.lambda_sb(g, d), cf.lambda_star_wlh(d)
    lin = cf.Lambda_of(cf.a_tilde(g, d), d)
    print(f"d={d:2d}: Lambda_SB={sb:.12f}  Lambda_star={star:.12f}  Lambda(a_tilde)={lin:.6f}")
    print(f"       a_star_WLH = {cf.a_star_wlh(d):+.8f}")
