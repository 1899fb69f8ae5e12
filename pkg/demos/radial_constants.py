"""
Radial optimal constants
========================

Compute the radial CKN and WLH constants with the 1D optimizer, compare
them with the explicit sech / Gaussian formulas, and watch the scaling in
Lambda = (a - a_c)^2.
"""
import math

from symbreak import closed_forms as cf
from symbreak.radial_opt import ckn_radial_constant, gn_constant, log_sobolev_constant, sobolev_constant, wlh_radial_constant

theta, p, d = 0.8, 3.0, 3

###############################################################################
# CKN: two values of Lambda, then the predicted ratio.
c1 = ckn_radial_constant(theta, p, 1.0, d).require()
c4 = ckn_radial_constant(theta, p, 4.0, d).require()
print(f"C*_CKN(Lambda=1) = {c1.value:.12f}  (residual {c1.residual:.1e}, {c1.iterations} iterations)")
print(f"ratio at Lambda=4: {c4.value / c1.value:.12f}, predicted {4.0 ** ((p - 2) / (2 * p) - theta):.12f}")

###############################################################################
# WLH with gamma = 1: the optimal profile is a Gaussian in s.
gamma = 1.0
w1 = wlh_radial_constant(gamma, 1.0, d).require()
print(f"C*_WLH(Lambda=1) = {w1.value:.12f}")

###############################################################################
# Auxiliary sharp constants used by the comparison thresholds.
print(f"S_{d}   = {sobolev_constant(d).value:.12f}")
print(f"C_GN  = {gn_constant(p, d).value:.12f}")
print(f"C_LS  = {log_sobolev_constant(d).value:.12f}  (2/(pi d e) = {2 / (math.pi * d * math.e):.12f})")

###############################################################################
# Where does the radial constant meet C_GN?  Below that a, symmetry breaks.
from symbreak.regions import a_star_ckn  # noqa: E402

star = a_star_ckn(cf.critical_p(0.6, d), d)
print(f"a_star_CKN at theta=0.6 (p={star.p:.4f}): {star.a:+.8f}")
