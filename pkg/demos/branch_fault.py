"""
Why the coefficient reality check exists
========================================

The d_j coefficients are assembled from complex Legendre functions and
must come out real.  Picking the wrong analytic continuation for negative
orders gives plausible-looking but complex coefficients; the residue check
catches it.
"""

from ftrfading import ConsistencyError, FtrParams, dj_imaginary_residue, build_coefficients
from ftrfading.selftest import flipped_legendre_branch

p = FtrParams(10.0, 10.0, 0.5, 1.0)
print("correct branch, |Im d_j| / |Re d_j|:", [f"{dj_imaginary_residue(j, p):.1e}" for j in range(5)])

with flipped_legendre_branch():
    try:
        build_coefficients(p)
    except ConsistencyError as exc:
        print("flipped branch:", exc)
