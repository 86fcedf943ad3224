"""
Unitary dilations and the numerical range
=========================================

A contraction T sits in the top-left corner of many unitary matrices U.
Each W(U) is the convex hull of its eigenvalues, and W(T) is contained in
every one of them.  Intersecting over all dilations of the smallest size
recovers W(T).  Run from the repository root: ``python demos/dilations.py``.
"""

from pathlib import Path

import numpy as np

from nrange import build_tilde, dilation_from_omega, dilation_sweep, dilation_with_eigenvalues, range_region
from nrange.formats import region_svg
from nrange.sampling import random_contraction

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# The 2x2 Jordan block: W(J) is the disk of radius 1/2.
J = np.array([[0, 1], [0, 0]], dtype=complex)
print("support of W(J) at a few angles:", range_region(J, 8).h.round(12))

# I - J*J has rank one, so one extra dimension is enough.  The partial
# isometry below is unitary except on a single kernel vector.
tilde = build_tilde(J)
print("defect index:", tilde.d)
print(tilde.matrix.real.round(3))

# Every unimodular omega closes it up into a unitary 3x3 matrix.
for omega in (1, 1j, -1):
    U = dilation_from_omega(tilde, [[omega]]).U
    ev = np.linalg.eigvals(U)
    print(f"omega={omega!s:>3}: eigenvalue angles / pi =", np.sort(np.angle(ev) / np.pi).round(4))

# We can also ask for a dilation that has a chosen eigenvalue.
dil = dilation_with_eigenvalues(J, [(-1, 1)])
print("det(U + I) =", abs(np.linalg.det(dil.U + np.eye(3))).round(14))

# Intersecting the triangles W(U) over a grid of omega shrinks onto the disk.
for grid in (12, 48, 192, 720):
    res = dilation_sweep(J, grid, 1024)
    print(f"{grid:4d} dilations: Hausdorff gap {res.gap:.2e}")
(out / "jordan_sweep.svg").write_text(region_svg(dilation_sweep(J, 12, 1024).region, title="12 dilations"))

# The same works for a random contraction with a two-dimensional defect,
# using dilations that carry exp(i mu) with multiplicity two.
rng = np.random.default_rng(0)
T = random_contraction(4, 2, rng)
res = dilation_sweep(T, 360, 1024)
print(f"random 4x4, defect 2: gap {res.gap:.2e} over {res.grid_size - res.skipped} dilations")
(out / "random_sweep.svg").write_text(region_svg(res.region, points=np.linalg.eigvals(T)))
print("pictures written to", out)
