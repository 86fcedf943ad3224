"""
Poncelet polygons of a finite Blaschke product
==============================================

For a Blaschke product theta of degree n the compressed shift S_theta is an
n x n matrix.  Its numerical range is inscribed in every polygon whose
vertices solve z theta(z) = lam on the circle, and each side touches it.
Run from the repository root: ``python demos/poncelet.py``.
"""

from pathlib import Path

import numpy as np

from nrange import InnerFunction, build_model_matrix, envelope_region, poncelet_check, range_region
from nrange.formats import region_svg
from nrange.numrange import hausdorff

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# Two zeros: W(S) is an ellipse with foci at the zeros.
mm = build_model_matrix([0.0, 0.5])
print(mm.matrix.round(4))
print("eigenvalues:", np.linalg.eigvals(mm.matrix).round(12))

region = range_region(mm.matrix, 1024)
print("width along the real axis:", (region.h[0] + region.h[512]).round(12))

# Every level lam gives a triangle around the ellipse.
for lam in np.exp(1j * np.linspace(0, 2 * np.pi, 5, endpoint=False)):
    rep = poncelet_check(mm, lam)
    print(f"lam angle {np.angle(lam):+.3f}: tangency gap {rep.tangency_gap:.1e}, ok={rep.ok}")

rep = poncelet_check(mm, -1)
(out / "ellipse_triangle.svg").write_text(region_svg(region, rep.sides, rep.roots))

# A degree-five example.  The boundary can be traced without the matrix:
# chords joining consecutive solutions of z theta(z) = lam envelope it.
zeros = [0.3, -0.4j, 0.5 + 0.2j, -0.6, 0.1 + 0.7j]
spec = InnerFunction(zeros)
env = envelope_region(spec, 1024)
mat = range_region(build_model_matrix(zeros).matrix, 1024)
print("envelope vs matrix Hausdorff distance:", f"{hausdorff(env, mat):.1e}")

rep = poncelet_check(build_model_matrix(zeros), 1j)
(out / "pentagon.svg").write_text(region_svg(env, rep.sides, rep.roots))
print("pictures written to", out)
