"""
Inner functions with a singular part
====================================

When theta has a point mass or infinitely many zeros, S_theta is no longer
a matrix.  The numerical range is still the intersection of the ranges of
its one-dimensional unitary dilations, whose spectra are the solutions of
z theta(z) = lam plus the singular set.  The shape of the boundary near a
singular point depends on how fast the argument of theta grows there.
Run from the repository root: ``python demos/singular_inner.py``.
"""

from pathlib import Path

import numpy as np

from nrange import InnerFunction, ZeroTail, classify_endpoint, component_arcs, model_region, tau
from nrange.formats import region_svg

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# A single atom at 1.  The argument of theta blows up at both ends of the
# arc, so there are infinitely many eigenvalues near 1 and the boundary is smooth.
atom = InnerFunction(atoms=((0.0, 1.0),))
arc = component_arcs(atom)[0]
print("atom:", [classify_endpoint(arc, atom, w).verdict.value for w in ("left", "right")])
t = np.linspace(0.5, 5.5, 5)
print("next solutions tau(t) - t:", (tau(arc, atom, t) - t).round(4))
region = model_region(atom, 1024, 360)
print("support toward 1 and toward -1:", region.h[0].round(4), region.h[512].round(4))
(out / "atom.svg").write_text(region_svg(region, points=[1.0]))

# Zeros approaching 1 tangentially from below.  Both sums converge at the
# left end of the arc, which gives a corner there with a boundary segment
# leaving it.  The right end sees the zeros from inside the arc.
tail = ZeroTail("custom", {"angle": 0.0, "radial_power": 4, "angular_power": 1, "side": "below"},
                ac_sum_finite=True, radial_sum_finite=True)
spec = InnerFunction(tail=tail)
arc = component_arcs(spec)[0]
print("tangential tail:", [classify_endpoint(arc, spec, w).verdict.value for w in ("left", "right")])

# Zeros filling the lower half circle.  On the upper arc theta is one-to-one,
# the chord [-1, 1] lies on the boundary, and W(S_theta) is the lower half disk.
half = ZeroTail("arc_dyadic", {"lo": np.pi, "hi": 2 * np.pi, "eps": 0.05},
                ac_sum_finite=True, radial_sum_finite=True)
spec = InnerFunction(tail=half)
upper = component_arcs(spec)[0]
print("half circle:", classify_endpoint(upper, spec, "left").verdict.value)
region = model_region(spec, 1024, 180)
print("support upward (0 for the half disk):", region.h[256].round(6))
(out / "half_disk.svg").write_text(region_svg(region))
print("pictures written to", out)
