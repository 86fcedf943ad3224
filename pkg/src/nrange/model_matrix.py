"""Finite matrices for compressed shifts ``S_theta`` with ``theta`` a finite Blaschke product.

For distinct zeros the reproducing kernels ``k_a(z) = 1/(1 - conj(a) z)``
form a basis of the model space, and ``S_theta^*`` is diagonal on them.  An
orthonormal basis comes from the Hermitian square root of the kernel Gram
matrix.  When every zero is ``0`` the monomials are orthonormal already and
``S_theta`` is the nilpotent Jordan block.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .dilation import defect_data
from .errors import IllConditionedGram, MalformedInput, RootOffCircle
from .inner import InnerFunction, dilation_eigenvalues_on_arc, make_arc
from .numrange import (
    SupportLine,
    hausdorff,
    intersect_regions,
    phi_grid,
    range_region,
    region_from_points,
    support_function,
)

__all__ = [
    "ModelMatrix",
    "PonceletReport",
    "DivisorReport",
    "build_model_matrix",
    "level_set_roots",
    "poncelet_check",
    "divisor_inclusion_check",
    "intersection_formula_check",
    "defect_indices",
]

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class ModelMatrix:
    zeros: np.ndarray
    matrix: np.ndarray
    gram: np.ndarray
    condition: float

    @property
    def dim(self) -> int:
        return self.zeros.size

    def theta(self) -> InnerFunction:
        return InnerFunction(self.zeros)


def _hermitian_power(G: np.ndarray, p: float) -> np.ndarray:
    w, V = np.linalg.eigh((G + G.conj().T) / 2)
    return (V * w**p) @ V.conj().T


def build_model_matrix(zeros) -> ModelMatrix:
    """Matrix of ``S_theta`` in an orthonormal basis of the model space.

    ``S = G^{-1/2} diag(a) G^{1/2}`` where ``G_jk = 1/(1 - conj(a_k) a_j)``.
    Repeated zeros are accepted only when all zeros are ``0``.
    """
    a = np.atleast_1d(np.asarray(zeros, dtype=complex)).ravel()
    if a.size == 0:
        raise MalformedInput("need at least one zero")
    if np.any(~np.isfinite(a)) or np.any(np.abs(a) >= 1 - 1e-12):
        raise MalformedInput("zeros must lie in the open unit disk")
    m = a.size
    if np.all(a == 0):
        S = np.diag(np.ones(m - 1, dtype=complex), -1)
        return ModelMatrix(a, S, np.eye(m, dtype=complex), 1.0)
    if any(c > 1 for c in Counter(a.tolist()).values()):
        raise MalformedInput("repeated zeros are supported only when all zeros are 0")
    G = 1.0 / (1.0 - a[:, None] * np.conj(a)[None, :])
    cond = float(np.linalg.cond(G))
    if cond > MAX_CONDITION:
        raise IllConditionedGram(f"Gram condition number {cond:.3g} exceeds {MAX_CONDITION:.0e}")
    S = _hermitian_power(G, -0.5) @ np.diag(a) @ _hermitian_power(G, 0.5)
    return ModelMatrix(a, S, G, cond)


def level_set_roots(zeros, lam: complex) -> np.ndarray:
    """Roots of ``z prod(z - a) = lam prod(1 - conj(a) z)``, sorted by angle in ``[0, 2 pi)``.

    Companion-matrix eigenvalues followed by one Newton step on the polynomial.
    """
    a = np.atleast_1d(np.asarray(zeros, dtype=complex))
    left = np.concatenate([np.poly(a), [0.0]])
    right = np.zeros(a.size + 2, dtype=complex)
    # prod(1 - conj(a) z) = prod(-conj(a)) prod(z - 1/conj(a)) would fail for a = 0, so expand directly
    q = np.array([1.0 + 0j])
    for c in a:
        q = np.convolve(q, [-np.conj(c), 1.0])
    right[-q.size :] = q
    coeffs = left - lam * right
    roots = np.roots(coeffs)
    d = np.polyder(coeffs)
    roots = roots - np.polyval(coeffs, roots) / np.polyval(d, roots)
    return roots[np.argsort(np.mod(np.angle(roots), 2 * np.pi))]


@dataclass(frozen=True)
class PonceletReport:
    lam: complex
    roots: np.ndarray
    sides: list
    support_excess: float
    tangency_gap: float
    touch_points: np.ndarray
    level_set_mismatch: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.support_excess <= self.tol and self.tangency_gap <= self.tol and self.level_set_mismatch <= 1e-8

    def to_json(self) -> dict:
        return {
            "lam": [self.lam.real, self.lam.imag],
            "roots": [[float(z.real), float(z.imag)] for z in self.roots],
            "support_excess": self.support_excess,
            "tangency_gap": self.tangency_gap,
            "level_set_mismatch": self.level_set_mismatch,
            "ok": self.ok,
        }


def poncelet_check(mm: ModelMatrix, lam: complex, tol: float = 1e-6, root_tol: float = 1e-8) -> PonceletReport:
    """Check that the polygon on the solutions of ``z theta(z) = lam`` circumscribes ``W(S_theta)``.

    Each side lies on the line ``Re(exp(-i phi) z) = c``.  ``support_excess``
    is the largest ``h(phi) - c`` (positive means the region crosses a side)
    and ``tangency_gap`` the largest ``c - h(phi)`` (positive means a side
    misses the region).
    """
    lam = complex(lam)
    roots = level_set_roots(mm.zeros, lam)
    off = np.max(np.abs(np.abs(roots) - 1))
    if off > root_tol:
        raise RootOffCircle(f"root modulus deviates from 1 by {off:.3g}")
    roots = roots / np.abs(roots)
    sides = [SupportLine.through(roots[k], roots[(k + 1) % roots.size]) for k in range(roots.size)]
    angles = np.array([s.angle for s in sides])
    offsets = np.array([s.offset for s in sides])
    h, X = support_function(mm.matrix, angles)
    touch = np.einsum("ki,ij,kj->k", X.conj(), mm.matrix, X)

    arc = make_arc(mm.theta(), 0.0, 2 * np.pi, full=True)
    t = dilation_eigenvalues_on_arc(arc, mm.theta(), lam)
    # nearest circular distance; sorted order can disagree for roots at angle 0
    diff = np.abs(np.angle(np.exp(1j * t)[:, None] * np.conj(roots)[None, :])).min(axis=1)
    mismatch = float(diff.max()) if t.size == roots.size else float("inf")
    return PonceletReport(
        lam=lam,
        roots=roots,
        sides=sides,
        support_excess=float(np.max(h - offsets)),
        tangency_gap=float(np.max(offsets - h)),
        touch_points=touch,
        level_set_mismatch=mismatch,
        tol=tol,
    )


@dataclass(frozen=True)
class DivisorReport:
    subzeros: np.ndarray
    margin: float
    argmin_angle: float

    @property
    def ok(self) -> bool:
        return self.margin > 0

    def to_json(self) -> dict:
        return {
            "subzeros": [[float(z.real), float(z.imag)] for z in self.subzeros],
            "margin": self.margin,
            "argmin_angle": self.argmin_angle,
            "ok": self.ok,
        }


def divisor_inclusion_check(mm: ModelMatrix, subzeros, m: int = 2048) -> DivisorReport:
    """Smallest gap ``h_theta(phi) - h_divisor(phi)`` between support functions.

    ``subzeros`` must be a proper nonempty sub-multiset of the zeros of ``mm``.
    """
    sub = np.atleast_1d(np.asarray(subzeros, dtype=complex)).ravel()
    full = Counter(mm.zeros.tolist())
    part = Counter(sub.tolist())
    if sub.size == 0 or sub.size >= mm.zeros.size or any(full[z] < c for z, c in part.items()):
        raise MalformedInput("subzeros must be a proper nonempty sub-multiset of the zeros")
    small = build_model_matrix(sub)
    phi = phi_grid(m)
    gap = range_region(mm.matrix, m).h - range_region(small.matrix, m).h
    k = int(np.argmin(gap))
    return DivisorReport(sub, float(gap[k]), float(phi[k]))


def intersection_formula_check(mm: ModelMatrix, lam_grid, phi_samples: int = 2048,
                               return_region: bool = False):
    """Hausdorff gap between ``W(S_theta)`` and the intersection of the eigenvalue polygons.

    The unitary one-dilation attached to ``lam`` is normal with spectrum the
    roots of ``z theta(z) = lam``, so its numerical range is their hull.
    """
    lam_grid = np.atleast_1d(np.asarray(lam_grid, dtype=complex))
    if lam_grid.size == 0:
        raise ValueError("lam_grid is empty")
    phi = phi_grid(phi_samples)
    polys = [region_from_points(level_set_roots(mm.zeros, lam), phi=phi) for lam in lam_grid]
    inter = intersect_regions(polys)
    gap = hausdorff(inter, range_region(mm.matrix, phi_samples))
    return (gap, inter) if return_region else gap


def defect_indices(mm: ModelMatrix) -> tuple[int, int]:
    return defect_data(mm.matrix).index, defect_data(mm.matrix.conj().T).index
