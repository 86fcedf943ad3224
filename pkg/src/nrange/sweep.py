"""Recovering ``W(T)`` as the intersection of the numerical ranges of its unitary dilations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dilation import RANK_TOL, as_matrix, build_tilde, dilation_with_eigenvalues
from .errors import TargetInSpectrum
from .numrange import ConvexRegion, hausdorff, intersect_regions, phi_grid, range_region, region_from_points

__all__ = ["SweepResult", "dilation_sweep"]


@dataclass(frozen=True)
class SweepResult:
    gap: float
    region: ConvexRegion
    reference: ConvexRegion
    grid_size: int
    skipped: int

    def to_json(self, tol: float | None = None) -> dict:
        out = {"hausdorff_gap": self.gap, "grid_size": self.grid_size, "skipped": self.skipped}
        if tol is not None:
            out["tol"] = tol
            out["pass"] = bool(self.gap <= tol)
        return out


def dilation_sweep(T, grid_size: int = 720, phi_samples: int = 2048,
                   rank_tol: float = RANK_TOL) -> SweepResult:
    """Intersect ``W(U)`` over a grid of unitary dilations ``U`` of ``T``.

    For defect index 1 the grid runs over ``omega = exp(i mu)``.  For larger
    defect it runs over dilations having ``exp(i mu)`` as an eigenvalue of full
    multiplicity; grid points in the spectrum of ``T`` are skipped.  Each
    ``W(U)`` is the convex hull of the spectrum of ``U``.
    """
    T = as_matrix(T)
    phi = phi_grid(phi_samples)
    ref = range_region(T, phi_samples)
    tilde = build_tilde(T, rank_tol=rank_tol)
    mus = 2 * np.pi * np.arange(grid_size) / grid_size
    regions, skipped = [], 0
    if tilde.d == 0:
        regions.append(region_from_points(np.linalg.eigvals(T), phi=phi))
    elif tilde.d == 1:
        base = tilde.matrix
        rank1 = np.outer(tilde.coker_basis[:, 0], tilde.ker_basis[:, 0].conj())
        for mu in mus:
            ev = np.linalg.eigvals(base + np.exp(1j * mu) * rank1)
            regions.append(region_from_points(ev, phi=phi))
    else:
        for mu in mus:
            try:
                dil = dilation_with_eigenvalues(T, [(np.exp(1j * mu), tilde.d)], rank_tol)
            except TargetInSpectrum:
                skipped += 1
                continue
            regions.append(region_from_points(np.linalg.eigvals(dil.U), phi=phi))
    inter = intersect_regions(regions)
    return SweepResult(hausdorff(inter, ref), inter, ref, grid_size, skipped)
