"""Numerical ranges of matrices and convex regions described by support functions.

A compact convex set ``K`` in the plane is stored through its support function
``h(phi) = max{Re(exp(-i phi) z) : z in K}`` sampled on a uniform grid, plus a
boundary polyline.  For a matrix ``T``, ``h(phi)`` is the top eigenvalue of the
Hermitian part of ``exp(-i phi) T``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.spatial

from .dilation import as_matrix
from .errors import EmptyIntersection, MalformedInput

__all__ = [
    "ConvexRegion",
    "SupportLine",
    "Corner",
    "phi_grid",
    "support_value",
    "support_function",
    "range_region",
    "hull_vertices",
    "region_from_points",
    "region_from_support",
    "support_polygon",
    "halfplane_polygon",
    "intersect_regions",
    "hausdorff",
    "corner_defect",
    "distance_to_boundary",
]

DEGENERATE_WIDTH = 1e-8


def phi_grid(m: int) -> np.ndarray:
    return 2 * np.pi * np.arange(m) / m


class SupportLine(NamedTuple):
    """The line ``Re(exp(-i angle) z) = offset``, optionally with its chord endpoints on the circle."""

    angle: float
    offset: float
    chord: tuple | None = None

    @classmethod
    def through(cls, a: complex, b: complex) -> "SupportLine":
        # a, b unimodular, counterclockwise from a to b; outward normal bisects the arc a -> b
        ta, tb = np.angle(a), np.angle(b)
        gap = (tb - ta) % (2 * np.pi)
        mid = (ta + gap / 2) % (2 * np.pi)
        return cls(float(mid), float(np.cos(gap / 2)), (complex(a), complex(b)))


class Corner(NamedTuple):
    vertex: complex
    angle: float
    inside_disk: bool


@dataclass(frozen=True)
class ConvexRegion:
    phi: np.ndarray
    h: np.ndarray
    boundary: np.ndarray
    inner: np.ndarray | None = None
    # boundary is the region itself (a polygon), not an outer approximation
    polygon_exact: bool = False

    @property
    def m(self) -> int:
        return self.phi.size

    def width(self) -> float:
        """Minimal width ``min_phi h(phi) + h(phi + pi)`` (needs an even grid size)."""
        half = self.m // 2
        return float(np.min(self.h[:half] + self.h[half : 2 * half]))

    @property
    def degenerate(self) -> bool:
        return self.width() < DEGENERATE_WIDTH

    def is_convex(self, tol: float = 1e-9) -> bool:
        z = self.boundary
        e1 = np.roll(z, -1) - z
        e2 = np.roll(z, -2) - np.roll(z, -1)
        cross = (e1.conj() * e2).imag
        return bool(np.all(cross >= -tol) or np.all(cross <= tol))

    def contains(self, z, tol: float = 0.0) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        proj = (np.exp(-1j * self.phi)[None, :] * z[:, None]).real
        return np.all(proj <= self.h[None, :] + tol, axis=1)

    def area(self) -> float:
        z = self.boundary
        return float(0.5 * np.sum((z.conj() * np.roll(z, -1)).imag))

    def to_json(self) -> dict:
        return {
            "phi": [float(p) for p in self.phi],
            "h": [float(v) for v in self.h],
            "boundary": [[float(z.real), float(z.imag)] for z in self.boundary],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConvexRegion":
        try:
            phi = np.asarray(data["phi"], dtype=float)
            h = np.asarray(data["h"], dtype=float)
            b = np.asarray(data["boundary"], dtype=float).reshape(-1, 2)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad region JSON: {exc}") from exc
        if phi.shape != h.shape:
            raise MalformedInput("phi and h differ in length")
        return cls(phi, h, b[:, 0] + 1j * b[:, 1])


def support_value(T, phi: float):
    """Top eigenvalue of ``(exp(-i phi) T + exp(i phi) T*) / 2`` and a unit eigenvector for it.

    Ties in the top eigenvalue go to the first eigenvector returned by ``eigh``.
    """
    T = as_matrix(T)
    H = np.exp(-1j * phi) * T
    H = (H + H.conj().T) / 2
    w, V = np.linalg.eigh(H)
    return float(w[-1]), V[:, -1]


def support_function(T, phi):
    """Vectorized :func:`support_value`: returns ``(h, maximizers)`` with maximizers as rows."""
    T = as_matrix(T)
    phi = np.asarray(phi, dtype=float)
    H = np.exp(-1j * phi)[:, None, None] * T[None, :, :]
    H = (H + np.conj(np.swapaxes(H, 1, 2))) / 2
    w, V = np.linalg.eigh(H)
    return w[:, -1], V[:, :, -1]


def support_polygon(phi: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Vertices where consecutive support lines ``Re(exp(-i phi_k) z) = h_k`` meet."""
    p1, p2 = phi, np.roll(phi, -1)
    h1, h2 = h, np.roll(h, -1)
    det = np.sin(p2 - p1)
    x = (h1 * np.sin(p2) - h2 * np.sin(p1)) / det
    y = (h2 * np.cos(p1) - h1 * np.cos(p2)) / det
    return x + 1j * y


def region_from_support(phi, h) -> ConvexRegion:
    phi = np.asarray(phi, dtype=float)
    h = np.asarray(h, dtype=float)
    return ConvexRegion(phi, h, support_polygon(phi, h))


def range_region(T, m: int = 2048) -> ConvexRegion:
    """Numerical range of ``T`` sampled at ``m`` uniformly spaced support directions.

    ``boundary`` is the outer polygon of support lines.  ``inner`` holds the
    points ``<T x, x>`` at the maximizers, which lie on the true boundary.
    """
    if m < 8:
        raise ValueError("need at least 8 support directions")
    T = as_matrix(T)
    phi = phi_grid(m)
    h, X = support_function(T, phi)
    inner = np.einsum("ki,ij,kj->k", X.conj(), T, X)
    return ConvexRegion(phi, h, support_polygon(phi, h), inner)


def hull_vertices(points) -> np.ndarray:
    """Counterclockwise vertices of the convex hull (two points for a segment, one for a point)."""
    pts = np.unique(np.atleast_1d(np.asarray(points, dtype=complex)))
    if pts.size <= 1:
        return pts
    xy = np.column_stack([pts.real, pts.imag])
    try:
        hull = scipy.spatial.ConvexHull(xy)
        return pts[hull.vertices]
    except scipy.spatial.QhullError:
        c = pts.mean()
        u = pts[np.argmax(np.abs(pts - c))] - c
        t = (np.conj(u) * (pts - c)).real
        return pts[[np.argmin(t), np.argmax(t)]]


def region_from_points(points, m: int = 2048, phi=None) -> ConvexRegion:
    """Convex hull of finitely many points, e.g. the numerical range of a normal matrix."""
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    phi = phi_grid(m) if phi is None else np.asarray(phi, dtype=float)
    h = np.max((np.exp(-1j * phi)[:, None] * pts[None, :]).real, axis=1)
    return ConvexRegion(phi, h, hull_vertices(pts), polygon_exact=True)


def _meet(p1: float, h1: float, p2: float, h2: float) -> complex:
    det = math.sin(p2 - p1)
    x = (h1 * math.sin(p2) - h2 * math.sin(p1)) / det
    y = (h2 * math.cos(p1) - h1 * math.cos(p2)) / det
    return complex(x, y)


def _outside(z: complex, p: float, h: float, eps: float) -> bool:
    return z.real * math.cos(p) + z.imag * math.sin(p) > h + eps


def halfplane_polygon(phi, h, eps: float = 1e-12, merge: float = 1e-10) -> np.ndarray:
    """Vertices of the polygon ``{z : Re(exp(-i phi_k) z) <= h_k for all k}``, counterclockwise.

    Sorted-angle deque intersection.  Normals closer than ``merge`` are
    treated as parallel (the tighter one is kept).  The normals must not
    leave a gap of ``pi`` or more.  Returns an empty array when the
    half-planes have no common point.
    """
    return _halfplanes(phi, h, eps, merge)[0]


def _halfplanes(phi, h, eps: float = 1e-12, merge: float = 1e-10):
    # vertex k is where active lines k and k + 1 meet
    empty = (np.zeros(0, dtype=complex), np.zeros(0))
    phi = np.mod(np.asarray(phi, dtype=float), 2 * np.pi)
    h = np.asarray(h, dtype=float)
    order = np.lexsort((h, phi))
    phi, h = phi[order], h[order]
    first = np.ones(phi.size, bool)
    first[1:] = np.diff(phi) > merge
    if phi.size > 1 and (phi[0] + 2 * np.pi - phi[-1]) <= merge:
        h[0] = min(h[0], h[-1])
        first[-1] = False
    # within each run of near-equal angles the first entry has the smallest offset
    phi, h = phi[first].tolist(), h[first].tolist()
    gaps = np.diff(np.r_[phi, phi[0] + 2 * np.pi]) if phi else np.array([])
    if len(phi) < 3 or gaps.max() >= math.pi - 1e-12:
        raise ValueError("half-planes do not bound a polygon")

    lines: deque = deque()
    pts: deque = deque()
    for p, v in zip(phi, h):
        while pts and _outside(pts[-1], p, v, eps):
            pts.pop()
            lines.pop()
        while pts and _outside(pts[0], p, v, eps):
            pts.popleft()
            lines.popleft()
        if lines:
            if math.sin(p - lines[-1][0]) <= 0:
                return empty
            pts.append(_meet(*lines[-1], p, v))
        lines.append((p, v))
    while len(pts) >= 2 and _outside(pts[-1], *lines[0], eps):
        pts.pop()
        lines.pop()
    while len(pts) >= 2 and _outside(pts[0], *lines[-1], eps):
        pts.popleft()
        lines.popleft()
    if len(lines) < 3 or math.sin(lines[0][0] - lines[-1][0]) <= 0:
        return empty
    pts.append(_meet(*lines[-1], *lines[0]))
    poly = np.array(pts)
    active = np.array([p for p, _ in lines])
    if (_polygon_support(poly, active, np.asarray(phi)) - np.asarray(h)).max() > 1e-9 * max(1.0, float(np.abs(poly).max())):
        return empty
    return poly, active


def _polygon_support(poly: np.ndarray, active: np.ndarray, ang: np.ndarray) -> np.ndarray:
    """Support values of the polygon from ``_halfplanes``; ``active`` holds its sorted edge normals."""
    ang = np.mod(ang, 2 * np.pi)
    k = np.searchsorted(active, ang, side="right") - 1
    rot = np.exp(-1j * ang)
    n = poly.size
    return np.max([(rot * poly[(k + d) % n]).real for d in (-1, 0, 1)], axis=0)


def intersect_regions(regions) -> ConvexRegion:
    """Intersection of convex regions sharing one support grid.

    The pointwise minimum of the support functions is turned into a polygon
    by half-plane intersection, and the support function is read back from
    that polygon so that redundant constraints do not overstate it.
    """
    regions = list(regions)
    if not regions:
        raise ValueError("need at least one region")
    phi = regions[0].phi
    for r in regions[1:]:
        if r.phi.shape != phi.shape or not np.allclose(r.phi, phi):
            raise ValueError("regions must share the support grid")
    hmin = np.min(np.stack([r.h for r in regions]), axis=0)
    edges = [_edge_constraints(r.boundary) for r in regions if r.polygon_exact]
    return _reextract(phi, hmin, edges)


def _edge_constraints(poly: np.ndarray, min_len: float = 1e-9):
    """Outward normal angles and offsets of the edges of a counterclockwise polygon."""
    if poly.size < 2:
        return np.zeros(0), np.zeros(0)
    e = np.roll(poly, -1) - poly
    ok = np.abs(e) > min_len
    normal = -1j * e[ok] / np.abs(e[ok])
    return np.angle(normal), (np.conj(normal) * poly[ok]).real


def _reextract(phi, hmin, edges=()) -> ConvexRegion:
    ang = np.concatenate([phi] + [a for a, _ in edges])
    off = np.concatenate([hmin] + [o for _, o in edges])
    poly, active = _halfplanes(ang, off)
    if poly.size == 0:
        raise EmptyIntersection("support functions have no common point")
    h = np.minimum(_polygon_support(poly, active, phi), hmin)
    return region_from_support(phi, h)


def hausdorff(a: ConvexRegion, b: ConvexRegion) -> float:
    """Hausdorff distance of two convex regions, ``max |h_a - h_b|`` on the shared grid."""
    if a.phi.shape != b.phi.shape or not np.allclose(a.phi, b.phi):
        raise ValueError("regions must share the support grid")
    return float(np.max(np.abs(a.h - b.h)))


def distance_to_boundary(region: ConvexRegion, z: complex) -> float:
    """Signed distance from ``z`` to the region boundary, positive inside."""
    return float(np.min(region.h - (np.exp(-1j * region.phi) * z).real))


def _clusters(region: ConvexRegion, merge_tol: float):
    z = region.boundary
    step = 2 * np.pi / region.m
    gaps = np.abs(np.roll(z, -1) - z) > merge_tol
    if not gaps.any():
        return [(complex(np.mean(z)), 2 * np.pi)]
    start = int(np.argmax(gaps)) + 1
    z = np.roll(z, -start)
    gaps = np.roll(gaps, -start)
    out, run = [], [z[0]]
    for k in range(1, z.size):
        if gaps[k - 1]:
            out.append(run)
            run = [z[k]]
        else:
            run.append(z[k])
    out.append(run)
    return [(complex(np.mean(r)), len(r) * step) for r in out]


def corner_defect(coarse: ConvexRegion, fine: ConvexRegion, merge_tol: float = 1e-7,
                  match_tol: float = 1e-5, keep_ratio: float = 0.75) -> list[Corner]:
    """Boundary corners that persist when the support grid is refined.

    Every vertex of the support-line polygon turns by one grid step.  At a
    true corner many support lines pass through the same point, so the
    merged vertex turns by an angle that does not shrink when the grid
    doubles.  Returns such vertices with their turning angles.
    ``Corner.inside_disk`` marks vertices with ``|v| < 1 - 1e-4``.
    """
    if fine.m != 2 * coarse.m:
        raise ValueError("fine grid must have twice the coarse resolution")
    cc = _clusters(coarse, merge_tol)
    cpos = np.array([c[0] for c in cc])
    corners = []
    for v, ang in _clusters(fine, merge_tol):
        if ang < 1.5 * 2 * np.pi / fine.m:
            continue
        j = int(np.argmin(np.abs(cpos - v)))
        if abs(cpos[j] - v) > match_tol:
            continue
        if ang >= keep_ratio * cc[j][1]:
            corners.append(Corner(v, ang, bool(abs(v) < 1 - 1e-4)))
    return corners
