"""JSON schemas for matrices and dilations, and SVG rendering of regions."""

from __future__ import annotations

import json
from xml.sax.saxutils import escape

import numpy as np

from .dilation import Dilation, as_matrix, build_tilde
from .errors import MalformedInput
from .numrange import ConvexRegion, SupportLine

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "dilation_to_json",
    "dilation_from_json",
    "dumps",
    "region_svg",
]

VIEW = 1000
RADIUS = 450


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_json(A) -> dict:
    A = as_matrix(A)
    return {"dim": A.shape[0], "entries": [[_pair(z) for z in row] for row in A]}


def matrix_from_json(data: dict) -> np.ndarray:
    try:
        dim = int(data["dim"])
        arr = np.asarray(data["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad matrix JSON: {exc}") from exc
    if arr.shape != (dim, dim, 2):
        raise MalformedInput(f"entries have shape {arr.shape}, expected ({dim}, {dim}, 2)")
    return as_matrix(arr[..., 0] + 1j * arr[..., 1])


def dilation_to_json(dil: Dilation) -> dict:
    out = matrix_to_json(dil.U)
    out["base_dim"] = dil.base_dim
    out["targets"] = [{"lam": _pair(lam), "mult": int(m)} for lam, m in dil.targets]
    return out


def dilation_from_json(data: dict) -> Dilation:
    U = matrix_from_json(data)
    try:
        base = int(data["base_dim"])
        targets = tuple((complex(*t["lam"]), int(t["mult"])) for t in data.get("targets", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad dilation JSON: {exc}") from exc
    n = U.shape[0] - base
    # omega is not stored; recover it in the canonical kernel/cokernel bases
    tilde = build_tilde(U[:base, :base])
    omega = tilde.coker_basis.conj().T @ U @ tilde.ker_basis if n else np.zeros((0, 0))
    return Dilation(U, base, omega, targets)


def _plain(obj):
    # numpy scalars to Python, non-finite floats to null
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, shortest float repr, non-finite values as null."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _xy(z: complex) -> tuple[float, float]:
    return VIEW / 2 + RADIUS * z.real, VIEW / 2 - RADIUS * z.imag


def _path(points) -> str:
    pts = [_xy(complex(z)) for z in points]
    return "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in pts) + " Z"


def region_svg(region: ConvexRegion, lines: list[SupportLine] = (), points=(), title: str = "") -> str:
    """Unit circle, the filled region, optional support lines (drawn as chords) and marked points."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEW}" height="{VIEW}" viewBox="0 0 {VIEW} {VIEW}">',
        f'<rect width="{VIEW}" height="{VIEW}" fill="white"/>',
        f'<circle cx="{VIEW / 2}" cy="{VIEW / 2}" r="{RADIUS}" fill="none" stroke="black" stroke-width="2"/>',
    ]
    if title:
        parts.append(f'<title>{escape(title)}</title>')
    b = region.boundary
    if b.size >= 3:
        parts.append(f'<path d="{_path(b)}" fill="#6fa8dc" fill-opacity="0.6" stroke="#1c4587" stroke-width="1.5"/>')
    elif b.size:
        parts.append(f'<path d="{_path(b)}" fill="none" stroke="#1c4587" stroke-width="3"/>')
    for ln in lines:
        if ln.chord is not None:
            a, c = ln.chord
        else:
            # clip the line to the disk of radius 1.05 for display
            n = np.exp(1j * ln.angle)
            half = np.sqrt(max(1.05**2 - ln.offset**2, 0.0))
            a, c = n * ln.offset - 1j * n * half, n * ln.offset + 1j * n * half
        (x1, y1), (x2, y2) = _xy(a), _xy(c)
        parts.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" stroke="#cc0000" stroke-width="1.5"/>')
    for z in points:
        x, y = _xy(complex(z))
        parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="#cc0000"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
