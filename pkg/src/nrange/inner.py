"""Inner functions ``theta = B * S`` and the boundary geometry of ``W(S_theta)``.

``theta`` is described by finitely many zeros, finitely many point masses of
the singular measure, and optionally an infinite zero tail given in closed
form.  Everything here is phrased through ``theta_hat(z) = z theta(z)``: its
argument ``psi`` along an arc of analyticity, the next-solution map ``tau``,
level sets (circle eigenvalues of the one-dimensional unitary dilations),
the envelope of the chords ``[e^{it}, e^{i tau(t)}]``, and the classification
of arc endpoints.

Blaschke factors are used unnormalized, ``(z - a) / (1 - conj(a) z)``, so
level sets of ``theta_hat`` match the polynomial ``z prod(z - a_k) =
lam prod(1 - conj(a_k) z)`` used for matrix models.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateChord,
    MalformedInput,
    NoNextSolution,
    TooCloseToSingularity,
    UndeclaredTailVerdict,
    UnwrapFailure,
)
from .numrange import ConvexRegion, intersect_regions, phi_grid, region_from_support

__all__ = [
    "Atom",
    "ZeroTail",
    "InnerFunction",
    "Arc",
    "Verdict",
    "EndpointClass",
    "FullChord",
    "make_arc",
    "component_arcs",
    "eval_theta_hat",
    "psi",
    "psi_prime",
    "tau",
    "dilation_eigenvalues_on_arc",
    "envelope_boundary",
    "envelope_point",
    "envelope_samples",
    "envelope_region",
    "model_region",
    "classify_endpoint",
    "full_chord_check",
    "singular_support",
]

TWO_PI = 2 * math.pi
SINGULAR_GAP = 1e-10
_BLOCK = 2048


@dataclass(frozen=True)
class Atom:
    angle: float
    mass: float


@dataclass(frozen=True, eq=False)
class ZeroTail:
    """A closed-form infinite zero sequence, truncated to ``terms`` zeros for evaluation.

    Kinds:

    ``geometric_stolz``
        ``a_n = e^{i angle} (1 - r0 ratio^n)``: radial approach to one point.
    ``custom``
        ``a_n = (1 - radial_scale n^-radial_power) e^{i(angle + s angular_scale n^-angular_power)}``
        with ``s = -1`` for ``side = "below"`` and ``+1`` for ``"above"``.
        Tangential when ``angular_power < radial_power``.
    ``arc_dyadic``
        level ``j`` places ``2^j`` zeros at radius ``1 - eps 8^-j`` evenly
        inside the arc ``[lo, hi]``; the zeros accumulate on the whole arc.

    ``ac_sum_finite`` and ``radial_sum_finite`` declare whether the
    angular-derivative sum ``sum (1-|a|^2)/|zeta-a|^2`` and the radial sum
    ``sum (1-|a|)/|zeta-a|`` converge at the accumulation endpoints.  Finite
    truncations cannot decide this, so the declaration is required for
    endpoint classification.
    """

    kind: str
    params: dict = field(default_factory=dict)
    ac_sum_finite: bool | None = None
    radial_sum_finite: bool | None = None
    terms: int = 400

    KINDS = ("geometric_stolz", "custom", "arc_dyadic")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise MalformedInput(f"unknown tail kind {self.kind!r}")
        if self.kind == "custom" and self.params.get("side", "below") not in ("below", "above"):
            raise MalformedInput("custom tail side must be 'below' or 'above'")
        if self.kind == "arc_dyadic" and not self.params["lo"] < self.params["hi"] < self.params["lo"] + TWO_PI:
            raise MalformedInput("arc_dyadic tail needs lo < hi < lo + 2 pi")

    def zeros(self) -> np.ndarray:
        p = self.params
        if self.kind == "geometric_stolz":
            n = np.arange(self.terms)
            gap = p.get("r0", 0.5) * p.get("ratio", 0.5) ** n
            gap = gap[gap > 1e-12]
            return np.exp(1j * p["angle"]) * (1 - gap)
        if self.kind == "custom":
            n = np.arange(1, self.terms + 1, dtype=float)
            gap = p.get("radial_scale", 0.5) * n ** -p["radial_power"]
            sign = -1.0 if p.get("side", "below") == "below" else 1.0
            ang = p["angle"] + sign * p.get("angular_scale", 0.5) * n ** -p["angular_power"]
            keep = gap > 1e-12
            return (1 - gap[keep]) * np.exp(1j * ang[keep])
        lo, hi = p["lo"], p["hi"]
        eps = p.get("eps", 0.05)
        out, j = [], 1
        while sum(len(o) for o in out) + 2 ** j <= max(self.terms, 2) and eps * 8.0 ** -j > 1e-12:
            k = np.arange(2 ** j)
            out.append((1 - eps * 8.0 ** -j) * np.exp(1j * (lo + (hi - lo) * (k + 0.5) / 2 ** j)))
            j += 1
        return np.concatenate(out) if out else np.zeros(0, dtype=complex)

    def accumulation(self) -> list[tuple[float, float]]:
        """Closed arcs ``(lo, hi)`` where the zeros accumulate; ``lo == hi`` for a point."""
        p = self.params
        if self.kind == "arc_dyadic":
            lo = p["lo"] % TWO_PI
            return [(lo, lo + (p["hi"] - p["lo"]))]
        a = p["angle"] % TWO_PI
        return [(a, a)]

    def approach_sides(self, zeta: float) -> set[str]:
        """Sides of ``zeta`` from which the zero directions approach it."""
        p = self.params
        if self.kind == "geometric_stolz":
            return {"radial"} if _same_angle(zeta, p["angle"]) else set()
        if self.kind == "custom":
            return {p.get("side", "below")} if _same_angle(zeta, p["angle"]) else set()
        sides = set()
        if _same_angle(zeta, p["lo"]):
            sides.add("above")
        if _same_angle(zeta, p["hi"]):
            sides.add("below")
        return sides

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "ac_sum_finite": self.ac_sum_finite,
            "radial_sum_finite": self.radial_sum_finite,
            "terms": self.terms,
        }


def _same_angle(a: float, b: float, tol: float = 1e-12) -> bool:
    d = (a - b) % TWO_PI
    return d < tol or TWO_PI - d < tol


@dataclass(frozen=True, eq=False)
class InnerFunction:
    """``theta = prod (z - a)/(1 - conj(a) z) * exp(-sum w (e^{is} + z)/(e^{is} - z))`` with an optional zero tail."""

    zeros: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    atoms: tuple = ()
    tail: ZeroTail | None = None

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.zeros, dtype=complex)).ravel()
        if np.any(np.abs(z) >= 1 - 1e-12):
            raise MalformedInput("zeros must satisfy |a| < 1 - 1e-12")
        atoms = tuple(a if isinstance(a, Atom) else Atom(float(a[0]), float(a[1])) for a in self.atoms)
        if any(a.mass <= 0 for a in atoms):
            raise MalformedInput("atom masses must be positive")
        for i in range(len(atoms)):
            for j in range(i):
                if _same_angle(atoms[i].angle, atoms[j].angle):
                    raise MalformedInput("atom angles must be distinct")
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "atoms", atoms)
        tz = self.tail.zeros() if self.tail is not None else np.zeros(0, dtype=complex)
        object.__setattr__(self, "_all_zeros", np.concatenate([z, tz]))

    @property
    def all_zeros(self) -> np.ndarray:
        """Finite zeros followed by the truncated tail."""
        return self._all_zeros

    @property
    def is_finite_blaschke(self) -> bool:
        return not self.atoms and self.tail is None

    @property
    def degree(self) -> int:
        return self.zeros.size

    def singular_arcs(self) -> list[tuple[float, float]]:
        """``sigma(S_theta)`` on the circle as merged closed arcs ``(lo, hi)``, ``lo`` in ``[0, 2 pi)``."""
        arcs = [(a.angle % TWO_PI, a.angle % TWO_PI) for a in self.atoms]
        if self.tail is not None:
            arcs += self.tail.accumulation()
        return _merge_arcs(arcs)

    def to_json(self) -> dict:
        return {
            "zeros": [[float(a.real), float(a.imag)] for a in self.zeros],
            "atoms": [{"angle": a.angle, "mass": a.mass} for a in self.atoms],
            "tail": None if self.tail is None else self.tail.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "InnerFunction":
        try:
            zeros = [complex(re, im) for re, im in data.get("zeros", [])]
            atoms = [Atom(float(a["angle"]), float(a["mass"])) for a in data.get("atoms", [])]
            tail = data.get("tail")
            if tail is not None:
                tail = ZeroTail(
                    kind=tail["kind"],
                    params=dict(tail.get("params", {})),
                    ac_sum_finite=tail.get("ac_sum_finite"),
                    radial_sum_finite=tail.get("radial_sum_finite"),
                    terms=int(tail.get("terms", 400)),
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad theta JSON: {exc}") from exc
        return cls(np.array(zeros, dtype=complex), tuple(atoms), tail)


def _merge_arcs(arcs):
    if not arcs:
        return []
    arcs = sorted(arcs)
    out = [list(arcs[0])]
    for lo, hi in arcs[1:]:
        if lo <= out[-1][1] + 1e-14:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    # wrap-around overlap with the first arc
    if len(out) > 1 and out[-1][1] >= out[0][0] + TWO_PI - 1e-14:
        first = out.pop(0)
        out[-1][1] = max(out[-1][1], first[1] + TWO_PI)
    if out[-1][1] - out[0][0] >= TWO_PI - 1e-14 and len(out) == 1 and out[0][1] - out[0][0] >= TWO_PI - 1e-14:
        raise MalformedInput("singular set covers the whole circle")
    return [tuple(a) for a in out]


@dataclass(frozen=True)
class Arc:
    """Open arc ``{e^{it} : t1 < t < t2}``; ``full`` marks the whole circle (no singular set)."""

    t1: float
    t2: float
    psi_offset: float = 0.0
    full: bool = False

    @property
    def mid(self) -> float:
        return 0.5 * (self.t1 + self.t2)

    @property
    def alpha1(self) -> complex:
        return complex(np.exp(1j * self.t1))

    @property
    def alpha2(self) -> complex:
        return complex(np.exp(1j * self.t2))


def _branch(spec: InnerFunction, t) -> np.ndarray:
    """A continuous branch of ``arg theta_hat(e^{it})`` built factor by factor."""
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    a = spec.all_zeros
    val = flat * (1 + a.size)
    if a.size:
        ca = np.conj(a)
        for i in range(0, flat.size, _BLOCK):
            e = np.exp(1j * flat[i : i + _BLOCK])
            val[i : i + _BLOCK] -= 2 * np.angle(1 - ca[None, :] * e[:, None]).sum(axis=1)
    for at in spec.atoms:
        u = np.mod(flat - at.angle, TWO_PI)
        val = val - at.mass / np.tan(u / 2)
    return val.reshape(t.shape)


def _psi_prime(spec: InnerFunction, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    a = spec.all_zeros
    out = np.ones_like(flat)
    if a.size:
        num = 1 - np.abs(a) ** 2
        for i in range(0, flat.size, _BLOCK):
            e = np.exp(1j * flat[i : i + _BLOCK])
            out[i : i + _BLOCK] += (num[None, :] / np.abs(e[:, None] - a[None, :]) ** 2).sum(axis=1)
    for at in spec.atoms:
        out = out + 2 * at.mass / np.abs(np.exp(1j * at.angle) - np.exp(1j * flat)) ** 2
    return out.reshape(t.shape)


def _singular_distance(spec: InnerFunction, z: np.ndarray) -> np.ndarray:
    d = np.full(z.shape, np.inf)
    for at in spec.atoms:
        d = np.minimum(d, np.abs(z - np.exp(1j * at.angle)))
    if spec.tail is not None:
        for lo, hi in spec.tail.accumulation():
            rel = np.mod(np.angle(z) - lo, TWO_PI)
            on_arc = rel <= hi - lo
            dist = np.minimum(np.abs(z - np.exp(1j * lo)), np.abs(z - np.exp(1j * hi)))
            d = np.minimum(d, np.where(on_arc, np.abs(1 - np.abs(z)), dist))
    return d


def eval_theta_hat(spec: InnerFunction, z):
    """``z theta(z)`` for ``|z| <= 1`` away from the singular support."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(np.abs(z) > 1 + 1e-12):
        raise ValueError("theta_hat is evaluated on the closed disk only")
    if np.any(_singular_distance(spec, z) < SINGULAR_GAP):
        raise TooCloseToSingularity("point is within 1e-10 of the singular support")
    out = z.copy()
    a = spec.all_zeros
    for i in range(0, z.size, _BLOCK):
        zz = z.ravel()[i : i + _BLOCK]
        if a.size:
            f = (zz[:, None] - a[None, :]) / (1 - np.conj(a)[None, :] * zz[:, None])
            out.ravel()[i : i + _BLOCK] *= np.prod(f, axis=1)
    for at in spec.atoms:
        e = np.exp(1j * at.angle)
        out = out * np.exp(-at.mass * (e + z) / (e - z))
    return complex(out[0]) if scalar else out


def make_arc(spec: InnerFunction, t1: float, t2: float, full: bool = False) -> Arc:
    """An arc with its branch constant fixed so that ``psi(mid)`` lies in ``(-pi, pi]``."""
    if not full and not t1 < t2:
        raise ValueError("need t1 < t2")
    if full:
        t2 = t1 + TWO_PI
    mid = 0.5 * (t1 + t2)
    anchor = np.angle(eval_theta_hat(spec, np.exp(1j * mid)))
    raw = float(_branch(spec, mid))
    offset = TWO_PI * round((anchor - raw) / TWO_PI)
    return Arc(float(t1), float(t2), offset, full)


def component_arcs(spec: InnerFunction) -> list[Arc]:
    """Connected components of the circle minus ``sigma(S_theta)``."""
    sing = spec.singular_arcs()
    if not sing:
        return [make_arc(spec, 0.0, TWO_PI, full=True)]
    arcs = []
    for k, (lo, hi) in enumerate(sing):
        nxt = sing[(k + 1) % len(sing)][0]
        if k + 1 == len(sing):
            nxt += TWO_PI
        if nxt > hi:
            arcs.append(make_arc(spec, hi, nxt))
    return arcs


def _check_inside(arc: Arc, t: np.ndarray):
    if arc.full:
        return
    if np.any(t <= arc.t1) or np.any(t >= arc.t2):
        raise ValueError(f"parameter outside the open arc ({arc.t1}, {arc.t2})")


def psi(arc: Arc, spec: InnerFunction, t, method: str = "branch"):
    """Continuous increasing argument of ``theta_hat(e^{it})`` on the arc.

    ``method="branch"`` sums exact continuous branches of the individual
    factors.  ``method="unwrap"`` unwraps the principal argument adaptively
    from the arc midpoint and raises :class:`UnwrapFailure` when the step
    size collapses, which signals a singularity inside the arc.
    """
    t_arr = np.asarray(t, dtype=float)
    _check_inside(arc, t_arr)
    if method == "branch":
        out = _branch(spec, t_arr) + arc.psi_offset
    elif method == "unwrap":
        out = _psi_unwrap(arc, spec, t_arr)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if t_arr.ndim == 0 else out


def psi_prime(arc: Arc, spec: InnerFunction, t):
    """``1 + sum (1-|a|^2)/|e^{it}-a|^2 + 2 sum w/|e^{is}-e^{it}|^2``, always positive."""
    t_arr = np.asarray(t, dtype=float)
    _check_inside(arc, t_arr)
    out = _psi_prime(spec, t_arr)
    return float(out) if t_arr.ndim == 0 else out


def _principal(spec, t):
    return float(np.angle(eval_theta_hat(spec, np.exp(1j * t))))


def _psi_unwrap(arc: Arc, spec: InnerFunction, t: np.ndarray, min_step: float = 1e-13,
                max_steps: int = 20000) -> np.ndarray:
    flat = t.ravel()
    out = np.empty_like(flat)
    mid = arc.mid
    anchor = _principal(spec, mid)
    order = np.argsort(flat)
    fwd = [i for i in order if flat[i] >= mid]
    bwd = [i for i in order[::-1] if flat[i] < mid]
    budget = max_steps
    for idx, sign in ((fwd, 1.0), (bwd, -1.0)):
        cur, val, arg_cur = mid, anchor, anchor
        step = (arc.t2 - arc.t1) / 64
        for i in idx:
            target = flat[i]
            while sign * (target - cur) > 0:
                budget -= 1
                if budget < 0:
                    # near an essential singularity the steps shrink without collapsing
                    raise UnwrapFailure(f"step budget exhausted near t = {cur}")
                h = min(step, abs(target - cur))
                a_half = _principal(spec, cur + sign * h / 2)
                a_full = _principal(spec, cur + sign * h)
                d1 = sign * _wrap(a_half - arg_cur)
                d2 = sign * _wrap(a_full - a_half)
                slope = float(np.max(_psi_prime(spec, np.array([cur, cur + sign * h / 2, cur + sign * h])))) * h
                if -1e-12 <= d1 < math.pi / 2 and -1e-12 <= d2 < math.pi / 2 and slope < math.pi / 2:
                    val += sign * (d1 + d2)
                    cur = cur + sign * h if h < abs(target - cur) else target
                    arg_cur = a_full
                    step = min(1.5 * step, (arc.t2 - arc.t1) / 16)
                else:
                    step = h / 2
                    if step < min_step:
                        raise UnwrapFailure(f"step collapsed near t = {cur}")
            out[i] = val
    return out.reshape(t.shape)


def _wrap(x: float) -> float:
    return (x + math.pi) % TWO_PI - math.pi


def _upper(arc: Arc, t: np.ndarray) -> np.ndarray:
    return t + TWO_PI if arc.full else np.full_like(t, arc.t2)


def _safe_newton(residual, lo, hi, maxiter: int = 200, xtol: float = 1e-15):
    """Vectorized Newton with bisection fallback for increasing ``f`` with ``f(lo) <= 0 <= f(hi)``.

    ``residual(x, idx)`` returns ``(f, f')`` at ``x`` for the entries ``idx``.
    A bisection step is taken when the Newton step leaves the bracket or
    would not halve the step before last.  Converged entries are frozen.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x = 0.5 * (lo + hi)
    dx_old = hi - lo
    dx = dx_old.copy()
    act = np.arange(x.size)
    for _ in range(maxiter):
        if act.size == 0:
            break
        xa = x[act]
        f, df = residual(xa, act)
        la = np.where(f < 0, xa, lo[act])
        ha = np.where(f > 0, xa, hi[act])
        xn = xa - f / df
        bad = ~((xn > la) & (xn < ha)) | (np.abs(2 * f) > np.abs(dx_old[act] * df))
        xn = np.where(bad, 0.5 * (la + ha), xn)
        xn = np.where(f == 0, xa, xn)
        lo[act], hi[act] = la, ha
        dx_old[act], dx[act] = dx[act], xn - xa
        x[act] = xn
        act = act[np.abs(xn - xa) > xtol * np.maximum(1.0, np.abs(xn))]
    return x


def _bracket_levels(arc, spec, target, lo: float, hi: float, rounds: int = 60):
    """Tight brackets inside ``[lo, hi]`` for every level.

    ``psi`` is sampled on a grid that is split wherever it rises by more
    than ``pi``, so each bracket holds at most one level.
    """
    k = 2.0 ** -np.arange(1, 53)
    grid = np.unique(lo + (hi - lo) * np.concatenate([np.linspace(0, 1, 257), k, 1 - k]))
    grid[-1] = hi
    vals = _branch(spec, grid) + arc.psi_offset
    for _ in range(rounds):
        wide = np.flatnonzero(np.diff(vals) > math.pi)
        if wide.size == 0:
            break
        mid = 0.5 * (grid[wide] + grid[wide + 1])
        mid = mid[(mid > grid[wide]) & (mid < grid[wide + 1])]
        if mid.size == 0:
            break
        grid = np.concatenate([grid, mid])
        vals = np.concatenate([vals, _branch(spec, mid) + arc.psi_offset])
        order = np.argsort(grid)
        grid, vals = grid[order], vals[order]
    j = np.clip(np.searchsorted(vals, target), 1, grid.size - 1)
    return grid[j - 1], grid[j]


def _solve_levels(arc, spec, target, lo, hi, maxiter: int = 200):
    """Solve ``psi(x) = target`` elementwise given ``psi(lo) <= target <= psi(hi)``."""
    target = np.asarray(target, dtype=float)

    def residual(x, idx):
        return _branch(spec, x) + arc.psi_offset - target[idx], _psi_prime(spec, x)

    return _safe_newton(residual, lo, hi, maxiter)


def _tau_array(arc: Arc, spec: InnerFunction, t: np.ndarray) -> np.ndarray:
    """``tau`` elementwise, NaN where no next solution exists in the arc."""
    t = np.asarray(t, dtype=float)
    target = _branch(spec, t) + arc.psi_offset + TWO_PI
    up = _upper(arc, t)
    k = np.arange(1, 41, dtype=float)
    cand = t[:, None] + (up - t)[:, None] * (1 - 2.0 ** -k)[None, :]
    vals = _branch(spec, cand) + arc.psi_offset
    ok = vals >= target[:, None]
    has = ok.any(axis=1)
    first = np.argmax(ok, axis=1)
    hi = cand[np.arange(t.size), first]
    lo = np.where(first > 0, cand[np.arange(t.size), np.maximum(first - 1, 0)], t)
    out = np.full(t.shape, np.nan)
    if has.any():
        out[has] = _solve_levels(arc, spec, target[has], lo[has], hi[has])
    return out


def tau(arc: Arc, spec: InnerFunction, t):
    """Smallest ``s > t`` in the arc with ``theta_hat(e^{is}) = theta_hat(e^{it})``.

    Equivalently ``psi(s) = psi(t) + 2 pi``.  Raises :class:`NoNextSolution`
    when ``psi`` does not gain ``2 pi`` before the end of the arc.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    _check_inside(arc, t_arr)
    if arc.full and spec.all_zeros.size == 0 and not spec.atoms:
        raise NoNextSolution("theta_hat = z has no second solution")
    s = _tau_array(arc, spec, t_arr)
    if np.isnan(s).any():
        bad = t_arr[np.isnan(s)][0]
        raise NoNextSolution(f"no next solution for t = {bad}")
    resid = np.abs(_branch(spec, s) - _branch(spec, t_arr) - TWO_PI)
    if resid.max() >= 1e-10:
        raise NoNextSolution(f"level solve residual {resid.max():.3g}")
    return float(s[0]) if np.ndim(t) == 0 else s


def dilation_eigenvalues_on_arc(arc: Arc, spec: InnerFunction, lam, endpoint_margin: float = 1e-6,
                                max_count: int = 10 ** 6) -> np.ndarray:
    """All ``t`` in the arc with ``theta_hat(e^{it}) = lam``, increasing.

    For the full circle the angles are reduced to ``[0, 2 pi)``.  On an open
    arc, solutions closer than ``endpoint_margin`` to an endpoint are not
    enumerated (there may be infinitely many there).
    """
    lam = complex(lam)
    c = math.atan2(lam.imag, lam.real)
    if arc.full:
        n = spec.all_zeros.size + 1
        lo_t, hi_t = arc.t1, arc.t1 + TWO_PI
        p_lo = float(_branch(spec, lo_t)) + arc.psi_offset
        k0 = math.ceil((p_lo - c) / TWO_PI)
        targets = c + TWO_PI * (k0 + np.arange(n))
        x = _solve_levels(arc, spec, targets, *_bracket_levels(arc, spec, targets, lo_t, hi_t))
        return np.sort(np.mod(x, TWO_PI))
    lo_t, hi_t = arc.t1 + endpoint_margin, arc.t2 - endpoint_margin
    if lo_t >= hi_t:
        return np.zeros(0)
    p_lo = float(_branch(spec, lo_t)) + arc.psi_offset
    p_hi = float(_branch(spec, hi_t)) + arc.psi_offset
    k_lo = math.ceil((p_lo - c) / TWO_PI)
    k_hi = math.floor((p_hi - c) / TWO_PI)
    count = k_hi - k_lo + 1
    if count <= 0:
        return np.zeros(0)
    if count > max_count:
        raise ValueError(f"{count} solutions exceed max_count; increase endpoint_margin")
    targets = c + TWO_PI * np.arange(k_lo, k_hi + 1)
    x = _solve_levels(arc, spec, targets, *_bracket_levels(arc, spec, targets, lo_t, hi_t))
    return np.sort(x)


def _line_intersection(p1, p2, q1, q2):
    d1, d2 = p2 - p1, q2 - q1
    den = (np.conj(d1) * d2).imag
    s = (np.conj(q1 - p1) * d2).imag / den
    return p1 + s * d1


def _chords(arc, spec, t):
    s = _tau_array(arc, spec, t)
    return np.exp(1j * t), np.exp(1j * s), s


def envelope_boundary(arc: Arc, spec: InnerFunction, grid, h: float = 1e-3) -> np.ndarray:
    """Points of ``dW(S_theta)`` facing the arc, as the envelope of the chords ``L(t)``.

    ``L(t)`` joins ``e^{it}`` and ``e^{i tau(t)}``.  Each envelope point is the
    intersection of neighbouring chords ``L(t - h)`` and ``L(t + h)``,
    Richardson-extrapolated over ``h`` and ``h/2``.  Where ``t - h`` leaves the
    domain of ``tau``, the one-sided pair ``L(t)``, ``L(t + h)`` is used.
    """
    t = np.atleast_1d(np.asarray(grid, dtype=float))
    _check_inside(arc, t)
    a0, b0, s0 = _chords(arc, spec, t)
    if np.isnan(s0).any():
        raise NoNextSolution("grid point outside the domain of tau")
    if np.any(np.abs(a0 - b0) < 1e-12):
        raise DegenerateChord("chord endpoints coincide")

    def shifted(dt):
        tt = t + dt
        inside = np.ones(t.shape, bool) if arc.full else (tt > arc.t1) & (tt < arc.t2)
        a = np.full(t.shape, np.nan, complex)
        b = np.full(t.shape, np.nan, complex)
        if inside.any():
            a[inside], b[inside], s = _chords(arc, spec, tt[inside])
            b[inside] = np.where(np.isnan(s), np.nan, b[inside])
        return a, b

    def meet(x, y):
        return _line_intersection(x[0], x[1], y[0], y[1])

    lines = {dt: shifted(dt) for dt in (-h, -h / 2, h / 2, h)}
    sym = (4 * meet(lines[-h / 2], lines[h / 2]) - meet(lines[-h], lines[h])) / 3
    fwd = 2 * meet((a0, b0), lines[h / 2]) - meet((a0, b0), lines[h])
    out = np.where(np.isnan(sym), fwd, sym)
    if np.isnan(out).any():
        raise NoNextSolution("envelope needs tau at t + h")
    return out


def envelope_point(arc: Arc, spec: InnerFunction, t) -> np.ndarray:
    """Closed-form envelope point from ``tau'(t) = psi'(t) / psi'(tau(t))``.

    With ``phi = (t + tau)/2`` and ``delta = (tau - t)/2`` the chord is the
    support line at angle ``phi`` with offset ``cos(delta)``, and the
    boundary point is ``e^{i phi} (cos delta - i sin delta (tau' - 1)/(tau' + 1))``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = np.atleast_1d(tau(arc, spec, t))
    dtau = _psi_prime(spec, t) / _psi_prime(spec, s)
    phi = 0.5 * (t + s)
    delta = 0.5 * (s - t)
    return np.exp(1j * phi) * (np.cos(delta) - 1j * np.sin(delta) * (dtau - 1) / (dtau + 1))


def envelope_samples(arc: Arc, spec: InnerFunction, count: int):
    """Envelope points at ``count`` uniform interior parameters, dropping those outside the domain of ``tau``."""
    span = TWO_PI if arc.full else arc.t2 - arc.t1
    t = arc.t1 + span * (np.arange(count) + 0.5) / count
    t = t[np.isfinite(_tau_array(arc, spec, t))]
    if t.size == 0:
        return t, np.zeros(0, dtype=complex)
    return t, envelope_point(arc, spec, t)


def envelope_region(spec: InnerFunction, phi_samples: int = 2048) -> ConvexRegion:
    """``W(S_theta)`` for a finite Blaschke product from its support chords.

    For every grid angle ``phi`` the chord with normal angle ``phi`` is found
    by solving ``(t + tau(t))/2 = phi``; its offset ``cos((tau - t)/2)`` is the
    support value.  The boundary polyline holds the chord envelope points.
    """
    if not spec.is_finite_blaschke or spec.degree == 0:
        raise ValueError("envelope_region needs a finite Blaschke product of degree >= 1")
    arc = make_arc(spec, 0.0, TWO_PI, full=True)
    phi = phi_grid(phi_samples)

    def mid_angle(t):
        return 0.5 * (t + _tau_array(arc, spec, t))

    m0 = float(mid_angle(np.array([0.0]))[0])
    target = m0 + np.mod(phi - m0, TWO_PI)

    def residual(x, idx):
        s = _tau_array(arc, spec, x)
        return 0.5 * (x + s) - target[idx], 0.5 * (1 + _psi_prime(spec, x) / _psi_prime(spec, s))

    x = _safe_newton(residual, np.zeros(phi.size), np.full(phi.size, TWO_PI))
    s = _tau_array(arc, spec, x)
    h = np.cos(0.5 * (s - x))
    return ConvexRegion(phi, h, envelope_point(arc, spec, x), None)


def singular_support(spec: InnerFunction, phi) -> np.ndarray:
    """Support function of the convex hull of ``sigma(S_theta)`` on the circle (``-inf`` if empty)."""
    phi = np.asarray(phi, dtype=float)
    h = np.full(phi.shape, -np.inf)
    for lo, hi in spec.singular_arcs():
        rel = np.mod(phi - lo, TWO_PI)
        inside = rel <= hi - lo
        ends = np.maximum(np.cos(phi - lo), np.cos(phi - hi))
        h = np.maximum(h, np.where(inside, 1.0, ends))
    return h


def _circle_support(angles: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Support function of the hull of ``exp(i angles)``: cosine of the distance to the nearest angle."""
    if angles.size == 0:
        return np.full(phi.shape, -np.inf)
    t = np.sort(np.mod(angles, TWO_PI))
    k = np.searchsorted(t, phi)
    d = np.minimum(np.abs(_wrap_arr(phi - t[k % t.size])), np.abs(_wrap_arr(phi - t[k - 1])))
    return np.cos(d)


def _wrap_arr(x):
    return (x + math.pi) % TWO_PI - math.pi


def model_region(spec: InnerFunction, phi_samples: int = 2048, lam_samples: int = 360,
                 endpoint_margin: float = 1e-3) -> ConvexRegion:
    """Closure of ``W(S_theta)`` as the intersection of ``W(U_lam)`` over a grid of ``lam``.

    The spectrum of ``U_lam`` is ``sigma(S_theta)`` on the circle together with
    the solutions of ``theta_hat = lam`` on the component arcs.  Solutions
    within ``endpoint_margin`` of a singular endpoint are dropped; they move
    the support function by at most about that margin.
    """
    phi = phi_grid(phi_samples)
    arcs = component_arcs(spec)
    h_sing = singular_support(spec, phi)
    regions = []
    for mu in TWO_PI * np.arange(lam_samples) / lam_samples:
        lam = np.exp(1j * mu)
        eig = [dilation_eigenvalues_on_arc(a, spec, lam, endpoint_margin) for a in arcs]
        h = np.maximum(h_sing, _circle_support(np.concatenate(eig), phi))
        regions.append(region_from_support(phi, h))
    return intersect_regions(regions)


class Verdict(str, enum.Enum):
    SMOOTH_UNBOUNDED = "SMOOTH_UNBOUNDED"
    CORNER_NO_SEGMENT = "CORNER_NO_SEGMENT"
    CORNER_WITH_SEGMENT = "CORNER_WITH_SEGMENT"
    FULL_CHORD = "FULL_CHORD"


@dataclass(frozen=True)
class EndpointClass:
    endpoint: float
    verdict: Verdict
    diagnostics: dict

    def to_json(self) -> dict:
        return {"endpoint": self.endpoint % TWO_PI, "verdict": self.verdict.value,
                "diagnostics": self.diagnostics}


class FullChord(NamedTuple):
    one_to_one: bool
    increase: float
    single_point: bool


def _cauchy_finite(terms: np.ndarray) -> bool | None:
    """Crude convergence guess from the partial-sum increments over dyadic blocks."""
    n = terms.size
    if n < 16:
        return None
    s = np.cumsum(terms)
    q = n // 4
    inc1 = s[2 * q - 1] - s[q - 1]
    inc2 = s[4 * q - 1] - s[2 * q - 1]
    if inc1 <= 0:
        return True
    return bool(inc2 < 0.75 * inc1)


def _endpoint_sums(arc: Arc, spec: InnerFunction, which: str):
    if which not in ("left", "right"):
        raise ValueError("which must be 'left' or 'right'")
    if arc.full:
        raise ValueError("the full circle has no endpoints")
    zeta = arc.t1 if which == "left" else arc.t2
    side = "above" if which == "left" else "below"
    z = np.exp(1j * zeta)
    a = spec.zeros
    radial = float(np.sum((1 - np.abs(a)) / np.abs(z - a)))
    ac = float(np.sum((1 - np.abs(a) ** 2) / np.abs(z - a) ** 2))
    diag = {"finite_zero_radial_sum": radial, "finite_zero_ac_sum": ac}
    radial_finite = ac_finite = True
    unbounded = False
    for at in spec.atoms:
        if _same_angle(at.angle, zeta):
            radial_finite = ac_finite = False
            unbounded = True
            diag["atom_at_endpoint"] = at.mass
        else:
            d = abs(np.exp(1j * at.angle) - z)
            radial += at.mass / d
            ac += at.mass / d ** 2
    if spec.tail is not None:
        tz = spec.tail.zeros()
        rt = (1 - np.abs(tz)) / np.abs(z - tz)
        at_ = (1 - np.abs(tz) ** 2) / np.abs(z - tz) ** 2
        sides = spec.tail.approach_sides(zeta)
        diag["tail_radial_partial_sum"] = float(rt.sum())
        diag["tail_ac_partial_sum"] = float(at_.sum())
        if sides:
            if spec.tail.ac_sum_finite is None or spec.tail.radial_sum_finite is None:
                raise UndeclaredTailVerdict("tail accumulates at the endpoint but has no declared verdicts")
            num_r, num_ac = _cauchy_finite(rt), _cauchy_finite(at_)
            diag["tail_radial_numeric_finite"] = num_r
            diag["tail_ac_numeric_finite"] = num_ac
            diag["tail_declared_agrees"] = (
                (num_r is None or num_r == spec.tail.radial_sum_finite)
                and (num_ac is None or num_ac == spec.tail.ac_sum_finite)
            )
            diag["tail_approach"] = sorted(sides)
            radial_finite &= bool(spec.tail.radial_sum_finite)
            ac_finite &= bool(spec.tail.ac_sum_finite)
            if side in sides or "radial" in sides:
                unbounded = True
        radial += float(rt.sum())
        ac += float(at_.sum())
    diag["radial_sum"] = radial if radial_finite else math.inf
    diag["ac_sum"] = ac if ac_finite else math.inf
    diag["radial_sum_finite"] = radial_finite
    diag["ac_sum_finite"] = ac_finite
    if unbounded or not radial_finite:
        v = Verdict.SMOOTH_UNBOUNDED
    elif not ac_finite:
        v = Verdict.CORNER_NO_SEGMENT
    else:
        v = Verdict.CORNER_WITH_SEGMENT
    return zeta, v, diag


def full_chord_check(arc: Arc, spec: InnerFunction, eps: float = 1e-12) -> FullChord:
    """Whether ``theta_hat`` is one-to-one on the arc (total ``psi`` increase at most ``2 pi``).

    Then the chord ``[alpha1, alpha2]`` lies in the boundary of ``W(S_theta)``;
    it meets ``W(S_theta)`` in exactly one point when both endpoints carry an
    angular derivative (``single_point``).
    """
    if arc.full:
        inc = float(_branch(spec, arc.t1 + TWO_PI) - _branch(spec, arc.t1))
        return FullChord(inc <= TWO_PI + 1e-8, inc, False)
    left = _endpoint_sums(arc, spec, "left")[1]
    right = _endpoint_sums(arc, spec, "right")[1]
    if Verdict.SMOOTH_UNBOUNDED in (left, right):
        return FullChord(False, math.inf, False)
    span = arc.t2 - arc.t1
    inc = float(_branch(spec, arc.t2 - eps * span) - _branch(spec, arc.t1 + eps * span))
    one = inc <= TWO_PI + 1e-8
    both = left == right == Verdict.CORNER_WITH_SEGMENT
    return FullChord(one, inc, bool(one and both))


def classify_endpoint(arc: Arc, spec: InnerFunction, which: str) -> EndpointClass:
    """Boundary behaviour of ``W(S_theta)`` at an endpoint of a component arc.

    * radial sum divergent, an atom at the endpoint, or zeros accumulating
      from inside the arc: ``psi`` is unbounded there and the boundary is
      smooth (``SMOOTH_UNBOUNDED``);
    * radial sum finite but angular-derivative sum divergent: a corner
      without a boundary segment (``CORNER_NO_SEGMENT``);
    * angular-derivative sum finite: a corner from which a boundary segment
      leaves (``CORNER_WITH_SEGMENT``);
    * ``theta_hat`` one-to-one on the whole arc overrides all of these
      (``FULL_CHORD``).
    """
    zeta, verdict, diag = _endpoint_sums(arc, spec, which)
    fc = full_chord_check(arc, spec)
    diag["psi_increase"] = fc.increase
    if fc.one_to_one:
        verdict = Verdict.FULL_CHORD
        diag["chord_single_point"] = fc.single_point
    return EndpointClass(float(zeta), verdict, diag)
