"""End-to-end acceptance checks.  Each test records one PASS/FAIL line."""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from nrange.dilation import dilation_with_eigenvalues, eigenvalue_multiplicity
from nrange.inner import (
    InnerFunction,
    Verdict,
    ZeroTail,
    classify_endpoint,
    component_arcs,
    envelope_boundary,
    envelope_region,
    eval_theta_hat,
    full_chord_check,
    make_arc,
    model_region,
    psi,
    psi_prime,
    tau,
)
from nrange.model_matrix import build_model_matrix, divisor_inclusion_check, poncelet_check
from nrange.numrange import (
    corner_defect,
    distance_to_boundary,
    hausdorff,
    phi_grid,
    range_region,
    region_from_points,
    support_function,
)
from nrange.sampling import random_contraction, random_unimodular, random_zeros
from nrange.sweep import dilation_sweep

TWO_PI = 2 * np.pi


def record(number: int, name: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} ({detail})"
    ACCEPTANCE.append(line)
    print(line)


def _split(n: int, rng) -> list[int]:
    # random composition of n into positive parts
    cuts = sorted(rng.choice(np.arange(1, n), size=rng.integers(0, n), replace=False)) if n > 1 else []
    edges = [0, *cuts, n]
    return [b - a for a, b in zip(edges, edges[1:])]


def test_dilation_correctness():
    rng = np.random.default_rng(1)
    worst_u = worst_c = 0.0
    missing = 0
    start = time.perf_counter()
    for _ in range(200):
        dim = int(rng.integers(2, 9))
        n = int(rng.integers(1, min(3, dim) + 1))
        T = random_contraction(dim, n, rng)
        mults = _split(n, rng)
        lams = random_unimodular(len(mults), rng)
        dil = dilation_with_eigenvalues(T, list(zip(lams, mults)))
        worst_u = max(worst_u, dil.unitarity_residual())
        worst_c = max(worst_c, dil.compression_residual(T))
        missing += sum(eigenvalue_multiplicity(dil.U, lam) < m for lam, m in zip(lams, mults))
    elapsed = time.perf_counter() - start
    ok = worst_u <= 1e-9 and worst_c <= 1e-9 and missing == 0 and elapsed < 10
    record(1, "dilation correctness", ok,
           f"unitarity {worst_u:.1e}, compression {worst_c:.1e}, missing eigenvalues {missing}, {elapsed:.1f}s")
    assert ok


def test_intersection_formula():
    rng = np.random.default_rng(2)
    worst_gap, worst_ratio = 0.0, np.inf
    start = time.perf_counter()
    for _ in range(20):
        T = random_contraction(int(rng.integers(2, 7)), 1, rng)
        g1 = dilation_sweep(T, 720, 2048).gap
        g2 = dilation_sweep(T, 1440, 2048).gap
        worst_gap = max(worst_gap, g1)
        worst_ratio = min(worst_ratio, g1 / g2)
    elapsed = time.perf_counter() - start
    ok = worst_gap <= 2e-3 and worst_ratio >= 2 and elapsed < 60
    record(2, "intersection formula", ok,
           f"max gap {worst_gap:.2e} at 720, min shrink {worst_ratio:.2f}x on doubling, {elapsed:.1f}s")
    assert ok


def test_poncelet_tangency():
    rng = np.random.default_rng(3)
    excess = gap = 0.0
    start = time.perf_counter()
    for degree in range(2, 7):
        mm = build_model_matrix(random_zeros(degree, rng, max_modulus=0.8))
        for lam in random_unimodular(100, rng):
            rep = poncelet_check(mm, lam)
            excess = max(excess, rep.support_excess)
            gap = max(gap, rep.tangency_gap)
    elapsed = time.perf_counter() - start
    ok = excess <= 1e-6 and gap <= 1e-6 and elapsed < 30
    record(3, "Poncelet tangency", ok, f"support excess {excess:.1e}, tangency gap {gap:.1e}, {elapsed:.1f}s")
    assert ok


def test_envelope_matches_matrix_model():
    rng = np.random.default_rng(4)
    worst_region = worst_points = 0.0
    for _ in range(10):
        zeros = random_zeros(int(rng.integers(1, 7)), rng, max_modulus=0.8)
        spec = InnerFunction(zeros)
        mm = build_model_matrix(zeros)
        ref = range_region(mm.matrix, 2048)
        worst_region = max(worst_region, hausdorff(envelope_region(spec, 2048), ref))
        arc = make_arc(spec, 0.0, TWO_PI, full=True)
        t = np.sort(rng.uniform(0, TWO_PI, 200))
        pts = envelope_boundary(arc, spec, t)
        normal = 0.5 * (t + tau(arc, spec, t))
        h, _ = support_function(mm.matrix, normal)
        worst_points = max(worst_points, np.max(np.abs(h - (np.exp(-1j * normal) * pts).real)))
    ok = worst_region <= 1e-6 and worst_points <= 1e-6
    record(4, "envelope vs matrix model", ok,
           f"region Hausdorff {worst_region:.1e}, envelope point offset {worst_points:.1e}")
    assert ok


def test_analytic_fixtures():
    disk_err = 0.0
    phi = phi_grid(2048)
    for m in range(1, 7):
        env = envelope_region(InnerFunction(np.zeros(m)), 2048)
        disk_err = max(disk_err, np.max(np.abs(env.h - np.cos(np.pi / (m + 1)))))
        mat = range_region(build_model_matrix(np.zeros(m)).matrix, 2048)
        disk_err = max(disk_err, np.max(np.abs(mat.h - np.cos(np.pi / (m + 1)))))
    assert env.phi.shape == phi.shape
    margin_err = 0.0
    for m in range(2, 8):
        rep = divisor_inclusion_check(build_model_matrix(np.zeros(m)), np.zeros(m - 1))
        margin_err = max(margin_err, abs(rep.margin - (np.cos(np.pi / (m + 1)) - np.cos(np.pi / m))))
    ok = disk_err <= 1e-6 and margin_err <= 1e-6
    record(5, "analytic fixtures", ok, f"disk radius error {disk_err:.1e}, divisor margin error {margin_err:.1e}")
    assert ok


def _random_spec(rng):
    zeros = 0.9 * np.sqrt(rng.uniform(size=rng.integers(0, 5))) * np.exp(2j * np.pi * rng.uniform(size=1))
    zeros = zeros * np.exp(2j * np.pi * rng.uniform(size=zeros.size))
    atoms = tuple((float(s), float(w)) for s, w in zip(rng.uniform(0, TWO_PI, rng.integers(0, 3)),
                                                        rng.uniform(0.1, 2.0, 3)))
    return InnerFunction(zeros, atoms)


def test_psi_machinery():
    rng = np.random.default_rng(6)
    worst_rel = worst_tau = 0.0
    min_slope = np.inf
    pairs = 0
    while pairs < 10_000:
        spec = _random_spec(rng)
        for arc in component_arcs(spec):
            span = arc.t2 - arc.t1
            t = arc.t1 + span * rng.uniform(0.05, 0.95, 100)
            # stencil must resolve the local scale near atoms at the arc ends
            h = np.minimum(1e-3, 0.02 * np.minimum(t - arc.t1, arc.t2 - t))
            stencil = [psi(arc, spec, t + k * h) for k in (-2, -1, 1, 2)]
            fd = (stencil[0] - 8 * stencil[1] + 8 * stencil[2] - stencil[3]) / (12 * h)
            d = psi_prime(arc, spec, t)
            worst_rel = max(worst_rel, np.max(np.abs(fd - d) / d))
            grid = np.linspace(arc.t1 + 1e-3 * span, arc.t2 - 1e-3 * span, 400)
            min_slope = min(min_slope, psi_prime(arc, spec, grid).min(), np.diff(psi(arc, spec, grid)).min())
            for tt in t[:10]:
                try:
                    s = tau(arc, spec, tt)
                except Exception:
                    continue
                a, b = eval_theta_hat(spec, np.exp(1j * s)), eval_theta_hat(spec, np.exp(1j * tt))
                worst_tau = max(worst_tau, abs(a - b))
            pairs += t.size
    ok = worst_rel <= 1e-6 and worst_tau <= 1e-8 and min_slope > 0
    record(6, "psi machinery", ok,
           f"{pairs} pairs, psi' rel err {worst_rel:.1e}, tau residual {worst_tau:.1e}, min slope {min_slope:.2e}")
    assert ok


def test_boundary_geometry():
    rng = np.random.default_rng(7)
    fixed = [[0.0, 0.5], [0.0, 0.5, -1 / 3], [0, 0, 0]]
    sets = fixed + [random_zeros(d, rng, max_modulus=0.8) for d in range(2, 7) for _ in range(2)]
    min_margin = np.inf
    interior_corners = 0
    for zeros in sets:
        S = build_model_matrix(zeros).matrix
        fine = range_region(S, 2048)
        coarse = range_region(S, 1024)
        for z in np.linalg.eigvals(S):
            min_margin = min(min_margin, distance_to_boundary(fine, z))
        interior_corners += sum(c.inside_disk for c in corner_defect(coarse, fine))
    ok = min_margin > 1e-3 and interior_corners == 0
    record(7, "boundary geometry", ok,
           f"{len(sets)} model matrices, min eigenvalue margin {min_margin:.3f}, interior corners {interior_corners}")
    assert ok


def test_classification_fixtures():
    atom = InnerFunction(atoms=((0.0, 1.0),))
    v_atom = classify_endpoint(component_arcs(atom)[0], atom, "left").verdict

    def tail(p, q, ac, radial):
        t = ZeroTail("custom", {"angle": 0.0, "radial_power": p, "angular_power": q, "side": "below"},
                     ac_sum_finite=ac, radial_sum_finite=radial)
        spec = InnerFunction(tail=t)
        return classify_endpoint(component_arcs(spec)[0], spec, "left").verdict

    v_seg = tail(4, 1, True, True)
    v_noseg = tail(3, 1, False, True)

    half = ZeroTail("arc_dyadic", {"lo": np.pi, "hi": TWO_PI, "eps": 0.05}, ac_sum_finite=True, radial_sum_finite=True)
    spec = InnerFunction(tail=half)
    upper = component_arcs(spec)[0]
    verdicts = {classify_endpoint(upper, spec, w).verdict for w in ("left", "right")}
    phi = phi_grid(2048)
    region = model_region(spec, 2048, 360)
    lower = region_from_points(np.exp(1j * np.linspace(np.pi, TWO_PI, 20001)), phi=phi)
    dist = hausdorff(region, lower)

    ok = (v_atom is Verdict.SMOOTH_UNBOUNDED and v_seg is Verdict.CORNER_WITH_SEGMENT
          and v_noseg is Verdict.CORNER_NO_SEGMENT and verdicts == {Verdict.FULL_CHORD}
          and full_chord_check(upper, spec).one_to_one and dist <= 1e-2)
    record(8, "classification fixtures", ok,
           f"{v_atom.value}/{v_seg.value}/{v_noseg.value}, upper arc {sorted(v.value for v in verdicts)}, "
           f"half-disk Hausdorff {dist:.1e}")
    assert ok
