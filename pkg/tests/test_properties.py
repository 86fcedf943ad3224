"""Property-based checks on random contractions and inner functions."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from nrange.dilation import build_tilde, dilation_from_omega, dilation_with_eigenvalues, eigenvalue_multiplicity
from nrange.inner import InnerFunction, make_arc, psi, psi_prime, tau
from nrange.model_matrix import build_model_matrix
from nrange.numrange import phi_grid, range_region, support_function
from nrange.sampling import random_contraction

SETTINGS = settings(max_examples=40, deadline=None)
seeds = st.integers(0, 2**32 - 1)


def contraction(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 6))
    return random_contraction(dim, int(rng.integers(1, dim + 1)), rng), rng


@SETTINGS
@given(seeds)
def test_contraction_range_in_disk(seed):
    T, _ = contraction(seed)
    assert range_region(T, 256).h.max() <= 1 + 1e-10


@SETTINGS
@given(seeds)
def test_eigenvalues_inside_range(seed):
    T, _ = contraction(seed)
    region = range_region(T, 256)
    assert np.all(region.contains(np.linalg.eigvals(T), tol=1e-10))


@SETTINGS
@given(seeds, st.floats(0, 2 * np.pi))
def test_dilation_range_contains_range(seed, mu):
    T, rng = contraction(seed)
    tilde = build_tilde(T)
    q = np.linalg.qr(rng.normal(size=(tilde.d, tilde.d)) + 1j * rng.normal(size=(tilde.d, tilde.d)))[0]
    dil = dilation_from_omega(tilde, np.exp(1j * mu) * q)
    assert dil.unitarity_residual() < 1e-10
    assert dil.compression_residual(T) < 1e-12
    phi = phi_grid(128)
    hT, _ = support_function(T, phi)
    hU, _ = support_function(dil.U, phi)
    assert np.all(hT <= hU + 1e-10)


@SETTINGS
@given(seeds, st.floats(0, 2 * np.pi))
def test_full_multiplicity_target(seed, mu):
    T, _ = contraction(seed)
    lam = np.exp(1j * mu)
    if np.min(np.abs(np.linalg.eigvals(T) - lam)) < 1e-6:
        return
    n = build_tilde(T).d
    dil = dilation_with_eigenvalues(T, [(lam, n)])
    assert dil.unitarity_residual() < 1e-9
    assert eigenvalue_multiplicity(dil.U, lam) >= n


zero_lists = st.lists(
    st.tuples(st.floats(0, 0.85), st.floats(0, 2 * np.pi)).map(lambda p: p[0] * np.exp(1j * p[1])),
    min_size=1,
    max_size=5,
    unique_by=lambda z: (round(z.real, 6), round(z.imag, 6)),
).filter(lambda zs: min((abs(p - q) for i, p in enumerate(zs) for q in zs[:i]), default=1.0) > 0.02)


@SETTINGS
@given(zero_lists, st.lists(st.floats(0, 2 * np.pi), min_size=5, max_size=30))
def test_psi_increasing(zeros, ts):
    spec = InnerFunction(zeros)
    arc = make_arc(spec, 0.0, 2 * np.pi, full=True)
    t = np.sort(np.array(ts))
    assert np.all(psi_prime(arc, spec, t) >= 1)
    assert np.all(np.diff(psi(arc, spec, t)) >= -1e-12)


@SETTINGS
@given(zero_lists)
def test_tau_increasing(zeros):
    spec = InnerFunction(zeros)
    arc = make_arc(spec, 0.0, 2 * np.pi, full=True)
    t = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    s = tau(arc, spec, t)
    assert np.all(np.diff(s) > 0)
    assert np.all(s > t)
    np.testing.assert_allclose(psi(arc, spec, s) - psi(arc, spec, t), 2 * np.pi, atol=1e-9)


@SETTINGS
@given(zero_lists)
def test_model_matrix_spectrum(zeros):
    a = np.array(zeros)
    mm = build_model_matrix(a)
    # the Gram construction loses accuracy in proportion to cond(G)
    tol = 1e-14 * mm.condition
    ev = np.linalg.eigvals(mm.matrix)
    assert max(np.min(np.abs(ev - z)) for z in a) < max(1e-7, np.sqrt(tol))
    assert np.linalg.norm(mm.matrix, 2) <= 1 + max(1e-12, tol)
