import numpy as np
import pytest

from nrange.errors import (
    MalformedInput,
    NoNextSolution,
    TooCloseToSingularity,
    UndeclaredTailVerdict,
    UnwrapFailure,
)
from nrange.inner import (
    InnerFunction,
    Verdict,
    ZeroTail,
    classify_endpoint,
    component_arcs,
    dilation_eigenvalues_on_arc,
    envelope_boundary,
    envelope_point,
    envelope_region,
    eval_theta_hat,
    full_chord_check,
    make_arc,
    psi,
    psi_prime,
    tau,
)

TWO_PI = 2 * np.pi
HALF = InnerFunction([0.5])


def full(spec):
    return make_arc(spec, 0.0, TWO_PI, full=True)


def test_theta_hat_blaschke():
    # (z - 1/2)/(1 - z/2) at z = -1 is -1, times z = -1 gives 1
    assert eval_theta_hat(HALF, -1) == pytest.approx(1.0)
    assert eval_theta_hat(HALF, 1) == pytest.approx(1.0)
    assert eval_theta_hat(HALF, 0.5) == pytest.approx(0.0)


def test_theta_hat_atom():
    # atom of mass w at -1: theta(i) = exp(-w (-1 + i)/(-1 - i)) = exp(i w)
    w = 0.7
    spec = InnerFunction(atoms=((np.pi, w),))
    assert eval_theta_hat(spec, 1j) == pytest.approx(1j * np.exp(1j * w))
    assert eval_theta_hat(spec, 1.0) == pytest.approx(1.0)
    with pytest.raises(TooCloseToSingularity):
        eval_theta_hat(spec, -1.0)


def test_psi_prime_values():
    assert psi_prime(full(HALF), HALF, 0.0) == pytest.approx(4.0)
    assert psi_prime(full(HALF), HALF, np.pi) == pytest.approx(4 / 3)
    spec = InnerFunction(atoms=((np.pi, 0.6),))
    arc = component_arcs(spec)[0]
    # 1 + 2 w / |e^{is} - e^{it}|^2 with the points antipodal
    assert psi_prime(arc, spec, TWO_PI + 0.0) == pytest.approx(1.3)


def test_psi_matches_principal_argument(rng):
    spec = InnerFunction([0.3 + 0.4j, -0.6j], atoms=((1.0, 0.4),))
    for arc in component_arcs(spec):
        t = np.sort(rng.uniform(arc.t1 + 0.05, arc.t2 - 0.05, 50))
        p = psi(arc, spec, t)
        ang = np.angle(eval_theta_hat(spec, np.exp(1j * t)))
        np.testing.assert_allclose(np.exp(1j * p), np.exp(1j * ang), atol=1e-12)
        assert np.all(np.diff(p) > 0)


def test_unwrap_agrees_with_branch():
    spec = InnerFunction([0.5j, -0.2], atoms=((np.pi, 1.0),))
    arc = component_arcs(spec)[0]
    t = np.linspace(arc.t1 + 0.1, arc.t2 - 0.1, 9)
    np.testing.assert_allclose(psi(arc, spec, t, method="unwrap"), psi(arc, spec, t), atol=1e-10)


def test_unwrap_detects_singularity():
    spec = InnerFunction(atoms=((np.pi, 1.0),))
    wrong = make_arc(spec, 2.0, 4.0)
    with pytest.raises(UnwrapFailure):
        psi(wrong, spec, 3.5, method="unwrap")


def test_psi_outside_arc():
    spec = InnerFunction(atoms=((0.0, 1.0),))
    arc = component_arcs(spec)[0]
    with pytest.raises(ValueError):
        psi(arc, spec, arc.t2 + 0.1)


def test_tau_closed_forms():
    assert tau(full(HALF), HALF, 0.0) == pytest.approx(np.pi)
    assert tau(full(HALF), HALF, np.pi) == pytest.approx(TWO_PI)
    cube = InnerFunction([0, 0])
    t = np.linspace(0, 5, 11)
    np.testing.assert_allclose(tau(full(cube), cube, t), t + TWO_PI / 3, atol=1e-12)


def test_tau_missing():
    with pytest.raises(NoNextSolution):
        tau(full(InnerFunction()), InnerFunction(), 0.3)
    # zeros filling the lower half circle leave theta_hat one-to-one on the upper arc
    tail = ZeroTail("arc_dyadic", {"lo": np.pi, "hi": TWO_PI, "eps": 0.05},
                    ac_sum_finite=True, radial_sum_finite=True)
    spec = InnerFunction(tail=tail)
    upper = component_arcs(spec)[0]
    with pytest.raises(NoNextSolution):
        tau(upper, spec, upper.mid)


@pytest.mark.parametrize(
    "zeros, expected",
    [([0.5], [0, np.pi]), ([0.0], [0, np.pi]), ([0.0, 0.0], [0, TWO_PI / 3, 2 * TWO_PI / 3])],
)
def test_level_sets(zeros, expected):
    spec = InnerFunction(zeros)
    got = dilation_eigenvalues_on_arc(full(spec), spec, 1.0)
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_level_set_on_arc_near_atom():
    spec = InnerFunction(atoms=((0.0, 1.0),))
    arc = component_arcs(spec)[0]
    lam = np.exp(0.4j)
    t = dilation_eigenvalues_on_arc(arc, spec, lam, endpoint_margin=1e-2)
    assert t.size > 10
    np.testing.assert_allclose(eval_theta_hat(spec, np.exp(1j * t)), lam, atol=1e-9)


def test_envelope_point_against_secants():
    spec = InnerFunction([0.3, -0.4 + 0.2j])
    arc = full(spec)
    t = np.linspace(0.1, 6.0, 25)
    np.testing.assert_allclose(envelope_point(arc, spec, t), envelope_boundary(arc, spec, t), atol=1e-7)


def test_envelope_region_disk():
    # theta_hat = z^3: W is the disk of radius cos(pi/3)
    region = envelope_region(InnerFunction([0, 0]), 256)
    np.testing.assert_allclose(region.h, 0.5, atol=1e-13)


def test_full_chord_examples():
    quad = InnerFunction([0.0])
    fc = full_chord_check(make_arc(quad, 0.0, np.pi), quad)
    assert fc.increase == pytest.approx(TWO_PI)
    assert fc.one_to_one
    fc = full_chord_check(full(InnerFunction([0, 0])), InnerFunction([0, 0]))
    assert fc.increase == pytest.approx(3 * TWO_PI)
    assert not fc.one_to_one


def test_atom_endpoint_is_smooth():
    spec = InnerFunction(atoms=((0.0, 1.0),))
    arc = component_arcs(spec)[0]
    for which in ("left", "right"):
        assert classify_endpoint(arc, spec, which).verdict is Verdict.SMOOTH_UNBOUNDED


def test_undeclared_tail():
    tail = ZeroTail("custom", {"angle": 0.0, "radial_power": 4, "angular_power": 1, "side": "below"})
    spec = InnerFunction(tail=tail)
    with pytest.raises(UndeclaredTailVerdict):
        classify_endpoint(component_arcs(spec)[0], spec, "left")


def test_tail_side_decides_smoothness():
    def verdicts(side):
        tail = ZeroTail("custom", {"angle": 0.0, "radial_power": 4, "angular_power": 1, "side": side},
                        ac_sum_finite=True, radial_sum_finite=True)
        spec = InnerFunction(tail=tail)
        arc = component_arcs(spec)[0]
        return classify_endpoint(arc, spec, "left").verdict, classify_endpoint(arc, spec, "right").verdict

    # zeros below angle 0 sit inside the arc near its right end
    assert verdicts("below") == (Verdict.CORNER_WITH_SEGMENT, Verdict.SMOOTH_UNBOUNDED)
    assert verdicts("above") == (Verdict.SMOOTH_UNBOUNDED, Verdict.CORNER_WITH_SEGMENT)


def test_bad_specs():
    with pytest.raises(MalformedInput):
        InnerFunction([1.0])
    with pytest.raises(MalformedInput):
        InnerFunction(atoms=((0.0, -1.0),))
    with pytest.raises(MalformedInput):
        InnerFunction(atoms=((0.0, 1.0), (TWO_PI, 1.0)))
    with pytest.raises(MalformedInput):
        ZeroTail("spiral")


def test_json_roundtrip():
    tail = ZeroTail("geometric_stolz", {"angle": 1.0, "r0": 0.5, "ratio": 0.5},
                    ac_sum_finite=False, radial_sum_finite=False)
    spec = InnerFunction([0.1 + 0.2j], atoms=((2.0, 0.3),), tail=tail)
    back = InnerFunction.from_json(spec.to_json())
    assert back.to_json() == spec.to_json()
    np.testing.assert_array_equal(back.all_zeros, spec.all_zeros)
    with pytest.raises(MalformedInput):
        InnerFunction.from_json({"zeros": [[0.1]]})
