import math

import numpy as np
import pytest

import ibrown.brown as B
import ibrown.measure as M
import ibrown.subordination as S
from ibrown.errors import OutsideOmegaError, OutsideOnlyError


def bernoulli_quartic(al, t, a):
    be = 1.0 - al
    return (
        -4 * a **4
        + 4 * t * (al - be) * a **3
        - (t * t + 4 * t - 8) * a **2
        + 2 * t * (t - 2) * (al - be) * a
        - (al - be) ** 2 * t * t
        + 4 * t
        - 4.0
    )


def test_a0_of_a_elliptic(sc):
    # a0(a) = (2s+t)/(2s) a
    assert B.a0_of_a(sc, 1.0, 1.0) == pytest.approx(1.5, abs=1e-10)
    assert B.a0_of_a(sc, 1.0, -0.4) == pytest.approx(-0.6, abs=1e-10)


def test_a0_of_a_bernoulli_center(be23):
    # (t/2)(beta - alpha) at a = 0
    assert B.a0_of_a(be23, 1.05, 0.0) == pytest.approx(-0.175, abs=1e-11)


def test_a0_of_a_symmetry(sc, un):
    for mu, t in ((sc, 1.0), (un, 0.1)):
        assert B.a0_of_a(mu, t, 0.0) == pytest.approx(0.0, abs=1e-11)


def test_a0_of_a_outside_raises(sc):
    with pytest.raises(OutsideOmegaError):
        B.a0_of_a(sc, 1.0, 2.0)


def test_bt_elliptic(sc):
    assert B.b_t(sc, 1.0, 0.0) == pytest.approx(math.sqrt(2.0), abs=1e-11)
    assert B.b_t(sc, 1.0, 1.0) == pytest.approx(
        math.sqrt(2.0) * math.sqrt(1.0 - 0.5), abs=1e-10
    )


def test_bt_bernoulli_quartic(be23):
    t, al = 1.05, 2.0 / 3.0
    for a in (-0.3, 0.0, 0.4, 0.8):
        expect = math.sqrt(bernoulli_quartic(al, t, a)) / (1.0 - a * a)
        assert B.b_t(be23, t, a) == pytest.approx(expect, abs=1e-10)


def test_bt_zero_outside(sc, be23):
    assert B.b_t(sc, 1.0, sc.support.hi + 1.0) == 0.0
    assert B.b_t(be23, 1.05, be23.support.hi + 1.0) == 0.0


def test_wt_elliptic_constant(sc):
    for a in (-1.2, -0.3, 0.0, 0.7, 1.3):
        assert B.w_t(sc, 1.0, a) == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-9)


def test_wt_bernoulli_closed_form(be23):
    t, al, be = 1.05, 2.0 / 3.0, 1.0 / 3.0
    for a in (-0.5, 0.0, 0.3, 0.77):
        expect = (1.0 / (4 * math.pi)) * (-1.0 / t + be / (a - 1) ** 2 + al / (a + 1) ** 2)
        assert B.w_t(be23, t, a) == pytest.approx(expect, abs=1e-10)


def test_wt_bernoulli_center_value(be23):
    assert B.w_t(be23, 1.05, 0.0) == pytest.approx(0.003789403407, abs=1e-9)


def test_wt_uniform_parametric_curve(un, un_profile):
    # (A_t(v), W_t(v)) parametric density: match the grid through v = b/2
    t = 0.1
    p = un_profile
    for a, b, w, flag in zip(p.grid, p.halfheight, p.density, p.flags):
        if flag != "ok" or a <= 0.0:
            continue
        v = 0.5 * b
        a0 = math.sqrt(2 * v / math.tan(2 * v / t) + 1 - v * v)
        a_param = a0 + 0.25 * t * math.log(1 - 4 * a0 / ((a0 + 1) ** 2 + v * v))
        w_param = (
            t * t
            + 4 * (t + 2) * v * v
            - t * (t + 4 * v * v) * math.cos(4 * v / t)
            - 4 * t * v * math.sin(4 * v / t)
        ) / (4 * math.pi * t * (-t * t + 8 * v * v + t * t * math.cos(4 * v / t)))
        assert a_param == pytest.approx(a, abs=1e-7)
        assert w_param == pytest.approx(w, abs=1e-7)


def test_profile_invariants(be_profile, be23):
    p = be_profile
    t = 1.05
    assert p.mass == pytest.approx(1.0, abs=1e-9)
    inner = [f == "ok" for f in p.flags]
    assert np.all(p.density[inner] > 0.0)
    assert np.all(np.diff(p.grid) > 0.0)
    # height ties to the source half-height through the boundary map
    for i in range(0, p.grid.size, 97):
        assert p.halfheight[i] == pytest.approx(
            2.0 * S.v_t(be23, t, p.a0[i]), abs=1e-9
        )
    # real parts stay strictly inside the support hull
    assert p.grid.min() > be23.support.lo
    assert p.grid.max() < be23.support.hi


def test_profile_round_trip(sc_profile, sc):
    p = sc_profile
    for i in range(0, p.grid.size, 41):
        assert S.a_t(sc, 1.0, p.a0[i]) == pytest.approx(p.grid[i], abs=1e-10)


def test_profile_vertical_mass(sc_profile):
    # 2D density integrates to 1 over the region: 2 b_t w_t along the section
    p = sc_profile
    assert p.mass == pytest.approx(1.0, abs=1e-8)


def test_profile_flags(sc_profile):
    flags = list(sc_profile.flags)
    assert flags[0] == "near_boundary" and flags[-1] == "near_boundary"
    assert flags.count("near_boundary") == 2 * len(sc_profile.omega_intervals)


def test_da0_da_exceeds_half(be_profile):
    # density positive iff da0/da > 1/2
    assert np.all(be_profile.density > 0.0)


def test_wt_matches_finite_difference_pipeline(be23, sc):
    h = 1e-6
    for mu, t, pts in ((be23, 1.05, (-0.2, 0.3)), (sc, 1.0, (0.0, 0.9))):
        for a in pts:
            da0 = (B.a0_of_a(mu, t, a + h) - B.a0_of_a(mu, t, a - h)) / (2 * h)
            w_fd = (1.0 / (2 * math.pi * t)) * (da0 - 0.5)
            assert B.w_t(mu, t, a) == pytest.approx(w_fd, abs=1e-5)


def test_classify_examples(sc):
    assert B.classify(sc, 1.0, 0.0).tag == "inside"
    assert B.classify(sc, 1.0, sc.support.hi + 1.0).tag == "outside"
    a = 0.5
    bt = B.b_t(sc, 1.0, a)
    assert B.classify(sc, 1.0, complex(a, bt)).tag == "boundary"
    assert B.classify(sc, 1.0, complex(a, -bt)).tag == "boundary"


def test_classify_margin_invariant(sc):
    # boundary tag iff |margin| <= tol
    for lam in (0.0 + 0j, 0.5 + 0.2j, 3.0 + 0j, 0.5 + 2j, complex(0.5, B.b_t(sc, 1.0, 0.5))):
        verdict = B.classify(sc, 1.0, lam)
        tol = 1e-9 * (1.0 + abs(lam))
        assert (verdict.tag == "boundary") == (abs(verdict.margin) <= tol)


def test_s_outside_harmonic(sc, be23, un):
    h = 1e-3
    cases = ((sc, 1.0, 2.0 + 0.5j), (be23, 1.05, 1.3 - 0.8j), (un, 0.1, 0.2 + 0.9j))
    for mu, t, lam in cases:
        s0 = B.s_outside(mu, t, lam)
        lap = (
            B.s_outside(mu, t, lam + h)
            + B.s_outside(mu, t, lam - h)
            + B.s_outside(mu, t, lam + 1j * h)
            + B.s_outside(mu, t, lam - 1j * h)
            - 4.0 * s0
        ) / (h * h)
        assert abs(lap) < 1e-4 * (1.0 + abs(s0))


def test_s_outside_far_field(sc):
    lam = 200.0 + 10.0j
    assert B.s_outside(sc, 1.0, lam) == pytest.approx(2.0 * math.log(abs(lam)), rel=1e-3)


def test_s_outside_conjugation(be23):
    lam = 1.4 + 0.9j
    assert B.s_outside(be23, 1.05, lam) == pytest.approx(
        B.s_outside(be23, 1.05, lam.conjugate()), abs=1e-11
    )


def test_s_outside_rejects_inside(sc):
    with pytest.raises(OutsideOnlyError):
        B.s_outside(sc, 1.0, 0.0 + 0.1j)


def test_quad_density_end_to_end(quad):
    # vanishing-density law: left region endpoint touches the support
    t = 0.25
    p = B.profile(quad, t, n_grid=64)
    assert p.mass == pytest.approx(1.0, abs=1e-6)
    (al, ar), = p.omega_intervals
    assert al == pytest.approx(0.375, abs=1e-8)  # 0 - t * int 3x^2/(0-x) dx = 3t/2
    assert np.all(p.density[1:-1] > 0.0)


def test_uniform_height_unimodal(un_profile):
    b = un_profile.halfheight
    peak = int(np.argmax(b))
    assert abs(un_profile.grid[peak]) < 0.02
    assert np.all(np.diff(b[: peak + 1]) > -1e-12)
    assert np.all(np.diff(b[peak:]) < 1e-12)
