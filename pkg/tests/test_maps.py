import math

import numpy as np
import pytest

import ibrown.brown as B
import ibrown.maps as P
import ibrown.measure as M
import ibrown.subordination as S
from ibrown.errors import OutsideLambdaError, OutsideOmegaError

from conftest import semicircle_cdf


def test_ut_boundary_agrees_with_j(sc, be23, un):
    for mu, t in ((sc, 1.0), (be23, 1.05), (un, 0.1)):
        for lo, hi in S.lambda_region(mu, t).intervals:
            for a0 in np.linspace(lo, hi, 9)[1:-1]:
                v = S.v_t(mu, t, a0)
                lam0 = complex(a0, v)
                assert P.u_t(mu, t, lam0) == pytest.approx(
                    S.j_t(mu, t, lam0), abs=1e-9
                )


def test_ut_elliptic_real_point(sc):
    assert P.u_t(sc, 1.0, 1.5 + 0j) == pytest.approx(1.0 + 0j, abs=1e-10)


def test_ut_vertical_linearity(sc):
    a0 = 0.8
    v = S.v_t(sc, 1.0, a0)
    base = P.u_t(sc, 1.0, complex(a0, 0.0))
    for frac in (0.25, 0.5, 0.9):
        out = P.u_t(sc, 1.0, complex(a0, frac * v))
        assert out.real == pytest.approx(base.real, abs=1e-12)
        assert out.imag == pytest.approx(2.0 * frac * v, abs=1e-12)
        conj = P.u_t(sc, 1.0, complex(a0, -frac * v))
        assert conj == pytest.approx(out.conjugate(), abs=1e-12)


def test_ut_outside_raises(sc):
    with pytest.raises(OutsideLambdaError):
        P.u_t(sc, 1.0, complex(0.0, 2.0))


def test_ut_inverse_round_trip(sc, be23):
    rng = np.random.default_rng(12)
    for mu, t in ((sc, 1.0), (be23, 1.05)):
        (al, ar), = B.omega_intervals(mu, t)
        count = 0
        while count < 25:
            a = rng.uniform(al, ar)
            bt = B.b_t(mu, t, a)
            if bt <= 1e-6:
                continue
            lam = complex(a, rng.uniform(-0.95, 0.95) * bt)
            back = P.u_t(mu, t, P.u_t_inverse(mu, t, lam))
            assert abs(back - lam) < 1e-10 * (1.0 + abs(lam))
            count += 1


def test_ut_inverse_elliptic_closed_form(sc):
    # (a, b) -> ((2s+t)/(2s) a, b/2)
    lam = 0.6 + 0.4j
    z = P.u_t_inverse(sc, 1.0, lam)
    assert z == pytest.approx(complex(0.9, 0.2), abs=1e-10)


def test_qt_elliptic_line(sc):
    # Q(a+ib) = ((s+t)/s) a
    assert P.q_t(sc, 1.0, 0.5 + 0.3j) == pytest.approx(1.0, abs=1e-10)
    for a in (-0.9, 0.0, 1.2):
        assert P.q_t(sc, 1.0, complex(a, 0.1)) == pytest.approx(2.0 * a, abs=1e-9)


def test_qt_ignores_imaginary_part(be23):
    t = 1.05
    a = 0.2
    bt = B.b_t(be23, t, a)
    vals = [P.q_t(be23, t, complex(a, f * bt)) for f in (0.0, 0.4, -0.8)]
    assert max(vals) - min(vals) == pytest.approx(0.0, abs=1e-13)


def test_qt_symmetric_center(sc, un):
    for mu, t in ((sc, 1.0), (un, 0.1)):
        assert P.q_t(mu, t, complex(0.0, 0.2)) == pytest.approx(0.0, abs=1e-10)


def test_qt_strictly_increasing(be23):
    t = 1.05
    (al, ar), = B.omega_intervals(be23, t)
    xs = np.linspace(al, ar, 41)[1:-1]
    vals = [P.q_t(be23, t, complex(a, 0.0)) for a in xs]
    assert all(x < y for x, y in zip(vals, vals[1:]))


def test_qt_boundary_consistency(be23, sc):
    # Q(a + i b_t(a)) = Re[H(J^{-1}(a + i b_t(a)))]
    for mu, t, pts in ((be23, 1.05, (-0.3, 0.4)), (sc, 1.0, (0.3, -0.8))):
        for a in pts:
            a0 = B.a0_of_a(mu, t, a)
            v = S.v_t(mu, t, a0)
            h = S.h_t(mu, t, complex(a0, v))
            assert P.q_t(mu, t, complex(a, 0.0)) == pytest.approx(h.real, abs=1e-8)


def test_qt_outside_raises(sc):
    with pytest.raises(OutsideOmegaError):
        P.q_t(sc, 1.0, 3.0 + 0j)


def test_circular_density_elliptic(sc):
    expect = 2.0 / (3.0 * math.pi)
    for lam0 in (0.0 + 0j, 0.5 + 0.2j, -1.2 + 0.1j):
        assert P.circular_density(sc, 1.0, lam0) == pytest.approx(expect, abs=1e-10)


def test_circular_density_total_mass(sc, be23):
    # int 2 v_t rho_t da0 = 1 over the source region
    for mu, t in ((sc, 1.0), (be23, 1.05)):
        total = 0.0
        for lo, hi in S.lambda_region(mu, t).intervals:
            xs = np.linspace(lo, hi, 4001)
            ys = []
            for a0 in xs[1:-1]:
                v = S.v_t(mu, t, a0)
                ys.append(2.0 * v * P.circular_density(mu, t, complex(a0, 0.0)))
            total += np.trapezoid([0.0] + ys + [0.0], xs)
        assert total == pytest.approx(1.0, abs=1e-4)


def test_law_additive_elliptic_is_semicircle(sc):
    # free convolution of semicircles: variance s + t
    law = P.law_additive(sc, 1.0, n_grid=1024)
    dev = max(
        abs(c - semicircle_cdf(2.0, u)) for u, c in zip(law.u[::17], law.cdf[::17])
    )
    assert dev < 1e-5
    assert law.cdf[-1] == pytest.approx(1.0, abs=1e-6)


def test_law_additive_density_identity(be23):
    # f = b_t/(2 pi t), and dQ/da = 4 pi t w_t by the chain rule
    t = 1.05
    law = P.law_additive(be23, t, n_grid=256)
    for i in range(10, law.u.size - 10, 40):
        a = law.a[i]
        assert law.f[i] == pytest.approx(B.b_t(be23, t, a) / (2 * math.pi * t), abs=1e-9)
    h = 1e-5
    for a in (-0.2, 0.25):
        dq = (P.q_t(be23, t, complex(a + h, 0)) - P.q_t(be23, t, complex(a - h, 0))) / (2 * h)
        assert dq == pytest.approx(4 * math.pi * t * B.w_t(be23, t, a), rel=1e-4)


def test_law_additive_symmetric(un):
    law = P.law_additive(un, 0.1, n_grid=256)
    mid = law.u.size // 2
    assert np.allclose(law.f[:mid], law.f[::-1][:mid], atol=1e-10)
    assert abs(law.u[0] + law.u[-1]) < 1e-10


def test_pushforward_rectangles(sc, be23):
    rep = P.pushforward_check(sc, 1.0)
    assert rep.max_discrepancy < 1e-6
    rep = P.pushforward_check(be23, 1.05)
    assert rep.max_discrepancy < 1e-5
    # the full-region rectangle carries mass 1 on both sides
    full = [
        (s, g)
        for (a1, a2, b1, b2), s, g in zip(
            rep.rectangles, rep.source_masses, rep.target_masses
        )
        if b1 < 0.0 < b2  # the two-sided bands cover the whole height
    ]
    assert sum(s for s, _ in full) == pytest.approx(1.0, abs=1e-6)
    assert sum(g for _, g in full) == pytest.approx(1.0, abs=1e-6)


def test_sample_planar_respects_region(be23, be_profile):
    pts = P.sample_planar(be23, 1.05, 4000, seed=3)
    heights = be_profile.b_interp(pts.real)
    assert np.all(np.abs(pts.imag) <= heights + 1e-9)
    # marginal of the real part matches the law CDF
    import ibrown.rmt as R

    law = P.law_additive(be23, 1.05)
    s = np.sort(pts.real)
    assert R.ks_statistic(s, law.cdf_at_a(s)) < 0.04
