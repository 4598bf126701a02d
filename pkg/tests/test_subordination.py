import math

import numpy as np
import pytest

import ibrown.measure as M
import ibrown.subordination as S


def elliptic_vt(s, t, a0):
    # boundary ellipse semi-axes (2s+t)/sqrt(s+t) and t/sqrt(s+t)
    aa = (2 * s + t) / math.sqrt(s + t)
    bb = t / math.sqrt(s + t)
    if abs(a0) >= aa:
        return 0.0
    return bb * math.sqrt(1.0 - (a0 / aa) ** 2)


def test_vt_elliptic_center(sc):
    assert S.v_t(sc, 1.0, 0.0) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)


def test_vt_elliptic_curve(sc):
    for a0 in (-1.8, -0.6, 0.9, 2.0):
        assert S.v_t(sc, 1.0, a0) == pytest.approx(elliptic_vt(1.0, 1.0, a0), abs=1e-11)


def test_vt_two_atoms_closed_solve(be12):
    # 1/(1+v^2) = 1/2  =>  v = 1
    assert S.v_t(be12, 2.0, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_vt_far_outside_zero(be12, un, sc):
    for mu in (be12, un, sc):
        t = 0.5
        far = mu.support.hi + math.sqrt(t) + 0.5
        assert S.v_t(mu, t, far) == 0.0


def test_vt_bounded_by_sqrt_t():
    rng = np.random.default_rng(4)
    for _ in range(10):
        xs = rng.uniform(-2, 2, 4)
        ws = rng.uniform(0.1, 1.0, 4)
        mu = M.atomic(list(zip(xs, ws)))
        t = rng.uniform(0.05, 4.0)
        for a0 in np.linspace(-3, 3, 41):
            assert S.v_t(mu, t, a0) < math.sqrt(t)


def test_vt_continuity_on_grid(un):
    t = 0.1
    xs = np.linspace(-1.2, 1.2, 401)
    vs = [S.v_t(un, t, x) for x in xs]
    jumps = np.abs(np.diff(vs))
    # half-height is continuous: jumps shrink with the grid pitch
    assert jumps.max() < 0.05


def test_lambda_region_uniform_closed_form(un):
    for t in (0.1, 0.5, 2.0):
        (lo, hi), = S.lambda_region(un, t).intervals
        assert hi == pytest.approx(math.sqrt(t + 1.0), abs=1e-10)
        assert lo == pytest.approx(-math.sqrt(t + 1.0), abs=1e-10)


def test_lambda_region_semicircle(sc):
    (lo, hi), = S.lambda_region(sc, 1.0).intervals
    assert hi == pytest.approx(3.0 / math.sqrt(2.0), abs=1e-10)


def test_lambda_region_bernoulli_islands(be12):
    t = 0.1
    ivs = S.lambda_region(be12, t).intervals
    assert len(ivs) == 2
    # sign-scan oracle: p0(.,0) - 1/t changes sign exactly at the endpoints
    for lo, hi in ivs:
        assert M.p0_zero(be12, lo - 1e-7) < 1.0 / t < M.p0_zero(be12, lo + 1e-7)
        assert M.p0_zero(be12, hi + 1e-7) < 1.0 / t < M.p0_zero(be12, hi - 1e-7)
    assert ivs[0][1] < -0.5 < 0.5 < ivs[1][0]


def test_lambda_region_endpoint_condition(be23, un):
    for mu, t in ((be23, 1.05), (un, 0.1)):
        for lo, hi in S.lambda_region(mu, t).intervals:
            for e in (lo, hi):
                val = M.p0_zero(mu, e)
                assert val <= 1.0 / t + 1e-6 * (1.0 / t)


def test_at_elliptic_scaling(sc):
    # a_t(a0) = 2s/(2s+t) a0 on the region; s = t = 1 gives 2/3
    assert S.a_t(sc, 1.0, 1.5) == pytest.approx(1.0, abs=1e-11)
    assert S.a_t(sc, 1.0, -0.9) == pytest.approx(-0.6, abs=1e-11)


def test_at_odd_symmetry(sc, un):
    for mu, t in ((sc, 1.0), (un, 0.1)):
        assert S.a_t(mu, t, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_at_bernoulli_round_trip(be23):
    # a0(a) = (t/2)(a + beta - alpha)/(1 - a^2) inverts a_t
    t, al, be = 1.05, 2.0 / 3.0, 1.0 / 3.0
    for a in (-0.4, 0.0, 0.35, 0.7):
        a0 = 0.5 * t * (a + be - al) / (1.0 - a * a)
        assert S.a_t(be23, t, a0) == pytest.approx(a, abs=1e-11)


def test_at_strictly_increasing(be23, sc):
    for mu, t in ((be23, 1.05), (sc, 1.0)):
        span = mu.support.hi + 2.0 * math.sqrt(t)
        xs = np.linspace(-span, span, 201)
        vals = []
        for x in xs:
            try:
                vals.append(S.a_t(mu, t, x))
            except Exception:
                vals.append(None)
        seq = [v for v in vals if v is not None]
        assert all(x < y for x, y in zip(seq, seq[1:]))


def test_slope_elliptic_constant(sc):
    for a0 in (-1.5, 0.0, 0.4, 2.0):
        assert S.da_t_da0(sc, 1.0, a0) == pytest.approx(2.0 / 3.0, abs=1e-10)


def test_slope_matches_finite_difference(be23, un):
    h = 1e-6
    for mu, t, pts in ((be23, 1.05, (-0.1, 0.12)), (un, 0.1, (0.2, 0.8))):
        for a0 in pts:
            fd = (S.a_t(mu, t, a0 + h) - S.a_t(mu, t, a0 - h)) / (2 * h)
            assert S.da_t_da0(mu, t, a0) == pytest.approx(fd, rel=1e-6)


def test_slope_in_open_interval(be23):
    t = 1.05
    (lo, hi), = S.lambda_region(be23, t).intervals
    for a0 in np.linspace(lo, hi, 33)[1:-1]:
        s = S.da_t_da0(be23, t, a0)
        assert 0.0 < s < 2.0


def test_h_and_j_definitions(sc):
    z = 2j
    g = M.cauchy(sc, z)
    assert S.j_t(sc, 1.0, z) == pytest.approx(z - g, abs=1e-15)
    assert S.h_t(sc, 1.0, z) == pytest.approx(z + g, abs=1e-15)
    assert S.j_t(sc, 1.0, z) == pytest.approx(1j * (1.0 + math.sqrt(2.0)), abs=1e-13)
    # J = 2z - H exactly
    assert S.j_t(sc, 1.0, z) + S.h_t(sc, 1.0, z) == pytest.approx(2 * z, abs=1e-15)


def test_j_far_field_expansion(sc, un):
    for mu in (sc, un):
        for z in (60.0 + 0j, 40j, -30 - 25j):
            expect = z - 1.0 / z
            assert S.j_t(mu, 1.0, z) == pytest.approx(expect, rel=5e-4)


def test_elliptic_boundary_parametrization(sc):
    # region boundary (sq + it sqrt(4(s+t)-q^2))/(s+t); endpoint q = 2 sqrt 2 -> sqrt 2
    s = t = 1.0
    for q in (0.5, 1.7, 2.0 * math.sqrt(2.0) - 1e-9):
        lam0 = ((2 * s + t) * q + 1j * t * math.sqrt(4 * (s + t) - q * q)) / (2 * (s + t))
        img = S.j_t(sc, t, lam0)
        expect = (s * q + 1j * t * math.sqrt(4 * (s + t) - q * q)) / (s + t)
        assert img == pytest.approx(expect, abs=1e-10)


def test_boundary_identities(sc, be23, un):
    for mu, t in ((sc, 1.0), (be23, 1.05), (un, 0.1)):
        for lo, hi in S.lambda_region(mu, t).intervals:
            for a0 in np.linspace(lo, hi, 9)[1:-1]:
                v = S.v_t(mu, t, a0)
                z = complex(a0, v)
                assert S.j_t(mu, t, z).imag == pytest.approx(2.0 * v, abs=1e-9)
                assert S.h_t(mu, t, z).imag == pytest.approx(0.0, abs=1e-9)


def test_j_inverse_elliptic_quadratic_oracle(sc):
    # for s = t = 1: J(z) = (z + sqrt(z^2-4))/2, inverse z = lam + 1/lam
    for lam in (2.0 + 0j, 1.1 + 1.3j, -0.4 - 1.6j):
        z = S.j_t_inverse(sc, 1.0, lam)
        assert z == pytest.approx(lam + 1.0 / lam, abs=1e-10)


def test_j_inverse_far_field(sc, be23):
    for mu in (sc, be23):
        lam = 25.0 + 3.0j
        z = S.j_t_inverse(mu, 1.0, lam)
        assert z == pytest.approx(lam + 1.0 / lam, rel=1e-3)


def test_j_inverse_round_trip(be23, un, sc):
    import ibrown.brown as B

    rng = np.random.default_rng(7)
    for mu, t in ((be23, 1.05), (un, 0.1), (sc, 1.0)):
        done = 0
        while done < 10:
            lam = complex(rng.uniform(-3, 3), rng.uniform(0.5, 2.5) * rng.choice([-1, 1]))
            if B.classify(mu, t, lam).tag != "outside":
                continue
            z = S.j_t_inverse(mu, t, lam)
            assert abs(S.j_t(mu, t, z) - lam) <= 1e-10 * (1 + abs(lam))
            done += 1


def test_uniform_peak_height_transcendental(un):
    # v_t(0) is the smallest positive root of 1/v = tan(v/t), below pi t/2
    t = 0.1
    lo, hi = 1e-9, math.pi * t / 2 - 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.tan(mid / t) - 1.0 / mid < 0.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    assert root < math.pi * t / 2
    assert S.v_t(un, t, 0.0) == pytest.approx(root, abs=1e-11)
