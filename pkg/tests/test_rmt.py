import math

import numpy as np
import pytest

import ibrown.brown as B
import ibrown.maps as P
import ibrown.measure as M
import ibrown.rmt as R


def test_gue_hermitian_exact():
    h = R.sample_gue(64, 5)
    assert (h == h.conj().T).all()


def test_gue_entry_statistics():
    # per-entry variances over many draws, within 3 sigma
    n, reps = 24, 400
    diag = np.empty((reps, n))
    off = np.empty((reps, n * (n - 1) // 2), dtype=complex)
    iu = np.triu_indices(n, 1)
    for r in range(reps):
        h = R.sample_gue(n, 99, rep=r)
        diag[r] = np.diag(h).real
        off[r] = h[iu]
    m = diag.size
    assert abs(diag.mean()) < 3.0 * math.sqrt(1.0 / n / m)
    var_d = (diag **2).mean() * n
    assert abs(var_d - 1.0) < 3.0 * math.sqrt(2.0 / m)
    var_o = (np.abs(off) ** 2).mean() * n
    assert abs(var_o - 1.0) < 3.0 * math.sqrt(2.0 / off.size)


def test_gue_spectrum_semicircle():
    evs = np.linalg.eigvalsh(R.sample_gue(1500, 2))
    # empirical variance -> 1, support -> [-2, 2]
    assert evs.var() == pytest.approx(1.0, abs=0.05)
    assert abs(evs).max() < 2.3


def test_gue_n2_real_eigenvalues():
    h = R.sample_gue(2, 11)
    evs = np.linalg.eigvals(h)
    assert np.abs(evs.imag).max() < 1e-13


def test_deterministic_x_quantiles(be23, un):
    assert list(R.deterministic_x(be23, 3)) == [-1.0, 1.0, 1.0]
    assert np.allclose(R.deterministic_x(un, 4), [-0.75, -0.25, 0.25, 0.75], atol=1e-12)


def test_deterministic_x_cdf_distance(un):
    # sup distance between the empirical CDF of the diagonal and the law <= 1/n
    n = 64
    d = R.deterministic_x(un, n)
    for x in np.linspace(-1, 1, 101):
        emp = np.mean(d <= x)
        cdf = 0.5 * (x + 1.0)
        assert abs(emp - cdf) <= 1.0 / n + 1e-12


def test_simulate_reproducible(be23):
    cfg = R.SimConfig(n=50, t=1.05, reps=3, seed=123, dilation=0.05)
    c1 = R.simulate(be23, cfg)
    c2 = R.simulate(be23, cfg)
    assert np.array_equal(c1.points, c2.points)
    assert np.array_equal(c1.rep, c2.rep)
    assert c1.points.size == cfg.n * cfg.reps


def test_simulate_two_by_two_closed_form(be12):
    # eigenvalues of [[-1, c],[conj(c), 1]]*... via the quadratic formula
    cfg = R.SimConfig(n=2, t=0.7, reps=1, seed=9)
    cloud = R.simulate(be12, cfg)
    d = R.deterministic_x(be12, 2)
    h = R.sample_gue(2, 9, rep=0)
    m = np.diag(d.astype(complex)) + 1j * math.sqrt(0.7) * h
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = np.sqrt(tr * tr - 4.0 * det)
    expect = sorted([(tr + disc) / 2.0, (tr - disc) / 2.0], key=lambda z: (z.real, z.imag))
    got = sorted(cloud.points, key=lambda z: (z.real, z.imag))
    assert got == pytest.approx(expect, abs=1e-12)


def test_transpose_spectrum_invariance(be23):
    d = R.deterministic_x(be23, 40)
    h = R.sample_gue(40, 3)
    m = np.diag(d.astype(complex)) + 1j * h
    e1 = np.sort_complex(np.linalg.eigvals(m))
    e2 = np.sort_complex(np.linalg.eigvals(m.T))
    assert np.allclose(e1, e2, atol=1e-10)


def test_compare_small_cloud_fields(sc, sc_profile):
    cfg = R.SimConfig(n=40, t=1.0, reps=2, seed=1, dilation=0.05)
    cloud = R.simulate(sc, cfg)
    rep = R.compare(cloud, sc_profile, sc, 1.0)
    assert 0.0 <= rep.inside_fraction <= 1.0
    assert 0.0 <= rep.ks_marginal <= 1.0
    assert rep.n_points == 80
    assert rep.dilation == 0.05


def test_compare_rejects_mismatched_t(sc, sc_profile):
    cfg = R.SimConfig(n=10, t=0.5, reps=1, seed=1)
    cloud = R.simulate(sc, cfg)
    with pytest.raises(ValueError):
        R.compare(cloud, sc_profile, sc, 1.0)


def test_inside_fraction_improves_with_n(sc, sc_profile):
    fracs = []
    for n in (100, 400):
        cfg = R.SimConfig(n=n, t=1.0, reps=2, seed=31, dilation=0.05)
        cloud = R.simulate(sc, cfg)
        fracs.append(R.compare(cloud, sc_profile, sc, 1.0).inside_fraction)
    assert fracs[-1] >= fracs[0] - 0.02  # non-strict statistical trend


def test_hermitian_control_matches_additive_law(sc):
    cfg = R.SimConfig(n=600, t=1.0, reps=2, seed=8)
    evs = np.sort(R.simulate_hermitian(sc, cfg))
    law = P.law_additive(sc, 1.0)
    ks = R.ks_statistic(evs, law.cdf_at_u(evs))
    assert ks < 0.04
