"""Pushforward structure tying the three models together.

U_t carries the source region onto the planar support region, scaling
vertical segments by two; Q_t collapses vertical segments of the support
region to points of the real line; the density rho_t on the source region
is the planar law of the two-sided (rotation-invariant) perturbation, and
its Q_t-image is the law of the self-adjoint perturbation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from io import StringIO

import numpy as np

from .brown import _intervals, a0_of_a, classify, lambda_sweep
from .errors import OutsideLambdaError, OutsideOmegaError
from .measure import MeasureSpec
from .numerics import integrate_adaptive
from .subordination import DEFAULT_SCAN, a_t, at_with_slope, v_t


def u_t(mu: MeasureSpec, t: float, lam0: complex, n_scan: int = DEFAULT_SCAN) -> complex:
    """a_t(a0) + 2i b0 for a0 + i b0 in the closed source region."""
    lam0 = complex(lam0)
    a0, b0 = lam0.real, lam0.imag
    tol = 1e-9 * (1.0 + abs(lam0))
    v = v_t(mu, t, a0)
    if abs(b0) > v + tol:
        raise OutsideLambdaError(f"{lam0} is outside the closed source region")
    at = at_with_slope(mu, t, a0)[0] if v > 0.0 else a_t(mu, t, a0)
    return complex(at, 2.0 * b0)


def u_t_inverse(mu: MeasureSpec, t: float, lam: complex, n_scan: int = DEFAULT_SCAN) -> complex:
    """a0(Re lam) + i Im(lam)/2 for lam in the closed support region."""
    lam = complex(lam)
    if classify(mu, t, lam, n_scan=n_scan).tag == "outside":
        raise OutsideOmegaError(f"{lam} is outside the closed region")
    return complex(a0_of_a(mu, t, lam.real, n_scan), 0.5 * lam.imag)


def q_t(mu: MeasureSpec, t: float, lam: complex, n_scan: int = DEFAULT_SCAN) -> float:
    """2 a0(Re lam) - Re lam; constant along vertical segments."""
    lam = complex(lam)
    if classify(mu, t, lam, n_scan=n_scan).tag == "outside":
        raise OutsideOmegaError(f"{lam} is outside the closed region")
    return 2.0 * a0_of_a(mu, t, lam.real, n_scan) - lam.real


def circular_density(
    mu: MeasureSpec, t: float, lam0: complex, n_scan: int = DEFAULT_SCAN
) -> float:
    """Planar density of the rotation-invariant model at an interior source point:
    (1/(pi t)) (1 - (da_t/da0)/2), constant in Im."""
    lam0 = complex(lam0)
    a0, b0 = lam0.real, lam0.imag
    v = v_t(mu, t, a0)
    tol = 1e-9 * (1.0 + abs(lam0))
    if v <= 0.0 or abs(b0) >= v - tol:
        raise OutsideLambdaError(f"{lam0} is not strictly inside the source region")
    slope = at_with_slope(mu, t, a0)[1]
    return (1.0 / (math.pi * t)) * (1.0 - 0.5 * slope)


@dataclass(frozen=True)
class AdditiveLaw:
    """Parametric density of the self-adjoint perturbation's law.

    Sampled along the source sweep: u ascending, f = density, cdf cumulative;
    a holds the matching support-region abscissas so the same cdf doubles as
    the marginal CDF of Re under the planar law.
    """

    t: float
    u: np.ndarray
    f: np.ndarray
    a: np.ndarray
    cdf: np.ndarray

    def cdf_at_u(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.u, self.cdf, left=0.0, right=1.0)

    def cdf_at_a(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.a, self.cdf, left=0.0, right=1.0)

    def q_of_a(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.a, self.u)

    def to_csv(self) -> str:
        buf = StringIO()
        buf.write("u,f\n")
        for i in range(self.u.size):
            buf.write("%.17g,%.17g\n" % (self.u[i], self.f[i]))
        return buf.getvalue()

    def resample(self, n: int):
        """Optional uniform-u resampling by monotone interpolation; the
        parametric arrays remain the primary representation."""
        grid = np.linspace(self.u[0], self.u[-1], n)
        return grid, np.interp(grid, self.u, self.f), np.interp(grid, self.u, self.cdf)


def law_additive(
    mu: MeasureSpec, t: float, n_grid: int = 1024, n_scan: int = DEFAULT_SCAN
) -> AdditiveLaw:
    """Q_t-pushforward of the planar law: pairs (u, f) with u = 2 a0 - a_t(a0)
    and f = b_t/(2 pi t) = v_t/(pi t), plus the cumulative mass.

    u equals the boundary value of the conjugate map H_t, strictly increasing
    across the whole sweep, so the arrays are globally sorted.
    """
    omega, region = _intervals(mu, t, n_scan)
    us, fs, aas, cdfs = [], [], [], []
    acc = 0.0
    for interval in region.intervals:
        sw = lambda_sweep(mu, t, interval, n_grid)
        u = 2.0 * sw["a0"] - sw["at"]
        f = sw["v"] / (math.pi * t)
        g = np.zeros_like(sw["v"])
        g[1:-1] = (2.0 / (math.pi * t)) * sw["v"][1:-1] * (1.0 - 0.5 * sw["slope"][1:-1])
        h = sw["half"] * np.sin(sw["theta"]) * g
        dth = math.pi / (h.size - 1)
        inc = 0.5 * dth * (h[:-1] + h[1:])
        cdf = acc + np.concatenate(([0.0], np.cumsum(inc)))
        acc = cdf[-1]
        us.append(u)
        fs.append(f)
        aas.append(sw["at"])
        cdfs.append(cdf)
    u = np.concatenate(us)
    out = AdditiveLaw(
        t=t,
        u=u,
        f=np.concatenate(fs),
        a=np.concatenate(aas),
        cdf=np.concatenate(cdfs),
    )
    for arr in (out.u, out.f, out.a, out.cdf):
        arr.setflags(write=False)
    return out


def sample_planar(mu: MeasureSpec, t: float, n: int, seed: int = 0) -> np.ndarray:
    """Draw n points from the planar law using its product structure: the real
    part comes from the vertical marginal 2 b_t w_t by inverse CDF on the
    sweep grid, the imaginary part is uniform on (-b_t(a), b_t(a))."""
    law = law_additive(mu, t)
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.0, law.cdf[-1], n)
    a = np.interp(u, law.cdf, law.a)
    heights = 2.0 * math.pi * t * np.interp(a, law.a, law.f)  # b_t = 2 pi t f
    b = rng.uniform(-1.0, 1.0, n) * heights
    return a + 1j * b


@dataclass(frozen=True)
class PushforwardReport:
    """Rectangle-mass comparison between the two routes to the planar law."""

    max_discrepancy: float
    rectangles: tuple[tuple[float, float, float, float], ...]
    source_masses: tuple[float, ...]
    target_masses: tuple[float, ...]


def _edge_ladder(lo: float, hi: float, edges: tuple[float, float]) -> list[float]:
    """Breakpoints of [lo, hi] with geometric refinement toward touching
    square-root edges of the enclosing interval."""
    pts = {lo, hi}
    span = edges[1] - edges[0]
    for edge in edges:
        if abs(lo - edge) <= 1e-12 * (1.0 + abs(edge)) or abs(hi - edge) <= 1e-12 * (
            1.0 + abs(edge)
        ):
            r = span * 1e-10
            while r < span:
                for p in (edge - r, edge + r):
                    if lo < p < hi:
                        pts.add(p)
                r *= 8.0
    return sorted(pts)


def _v_crossings(mu, t, lam_iv, levels, n_probe=65):
    """Source abscissas where v_t crosses the given positive levels."""
    l, r = lam_iv
    theta = np.linspace(0.0, np.pi, n_probe)
    a0s = 0.5 * (l + r) - 0.5 * (r - l) * np.cos(theta)
    vs = np.array([v_t(mu, t, x) for x in a0s])
    hits = []
    for level in levels:
        if level <= 0.0:
            continue
        d = vs - level
        for i in range(n_probe - 1):
            if d[i] == 0.0 or (d[i] > 0.0) == (d[i + 1] > 0.0):
                continue
            xa, xb, fa = a0s[i], a0s[i + 1], d[i]
            for _ in range(60):
                xm = 0.5 * (xa + xb)
                fm = v_t(mu, t, xm) - level
                if (fm > 0.0) == (fa > 0.0):
                    xa, fa = xm, fm
                else:
                    xb = xm
            hits.append(0.5 * (xa + xb))
    return hits


def _warm_inverter(mu, t, lam_iv):
    """Newton inversion of a_t with a safeguard bracket and warm starts."""
    l, r = lam_iv
    state = {"a0": 0.5 * (l + r), "v": None}

    def invert(a):
        lo, hi = l, r
        a0 = min(max(state["a0"], l + 1e-15 * (1 + abs(l))), r - 1e-15 * (1 + abs(r)))
        at = slope = v = None
        for _ in range(80):
            at, slope, v = at_with_slope(mu, t, a0, v_hint=state["v"])
            state["v"] = v
            f = at - a
            if abs(f) <= 1e-12 * (1.0 + abs(a)):
                break
            if f > 0.0:
                hi = a0
            else:
                lo = a0
            step = a0 - f / slope
            a0 = step if lo < step < hi else 0.5 * (lo + hi)
            if hi - lo <= 1e-17 * (1.0 + abs(lo) + abs(hi)):
                break
        state["a0"] = a0
        return a0, slope, v

    return invert


def _source_rect_mass(mu, t, lam_iv, a0_lo, a0_hi, b_lo, b_hi, kinks, atol):
    """Mass of rho_t over {a0 in [a0_lo, a0_hi]} x {b0 in [b_lo, b_hi]}."""
    l, r = max(lam_iv[0], a0_lo), min(lam_iv[1], a0_hi)
    if r <= l:
        return 0.0
    state = {"v": None}

    def f(a0s):
        out = np.zeros_like(a0s)
        for i, a0 in enumerate(a0s):
            try:
                _, slope, v = at_with_slope(mu, t, a0, v_hint=state["v"])
            except OutsideLambdaError:
                continue  # height 0 at the interval edge
            state["v"] = v
            seg = min(b_hi, v) - max(b_lo, -v)
            if seg > 0.0:
                out[i] = (1.0 / (math.pi * t)) * (1.0 - 0.5 * slope) * seg
        return out[None, :]

    breaks = sorted(set(_edge_ladder(l, r, lam_iv)) | {k for k in kinks if l < k < r})
    return float(integrate_adaptive(f, breaks, atol, 1e-9, max_depth=26)[0])


def _target_rect_mass(mu, t, omega_iv, lam_iv, a_lo, a_hi, b_lo, b_hi, kinks, atol):
    """Mass of the planar law over [a_lo, a_hi] x [b_lo, b_hi], via inversion."""
    al, ar = max(omega_iv[0], a_lo), min(omega_iv[1], a_hi)
    if ar <= al:
        return 0.0
    invert = _warm_inverter(mu, t, lam_iv)

    def f(avals):
        out = np.zeros_like(avals)
        for i, a in enumerate(avals):
            try:
                _, slope, v = invert(a)
            except OutsideLambdaError:
                continue
            bt = 2.0 * v
            seg = min(b_hi, bt) - max(b_lo, -bt)
            if seg > 0.0:
                out[i] = (1.0 / (2.0 * math.pi * t)) * (1.0 / slope - 0.5) * seg
        return out[None, :]

    breaks = sorted(set(_edge_ladder(al, ar, omega_iv)) | {k for k in kinks if al < k < ar})
    return float(integrate_adaptive(f, breaks, atol, 1e-9, max_depth=26)[0])


def pushforward_check(
    mu: MeasureSpec,
    t: float,
    n_rect: int = 4,
    n_scan: int = DEFAULT_SCAN,
    atol: float = 1e-9,
) -> PushforwardReport:
    """Verify that U_t pushes the source-region law onto the planar law.

    For a family of axis-aligned rectangles R, the mass of rho_t over
    U_t^{-1}(R) must match the planar mass over R; U_t^{-1} maps
    [a1,a2]x[b1,b2] to [a0(a1),a0(a2)]x[b1/2,b2/2] on each interval.
    Integrands are pre-split at the clip heights (where the rectangle top
    crosses the boundary graph) and at the square-root edges.
    """
    omega, region = _intervals(mu, t, n_scan)
    rects, src, tgt = [], [], []
    for omega_iv, lam_iv in zip(omega, region.intervals):
        al, ar = omega_iv
        theta = np.linspace(0.0, np.pi, 33)
        probes = 0.5 * (lam_iv[0] + lam_iv[1]) - 0.5 * (lam_iv[1] - lam_iv[0]) * np.cos(theta)
        bmax = 2.0 * max(v_t(mu, t, x) for x in probes)
        cuts = np.linspace(al, ar, n_rect + 1)
        bands = [(-2.0 * bmax, 2.0 * bmax), (0.0, 0.45 * bmax), (-0.45 * bmax, 0.0)]
        for b_lo, b_hi in bands:
            level = 0.5 * max(abs(b_lo), abs(b_hi))
            kinks_a0 = [] if level >= 0.5 * bmax else _v_crossings(mu, t, lam_iv, [level])
            kinks_a = [at_with_slope(mu, t, k)[0] for k in kinks_a0]
            for i in range(n_rect):
                a_lo, a_hi = float(cuts[i]), float(cuts[i + 1])
                a0_lo = a0_of_a(mu, t, min(max(a_lo, al), ar), n_scan)
                a0_hi = a0_of_a(mu, t, min(max(a_hi, al), ar), n_scan)
                rects.append((a_lo, a_hi, b_lo, b_hi))
                src.append(
                    _source_rect_mass(
                        mu, t, lam_iv, a0_lo, a0_hi, 0.5 * b_lo, 0.5 * b_hi, kinks_a0, atol
                    )
                )
                tgt.append(
                    _target_rect_mass(
                        mu, t, omega_iv, lam_iv, a_lo, a_hi, b_lo, b_hi, kinks_a, atol
                    )
                )
    disc = max(abs(s - g) for s, g in zip(src, tgt)) if rects else 0.0
    return PushforwardReport(
        max_discrepancy=disc,
        rectangles=tuple(rects),
        source_masses=tuple(src),
        target_masses=tuple(tgt),
    )
