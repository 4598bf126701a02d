"""Planar spectral density of the perturbed model: the support region, the
inversion a -> a0(a) of the boundary map, the height b_t, the density w_t,
point classification, and the harmonic log-potential outside the region.

Inside the region the density is constant along vertical segments:

    w_t(a + ib) = (1/(2 pi t)) * (da0/da - 1/2),        da0/da > 1/2,

with the region bounded by |b| < b_t(a) and b_t(a_t(a0)) = 2 v_t(a0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from io import StringIO

import numpy as np

from .errors import OutsideOmegaError, OutsideOnlyError
from .measure import MeasureSpec, cauchy, log_potential
from .numerics import bracket_newton
from .subordination import (
    DEFAULT_SCAN,
    LambdaRegion,
    a_t,
    at_with_slope,
    j_t_inverse,
    lambda_region,
    v_t,
)


@dataclass(frozen=True)
class RegionVerdict:
    """Classification of a point against the support region.

    margin is |Im lam| - b_t(Re lam) near the region and a positive distance
    proxy for points whose real part lies beyond every interval, so that
    tag == "boundary" iff |margin| <= tol.
    """

    tag: str  # "inside" | "outside" | "boundary"
    margin: float


@dataclass(frozen=True)
class BrownProfile:
    """Sampled region data on Chebyshev grids, one block per interval of
    the region's real section. Arrays are read-only views."""

    t: float
    grid: np.ndarray
    a0: np.ndarray
    halfheight: np.ndarray
    density: np.ndarray
    flags: tuple[str, ...]
    omega_intervals: tuple[tuple[float, float], ...]
    lambda_intervals: tuple[tuple[float, float], ...]
    block_edges: tuple[int, ...]  # grid index ranges per interval
    mass: float

    def blocks(self):
        for i in range(len(self.block_edges) - 1):
            yield slice(self.block_edges[i], self.block_edges[i + 1])

    def b_interp(self, a) -> np.ndarray:
        """Height b_t at arbitrary points by per-interval interpolation (0 outside)."""
        a = np.asarray(a, dtype=float)
        out = np.zeros_like(a)
        for (al, ar), sl in zip(self.omega_intervals, self.blocks()):
            xs = np.concatenate(([al], self.grid[sl], [ar]))
            ys = np.concatenate(([0.0], self.halfheight[sl], [0.0]))
            m = (a >= al) & (a <= ar)
            out[m] = np.interp(a[m], xs, ys)
        return out

    def to_csv(self) -> str:
        buf = StringIO()
        buf.write("a,a0,b_t,w_t,flag\n")
        for i in range(self.grid.size):
            buf.write(
                "%.17g,%.17g,%.17g,%.17g,%s\n"
                % (self.grid[i], self.a0[i], self.halfheight[i], self.density[i], self.flags[i])
            )
        return buf.getvalue()


# ----------------------------------------------------------------------------
# interval bookkeeping


@lru_cache(maxsize=512)
def _omega_intervals_cached(mu: MeasureSpec, t: float, n_scan: int):
    region = lambda_region(mu, t, n_scan)
    out = []
    for lo, hi in region.intervals:
        out.append((a_t(mu, t, lo), a_t(mu, t, hi)))
    return tuple(out), region


def omega_intervals(
    mu: MeasureSpec, t: float, region: LambdaRegion | None = None, n_scan: int = DEFAULT_SCAN
) -> tuple[tuple[float, float], ...]:
    """Images of the source intervals under the boundary map (the region's real section)."""
    if region is not None:
        return tuple((a_t(mu, t, lo), a_t(mu, t, hi)) for lo, hi in region.intervals)
    return _omega_intervals_cached(mu, float(t), n_scan)[0]


def _intervals(mu, t, n_scan):
    return _omega_intervals_cached(mu, float(t), n_scan)


# ----------------------------------------------------------------------------
# pointwise operations


def a0_of_a(mu: MeasureSpec, t: float, a: float, n_scan: int = DEFAULT_SCAN) -> float:
    """Unique source abscissa with v_t > 0 and a_t(a0) = a, by a bracketed
    Newton solve on the matching source interval (a_t is strictly increasing)."""
    omega, region = _intervals(mu, t, n_scan)
    tol = 1e-12 * (1.0 + abs(a))
    for (al, ar), (l, r) in zip(omega, region.intervals):
        if a < al - tol or a > ar + tol:
            continue
        if a <= al + tol:
            return l
        if a >= ar - tol:
            return r
        state: dict = {"v": None}

        def fdf(a0):
            at, slope, v = at_with_slope(mu, t, a0, v_hint=state["v"])
            state["v"] = v
            return at - a, slope

        frac = (a - al) / (ar - al)
        return bracket_newton(
            fdf,
            l,
            r,
            flo=al - a,
            fhi=ar - a,
            x0=l + (r - l) * frac,
            xtol=1e-15 * (1.0 + abs(l) + abs(r)),
            ftol=tol,
        )
    raise OutsideOmegaError(f"{a} is outside the region's real section")


def b_t(mu: MeasureSpec, t: float, a: float, n_scan: int = DEFAULT_SCAN) -> float:
    """Height of the region over a; 0 when a + i0 is not in the closed region."""
    try:
        a0 = a0_of_a(mu, t, a, n_scan)
    except OutsideOmegaError:
        return 0.0
    return 2.0 * v_t(mu, t, a0)


def w_t(mu: MeasureSpec, t: float, a: float, n_scan: int = DEFAULT_SCAN) -> float:
    """Density at a + ib for any |b| < b_t(a); requires a strictly inside."""
    omega, region = _intervals(mu, t, n_scan)
    tol = 1e-12 * (1.0 + abs(a))
    for (al, ar), _ in zip(omega, region.intervals):
        if al + tol < a < ar - tol:
            a0 = a0_of_a(mu, t, a, n_scan)
            slope = at_with_slope(mu, t, a0)[1]
            return (1.0 / (2.0 * math.pi * t)) * (1.0 / slope - 0.5)
    raise OutsideOmegaError(f"{a} is not strictly inside the region's real section")


def classify(
    mu: MeasureSpec,
    t: float,
    lam: complex,
    tol: float | None = None,
    n_scan: int = DEFAULT_SCAN,
) -> RegionVerdict:
    """Compare |Im lam| against the height over Re lam with a boundary band."""
    lam = complex(lam)
    if tol is None:
        tol = 1e-9 * (1.0 + abs(lam))
    a, b = lam.real, abs(lam.imag)
    omega, _ = _intervals(mu, t, n_scan)
    if not omega:
        return RegionVerdict("outside", math.inf)
    gap = min(max(al - a, 0.0, a - ar) for al, ar in omega)
    if gap > tol:
        return RegionVerdict("outside", max(b, gap))
    height = b_t(mu, t, min(max(a, omega[0][0]), omega[-1][1]), n_scan)
    margin = b - height
    if margin < -tol:
        return RegionVerdict("inside", margin)
    if margin <= tol:
        return RegionVerdict("boundary", margin)
    return RegionVerdict("outside", margin)


def s_outside(mu: MeasureSpec, t: float, lam: complex, n_scan: int = DEFAULT_SCAN) -> float:
    """Log-potential outside the closed region:

    s_t(lam) = int log|z0 - x|^2 dmu(x) - t Re[G(z0)^2],  z0 = J_t^{-1}(lam).

    Harmonic there; tested through a 5-point stencil Laplacian.
    """
    verdict = classify(mu, t, lam, n_scan=n_scan)
    if verdict.tag != "outside":
        raise OutsideOnlyError(f"{lam} is not outside the closed region")
    return _s_outside_unchecked(mu, t, lam)


def _s_outside_unchecked(mu, t, lam):
    z0 = j_t_inverse(mu, t, lam)
    lp = log_potential(mu, z0.real, z0.imag * z0.imag)
    g = cauchy(mu, z0)
    return lp - t * (g * g).real


# ----------------------------------------------------------------------------
# profile assembly


def _chebyshev_nodes(al: float, ar: float, n: int) -> np.ndarray:
    k = np.arange(n)
    # first-kind nodes: interior, clustered at the edges, ascending
    return 0.5 * (al + ar) - 0.5 * (ar - al) * np.cos(np.pi * (2 * k + 1) / (2 * n))


def lambda_sweep(mu: MeasureSpec, t: float, interval: tuple[float, float], n: int = 768):
    """Sample v_t, a_t and the slope along one source interval at Chebyshev
    angles theta_j = j*pi/n (endpoints carry v = 0 and zero marginal weight).

    Returns dict of arrays: theta, a0, v, at, slope (slope is nan at ends).
    """
    l, r = interval
    mid, half = 0.5 * (l + r), 0.5 * (r - l)
    theta = np.linspace(0.0, np.pi, n + 1)
    a0s = mid - half * np.cos(theta)
    a0s[0], a0s[-1] = l, r
    vs = np.zeros(n + 1)
    ats = np.zeros(n + 1)
    slopes = np.full(n + 1, np.nan)
    v_hint = None
    for j in range(1, n):
        at, slope, v = at_with_slope(mu, t, a0s[j], v_hint=v_hint)
        v_hint = v
        vs[j], ats[j], slopes[j] = v, at, slope
    ats[0] = a_t(mu, t, l)
    ats[-1] = a_t(mu, t, r)
    return {"theta": theta, "a0": a0s, "v": vs, "at": ats, "slope": slopes, "half": half}


def _simpson(y: np.ndarray, h: float) -> float:
    n = y.size - 1
    if n % 2:  # odd panel count: trapezoid on the last panel
        return _simpson(y[:-1], h) + 0.5 * h * (y[-2] + y[-1])
    return (h / 3.0) * float(y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def interval_mass(mu: MeasureSpec, t: float, interval: tuple[float, float], n: int = 768) -> float:
    """Planar-law mass over one region interval.

    Integrates 2 b_t w_t da back in the source variable, where the integrand
    (2/(pi t)) v_t (1 - slope/2) is bounded, under the Chebyshev substitution
    that makes the square-root edges smooth.
    """
    sw = lambda_sweep(mu, t, interval, n)
    g = np.zeros_like(sw["v"])
    inner = slice(1, -1)
    g[inner] = (2.0 / (math.pi * t)) * sw["v"][inner] * (1.0 - 0.5 * sw["slope"][inner])
    h = sw["half"] * np.sin(sw["theta"]) * g
    return _simpson(h, math.pi / (h.size - 1))


def profile(
    mu: MeasureSpec,
    t: float,
    n_grid: int = 1024,
    n_scan: int = DEFAULT_SCAN,
    n_mass: int = 768,
) -> BrownProfile:
    """Assemble the sampled region: Chebyshev grid per interval, source
    abscissas, heights, densities, and the total mass."""
    if n_grid < 16:
        raise ValueError("n_grid must be at least 16")
    if t <= 0.0:
        raise ValueError("t must be positive")
    omega, region = _intervals(mu, t, n_scan)
    grids, a0s, heights, densities, flags = [], [], [], [], []
    edges = [0]
    mass = 0.0
    for (al, ar), (l, r) in zip(omega, region.intervals):
        nodes = _chebyshev_nodes(al, ar, n_grid)
        state = {"v": None, "a0": l}
        for k, a in enumerate(nodes):
            def fdf(a0):
                at, slope, v = at_with_slope(mu, t, a0, v_hint=state["v"])
                state["v"] = v
                return at - a, slope

            frac = (a - al) / (ar - al)
            root = bracket_newton(
                fdf,
                state["a0"],
                r,
                flo=(a_t(mu, t, state["a0"]) - a) if k == 0 else None,
                fhi=ar - a,
                x0=max(state["a0"], l + (r - l) * frac),
                xtol=1e-15 * (1.0 + abs(l) + abs(r)),
                ftol=1e-12 * (1.0 + abs(a)),
            )
            at, slope, v = at_with_slope(mu, t, root, v_hint=state["v"])
            state["a0"] = root
            grids.append(a)
            a0s.append(root)
            heights.append(2.0 * v)
            densities.append((1.0 / (2.0 * math.pi * t)) * (1.0 / slope - 0.5))
            flags.append("near_boundary" if k in (0, n_grid - 1) else "ok")
        edges.append(len(grids))
        mass += interval_mass(mu, t, (l, r), n_mass)

    arrays = [np.asarray(v) for v in (grids, a0s, heights, densities)]
    for arr in arrays:
        arr.setflags(write=False)
    return BrownProfile(
        t=t,
        grid=arrays[0],
        a0=arrays[1],
        halfheight=arrays[2],
        density=arrays[3],
        flags=tuple(flags),
        omega_intervals=omega,
        lambda_intervals=region.intervals,
        block_edges=tuple(edges),
        mass=mass,
    )
