"""Shared numerical kernels: adaptive Gauss-Legendre panels and bracketed root solves.

The integrator is vectorized over integrand components: ``f(x)`` receives a
node array of shape ``(m,)`` and returns ``(k, m)`` values, so a family of
transforms sharing the same near-singular scale is resolved in one adaptive
pass.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import NoConvergenceError

_GL_LO_N = 12
_GL_HI_N = 25

_gl_lo = leggauss(_GL_LO_N)
_gl_hi = leggauss(_GL_HI_N)
_NODES = np.concatenate((_gl_lo[0], _gl_hi[0]))
_W_LO = _gl_lo[1]
_W_HI = _gl_hi[1]

#: recursion depth cap; a kernel of width 1e-14 under a unit panel needs ~47 levels
MAX_DEPTH = 52


def _panel_estimates(f, lo: float, hi: float):
    """Low- and high-order Gauss-Legendre estimates on one panel, one call to f."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    y = f(mid + half * _NODES)
    if y.ndim == 1:
        y = y[None, :]
    i_lo = half * (y[:, :_GL_LO_N] @ _W_LO)
    i_hi = half * (y[:, _GL_LO_N:] @ _W_HI)
    return i_hi, np.abs(i_hi - i_lo)


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    atol: float = 1e-12,
    rtol: float = 1e-10,
    max_depth: int = MAX_DEPTH,
) -> np.ndarray:
    """Integrate a vector integrand over [breakpoints[0], breakpoints[-1]].

    Panels are bisected recursively until every component of the embedded
    error estimate meets its share of ``atol + rtol*|I|``; pre-split at known
    difficult points via `breakpoints`.

    Parameters
    ----------
    f : callable
        Maps a node array (m,) to values (k, m) or (m,).
    breakpoints : sequence of float
        Ascending initial panel edges.

    Returns
    -------
    (k,) array of component integrals.
    """
    pts = [float(b) for b in breakpoints]
    panels = [(lo, hi) for lo, hi in zip(pts[:-1], pts[1:]) if hi > lo]
    if not panels:
        raise ValueError("empty integration range")

    rough = None
    first = []
    for lo, hi in panels:
        val, err = _panel_estimates(f, lo, hi)
        first.append((lo, hi, val, err))
        rough = val.copy() if rough is None else rough + val
    tol_global = atol + rtol * np.abs(rough)
    k = rough.shape[0]

    total = np.zeros(k)
    # each initial panel gets an equal tolerance share, halved on every split;
    # the rounding floor keeps noise-dominated panels from splitting forever
    budget = 4000
    stack = [(lo, hi, tol_global / len(first), 0, val, err) for lo, hi, val, err in first]
    while stack:
        lo, hi, tol, depth, val, err = stack.pop()
        mid = 0.5 * (lo + hi)
        floor = tol + 5e-16 * np.abs(val) + 1e-300
        if (
            depth >= max_depth
            or budget <= 0
            or mid <= lo
            or mid >= hi
            or float((err - floor).max()) <= 0.0
        ):
            total += val
            continue
        budget -= 2
        for a, b in ((lo, mid), (mid, hi)):
            v, e = _panel_estimates(f, a, b)
            stack.append((a, b, tol * 0.5, depth + 1, v, e))
    return total


def ladder_points(lo: float, hi: float, center: float, scale: float) -> list[float]:
    """Geometric pre-split ladder around a near-singular center.

    Returns ascending breakpoints of [lo, hi] with panel edges at
    ``center ± scale * 4**k`` so that each panel sees the kernel vary by a
    bounded factor.
    """
    if hi <= lo:
        return [lo, hi]
    pts = {lo, hi}
    w = max(scale, (hi - lo) * 1e-15, 1e-300)
    if lo < center < hi:
        pts.add(center)
    r = w
    for _ in range(60):
        for p in (center - r, center + r):
            if lo < p < hi:
                pts.add(p)
        if center - r < lo and center + r > hi:
            break
        r *= 4.0
    return sorted(pts)


def bracket_newton(
    func: Callable[[float], tuple[float, float | None]],
    lo: float,
    hi: float,
    flo: float | None = None,
    fhi: float | None = None,
    x0: float | None = None,
    xtol: float = 1e-14,
    ftol: float = 0.0,
    max_iter: int = 240,
) -> float:
    """Find a root on a sign-change bracket, taking Newton steps when safe.

    ``func(x)`` returns ``(f, df)``; ``df`` may be None to force bisection.
    [lo, hi] must satisfy sign(f(lo)) != sign(f(hi)); zero endpoints are
    returned directly.
    """
    if flo is None:
        flo = func(lo)[0]
    if flo == 0.0:
        return lo
    if fhi is None:
        fhi = func(hi)[0]
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoConvergenceError(f"root not bracketed on [{lo}, {hi}]")

    x = x0 if (x0 is not None and lo < x0 < hi) else 0.5 * (lo + hi)
    for _ in range(max_iter):
        f, df = func(x)
        if f == 0.0 or (ftol > 0.0 and abs(f) <= ftol):
            return x
        if (f > 0.0) == (flo > 0.0):
            lo, flo = x, f
        else:
            hi, fhi = x, f
        if hi - lo <= xtol * (1.0 + abs(lo) + abs(hi)):
            return 0.5 * (lo + hi)
        step_ok = False
        if df is not None and df != 0.0 and math.isfinite(df):
            xn = x - f / df
            if lo < xn < hi:
                x = xn
                step_ok = True
        if not step_ok:
            x = 0.5 * (lo + hi)
    return 0.5 * (lo + hi)


def poly_eval(coeffs: Sequence[float], x):
    """Evaluate a polynomial given ascending-degree coefficients (Horner)."""
    if np.ndim(x):
        acc = np.zeros_like(np.asarray(x, dtype=float))
    else:
        acc = 0.0
    for c in reversed(tuple(coeffs)):
        acc = acc * x + c
    return acc


def poly_shift(coeffs: Sequence[float], c: float) -> list[float]:
    """Rewrite p(x) = sum a_k x^k as sum b_k (x-c)^k (repeated synthetic division)."""
    work = list(map(float, coeffs))
    out = []
    for _ in range(len(work)):
        rem = 0.0
        for i in range(len(work) - 1, -1, -1):
            rem = work[i] + c * rem
            work[i] = rem
        out.append(work.pop(0))
    return out


def poly_antiderivative(coeffs: Sequence[float]) -> list[float]:
    return [0.0] + [c / (k + 1) for k, c in enumerate(coeffs)]


def poly_definite(coeffs: Sequence[float], lo: float, hi: float) -> float:
    anti = poly_antiderivative(coeffs)
    return float(poly_eval(anti, hi) - poly_eval(anti, lo))
