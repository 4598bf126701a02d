"""Independent cross-check solver via the conjugate fixed-point equation.

Solves g = G(a + t*conj(g)) for complex g with Im g != 0; the real part
recovers the boundary inversion, Re g = (a0(a) - a)/t, and the planar density
follows from

    rho_t(a) = (1/(4 pi)) (1/t + 2 d(Re g)/da),

giving a second, fixed-point route to the same density as the subordination
pipeline. The boundary of the support region is located by the sign of
(b/(2t))^2 - (Im g)^2.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NoConvergenceError
from .measure import MeasureSpec, cauchy, cauchy_prime
from .subordination import lambda_region, v_t
from .brown import a0_of_a


def _fixed_point_newton(mu, t, a, g0, tol, max_iter=80):
    """Damped Newton on F(g) = g - G(a + t*conj(g)) as a 2-real-variable system."""
    g = complex(g0)

    def residual(gv):
        z = a + t * gv.conjugate()
        if z.imag == 0.0:
            z = complex(z.real, -1e-300)
        return gv - cauchy(mu, z)

    try:
        fg = residual(g)
    except Exception:
        return None
    for _ in range(max_iter):
        if abs(fg) <= tol:
            return g
        z = a + t * g.conjugate()
        try:
            gp = cauchy_prime(mu, z)
        except Exception:
            return None
        # columns of the real Jacobian as complex numbers
        col_re = 1.0 - t * gp
        col_im = 1j * (1.0 + t * gp)
        det = col_re.real * col_im.imag - col_im.real * col_re.imag
        if det == 0.0:
            return None
        rhs = fg
        d_re = (rhs.real * col_im.imag - col_im.real * rhs.imag) / det
        d_im = (col_re.real * rhs.imag - rhs.real * col_re.imag) / det
        step = complex(d_re, d_im)
        factor = 1.0
        for _ in range(45):
            gn = g - factor * step
            try:
                fn = residual(gn)
            except Exception:
                fn = None
            if fn is not None and abs(fn) < abs(fg):
                g, fg = gn, fn
                break
            factor *= 0.5
        else:
            return None
    return g if abs(fg) <= tol else None


def solve_g(
    mu: MeasureSpec,
    t: float,
    a: float,
    guess: complex | None = None,
    tol: float | None = None,
) -> complex:
    """Complex solution of g = G(a + t*conj(g)) with Im g > 0.

    Seeded from the subordination pipeline when no guess is supplied, with a
    coarse scan fallback; raises NoConvergence when every start collapses to
    the real line, which signals a point outside the support of the planar law.
    """
    if tol is None:
        tol = 1e-12 * (1.0 + abs(a))
    starts = []
    if guess is not None:
        starts.append(complex(guess))
    else:
        try:
            a0g = a0_of_a(mu, t, a)
            vg = v_t(mu, t, a0g)
            starts.append(complex((a0g - a) / t, max(vg, 1e-8) / t))
        except Exception:
            pass
        # coarse scan over candidate source abscissas
        region = lambda_region(mu, t)
        for lo, hi in region.intervals:
            for s in (0.25, 0.5, 0.75):
                a0c = lo + (hi - lo) * s
                vc = v_t(mu, t, a0c)
                if vc > 0.0:
                    starts.append(complex((a0c - a) / t, vc / t))
        starts.append(complex(0.0, 0.5 * math.sqrt(t) / t))
    for g0 in starts:
        if g0.imag <= 0.0:
            g0 = complex(g0.real, abs(g0.imag) + 1e-8)
        g = _fixed_point_newton(mu, t, a, g0, tol)
        if g is not None and abs(g.imag) > 1e-12:
            return g if g.imag > 0.0 else g.conjugate()
    raise NoConvergenceError(
        f"no complex fixed point at a = {a}; the point lies outside the planar support"
    )


def jn_density(mu: MeasureSpec, t: float, a: float, step: float | None = None) -> float:
    """Density (1/(4 pi)) (1/t + 2 d(Re g)/da) via a central difference of Re g."""
    if step is None:
        step = 1e-5 * (1.0 + abs(a))
    g_mid = solve_g(mu, t, a)
    gp = solve_g(mu, t, a + step, guess=g_mid)
    gm = solve_g(mu, t, a - step, guess=g_mid)
    d_re = (gp.real - gm.real) / (2.0 * step)
    return (1.0 / (4.0 * math.pi)) * (1.0 / t + 2.0 * d_re)


def jn_boundary_gap(mu: MeasureSpec, t: float, a: float, b: float) -> float:
    """(b/(2t))^2 - (Im g)^2: zero exactly on the boundary of the support
    region, negative strictly inside along the vertical through a."""
    g = solve_g(mu, t, a)
    return (b / (2.0 * t)) ** 2 - g.imag ** 2


def poisson_identity_residual(mu: MeasureSpec, t: float, a: float) -> float:
    """|p0(a + t Re g, t Im g) - 1/t| for the solved fixed point."""
    from .measure import p0

    g = solve_g(mu, t, a)
    return abs(p0(mu, a + t * g.real, t * abs(g.imag)) - 1.0 / t)
