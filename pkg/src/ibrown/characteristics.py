"""Closed-form characteristic flow of the regularized log-potential and the
solvers built on it.

The flow's Hamiltonian is H = -(p_a^2 - p_b^2)/4 - eps*p_eps^2 with momenta
tied to the initial point by Poisson-type integrals; along a characteristic

    a(t) = a0 - p_a0 t/2,   b(t) = b0 + p_b0 t/2,
    eps(t) = eps0 (1 - p0 t)^2,  p_eps(t) = p0/(1 - p0 t),

the solution blows up at t* = 1/p0 and the value transports as
S(t) = S(0) + t H0. The PDE

    dS/dt = ((dS/da)^2 - (dS/db)^2)/4 + eps (dS/deps)^2

is exercised numerically through finite differences of the flow inversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousBranchError,
    NoConvergenceError,
    PastLifetimeError,
)
from .measure import MeasureSpec, log_potential, p0_zero, transforms
from .subordination import j_t_inverse


@dataclass(frozen=True)
class InitialData:
    """Starting point of a characteristic: lam0 = a0 + i b0 and eps0 > 0
    (eps0 = 0 admitted for lifetime limits)."""

    lam0: complex
    eps0: float

    def __post_init__(self):
        if self.eps0 < 0.0:
            raise ValueError("eps0 must be nonnegative")


@dataclass(frozen=True)
class Momenta:
    """Initial momenta; p_b0 = 2 b0 p0 and p_a0 = 2 a0 p0 - 2 p1 hold."""

    p_a0: float
    p_b0: float
    p0: float
    p1: float


@dataclass(frozen=True)
class PathState:
    """Flow state at time t; p_a, p_b and eps*p_eps^2 are conserved."""

    t: float
    lam: complex
    eps: float
    p_a: float
    p_b: float
    p_eps: float


def _momenta_values(mu, a0, b0, eps0):
    v2 = b0 * b0 + eps0
    if v2 <= 0.0:
        p0v = p0_zero(mu, a0)
        if not math.isfinite(p0v):
            return math.inf, math.nan, math.nan, math.nan
        # b0 = 0 and eps0 = 0 off the divergence set: finite limits
        out = transforms(mu, a0, 1e-300, ("p0", "p1", "pa"))
        return out["p0"], out["p1"], out["pa"], 0.0
    out = transforms(mu, a0, v2, ("p0", "p1", "pa"))
    return out["p0"], out["p1"], out["pa"], 2.0 * b0 * out["p0"]


def initial_momenta(mu: MeasureSpec, init: InitialData) -> Momenta:
    """Poisson-type integrals of the law at (lam0, eps0), eps0 > 0."""
    if init.eps0 <= 0.0 and init.lam0.imag == 0.0:
        raise ValueError("initial momenta need b0^2 + eps0 > 0")
    a0, b0 = init.lam0.real, init.lam0.imag
    p0v, p1v, pav, pbv = _momenta_values(mu, a0, b0, init.eps0)
    return Momenta(p_a0=pav, p_b0=pbv, p0=p0v, p1=p1v)


def lifetime(mu: MeasureSpec, init: InitialData) -> float:
    """Blow-up time 1/p0; with eps0 = 0 this is the escape-time function whose
    sublevel set {lifetime < t} is the source region (0 on the divergence set)."""
    a0, b0 = init.lam0.real, init.lam0.imag
    v2 = b0 * b0 + init.eps0
    if v2 <= 0.0:
        p0v = p0_zero(mu, a0)
    else:
        p0v = transforms(mu, a0, v2, ("p0",))["p0"]
    if not math.isfinite(p0v) or p0v <= 0.0:
        return 0.0 if not math.isfinite(p0v) else math.inf
    return 1.0 / p0v


def flow(mu: MeasureSpec, init: InitialData, t: float) -> PathState:
    """Closed-form state at time t < 1/p0."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    mom = initial_momenta(mu, init)
    if t * mom.p0 >= 1.0:
        raise PastLifetimeError(f"t = {t} is at or beyond the lifetime {1.0 / mom.p0}")
    a0, b0 = init.lam0.real, init.lam0.imag
    a = a0 - 0.5 * mom.p_a0 * t
    b = b0 + 0.5 * mom.p_b0 * t
    decay = 1.0 - mom.p0 * t
    return PathState(
        t=t,
        lam=complex(a, b),
        eps=init.eps0 * decay * decay,
        p_a=mom.p_a0,
        p_b=mom.p_b0,
        p_eps=mom.p0 / decay,
    )


def s_initial(mu: MeasureSpec, lam: complex, eps: float) -> float:
    """Regularized log-energy at time zero: int log(|x - lam|^2 + eps) dmu."""
    lam = complex(lam)
    c = lam.imag * lam.imag + eps
    return log_potential(mu, lam.real, c)


def hamiltonian(mom: Momenta, eps0: float) -> float:
    """H at time 0: -(p_a0^2 - p_b0^2)/4 - eps0 p0^2."""
    return -0.25 * (mom.p_a0 **2 - mom.p_b0 **2) - eps0 * mom.p0 **2


def hj_value(mu: MeasureSpec, init: InitialData, t: float) -> float:
    """Transported value S(t, lam(t), eps(t)) = S(0, lam0, eps0) + t H0."""
    mom = initial_momenta(mu, init)
    if t * mom.p0 >= 1.0:
        raise PastLifetimeError(f"t = {t} is at or beyond the lifetime {1.0 / mom.p0}")
    s0 = s_initial(mu, init.lam0, init.eps0)
    return s0 + t * hamiltonian(mom, init.eps0)


# ----------------------------------------------------------------------------
# flow inversion


def _flow_residual(mu, t, u, target):
    a0, b0, eps0 = u
    p0v, _, pav, _ = _momenta_values(mu, a0, b0, eps0)
    if not math.isfinite(p0v):
        return None
    decay = 1.0 - p0v * t
    return np.array(
        [
            a0 - 0.5 * t * pav - target[0],
            b0 * (1.0 + t * p0v) - target[1],
            eps0 * decay * decay - target[2],
        ]
    )


def _solve_flow(mu, t, target, start, tol, max_iter=100):
    """Damped Newton with a numeric Jacobian on the flow map; keeps eps0 > 0."""
    u = np.array(start, dtype=float)
    u[2] = max(u[2], 1e-14)
    fu = _flow_residual(mu, t, u, target)
    if fu is None:
        return None
    norm = float(np.max(np.abs(fu)))
    for _ in range(max_iter):
        if norm <= tol:
            return u
        jac = np.empty((3, 3))
        ok = True
        for j in range(3):
            h = 1e-7 * (1.0 + abs(u[j]))
            if j == 2:
                h = min(h, 0.5 * u[2])
                if h <= 0.0:
                    ok = False
                    break
            up, um = u.copy(), u.copy()
            up[j] += h
            um[j] -= h
            fp = _flow_residual(mu, t, up, target)
            fm = _flow_residual(mu, t, um, target)
            if fp is None or fm is None:
                ok = False
                break
            jac[:, j] = (fp - fm) / (2.0 * h)
        if not ok:
            return None
        try:
            step = np.linalg.solve(jac, fu)
        except np.linalg.LinAlgError:
            return None
        factor = 1.0
        for _ in range(45):
            un = u - factor * step
            un[2] = max(un[2], 1e-300)
            fn = _flow_residual(mu, t, un, target)
            if fn is not None:
                nn = float(np.max(np.abs(fn)))
                if nn < norm:
                    u, fu, norm = un, fn, nn
                    break
            factor *= 0.5
        else:
            return None
    return u if norm <= tol else None


def s_of(mu: MeasureSpec, t: float, lam: complex, eps: float) -> float:
    """Value of the regularized log-energy at prescribed (t, lam, eps), eps > 0,
    by inverting the flow map for admissible initial data.

    Solutions with 1 - t p0 <= 0 belong to the mirror sheet of the square-root
    regularized extension and are rejected; outside the support region with
    small eps, the inversion warm-starts from the holomorphic route.
    """
    if eps <= 0.0:
        raise ValueError("s_of requires eps > 0")
    lam = complex(lam)
    target = (lam.real, lam.imag, eps)
    tol = 1e-10 * (1.0 + abs(lam) + eps)

    starts = [(lam.real, lam.imag, eps)]
    try:
        z0 = j_t_inverse(mu, t, lam, tol=1e-9 * (1.0 + abs(lam)))
        p0v = _momenta_values(mu, z0.real, z0.imag, 0.0)[0]
        if math.isfinite(p0v) and t * p0v < 1.0:
            starts.append((z0.real, z0.imag, eps / (1.0 - t * p0v) ** 2))
    except Exception:
        pass
    for k in (4.0, 16.0, 64.0):
        starts.append((lam.real, lam.imag, k * eps))

    found = []
    for start in starts:
        u = _solve_flow(mu, t, target, start, tol)
        if u is None:
            continue
        p0v = _momenta_values(mu, u[0], u[1], u[2])[0]
        if not math.isfinite(p0v) or 1.0 - t * p0v <= 0.0:
            continue  # mirror sheet
        if not found:
            found.append(u)
            break  # primary solution; further starts only run if none converged
        found.append(u)
    if not found:
        # continuation in eps from an easier regularization level
        u = None
        eps_hi = max(1.0, 4.0 * eps)
        path = [eps_hi * (eps / eps_hi) ** (k / 10.0) for k in range(11)]
        guess = (lam.real, lam.imag, eps_hi)
        for e in path:
            u = _solve_flow(mu, t, (lam.real, lam.imag, e), guess, 1e-10 * (1.0 + abs(lam) + e))
            if u is None:
                break
            guess = tuple(u)
        if u is not None:
            p0v = _momenta_values(mu, u[0], u[1], u[2])[0]
            if math.isfinite(p0v) and 1.0 - t * p0v > 0.0:
                found.append(u)
    if not found:
        raise NoConvergenceError(f"flow inversion failed at (t={t}, lam={lam}, eps={eps})")
    u = found[0]
    init = InitialData(lam0=complex(u[0], u[1]), eps0=float(u[2]))
    return hj_value(mu, init, t)


def s_of_all_branches(mu: MeasureSpec, t: float, lam: complex, eps: float) -> float:
    """Like s_of but runs every start and raises AmbiguousBranch when distinct
    admissible preimages disagree in value."""
    lam = complex(lam)
    target = (lam.real, lam.imag, eps)
    tol = 1e-10 * (1.0 + abs(lam) + eps)
    sols = []
    for start in [
        (lam.real, lam.imag, eps),
        (lam.real, lam.imag, 4.0 * eps),
        (lam.real, lam.imag, 16.0 * eps),
    ]:
        u = _solve_flow(mu, t, target, start, tol)
        if u is None:
            continue
        p0v = _momenta_values(mu, u[0], u[1], u[2])[0]
        if not math.isfinite(p0v) or 1.0 - t * p0v <= 0.0:
            continue
        if not any(np.max(np.abs(u - s)) <= 1e-6 * (1.0 + np.max(np.abs(u))) for s in sols):
            sols.append(u)
    if not sols:
        raise NoConvergenceError(f"flow inversion failed at (t={t}, lam={lam}, eps={eps})")
    values = [
        hj_value(mu, InitialData(lam0=complex(u[0], u[1]), eps0=float(u[2])), t) for u in sols
    ]
    if len(sols) > 1 and max(values) - min(values) > 1e-8 * (1.0 + abs(values[0])):
        raise AmbiguousBranchError(
            f"{len(sols)} distinct preimages with values {values} at (t={t}, lam={lam}, eps={eps})"
        )
    return values[0]


def pde_residual(mu: MeasureSpec, t: float, lam: complex, eps: float) -> float:
    """|dS/dt - ((dS/da)^2 - (dS/db)^2)/4 - eps (dS/deps)^2| by central
    differences of the flow inversion; steps scale with the point."""
    lam = complex(lam)
    ha = hb = 1e-4 * (1.0 + abs(lam))
    ht = 1e-4 * (1.0 + t)
    he = 1e-4 * eps

    def val(tt, a, b, e):
        return s_of(mu, tt, complex(a, b), e)

    a, b = lam.real, lam.imag
    ds_dt = (val(t + ht, a, b, eps) - val(t - ht, a, b, eps)) / (2.0 * ht)
    ds_da = (val(t, a + ha, b, eps) - val(t, a - ha, b, eps)) / (2.0 * ha)
    ds_db = (val(t, a, b + hb, eps) - val(t, a, b - hb, eps)) / (2.0 * hb)
    ds_de = (val(t, a, b, eps + he) - val(t, a, b, eps - he)) / (2.0 * he)
    return abs(ds_dt - 0.25 * (ds_da * ds_da - ds_db * ds_db) - eps * ds_de * ds_de)
