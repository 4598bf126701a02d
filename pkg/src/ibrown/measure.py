"""Compactly supported laws on the real line and their scalar integral transforms.

A law is described by a :class:`MeasureSpec` (atoms, piecewise-polynomial
density, or semicircle) and consumed by every other module exclusively through
the transforms defined here: Poisson-type integrals ``p0``/``p1``, the squared
kernels ``q0``/``q1``/``q2``, the Cauchy transform, logarithmic energies and
quantiles.

Conventions
-----------
All kernels share the denominator ``D = (a0 - x)**2 + v**2``:

* ``p0 = int dmu / D``           * ``q0 = int dmu / D**2``
* ``p1 = int x dmu / D``         * ``q1 = int (a0-x) dmu / D**2``
*                                * ``q2 = int (a0-x)**2 dmu / D**2``

``p0`` with ``v = 0`` returns ``math.inf`` when the integral diverges; callers
use the sentinel for bracketing.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DiracMeasureError,
    DivergentLogError,
    EmptyMeasureError,
    MeasureFormatError,
    NegativeMassError,
    OnSupportError,
)
from .numerics import (
    bracket_newton,
    integrate_adaptive,
    ladder_points,
    poly_definite,
    poly_eval,
    poly_shift,
)

_DEFAULT_TOLS = {"atol": 1e-12, "rtol": 1e-10}


def set_default_tolerances(atol: float | None = None, rtol: float | None = None) -> None:
    """Override the package-wide quadrature tolerances (CLI --tol hook)."""
    if atol is not None:
        _DEFAULT_TOLS["atol"] = float(atol)
    if rtol is not None:
        _DEFAULT_TOLS["rtol"] = float(rtol)


def _tols(atol, rtol):
    return (
        _DEFAULT_TOLS["atol"] if atol is None else atol,
        _DEFAULT_TOLS["rtol"] if rtol is None else rtol,
    )

_ATOM_MERGE_REL = 1e-12
_KERNEL_KEYS = ("p0", "p1", "pa", "c1", "q0", "q1", "q2", "log")


@dataclass(frozen=True)
class Support:
    """Closed hull [lo, hi] of the support; lo < hi by the non-degeneracy rule."""

    lo: float
    hi: float


@dataclass(frozen=True)
class MeasureSpec:
    """Validated, unit-mass law. Build through :func:`validate` or the preset helpers.

    kind is one of ``atomic``, ``piecewise_poly``, ``semicircle``; presets
    (uniform, bernoulli) normalize to one of these and keep their name in
    ``label``. ``rescale`` records the factor applied to reach unit mass.
    """

    kind: str
    atoms: tuple[tuple[float, float], ...] = ()
    pieces: tuple[tuple[float, float, tuple[float, ...]], ...] = ()
    variance: float = 0.0
    label: str = ""
    rescale: float = 1.0
    support: Support = Support(0.0, 0.0)

    def digest(self) -> str:
        return hashlib.sha1(to_json(self).encode()).hexdigest()[:10]


# ----------------------------------------------------------------------------
# construction and validation


def _merge_atoms(raw: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    pairs = sorted((float(x), float(w)) for x, w in raw)
    merged: list[list[float]] = []
    for x, w in pairs:
        if merged and abs(x - merged[-1][0]) <= _ATOM_MERGE_REL * max(1.0, abs(x)):
            tot = merged[-1][1] + w
            if tot > 0.0:
                merged[-1][0] = (merged[-1][0] * merged[-1][1] + x * w) / tot
            merged[-1][1] = tot
        else:
            merged.append([x, w])
    return [(x, w) for x, w in merged]


def _validate_atomic(atoms, label) -> MeasureSpec:
    for x, w in atoms:
        if not (math.isfinite(x) and math.isfinite(w)):
            raise MeasureFormatError("non-finite atom")
        if w < 0.0:
            raise NegativeMassError(f"negative weight {w} at x={x}")
    merged = [(x, w) for x, w in _merge_atoms(atoms) if w > 0.0]
    if not merged:
        raise EmptyMeasureError("no mass")
    if len(merged) == 1:
        raise DiracMeasureError("law is a single point mass")
    total = sum(w for _, w in merged)
    norm = tuple((x, w / total) for x, w in merged)
    return MeasureSpec(
        kind="atomic",
        atoms=norm,
        label=label or "atomic",
        rescale=1.0 / total,
        support=Support(norm[0][0], norm[-1][0]),
    )


def _validate_pieces(pieces, label) -> MeasureSpec:
    clean = []
    for lo, hi, coeffs in pieces:
        lo, hi = float(lo), float(hi)
        coeffs = tuple(float(c) for c in coeffs)
        if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
            raise MeasureFormatError(f"bad piece bounds [{lo}, {hi}]")
        if not coeffs:
            raise MeasureFormatError("piece without coefficients")
        xs = np.linspace(lo, hi, 513)
        vals = poly_eval(coeffs, xs)
        scale = max(1.0, float(np.max(np.abs(vals))))
        if float(np.min(vals)) < -1e-12 * scale:
            raise NegativeMassError(f"density negative on [{lo}, {hi}]")
        mass = poly_definite(coeffs, lo, hi)
        if mass > 0.0:
            clean.append((lo, hi, coeffs, mass))
    if not clean:
        raise EmptyMeasureError("no mass")
    clean.sort(key=lambda p: p[0])
    for (l1, h1, _, _), (l2, _, _, _) in zip(clean[:-1], clean[1:]):
        if l2 < h1 - 1e-14 * max(1.0, abs(h1)):
            raise MeasureFormatError("overlapping pieces")
    total = sum(m for *_, m in clean)
    norm = tuple(
        (lo, hi, tuple(c / total for c in coeffs)) for lo, hi, coeffs, _ in clean
    )
    return MeasureSpec(
        kind="piecewise_poly",
        pieces=norm,
        label=label or "piecewise_poly",
        rescale=1.0 / total,
        support=Support(norm[0][0], norm[-1][1]),
    )


def semicircle(variance: float = 1.0) -> MeasureSpec:
    s = float(variance)
    if not (s > 0.0 and math.isfinite(s)):
        raise MeasureFormatError("semicircle variance must be positive")
    r = 2.0 * math.sqrt(s)
    return MeasureSpec(
        kind="semicircle",
        variance=s,
        label=f"semicircle(s={s:g})",
        support=Support(-r, r),
    )


def uniform(lo: float = -1.0, hi: float = 1.0) -> MeasureSpec:
    lo, hi = float(lo), float(hi)
    if hi <= lo:
        raise MeasureFormatError("uniform needs lo < hi")
    mu = _validate_pieces([(lo, hi, (1.0 / (hi - lo),))], f"uniform({lo:g},{hi:g})")
    return mu


def bernoulli(alpha: float = 0.5) -> MeasureSpec:
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise MeasureFormatError("bernoulli alpha must lie in (0,1)")
    return _validate_atomic([(-1.0, 1.0 - a), (1.0, a)], f"bernoulli(alpha={a:g})")


def atomic(pairs: Iterable[tuple[float, float]]) -> MeasureSpec:
    return _validate_atomic(list(pairs), "atomic")


def piecewise_poly(pieces: Iterable[tuple[float, float, Sequence[float]]]) -> MeasureSpec:
    return _validate_pieces([(lo, hi, tuple(c)) for lo, hi, c in pieces], "piecewise_poly")


def validate(spec) -> MeasureSpec:
    """Normalize a raw description (dict in the file schema, or MeasureSpec)."""
    if isinstance(spec, MeasureSpec):
        if spec.kind == "atomic":
            return replace(_validate_atomic(spec.atoms, spec.label), rescale=spec.rescale)
        if spec.kind == "piecewise_poly":
            return replace(_validate_pieces(spec.pieces, spec.label), rescale=spec.rescale)
        if spec.kind == "semicircle":
            return semicircle(spec.variance)
        raise MeasureFormatError(f"unknown kind {spec.kind!r}")
    if isinstance(spec, dict):
        return _from_dict(spec)
    raise MeasureFormatError(f"cannot validate {type(spec).__name__}")


_SCHEMAS = {
    "atomic": {"type", "atoms"},
    "uniform": {"type", "lo", "hi"},
    "semicircle": {"type", "variance"},
    "bernoulli": {"type", "alpha"},
    "piecewise_poly": {"type", "pieces"},
}


def _from_dict(obj: dict) -> MeasureSpec:
    kind = obj.get("type")
    if kind not in _SCHEMAS:
        raise MeasureFormatError(f"unknown measure type {kind!r}")
    extra = set(obj) - _SCHEMAS[kind]
    missing = _SCHEMAS[kind] - set(obj)
    if extra:
        raise MeasureFormatError(f"unknown keys {sorted(extra)}")
    if missing:
        raise MeasureFormatError(f"missing keys {sorted(missing)}")
    if kind == "atomic":
        atoms = []
        for entry in obj["atoms"]:
            if set(entry) != {"x", "w"}:
                raise MeasureFormatError("atom entries need exactly keys x, w")
            atoms.append((entry["x"], entry["w"]))
        return _validate_atomic(atoms, "atomic")
    if kind == "uniform":
        return uniform(obj["lo"], obj["hi"])
    if kind == "semicircle":
        return semicircle(obj["variance"])
    if kind == "bernoulli":
        return bernoulli(obj["alpha"])
    pieces = []
    for entry in obj["pieces"]:
        if set(entry) != {"lo", "hi", "coeffs"}:
            raise MeasureFormatError("piece entries need exactly keys lo, hi, coeffs")
        pieces.append((entry["lo"], entry["hi"], tuple(entry["coeffs"])))
    return _validate_pieces(pieces, "piecewise_poly")


def from_json(text: str) -> MeasureSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MeasureFormatError("measure file must hold a JSON object")
    return _from_dict(obj)


def to_json(mu: MeasureSpec) -> str:
    """Canonical JSON for the validated law (presets serialize normalized)."""
    if mu.kind == "atomic":
        obj = {"type": "atomic", "atoms": [{"x": x, "w": w} for x, w in mu.atoms]}
    elif mu.kind == "piecewise_poly":
        obj = {
            "type": "piecewise_poly",
            "pieces": [
                {"lo": lo, "hi": hi, "coeffs": list(c)} for lo, hi, c in mu.pieces
            ],
        }
    else:
        obj = {"type": "semicircle", "variance": mu.variance}
    return json.dumps(obj, separators=(",", ":"))


def load_measure(path) -> MeasureSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json(fh.read())


# ----------------------------------------------------------------------------
# support queries


@lru_cache(maxsize=None)
def _atom_arrays(mu: MeasureSpec):
    xs = np.array([x for x, _ in mu.atoms])
    ws = np.array([w for _, w in mu.atoms])
    return xs, ws


def on_support(mu: MeasureSpec, x: float, tol: float | None = None) -> bool:
    """True when x lies on the closed support within tolerance."""
    if tol is None:
        tol = 1e-12 * (1.0 + abs(x))
    if mu.kind == "atomic":
        xs, _ = _atom_arrays(mu)
        return bool(np.min(np.abs(xs - x)) <= tol)
    if mu.kind == "semicircle":
        return abs(x) <= mu.support.hi + tol
    return any(lo - tol <= x <= hi + tol for lo, hi, _ in mu.pieces)


def support_gap(mu: MeasureSpec, x: float) -> float:
    """Distance from x to the closed support (0 when on it)."""
    if mu.kind == "atomic":
        xs, _ = _atom_arrays(mu)
        return float(np.min(np.abs(xs - x)))
    if mu.kind == "semicircle":
        return max(0.0, abs(x) - mu.support.hi)
    return min(max(lo - x, 0.0, x - hi) for lo, hi, _ in mu.pieces)


# ----------------------------------------------------------------------------
# kernel bundles


def _kernel_rows(x: np.ndarray, a0: float, v2: float, keys) -> np.ndarray:
    u = a0 - x
    d = u * u + v2
    out = np.empty((len(keys), x.size))
    inv_d = 1.0 / d
    inv_d2 = None
    for i, k in enumerate(keys):
        if k == "p0":
            out[i] = inv_d
        elif k == "p1":
            out[i] = x * inv_d
        elif k == "pa":
            out[i] = 2.0 * u * inv_d
        elif k == "c1":
            out[i] = u * inv_d
        elif k in ("q0", "q1", "q2"):
            if inv_d2 is None:
                inv_d2 = inv_d * inv_d
            if k == "q0":
                out[i] = inv_d2
            elif k == "q1":
                out[i] = u * inv_d2
            else:
                out[i] = u * u * inv_d2
        elif k == "log":
            out[i] = np.log(d)
        else:
            raise KeyError(k)
    return out


def _semicircle_theta_breaks(r: float, a0: float, scale: float) -> list[float]:
    xs = ladder_points(-r, r, min(max(a0, -r), r), scale)
    th = np.arcsin(np.clip(np.asarray(xs) / r, -1.0, 1.0))
    th = np.unique(np.concatenate(([-np.pi / 2], th, [np.pi / 2])))
    return list(th)


def transforms(
    mu: MeasureSpec,
    a0: float,
    v2: float,
    keys: Sequence[str],
    atol: float | None = None,
    rtol: float | None = None,
) -> dict[str, float]:
    """Evaluate a bundle of kernel integrals sharing v2 > 0 in one pass."""
    if v2 <= 0.0:
        raise ValueError("transforms requires v2 > 0; use the v = 0 entry points")
    atol, rtol = _tols(atol, rtol)
    keys = tuple(keys)
    if mu.kind == "atomic":
        xs, ws = _atom_arrays(mu)
        vals = _kernel_rows(xs, a0, v2, keys) @ ws
        return dict(zip(keys, vals.tolist()))
    scale = math.sqrt(v2)
    acc = np.zeros(len(keys))
    if mu.kind == "semicircle":
        r = mu.support.hi

        def f(th):
            x = r * np.sin(th)
            w = (2.0 / np.pi) * np.cos(th) ** 2
            return _kernel_rows(x, a0, v2, keys) * w

        acc = integrate_adaptive(f, _semicircle_theta_breaks(r, a0, scale), atol, rtol)
    else:
        for lo, hi, coeffs in mu.pieces:

            def f(x, _c=coeffs):
                return _kernel_rows(x, a0, v2, keys) * poly_eval(_c, x)

            acc = acc + integrate_adaptive(
                f, ladder_points(lo, hi, a0, scale), atol, rtol
            )
    return dict(zip(keys, acc.tolist()))


# ----------------------------------------------------------------------------
# Poisson-type integrals


def p0(mu: MeasureSpec, a0: float, v: float, atol=None, rtol=None) -> float:
    """int dmu / ((a0-x)^2 + v^2); +inf sentinel when v = 0 and it diverges."""
    if v < 0.0:
        raise ValueError("v must be nonnegative")
    if v == 0.0:
        return p0_zero(mu, a0)
    return transforms(mu, a0, v * v, ("p0",), atol, rtol)["p0"]


def _piece_r0_r1_tolerances(coeffs) -> tuple[float, float]:
    # just above the rounding noise of poly_shift so genuine double zeros of
    # the density pass while any real divergence classifies as +inf
    md = 1.0 + max(abs(c) for c in coeffs)
    return 1e-11 * md, 1e-11 * md


def p0_zero(mu: MeasureSpec, a0: float) -> float:
    """The v = 0 Poisson integral int dmu/(a0-x)^2, evaluated in closed form."""
    if mu.kind == "atomic":
        xs, ws = _atom_arrays(mu)
        d = a0 - xs
        if np.min(np.abs(d)) <= 1e-13 * (1.0 + abs(a0)):
            return math.inf
        return float(np.sum(ws / (d * d)))
    if mu.kind == "semicircle":
        if abs(a0) <= mu.support.hi + 1e-13 * (1.0 + abs(a0)):
            return math.inf
        return float(-_semicircle_gprime(mu.variance, complex(a0)).real)
    total = 0.0
    for lo, hi, coeffs in mu.pieces:
        b = poly_shift(coeffs, a0)  # density in powers of (x - a0)
        edge = 1e-12 * (1.0 + abs(a0))
        if lo - edge <= a0 <= hi + edge:
            t0, t1 = _piece_r0_r1_tolerances(coeffs)
            if abs(b[0]) > t0 or (len(b) > 1 and abs(b[1]) > t1):
                return math.inf
            total += poly_definite(b[2:] or [0.0], lo - a0, hi - a0)
        else:
            u0, u1 = lo - a0, hi - a0
            total += b[0] * (1.0 / u0 - 1.0 / u1)
            if len(b) > 1:
                total += b[1] * math.log(abs(u1 / u0))
            if len(b) > 2:
                total += poly_definite(b[2:], u0, u1)
    return total


def p1(mu: MeasureSpec, a0: float, v: float, atol=None, rtol=None) -> float:
    """int x dmu / ((a0-x)^2 + v^2) for v > 0."""
    if v <= 0.0:
        raise ValueError("p1 requires v > 0")
    return transforms(mu, a0, v * v, ("p1",), atol, rtol)["p1"]


def q_integrals(
    mu: MeasureSpec, a0: float, v: float, atol=None, rtol=None
) -> tuple[float, float, float]:
    """Squared-kernel integrals (q0, q1, q2) for v > 0."""
    if v <= 0.0:
        raise ValueError("q_integrals requires v > 0")
    out = transforms(mu, a0, v * v, ("q0", "q1", "q2"), atol, rtol)
    return out["q0"], out["q1"], out["q2"]


# ----------------------------------------------------------------------------
# Cauchy transform


def _semicircle_g(s: float, z: complex) -> complex:
    # branch with G(z) ~ 1/z at infinity: sqrt(z^2-4s) := z*sqrt(1-4s/z^2)
    return (z - z * np.sqrt(1.0 - 4.0 * s / (z * z))) / (2.0 * s)


def _semicircle_gprime(s: float, z: complex) -> complex:
    root = z * np.sqrt(1.0 - 4.0 * s / (z * z))
    return (1.0 - z / root) / (2.0 * s)


def _piece_cauchy_real(coeffs, lo: float, hi: float, a0: float) -> float:
    # int rho(x)/(a0-x) dx with the rho(a0)*log term split off exactly
    b = poly_shift(coeffs, a0)
    u0, u1 = lo - a0, hi - a0
    val = 0.0
    if b[0] != 0.0:
        # clamp |u| away from 0: reachable only when a0 touches a piece edge
        # with vanishing density, where b[0]*log|u| is below rounding anyway
        floor = 1e-18 * (1.0 + abs(a0) + abs(lo) + abs(hi))
        c0 = u0 if abs(u0) > floor else math.copysign(floor, u0 if u0 != 0.0 else -1.0)
        c1 = u1 if abs(u1) > floor else math.copysign(floor, u1 if u1 != 0.0 else 1.0)
        val = -b[0] * math.log(abs(c1 / c0))
    if len(b) > 1:
        val -= poly_definite(b[1:], u0, u1)
    return val


def real_cauchy(mu: MeasureSpec, a0: float, density_tol: float = 1e-9) -> float:
    """Cauchy transform at a real point, tolerating vanishing-density contact.

    Used for boundary values where the point may touch the support closure but
    the local density (hence the principal term) vanishes; raises OnSupport
    when the integral genuinely diverges.
    """
    if mu.kind == "atomic":
        xs, ws = _atom_arrays(mu)
        d = a0 - xs
        if np.min(np.abs(d)) <= 1e-13 * (1.0 + abs(a0)):
            raise OnSupportError(f"atom at {a0}")
        return float(np.sum(ws / d))
    if mu.kind == "semicircle":
        if abs(a0) < mu.support.hi - 1e-13:
            raise OnSupportError(f"{a0} inside the semicircle support")
        return float(_semicircle_g(mu.variance, complex(a0)).real)
    total = 0.0
    for lo, hi, coeffs in mu.pieces:
        edge = 1e-12 * (1.0 + abs(a0))
        if lo - edge <= a0 <= hi + edge:
            local = float(poly_eval(coeffs, a0))
            if abs(local) > density_tol * (1.0 + max(abs(c) for c in coeffs)):
                raise OnSupportError(f"positive density at {a0}")
        total += _piece_cauchy_real(coeffs, lo, hi, a0)
    return total


def cauchy(
    mu: MeasureSpec, z: complex, tol: float | None = None, atol=None, rtol=None
) -> complex:
    """G(z) = int dmu(x)/(z - x); Im G < 0 on the upper half-plane."""
    z = complex(z)
    if z.imag == 0.0:
        if on_support(mu, z.real, tol):
            raise OnSupportError(f"{z.real} lies on the support")
        if mu.kind == "atomic":
            xs, ws = _atom_arrays(mu)
            return complex(np.sum(ws / (z.real - xs)))
        if mu.kind == "semicircle":
            return complex(_semicircle_g(mu.variance, z).real)
        return complex(sum(_piece_cauchy_real(c, lo, hi, z.real) for lo, hi, c in mu.pieces))
    if mu.kind == "atomic":
        xs, ws = _atom_arrays(mu)
        return complex(np.sum(ws / (z - xs)))
    if mu.kind == "semicircle":
        return complex(_semicircle_g(mu.variance, z))
    out = transforms(mu, z.real, z.imag * z.imag, ("p0", "c1"), atol, rtol)
    return complex(out["c1"] - 1j * z.imag * out["p0"])


def cauchy_prime(
    mu: MeasureSpec, z: complex, tol: float | None = None, atol=None, rtol=None
) -> complex:
    """G'(z) = -int dmu(x)/(z - x)^2."""
    z = complex(z)
    if z.imag == 0.0:
        if on_support(mu, z.real, tol):
            raise OnSupportError(f"{z.real} lies on the support")
        if mu.kind == "semicircle":
            return complex(_semicircle_gprime(mu.variance, z).real)
        return complex(-p0_zero(mu, z.real))
    if mu.kind == "atomic":
        xs, ws = _atom_arrays(mu)
        return complex(-np.sum(ws / (z - xs) ** 2))
    if mu.kind == "semicircle":
        return complex(_semicircle_gprime(mu.variance, z))
    out = transforms(mu, z.real, z.imag * z.imag, ("q0", "q1", "q2"), atol, rtol)
    b = z.imag
    return complex(-(out["q2"] - b * b * out["q0"]) + 2j * b * out["q1"])


# ----------------------------------------------------------------------------
# logarithmic energy


def log_potential(
    mu: MeasureSpec, a0: float, c: float, atol=None, rtol=None
) -> float:
    """int log((x-a0)^2 + c) dmu(x) for c >= 0."""
    atol, rtol = _tols(atol, rtol)
    if c < 0.0:
        raise ValueError("c must be nonnegative")
    if mu.kind == "atomic":
        xs, ws = _atom_arrays(mu)
        d2 = (xs - a0) ** 2 + c
        if np.min(d2) <= 0.0 or (c == 0.0 and np.min(np.abs(xs - a0)) <= 1e-300):
            raise DivergentLogError(f"atom at {a0} with zero regularization")
        return float(np.sum(ws * np.log(d2)))
    if c == 0.0 and mu.kind == "piecewise_poly":
        total = 0.0
        for lo, hi, coeffs in mu.pieces:
            b = poly_shift(coeffs, a0)
            for k, bk in enumerate(b):
                total += 2.0 * bk * _uk_log_integral(k, lo - a0, hi - a0)
        return total
    if mu.kind == "semicircle":
        r = mu.support.hi

        def f(th):
            x = r * np.sin(th)
            w = (2.0 / np.pi) * np.cos(th) ** 2
            return np.log((x - a0) ** 2 + c) * w

        val = integrate_adaptive(
            f, _semicircle_theta_breaks(r, a0, math.sqrt(c)), atol, rtol
        )
        return float(val[0])
    # piecewise with c > 0
    total = 0.0
    for lo, hi, coeffs in mu.pieces:

        def f(x, _c=coeffs):
            return np.log((x - a0) ** 2 + c) * poly_eval(_c, x)

        total += float(
            integrate_adaptive(f, ladder_points(lo, hi, a0, math.sqrt(c)), atol, rtol)[0]
        )
    return total


def _uk_log_integral(k: int, u0: float, u1: float) -> float:
    """int u^k log|u| du over [u0, u1], splitting at 0 (integrable there)."""
    if u0 > u1:
        return -_uk_log_integral(k, u1, u0)
    if u0 < 0.0 < u1:
        return _uk_log_integral(k, u0, 0.0) + _uk_log_integral(k, 0.0, u1)

    def anti(u):
        if u == 0.0:
            return 0.0
        return u ** (k + 1) * (math.log(abs(u)) / (k + 1) - 1.0 / (k + 1) ** 2)

    return anti(u1) - anti(u0)


# ----------------------------------------------------------------------------
# quantiles


def quantile(mu: MeasureSpec, p: float) -> float:
    """Left-continuous inverse CDF: inf{x : F(x) >= p} for p in (0,1)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0,1)")
    if mu.kind == "atomic":
        acc = 0.0
        for x, w in mu.atoms:
            acc += w
            if acc >= p - 1e-15:
                return x
        return mu.atoms[-1][0]
    if mu.kind == "semicircle":
        r = mu.support.hi

        def fdf(x):
            f = _semicircle_cdf(r, x) - p
            df = 2.0 / (math.pi * r * r) * math.sqrt(max(r * r - x * x, 0.0))
            return f, (df if df > 0.0 else None)

        return bracket_newton(fdf, -r, r, flo=-p, fhi=1.0 - p, xtol=1e-15)
    acc = 0.0
    for lo, hi, coeffs in mu.pieces:
        mass = poly_definite(coeffs, lo, hi)
        if acc + mass >= p or (lo, hi, coeffs) == mu.pieces[-1]:
            target = p - acc

            def fdf(x):
                f = poly_definite(coeffs, lo, x) - target
                df = float(poly_eval(coeffs, x))
                return f, (df if df > 0.0 else None)

            return bracket_newton(fdf, lo, hi, flo=-target, fhi=mass - target, xtol=1e-15)
        acc += mass
    return mu.pieces[-1][1]


def _semicircle_cdf(r: float, x: float) -> float:
    x = min(max(x, -r), r)
    return 0.5 + (x * math.sqrt(max(r * r - x * x, 0.0)) + r * r * math.asin(x / r)) / (
        math.pi * r * r
    )
