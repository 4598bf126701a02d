"""Command-line front end.

Subcommands: compute, pushforward, simulate, jn, characteristics, verify.
Measures come from --measure FILE (JSON schema) or --preset NAME[:params]
with presets semicircle[:variance], uniform[:lo,hi], bernoulli[:alpha].
Exit codes: 2 for validation errors, 3 for convergence failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import brown, characteristics, checks, jn, maps, measure, rmt, subordination, svg
from .errors import (
    DiracMeasureError,
    EmptyMeasureError,
    IBrownError,
    MeasureFormatError,
    NegativeMassError,
    NoConvergenceError,
    EigenFailureError,
    AmbiguousBranchError,
)

_VALIDATION_ERRORS = (
    MeasureFormatError,
    DiracMeasureError,
    NegativeMassError,
    EmptyMeasureError,
    ValueError,
)
_CONVERGENCE_ERRORS = (NoConvergenceError, EigenFailureError, AmbiguousBranchError)


def _parse_preset(text: str) -> measure.MeasureSpec:
    name, _, params = text.partition(":")
    args = [float(p) for p in params.split(",") if p] if params else []
    if name == "semicircle":
        return measure.semicircle(*args) if args else measure.semicircle()
    if name == "uniform":
        return measure.uniform(*args) if args else measure.uniform()
    if name == "bernoulli":
        return measure.bernoulli(*args) if args else measure.bernoulli()
    raise MeasureFormatError(f"unknown preset {name!r}")


def _load_measure(ns) -> measure.MeasureSpec:
    if ns.measure and ns.preset:
        raise MeasureFormatError("give either --measure or --preset, not both")
    if ns.measure:
        return measure.load_measure(ns.measure)
    if ns.preset:
        return _parse_preset(ns.preset)
    raise MeasureFormatError("a measure is required (--measure FILE or --preset NAME)")


def _out_dir(ns) -> Path:
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str):
    path.write_text(text, encoding="utf-8")
    print(path, file=sys.stderr)


def _fmt(x) -> float:
    return float("%.17g" % x)


def cmd_compute(ns) -> int:
    mu = _load_measure(ns)
    prof = brown.profile(mu, ns.t, n_grid=ns.grid)
    out = _out_dir(ns)
    _write(out / "profile.csv", prof.to_csv())
    summary = {
        "schema": 1,
        "t": ns.t,
        "measure": mu.label,
        "digest": mu.digest(),
        "omega_intervals": [[_fmt(a), _fmt(b)] for a, b in prof.omega_intervals],
        "mass": _fmt(prof.mass),
        "min_density": _fmt(float(prof.density.min())),
        "max_density": _fmt(float(prof.density.max())),
    }
    _write(out / "summary.json", json.dumps(summary, indent=2))
    if ns.svg:
        title = f"t={ns.t:g}  {mu.label}  [{mu.digest()}]"
        _write(out / "figure.svg", svg.render_profile_svg(prof, title))
    return 0


def cmd_pushforward(ns) -> int:
    mu = _load_measure(ns)
    out = _out_dir(ns)
    region = subordination.lambda_region(mu, ns.t)
    rows = ["a0,v_t,rho_t"]
    for lo, hi in region.intervals:
        for a0 in np.linspace(lo, hi, max(ns.grid // max(len(region.intervals), 1), 16))[1:-1]:
            v = subordination.v_t(mu, ns.t, a0)
            rho = maps.circular_density(mu, ns.t, complex(a0, 0.0))
            rows.append("%.17g,%.17g,%.17g" % (a0, v, rho))
    _write(out / "rho.csv", "\n".join(rows) + "\n")

    law = maps.law_additive(mu, ns.t, n_grid=ns.grid)
    _write(out / "law.csv", law.to_csv())
    qrows = ["a,q"]
    for a, u in zip(law.a, law.u):
        qrows.append("%.17g,%.17g" % (a, u))
    _write(out / "qt_curve.csv", "\n".join(qrows) + "\n")

    # boundary correspondence samples of the vertical-affine map vs the holomorphic map
    urows = ["a0,v_t,u_re,u_im,j_re,j_im,abs_diff"]
    worst = 0.0
    for lo, hi in region.intervals:
        for a0 in np.linspace(lo, hi, 33)[1:-1]:
            v = subordination.v_t(mu, ns.t, a0)
            lam0 = complex(a0, v)
            u = maps.u_t(mu, ns.t, lam0)
            jv = subordination.j_t(mu, ns.t, lam0)
            worst = max(worst, abs(u - jv))
            urows.append(
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g"
                % (a0, v, u.real, u.imag, jv.real, jv.imag, abs(u - jv))
            )
    _write(out / "ut_boundary.csv", "\n".join(urows) + "\n")

    rep = maps.pushforward_check(mu, ns.t)
    summary = {
        "schema": 1,
        "t": ns.t,
        "measure": mu.label,
        "digest": mu.digest(),
        "rectangle_max_discrepancy": _fmt(rep.max_discrepancy),
        "boundary_agreement": _fmt(worst),
        "law_mass": _fmt(float(law.cdf[-1])),
    }
    _write(out / "pushforward.json", json.dumps(summary, indent=2))
    return 0


def cmd_simulate(ns) -> int:
    mu = _load_measure(ns)
    out = _out_dir(ns)
    cfg = rmt.SimConfig(n=ns.n, t=ns.t, reps=ns.reps, seed=ns.seed, dilation=ns.dilation)
    cloud = rmt.simulate(mu, cfg)
    _write(out / "cloud.csv", cloud.to_csv())
    prof = brown.profile(mu, ns.t, n_grid=ns.grid)
    rep = rmt.compare(cloud, prof, mu, ns.t)
    summary = {"schema": 1, "t": ns.t, "measure": mu.label, "digest": mu.digest()}
    summary.update({k: _fmt(v) if isinstance(v, float) else v for k, v in rep.to_dict().items()})
    _write(out / "compare.json", json.dumps(summary, indent=2))
    if ns.svg:
        title = f"t={ns.t:g}  {mu.label}  [{mu.digest()}]  n={ns.n} reps={ns.reps}"
        _write(out / "figure.svg", svg.render_profile_svg(prof, title, cloud=cloud.points))
    return 0


def cmd_jn(ns) -> int:
    mu = _load_measure(ns)
    out = _out_dir(ns)
    prof = brown.profile(mu, ns.t, n_grid=max(ns.grid, 64))
    rows = ["a,w_main,w_jn,abs_diff"]
    worst = 0.0
    for sl in prof.blocks():
        idx = np.linspace(1, prof.grid[sl].size - 2, min(prof.grid[sl].size - 2, 200)).astype(int)
        for a, w in zip(prof.grid[sl][idx], prof.density[sl][idx]):
            wj = jn.jn_density(mu, ns.t, float(a))
            worst = max(worst, abs(wj - w))
            rows.append("%.17g,%.17g,%.17g,%.17g" % (a, w, wj, abs(wj - w)))
    _write(out / "jn.csv", "\n".join(rows) + "\n")
    summary = {
        "schema": 1,
        "t": ns.t,
        "measure": mu.label,
        "digest": mu.digest(),
        "max_abs_diff": _fmt(worst),
    }
    _write(out / "jn.json", json.dumps(summary, indent=2))
    return 0


def cmd_characteristics(ns) -> int:
    mu = _load_measure(ns)
    out = _out_dir(ns)
    rng = np.random.default_rng(ns.seed)
    span = max(abs(mu.support.lo), abs(mu.support.hi))
    samples = []
    worst = 0.0
    for _ in range(12):
        lam = complex(rng.uniform(-span - 2, span + 2), rng.uniform(-1.5, 1.5))
        eps = rng.uniform(0.1, 1.0)
        res = characteristics.pde_residual(mu, ns.t, lam, eps)
        worst = max(worst, res)
        samples.append({"re": _fmt(lam.real), "im": _fmt(lam.imag), "eps": _fmt(eps), "residual": _fmt(res)})
    conserved = checks.check_pde(mu, ns.t, n_points=0)[1]
    summary = {
        "schema": 1,
        "t": ns.t,
        "measure": mu.label,
        "digest": mu.digest(),
        "max_pde_residual": _fmt(worst),
        "constants_of_motion": _fmt(conserved.value),
        "samples": samples,
    }
    _write(out / "characteristics.json", json.dumps(summary, indent=2))
    return 0


def cmd_verify(ns) -> int:
    mu = _load_measure(ns)
    rows = checks.run_all(mu, ns.t)
    print(checks.format_table(rows))
    return 0 if all(r.passed for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ibrown", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--measure", help="path to a measure JSON file")
    common.add_argument("--preset", help="semicircle[:s] | uniform[:lo,hi] | bernoulli[:alpha]")
    common.add_argument("--t", type=float, required=True, help="time parameter (> 0)")
    common.add_argument("--grid", type=int, default=1024, help="grid points per interval")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--svg", action="store_true", help="also write figure.svg")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n", type=int, default=500, help="matrix size (simulate)")
    common.add_argument("--reps", type=int, default=1, help="repetitions (simulate)")
    common.add_argument("--dilation", type=float, default=0.05, help="boundary slack (simulate)")
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance override")

    for name, fn in (
        ("compute", cmd_compute),
        ("pushforward", cmd_pushforward),
        ("simulate", cmd_simulate),
        ("jn", cmd_jn),
        ("characteristics", cmd_characteristics),
        ("verify", cmd_verify),
    ):
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.tol is not None:
        measure.set_default_tolerances(atol=ns.tol, rtol=100.0 * ns.tol)
    try:
        return ns.func(ns)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _CONVERGENCE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except IBrownError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
