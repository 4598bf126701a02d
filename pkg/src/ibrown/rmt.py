"""Monte Carlo validation: dense random-matrix models whose spectra should
fill the computed planar region.

The model is D + i sqrt(t) H with D a deterministic diagonal of law quantiles
and H drawn from the Gaussian unitary ensemble normalized so its spectral law
tends to the unit-variance semicircle. The Hermitian control D + sqrt(t) H
targets the additive law computed by the pushforward route.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from io import StringIO

import numpy as np

from .brown import BrownProfile
from .errors import EigenFailureError
from .maps import AdditiveLaw, law_additive
from .measure import MeasureSpec, quantile


@dataclass(frozen=True)
class SimConfig:
    """Simulation parameters; seed feeds a counter-based generator keyed by
    (seed, rep) so clouds are reproducible and order-independent."""

    n: int
    t: float
    reps: int = 1
    seed: int = 0
    dilation: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.t <= 0.0:
            raise ValueError("t must be positive")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.dilation < 0.0:
            raise ValueError("dilation must be nonnegative")
        if not 0 <= int(self.seed) < 2 **64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class EigenCloud:
    """n*reps complex eigenvalues with their repetition index."""

    points: np.ndarray
    rep: np.ndarray
    config: SimConfig

    def to_csv(self) -> str:
        buf = StringIO()
        buf.write("re,im,rep\n")
        for p, r in zip(self.points, self.rep):
            buf.write("%.17g,%.17g,%d\n" % (p.real, p.imag, r))
        return buf.getvalue()


def _rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[np.uint64(seed), np.uint64(rep)]))


def sample_gue(n: int, seed: int, rep: int = 0) -> np.ndarray:
    """Hermitian draw: off-diagonal complex Gaussian with variance 1/n,
    real diagonal with variance 1/n; spectral law tends to semicircle(1)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    g = _rng(seed, rep)
    a = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    return (a + a.conj().T) / (2.0 * math.sqrt(n))


def deterministic_x(mu: MeasureSpec, n: int) -> np.ndarray:
    """Diagonal of law quantiles at midpoints (j - 1/2)/n, ascending."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return np.array([quantile(mu, (j + 0.5) / n) for j in range(n)])


def _eigvals_with_retry(m: np.ndarray, g: np.random.Generator) -> np.ndarray:
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError:
        # retry once with a perturbed shift before giving up
        scale = np.max(np.abs(m)) or 1.0
        jitter = 1e-13 * scale * g.standard_normal(m.shape[0])
        try:
            return np.linalg.eigvals(m + np.diag(jitter))
        except np.linalg.LinAlgError as exc:
            raise EigenFailureError(f"eigensolver failed twice: {exc}") from exc


def simulate(mu: MeasureSpec, cfg: SimConfig, workers: int = 1) -> EigenCloud:
    """Eigenvalue cloud of D + i sqrt(t) H over cfg.reps repetitions.

    Repetitions can run on a thread pool (LAPACK releases the GIL) and merge
    in repetition order, so the cloud is bitwise reproducible for a fixed
    seed regardless of worker count. The default stays serial: each dense
    solve already saturates the BLAS threads.
    """
    d = deterministic_x(mu, cfg.n)
    root_t = math.sqrt(cfg.t)

    def one(rep: int) -> np.ndarray:
        h = sample_gue(cfg.n, cfg.seed, rep)
        m = np.diag(d.astype(complex)) + 1j * root_t * h
        return _eigvals_with_retry(m, _rng(cfg.seed, rep))

    if cfg.reps == 1 or workers <= 1:
        results = [one(r) for r in range(cfg.reps)]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, cfg.reps)) as pool:
            results = list(pool.map(one, range(cfg.reps)))
    points = np.concatenate(results)
    rep_idx = np.repeat(np.arange(cfg.reps), cfg.n)
    points.setflags(write=False)
    rep_idx.setflags(write=False)
    return EigenCloud(points=points, rep=rep_idx, config=cfg)


def simulate_hermitian(mu: MeasureSpec, cfg: SimConfig, workers: int = 1) -> np.ndarray:
    """Real eigenvalues of the Hermitian control D + sqrt(t) H, all reps merged."""
    d = deterministic_x(mu, cfg.n)
    root_t = math.sqrt(cfg.t)

    def one(rep: int) -> np.ndarray:
        h = sample_gue(cfg.n, cfg.seed, rep)
        return np.linalg.eigvalsh(np.diag(d.astype(complex)) + root_t * h)

    if cfg.reps == 1 or workers <= 1:
        results = [one(r) for r in range(cfg.reps)]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, cfg.reps)) as pool:
            results = list(pool.map(one, range(cfg.reps)))
    return np.concatenate(results)


def _clamp_to_intervals(x: np.ndarray, intervals) -> np.ndarray:
    """Snap each value to the nearest point of the union of closed intervals."""
    out = np.array(x, dtype=float)
    best = np.full(x.shape, np.inf)
    snapped = np.empty_like(out)
    for lo, hi in intervals:
        cand = np.clip(x, lo, hi)
        dist = np.abs(cand - x)
        take = dist < best
        best[take] = dist[take]
        snapped[take] = cand[take]
    return snapped


def ks_statistic(samples: np.ndarray, cdf_values: np.ndarray) -> float:
    """One-sample sup-distance: samples must be sorted, cdf_values = F(samples)."""
    n = samples.size
    grid = np.arange(1, n + 1) / n
    return float(np.max(np.maximum(np.abs(grid - cdf_values), np.abs(grid - 1.0 / n - cdf_values))))


@dataclass(frozen=True)
class CompareReport:
    """Cloud-versus-computation comparison.

    inside_fraction: share of eigenvalues with |Im| <= b_t(Re) + dilation.
    ks_marginal: sup-CDF distance of Re parts against the vertical marginal.
    ks_pushforward: sup-CDF distance of pushed (clamped) Re parts against the
    additive law.
    """

    inside_fraction: float
    ks_marginal: float
    ks_pushforward: float
    n_points: int
    dilation: float

    def to_dict(self) -> dict:
        return {
            "inside_fraction": self.inside_fraction,
            "ks_marginal": self.ks_marginal,
            "ks_pushforward": self.ks_pushforward,
            "n_points": self.n_points,
            "dilation": self.dilation,
        }


def compare(
    cloud: EigenCloud,
    profile: BrownProfile,
    mu: MeasureSpec,
    t: float,
    law: AdditiveLaw | None = None,
) -> CompareReport:
    """Score an eigenvalue cloud against the computed region and pushforwards."""
    if abs(cloud.config.t - t) > 1e-12 * (1.0 + abs(t)):
        raise ValueError("cloud was simulated at a different t")
    if law is None:
        law = law_additive(mu, t)
    pts = cloud.points
    re = pts.real
    heights = profile.b_interp(re)
    inside = np.abs(pts.imag) <= heights + cloud.config.dilation
    frac = float(np.mean(inside))

    order = np.argsort(re)
    sorted_re = re[order]
    ks_marg = ks_statistic(sorted_re, law.cdf_at_a(sorted_re))

    clamped = _clamp_to_intervals(sorted_re, profile.omega_intervals)
    pushed = law.q_of_a(clamped)
    ks_push = ks_statistic(np.sort(pushed), law.cdf_at_u(np.sort(pushed)))

    return CompareReport(
        inside_fraction=frac,
        ks_marginal=ks_marg,
        ks_pushforward=ks_push,
        n_points=pts.size,
        dilation=cloud.config.dilation,
    )
