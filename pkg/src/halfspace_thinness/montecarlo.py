"""Monte Carlo for subordinate Brownian motion killed on leaving ``H``.

A path is simulated on a time grid: each step draws a subordinator increment
``dS`` and moves the Brownian component by ``sqrt(2 dS) N(0, I)``.  Exits and
hits of ``A`` are detected at grid points only.  Near the boundary the step is
refined so that the typical displacement stays well below ``x_d``.

All randomness comes from :class:`~halfspace_thinness.rng.CounterStream`
keyed by ``(seed, path, step, ...)``.  Paths are processed in fixed-size
chunks and reduced in path order, so the result does not depend on the
thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats

from . import bernstein, kernels
from .errors import DomainError, PreconditionError, SimulationError
from .halfspace import HPoint
from .rng import CounterStream

CHUNK = 1024
ESTIMATE_CEILING = 1.5
CENSOR_FLAG_FRACTION = 0.05
REFINE_FACTOR = 10.0
MAX_REFINE = 30
REJECTION_ROUNDS = 64
MAX_HALVINGS = 30
_GAUSS_LANE = 0


@dataclass(frozen=True)
class McConfig:
    """Simulation controls.

    ``max_steps`` bounds the number of grid steps per path (refinement can
    shrink the step a lot); ``None`` means ``64 * max_time / dt``.
    """

    seed: int
    n_paths: int
    dt: float
    max_time: float
    start: HPoint
    refine_near_boundary: bool = True
    threads: int | None = None
    max_steps: int | None = None

    def __post_init__(self):
        if not isinstance(self.n_paths, (int, np.integer)) or self.n_paths < 1:
            raise PreconditionError("n_paths must be >= 1")
        if not self.dt > 0:
            raise PreconditionError("dt must be positive")
        if not self.max_time > 0:
            raise PreconditionError("max_time must be positive")
        if not isinstance(self.start, HPoint):
            raise DomainError("start must be a point of H")

    @property
    def step_cap(self):
        if self.max_steps is not None:
            return int(self.max_steps)
        return 64 * int(math.ceil(self.max_time / self.dt))


# -- subordinator increments ---------------------------------------------------

def _kanter(s, u_angle, u_exp):
    """Positive ``s``-stable variates with ``E exp(-lam X) = exp(-lam^s)``."""
    U = np.pi * u_angle
    E = -np.log(u_exp)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        a = np.sin(s * U) / np.sin(U) ** (1.0 / s)
        b = (np.sin((1.0 - s) * U) / E) ** ((1.0 - s) / s)
        x = a * b
    return np.where(np.isfinite(x), x, np.inf)


def _component_increment(comp, dt, n, uniform, lane, diag):
    """Increments of ``w((lam+mu)^k - mu^k)`` over ``dt`` for ``n`` paths.

    Tempered components are sampled by rejection from the untempered law
    (accept with ``exp(-mu X)``).  Paths still rejected after
    ``REJECTION_ROUNDS`` rounds are redrawn as two half-steps.
    """
    s = comp.index
    scale = (comp.weight * dt) ** (1.0 / s)
    out = np.empty(n)
    todo = np.ones(n, dtype=bool)
    for block in range(REJECTION_ROUNDS if comp.tempering > 0 else 1):
        u = uniform(lane, block)
        x = scale * _kanter(s, u[:, 0], u[:, 1])
        if comp.tempering > 0:
            ok = todo & (u[:, 2] <= np.exp(-comp.tempering * x))
        else:
            ok = todo
        out[ok] = x[ok]
        todo &= ~ok
        if not todo.any():
            return out
    # rejection cap reached: split the remaining paths' step in two
    diag["halvings"] = diag.get("halvings", 0) + int(todo.sum())
    node, comp_slot = divmod(lane, 8)
    if node >= 2 ** MAX_HALVINGS:
        raise SimulationError("rejection sampler failed even after repeated halving",
                              dict(diag))
    idx = np.flatnonzero(todo)

    def sub(ln, blk):
        return uniform(ln, blk)[idx]

    left = _component_increment(comp, dt / 2, idx.size, sub, (2 * node) * 8 + comp_slot, diag)
    right = _component_increment(comp, dt / 2, idx.size, sub, (2 * node + 1) * 8 + comp_slot, diag)
    out[idx] = left + right
    return out


def _increments(spec, dt, n, uniform, diag):
    total = np.full(n, spec.drift * dt)
    for k, comp in enumerate(spec.components):
        total += _component_increment(comp, dt, n, uniform, 8 + k, diag)
    return total


def _generator_uniform(gen, n):
    return lambda lane, block: 1.0 - gen.random((n, 4))


def sample_subordinator_increment(spec, dt, rng, size=None, diagnostics=None):
    """Draw increments of the subordinator over a step ``dt``.

    Parameters
    ----------
    spec : ExponentSpec
    dt : float
        Step length, ``> 0``.
    rng : numpy.random.Generator or int
        Generator, or a seed for :func:`numpy.random.default_rng`.
    size : int, optional
        Number of independent increments; a float is returned if omitted.
    diagnostics : dict, optional
        Receives the count of rejection-cap halvings under ``"halvings"``.

    Returns
    -------
    float or ndarray
        Nonnegative increments with ``E exp(-lam dS) = exp(-dt phi(lam))``.
    """
    if not dt > 0:
        raise PreconditionError("dt must be positive")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    n = 1 if size is None else int(size)
    diag = diagnostics if diagnostics is not None else {}
    out = _increments(spec, float(dt), n, _generator_uniform(gen, n), diag)
    return float(out[0]) if size is None else out


# -- path simulation -----------------------------------------------------------

def _displacement_scales(spec, dt):
    """``r_m`` with ``phi(r_m^-2) = 2^m / dt`` for ``m = 0..MAX_REFINE``.

    ``r_m`` is the spatial scale reached in time ``dt 2^-m``; for the stable
    case it is ``(dt 2^-m)^(1/alpha)``.
    """
    out = np.empty(MAX_REFINE + 1)
    for m in range(MAX_REFINE + 1):
        target = 2.0 ** m / dt
        hi = 1.0
        while bernstein.phi(spec, hi) < target:
            hi *= 4.0
        lo = hi / 4.0
        while bernstein.phi(spec, lo) > target:
            lo /= 4.0
        lam = optimize.brentq(lambda x: bernstein.phi(spec, x) - target, lo, hi, rtol=1e-12)
        out[m] = lam ** -0.5
    return out


class _PathEngine:
    """Vectorised stepping of a batch of paths with per-path counters."""

    def __init__(self, spec, cfg):
        self.spec = spec
        self.cfg = cfg
        self.d = spec.dimension
        self.stream = CounterStream(cfg.seed)
        self.scales = _displacement_scales(spec, cfg.dt) if cfg.refine_near_boundary else None

    def step_sizes(self, xd):
        if self.scales is None:
            return np.full(xd.shape, self.cfg.dt)
        # smallest m with x_d >= REFINE_FACTOR * r_m (scales decrease in m)
        m = np.searchsorted(-REFINE_FACTOR * self.scales, -xd, side="left")
        m = np.minimum(m, MAX_REFINE)
        return self.cfg.dt * np.exp2(-m)

    def advance(self, paths, steps, x, dt_eff, diag):
        """One grid step for the listed paths; returns ``(x_new, dS)``."""
        n = paths.size
        by_dt = {}
        for v in np.unique(dt_eff):
            by_dt[v] = np.flatnonzero(dt_eff == v)
        ds = np.empty(n)
        for v, idx in by_dt.items():
            p, s = paths[idx], steps[idx]

            def uniform(lane, block, p=p, s=s):
                return self.stream.uniforms(p, s, block, lane)

            ds[idx] = _increments(self.spec, float(v), idx.size, uniform, diag)
        z = self.stream.normals(paths, steps, _GAUSS_LANE, self.d)
        return x + np.sqrt(2.0 * ds)[:, None] * z, ds


def _martin_surrogate(spec, x):
    """``h(x) = V(x_d) |x|^-d`` with the renewal surrogate ``V``."""
    xd = x[:, -1]
    return kernels.renewal_surrogate(spec, xd) * np.linalg.norm(x, axis=1) ** -spec.dimension


@dataclass
class PathSkeleton:
    times: np.ndarray
    positions: list
    exit_index: int | None
    subordinator_values: np.ndarray
    censored: bool

    def __post_init__(self):
        if np.any(np.diff(self.subordinator_values) < 0):
            raise SimulationError("subordinator path decreased")


EXITED = None  # position marker after the exit time


def simulate_killed_path(spec, cfg, rng_state=0):
    """Simulate a single path (index ``rng_state`` of the ``cfg.seed`` stream).

    The skeleton stops at the first grid point outside ``H`` (recorded as
    :data:`EXITED`) or at ``max_time``, in which case ``censored`` is set.
    """
    if cfg.start.dimension != spec.dimension:
        raise DomainError("start point dimension does not match the process")
    eng = _PathEngine(spec, cfg)
    paths = np.array([int(rng_state)], dtype=np.uint64)
    x = cfg.start.as_array()[None, :]
    t, s_val, step = 0.0, 0.0, 0
    times, positions, svals = [0.0], [cfg.start], [0.0]
    diag = {}
    while True:
        if t >= cfg.max_time or step >= cfg.step_cap:
            return PathSkeleton(np.array(times), positions, None, np.array(svals), True)
        dt_eff = eng.step_sizes(x[:, -1])
        x, ds = eng.advance(paths, np.array([step], dtype=np.uint64), x, dt_eff, diag)
        t += float(dt_eff[0])
        s_val += float(ds[0])
        step += 1
        times.append(t)
        svals.append(s_val)
        if x[0, -1] <= 0:
            positions.append(EXITED)
            return PathSkeleton(np.array(times), positions, len(times) - 1, np.array(svals), False)
        positions.append(HPoint.from_array(x[0]))


def _run_chunk(spec, set_spec, cfg, eng, first, count):
    """Simulate paths ``first .. first+count-1``.

    Returns per-path contribution, outcome code (0 exit, 1 hit, 2 censored)
    and exit/hit time, all in path order.
    """
    paths = np.arange(first, first + count, dtype=np.uint64)
    x = np.tile(cfg.start.as_array(), (count, 1))
    h0 = float(_martin_surrogate(spec, x[:1])[0])
    value = np.zeros(count)
    outcome = np.full(count, 2, dtype=np.int8)
    t_end = np.full(count, np.nan)
    t = np.zeros(count)
    steps = np.zeros(count, dtype=np.uint64)
    diag = {}
    start_in_a = bool(set_spec.contains(x[:1])[0])
    if start_in_a:
        value[:] = 1.0
        outcome[:] = 1
        t_end[:] = 0.0
        return value, outcome, t_end, diag
    alive = np.arange(count)
    cap = cfg.step_cap
    while alive.size:
        xa = x[alive]
        dt_eff = eng.step_sizes(xa[:, -1])
        xa, _ = eng.advance(paths[alive], steps[alive], xa, dt_eff, diag)
        x[alive] = xa
        t[alive] += dt_eff
        steps[alive] += np.uint64(1)
        exited = xa[:, -1] <= 0
        hit = ~exited & set_spec.contains(xa)
        if hit.any():
            idx = alive[hit]
            value[idx] = _martin_surrogate(spec, xa[hit]) / h0
            outcome[idx] = 1
        done = exited | hit
        outcome[alive[exited]] = 0
        t_end[alive[done]] = t[alive[done]]
        over = ~done & ((t[alive] >= cfg.max_time) | (steps[alive] >= cap))
        alive = alive[~done & ~over]
    return value, outcome, t_end, diag


@dataclass
class HittingReport:
    estimate: float
    std_error: float
    n_hit: int
    n_exited_without_hit: int
    n_censored: int
    seed: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_paths(self):
        return self.n_hit + self.n_exited_without_hit + self.n_censored

    @property
    def censored_fraction(self):
        return self.n_censored / self.n_paths

    @property
    def censored_flag(self):
        return self.censored_fraction > CENSOR_FLAG_FRACTION


def _workers(cfg):
    return cfg.threads if cfg.threads else (os.cpu_count() or 1)


def estimate_hitting_functional(spec, set_spec, cfg):
    """Estimate ``P_A h (x) / h(x)`` at ``x = cfg.start`` for the origin.

    ``h(x) = V(x_d) |x|^-d``.  Each path contributes ``h(X_T)/h(x)`` if it
    hits ``A`` at a grid time ``T`` before leaving ``H`` and ``0`` otherwise;
    censored paths (no hit, no exit by ``max_time``) contribute ``0`` and are
    counted separately, so the estimate is a lower bound for the truncated
    functional.
    """
    if set_spec.dimension != spec.dimension or cfg.start.dimension != spec.dimension:
        raise DomainError("set, process and start point must share the dimension")
    eng = _PathEngine(spec, cfg)
    starts = list(range(0, cfg.n_paths, CHUNK))

    def job(first):
        return _run_chunk(spec, set_spec, cfg, eng, first, min(CHUNK, cfg.n_paths - first))

    workers = min(_workers(cfg), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, starts))
    else:
        parts = [job(s) for s in starts]
    value = np.concatenate([p[0] for p in parts])
    outcome = np.concatenate([p[1] for p in parts])
    diag = {"halvings": sum(p[3].get("halvings", 0) for p in parts),
            "start_in_set": bool(set_spec.contains(cfg.start.as_array()[None, :])[0])}
    n = cfg.n_paths
    n_hit = int(np.sum(outcome == 1))
    n_exit = int(np.sum(outcome == 0))
    n_cens = int(np.sum(outcome == 2))
    diag["censored_fraction"] = n_cens / n
    if n_cens == n:
        raise SimulationError("every path was censored; increase max_time", diag)
    est = float(np.sum(value) / n)
    se = float(np.std(value, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    if est > ESTIMATE_CEILING:
        diag["estimate"] = est
        raise SimulationError(f"estimate {est:.4g} exceeds {ESTIMATE_CEILING}; surrogate "
                              "or discretisation fault", diag)
    return HittingReport(est, se, n_hit, n_exit, n_cens, int(cfg.seed), diag)


# -- dichotomy experiment ------------------------------------------------------

@dataclass
class DichotomyReport:
    heights: tuple
    thin: list
    nonthin: list

    @staticmethod
    def _trend(reports, heights):
        # Kendall tau of estimate against decreasing height; +1 = increasing as h shrinks
        if len(reports) < 2:
            return float("nan")
        tau = stats.kendalltau([-h for h in heights], [r.estimate for r in reports]).statistic
        return float(tau)

    @property
    def thin_trend(self):
        return self._trend(self.thin, self.heights)

    @property
    def nonthin_trend(self):
        return self._trend(self.nonthin, self.heights)

    @property
    def separated(self):
        """Non-thin estimate strictly above the thin one at every height."""
        return all(b.estimate > a.estimate for a, b in zip(self.thin, self.nonthin))

    @property
    def nonthin_monotone(self):
        """Non-thin estimates non-decreasing as the height decreases."""
        ordered = [r.estimate for _, r in sorted(zip(self.heights, self.nonthin), key=lambda p: -p[0])]
        return all(b >= a for a, b in zip(ordered, ordered[1:]))


def dichotomy_experiment(spec, thin_set, nonthin_set, heights, cfg):
    """Hitting functional of both sets from ``(0, ..., 0, h)`` for each height.

    Both arms use the same seed, so identical sets give identical sequences.
    """
    heights = tuple(float(h) for h in heights)
    if not heights:
        raise PreconditionError("heights must be non-empty")
    for s in (thin_set, nonthin_set):
        if s.kind.value != "LipschitzGraph":
            raise PreconditionError("dichotomy experiment needs Lipschitz graph sets")
    thin, nonthin = [], []
    d = spec.dimension
    for h in heights:
        c = McConfig(cfg.seed, cfg.n_paths, cfg.dt, cfg.max_time, HPoint((0.0,) * (d - 1), h),
                     cfg.refine_near_boundary, cfg.threads, cfg.max_steps)
        thin.append(estimate_hitting_functional(spec, thin_set, c))
        nonthin.append(estimate_hitting_functional(spec, nonthin_set, c))
    return DichotomyReport(heights, thin, nonthin)
