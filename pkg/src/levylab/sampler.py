"""Increment and path samplers for the driving process.

Closed-form families draw exactly (Chambers-Mallows-Stuck for the stable
law, Poisson superposition for point masses, Box-Muller Gaussians via
numpy); general densities are sampled by truncating jumps below delta and
folding their first moment into the compensator drift.  Everything is
validated statistically against e^{-t psi(xi)} through ecf_report.

Reproducibility contract: a stream is a counter-based generator keyed by
(seed, stream_id); one stream drives one path.  For a fixed model the draw
order per block of K increments is frozen (jump draws first in storage
order, Gaussian component second, deterministic drift added last), so any
consumer that requests the same block length gets bit-identical increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .levy_model import (LevyModel, SymmetricStable, _measure_density,
                         _measure_hints, psi)

DELTA_DEFAULT = 1e-3

_TABLE_NODES = 4096


@dataclass(frozen=True)
class RngStream:
    """Counter-based stream id; (seed, stream_id) pins every draw."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not (0 <= int(v) < 2 ** 64):
                raise ValueError("%s must be a 64-bit unsigned integer" % name)

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class SamplePath:
    """One realized trajectory on a time grid, right-continuous convention.

    driving optionally carries the raw increments of the noise process so
    the identical noise can drive several drifts (coupling).
    """

    t_grid: np.ndarray
    values: np.ndarray
    kind: str
    driving: Optional[np.ndarray] = None

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "values", v)
        if self.kind not in ("levy", "solution"):
            raise ValueError("kind must be 'levy' or 'solution'")
        if t.ndim != 1 or v.shape != t.shape:
            raise ValueError("t_grid and values must be 1-d of equal length")
        if t.size == 0 or t[0] != 0.0 or np.any(np.diff(t) <= 0.0):
            raise ValueError("t_grid must start at 0 and strictly increase")
        if self.kind == "levy" and v[0] != 0.0:
            raise ValueError("a noise path starts at 0")
        if self.driving is not None:
            d = np.asarray(self.driving, dtype=np.float64)
            object.__setattr__(self, "driving", d)
            if d.shape != (t.size - 1,):
                raise ValueError("driving increments must have length len(t)-1")


# ---------------------------------------------------------------------------
# jump table for the truncation sampler


@dataclass(frozen=True)
class TruncationInfo:
    """What the small-jump cutoff removed and what replaces it."""

    delta: float
    rate: float                  # total intensity of retained jumps
    compensator: float           # drift folded in for retained |z| < 1
    neglected_variance: float    # int_{|z|<delta} z^2 nu(dz), the bias proxy


class _JumpTable:
    def __init__(self, model: LevyModel, delta: float):
        dens = _measure_density(model.nu)
        _, decay_e = _measure_hints(model.nu)
        B = 50.0
        while dens(B) * B / decay_e > 1e-12 and B < 1e6:
            B *= 2.0
        pos = np.geomspace(delta, B, _TABLE_NODES)
        zs = np.concatenate([-pos[::-1], pos])
        dv = np.array([dens(z) for z in zs])
        seg = 0.5 * (dv[1:] + dv[:-1]) * np.diff(zs)
        seg[_TABLE_NODES - 1] = 0.0  # the gap (-delta, delta) holds nothing
        self.z_nodes = zs
        self.cdf = np.concatenate([[0.0], np.cumsum(seg)])
        self.rate = float(self.cdf[-1])
        comp = 0.0
        if delta < 1.0:
            for sgn in (-1.0, 1.0):
                val, _ = quad(lambda z: sgn * z * dens(sgn * z), delta, 1.0,
                              limit=200)
                comp -= val
        nv = 0.0
        for sgn in (-1.0, 1.0):
            val, _ = quad(lambda z: z * z * dens(sgn * z), 0.0, delta,
                          limit=200)
            nv += val
        self.compensator = comp
        self.neglected_variance = nv
        self.delta = delta

    def draw(self, gen: np.random.Generator, count: int) -> np.ndarray:
        u = gen.random(count)
        return np.interp(u * self.rate, self.cdf, self.z_nodes)


_TABLE_CACHE: dict = {}


def _jump_table(model: LevyModel, delta: float) -> _JumpTable:
    # the frozen measure spec itself is the key; id() would be unsafe after gc
    key = (model.nu, delta)
    tab = _TABLE_CACHE.get(key)
    if tab is None:
        tab = _JumpTable(model, delta)
        _TABLE_CACHE[key] = tab
    return tab


def truncation_info(model: LevyModel, delta: float = DELTA_DEFAULT) -> TruncationInfo:
    """Report the bias bookkeeping of the small-jump cutoff."""
    if model.nu is None or model.nu.variant == "point_masses":
        raise ValueError("truncation applies to density-type measures only")
    tab = _jump_table(model, delta)
    return TruncationInfo(delta, tab.rate, tab.compensator,
                          tab.neglected_variance)


# ---------------------------------------------------------------------------
# increment generation


def _cms_transform(u: np.ndarray, w: np.ndarray, alpha: float) -> np.ndarray:
    # Chambers-Mallows-Stuck, symmetric case; degenerates to tan(theta) at
    # alpha=1 and to 2 sin(theta) sqrt(w) ~ N(0, 2) at alpha=2 on its own
    th = math.pi * (u - 0.5)
    s = np.sin(alpha * th) / np.cos(th) ** (1.0 / alpha)
    if alpha == 1.0:
        return s
    return s * (np.cos((1.0 - alpha) * th) / w) ** ((1.0 - alpha) / alpha)


def levy_increments(model: LevyModel, dt: float, K: int,
                    gen: np.random.Generator,
                    delta: float = DELTA_DEFAULT) -> np.ndarray:
    """K iid increments of the noise over steps of length dt, frozen order."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if K < 1:
        raise ValueError("need at least one increment")
    out = np.zeros(K)
    b = -model.c
    cf = model.closed_form
    if isinstance(cf, SymmetricStable):
        u = gen.random(K)
        w = gen.standard_exponential(K)
        out = (cf.scale * dt ** (1.0 / cf.alpha)) * _cms_transform(u, w, cf.alpha)
    elif model.nu is not None and model.nu.variant == "point_masses":
        for z, wgt in model.nu.masses:
            n = gen.poisson(wgt * dt, K)
            out = out + z * n
            if abs(z) < 1.0:
                b -= z * wgt
    elif model.nu is not None:
        tab = _jump_table(model, delta)
        counts = gen.poisson(tab.rate * dt, K)
        total = int(counts.sum())
        if total:
            jumps = tab.draw(gen, total)
            idx = np.repeat(np.arange(K), counts)
            out = out + np.bincount(idx, weights=jumps, minlength=K)
        b += tab.compensator
    if model.Q > 0.0:
        out = out + math.sqrt(model.Q * dt) * gen.standard_normal(K)
    return out + b * dt


def sample_increment(model: LevyModel, dt: float, rng: RngStream,
                     delta: float = DELTA_DEFAULT) -> float:
    """One draw distributed as the noise at time dt."""
    return float(levy_increments(model, dt, 1, rng.generator(), delta)[0])


def sample_path(model: LevyModel, t_grid, rng: RngStream,
                delta: float = DELTA_DEFAULT) -> SamplePath:
    """Cumulative sums of independent increments over consecutive intervals.

    A uniform grid consumes the stream as one block of K increments (the
    same order the batch solvers use); a nonuniform grid draws interval by
    interval.
    """
    t = np.asarray(t_grid, dtype=np.float64)
    if t.ndim != 1 or t.size < 2 or t[0] != 0.0 or np.any(np.diff(t) <= 0.0):
        raise ValueError("t_grid must start at 0 and strictly increase")
    steps = np.diff(t)
    gen = rng.generator()
    if np.all(np.abs(steps - steps[0]) <= 1e-12 * steps[0]):
        inc = levy_increments(model, float(steps[0]), steps.size, gen, delta)
    else:
        inc = np.empty(steps.size)
        for k, dtk in enumerate(steps):
            inc[k] = levy_increments(model, float(dtk), 1, gen, delta)[0]
    vals = np.concatenate([[0.0], np.cumsum(inc)])
    return SamplePath(t, vals, "levy", driving=inc)


# ---------------------------------------------------------------------------
# self-validation against the characteristic function


@dataclass(frozen=True)
class EcfReport:
    """Empirical characteristic function versus e^{-t psi} on a xi grid."""

    xi_grid: np.ndarray
    ecf: np.ndarray
    theory: np.ndarray
    abs_dev: np.ndarray
    max_abs_dev: float
    reference: float  # the 4/sqrt(n) acceptance line
    n_paths: int
    t: float

    @property
    def passed(self) -> bool:
        return self.max_abs_dev < self.reference


def ecf_report(model: LevyModel, t: float, n_paths: int, xi_grid,
               rng: Optional[RngStream] = None,
               delta: float = DELTA_DEFAULT) -> EcfReport:
    if n_paths < 10 ** 4:
        raise ValueError("need at least 1e4 paths for the acceptance line")
    if rng is None:
        rng = RngStream(0, 0)
    xi = np.asarray(xi_grid, dtype=np.float64)
    s = levy_increments(model, t, n_paths, rng.generator(), delta)
    ecf = np.exp(1j * np.outer(xi, s)).mean(axis=1)
    theory = np.exp(-t * psi(model, xi))
    dev = np.abs(ecf - theory)
    return EcfReport(xi, ecf, theory, dev, float(dev.max()),
                     4.0 / math.sqrt(n_paths), n_paths, t)
