"""Bounded drifts, their mollified approximations, and test functions.

Drifts carry a certified sup bound K and a (code, params) row understood by
the kernels; mollification convolves with the standard bump, evaluated by a
fixed 32-node Gauss-Legendre rule whose weights are renormalized to sum to
one exactly, so constants and the bound K survive smoothing to the ulp.

Test functions are nonnegative with a finite support box; their L2 norms
are exact for indicator boxes, erf closed forms for truncated gaussian
bumps, and adaptive 2-d quadrature for custom shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import dblquad
from scipy.special import erf, roots_legendre

from . import kernels as kk

# int_{-1}^{1} exp(-1/(1-u^2)) du; the bump normalizer is its reciprocal
_Z1 = 0.44399381616807937
C_BUMP = 1.0 / _Z1
# int |q1'| = 2 * q1(0) for the unimodal bump; enters the Lipschitz cert
C_Q = 2.0 * math.exp(-1.0) / _Z1

_GL_ORDER = 32


@dataclass(frozen=True)
class MollifierKernel:
    """Product bump q(t,x) = q1(t) q1(x), support the unit square at eps=1."""

    eps: float

    def __post_init__(self):
        if self.eps <= 0.0:
            raise ValueError("mollifier width must be positive")

    @staticmethod
    def q1(u):
        u = np.asarray(u, dtype=np.float64)
        inside = np.abs(u) < 1.0
        w = np.where(inside, 1.0 - u * u, 1.0)
        return np.where(inside, C_BUMP * np.exp(-1.0 / w), 0.0)

    @staticmethod
    def nodes() -> Tuple[np.ndarray, np.ndarray]:
        """Fixed quadrature nodes on (-1,1) and weights summing to 1."""
        return _GL_NODES, _GL_WEIGHTS


_u, _w = roots_legendre(_GL_ORDER)
_GL_NODES = np.asarray(_u, dtype=np.float64)
_raw = _w * MollifierKernel.q1(_GL_NODES)
_GL_WEIGHTS = _raw / _raw.sum()


@dataclass(frozen=True)
class DriftSpec:
    """Bounded measurable drift with the bound certified at construction.

    code/params mirror the kernel contract; code -1 marks a callable that
    only the fallback drivers can run.
    """

    family: str
    K: float
    eval: Callable
    code: int
    params: np.ndarray
    lipschitz_cert: Optional[float] = None
    base: Optional["DriftSpec"] = None
    eps: Optional[float] = None

    def __post_init__(self):
        if self.K < 0.0:
            raise ValueError("drift bound K must be >= 0")
        if self.family == "mollified" and self.lipschitz_cert is None:
            raise ValueError("mollified drifts must carry a Lipschitz cert")


def constant_drift(v: float) -> DriftSpec:
    v = float(v)

    def ev(t, x):
        shape = np.broadcast_shapes(np.shape(t), np.shape(x))
        return np.full(shape, v)

    return DriftSpec("constant", abs(v), ev, kk.DRIFT_CONST, np.array([v]))


def zero_drift() -> DriftSpec:
    def ev(t, x):
        shape = np.broadcast_shapes(np.shape(t), np.shape(x))
        return np.zeros(shape)

    return DriftSpec("constant", 0.0, ev, kk.DRIFT_ZERO, np.empty(0))


def sign_drift(K: float) -> DriftSpec:
    K = float(K)
    return DriftSpec("sign_x", K,
                     lambda t, x: K * np.sign(np.asarray(x, dtype=float)),
                     kk.DRIFT_SIGN, np.array([K]))


def checkerboard_drift(K: float, period_t: float, period_x: float) -> DriftSpec:
    K, pt, px = float(K), float(period_t), float(period_x)
    if pt <= 0.0 or px <= 0.0:
        raise ValueError("checkerboard periods must be positive")

    def ev(t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        i = np.floor(t / pt) + np.floor(x / px)
        par = i - 2.0 * np.floor(i / 2.0)
        return np.where(par == 0.0, K, -K)

    return DriftSpec("checkerboard", K, ev, kk.DRIFT_CHECKER,
                     np.array([K, pt, px]))


def table_drift(t_nodes, x_nodes, values) -> DriftSpec:
    """Nearest-cell lookup drift on a uniform (t, x) node grid."""
    t_nodes = np.asarray(t_nodes, dtype=np.float64)
    x_nodes = np.asarray(x_nodes, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if vals.shape != (t_nodes.size, x_nodes.size):
        raise ValueError("values must be (len(t_nodes), len(x_nodes))")
    for nm, g in (("t", t_nodes), ("x", x_nodes)):
        if g.size < 1 or (g.size > 1 and not np.allclose(
                np.diff(g), g[1] - g[0], rtol=0, atol=1e-12 * max(1, abs(g[-1])))):
            raise ValueError("%s nodes must be uniform" % nm)
    dtg = float(t_nodes[1] - t_nodes[0]) if t_nodes.size > 1 else 1.0
    dxg = float(x_nodes[1] - x_nodes[0]) if x_nodes.size > 1 else 1.0
    Lt, Lx = vals.shape
    params = np.concatenate([[Lt, Lx, t_nodes[0], dtg, x_nodes[0], dxg],
                             vals.ravel()])

    def ev(t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        it = np.clip(np.floor((t - t_nodes[0]) / dtg + 0.5), 0, Lt - 1)
        ix = np.clip(np.floor((x - x_nodes[0]) / dxg + 0.5), 0, Lx - 1)
        it, ix = np.broadcast_arrays(it, ix)
        return vals[it.astype(np.int64), ix.astype(np.int64)]

    return DriftSpec("table", float(np.abs(vals).max() if vals.size else 0.0),
                     ev, kk.DRIFT_TABLE, params)


def custom_drift(fn: Callable, K: float,
                 lipschitz_cert: Optional[float] = None) -> DriftSpec:
    """Wrap a user callable a(t, x) with a declared bound K.

    The bound is the caller's claim; it is probed, not proven.
    """
    return DriftSpec("custom", float(K), fn, kk.DRIFT_CUSTOM, np.empty(0),
                     lipschitz_cert=lipschitz_cert)


def mollify(a: DriftSpec, eps: float) -> DriftSpec:
    """Convolve a with the product bump at width eps.

    sign_x and checkerboard bases compile to kernel codes; anything else
    evaluates the tensor quadrature through the fallback path.
    """
    kern = MollifierKernel(eps)  # validates eps
    eps = float(eps)
    u, W = MollifierKernel.nodes()
    cert = a.K * C_Q / eps
    L = u.size
    if a.family == "constant":
        # kernel mass is one in the discrete rule as well: exact
        v = a.params[0] if a.code == kk.DRIFT_CONST else 0.0
        base_new = constant_drift(float(v))
        return DriftSpec("mollified", a.K, base_new.eval, base_new.code,
                         base_new.params, lipschitz_cert=cert, base=a, eps=eps)
    if a.family == "sign_x":
        K = a.params[0]
        params = np.concatenate([[K, eps, L], u, W])

        def ev(t, x):
            x = np.asarray(x, dtype=float)
            acc = np.zeros_like(x)
            for l in range(L):
                acc = acc + W[l] * np.sign(x - eps * u[l])
            return K * acc

        return DriftSpec("mollified", a.K, ev, kk.DRIFT_MSIGN, params,
                         lipschitz_cert=cert, base=a, eps=eps)
    if a.family == "checkerboard":
        K, pt, px = a.params[:3]
        params = np.concatenate([[K, pt, px, eps, L], u, W])

        def ev(t, x):
            t = np.asarray(t, dtype=float)
            x = np.asarray(x, dtype=float)
            t, x = np.broadcast_arrays(t, x)
            acc = np.zeros_like(x)
            for i in range(L):
                it = np.floor((t - eps * u[i]) / pt)
                for j in range(L):
                    ix = np.floor((x - eps * u[j]) / px)
                    s = it + ix
                    par = s - 2.0 * np.floor(s / 2.0)
                    wij = W[i] * W[j]
                    acc = acc + np.where(par == 0.0, wij, -wij)
            return K * acc

        return DriftSpec("mollified", a.K, ev, kk.DRIFT_MCHECKER, params,
                         lipschitz_cert=cert, base=a, eps=eps)

    base_ev = a.eval

    def ev(t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        t, x = np.broadcast_arrays(t, x)
        acc = np.zeros_like(x, dtype=float)
        for i in range(L):
            for j in range(L):
                acc = acc + (W[i] * W[j]) * np.asarray(
                    base_ev(t - eps * u[i], x - eps * u[j]), dtype=float)
        return acc

    return DriftSpec("mollified", a.K, ev, kk.DRIFT_CUSTOM, np.empty(0),
                     lipschitz_cert=cert, base=a, eps=eps)


def lipschitz_probe(a: DriftSpec, x_grid, t_grid=(0.0,)) -> float:
    """Max divided difference in x over adjacent grid pairs."""
    x = np.asarray(x_grid, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least two x points")
    best = 0.0
    for t in np.asarray(t_grid, dtype=np.float64).ravel():
        v = np.asarray(a.eval(float(t), x), dtype=float)
        dd = np.abs(np.diff(v)) / np.diff(x)
        best = max(best, float(dd.max()))
    return best


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFunction:
    """Nonnegative f with finite support box [t0,t1) x [x0,x1)."""

    family: str
    support_box: Tuple[float, float, float, float]
    eval: Callable
    code: int
    params: np.ndarray

    def __post_init__(self):
        t0, t1, x0, x1 = self.support_box
        if not (t1 > t0 and x1 > x0):
            raise ValueError("support box must have positive extent")
        if not all(map(math.isfinite, self.support_box)):
            raise ValueError("support box must be finite")


def indicator_box(t0: float, t1: float, x0: float, x1: float,
                  height: float = 1.0) -> TestFunction:
    if height < 0.0:
        raise ValueError("test functions are nonnegative")
    if t0 < 0.0:
        raise ValueError("time support starts at or after 0")
    box = (float(t0), float(t1), float(x0), float(x1))
    h = float(height)

    def ev(t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        return np.where((t >= box[0]) & (t < box[1])
                        & (x >= box[2]) & (x < box[3]), h, 0.0)

    return TestFunction("indicator_box", box, ev, kk.F_BOX,
                        np.array([box[0], box[1], box[2], box[3], h]))


def gaussian_bump(center_t: float, center_x: float, width_t: float,
                  width_x: float, height: float = 1.0) -> TestFunction:
    """h exp(-((t-ct)/wt)^2 - ((x-cx)/wx)^2), truncated 4 widths out."""
    if height < 0.0:
        raise ValueError("test functions are nonnegative")
    if width_t <= 0.0 or width_x <= 0.0:
        raise ValueError("widths must be positive")
    ct, cx, wt, wx, h = map(float, (center_t, center_x, width_t, width_x,
                                    height))
    # time support clipped at 0; an empty box is rejected downstream
    box = (max(0.0, ct - 4.0 * wt), ct + 4.0 * wt, cx - 4.0 * wx, cx + 4.0 * wx)

    def ev(t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        ut = (t - ct) / wt
        ux = (x - cx) / wx
        inside = ((t >= box[0]) & (t < box[1]) & (x >= box[2]) & (x < box[3]))
        return np.where(inside, h * np.exp(-(ut * ut) - ux * ux), 0.0)

    return TestFunction("gaussian_bump_truncated", box, ev, kk.F_GAUSS,
                        np.array([ct, cx, wt, wx, h,
                                  box[0], box[1], box[2], box[3]]))


def custom_test_function(fn: Callable, support_box) -> TestFunction:
    box = tuple(float(v) for v in support_box)
    return TestFunction("custom", box, fn, kk.F_CUSTOM, np.empty(0))


def shift_test_function(f: TestFunction, dt0: float, dx0: float) -> TestFunction:
    """The function (u, y) -> f(dt0 + u, dx0 + y), support box moved along.

    Baking the probe point into f lets one kernel pass serve several
    probes on a shared path set.
    """
    t0, t1, x0, x1 = f.support_box
    box = (t0 - dt0, t1 - dt0, x0 - dx0, x1 - dx0)
    if f.code == kk.F_BOX:
        p = f.params
        return TestFunction(f.family, box, lambda t, x: f.eval(dt0 + np.asarray(t, dtype=float),
                                                               dx0 + np.asarray(x, dtype=float)),
                            kk.F_BOX,
                            np.array([p[0] - dt0, p[1] - dt0,
                                      p[2] - dx0, p[3] - dx0, p[4]]))
    if f.code == kk.F_GAUSS:
        p = f.params
        return TestFunction(f.family, box, lambda t, x: f.eval(dt0 + np.asarray(t, dtype=float),
                                                               dx0 + np.asarray(x, dtype=float)),
                            kk.F_GAUSS,
                            np.array([p[0] - dt0, p[1] - dx0, p[2], p[3], p[4],
                                      p[5] - dt0, p[6] - dt0,
                                      p[7] - dx0, p[8] - dx0]))
    return TestFunction(f.family, box, lambda t, x: f.eval(dt0 + np.asarray(t, dtype=float),
                                                           dx0 + np.asarray(x, dtype=float)),
                        kk.F_CUSTOM, np.empty(0))


def _gauss_line_sq_integral(c: float, w: float, lo: float, hi: float) -> float:
    # int_lo^hi exp(-2((s-c)/w)^2) ds
    s2 = math.sqrt(2.0)
    return w * math.sqrt(math.pi / 8.0) * (erf(s2 * (hi - c) / w)
                                           - erf(s2 * (lo - c) / w))


def _l2_on_box(f: TestFunction, box) -> float:
    t0, t1, x0, x1 = box
    if t1 <= t0 or x1 <= x0:
        return 0.0
    if f.code == kk.F_BOX:
        h = f.params[4]
        return float(h * math.sqrt((t1 - t0) * (x1 - x0)))
    if f.code == kk.F_GAUSS:
        ct, cx, wt, wx, h = f.params[:5]
        it = _gauss_line_sq_integral(ct, wt, t0, t1)
        ix = _gauss_line_sq_integral(cx, wx, x0, x1)
        return float(h * math.sqrt(it * ix))
    val, err = dblquad(lambda x, t: float(np.asarray(f.eval(t, x)) ** 2),
                       t0, t1, x0, x1, epsabs=1e-12, epsrel=1e-10)
    return math.sqrt(max(val, 0.0))


def l2_norm(f: TestFunction) -> float:
    """L2 norm of f over the plane (equals the norm over its support box)."""
    return _l2_on_box(f, f.support_box)


def l2_norm_local(f: TestFunction, m: float, t: float) -> float:
    """L2 norm of f restricted to [0, t] x [-m, m]."""
    if m <= 0.0 or t <= 0.0:
        return 0.0
    t0, t1, x0, x1 = f.support_box
    box = (max(t0, 0.0), min(t1, t), max(x0, -m), min(x1, m))
    return _l2_on_box(f, box)
