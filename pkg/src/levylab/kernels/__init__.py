"""Hot loops behind the solver and the Monte Carlo estimators.

Two interchangeable lanes selected by the LEVYLAB_BACKEND environment
variable: a numba-jitted lane (paths outer, steps inner) and a pure numpy
lane (steps outer, vectorized across paths).  Per-path floating point
operation order is the same in both, and every built-in drift family uses
only +, *, floor, sign and comparisons, so trajectories agree bit for bit
across lanes.  The gaussian test-function family calls exp inside the loop,
where libm and numpy may disagree by an ulp; everything else is exact.

Contract shared by both lanes (arrays are contiguous float64):

euler_paths(dS, dt, x0, drift_code, drift_params) -> X
    dS (n, K) driving increments, X (n, K+1) states, X[:, 0] = x0.
    The state is kept as x0 + S_k + D_k with the running sums S (noise) and
    D (drift * dt) accumulated separately, so a zero drift reproduces
    x0 + cumsum(dS) exactly.

discounted_occupation(dS, dt, x0, drift_code, drift_params,
                      f_code, f_params, wdisc) -> acc
    f_params (n_f, P) rows of one test-function family, wdisc (K+1,)
    premultiplied trapezoid-times-discount weights.  acc[j, p] approximates
    int_0^T e^{-lam u} f_j(u, X_u) du along path p.

local_occupation(dS, dt, x0, drift_code, drift_params,
                 f_code, f_params, m) -> acc
    Undiscounted trapezoid accumulation of f_j(u, X_u), stopped at the
    first node with |X| >= m (the node itself contributes nothing).

Drift parameter rows by code:
    DRIFT_ZERO      []
    DRIFT_CONST     [v]
    DRIFT_SIGN      [K]
    DRIFT_CHECKER   [K, pt, px]
    DRIFT_MSIGN     [K, eps, N, g_1..g_N]
                    g samples the smoothed sign profile on v in [-1, 1]
                    uniformly (g_1 = -1, g_N = +1); eval is K times the
                    linear interpolant at v = x/eps, clamped to +-K outside
    DRIFT_MCHECKER  [K, pt, px, eps, Nt, Nx, gt_1..gt_Nt, gx_1..gx_Nx]
                    gt/gx sample one 2p-period of the smoothed square waves
                    on [0, 2p); eval is K times the product of the periodic
                    linear interpolants in t and x
    DRIFT_TABLE     [Lt, Lx, t0, dt_g, x0, dx_g, v_11..v_LtLx] (row-major)

Test-function parameter rows by code:
    F_BOX       [t0, t1, x0, x1, h]      h on [t0,t1) x [x0,x1), else 0
    F_GAUSS     [ct, cx, wt, wx, h, bt0, bt1, bx0, bx1]
                h * exp(-((t-ct)/wt)^2 - ((x-cx)/wx)^2) on the half-open
                box, else 0

Code -1 marks a user callable; those never reach these kernels (the
orchestrators run them through the fallback drivers in _custom).
"""

from .._backend import BACKEND

DRIFT_ZERO = 0
DRIFT_CONST = 1
DRIFT_SIGN = 2
DRIFT_CHECKER = 3
DRIFT_MSIGN = 4
DRIFT_MCHECKER = 5
DRIFT_TABLE = 6
DRIFT_CUSTOM = -1

F_BOX = 0
F_GAUSS = 1
F_CUSTOM = -1

if BACKEND == "numba":
    from ._impl_numba import euler_paths, discounted_occupation, local_occupation
else:
    from ._impl_numpy import euler_paths, discounted_occupation, local_occupation

from ._custom import (euler_paths_custom, discounted_occupation_custom,
                      local_occupation_custom)

__all__ = [
    "BACKEND",
    "euler_paths", "discounted_occupation", "local_occupation",
    "euler_paths_custom", "discounted_occupation_custom",
    "local_occupation_custom",
    "DRIFT_ZERO", "DRIFT_CONST", "DRIFT_SIGN", "DRIFT_CHECKER",
    "DRIFT_MSIGN", "DRIFT_MCHECKER", "DRIFT_TABLE", "DRIFT_CUSTOM",
    "F_BOX", "F_GAUSS", "F_CUSTOM",
]
