"""Fallback drivers for user-supplied callables.

Same stepping as the numpy lane, but the drift and the test functions are
arbitrary Python callables of signature (t, x_vector) -> vector.  Always
runs in numpy regardless of the selected backend; used only when a spec
carries code -1.
"""

import numpy as np


def euler_paths_custom(dS, dt, x0, drift_fn):
    n, K = dS.shape
    X = np.empty((n, K + 1))
    s = np.zeros(n)
    d = np.zeros(n)
    x = np.full(n, x0)
    X[:, 0] = x
    for k in range(K):
        a = np.asarray(drift_fn(k * dt, x), dtype=np.float64)
        d = d + dt * a
        s = s + dS[:, k]
        x = (x0 + s) + d
        X[:, k + 1] = x
    return X


def discounted_occupation_custom(dS, dt, x0, drift_fn, f_fns, wdisc):
    n, K = dS.shape
    nf = len(f_fns)
    acc = np.zeros((nf, n))
    s = np.zeros(n)
    d = np.zeros(n)
    x = np.full(n, x0)
    for k in range(K + 1):
        t = k * dt
        for j in range(nf):
            acc[j] = acc[j] + wdisc[k] * np.asarray(f_fns[j](t, x), dtype=np.float64)
        if k < K:
            a = np.asarray(drift_fn(t, x), dtype=np.float64)
            d = d + dt * a
            s = s + dS[:, k]
            x = (x0 + s) + d
    return acc


def local_occupation_custom(dS, dt, x0, drift_fn, f_fns, m):
    n, K = dS.shape
    nf = len(f_fns)
    acc = np.zeros((nf, n))
    s = np.zeros(n)
    d = np.zeros(n)
    x = np.full(n, x0)
    alive = np.ones(n, dtype=bool)
    w = np.full(K + 1, dt)
    w[0] = 0.5 * dt
    w[K] = 0.5 * dt
    for k in range(K + 1):
        t = k * dt
        alive = alive & (np.abs(x) < m)
        if not alive.any():
            break
        gate = alive.astype(np.float64)
        for j in range(nf):
            fv = np.asarray(f_fns[j](t, x), dtype=np.float64)
            acc[j] = acc[j] + (w[k] * fv) * gate
        if k < K:
            a = np.asarray(drift_fn(t, x), dtype=np.float64)
            d = d + dt * a
            s = s + dS[:, k]
            x = (x0 + s) + d
    return acc
