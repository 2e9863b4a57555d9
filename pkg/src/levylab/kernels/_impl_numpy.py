"""Pure numpy lane: time steps outer, paths vectorized.

Scalar helpers mirror _impl_numba line for line; keep edits in sync.
"""

import numpy as np


def _drift(code, p, t, x):
    if code == 0:
        return np.zeros_like(x)
    if code == 1:
        return np.full_like(x, p[0])
    if code == 2:
        return p[0] * np.sign(x)
    if code == 3:
        it = np.floor(t / p[1])
        ix = np.floor(x / p[2])
        i = it + ix
        par = i - 2.0 * np.floor(i / 2.0)
        return np.where(par == 0.0, p[0], -p[0])
    if code == 4:
        eps = p[1]
        L = int(p[2])
        acc = np.zeros_like(x)
        for l in range(L):
            acc = acc + p[3 + L + l] * np.sign(x - eps * p[3 + l])
        return p[0] * acc
    if code == 5:
        pt, px, eps = p[1], p[2], p[3]
        L = int(p[4])
        acc = np.zeros_like(x)
        for i in range(L):
            it = np.floor((t - eps * p[5 + i]) / pt)
            wi = p[5 + L + i]
            for j in range(L):
                ix = np.floor((x - eps * p[5 + j]) / px)
                s = it + ix
                par = s - 2.0 * np.floor(s / 2.0)
                w = wi * p[5 + L + j]
                acc = acc + np.where(par == 0.0, w, -w)
        return p[0] * acc
    if code == 6:
        Lt = int(p[0])
        Lx = int(p[1])
        it = np.floor((t - p[2]) / p[3] + 0.5)
        if it < 0.0:
            it = 0.0
        if it > Lt - 1.0:
            it = Lt - 1.0
        ix = np.floor((x - p[4]) / p[5] + 0.5)
        ix = np.clip(ix, 0.0, Lx - 1.0)
        idx = 6 + int(it) * Lx + ix.astype(np.int64)
        return p[idx]
    raise ValueError("unknown drift code %d" % code)


def _feval(code, p, t, x):
    if code == 0:
        if t < p[0] or t >= p[1]:
            return np.zeros_like(x)
        return np.where((x >= p[2]) & (x < p[3]), p[4], 0.0)
    if code == 1:
        if t < p[5] or t >= p[6]:
            return np.zeros_like(x)
        ut = (t - p[0]) / p[2]
        ux = (x - p[1]) / p[3]
        val = p[4] * np.exp(-(ut * ut) - ux * ux)
        return np.where((x >= p[7]) & (x < p[8]), val, 0.0)
    raise ValueError("unknown test-function code %d" % code)


def euler_paths(dS, dt, x0, drift_code, drift_params):
    n, K = dS.shape
    X = np.empty((n, K + 1))
    s = np.zeros(n)
    d = np.zeros(n)
    x = np.full(n, x0)
    X[:, 0] = x
    for k in range(K):
        a = _drift(drift_code, drift_params, k * dt, x)
        d = d + dt * a
        s = s + dS[:, k]
        x = (x0 + s) + d
        X[:, k + 1] = x
    return X


def discounted_occupation(dS, dt, x0, drift_code, drift_params,
                          f_code, f_params, wdisc):
    n, K = dS.shape
    nf = f_params.shape[0]
    acc = np.zeros((nf, n))
    s = np.zeros(n)
    d = np.zeros(n)
    x = np.full(n, x0)
    for k in range(K + 1):
        t = k * dt
        for j in range(nf):
            acc[j] = acc[j] + wdisc[k] * _feval(f_code, f_params[j], t, x)
        if k < K:
            a = _drift(drift_code, drift_params, t, x)
            d = d + dt * a
            s = s + dS[:, k]
            x = (x0 + s) + d
    return acc


def local_occupation(dS, dt, x0, drift_code, drift_params,
                     f_code, f_params, m):
    n, K = dS.shape
    nf = f_params.shape[0]
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
            # dead lanes add +0.0, which leaves a nonnegative accumulator
            # bit-identical to the jitted lane's early break
            acc[j] = acc[j] + (w[k] * _feval(f_code, f_params[j], t, x)) * gate
        if k < K:
            a = _drift(drift_code, drift_params, t, x)
            d = d + dt * a
            s = s + dS[:, k]
            x = (x0 + s) + d
    return acc
