"""Jitted lane: paths outer, time steps inner.

Scalar logic mirrors _impl_numpy line for line; keep edits in sync.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _drift_s(code, p, t, x):
    if code == 0:
        return 0.0
    if code == 1:
        return p[0]
    if code == 2:
        return p[0] * np.sign(x)
    if code == 3:
        it = np.floor(t / p[1])
        ix = np.floor(x / p[2])
        i = it + ix
        par = i - 2.0 * np.floor(i / 2.0)
        return p[0] if par == 0.0 else -p[0]
    if code == 4:
        eps = p[1]
        L = int(p[2])
        acc = 0.0
        for l in range(L):
            acc = acc + p[3 + L + l] * np.sign(x - eps * p[3 + l])
        return p[0] * acc
    if code == 5:
        pt, px, eps = p[1], p[2], p[3]
        L = int(p[4])
        acc = 0.0
        for i in range(L):
            it = np.floor((t - eps * p[5 + i]) / pt)
            wi = p[5 + L + i]
            for j in range(L):
                ix = np.floor((x - eps * p[5 + j]) / px)
                s = it + ix
                par = s - 2.0 * np.floor(s / 2.0)
                w = wi * p[5 + L + j]
                acc = acc + (w if par == 0.0 else -w)
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
        if ix < 0.0:
            ix = 0.0
        if ix > Lx - 1.0:
            ix = Lx - 1.0
        return p[6 + int(it) * Lx + int(ix)]
    raise ValueError("unknown drift code")


@njit(cache=True)
def _feval_s(code, p, t, x):
    if code == 0:
        if t < p[0] or t >= p[1]:
            return 0.0
        if x >= p[2] and x < p[3]:
            return p[4]
        return 0.0
    if code == 1:
        if t < p[5] or t >= p[6]:
            return 0.0
        if x >= p[7] and x < p[8]:
            ut = (t - p[0]) / p[2]
            ux = (x - p[1]) / p[3]
            return p[4] * np.exp(-(ut * ut) - ux * ux)
        return 0.0
    raise ValueError("unknown test-function code")


@njit(cache=True)
def euler_paths(dS, dt, x0, drift_code, drift_params):
    n, K = dS.shape
    X = np.empty((n, K + 1))
    for q in range(n):
        s = 0.0
        d = 0.0
        x = x0
        X[q, 0] = x
        for k in range(K):
            a = _drift_s(drift_code, drift_params, k * dt, x)
            d = d + dt * a
            s = s + dS[q, k]
            x = (x0 + s) + d
            X[q, k + 1] = x
    return X


@njit(cache=True)
def discounted_occupation(dS, dt, x0, drift_code, drift_params,
                          f_code, f_params, wdisc):
    n, K = dS.shape
    nf = f_params.shape[0]
    acc = np.zeros((nf, n))
    for q in range(n):
        s = 0.0
        d = 0.0
        x = x0
        for k in range(K + 1):
            t = k * dt
            for j in range(nf):
                acc[j, q] = acc[j, q] + wdisc[k] * _feval_s(f_code, f_params[j], t, x)
            if k < K:
                a = _drift_s(drift_code, drift_params, t, x)
                d = d + dt * a
                s = s + dS[q, k]
                x = (x0 + s) + d
    return acc


@njit(cache=True)
def local_occupation(dS, dt, x0, drift_code, drift_params,
                     f_code, f_params, m):
    n, K = dS.shape
    nf = f_params.shape[0]
    acc = np.zeros((nf, n))
    w = np.full(K + 1, dt)
    w[0] = 0.5 * dt
    w[K] = 0.5 * dt
    for q in range(n):
        s = 0.0
        d = 0.0
        x = x0
        for k in range(K + 1):
            if abs(x) >= m:
                break
            t = k * dt
            for j in range(nf):
                acc[j, q] = acc[j, q] + w[k] * _feval_s(f_code, f_params[j], t, x)
            if k < K:
                a = _drift_s(drift_code, drift_params, t, x)
                d = d + dt * a
                s = s + dS[q, k]
                x = (x0 + s) + d
    return acc
