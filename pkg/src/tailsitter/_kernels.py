"""Compiled inner loops for network training.

Forward simulation of the leaky tanh network with RK4 (input held per
sample) and the exact reverse-mode gradient of the readout MSE through
every Runge-Kutta stage.
"""

import math

import numba
import numpy as np


@numba.njit(cache=True)
def _rate(c, Wx, drive, x, out, th):
    n = x.size
    for i in range(n):
        th[i] = math.tanh(x[i])
    for i in range(n):
        acc = -c[i] * x[i] + drive[i]
        for j in range(n):
            acc += Wx[i, j] * th[j]
        out[i] = acc


@numba.njit(cache=True)
def _drive(Wp, P, t, out):
    n, k = Wp.shape
    for i in range(n):
        acc = 0.0
        for j in range(k):
            acc += Wp[i, j] * math.tanh(P[t, j])
        out[i] = acc


@numba.njit(cache=True)
def simulate(c, Wx, Wp, P, x0, dt):
    """States at every sample; row ``t`` is the state before input ``P[t]``."""
    N = P.shape[0]
    n = x0.size
    X = np.empty((N + 1, n))
    X[0] = x0
    x = x0.copy()
    d = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    xs = np.empty(n)
    th = np.empty(n)
    for t in range(N):
        _drive(Wp, P, t, d)
        _rate(c, Wx, d, x, k1, th)
        for i in range(n):
            xs[i] = x[i] + 0.5 * dt * k1[i]
        _rate(c, Wx, d, xs, k2, th)
        for i in range(n):
            xs[i] = x[i] + 0.5 * dt * k2[i]
        _rate(c, Wx, d, xs, k3, th)
        for i in range(n):
            xs[i] = x[i] + dt * k3[i]
        _rate(c, Wx, d, xs, k4, th)
        for i in range(n):
            x[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        X[t + 1] = x
    return X


@numba.njit(cache=True)
def _vjp(c, Wx, th, g, out):
    # out = J^T g,  J = -diag(c) + Wx diag(1 - th**2)
    n = g.size
    for j in range(n):
        acc = 0.0
        for i in range(n):
            acc += Wx[i, j] * g[i]
        out[j] = -c[j] * g[j] + (1.0 - th[j] * th[j]) * acc


@numba.njit(cache=True)
def _accumulate(G, g, th):
    n = g.size
    for i in range(n):
        for j in range(n):
            G[i, j] += g[i] * th[j]


@numba.njit(cache=True)
def loss_and_grad(c, Wx, Wp, P, y, x0, dt, scale, r):
    """Readout MSE ``mean((scale * x_r - y)**2)`` and its gradient.

    Returns ``(loss, dWx, dWp, dc)``.
    """
    N = y.size
    n = x0.size
    k = P.shape[1]
    X = simulate(c, Wx, Wp, P, x0, dt)
    loss = 0.0
    for t in range(N):
        e = scale * X[t, r] - y[t]
        loss += e * e
    loss /= N
    gWx = np.zeros((n, n))
    gWp = np.zeros((n, k))
    gc = np.zeros(n)
    lam = np.zeros(n)
    lx = np.empty(n)
    d = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    x2 = np.empty(n)
    x3 = np.empty(n)
    x4 = np.empty(n)
    t1 = np.empty(n)
    t2 = np.empty(n)
    t3 = np.empty(n)
    t4 = np.empty(n)
    g1 = np.empty(n)
    g2 = np.empty(n)
    g3 = np.empty(n)
    g4 = np.empty(n)
    a = np.empty(n)
    tp = np.empty(k)
    for t in range(N - 1, -1, -1):
        x = X[t]
        for j in range(k):
            tp[j] = math.tanh(P[t, j])
        _drive(Wp, P, t, d)
        _rate(c, Wx, d, x, k1, t1)
        for i in range(n):
            x2[i] = x[i] + 0.5 * dt * k1[i]
        _rate(c, Wx, d, x2, k2, t2)
        for i in range(n):
            x3[i] = x[i] + 0.5 * dt * k2[i]
        _rate(c, Wx, d, x3, k3, t3)
        for i in range(n):
            x4[i] = x[i] + dt * k3[i]
            t4[i] = math.tanh(x4[i])
        for i in range(n):
            g4[i] = dt / 6.0 * lam[i]
            g3[i] = dt / 3.0 * lam[i]
            g2[i] = dt / 3.0 * lam[i]
            g1[i] = dt / 6.0 * lam[i]
            lx[i] = lam[i]
        _vjp(c, Wx, t4, g4, a)
        _accumulate(gWx, g4, t4)
        for i in range(n):
            g3[i] += dt * a[i]
            lx[i] += a[i]
        _vjp(c, Wx, t3, g3, a)
        _accumulate(gWx, g3, t3)
        for i in range(n):
            g2[i] += 0.5 * dt * a[i]
            lx[i] += a[i]
        _vjp(c, Wx, t2, g2, a)
        _accumulate(gWx, g2, t2)
        for i in range(n):
            g1[i] += 0.5 * dt * a[i]
            lx[i] += a[i]
        _vjp(c, Wx, t1, g1, a)
        _accumulate(gWx, g1, t1)
        for i in range(n):
            # df/dc_i = -x_i at every stage
            gc[i] -= g1[i] * x[i] + g2[i] * x2[i] + g3[i] * x3[i] + g4[i] * x4[i]
            lx[i] += a[i]
            gb = g1[i] + g2[i] + g3[i] + g4[i]
            for j in range(k):
                gWp[i, j] += gb * tp[j]
        for i in range(n):
            lam[i] = lx[i]
        lam[r] += 2.0 / N * (scale * X[t, r] - y[t]) * scale
    return loss, gWx, gWp, gc
