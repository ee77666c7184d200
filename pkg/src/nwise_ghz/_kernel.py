"""Compiled fixed-tableau Runge-Kutta loop for H psi = w(tau) z psi + d psi + f psi[::-1].

The same kernel serves the 2-dimensional pair problems and the full 2**N
oracle: both share the "diagonal plus reversed-vector" structure.
"""
import math

import numba as nb
import numpy as np
from scipy.integrate import DOP853

# 8th-order Dormand-Prince weights; only the high-order solution is used
_A = np.ascontiguousarray(DOP853.A, dtype=np.float64)
_B = np.ascontiguousarray(DOP853.B, dtype=np.float64)
_C = np.ascontiguousarray(DOP853.C, dtype=np.float64)
ORDER = DOP853.order
N_STAGES = DOP853.n_stages

# sample intervals longer than this are split before stepping
MAX_SEGMENT = 0.5

DRIVE_LINEAR = 0
DRIVE_TANGENT = 1
DRIVE_CONSTANT = 2


@nb.njit(cache=True)
def _omega(kind, params, t0, off):
    # params: (amplitude, tau_f, clamp) already divided by the time scale.
    # tau = t0 + off.  The tangent is evaluated as a cotangent of the distance
    # to the nearer pole at +-tau_f, so the rounding of tau is not magnified
    # by the pole.
    if kind == DRIVE_LINEAR:
        return params[0] * (t0 + off)
    if kind == DRIVE_CONSTANT:
        return params[0]
    tau_f = params[1]
    if t0 >= 0.0:
        gap = math.pi / 2 * ((tau_f - t0) - off) / tau_f
        sign = 1.0
    else:
        gap = math.pi / 2 * ((tau_f + t0) + off) / tau_f
        sign = -1.0
    if gap < params[2]:
        gap = params[2]
    return sign * params[0] / math.tan(gap)


@nb.njit(cache=True)
def _rhs(kind, params, t0, off, psi, z, d, f, out):
    # -i * ((w z + d) psi + f psi[::-1]) on interleaved (re, im) float views
    w = _omega(kind, params, t0, off)
    n = z.shape[0]
    for k in range(n):
        r = n - 1 - k
        dk = w * z[k] + d[k]
        pr = psi[2 * k]
        pi = psi[2 * k + 1]
        qr = psi[2 * r]
        qi = psi[2 * r + 1]
        fr = f[2 * k]
        fi = f[2 * k + 1]
        out[2 * k] = dk * pi + fr * qi + fi * qr
        out[2 * k + 1] = -(dk * pr + fr * qr - fi * qi)


@nb.njit(cache=True)
def _axpy(a, x, y):
    for k in range(x.shape[0]):
        y[k] += a * x[k]


@nb.njit(cache=True)
def _advance(y, ytmp, K, t0, t1, h, kind, params, z, d, f, zmax, static_norm):
    # time is tracked as an offset from the segment start; accumulating tau
    # itself loses ~ulp(tau) per step, which large detunings amplify
    # real views: the stage combinations are plain real axpys
    Kr = K.view(np.float64)
    yr = y.view(np.float64)
    ytr = ytmp.view(np.float64)
    fr = f.view(np.float64)
    length = t1 - t0
    off = 0.0
    steps = 0
    while off < length:
        hnorm = abs(_omega(kind, params, t0, off)) * zmax + static_norm
        dt = h / (1.0 + hnorm)
        last = False
        if off + dt >= length - 1e-12 * dt:
            dt = length - off
            last = True
        else:
            # step by exactly the representable advance of the offset, so
            # the clock and the state never drift apart by rounding
            dt = (off + dt) - off
        _rhs(kind, params, t0, off, yr, z, d, fr, Kr[0])
        for i in range(1, N_STAGES):
            ytmp[:] = y
            for j in range(i):
                a = dt * _A[i, j]
                if a != 0.0:
                    _axpy(a, Kr[j], ytr)
            _rhs(kind, params, t0, off + _C[i] * dt, ytr, z, d, fr, Kr[i])
        for i in range(N_STAGES):
            b = dt * _B[i]
            if b != 0.0:
                _axpy(b, Kr[i], yr)
        off = length if last else off + dt
        steps += 1
    return steps


@nb.njit(cache=True)
def integrate(psi0, samples, h, kind, params, z, d, f, static_norm):
    """Propagate ``psi0`` through ``samples`` with steps ``h / (1 + |H(tau)|)``.

    Returns (amplitudes[n_samples, dim], number of steps).
    """
    n = psi0.shape[0]
    n_out = samples.shape[0]
    out = np.empty((n_out, n), dtype=np.complex128)
    out[0] = psi0
    y = psi0.copy()
    ytmp = np.empty(n, dtype=np.complex128)
    K = np.empty((N_STAGES, n), dtype=np.complex128)
    zmax = 0.0
    for k in range(n):
        zmax = max(zmax, abs(z[k]))
    steps = 0
    for s in range(1, n_out):
        n_sub = max(1, int(math.ceil((samples[s] - samples[s - 1]) / MAX_SEGMENT)))
        for m in range(n_sub):
            t0 = samples[s - 1] + (samples[s] - samples[s - 1]) * m / n_sub
            t1 = samples[s] if m == n_sub - 1 else (
                samples[s - 1] + (samples[s] - samples[s - 1]) * (m + 1) / n_sub
            )
            steps += _advance(y, ytmp, K, t0, t1, h, kind, params, z, d, f, zmax, static_norm)
        out[s] = y
    return out, steps
