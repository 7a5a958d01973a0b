"""Loop-heavy numeric kernels with a numba fast path and a pure-numpy fallback.

The kernels here are the only O(n^2) recurrence loops in the package:
Chebyshev<->Legendre connection-coefficient builders and barycentric
Lagrange evaluation. Everything else in the package is dense linear
algebra that numpy/BLAS already handles.

Backend selection: set ``DUALCOMP_BACKEND=numpy`` to force the pure-numpy
path (e.g. on machines without a working numba install); any other value,
or leaving it unset, uses numba when it imports cleanly. The two paths are
bit-compatible up to floating-point non-associativity; the benchmark
harness (benchmarks/bench_kernels.py) compares them.
"""

import os

import numpy as np

__all__ = [
    "active_backend",
    "cheb2leg_matrix",
    "leg2cheb_matrix",
    "barycentric_weights",
    "barycentric_matrix",
]


def _cheb2leg_matrix_impl(n):
    # Column j holds the Legendre coefficients of T_j, built from
    # T_{j+1} = 2x T_j - T_{j-1} with x P_k = ((k+1) P_{k+1} + k P_{k-1}) / (2k+1).
    B = np.zeros((n + 1, n + 1))
    B[0, 0] = 1.0
    if n >= 1:
        B[1, 1] = 1.0
    for j in range(1, n):
        prev = B[:, j - 1]
        cur = B[:, j]
        out = B[:, j + 1]
        for k in range(j + 1):
            c = cur[k]
            if c != 0.0:
                out[k + 1] += 2.0 * c * (k + 1.0) / (2.0 * k + 1.0)
                if k > 0:
                    out[k - 1] += 2.0 * c * k / (2.0 * k + 1.0)
        for k in range(j):
            out[k] -= prev[k]
    return B


def _leg2cheb_matrix_impl(n):
    # Column j holds the Chebyshev coefficients of P_j, built from
    # (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1} with
    # x T_0 = T_1 and x T_k = (T_{k+1} + T_{k-1}) / 2.
    B = np.zeros((n + 1, n + 1))
    B[0, 0] = 1.0
    if n >= 1:
        B[1, 1] = 1.0
    for j in range(1, n):
        prev = B[:, j - 1]
        cur = B[:, j]
        out = B[:, j + 1]
        a = (2.0 * j + 1.0) / (j + 1.0)
        for k in range(j + 1):
            c = cur[k]
            if c != 0.0:
                if k == 0:
                    out[1] += a * c
                else:
                    out[k + 1] += 0.5 * a * c
                    out[k - 1] += 0.5 * a * c
        b = j / (j + 1.0)
        for k in range(j):
            out[k] -= b * prev[k]
    return B


def _barycentric_weights_impl(nodes):
    m = nodes.shape[0]
    w = np.ones(m)
    for j in range(m):
        p = 1.0
        for k in range(m):
            if k != j:
                p *= nodes[j] - nodes[k]
        w[j] = 1.0 / p
    # rescale to unit max magnitude; weights only ever appear in ratios
    s = 0.0
    for j in range(m):
        a = abs(w[j])
        if a > s:
            s = a
    return w / s


def _barycentric_matrix_impl(nodes, w, x):
    # L[i, j] = l_j(x[i]) for the Lagrange cardinal basis of `nodes`.
    m = nodes.shape[0]
    npts = x.shape[0]
    L = np.zeros((npts, m))
    for i in range(npts):
        hit = -1
        for j in range(m):
            if x[i] == nodes[j]:
                hit = j
                break
        if hit >= 0:
            L[i, hit] = 1.0
            continue
        denom = 0.0
        for j in range(m):
            denom += w[j] / (x[i] - nodes[j])
        for j in range(m):
            L[i, j] = w[j] / (x[i] - nodes[j]) / denom
    return L


_FORCE_NUMPY = os.environ.get("DUALCOMP_BACKEND", "").strip().lower() == "numpy"

if not _FORCE_NUMPY:
    try:
        from numba import njit

        _cheb2leg_matrix = njit(cache=True)(_cheb2leg_matrix_impl)
        _leg2cheb_matrix = njit(cache=True)(_leg2cheb_matrix_impl)
        _barycentric_weights = njit(cache=True)(_barycentric_weights_impl)
        _barycentric_matrix = njit(cache=True)(_barycentric_matrix_impl)
        _BACKEND = "numba"
    except ImportError:
        _BACKEND = "numpy"
else:
    _BACKEND = "numpy"

if _BACKEND == "numpy":
    _cheb2leg_matrix = _cheb2leg_matrix_impl
    _leg2cheb_matrix = _leg2cheb_matrix_impl
    _barycentric_weights = _barycentric_weights_impl
    _barycentric_matrix = _barycentric_matrix_impl


def active_backend():
    """Name of the kernel backend in use: 'numba' or 'numpy'."""
    return _BACKEND


def cheb2leg_matrix(n):
    """(n+1)x(n+1) matrix taking Chebyshev coefficients to Legendre coefficients."""
    return _cheb2leg_matrix(int(n))


def leg2cheb_matrix(n):
    """(n+1)x(n+1) matrix taking Legendre coefficients to Chebyshev coefficients."""
    return _leg2cheb_matrix(int(n))


def barycentric_weights(nodes):
    """Barycentric weights of a node set, rescaled to unit max magnitude."""
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    return _barycentric_weights(nodes)


def barycentric_matrix(nodes, x, weights=None):
    """Evaluate every Lagrange cardinal polynomial of `nodes` at the points `x`.

    Returns the matrix L with L[i, j] = l_j(x[i]), so ``L @ values``
    interpolates grid values to `x`.
    """
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    if weights is None:
        weights = _barycentric_weights(nodes)
    return _barycentric_matrix(nodes, weights, x)
