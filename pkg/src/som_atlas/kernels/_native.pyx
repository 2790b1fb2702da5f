# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled twin of ``pure.train_loop``.

Bit-for-bit lockstep with the numpy fallback is a hard requirement (see the
module docstring in pure.py): same accumulation order in the BMU scan, same
per-step exp() table from libm, same three separately rounded update steps.
The extension is compiled with -ffp-contract=off so no multiply-add fuses.
"""

import numpy as np

from libc.math cimport exp


def train_loop(
    double[:, ::1] weights,
    double[:, ::1] data,
    long long[::1] order,
    int[:, ::1] grid_dist,
    double[::1] alphas,
    double[::1] sigmas,
    Py_ssize_t competitive_start,
):
    cdef Py_ssize_t n_neurons = weights.shape[0]
    cdef Py_ssize_t dim = weights.shape[1]
    cdef Py_ssize_t total = order.shape[0]
    cdef Py_ssize_t s, v, j, u, row
    cdef int d, max_dist = 0
    cdef double acc, best, diff, alpha, sigma, denom, coef, t1

    for v in range(n_neurons):
        for j in range(n_neurons):
            if grid_dist[v, j] > max_dist:
                max_dist = grid_dist[v, j]

    theta_arr = np.empty(max_dist + 1)
    cdef double[::1] theta = theta_arr
    cdef double[::1] x

    for s in range(total):
        row = order[s]
        x = data[row]

        u = 0
        best = -1.0
        for v in range(n_neurons):
            acc = 0.0
            for j in range(dim):
                diff = weights[v, j] - x[j]
                acc += diff * diff
            if best < 0.0 or acc < best:
                best = acc
                u = v

        alpha = alphas[s]
        if s >= competitive_start:
            if alpha == 1.0:
                # Unit coefficient must reproduce the input bit-exactly.
                for j in range(dim):
                    weights[u, j] = x[j]
            else:
                for j in range(dim):
                    t1 = x[j] - weights[u, j]
                    t1 = alpha * t1
                    weights[u, j] = weights[u, j] + t1
        else:
            sigma = sigmas[s]
            denom = 2.0 * sigma * sigma
            for d in range(max_dist + 1):
                theta[d] = exp(-(<double> (d * d)) / denom)
            for v in range(n_neurons):
                coef = theta[grid_dist[u, v]] * alpha
                for j in range(dim):
                    t1 = x[j] - weights[v, j]
                    t1 = coef * t1
                    weights[v, j] = weights[v, j] + t1
            if alpha == 1.0:
                for j in range(dim):
                    weights[u, j] = x[j]

    return np.asarray(weights)
