# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: cyclic Jacobi eigensolver and the per-band scalar
sums evaluated inside the distortion/rate solvers.

A numpy implementation of the same surface lives in udrd._kernels; the
package selects whichever is importable at runtime.
"""

from libc.math cimport fabs, log, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def jacobi_eigh(double[:, ::1] matrix, double tol_scale=1e-12,
                int max_sweeps=100, bint vectors=True):
    """Diagonalize a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once every off-diagonal magnitude falls below
    ``tol_scale`` times the Frobenius norm of the input. Returns
    ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues unsorted;
    ``eigenvectors`` has unit columns and is empty when ``vectors`` is
    False. Raises RuntimeError if ``max_sweeps`` is exhausted.
    """
    cdef Py_ssize_t n = matrix.shape[0]
    cdef cnp.ndarray[double, ndim=2] a_arr = np.array(matrix, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] v_arr
    if vectors:
        v_arr = np.eye(n, dtype=np.float64)
    else:
        v_arr = np.empty((0, 0), dtype=np.float64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr

    cdef double frob = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            frob += a[i, j] * a[i, j]
    frob = sqrt(frob)
    cdef double thresh = tol_scale * frob

    cdef cnp.ndarray[double, ndim=1] w_arr = np.empty(n, dtype=np.float64)
    if n == 1 or frob == 0.0:
        for i in range(n):
            w_arr[i] = a[i, i]
        return w_arr, v_arr, 0

    cdef Py_ssize_t p, q, r, sweep
    cdef double apq, app, aqq, theta, t, c, s, tau, arp, arq, vrp, vrq
    cdef bint rotated
    cdef int sweeps_done = 0

    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if fabs(apq) <= thresh:
                    continue
                rotated = True
                app = a[p, p]
                aqq = a[q, q]
                theta = 0.5 * (aqq - app) / apq
                if fabs(theta) > 1e153:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)

                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    if r == p or r == q:
                        continue
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = arp - s * (arq + tau * arp)
                    a[r, q] = arq + s * (arp - tau * arq)
                    a[p, r] = a[r, p]
                    a[q, r] = a[r, q]
                if vectors:
                    for r in range(n):
                        vrp = v[r, p]
                        vrq = v[r, q]
                        v[r, p] = vrp - s * (vrq + tau * vrp)
                        v[r, q] = vrq + s * (vrp - tau * vrq)
        sweeps_done = sweep + 1
        if not rotated:
            break
    else:
        raise RuntimeError(
            "Jacobi eigensolver did not converge in %d sweeps" % max_sweeps
        )

    for i in range(n):
        w_arr[i] = a[i, i]
    return w_arr, v_arr, sweeps_done


def distortion_sum(double[::1] values, double alpha, double[::1] weights=None):
    """Sum of v*alpha/(sqrt(v*(v+alpha)) + v) over bands, optionally weighted.

    The rationalized form of sqrt(v^2 + v*alpha) - v, stable for alpha << v.
    """
    cdef Py_ssize_t n = values.shape[0]
    cdef double acc = 0.0
    cdef double vk
    cdef Py_ssize_t k
    if weights is None:
        for k in range(n):
            vk = values[k]
            acc += vk * alpha / (sqrt(vk * (vk + alpha)) + vk)
    else:
        for k in range(n):
            vk = values[k]
            acc += weights[k] * vk * alpha / (sqrt(vk * (vk + alpha)) + vk)
    return acc


def rate_sum(double[::1] values, double alpha, double[::1] weights=None):
    """Sum of log((sqrt(v+alpha) + sqrt(v))/sqrt(alpha)) over bands."""
    cdef Py_ssize_t n = values.shape[0]
    cdef double root_alpha = sqrt(alpha)
    cdef double acc = 0.0
    cdef double vk
    cdef Py_ssize_t k
    if weights is None:
        for k in range(n):
            vk = values[k]
            acc += log((sqrt(vk + alpha) + sqrt(vk)) / root_alpha)
    else:
        for k in range(n):
            vk = values[k]
            acc += weights[k] * log((sqrt(vk + alpha) + sqrt(vk)) / root_alpha)
    return acc
