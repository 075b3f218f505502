# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Schur kernels. Same contract as ``distvar._hqr_py``."""

import numpy as np

from libc.math cimport sqrt, hypot, copysign

cdef double ULP = 2.220446049250313e-16


cdef inline double cabs_(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline double complex conj_(double complex z) nogil:
    return z.real - 1j * z.imag


cdef inline double complex csqrt_(double complex z) nogil:
    cdef double r = cabs_(z)
    cdef double re = sqrt(0.5 * (r + z.real))
    cdef double im = copysign(sqrt(0.5 * (r - z.real)), z.imag)
    return re + 1j * im


def hessenberg(double complex[:, ::1] h, double complex[:, ::1] q):
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef double alpha, beta, ax0
    cdef double complex phase, acc
    cdef double complex[::1] v
    if n < 3:
        return
    v = _empty(n)
    with nogil:
        for k in range(n - 2):
            alpha = 0.0
            for i in range(k + 1, n):
                alpha = alpha + h[i, k].real * h[i, k].real + h[i, k].imag * h[i, k].imag
            alpha = sqrt(alpha)
            if alpha == 0.0:
                continue
            ax0 = cabs_(h[k + 1, k])
            if ax0 != 0.0:
                phase = h[k + 1, k] / ax0
            else:
                phase = 1.0
            m = n - k - 1
            for i in range(m):
                v[i] = h[k + 1 + i, k]
            v[0] = v[0] + phase * alpha
            beta = 0.0
            for i in range(m):
                beta = beta + v[i].real * v[i].real + v[i].imag * v[i].imag
            beta = 2.0 / beta
            # left: rows k+1.., columns k..
            for j in range(k, n):
                acc = 0.0
                for i in range(m):
                    acc = acc + conj_(v[i]) * h[k + 1 + i, j]
                acc = acc * beta
                for i in range(m):
                    h[k + 1 + i, j] = h[k + 1 + i, j] - v[i] * acc
            # right: all rows, columns k+1..
            for i in range(n):
                acc = 0.0
                for j in range(m):
                    acc = acc + h[i, k + 1 + j] * v[j]
                acc = acc * beta
                for j in range(m):
                    h[i, k + 1 + j] = h[i, k + 1 + j] - acc * conj_(v[j])
                acc = 0.0
                for j in range(m):
                    acc = acc + q[i, k + 1 + j] * v[j]
                acc = acc * beta
                for j in range(m):
                    q[i, k + 1 + j] = q[i, k + 1 + j] - acc * conj_(v[j])
            h[k + 1, k] = -phase * alpha
            for i in range(k + 2, n):
                h[i, k] = 0.0


cdef double complex[::1] _empty(Py_ssize_t n):
    return np.zeros(n, dtype=np.complex128)


cdef inline void _givens(double complex x, double complex y,
                         double *c, double complex *s) nogil:
    cdef double ax, ay, r
    if y == 0:
        c[0] = 1.0
        s[0] = 0.0
        return
    ay = cabs_(y)
    if x == 0:
        c[0] = 0.0
        s[0] = conj_(y) / ay
        return
    ax = cabs_(x)
    r = hypot(ax, ay)
    c[0] = ax / r
    s[0] = (x / ax) * conj_(y) / r


cdef inline double complex _wilkinson(double complex a, double complex b,
                                      double complex c, double complex d) nogil:
    cdef double complex x = 0.5 * (a - d)
    cdef double complex bc = b * c
    cdef double complex r = csqrt_(x * x + bc)
    cdef double complex den
    if cabs_(x + r) >= cabs_(x - r):
        den = x + r
    else:
        den = x - r
    if den == 0:
        return d
    return d - bc / den


def hqr(double complex[:, ::1] h, double complex[:, ::1] q, double tol, long maxiter):
    return _hqr(h, q, tol, maxiter)


cdef long _hqr(double complex[:, ::1] h, double complex[:, ::1] q,
               double tol, long maxiter) nogil:
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t ihi, l, k, j, i, j0, i1
    cdef long total = 0, its = 0
    cdef double anorm = 0.0, small, sub, c
    cdef double complex mu, x, y, s, sc, t1, t2
    for i in range(n):
        for j in range(n):
            if cabs_(h[i, j]) > anorm:
                anorm = cabs_(h[i, j])
    small = tol * anorm
    ihi = n - 1
    while ihi > 0:
        l = ihi
        while l > 0:
            sub = cabs_(h[l, l - 1])
            if sub <= small or sub <= ULP * (cabs_(h[l - 1, l - 1]) + cabs_(h[l, l])):
                h[l, l - 1] = 0.0
                break
            l -= 1
        if l == ihi:
            ihi -= 1
            its = 0
            continue
        if total >= maxiter:
            return -1
        total += 1
        its += 1
        if its % 10 == 0:
            mu = h[ihi, ihi] + 0.75 * cabs_(h[ihi, ihi - 1])
        else:
            mu = _wilkinson(h[ihi - 1, ihi - 1], h[ihi - 1, ihi],
                            h[ihi, ihi - 1], h[ihi, ihi])
        for k in range(l, ihi):
            if k == l:
                x = h[l, l] - mu
                y = h[l + 1, l]
            else:
                x = h[k, k - 1]
                y = h[k + 1, k - 1]
            _givens(x, y, &c, &s)
            sc = conj_(s)
            j0 = k - 1 if k > l else l
            for j in range(j0, n):
                t1 = h[k, j]
                t2 = h[k + 1, j]
                h[k, j] = c * t1 + s * t2
                h[k + 1, j] = -sc * t1 + c * t2
            if k > l:
                h[k + 1, k - 1] = 0.0
            i1 = k + 2 if k + 2 < ihi else ihi
            for i in range(i1 + 1):
                t1 = h[i, k]
                t2 = h[i, k + 1]
                h[i, k] = c * t1 + sc * t2
                h[i, k + 1] = -s * t1 + c * t2
            for i in range(n):
                t1 = q[i, k]
                t2 = q[i, k + 1]
                q[i, k] = c * t1 + sc * t2
                q[i, k + 1] = -s * t1 + c * t2
    return total
