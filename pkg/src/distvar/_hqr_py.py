"""Pure-Python Schur kernels (fallback for the compiled ``_hqr`` module).

Both functions work in place on C-contiguous ``complex128`` arrays and keep
the invariant ``a == q @ h @ q.conj().T`` for the matrix ``a`` that ``h``
held on entry to :func:`hessenberg` (with ``q`` starting as the identity).
"""

import math

import numpy as np

_ULP = np.finfo(float).eps


def hessenberg(h, q):
    """Householder reduction of ``h`` to upper Hessenberg form."""
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        beta = 2.0 / np.vdot(v, v).real
        h[k + 1:, k:] -= beta * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= beta * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= beta * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 1, k] = -phase * alpha
        h[k + 2:, k] = 0.0


def _givens(x, y):
    # R = [[c, s], [-conj(s), c]] maps (x, y) to (r, 0)
    if y == 0:
        return 1.0, 0.0
    ay = abs(y)
    if x == 0:
        return 0.0, y.conjugate() / ay
    ax = abs(x)
    r = math.hypot(ax, ay)
    return ax / r, (x / ax) * y.conjugate() / r


def _wilkinson(a, b, c, d):
    x = 0.5 * (a - d)
    bc = b * c
    r = complex(x * x + bc) ** 0.5
    den = x + r if abs(x + r) >= abs(x - r) else x - r
    if den == 0:
        return d
    return d - bc / den


def hqr(h, q, tol, maxiter):
    """Shifted QR iteration on a Hessenberg matrix, with deflation.

    Returns the number of QR sweeps, or ``-1`` when ``maxiter`` sweeps did
    not reduce ``h`` to triangular form.
    """
    n = h.shape[0]
    anorm = np.abs(h).max() if n else 0.0
    small = tol * anorm
    ihi = n - 1
    total = 0
    its = 0
    while ihi > 0:
        l = ihi
        while l > 0:
            sub = abs(h[l, l - 1])
            if sub <= small or sub <= _ULP * (abs(h[l - 1, l - 1]) + abs(h[l, l])):
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
            mu = h[ihi, ihi] + 0.75 * abs(h[ihi, ihi - 1])
        else:
            mu = _wilkinson(h[ihi - 1, ihi - 1], h[ihi - 1, ihi],
                            h[ihi, ihi - 1], h[ihi, ihi])
        for k in range(l, ihi):
            if k == l:
                x, y = h[l, l] - mu, h[l + 1, l]
            else:
                x, y = h[k, k - 1], h[k + 1, k - 1]
            c, s = _givens(complex(x), complex(y))
            sc = s.conjugate()
            j0 = k - 1 if k > l else l
            rk = h[k, j0:].copy()
            rk1 = h[k + 1, j0:]
            h[k, j0:] = c * rk + s * rk1
            h[k + 1, j0:] = -sc * rk + c * rk1
            if k > l:
                h[k + 1, k - 1] = 0.0
            i1 = min(k + 2, ihi) + 1
            ck = h[:i1, k].copy()
            h[:i1, k] = c * ck + sc * h[:i1, k + 1]
            h[:i1, k + 1] = -s * ck + c * h[:i1, k + 1]
            qk = q[:, k].copy()
            q[:, k] = c * qk + sc * q[:, k + 1]
            q[:, k + 1] = -s * qk + c * q[:, k + 1]
    return total
