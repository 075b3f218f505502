"""Dense complex linear algebra: Schur forms, joint spectra of commuting
families, numerical radius and common-kernel tests.

The QR iteration behind :func:`schur` runs in the compiled ``_hqr`` kernel
when it is importable and in ``_hqr_py`` otherwise; set the environment
variable ``DISTVAR_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _hqr_py
from .errors import (DimensionMismatch, InputError, NonConvergence, NonSquare,
                     NotCommuting, RetriesExhausted)

try:
    from . import _hqr
except ImportError:  # pragma: no cover - depends on the build
    _hqr = None

KERNELS = {"python": _hqr_py}
if _hqr is not None:
    KERNELS["cython"] = _hqr

if os.environ.get("DISTVAR_PURE_PYTHON") or _hqr is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

JOINT_RETRIES = 20
THETA_GRID = 720
# pair-cluster radius for multiplicity alignment (absolute, unit scale)
PAIR_CLUSTER = 1e-7


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D complex array (a copy)."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InputError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} has non-finite entries")
    return m


def as_square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"{name} must be square, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class SchurForm:
    """``a = q @ t @ q^*`` with ``q`` unitary and ``t`` upper triangular."""

    q: np.ndarray
    t: np.ndarray
    source_dim: int

    @property
    def eigenvalues(self):
        return np.diag(self.t).copy()


@dataclass(frozen=True)
class JointSpectrum:
    """Joint eigenvalues of a commuting family, one row per point.

    ``points[j, i]`` is the ``j``-th eigenvalue of the ``i``-th matrix; rows
    repeat according to multiplicity, so ``len(points) == dim``.
    """

    points: np.ndarray
    dim: int

    def __len__(self):
        return self.points.shape[0]

    def __iter__(self):
        return iter(tuple(row) for row in self.points)


def schur(a, tol=1e-14, backend=None):
    """Complex Schur decomposition via Hessenberg reduction and shifted QR.

    ``tol`` is the deflation threshold relative to the largest entry of the
    Hessenberg matrix. The iteration cap is ``100 * n**2`` sweeps.
    ``backend`` selects a kernel from ``KERNELS`` (default ``BACKEND``).
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    try:
        kernel = KERNELS[backend or BACKEND]
    except KeyError:
        raise InputError(f"unknown backend {backend!r}; have {sorted(KERNELS)}") from None
    h = np.ascontiguousarray(as_square(a))
    n = h.shape[0]
    q = np.eye(n, dtype=complex)
    if n == 1:
        return SchurForm(q, h, 1)
    kernel.hessenberg(h, q)
    if kernel.hqr(h, q, tol, 100 * n * n) < 0:
        raise NonConvergence(f"QR iteration did not converge for n={n}")
    return SchurForm(q, np.triu(h), n)


def eigenvalues(a, tol=1e-14):
    return schur(a, tol).eigenvalues


def _family(family):
    mats = [as_square(a, f"family[{i}]") for i, a in enumerate(family)]
    if not mats:
        raise InputError("empty family")
    n = mats[0].shape[0]
    if any(m.shape[0] != n for m in mats):
        raise DimensionMismatch("family members differ in dimension")
    return mats


def _lower_defect(t):
    return np.abs(np.tril(t, -1)).max() if t.shape[0] > 1 else 0.0


def joint_triangularize(family, seed=0, tol=1e-8):
    """Simultaneous unitary upper-triangularization of a commuting family.

    The Schur vectors of a random complex combination of the family are
    tested against every member; a failed test draws fresh coefficients, up
    to ``JOINT_RETRIES`` times. When every draw fails, a flag is built by
    successive deflation of common eigenvectors and tested the same way.

    Returns ``(q, ts)`` with ``ts[i] = q^* family[i] q``.
    """
    mats = _family(family)
    n = mats[0].shape[0]
    norms = [np.linalg.norm(m, 2) for m in mats]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = np.linalg.norm(mats[i] @ mats[j] - mats[j] @ mats[i])
            if comm > tol * (1.0 + norms[i] * norms[j]):
                raise NotCommuting(f"members {i} and {j}: commutator norm {comm:.3e}")
    if n == 1:
        return np.eye(1, dtype=complex), [m.copy() for m in mats]

    def accept(q):
        ts = [q.conj().T @ m @ q for m in mats]
        if all(_lower_defect(t) <= tol * (1.0 + nm) for t, nm in zip(ts, norms)):
            return q, [np.triu(t) for t in ts]
        return None

    rng = np.random.default_rng(seed)
    for _ in range(JOINT_RETRIES):
        coef = rng.standard_normal(len(mats)) + 1j * rng.standard_normal(len(mats))
        combo = sum(c * m for c, m in zip(coef, mats))
        try:
            out = accept(schur(combo).q)
        except NonConvergence:
            continue
        if out is not None:
            return out
    # Every combination is derogatory (e.g. nilpotent families with several
    # Jordan blocks): its Schur flag need not be invariant for the members.
    try:
        out = accept(_deflation_flag(mats))
    except NonConvergence:
        out = None
    if out is None:
        raise RetriesExhausted(f"no triangularizing combination in {JOINT_RETRIES} draws")
    return out


def _sharp_eigenvalue(b):
    """One eigenvalue of ``b``, taken as the mean of its multiplicity cluster."""
    ev = eigenvalues(b)
    labels = cluster_labels(ev[:, None], np.abs(b).max())
    return ev[labels == labels[0]].mean()


def _common_eigenvector(mats):
    n = mats[0].shape[0]
    basis = np.eye(n, dtype=complex)
    for a in mats:
        b = basis.conj().T @ a @ basis
        k = b.shape[0]
        lam = _sharp_eigenvalue(b) if k > 1 else b[0, 0]
        _, sv, vh = np.linalg.svd(b - lam * np.eye(k))
        null = sv <= 1e-8 * max(1.0, sv[0])
        null[-1] = True
        basis = basis @ vh[null].conj().T
        basis, _ = np.linalg.qr(basis)
    return basis[:, 0]


def _deflation_flag(mats):
    """Unitary flag built one common eigenvector at a time."""
    n = mats[0].shape[0]
    q = np.eye(n, dtype=complex)
    cur = [m.copy() for m in mats]
    for k in range(n - 1):
        v = _common_eigenvector(cur)
        # QR of [v, I] puts a unimodular multiple of v first
        full, _ = np.linalg.qr(np.column_stack([v, np.eye(n - k, dtype=complex)]))
        rest = full[:, 1:]
        q[:, k:] = q[:, k:] @ full
        cur = [rest.conj().T @ m @ rest for m in cur]
    return q


def cluster_radius(size, scale=1.0):
    """Largest spread still read as one eigenvalue of multiplicity ``size``.

    A defective eigenvalue of multiplicity k splits under rounding into a
    ring of radius about ``(eps * scale) ** (1 / k)``; pairs use the fixed
    absolute radius ``PAIR_CLUSTER``.
    """
    if size <= 2:
        return PAIR_CLUSTER * max(scale, 1.0)
    return (1e-13 * max(scale, 1.0)) ** (1.0 / size)


def cluster_labels(points, scale=1.0):
    """Group the rows of ``points`` (shape ``(n, d)``) into multiplicity clusters.

    Clusters are single-linkage components under the sup-distance, accepted
    from the largest size down: at size ``k`` a component of at least ``k``
    unassigned rows linked within ``cluster_radius(k)`` becomes a cluster.
    """
    pts = np.asarray(points, dtype=complex).reshape(len(points), -1)
    n = pts.shape[0]
    labels = -np.ones(n, dtype=int)
    if n == 0:
        return labels
    dist = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2)
    nxt = 0
    for k in range(n, 1, -1):
        free = np.flatnonzero(labels < 0)
        if len(free) < k:
            continue
        adj = dist[np.ix_(free, free)] <= cluster_radius(k, scale)
        seen = np.zeros(len(free), dtype=bool)
        for s in range(len(free)):
            if seen[s]:
                continue
            comp, stack = [], [s]
            seen[s] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in np.flatnonzero(adj[u] & ~seen):
                    seen[v] = True
                    stack.append(v)
            if len(comp) >= k:
                labels[free[comp]] = nxt
                nxt += 1
    for i in np.flatnonzero(labels < 0):
        labels[i] = nxt
        nxt += 1
    return labels


def joint_eigenvalues(family, seed=0, tol=1e-8):
    """Joint spectrum of a commuting family, with multiplicity.

    Points are the aligned diagonals of a simultaneous triangular form.
    Within a multiplicity cluster every coordinate is replaced by the
    cluster mean, which (unlike the individual diagonal entries of a
    defective eigenvalue) is well conditioned.
    """
    mats = _family(family)
    _, ts = joint_triangularize(mats, seed, tol)
    pts = np.stack([np.diag(t) for t in ts], axis=1)
    scale = max(np.abs(m).max() for m in mats)
    labels = cluster_labels(pts, scale)
    for lab in np.unique(labels):
        idx = labels == lab
        if idx.sum() > 1:
            pts[idx] = pts[idx].mean(axis=0)
    return JointSpectrum(pts, pts.shape[0])


def _top_eig(a, thetas):
    ph = np.exp(1j * np.asarray(thetas))[:, None, None]
    herm = 0.5 * (ph * a + np.conj(ph) * a.conj().T)
    return np.linalg.eigvalsh(herm)[:, -1]


def numerical_radius(a, tol=1e-10):
    """``max |<a h, h>|`` over unit vectors ``h``.

    Evaluated as ``max_theta lambda_max(Re(e^{i theta} a))`` on a 720-point
    grid, followed by golden-section refinement around the four best local
    maxima until the bracket width times ``||a||`` is below ``tol``.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    a = as_square(a)
    if a.shape[0] == 1:
        return float(abs(a[0, 0]))
    norm = np.linalg.norm(a, 2)
    if norm == 0.0:
        return 0.0
    step = 2 * np.pi / THETA_GRID
    grid = step * np.arange(THETA_GRID)
    vals = _top_eig(a, grid)
    best = vals.max()
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    peaks = peaks[np.argsort(vals[peaks])[::-1][:4]]
    lo = grid[peaks] - step
    hi = grid[peaks] + step
    g = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1 = _top_eig(a, x1)
    f2 = _top_eig(a, x2)
    for _ in range(200):
        if (hi - lo).max() * norm <= tol:
            break
        left = f1 >= f2
        # keep [lo, x2] where f1 wins, [x1, hi] otherwise
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x2n = np.where(left, x1, lo + g * (hi - lo))
        x1n = np.where(left, hi - g * (hi - lo), x2)
        f2n = np.where(left, f1, np.nan)
        f1n = np.where(left, np.nan, f2)
        need1 = np.isnan(f1n)
        need2 = np.isnan(f2n)
        if need1.any():
            f1n[need1] = _top_eig(a, x1n[need1])
        if need2.any():
            f2n[need2] = _top_eig(a, x2n[need2])
        x1, x2, f1, f2 = x1n, x2n, f1n, f2n
        best = max(best, f1.max(), f2.max())
    return float(min(max(best, 0.0), norm))


def common_kernel_defect(family):
    """Smallest singular value of the family stacked vertically.

    Zero exactly when the matrices share a nonzero kernel vector.
    """
    mats = [as_matrix(a, f"family[{i}]") for i, a in enumerate(family)]
    if not mats:
        raise InputError("empty family")
    cols = mats[0].shape[1]
    if any(m.shape[1] != cols for m in mats):
        raise DimensionMismatch("family members differ in column dimension")
    stacked = np.vstack(mats)
    if stacked.shape[0] < cols:
        return 0.0
    return float(np.linalg.svd(stacked, compute_uv=False)[-1])
