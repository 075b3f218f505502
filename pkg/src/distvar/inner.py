"""Rational inner functions from unitary colligations: evaluation, the
variety ``det(Psi(z1) - z2 I) = 0``, its defining polynomial and the
essential torus-symmetry test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bidisc import EPS_T, MARGIN
from .errors import DeflationAmbiguous, InputError, NotUnitary, SingularResolvent
from .linalg import cluster_labels, eigenvalues, numerical_radius
from .model import Colligation

INNER_TOL = 1e-8


def transfer_eval(c, z, tol=1e-12):
    """``A + z B (I - z D)^{-1} C``."""
    z = complex(z)
    if c.dim_h == 0:
        return np.array(c.a)
    res = np.eye(c.dim_h) - z * c.d
    if abs(z) >= 1.0 and abs(np.linalg.det(res)) < tol:
        raise SingularResolvent(f"I - zD is singular at z={z}")
    try:
        return c.a + z * c.b @ np.linalg.solve(res, c.c)
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent(f"I - zD is singular at z={z}") from exc


def _unimodular_part(d, eps):
    """Orthonormal basis of the span of eigenvectors of ``d`` for eigenvalues
    within ``eps`` of the unit circle.
    """
    h = d.shape[0]
    ev = eigenvalues(d)
    on_circle = np.abs(np.abs(ev) - 1.0) <= eps
    if not on_circle.any():
        return np.zeros((h, 0), dtype=complex)
    labels = cluster_labels(ev[:, None])
    vecs = []
    for lab in np.unique(labels[on_circle]):
        lam = ev[labels == lab].mean()
        _, sv, vh = np.linalg.svd(d - lam * np.eye(h))
        vecs.append(vh[sv <= max(eps, 1e-8)].conj().T)
    q, _ = np.linalg.qr(np.hstack(vecs))
    return q


def compress(c, eps=EPS_T):
    """Drop the part of ``C^dim_h`` on which ``D`` acts unitarily.

    For a unitary colligation that subspace reduces the colligation and is
    invisible to the transfer function, so the result realizes the same
    function with ``D`` free of unimodular eigenvalues.
    """
    if c.dim_h == 0:
        return c
    uni = _unimodular_part(c.d, eps)
    if uni.shape[1] == 0:
        return c
    full, _ = np.linalg.qr(np.hstack([uni, np.eye(c.dim_h)]))
    rest = full[:, uni.shape[1]:c.dim_h]
    return Colligation(c.dim_e, rest.shape[1], c.a, c.b @ rest,
                       rest.conj().T @ c.c, rest.conj().T @ c.d @ rest)


def _roots_of_unity(k):
    return np.exp(2j * np.pi * np.arange(k) / k)


@dataclass(frozen=True)
class RationalInnerFn:
    """Transfer function of a unitary colligation, stored compressed.

    ``q`` holds the coefficients of ``det(I - z D)`` (lowest degree first),
    interpolated at ``dim_h + 1`` roots of unity.
    """

    colligation: Colligation
    source: Colligation = field(default=None, compare=False, repr=False)
    q: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        c = self.colligation
        defect = c.unitary_defect()
        if defect > 1e-10:
            raise NotUnitary(f"colligation unitarity defect {defect:.3e}")
        small = compress(c)
        object.__setattr__(self, "source", c)
        object.__setattr__(self, "colligation", small)
        h = small.dim_h
        nodes = _roots_of_unity(h + 1)
        vals = np.array([np.linalg.det(np.eye(h) - z * small.d) for z in nodes])
        q = np.fft.fft(vals) / (h + 1) if h else np.ones(1, dtype=complex)
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        bad = inner_defect(self, 16)
        if bad > INNER_TOL:
            raise InputError(f"not inner on the circle: defect {bad:.3e}")

    @property
    def dim_e(self):
        return self.colligation.dim_e

    @property
    def dim_h(self):
        return self.colligation.dim_h

    def __call__(self, z):
        return transfer_eval(self.colligation, z)

    @classmethod
    def from_triple(cls, t):
        from .model import colligation_from_triple
        return cls(colligation_from_triple(t))


def inner_defect(psi, count=64):
    """Largest ``||Psi(z)^* Psi(z) - I||`` over ``count`` points of the circle."""
    e = psi.dim_e
    worst = 0.0
    for z in np.exp(2j * np.pi * (np.arange(count) + 0.5) / count):
        v = psi(z)
        worst = max(worst, np.linalg.norm(v.conj().T @ v - np.eye(e), 2))
    return float(worst)


def _evaluate(psi, z):
    if isinstance(psi, Colligation):
        return transfer_eval(psi, z)
    return psi(z)


def psi_fiber(psi, z1):
    """Eigenvalues ``z2`` of ``Psi(z1)``, with multiplicity, sorted by (Re, Im).

    ``psi`` may be a :class:`RationalInnerFn` or any (possibly contractive)
    :class:`Colligation`.
    """
    ev = eigenvalues(_evaluate(psi, z1))
    return sorted((complex(w) for w in ev), key=lambda w: (round(w.real, 12), round(w.imag, 12)))


def psi_membership_defect(psi, z1, z2):
    """Smallest singular value of ``Psi(z1) - z2 I``."""
    v = _evaluate(psi, z1)
    return float(np.linalg.svd(v - complex(z2) * np.eye(v.shape[0]), compute_uv=False)[-1])


def nu_sweep(psi, grid, refine_steps=40, tol=1e-10):
    """Largest ``nu(Psi(z))`` over ``grid`` (points of the disc), refined by a
    compass search around the best grid point that stays inside the disc
    spanned by the grid.
    """
    zs = np.asarray(list(grid), dtype=complex)
    if zs.size == 0:
        raise InputError("empty grid")
    rmax = np.abs(zs).max()
    vals = [numerical_radius(_evaluate(psi, z), tol) for z in zs]
    k = int(np.argmax(vals))
    best, arg = vals[k], complex(zs[k])
    step = 0.5 * rmax / max(np.sqrt(len(zs)), 1.0)
    for _ in range(refine_steps):
        moved = False
        for d in (1, 1j, -1, -1j):
            w = arg + step * d
            if abs(w) > rmax:
                continue
            v = numerical_radius(_evaluate(psi, w), tol)
            if v > best:
                best, arg, moved = v, w, True
                break
        if not moved:
            step /= 2
            if step < 1e-9:
                break
    return float(best), arg


def nu_certificate_psi(psi, grid, margin=MARGIN):
    """``(max_nu, argmax, strict)`` with ``strict = max_nu < 1 - margin``."""
    m, a = nu_sweep(psi, grid)
    return m, a, m < 1.0 - margin


# -- bivariate polynomials ---------------------------------------------------

@dataclass(frozen=True)
class BivariatePoly:
    """``sum c[i, j] z1^i z2^j``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.array(self.coeffs, dtype=complex))
        if c.ndim != 2:
            raise InputError("coefficient grid must be 2-D")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def deg1(self):
        return self.coeffs.shape[0] - 1

    @property
    def deg2(self):
        return self.coeffs.shape[1] - 1

    def __call__(self, z1, z2):
        p1 = complex(z1) ** np.arange(self.deg1 + 1)
        p2 = complex(z2) ** np.arange(self.deg2 + 1)
        return complex(p1 @ self.coeffs @ p2)

    def scale(self):
        return float(np.abs(self.coeffs).max())

    def trimmed(self, tol=1e-12):
        """Drop trailing rows and columns whose entries are all below ``tol * scale``."""
        c = np.array(self.coeffs)
        cut = tol * max(np.abs(c).max(), 1e-300)
        nz = np.abs(c) > cut
        if not nz.any():
            return BivariatePoly(np.zeros((1, 1)))
        rows = np.flatnonzero(nz.any(axis=1)).max() + 1
        cols = np.flatnonzero(nz.any(axis=0)).max() + 1
        c = c[:rows, :cols]
        c[np.abs(c) <= cut] = 0
        return BivariatePoly(c)

    def normalized(self):
        """Scale so that the lexicographically largest nonzero ``(i, j)`` has coefficient 1."""
        c = self.coeffs
        nz = np.argwhere(np.abs(c) > 0)
        if len(nz) == 0:
            return self
        i, j = max(map(tuple, nz))
        return BivariatePoly(c / c[i, j])

    def to_dict(self):
        return {"deg1": self.deg1, "deg2": self.deg2,
                "coeffs": [[[v.real, v.imag] for v in row] for row in self.coeffs]}

    @classmethod
    def from_dict(cls, obj):
        c = np.array([[complex(re, im) for re, im in row] for row in obj["coeffs"]])
        if c.shape != (obj["deg1"] + 1, obj["deg2"] + 1):
            raise InputError("declared degrees do not match the coefficient grid")
        return cls(c)

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())


def _poly_from_roots(roots):
    """Coefficients (lowest degree first) of ``prod (r - x)``."""
    c = np.ones(1, dtype=complex)
    for r in roots:
        c = np.concatenate([c * r, [0]]) - np.concatenate([[0], c])
    return c


def _divide_linear(p, alpha):
    """Quotient and relative remainder of ``p(z)`` by ``(z - alpha)``.

    Forward synthetic division for ``|alpha| <= 1``; for ``|alpha| > 1`` the
    reversed polynomial is divided by ``(1 - alpha w)`` instead, which keeps
    the recursion contractive.
    """
    n = len(p) - 1
    if n < 1:
        return np.zeros(0, dtype=complex), abs(p[0]) if len(p) else 0.0
    scale = max(np.abs(p).max(), 1e-300)
    if abs(alpha) <= 1:
        q = np.zeros(n, dtype=complex)
        acc = p[n]
        for k in range(n - 1, -1, -1):
            q[k] = acc
            acc = p[k] + alpha * acc
        return q, abs(acc) / scale
    # p(z) = (z - alpha) q(z): from the bottom, q[0] = -p[0]/alpha, ...
    q = np.zeros(n, dtype=complex)
    prev = 0j
    for k in range(n):
        q[k] = (prev - p[k]) / alpha
        prev = q[k]
    rem = p[n] - q[n - 1]
    return q, abs(rem) / scale


def xi_extract(psi, tol=1e-8):
    """Defining polynomial of the variety of ``psi`` on the bidisc.

    ``det(F(z1) - z2 q(z1) I)`` with ``F = q Psi`` is sampled at roots of
    unity in ``z1`` (per node: characteristic polynomial of ``Psi(z1)`` from
    its eigenvalues, times ``q(z1)^dim_e``) and interpolated. Factors
    ``(z1 - alpha)`` at the roots ``alpha`` of ``q`` that divide every
    ``z2``-coefficient are removed, at most ``dim_e`` times the multiplicity
    of ``alpha``. A division residual in ``[tol, 100 tol]`` is ambiguous and
    raises :class:`DeflationAmbiguous`.
    """
    e, h = psi.dim_e, psi.dim_h
    n = e * h + 2
    nodes = _roots_of_unity(n)
    q = psi.q
    samples = np.zeros((n, e + 1), dtype=complex)
    for k, z in enumerate(nodes):
        qz = np.polyval(q[::-1], z)
        samples[k] = _poly_from_roots(eigenvalues(psi(z))) * qz ** e
    coeffs = np.fft.fft(samples, axis=0) / n
    # roots of q are 1/lambda for the nonzero eigenvalues lambda of D
    poles = []
    if h:
        ev = eigenvalues(psi.colligation.d)
        ev = ev[np.abs(ev) > 1e-12]
        if ev.size:
            labels = cluster_labels(ev[:, None])
            for lab in np.unique(labels):
                grp = ev[labels == lab]
                poles.append((1.0 / grp.mean(), len(grp)))
    for alpha, mult in poles:
        for _ in range(mult * e):
            trial = [_divide_linear(coeffs[:, j], alpha) for j in range(e + 1)]
            res = max(r for _, r in trial)
            if tol <= res <= 100 * tol:
                raise DeflationAmbiguous(
                    f"division residual {res:.3e} at pole {alpha:.6g} is ambiguous")
            if res > tol:
                break
            coeffs = np.stack([qq for qq, _ in trial], axis=1)
    return BivariatePoly(coeffs).trimmed(1e-10).normalized()


def essential_symmetry_check(xi, tol=1e-8):
    """Whether ``c[i, j] = u conj(c[m1 - i, m2 - j])`` for one unimodular ``u``.

    Returns ``(ok, u)``; ``u`` is ``None`` when no candidate exists.
    """
    c = np.asarray(xi.coeffs)
    m1, m2 = c.shape[0] - 1, c.shape[1] - 1
    rev = np.conj(c[::-1, ::-1])
    scale = np.abs(c).max()
    if scale == 0:
        return False, None
    i, j = np.unravel_index(np.argmax(np.abs(c)), c.shape)
    if abs(rev[i, j]) <= tol * scale:
        return False, None
    u = c[i, j] / rev[i, j]
    if abs(abs(u) - 1.0) > tol:
        return False, None
    ok = np.abs(c - u * rev).max() <= tol * scale
    return bool(ok), complex(u) if ok else None
