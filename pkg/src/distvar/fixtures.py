"""Named model triples, tuples and colligations, plus seeded random ones."""

from __future__ import annotations

import numpy as np

from .model import Colligation, ModelTriple, ModelTuple

P1 = np.diag([1.0, 0.0]).astype(complex)
E12 = np.array([[0, 1], [1, 0]], dtype=complex)


def perm_matrix(sigma, n):
    """Permutation matrix with ``U e_j = e_{sigma(j)}`` (1-based cycle).

    ``sigma`` is a single cycle given as a sequence, e.g. ``(1, 3, 4, 5, 2)``.
    """
    image = list(range(n))
    for a, b in zip(sigma, tuple(sigma[1:]) + (sigma[0],)):
        image[a - 1] = b - 1
    u = np.zeros((n, n), dtype=complex)
    for j, i in enumerate(image):
        u[i, j] = 1.0
    return u


def coord_projection(n, k):
    """Projection of ``C^n`` onto the first ``k`` coordinates."""
    p = np.zeros((n, n), dtype=complex)
    p[:k, :k] = np.eye(k)
    return p


def block_diag(*blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    k = 0
    for b in blocks:
        m = b.shape[0]
        out[k:k + m, k:k + m] = b
        k += m
    return out


def diagonal():
    """Triple whose variety is the diagonal ``{(z, z)}``."""
    return ModelTriple(2, P1, E12)


def proj_identity():
    """``(C^2, diag(1,0), I)``: symmetric but not distinguished."""
    return ModelTriple(2, P1, np.eye(2))


def block4():
    """``P = diag(P1, P1)``, ``U = diag(I, E12)``; variety adds ``(z,1)``, ``(1,z)``."""
    return ModelTriple(4, block_diag(P1, P1), block_diag(np.eye(2), E12))


def neil():
    """Five-dimensional triple for ``z1^3 = z2^2``: ``U`` the cycle (1 3 4 5 2)."""
    return ModelTriple(5, coord_projection(5, 2), perm_matrix((1, 3, 4, 5, 2), 5))


def neil_nm(n, m):
    """Triple on ``C^(m+n)`` for ``z1^n = z2^m`` from the block form of ``U^*``.

    ``A`` is the lower shift on ``C^m``, ``B = e_1 e_1^T`` (m x n),
    ``C = e_n e_m^T`` (n x m) and ``D`` the upper shift on ``C^n``.
    """
    a = np.eye(m, k=-1)
    b = np.zeros((m, n))
    b[0, 0] = 1.0
    c = np.zeros((n, m))
    c[n - 1, m - 1] = 1.0
    d = np.eye(n, k=1)
    w = np.block([[a, b], [c, d]]).astype(complex)
    return ModelTriple(m + n, coord_projection(m + n, m), w.conj().T)


def royal():
    """``(C^2, diag(1,0), E12)``; fundamental operator ``[[0,2],[0,0]]``."""
    return diagonal()


def perturbed_royal():
    """``P = diag(P1, P1)``, ``U = diag(E12, i E12)``."""
    return ModelTriple(4, block_diag(P1, P1), block_diag(E12, 1j * E12))


def u_lambda(lam):
    r = np.sqrt(1.0 - abs(lam) ** 2)
    return np.array([[lam, r], [-r, np.conj(lam)]], dtype=complex)


def diag_lambda(lam):
    """Four-dimensional triple with ``F = diag(lam, lam, 0, 0)``."""
    return ModelTriple(4, block_diag(P1, P1), block_diag(u_lambda(lam), u_lambda(0.0)))


def z2_colligation():
    """Colligation with transfer function ``z^2``: the (1 3 2) cycle as ``U^*``."""
    return Colligation(1, 2, [[0]], [[0, 1]], [[1], [0]], [[0, 0], [1, 0]])


def z2_triple():
    """``(C^3, e_1 e_1^*, U)`` with ``U`` the cycle (2 3 1)."""
    return ModelTriple(3, coord_projection(3, 1), perm_matrix((2, 3, 1), 3))


def mobius_colligation(a):
    """Standard colligation of ``(z - a) / (1 - conj(a) z)``, ``|a| < 1``."""
    r = np.sqrt(1.0 - abs(a) ** 2)
    return Colligation(1, 1, [[-a]], [[r]], [[r]], [[np.conj(a)]])


def constant_colligation(u):
    u = np.atleast_2d(np.asarray(u, dtype=complex))
    e = u.shape[0]
    return Colligation(e, 0, u, np.zeros((e, 0)), np.zeros((0, e)), np.zeros((0, 0)))


def monomial_tuple(exponents):
    """Pure tuple ``(S_z^{a_1}, ..., S_z^{a_d})`` on ``C^m``, ``m = sum(a)``.

    ``S_z`` is the cyclic shift ``e_j -> e_{j+1}`` carrying ``e_m`` to
    ``z e_1``, so ``S_z^m = z I``; the power ``S_z^a`` is the pencil of the
    pair (projection onto ``e_1..e_a``, ``S^a``). Joint eigenvalues are
    ``(w^{a_1}, ..., w^{a_d})`` with ``w^m = z``.
    """
    exps = [int(a) for a in exponents]
    if any(a < 1 for a in exps):
        raise ValueError("exponents must be positive")
    m = sum(exps)
    shift = np.roll(np.eye(m), 1, axis=0).astype(complex)
    ps, us = [], []
    for a in exps:
        ps.append(coord_projection(m, a))
        us.append(np.linalg.matrix_power(shift, a))
    return ModelTuple(m, tuple(ps), tuple(us))


def direct_sum_tuples(*tuples):
    d = tuples[0].d
    if any(t.d != d for t in tuples):
        raise ValueError("tuples differ in arity")
    ps = tuple(block_diag(*(t.ps[i] for t in tuples)) for i in range(d))
    us = tuple(block_diag(*(t.us[i] for t in tuples)) for i in range(d))
    return ModelTuple(sum(t.dim for t in tuples), ps, us)


def random_unitary(rng, n):
    """Haar-distributed unitary (QR of a complex Gaussian, phases fixed)."""
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_projection(rng, n, rank):
    v = random_unitary(rng, n)[:, :rank]
    return v @ v.conj().T


def random_triple(rng, dim=None, rank=None):
    """Random triple; ``rank`` of ``P`` defaults to a uniform draw in [1, dim-1]."""
    if dim is None:
        dim = int(rng.integers(2, 9))
    if rank is None:
        rank = int(rng.integers(1, dim)) if dim > 1 else 1
    return ModelTriple(dim, random_projection(rng, dim, rank), random_unitary(rng, dim))


def random_colligation(rng, dim_e, dim_h):
    return Colligation.from_matrix(random_unitary(rng, dim_e + dim_h), dim_e)


def random_pure_tuple(rng, d=3, blocks=2, max_exp=2):
    """Unitarily rotated direct sum of random monomial tuples of arity ``d``."""
    parts = [monomial_tuple(rng.integers(1, max_exp + 1, size=d)) for _ in range(blocks)]
    t = direct_sum_tuples(*parts)
    return t.conjugate(random_unitary(rng, t.dim))


TRIPLES = {
    "diagonal": diagonal,
    "proj-identity": proj_identity,
    "block4": block4,
    "neil": neil,
    "royal": royal,
    "perturbed-royal": perturbed_royal,
    "diag-lambda-0.6": lambda: diag_lambda(0.6),
    "z2": z2_triple,
}

COLLIGATIONS = {
    "z2": z2_colligation,
    "mobius-0.5": lambda: mobius_colligation(0.5),
}

TUPLES = {
    "monomial-1-1-1": lambda: monomial_tuple((1, 1, 1)),
    "monomial-2-1-2": lambda: monomial_tuple((2, 1, 2)),
}
