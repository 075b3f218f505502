"""Canonical model triple of a rational inner function and a unitary
equivalence test for model triples.

The de Branges-Rovnyak kernel ``K(z, w) = (I - Psi(z) Psi(w)^*) / (1 - z
conj(w))`` is sampled on a node set; its Gram matrix gives coordinates of
the kernel functions in an orthonormal basis of the model space. The
isometry ``[e; conj(z) g(z)^* e] -> [Psi(z)^* e; g(z)^* e]`` is then
extended to a unitary by an orthogonal Procrustes fit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DefectMismatch, RankDeficiencyUnstable
from .model import ModelTriple, realize

RANK_TOL = 1e-8
RANK_CHECKS = (1e-7, 1e-9)


def kernel_nodes(count, seed=0, radii=(0.4, 0.7), jitter=0.02):
    """``count`` nodes split over two circles at equal angles, jittered."""
    rng = np.random.default_rng(seed)
    k_in = count // 2
    k_out = count - k_in
    parts = []
    for r, k in zip(radii, (k_in, k_out)):
        if k == 0:
            continue
        th = 2 * np.pi * (np.arange(k) + 0.5 * (r == radii[1])) / k
        th = th + jitter * rng.uniform(-1, 1, k)
        rr = r * (1 + jitter * rng.uniform(-1, 1, k))
        parts.append(rr * np.exp(1j * th))
    return np.concatenate(parts)


def numerical_rank(sv, tol):
    """Count of ``sv`` above ``tol * max(sv[0], 1)``; the floor keeps rounding
    noise of an identically zero kernel from counting as rank.
    """
    if sv.size == 0:
        return 0
    return int(np.sum(sv > tol * max(sv[0], 1.0)))


@dataclass(frozen=True)
class KernelFrame:
    """Kernel samples on ``nodes`` with coordinates in an orthonormal basis.

    Frame vectors are ordered node-major: index ``j * dim_e + a`` is the
    kernel function at ``nodes[j]`` applied to the basis vector ``e_a``.
    ``coord_map[:, j * dim_e + a]`` are its coordinates (``rank`` rows).
    """

    nodes: np.ndarray
    values: np.ndarray
    gram: np.ndarray
    rank: int
    coord_map: np.ndarray

    @property
    def dim_e(self):
        return self.values.shape[1]


def kernel_frame(psi, nodes, tol=RANK_TOL):
    vals = np.array([psi(z) for z in nodes])
    n, e, _ = vals.shape
    # block (k, j) = K(z_k, z_j)
    outer = np.einsum("kab,jcb->kjac", vals, vals.conj())
    denom = 1.0 - nodes[:, None] * nodes.conj()[None, :]
    blocks = (np.eye(e)[None, None] - outer) / denom[:, :, None, None]
    gram = blocks.transpose(0, 2, 1, 3).reshape(n * e, n * e)
    gram = 0.5 * (gram + gram.conj().T)
    lam, vec = np.linalg.eigh(gram)
    lam, vec = lam[::-1], vec[:, ::-1]
    sv = np.clip(lam, 0.0, None)
    ranks = {numerical_rank(sv, t) for t in (tol,) + RANK_CHECKS}
    if len(ranks) != 1:
        raise RankDeficiencyUnstable(f"gram rank differs across thresholds: {sorted(ranks)}")
    r = ranks.pop()
    coords = np.sqrt(sv[:r])[:, None] * vec[:, :r].conj().T
    return KernelFrame(nodes, vals, gram, r, coords)


def canonical_triple(psi, node_count=32, seed=0, tol=RANK_TOL):
    """Canonical model triple ``(E (+) H_psi, P, U)`` of ``psi``.

    ``P`` is the projection onto the ``E`` summand; ``U`` maps each domain
    vector ``[e_a; conj(z_j) g(z_j)^* e_a]`` to ``[Psi(z_j)^* e_a; g(z_j)^* e_a]``.
    """
    nodes = kernel_nodes(node_count, seed)
    fr = kernel_frame(psi, nodes, tol)
    e, r, n = fr.dim_e, fr.rank, len(nodes)
    dom = np.zeros((e + r, n * e), dtype=complex)
    rng_ = np.zeros((e + r, n * e), dtype=complex)
    for j, z in enumerate(nodes):
        cols = slice(j * e, (j + 1) * e)
        dom[:e, cols] = np.eye(e)
        dom[e:, cols] = np.conj(z) * fr.coord_map[:, cols]
        rng_[:e, cols] = fr.values[j].conj().T
        rng_[e:, cols] = fr.coord_map[:, cols]
    sd = np.linalg.svd(dom, compute_uv=False)
    sr = np.linalg.svd(rng_, compute_uv=False)
    if numerical_rank(sd, tol) != numerical_rank(sr, tol):
        raise DefectMismatch("domain and range of the isometry differ in dimension")
    x, _, yh = np.linalg.svd(rng_ @ dom.conj().T)
    u = x @ yh
    p = np.zeros((e + r, e + r), dtype=complex)
    p[:e, :e] = np.eye(e)
    return ModelTriple(e + r, p, u)


def lurking_defect(fr):
    """Largest violation of the Gram identity behind the lurking isometry."""
    n, e = len(fr.nodes), fr.dim_e
    ip_dom = np.zeros((n * e, n * e), dtype=complex)
    ip_rng = np.zeros_like(ip_dom)
    c = fr.coord_map
    vals = fr.values
    for j, zj in enumerate(fr.nodes):
        for k, zk in enumerate(fr.nodes):
            bj, bk = slice(j * e, (j + 1) * e), slice(k * e, (k + 1) * e)
            g = c[:, bk].conj().T @ c[:, bj]
            ip_dom[bk, bj] = np.eye(e) + zk * np.conj(zj) * g
            ip_rng[bk, bj] = vals[k] @ vals[j].conj().T + g
    return float(np.abs(ip_dom - ip_rng).max())


def roundtrip_error(psi, triple, points):
    return float(max(np.abs(realize(triple, z) - psi(z)).max() for z in points))


class Equivalence(str, enum.Enum):
    EQUIVALENT = "EQUIVALENT"
    NOT_EQUIVALENT = "NOT_EQUIVALENT"
    UNDETERMINED = "UNDETERMINED"


def _intertwines(x, t1, t2, tol):
    return (np.linalg.norm(t2.p @ x - x @ t1.p, 2) <= tol
            and np.linalg.norm(t2.u @ x - x @ t1.u, 2) <= tol)


def unitary_equivalence(t1, t2, tol=1e-8, seed=0):
    """Look for a unitary ``W`` with ``W P1 = P2 W`` and ``W U1 = U2 W``.

    Returns ``(verdict, witness)``. The intertwiners form the null space of
    ``X -> (P2 X - X P1, U2 X - X U1)``; a seeded random element of it is
    polar-decomposed and its unitary factor verified. A singular random
    element means no invertible intertwiner exists.
    """
    if t1.dim != t2.dim:
        return Equivalence.NOT_EQUIVALENT, None
    n = t1.dim
    eye = np.eye(n)
    if _intertwines(eye, t1, t2, tol):
        return Equivalence.EQUIVALENT, eye.astype(complex)
    # column-major vec: vec(A X B) = (B^T kron A) vec(X)
    op = np.vstack([np.kron(eye, t2.p) - np.kron(t1.p.T, eye),
                    np.kron(eye, t2.u) - np.kron(t1.u.T, eye)])
    _, sv, vh = np.linalg.svd(op)
    null = vh[np.concatenate([sv, np.zeros(n * n - sv.size)]) <= tol * max(1.0, sv[0])]
    if null.shape[0] == 0:
        return Equivalence.NOT_EQUIVALENT, None
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal(null.shape[0]) + 1j * rng.standard_normal(null.shape[0])
    x = (coef @ null.conj()).reshape(n, n, order="F")
    a, s, bh = np.linalg.svd(x)
    # a generic element has the largest rank in the space: if it is singular,
    # every intertwiner is
    if s[-1] <= tol * max(s[0], 1e-300):
        return Equivalence.NOT_EQUIVALENT, None
    w = a @ bh
    if _intertwines(w, t1, t2, tol):
        return Equivalence.EQUIVALENT, w
    return Equivalence.UNDETERMINED, None
