"""Model triples and tuples, their pencils, and the realization formula.

A model triple ``(F, P, U)`` is stored as a pair of dense matrices on
``C^n``; ``F`` itself is implicit. Projections and unitaries are not
validated at construction (see :func:`validate_triple`), only shapes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyRange, InputError, NotUnitary, SingularResolvent
from .linalg import as_square

DEFAULT_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def range_basis(p, rank=None):
    """Orthonormal basis for the column space of a projection ``p``.

    Column-pivoted Gram-Schmidt; the column with largest residual norm is
    taken next, ties going to the lowest index. ``rank`` defaults to the
    rounded trace of ``p``.
    """
    p = np.asarray(p, dtype=complex)
    n = p.shape[0]
    if rank is None:
        rank = int(round(float(np.trace(p).real)))
    rank = max(0, min(rank, n))
    work = p.copy()
    basis = np.zeros((n, rank), dtype=complex)
    for k in range(rank):
        norms = np.linalg.norm(work, axis=0)
        # round so that rounding noise does not break ties between equal columns
        j = int(np.argmax(np.round(norms, 12)))
        v = work[:, j] / norms[j]
        basis[:, k] = v
        work -= np.outer(v, v.conj() @ work)
    return basis


@dataclass(frozen=True)
class Check:
    name: str
    defect: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation; never raised, always returned."""

    checks: tuple
    tol: float

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "ok": self.ok,
            "tol": self.tol,
            "checks": [{"name": c.name, "defect": c.defect, "passed": c.passed}
                       for c in self.checks],
        }


@dataclass(frozen=True)
class ModelTriple:
    """Projection ``p`` and unitary ``u`` on ``C^dim``.

    ``range_p`` holds the fixed orthonormal basis of ``Ran p`` used by
    :func:`realize`; it is computed once, at construction.
    """

    dim: int
    p: np.ndarray
    u: np.ndarray
    range_p: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = as_square(self.p, "P")
        u = as_square(self.u, "U")
        if p.shape != (self.dim, self.dim) or u.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"P {p.shape} and U {u.shape} must both be {self.dim}x{self.dim}")
        object.__setattr__(self, "p", _frozen(p))
        object.__setattr__(self, "u", _frozen(u))
        object.__setattr__(self, "range_p", _frozen(range_basis(p)))

    @classmethod
    def of(cls, p, u):
        p = np.asarray(p)
        return cls(p.shape[0], p, u)

    @property
    def p_perp(self):
        return np.eye(self.dim) - self.p

    @property
    def rank(self):
        return self.range_p.shape[1]

    def conjugate(self, v):
        """The triple ``(v p v^*, v u v^*)`` for a unitary ``v``."""
        v = np.asarray(v, dtype=complex)
        vh = v.conj().T
        return ModelTriple(self.dim, v @ self.p @ vh, v @ self.u @ vh)

    def __eq__(self, other):
        if not isinstance(other, ModelTriple):
            return NotImplemented
        return (self.dim == other.dim and np.array_equal(self.p, other.p)
                and np.array_equal(self.u, other.u))

    def __hash__(self):
        return hash((self.dim, self.p.tobytes(), self.u.tobytes()))


@dataclass(frozen=True)
class ModelTuple:
    """``d`` projections and unitaries on ``C^dim`` with pencils
    ``Phi_i(z) = P_i^perp U_i + z P_i U_i``.

    ``pure`` records whether the product pencil equals ``z I`` (checked at
    construction to 1e-9, see :func:`purity_defect`).
    """

    dim: int
    ps: tuple
    us: tuple
    pure: bool = field(init=False, compare=False)

    def __post_init__(self):
        if len(self.ps) != len(self.us):
            raise DimensionMismatch("ps and us differ in length")
        if len(self.ps) < 1:
            raise InputError("a model tuple needs at least one factor")
        ps = tuple(_frozen(as_square(p, f"P_{i}")) for i, p in enumerate(self.ps))
        us = tuple(_frozen(as_square(u, f"U_{i}")) for i, u in enumerate(self.us))
        if any(m.shape != (self.dim, self.dim) for m in ps + us):
            raise DimensionMismatch(f"all factors must be {self.dim}x{self.dim}")
        object.__setattr__(self, "ps", ps)
        object.__setattr__(self, "us", us)
        object.__setattr__(self, "pure", purity_defect(self) <= 1e-9)

    @property
    def d(self):
        return len(self.ps)

    @classmethod
    def from_triple(cls, t):
        """The two-factor tuple whose pencils are the BCL pair of ``t``."""
        uh = t.u.conj().T
        return cls(t.dim, (t.p, uh @ t.p_perp @ t.u), (t.u, uh))

    def conjugate(self, v):
        v = np.asarray(v, dtype=complex)
        vh = v.conj().T
        return ModelTuple(self.dim, tuple(v @ p @ vh for p in self.ps),
                          tuple(v @ u @ vh for u in self.us))

    def __eq__(self, other):
        if not isinstance(other, ModelTuple):
            return NotImplemented
        return (self.dim == other.dim and self.d == other.d
                and all(np.array_equal(a, b) for a, b in zip(self.ps, other.ps))
                and all(np.array_equal(a, b) for a, b in zip(self.us, other.us)))

    def __hash__(self):
        return hash((self.dim, tuple(p.tobytes() for p in self.ps)))


@dataclass(frozen=True)
class Colligation:
    """Block matrix ``[a b; c d]`` on ``C^dim_e (+) C^dim_h``.

    Unitarity is checked by :meth:`unitary_defect`, not enforced here, so
    contractive colligations can also be evaluated.
    """

    dim_e: int
    dim_h: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        e, h = self.dim_e, self.dim_h
        if e < 1 or h < 0:
            raise InputError(f"need dim_e >= 1 and dim_h >= 0, got {e}, {h}")
        shapes = {"a": (e, e), "b": (e, h), "c": (h, e), "d": (h, h)}
        for name, shape in shapes.items():
            m = np.array(getattr(self, name), dtype=complex)
            if m.size == 0:
                m = np.zeros(shape, dtype=complex)
            if m.shape != shape:
                raise DimensionMismatch(f"block {name} has shape {m.shape}, expected {shape}")
            if not np.all(np.isfinite(m)):
                raise InputError(f"block {name} has non-finite entries")
            object.__setattr__(self, name, _frozen(m))

    @classmethod
    def from_matrix(cls, w, dim_e):
        w = as_square(w, "colligation")
        e = dim_e
        return cls(e, w.shape[0] - e, w[:e, :e], w[:e, e:], w[e:, :e], w[e:, e:])

    @property
    def matrix(self):
        return np.block([[self.a, self.b], [self.c, self.d]])

    def unitary_defect(self):
        w = self.matrix
        return float(np.linalg.norm(w.conj().T @ w - np.eye(w.shape[0]), 2))

    def __eq__(self, other):
        if not isinstance(other, Colligation):
            return NotImplemented
        return (self.dim_e == other.dim_e and self.dim_h == other.dim_h
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.dim_e, self.dim_h, self.matrix.tobytes()))


def _projection_checks(p, tag=""):
    return [
        Check(f"idempotent{tag}", float(np.linalg.norm(p @ p - p, 2)), False),
        Check(f"selfadjoint{tag}", float(np.linalg.norm(p - p.conj().T, 2)), False),
    ]


def _unitary_check(u, tag=""):
    n = u.shape[0]
    return Check(f"unitary{tag}", float(np.linalg.norm(u.conj().T @ u - np.eye(n), 2)), False)


def _settle(checks, tol):
    return ValidationReport(tuple(Check(c.name, c.defect, c.defect <= tol) for c in checks), tol)


def validate_triple(t, tol=DEFAULT_TOL):
    """Measure the projection and unitarity defects of ``t``."""
    checks = _projection_checks(t.p) + [_unitary_check(t.u)]
    return _settle(checks, tol)


def bcl_pair(t, z):
    """``((P^perp + zP) U, U^* (P + z P^perp))``; their product is ``zI``."""
    z = complex(z)
    n = t.dim
    eye = np.eye(n)
    uh = t.u.conj().T
    phi1 = (eye - t.p + z * t.p) @ t.u
    phi2 = uh @ (t.p + z * (eye - t.p))
    return phi1, phi2


def tuple_pencils(t, z):
    """``[P_i^perp U_i + z P_i U_i for each factor]``."""
    z = complex(z)
    eye = np.eye(t.dim)
    return [(eye - p + z * p) @ u for p, u in zip(t.ps, t.us)]


def realize(t, z):
    """``P (I - z U^* P^perp)^{-1} U^* P`` on ``Ran P``, in the basis
    ``t.range_p``.
    """
    if t.rank == 0:
        raise EmptyRange("P has rank 0; the realized function lives on a zero space")
    z = complex(z)
    v = t.range_p
    uh = t.u.conj().T
    res = np.eye(t.dim) - z * (uh @ t.p_perp)
    try:
        x = np.linalg.solve(res, uh @ v)
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent(f"I - zU*P^perp singular at z={z}") from exc
    return v.conj().T @ x


def triple_from_colligation(c, tol=DEFAULT_TOL):
    """Triple on ``C^dim_e (+) C^dim_h`` with ``U^* = [A B; C D]`` and ``P``
    the projection onto the first summand.
    """
    defect = c.unitary_defect()
    if defect > tol:
        raise NotUnitary(f"colligation unitarity defect {defect:.3e} exceeds {tol:.1e}")
    n = c.dim_e + c.dim_h
    p = np.zeros((n, n), dtype=complex)
    p[:c.dim_e, :c.dim_e] = np.eye(c.dim_e)
    return ModelTriple(n, p, c.matrix.conj().T)


def colligation_from_triple(t):
    """Colligation of ``U^*`` in the split ``Ran P (+) Ran P^perp``.

    The first summand uses ``t.range_p``, so the transfer function of the
    result equals ``realize(t, .)``.
    """
    if t.rank == 0:
        raise EmptyRange("P has rank 0")
    comp = range_basis(t.p_perp, t.dim - t.rank)
    basis = np.hstack([t.range_p, comp])
    w = basis.conj().T @ t.u.conj().T @ basis
    return Colligation.from_matrix(w, t.rank)


def fundamental_operator(t):
    """``F = P U + U^* P^perp``."""
    return t.p @ t.u + t.u.conj().T @ t.p_perp


def _roots_of_unity(k):
    return np.exp(2j * np.pi * np.arange(k) / k)


def product_pencil_coefficients(t):
    """Matrix coefficients of ``Phi_1(z) ... Phi_d(z)``, lowest degree first.

    Obtained by evaluating at ``d + 1`` roots of unity and inverting the DFT.
    """
    nodes = _roots_of_unity(t.d + 1)
    vals = []
    for z in nodes:
        prod = np.eye(t.dim, dtype=complex)
        for phi in tuple_pencils(t, z):
            prod = prod @ phi
        vals.append(prod)
    vals = np.array(vals)
    return np.fft.fft(vals, axis=0) / len(nodes)


def purity_defect(t):
    """Largest deviation of the product pencil's coefficients from ``(0, I, 0, ...)``."""
    coef = product_pencil_coefficients(t)
    target = np.zeros_like(coef)
    target[1] = np.eye(t.dim)
    return float(max(np.linalg.norm(c, 2) for c in coef - target))


def commutation_defect(t):
    """Largest coefficientwise commutator of the pencils ``Phi_i``, ``Phi_j``."""
    a = [(np.eye(t.dim) - p) @ u for p, u in zip(t.ps, t.us)]
    b = [p @ u for p, u in zip(t.ps, t.us)]
    worst = 0.0
    for i in range(t.d):
        for j in range(i + 1, t.d):
            terms = (a[i] @ a[j] - a[j] @ a[i],
                     b[i] @ b[j] - b[j] @ b[i],
                     a[i] @ b[j] + b[i] @ a[j] - a[j] @ b[i] - b[j] @ a[i])
            worst = max(worst, max(np.linalg.norm(x, 2) for x in terms))
    return float(worst)


def validate_tuple(t, tol=DEFAULT_TOL):
    """Matrix invariants, pencil commutation and purity of a model tuple."""
    checks = []
    for i, (p, u) in enumerate(zip(t.ps, t.us)):
        checks += _projection_checks(p, f"[{i}]")
        checks.append(_unitary_check(u, f"[{i}]"))
    checks.append(Check("arity>=3", 0.0 if t.d >= 3 else 1.0, False))
    # distance of the best factor from being trivial (0 or I)
    ranks = [float(np.trace(p).real) for p in t.ps]
    nontriv = max(min(r, t.dim - r) for r in ranks)
    checks.append(Check("nontrivial_projection", 0.0 if nontriv >= 0.5 else 1.0, False))
    checks.append(Check("commuting", commutation_defect(t), False))
    checks.append(Check("pure", purity_defect(t), False))
    return _settle(checks, tol)
