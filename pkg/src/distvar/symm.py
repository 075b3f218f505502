"""Varieties of the symmetrized bidisc from the fundamental operator
``F = P U + U^* P^perp``: fibers of ``det(F^* + p F - s I) = 0``, region
classification through the roots of ``t^2 - s t + p`` and a necessary
condition for a 2x2 matrix to be of the form ``P U + U^* P^perp``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bidisc import EPS_T, MARGIN, MEMBER_TOL, Verdict
from .errors import InputError
from .linalg import as_square, eigenvalues, numerical_radius
from .model import fundamental_operator


class GammaRegion(str, enum.Enum):
    OPEN_G = "OPEN_G"
    DIST_BOUNDARY = "DIST_BOUNDARY"
    TOPO_BOUNDARY = "TOPO_BOUNDARY"
    OUTSIDE = "OUTSIDE"


def quadratic_roots(s, p):
    """Roots of ``t^2 - s t + p``.

    The larger-modulus root comes from ``(s + r) / 2`` with the sign of the
    square root ``r`` chosen to avoid cancellation; the other is ``p`` over
    it.
    """
    s, p = complex(s), complex(p)
    r = np.sqrt(complex(s * s - 4 * p))
    big = s + r if abs(s + r) >= abs(s - r) else s - r
    if big == 0:
        return 0j, 0j
    t1 = big / 2
    return t1, p / t1


def gamma_region(s, p, eps=EPS_T):
    t1, t2 = quadratic_roots(s, p)
    a = (abs(t1), abs(t2))
    if all(x < 1 - eps for x in a):
        return GammaRegion.OPEN_G
    if all(abs(x - 1) <= eps for x in a):
        return GammaRegion.DIST_BOUNDARY
    if all(x <= 1 + eps for x in a) and any(abs(x - 1) <= eps for x in a):
        return GammaRegion.TOPO_BOUNDARY
    return GammaRegion.OUTSIDE


@dataclass(frozen=True)
class SymmPoint:
    s: complex
    p: complex
    region: GammaRegion

    @classmethod
    def at(cls, s, p, eps=EPS_T):
        return cls(complex(s), complex(p), gamma_region(s, p, eps))

    def to_dict(self):
        return {"s": [self.s.real, self.s.imag], "p": [self.p.real, self.p.imag],
                "region": self.region.value}


@dataclass(frozen=True)
class SymmSample:
    points: tuple
    verdict: Verdict

    def to_dict(self):
        return {"points": [q.to_dict() for q in self.points], "verdict": self.verdict.value}


def wf_fiber(f, p, seed=0, tol=1e-8):
    """Eigenvalues ``s`` of ``F^* + p F``, sorted by (Re, Im)."""
    f = as_square(f, "F")
    ev = eigenvalues(f.conj().T + complex(p) * f)
    return sorted((complex(s) for s in ev), key=lambda s: (round(s.real, 12), round(s.imag, 12)))


def p_grid(radii=8, angles=24):
    """Product coordinates: zero, then circles of radius ``k / radii`` for
    ``k = 1..radii`` (so the unit circle is included) at ``angles`` angles.
    """
    rs = np.arange(1, radii + 1) / radii
    th = 2 * np.pi * np.arange(angles) / angles
    return np.concatenate([[0j], (rs[:, None] * np.exp(1j * th)[None, :]).ravel()])


def symm_verdict(points):
    regions = {q.region for q in points}
    if GammaRegion.TOPO_BOUNDARY in regions:
        return Verdict.NOT_DISTINGUISHED
    if GammaRegion.OPEN_G in regions:
        return Verdict.DISTINGUISHED
    return Verdict.UNDETERMINED


def sample_symm(t, grid=None, tol=1e-8, eps=EPS_T):
    """Fibers of the fundamental operator of ``t`` over a grid of ``p``.

    Any point on the topological but not the distinguished boundary makes
    the verdict NOT_DISTINGUISHED; DISTINGUISHED needs an interior point.
    """
    f = fundamental_operator(t)
    ps = p_grid() if grid is None else np.asarray(grid, dtype=complex)
    pts = [SymmPoint.at(s, p, eps) for p in ps for s in wf_fiber(f, p, tol=tol)]
    return SymmSample(tuple(pts), symm_verdict(pts))


def pi_project(pts, eps=EPS_T):
    """``(z1, z2) -> (z1 + z2, z1 z2)`` for points of the bidisc variety."""
    out = []
    for pt in pts:
        coords = pt.coords if hasattr(pt, "coords") else pt
        z1, z2 = coords
        out.append(SymmPoint.at(z1 + z2, z1 * z2, eps))
    return out


def symm_membership_defect(t, s, p):
    f = fundamental_operator(t)
    m = f.conj().T + complex(p) * f - complex(s) * np.eye(t.dim)
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def symm_member(t, s, p, tol=MEMBER_TOL):
    d = symm_membership_defect(t, s, p)
    return d < tol, d


def nu_certificate(t, tol=1e-10, margin=MARGIN):
    """``(nu(F), nu(F) < 1 - margin)``; a strict value certifies distinguishedness."""
    nu = numerical_radius(fundamental_operator(t), tol)
    return nu, nu < 1.0 - margin


class Representable(str, enum.Enum):
    NO = "NO"
    UNDETERMINED = "UNDETERMINED"


def representable_2x2(a, tol=1e-9):
    """Necessary test for ``a = P U + U^* P^perp`` with 2x2 ``P``, ``U``.

    Eigenvalues of unequal modulus rule it out; equal moduli decide nothing.
    """
    a = as_square(a, "matrix")
    if a.shape != (2, 2):
        raise InputError(f"expected a 2x2 matrix, got {a.shape}")
    l1, l2 = np.linalg.eigvals(a)
    if abs(abs(l1) - abs(l2)) > tol * max(1.0, np.abs(a).max()):
        return Representable.NO
    return Representable.UNDETERMINED
