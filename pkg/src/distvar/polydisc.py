"""Varieties of the polydisc from pure model tuples: fibers, membership
and certificates, mirroring the two-variable tools of :mod:`distvar.bidisc`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bidisc import (MARGIN, MEMBER_TOL, NU_EQUALS_ONE, SPREAD_TOL, GridSpec, Verdict,
                     combine_verdict, disc_grid, fiber_points, nonconstant_points,
                     pencil_sweep, sample_verdict, spread, symmetry_report)
from .errors import InputError
from .linalg import common_kernel_defect
from .model import tuple_pencils


def tuple_fiber(t, z, seed=0, tol=1e-8):
    """Joint eigenvalues of ``(Phi_1(z), ..., Phi_d(z))`` as classified points."""
    return fiber_points(tuple_pencils(t, z), z, seed, tol)


def membership_defect_poly(t, coords):
    coords = [complex(w) for w in coords]
    if len(coords) != t.d:
        raise InputError(f"expected {t.d} coordinates, got {len(coords)}")
    z = complex(np.prod(coords))
    eye = np.eye(t.dim)
    return common_kernel_defect([phi - w * eye for phi, w in zip(tuple_pencils(t, z), coords)])


def is_member_poly(t, coords, tol=MEMBER_TOL):
    d = membership_defect_poly(t, coords)
    return d < tol, d


def sample_poly(t, grid=None, seed=0, tol=1e-8):
    grid = GridSpec() if grid is None else grid
    pts = []
    for z in grid.points():
        pts.extend(tuple_fiber(t, z, seed, tol))
    return tuple(pts)


def symmetry_check_poly(t, pts, tol=MEMBER_TOL):
    return symmetry_report(lambda c: membership_defect_poly(t, c), pts, tol)


@dataclass(frozen=True)
class PolyCertificate:
    """``max_nu[j]`` is the largest sampled ``nu(Phi_j)``; ``spreads[j]`` the
    sampled range of ``z -> nu(P_j^perp U_j + z U_j^* P_j)``, whose
    non-constancy forces ``nu(Phi_j) < 1`` on the disc.
    """

    pure: bool
    compatible: bool
    nonconstant: bool
    max_nu: tuple
    spreads: tuple
    interior_nu_one: bool
    max_fiber_size: int
    sample_verdict: Verdict
    verdict: Verdict

    def to_dict(self):
        return {
            "pure": self.pure,
            "compatible": self.compatible,
            "nonconstant": self.nonconstant,
            "max_nu": list(self.max_nu),
            "spreads": list(self.spreads),
            "interior_nu_one": self.interior_nu_one,
            "max_fiber_size": self.max_fiber_size,
            "sample_verdict": self.sample_verdict.value,
            "verdict": self.verdict.value,
        }


def certify_poly(t, tol=1e-8, grid=None, seed=0, margin=MARGIN, spread_tol=SPREAD_TOL,
                 sweep_points=200, sweep_radius=0.999, interior_radius=0.95):
    """Per-factor compatibility sweep and shortcut, plus a fiber sample.

    A tuple that is not pure gets verdict UNDETERMINED without sampling.
    """
    if not t.pure:
        return PolyCertificate(False, False, False, (), (), False, 0,
                               Verdict.UNDETERMINED, Verdict.UNDETERMINED)
    zs = disc_grid(sweep_points, sweep_radius)
    pencils = [(lambda z, j=j: tuple_pencils(t, z)[j]) for j in range(t.d)]
    sweep = pencil_sweep(pencils, zs)
    compatible = all(m < 1.0 - margin for m, _, _ in sweep)
    interior = np.abs(zs) <= interior_radius + 1e-12
    nu_one = any((vals[interior] >= 1.0 - NU_EQUALS_ONE).any() for _, _, vals in sweep)
    eye = np.eye(t.dim)
    ts = nonconstant_points()
    spreads = tuple(spread(lambda z, p=p, u=u: (eye - p) @ u + z * u.conj().T @ p, ts)
                    for p, u in zip(t.ps, t.us))
    nonconstant = all(s > spread_tol for s in spreads)
    grid = GridSpec() if grid is None else grid
    sizes, pts = [], []
    for z in grid.points():
        fb = tuple_fiber(t, z, seed, tol)
        sizes.append(len(fb))
        pts.extend(fb)
    sv = sample_verdict(pts)
    verdict = combine_verdict(sv, compatible or nonconstant, nu_one)
    return PolyCertificate(True, compatible, nonconstant, tuple(m for m, _, _ in sweep),
                           spreads, bool(nu_one), max(sizes), sv, verdict)
