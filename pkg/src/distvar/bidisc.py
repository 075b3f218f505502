"""The pencil description of a variety in the bidisc: fibers, sampling,
membership, reflection symmetry and distinguishedness certificates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .linalg import common_kernel_defect, joint_eigenvalues, numerical_radius
from .model import bcl_pair

EPS_T = 1e-6
MARGIN = 1e-4
SPREAD_TOL = 1e-6
MEMBER_TOL = 1e-6
# a nu value this close to 1 at an interior point violates compatibility
NU_EQUALS_ONE = 1e-9


class Region(str, enum.Enum):
    OPEN_POLYDISC = "D"
    TORUS = "T"
    EXTERIOR = "E"
    MIXED = "MIXED"


class Verdict(str, enum.Enum):
    DISTINGUISHED = "DISTINGUISHED"
    NOT_DISTINGUISHED = "NOT_DISTINGUISHED"
    UNDETERMINED = "UNDETERMINED"


def coord_band(w, eps=EPS_T):
    r = abs(w)
    if r < 1.0 - eps:
        return Region.OPEN_POLYDISC
    if abs(r - 1.0) <= eps:
        return Region.TORUS
    return Region.EXTERIOR


def classify(coords, eps=EPS_T):
    """``D``, ``T`` or ``E`` when every coordinate is in that band, else ``MIXED``."""
    bands = {coord_band(w, eps) for w in coords}
    return bands.pop() if len(bands) == 1 else Region.MIXED


@dataclass(frozen=True)
class VarietyPoint:
    fiber_param: complex
    coords: tuple
    region: Region

    def to_dict(self):
        return {"z": [self.fiber_param.real, self.fiber_param.imag],
                "coords": [[w.real, w.imag] for w in self.coords],
                "region": self.region.value}


@dataclass(frozen=True)
class GridSpec:
    """Fiber parameters ``center + r_k e^{i theta_j}`` plus ``center``.

    ``r_k = radius * k / radii`` for ``k = 1..radii`` and ``theta_j = 2 pi
    j / angles``.
    """

    radius: float = 0.95
    radii: int = 8
    angles: int = 24
    center: complex = 0.0

    def __post_init__(self):
        if self.radii < 0 or self.angles < 1 or self.radius < 0:
            raise ValueError("grid needs radius >= 0, radii >= 0, angles >= 1")

    def points(self):
        rs = self.radius * np.arange(1, self.radii + 1) / max(self.radii, 1)
        th = 2 * np.pi * np.arange(self.angles) / self.angles
        ring = (rs[:, None] * np.exp(1j * th)[None, :]).ravel()
        return np.concatenate([[complex(self.center)], complex(self.center) + ring])

    def __len__(self):
        return 1 + self.radii * self.angles


@dataclass(frozen=True)
class VarietySample:
    points: tuple
    grid: object
    verdict: Verdict
    evidence: tuple = field(default=())

    def to_dict(self):
        return {"points": [p.to_dict() for p in self.points],
                "verdict": self.verdict.value}


def _sort_key(pt):
    out = []
    for w in pt.coords:
        out += [round(w.real, 12), round(w.imag, 12)]
    return tuple(out)


def fiber_points(family, z, seed=0, tol=1e-8, eps=EPS_T):
    """Region-classified joint eigenvalues of a commuting family at parameter ``z``."""
    js = joint_eigenvalues(family, seed, tol)
    pts = [VarietyPoint(complex(z), tuple(complex(w) for w in row),
                        classify(row, eps)) for row in js.points]
    return sorted(pts, key=_sort_key)


def fiber(t, z, seed=0, tol=1e-8, eps=EPS_T):
    """Joint spectrum of the BCL pair at ``z``, sorted by (Re, Im) of coordinates."""
    return fiber_points(bcl_pair(t, z), z, seed, tol, eps)


def sample_verdict(points):
    """Verdict from region tags alone: any ``MIXED`` point rules out
    distinguishedness; otherwise an interior point is required.
    """
    regions = {p.region for p in points}
    if Region.MIXED in regions:
        return Verdict.NOT_DISTINGUISHED
    if Region.OPEN_POLYDISC in regions:
        return Verdict.DISTINGUISHED
    return Verdict.UNDETERMINED


def sample(t, grid=None, seed=0, tol=1e-8, eps=EPS_T):
    """Union of fibers over ``grid`` (default :class:`GridSpec`), verdict from regions."""
    grid = GridSpec() if grid is None else grid
    pts = []
    for z in grid.points():
        pts.extend(fiber(t, z, seed, tol, eps))
    return VarietySample(tuple(pts), grid, sample_verdict(pts))


def membership_defect(t, z1, z2):
    z1, z2 = complex(z1), complex(z2)
    phi1, phi2 = bcl_pair(t, z1 * z2)
    eye = np.eye(t.dim)
    return common_kernel_defect([phi1 - z1 * eye, phi2 - z2 * eye])


def is_member(t, z1, z2, tol=MEMBER_TOL):
    """``(accepted, defect)`` for the point ``(z1, z2)``."""
    d = membership_defect(t, z1, z2)
    return d < tol, d


@dataclass(frozen=True)
class SymmetryReport:
    checked: int
    skipped: int
    failures: tuple
    max_defect: float

    @property
    def ok(self):
        return not self.failures


def reflect(coords):
    return tuple(1.0 / np.conj(w) for w in coords)


def symmetry_report(member_defect, pts, tol=MEMBER_TOL, zero_tol=1e-6):
    """Apply ``member_defect`` to the reflection of every point whose
    coordinates all exceed ``zero_tol`` in modulus.
    """
    fails, worst, checked, skipped = [], 0.0, 0, 0
    for pt in pts:
        if min(abs(w) for w in pt.coords) < zero_tol:
            skipped += 1
            continue
        ref = reflect(pt.coords)
        d = member_defect(ref)
        worst = max(worst, d)
        checked += 1
        if not d < tol:
            fails.append((pt, ref, d))
    return SymmetryReport(checked, skipped, tuple(fails), worst)


def symmetry_check(t, pts, tol=MEMBER_TOL):
    """Reflection ``(1/conj(z1), 1/conj(z2))`` of each point must be a member."""
    return symmetry_report(lambda c: membership_defect(t, *c), pts, tol)


def disc_grid(count, radius, rings=8):
    """``count`` points of the closed disc of the given radius: the center
    and ``rings`` concentric circles (the last one on the rim) with point
    counts proportional to the circle radius.
    """
    ks = np.arange(1, rings + 1)
    per = np.floor((count - 1) * ks / ks.sum()).astype(int)
    per[-1] += count - 1 - per.sum()
    pts = [np.zeros(1, dtype=complex)]
    for k, m in zip(ks, per):
        pts.append(radius * k / rings * np.exp(2j * np.pi * (np.arange(m) + 0.5 * (k % 2)) / m))
    return np.concatenate(pts)


def nonconstant_points(count=16, radius=0.9):
    # the center, then an inner and an outer ring
    k = count - 1
    inner = 0.5 * radius * np.exp(2j * np.pi * np.arange(k // 2) / max(k // 2, 1))
    outer = radius * np.exp(2j * np.pi * (np.arange(k - k // 2) + 0.5) / max(k - k // 2, 1))
    return np.concatenate([[0j], inner, outer])


@dataclass(frozen=True)
class CertificateBundle:
    """Evidence gathered by :func:`certify`.

    ``max_nu`` lists the largest sampled numerical radius of each pencil;
    ``spreads`` the sampled ranges of the non-constancy test functions;
    ``interior_nu_one`` is set when a pencil reaches numerical radius one at
    an interior grid point, which contradicts compatibility.
    """

    compatible: bool
    nonconstant: bool
    max_nu: tuple
    argmax: tuple
    spreads: tuple
    interior_nu_one: bool
    sample_verdict: Verdict
    verdict: Verdict
    margin: float = MARGIN

    def to_dict(self):
        return {
            "compatible": self.compatible,
            "nonconstant": self.nonconstant,
            "max_nu": list(self.max_nu),
            "argmax": [[z.real, z.imag] for z in self.argmax],
            "spreads": list(self.spreads),
            "interior_nu_one": self.interior_nu_one,
            "sample_verdict": self.sample_verdict.value,
            "verdict": self.verdict.value,
            "margin": self.margin,
        }


def combine_verdict(sampled, certified, refuted):
    """Overall verdict from the sample, a positive certificate and a refutation."""
    if refuted or sampled is Verdict.NOT_DISTINGUISHED:
        return Verdict.NOT_DISTINGUISHED
    if certified and sampled is Verdict.DISTINGUISHED:
        return Verdict.DISTINGUISHED
    return Verdict.UNDETERMINED


def pencil_sweep(pencils, zs, tol=1e-10):
    """For each pencil callable, ``(max nu, argmax)`` over the points ``zs``
    and whether nu reaches one (within ``NU_EQUALS_ONE``) at some point.
    """
    out = []
    for pencil in pencils:
        vals = np.array([numerical_radius(pencil(z), tol) for z in zs])
        k = int(np.argmax(vals))
        out.append((float(vals[k]), complex(zs[k]), vals))
    return out


def spread(fn, zs, tol=1e-10):
    vals = [numerical_radius(fn(z), tol) for z in zs]
    return float(max(vals) - min(vals))


def certify(t, tol=1e-8, grid=None, seed=0, margin=MARGIN, spread_tol=SPREAD_TOL,
            sweep_points=200, sweep_radius=0.999, interior_radius=0.95):
    """Compatibility sweep, non-constancy shortcut and sample verdict.

    The overall verdict is NOT_DISTINGUISHED when the sample has a mixed
    point or a pencil has numerical radius one at a point of modulus at most
    ``interior_radius``; DISTINGUISHED when the sample is clean and either
    the sweep or the shortcut certifies compatibility; UNDETERMINED
    otherwise.
    """
    p, u = t.p, t.u
    uh = u.conj().T
    pp = t.p_perp
    zs = disc_grid(sweep_points, sweep_radius)
    sweep = pencil_sweep([lambda z: bcl_pair(t, z)[0], lambda z: bcl_pair(t, z)[1]], zs)
    compatible = all(m < 1.0 - margin for m, _, _ in sweep)
    interior = np.abs(zs) <= interior_radius + 1e-12
    nu_one = any((vals[interior] >= 1.0 - NU_EQUALS_ONE).any() for _, _, vals in sweep)
    ts = nonconstant_points()
    spreads = (spread(lambda z: pp @ u + z * uh @ p, ts),
               spread(lambda z: uh @ p + z * pp @ u, ts))
    nonconstant = all(s > spread_tol for s in spreads)
    smp = sample(t, grid, seed, tol)
    verdict = combine_verdict(smp.verdict, compatible or nonconstant, nu_one)
    return CertificateBundle(compatible, nonconstant,
                             tuple(m for m, _, _ in sweep), tuple(a for _, a, _ in sweep),
                             spreads, bool(nu_one), smp.verdict, verdict, margin)
