"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
output) or directly with ``python tests/test_acceptance.py``.
"""

import numpy as np
import pytest

from distvar import bidisc as B
from distvar import fixtures as fx
from distvar import polydisc as PD
from distvar import symm as S
from distvar.bidisc import GridSpec, Region, Verdict
from distvar.canonical import Equivalence, canonical_triple, roundtrip_error, unitary_equivalence
from distvar.inner import (BivariatePoly, RationalInnerFn, essential_symmetry_check, psi_fiber,
                           psi_membership_defect, xi_extract)
from distvar.linalg import numerical_radius
from distvar.model import bcl_pair, colligation_from_triple, purity_defect, realize
from distvar.symm import GammaRegion, Representable

GRID = GridSpec()  # 193 fiber parameters, radius 0.95


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail=""):
        line = f"criterion {n:2d} {title}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def disc_points(rng, k, r=0.98):
    return r * np.sqrt(rng.random(k)) * np.exp(2j * np.pi * rng.random(k))


def test_c01_pencil_identity(report):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        t = fx.random_triple(rng, int(rng.integers(2, 9)))
        zs = np.concatenate([disc_points(rng, 10, 0.999), 3 * disc_points(rng, 10, 1.0)])
        for z in zs:
            a, b = bcl_pair(t, z)
            err = np.linalg.norm(a @ b - z * np.eye(t.dim), 2) / (1 + abs(z))
            worst = max(worst, err)
    report(1, "pencil identity", worst <= 1e-10, f"max scaled error {worst:.2e}")


def test_c02_fiber_product_law(report):
    rng = np.random.default_rng(2)
    triples = [make() for make in fx.TRIPLES.values()]
    triples += [fx.random_triple(rng, int(rng.integers(2, 9))) for _ in range(10)]
    worst, count = 0.0, 0
    for t in triples:
        for p in B.sample(t, GRID).points:
            worst = max(worst, abs(p.coords[0] * p.coords[1] - p.fiber_param))
            count += 1
    report(2, "fiber product law", worst <= 1e-8, f"{count} points, max |z1 z2 - z| {worst:.2e}")


def test_c03_diagonal(report):
    t = fx.diagonal()
    smp = B.sample(t, GRID)
    dev = max(abs(p.coords[0] - p.coords[1]) for p in smp.points)
    cert = B.certify(t, grid=GRID)
    ok = dev < 1e-8 and cert.verdict is Verdict.DISTINGUISHED
    report(3, "diagonal fixture", ok, f"max |z1 - z2| {dev:.2e}, verdict {cert.verdict.value}")


def test_c04_neil(report):
    t = fx.neil()
    smp = B.sample(t, GRID)
    dev = max(abs(p.coords[0] ** 3 - p.coords[1] ** 2) for p in smp.points)
    cert = B.certify(t, grid=GRID)
    xi = xi_extract(RationalInnerFn.from_triple(t))
    target = np.zeros((4, 3), dtype=complex)
    target[3, 0], target[0, 2] = 1, -1
    got = np.zeros((4, 3), dtype=complex)
    r, c = xi.coeffs.shape
    shape_ok = r <= 4 and c <= 3
    if shape_ok:
        got[:r, :c] = xi.coeffs
    res = np.abs(got - target).max() if shape_ok else np.inf
    ok = dev < 1e-7 and cert.verdict is Verdict.DISTINGUISHED and res < 1e-6
    report(4, "Neil parabola", ok,
           f"{len(smp.points)} points, max |z1^3 - z2^2| {dev:.2e}, verdict "
           f"{cert.verdict.value}, xi residual {res:.2e}")


def test_c05_non_distinguished(report):
    c1 = B.certify(fx.proj_identity(), grid=GRID)
    ok1 = not c1.compatible and c1.verdict is Verdict.NOT_DISTINGUISHED
    smp = B.sample(fx.block4(), GRID)
    mixed = [p for p in smp.points if p.region is Region.MIXED]
    on_line = all(abs(p.coords[1] - 1) < 1e-8 or abs(p.coords[0] - 1) < 1e-8 for p in mixed)
    has_z1 = any(abs(p.coords[1] - 1) < 1e-8 for p in mixed)
    c2 = B.certify(fx.block4(), grid=GRID)
    ok2 = bool(mixed) and on_line and has_z1 and c2.verdict is Verdict.NOT_DISTINGUISHED
    report(5, "non-distinguished fixtures", ok1 and ok2,
           f"proj-identity {c1.verdict.value} (compatible={c1.compatible}); "
           f"block4 {len(mixed)} mixed points, {c2.verdict.value}")


def _shortcut(t):
    pp, u, p = t.p_perp, t.u, t.p
    uh = u.conj().T
    ts = B.nonconstant_points()
    return (B.spread(lambda z: pp @ u + z * uh @ p, ts) > B.SPREAD_TOL
            and B.spread(lambda z: uh @ p + z * pp @ u, ts) > B.SPREAD_TOL)


def test_c06_passage(report):
    rng = np.random.default_rng(6)
    grid = GridSpec(0.95, 4, 12)
    z1s = B.disc_grid(49, 0.95)
    kept, worst_fwd, worst_back, n_fwd, n_back = 0, 0.0, 0.0, 0, 0
    while kept < 50:
        t = fx.random_triple(rng, int(rng.integers(2, 7)))
        if not _shortcut(t):
            continue
        kept += 1
        psi = colligation_from_triple(t)
        for p in B.sample(t, grid).points:
            if p.region is Region.OPEN_POLYDISC:
                worst_fwd = max(worst_fwd, psi_membership_defect(psi, *p.coords))
                n_fwd += 1
        for z1 in z1s:
            for z2 in psi_fiber(psi, z1):
                if abs(z2) < 1 - B.EPS_T:
                    worst_back = max(worst_back, B.membership_defect(t, z1, z2))
                    n_back += 1
    ok = worst_fwd < 1e-6 and worst_back < 1e-6
    report(6, "pencil and Psi varieties agree (both inclusions)", ok,
           f"{n_fwd} pencil points max defect {worst_fwd:.2e}; "
           f"{n_back} psi points max defect {worst_back:.2e}")


def _brute_nu_2x2(a, n=1441):
    t = np.linspace(0, np.pi / 2, n)[:, None]
    ph = np.exp(1j * np.linspace(0, 2 * np.pi, n))[None, :]
    h1, h2 = np.cos(t) + 0 * ph, np.sin(t) * ph
    v = (np.conj(h1) * (a[0, 0] * h1 + a[0, 1] * h2)
         + np.conj(h2) * (a[1, 0] * h1 + a[1, 1] * h2))
    return np.abs(v).max()


def test_c07_numerical_radius(report):
    rng = np.random.default_rng(7)
    zetas = np.exp(2j * np.pi * np.arange(32) / 32)
    worst = 0.0
    for _ in range(100):
        t = fx.random_triple(rng, int(rng.integers(2, 9)))
        a, b = t.p_perp @ t.u, t.u.conj().T @ t.p
        worst = max(worst, max(numerical_radius(a + z * b) for z in zetas))
    jordan = np.array([[0, 2], [0, 0]], dtype=complex)
    nu = numerical_radius(jordan)
    oracle = _brute_nu_2x2(jordan)
    ok = worst <= 1 + 1e-8 and abs(nu - 1) <= 1e-6 and abs(oracle - 1) <= 1e-6
    report(7, "numerical radius bounds", ok,
           f"max nu {worst:.12f}; nu(J) {nu:.12f}, grid oracle {oracle:.9f}")


def test_c08_contractivity(report):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        t = fx.random_triple(rng, int(rng.integers(2, 9)))
        for z in disc_points(rng, 20, 0.999):
            worst = max(worst, np.linalg.norm(realize(t, z), 2))
    report(8, "realization contractivity", worst <= 1 + 1e-10, f"max norm {worst:.15f}")


def test_c09_canonical(report):
    rng = np.random.default_rng(9)
    psi = RationalInnerFn(fx.z2_colligation())
    t = canonical_triple(psi)
    held = disc_points(rng, 20, 0.9)
    err = max(abs(realize(t, z)[0, 0] - z * z) for z in held)
    verdict, _ = unitary_equivalence(t, fx.z2_triple())
    worst = 0.0
    for k in range(20):
        e, h = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        psi_r = RationalInnerFn(fx.random_colligation(rng, e, h))
        tr = canonical_triple(psi_r, seed=k)
        worst = max(worst, roundtrip_error(psi_r, tr, disc_points(rng, 20, 0.9)))
    ok = t.dim == 3 and err < 1e-6 and verdict is Equivalence.EQUIVALENT and worst < 1e-6
    report(9, "canonical round-trip", ok,
           f"z^2: dim {t.dim}, error {err:.2e}, {verdict.value}; random max error {worst:.2e}")


def test_c10_symmetrized_bidisc(report):
    royal = fx.royal()
    smp = S.sample_symm(royal)
    dev = max(abs(q.s ** 2 - 4 * q.p) for q in smp.points)
    nu, _ = S.nu_certificate(royal)
    ok_royal = dev < 1e-8 and smp.verdict is Verdict.DISTINGUISHED and abs(nu - 1) < 1e-8

    pi = S.sample_symm(fx.proj_identity())
    flagged = any(abs(q.s - 1.5) < 1e-12 and abs(q.p - 0.5) < 1e-12
                  and q.region is GammaRegion.TOPO_BOUNDARY for q in pi.points)
    ok_pi = flagged and pi.verdict is Verdict.NOT_DISTINGUISHED

    pert = fx.perturbed_royal()
    zs = 0.9 * np.linspace(0.1, 1, 10) * np.exp(1j * np.linspace(0, 6, 10))
    d_pert = max(max(S.symm_membership_defect(pert, 0, -z * z),
                     S.symm_membership_defect(pert, 2 * z, z * z)) for z in zs)

    lam = 0.6
    dl = fx.diag_lambda(lam)
    d_lam = max(max(S.symm_membership_defect(dl, np.conj(lam) + lam * p, p),
                    S.symm_membership_defect(dl, 0, p)) for p in zs)
    ok = ok_royal and ok_pi and d_pert < 1e-6 and d_lam < 1e-6
    report(10, "symmetrized bidisc", ok,
           f"royal |s^2-4p| {dev:.2e}, nu(F) {nu:.6f}, {smp.verdict.value}; "
           f"proj-identity (1.5,0.5) flagged={flagged}, {pi.verdict.value}; "
           f"perturbed defect {d_pert:.2e}; diag-lambda defect {d_lam:.2e}")


def test_c11_representability(report):
    r1 = S.representable_2x2(np.diag([0.5, 0.1]))
    r2 = S.representable_2x2([[0, 1], [0, 0]])
    p = np.diag([1.0, 0.0])
    worst = 0.0
    for zeta in (0.5 + 1j * np.sqrt(3) / 2, 0.5 - 1j * np.sqrt(3) / 2):
        u = np.array([[0, zeta], [zeta, 0]])
        worst = max(worst, np.abs(p @ u + u.conj().T @ (np.eye(2) - p)
                                  - np.array([[0, 1], [0, 0]])).max(),
                    np.abs(u.conj().T @ u - np.eye(2)).max())
    ok = r1 is Representable.NO and r2 is Representable.UNDETERMINED and worst < 1e-12
    report(11, "representability", ok,
           f"diag(0.5,0.1) {r1.value}, Jordan {r2.value}, identity residual {worst:.1e}")


def test_c12_polydisc(report):
    rng = np.random.default_rng(12)
    tuples = [fx.monomial_tuple((1, 1, 1)), fx.monomial_tuple((2, 1, 2)),
              fx.random_pure_tuple(rng), fx.random_pure_tuple(rng, blocks=3)]
    pur, prod, card, sym = 0.0, 0.0, True, True
    for t in tuples:
        pur = max(pur, purity_defect(t))
        pts = []
        for z in GRID.points():
            fb = PD.tuple_fiber(t, z)
            card &= len(fb) == t.dim
            for p in fb:
                prod = max(prod, abs(np.prod(p.coords) - z))
            pts.extend(fb)
        sym &= PD.symmetry_check_poly(t, pts).ok
    ok = pur <= 1e-10 and prod <= 1e-8 and card and sym
    report(12, "polydisc observables", ok,
           f"purity {pur:.1e}, product law {prod:.1e}, cardinality={card}, symmetry={sym}")


def test_c13_symmetry_suite(report):
    checked, worst, bad = 0, 0.0, []
    for name, make in fx.TRIPLES.items():
        t = make()
        cert = B.certify(t, grid=GRID)
        if cert.verdict is not Verdict.DISTINGUISHED:
            continue
        rep = B.symmetry_check(t, B.sample(t, GRID).points)
        checked += rep.checked
        worst = max(worst, rep.max_defect)
        if not rep.ok:
            bad.append(name)
    ok = checked > 0 and not bad and worst < 1e-6
    report(13, "symmetry suite", ok, f"{checked} reflected points, max defect {worst:.2e}")


def test_c14_essential_symmetry(report):
    c = np.zeros((3, 3), dtype=complex)
    # (z1 - z2)(z1 z2 - 1) = z1^2 z2 - z1 - z1 z2^2 + z2
    c[2, 1], c[1, 0], c[1, 2], c[0, 1] = 1, -1, -1, 1
    ok1, u = essential_symmetry_check(BivariatePoly(c))
    ok2, _ = essential_symmetry_check(BivariatePoly([[-2], [1]]))
    ok = ok1 and u is not None and abs(abs(u) - 1) < 1e-12 and not ok2
    report(14, "essential T^2-symmetry", ok, f"product passes with c={u}; z1 - 2 passes={ok2}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
