import numpy as np
import pytest

from distvar import bidisc as B
from distvar import fixtures as fx
from distvar.bidisc import GridSpec, Region, Verdict

SMALL = GridSpec(0.9, 3, 8)


def test_grid_spec():
    g = GridSpec()
    pts = g.points()
    assert len(pts) == len(g) == 193
    assert pts[0] == 0 and abs(np.abs(pts).max() - 0.95) < 1e-15
    with pytest.raises(ValueError):
        GridSpec(radii=-1)


def test_classify_bands():
    assert B.classify([0.5, 0.1j]) is Region.OPEN_POLYDISC
    assert B.classify([1, 1j]) is Region.TORUS
    assert B.classify([2, 3]) is Region.EXTERIOR
    assert B.classify([0.5, 1]) is Region.MIXED
    assert B.coord_band(1 - 1e-7) is Region.TORUS
    assert B.coord_band(1 - 1e-5) is Region.OPEN_POLYDISC


@pytest.mark.parametrize("name", sorted(fx.TRIPLES))
def test_fiber_product_law_and_cardinality(name):
    t = fx.TRIPLES[name]()
    for z in SMALL.points():
        pts = B.fiber(t, z)
        assert len(pts) == t.dim
        for p in pts:
            z1, z2 = p.coords
            assert abs(z1 * z2 - z) <= 1e-8


def test_fiber_sorted_and_deterministic():
    t = fx.random_triple(np.random.default_rng(0), 6)
    a = B.fiber(t, 0.3 + 0.2j, seed=0)
    b = B.fiber(t, 0.3 + 0.2j, seed=5)
    keys = [B._sort_key(p) for p in a]
    assert keys == sorted(keys)
    for p, q in zip(a, b):
        assert np.allclose(p.coords, q.coords, atol=1e-9)


def test_diagonal_variety():
    smp = B.sample(fx.diagonal())
    dev = max(abs(p.coords[0] - p.coords[1]) for p in smp.points)
    assert dev < 1e-8
    assert smp.verdict is Verdict.DISTINGUISHED


def test_neil_variety_points():
    smp = B.sample(fx.neil())
    assert len(smp.points) == 5 * 193
    assert max(abs(p.coords[0] ** 3 - p.coords[1] ** 2) for p in smp.points) < 1e-7


def test_block4_mixed_on_line():
    smp = B.sample(fx.block4(), SMALL)
    mixed = [p for p in smp.points if p.region is Region.MIXED]
    assert mixed and smp.verdict is Verdict.NOT_DISTINGUISHED
    for p in mixed:
        assert any(abs(w - 1) < 1e-8 for w in p.coords)


def test_membership():
    t = fx.neil()
    w = 0.5 * np.exp(0.3j)
    ok, d = B.is_member(t, w ** 2, w ** 3)
    assert ok and d < 1e-10
    ok, d = B.is_member(t, 0.5, 0.5)
    assert not ok and d > 1e-3
    # proj-identity: the variety contains (z, 1) and (1, z)
    assert B.is_member(fx.proj_identity(), 0.3, 1)[0]
    assert B.is_member(fx.proj_identity(), 1, -0.4j)[0]


def test_membership_defect_scale_free_at_origin():
    # (0, 0) lies on the Neil parabola
    assert B.membership_defect(fx.neil(), 0, 0) < 1e-12


def test_reflection_symmetry_neil():
    smp = B.sample(fx.neil(), SMALL)
    rep = B.symmetry_check(fx.neil(), smp.points)
    assert rep.ok and rep.checked > 0 and rep.max_defect < 1e-6
    assert rep.skipped == 5  # the fiber over 0


def test_reflection_fails_off_variety():
    # a fake point whose reflection is not a member is reported
    pt = B.VarietyPoint(0.25, (0.5, 0.5), Region.OPEN_POLYDISC)
    rep = B.symmetry_check(fx.neil(), [pt])
    assert not rep.ok and len(rep.failures) == 1


def test_disc_grid_counts():
    g = B.disc_grid(200, 0.999)
    assert len(g) == 200 and g[0] == 0
    assert abs(np.abs(g).max() - 0.999) < 1e-12
    assert len(B.nonconstant_points()) == 16


def test_combine_verdict_table():
    D, N, U = Verdict.DISTINGUISHED, Verdict.NOT_DISTINGUISHED, Verdict.UNDETERMINED
    assert B.combine_verdict(D, True, False) is D
    assert B.combine_verdict(D, False, False) is U
    assert B.combine_verdict(D, True, True) is N
    assert B.combine_verdict(N, True, False) is N
    assert B.combine_verdict(U, True, False) is U


@pytest.mark.parametrize("name,expected", [
    ("diagonal", Verdict.DISTINGUISHED),
    ("neil", Verdict.DISTINGUISHED),
    ("diag-lambda-0.6", Verdict.DISTINGUISHED),
    ("proj-identity", Verdict.NOT_DISTINGUISHED),
    ("block4", Verdict.NOT_DISTINGUISHED),
])
def test_certify_fixtures(name, expected):
    cert = B.certify(fx.TRIPLES[name](), grid=SMALL)
    assert cert.verdict is expected
    d = cert.to_dict()
    assert d["verdict"] == expected.value and len(d["max_nu"]) == 2


def test_certify_proj_identity_refuted_by_nu_one():
    cert = B.certify(fx.proj_identity(), grid=SMALL)
    assert not cert.compatible and not cert.nonconstant
    assert cert.interior_nu_one


def test_certify_neil_evidence():
    cert = B.certify(fx.neil(), grid=SMALL)
    assert cert.nonconstant
    assert max(cert.max_nu) < 1


def test_random_triples_nonconstant_are_distinguished():
    rng = np.random.default_rng(42)
    for _ in range(3):
        t = fx.random_triple(rng, int(rng.integers(2, 6)))
        cert = B.certify(t, grid=SMALL)
        if cert.nonconstant:
            assert cert.verdict is Verdict.DISTINGUISHED
