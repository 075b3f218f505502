import json
import pathlib

import numpy as np
import pytest

from distvar import fixtures as fx
from distvar import io as dio
from distvar.errors import InputError
from distvar.inner import BivariatePoly
from distvar.model import Colligation, ModelTriple, ModelTuple

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
FILES = sorted(FIXTURES.glob("*.json"))


def expected(path):
    stem = path.stem
    if stem.endswith("-colligation"):
        return fx.COLLIGATIONS[stem[:-len("-colligation")]]()
    if stem.endswith("-tuple"):
        return fx.TUPLES[stem[:-len("-tuple")]]()
    return fx.TRIPLES[stem]()


def test_fixture_files_present():
    assert len(FILES) == len(fx.TRIPLES) + len(fx.COLLIGATIONS) + len(fx.TUPLES)


@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_fixture_file_matches_generator(path):
    assert dio.load(path) == expected(path)


@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_roundtrip_bytes(path, tmp_path):
    obj = dio.load(path)
    out = tmp_path / "x.json"
    dio.save(obj, out)
    assert out.read_bytes() == path.read_bytes()


def test_roundtrip_random_objects():
    rng = np.random.default_rng(0)
    t = fx.random_triple(rng, 4)
    c = fx.random_colligation(rng, 2, 3)
    tp = fx.random_pure_tuple(rng)
    poly = BivariatePoly(rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3)))
    for obj, cls in ((t, ModelTriple), (c, Colligation), (tp, ModelTuple), (poly, BivariatePoly)):
        back = dio.from_dict(json.loads(dio.dumps(obj)))
        assert isinstance(back, cls) and back == obj


def test_constant_colligation_empty_blocks():
    c = fx.constant_colligation(np.eye(2))
    d = dio.to_dict(c)
    assert d["B"] == [] and d["dim_h"] == 0
    assert dio.from_dict(d) == c


@pytest.mark.parametrize("obj,msg", [
    ([1, 2], "top-level"),
    ({"foo": 1}, "unrecognized"),
    ({"dim": 2, "P": [[[1, 0]]], "U": [[[1, 0]]]}, "shape"),
    ({"dim": "2", "P": [], "U": []}, "integer"),
    ({"dim": 1, "P": [[1]], "U": [[[1, 0]]]}, "rows x cols x 2"),
    ({"dim": 1, "P": [[["a", 0]]], "U": [[[1, 0]]]}, "pairs"),
    ({"dim": 1, "d": 2, "P_list": [], "U_list": []}, "d=2"),
    ({"dim_e": 1, "A": [[[1, 0]]]}, "dim_h"),
])
def test_decode_errors(obj, msg):
    with pytest.raises(InputError, match=msg):
        dio.from_dict(obj)


def test_load_errors(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        dio.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError, match="invalid JSON"):
        dio.load(bad)


def test_to_dict_rejects_unknown():
    with pytest.raises(TypeError):
        dio.to_dict(3)
