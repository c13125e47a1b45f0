import json
import math

import numpy as np
import pytest

from tangentloci import fixtures, interchange, spheres
from tangentloci.errors import InputError
from tangentloci.linegeom import PluckerLine, PVLine


def test_quadric_layout_upper_triangle():
    m = np.arange(16.0).reshape(4, 4)
    m = m + m.T
    data = interchange.quadric_to_json(m)
    assert len(data) == 10
    # row-major upper triangle, scaled by the canonical normalization
    q = interchange.quadric_from_json(data)
    scale = q.m[0, 0] / m[0, 0] if m[0, 0] else q.m[0, 1] / m[0, 1]
    assert np.allclose(q.m, scale * m)


def test_quadric_round_trip_is_exact(rng):
    for _ in range(50):
        q = fixtures.random_symmetric(rng, complex_=True)
        a = interchange.quadric_from_json(interchange.quadric_to_json(q))
        b = interchange.quadric_from_json(json.loads(interchange.dumps(interchange.quadric_to_json(a))))
        assert np.array_equal(a.m, b.m)


def test_quadric_bad_length():
    with pytest.raises(InputError):
        interchange.quadric_from_json([[1, 0]] * 7)


def test_line_round_trips(rng):
    x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    back = interchange.line_from_json(json.loads(interchange.dumps(
        interchange.line_to_json(PluckerLine(x)))))
    assert isinstance(back, PluckerLine) and back.distance(PluckerLine(x)) < 1e-15
    pv = PVLine(rng.standard_normal(3), rng.standard_normal(3))
    back = interchange.line_from_json(interchange.line_to_json(pv))
    assert isinstance(back, PVLine)
    assert np.allclose(back.p, pv.p) and np.allclose(back.v, pv.v)
    with pytest.raises(InputError):
        interchange.line_from_json({"points": []})


def test_float_formatting():
    assert interchange.dumps(0.1) == "0.10000000000000001"
    assert interchange.dumps([1.0, float("nan"), float("inf")]) == "[1, null, null]"
    for x in (1 / 3, 2.0 ** -1074, 1e308, -0.0):
        assert float(json.loads(interchange.dumps([x]))[0]) == x
    with pytest.raises(TypeError):
        interchange.dumps(object())


def test_dumps_is_valid_json():
    obj = {"a": [1, 2.5], "b": {"c": None, "d": True}, "e": [], "f": {}, "g": [[1, 2], [3]]}
    assert json.loads(interchange.dumps(obj)) == obj


def test_parse_instances():
    one = {"spheres": [{"center": [0, 0, k], "radius": 1} for k in range(4)], "seed": 3}
    got = interchange.parse_instances(one)
    assert len(got) == 1 and got[0]["seed"] == 3 and "tol" not in got[0]
    assert len(interchange.parse_instances([one, one])) == 2
    with pytest.raises(InputError):
        interchange.parse_instances({"spheres": one["spheres"][:3]})
    with pytest.raises(InputError):
        interchange.parse_instances({"balls": []})
    with pytest.raises(InputError):
        interchange.parse_instances({"spheres": [{"center": [0, 0], "radius": 1}] * 4})


def test_result_json_and_csv(rng):
    sph = fixtures.generic_spheres(rng)
    res = spheres.solve(sph)
    rec = json.loads(interchange.dumps(interchange.result_to_json(res)))
    assert rec["regime"] == "generic" and rec["complex_count"] == 12
    assert len(rec["tangents"]) == len(res.tangents)
    t = rec["tangents"][0]
    assert set(t) >= {"p", "p_imag", "v", "v_imag", "real", "multiplicity", "residual"}
    text = interchange.results_to_csv([rec, {"regime": "error", "error": "bad"}])
    rows = [r.split(",") for r in text.strip().split("\n")]
    assert rows[0] == interchange.CSV_COLUMNS
    assert all(len(r) == len(interchange.CSV_COLUMNS) for r in rows)
    assert len(rows) == 1 + len(res.tangents) + 1
    assert rows[-1][interchange.CSV_COLUMNS.index("kind")] == "none"
    assert rows[-1][-1] == "bad"


def test_degenerate_csv_has_samples():
    sph = fixtures.collinear_spheres([0, 1, 2, 3], [1, 1, 1, 1])
    rec = interchange.result_to_json(spheres.solve(sph))
    assert rec["degenerate"]["classes"][0]["class"] == "Cylinder"
    text = interchange.results_to_csv([rec])
    assert "sample" in text and "Cylinder" in text


def test_icosphere_on_unit_sphere():
    v, f = interchange.icosphere(2)
    assert len(v) == 162 and len(f) == 320
    assert np.allclose(np.linalg.norm(v, axis=1), 1)


def test_clip_line():
    lo, hi = np.full(3, -1.0), np.full(3, 1.0)
    assert interchange.clip_line(np.zeros(3), np.array([1.0, 0, 0]), lo, hi) == (-1, 1)
    assert interchange.clip_line(np.array([0, 5.0, 0]), np.array([1.0, 0, 0]), lo, hi) is None
    t0, t1 = interchange.clip_line(np.zeros(3), np.ones(3), lo, hi)
    assert math.isclose(t0, -1) and math.isclose(t1, 1)


def test_obj_output(rng):
    sph = fixtures.generic_spheres(rng)
    res = spheres.solve(sph)
    lines = interchange.real_lines(res)
    text = interchange.to_obj(sph, lines, level=1)
    nv = sum(1 for r in text.splitlines() if r.startswith("v "))
    nl = sum(1 for r in text.splitlines() if r.startswith("l "))
    assert nv == 4 * 42 + 2 * nl
    assert nl == len(lines)
    assert text.count("o sphere_") == 4
