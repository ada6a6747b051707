import json

import numpy as np
import pytest

from transhilb.io import PointParseError, dumps_point, load_point, loads_point, point_to_dict
from transhilb.points import AHPoint, CoeffChartPoint, RootsChartPoint, random_scheme_point, roots_to_coeff


@pytest.mark.parametrize("kind", ["flat", "cstar", "xy", "ah"])
def test_round_trip(kind, rng):
    pt = random_scheme_point(kind, 3, rng)
    back = loads_point(dumps_point(pt))
    assert type(back) is type(pt)
    np.testing.assert_array_equal(back.coords(), pt.coords())
    if not isinstance(pt, AHPoint):
        c = roots_to_coeff(pt)
        back = loads_point(dumps_point(c))
        assert isinstance(back, CoeffChartPoint) and back.chart == c.chart
        np.testing.assert_array_equal(back.coords(), c.coords())


def test_real_numbers_accepted(tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"kind": "flat", "chart": "roots", "pairs": [[1, 2], [[0, 1], 0.5]]}))
    pt = load_point(f)
    assert isinstance(pt, RootsChartPoint)
    np.testing.assert_array_equal(pt.z, [1, 1j])


def test_dict_layout():
    d = point_to_dict(CoeffChartPoint("xy", [1j], [2.0], "U2"))
    assert d == {"kind": "xy", "surface_chart": "U2", "chart": "coeff", "Q": [[0.0, 1.0]], "T": [[2.0, 0.0]]}


@pytest.mark.parametrize(
    "text, message",
    [
        ('{"kind": "flat",', "line 1, column"),
        ("[1, 2]", "top level"),
        ('{"kind": "torus", "chart": "coeff"}', "unknown surface"),
        ('{"kind": "flat", "chart": "coeff", "Q": [[1, 0]]}', "field 'T': missing"),
        ('{"kind": "flat", "chart": "coeff", "Q": [[1, 0]], "T": []}', "non-empty list"),
        ('{"kind": "flat", "chart": "coeff", "Q": ["a"], "T": [1]}', "field Q[0]: expected"),
        ('{"kind": "flat", "chart": "coeff", "Q": [1, 2], "T": [1]}', "lengths differ"),
        ('{"kind": "flat", "chart": "polar", "Q": [1], "T": [1]}', "field 'chart'"),
        ('{"kind": "flat", "chart": "roots", "pairs": [[1]]}', "pairs[0]"),
        ('{"kind": "xy", "surface_chart": "U3", "chart": "coeff", "Q": [1], "T": [1]}', "surface_chart"),
        ('{"kind": "ah", "chart": "coeff", "Q": [1], "T": [1]}', "chart 'ah'"),
        ('{"kind": "flat", "chart": "ah", "pu": [1], "Q": [1]}', "requires kind 'ah'"),
        ('{"kind": "ah", "chart": "ah", "pu": [1, 2, 3], "Q": [1]}', "at most 2"),
        ('{"kind": "flat", "chart": "coeff", "Q": [true], "T": [1]}', "field Q[0]"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(PointParseError) as exc:
        loads_point(text)
    assert message in str(exc.value)


def test_multiline_error_position():
    with pytest.raises(PointParseError, match="line 3, column"):
        loads_point('{\n "kind": "flat",\n "chart" "coeff"\n}')
