import json
import math

import pytest

from jmg.errors import InputError
from jmg.serialize import dumps, format_float


class TestFormatFloat:
    def test_seventeen_significant_digits(self):
        assert format_float(0.1) == "0.10000000000000001"
        assert format_float(0.5) == "0.5"
        assert format_float(1.0) == "1"

    def test_round_trips_doubles(self):
        for x in (1 / 3, 2**-52, 1e300, -0.1234567890123456789):
            assert float(format_float(x)) == x

    def test_rejects_non_finite(self):
        with pytest.raises(InputError):
            format_float(math.nan)
        with pytest.raises(InputError):
            format_float(math.inf)


class TestDumps:
    def test_sorted_keys_compact(self):
        assert dumps({"b": 1, "a": [True, None, "x"]}) == '{"a":[true,null,"x"],"b":1}'

    def test_valid_json(self):
        doc = {"nested": {"v": [0.1, -2, "s"]}, "empty": [], "none": None}
        assert json.loads(dumps(doc)) == {
            "nested": {"v": [0.1, -2, "s"]},
            "empty": [],
            "none": None,
        }
        assert json.loads(dumps(doc, pretty=True)) == json.loads(dumps(doc))

    def test_deterministic(self):
        doc = {"k": [i * 0.3 for i in range(10)]}
        assert dumps(doc) == dumps({"k": [i * 0.3 for i in range(10)]})

    def test_rejects_non_string_keys(self):
        with pytest.raises(InputError):
            dumps({1: "x"})

    def test_rejects_unknown_types(self):
        with pytest.raises(InputError):
            dumps({"x": object()})
