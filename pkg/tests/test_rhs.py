import json
import math

import numpy as np
import pytest

from circtoep.errors import DimensionMismatchError, DomainError
from circtoep.jsonio import dumps, format_float
from circtoep.rhs import SplitMix64, complex_normal, rhs_from_spec


def test_splitmix_reference_stream():
    # first outputs for seed 1234567 from the published C reference
    g = SplitMix64(1234567)
    assert [g.next_u64() for _ in range(3)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
    ]


def test_uniform_open_interval():
    g = SplitMix64(0)
    u = [g.uniform() for _ in range(1000)]
    assert 0 < min(u) and max(u) < 1
    assert abs(np.mean(u) - 0.5) < 0.05


def test_complex_normal_moments():
    z = complex_normal(99, 20000)
    assert abs(np.mean(z)) < 0.05
    assert np.mean(np.abs(z) ** 2) == pytest.approx(2.0, rel=0.05)


def test_rhs_examples():
    np.testing.assert_array_equal(rhs_from_spec("basis:0", 4), [1, 0, 0, 0])
    b = rhs_from_spec("banded:1", 8)
    w = 1 / math.sqrt(3)
    np.testing.assert_allclose(b, [0, 0, 0, w, w, w, 0, 0], rtol=1e-15)
    r1, r2 = rhs_from_spec("random:42", 4), rhs_from_spec("random:42", 4)
    np.testing.assert_array_equal(r1, r2)
    assert np.linalg.norm(r1) == pytest.approx(1.0)
    assert not np.array_equal(r1, rhs_from_spec("random:43", 4))


def test_complex_normal_recipe():
    g = SplitMix64(42)
    u1 = ((g.next_u64() >> 11) + 0.5) / 2 ** 53
    u2 = ((g.next_u64() >> 11) + 0.5) / 2 ** 53
    r = math.sqrt(-2 * math.log(u1))
    z = complex_normal(42, 2)
    assert z[0] == complex(r * math.cos(2 * math.pi * u2), r * math.sin(2 * math.pi * u2))
    np.testing.assert_allclose(z, [0.41471975 + 0.65268122j, -0.89188621 + 1.32683356j], atol=1e-8)


def test_rhs_file(tmp_path):
    p = tmp_path / "b.txt"
    p.write_text("# comment\n1 0\n0.5 -0.5  # trailing\n\n2\n")
    np.testing.assert_array_equal(rhs_from_spec(f"file:{p}", 3), [1, 0.5 - 0.5j, 2])
    with pytest.raises(DimensionMismatchError):
        rhs_from_spec(f"file:{p}", 4)
    p.write_text("1 2 3\n")
    with pytest.raises(DomainError):
        rhs_from_spec(f"file:{p}", 1)
    with pytest.raises(DomainError):
        rhs_from_spec(f"file:{tmp_path / 'missing.txt'}", 1)


@pytest.mark.parametrize("spec,n,exc", [
    ("basis:4", 4, DimensionMismatchError),
    ("basis:-1", 4, DimensionMismatchError),
    ("banded:2", 4, DimensionMismatchError),
    ("random:x", 4, DomainError),
    ("random:-3", 4, DomainError),
    ("sine:1", 4, DomainError),
    ("basis", 4, DomainError),
])
def test_rhs_errors(spec, n, exc):
    with pytest.raises(exc):
        rhs_from_spec(spec, n)


def test_json_floats():
    assert format_float(1.0) == "1.0"
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("inf")) == "null"
    text = dumps({"a": [1.0, float("nan")], "b": 3, "c": None, "d": True, "e": "x"}, indent=None)
    assert text == '{"a": [1.0, null], "b": 3, "c": null, "d": true, "e": "x"}'
    v = [0.1 * k for k in range(10)]
    assert json.loads(dumps(v)) == v
