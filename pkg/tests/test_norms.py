import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gind.errors import DimensionMismatch, InvalidExponent, ParseError, SingularMatrix, ZeroVector
from gind.norms import (
    L1,
    L2,
    LINF,
    Lp,
    Transformed,
    dual_norm_eval,
    dual_vector,
    is_unitarily_invariant,
    matrix_from_json,
    matrix_to_json,
    norm_eval,
    parse_norm_spec,
    scaled,
    spec_from_json,
    spec_to_json,
    spec_to_text,
)

K2 = np.array([[2.0, 1.0], [0.0, 1.0]])
SPECS = [L1, L2, LINF, Lp(3), Lp(1.5), scaled(2, L2), Transformed(K2, L1),
         Transformed(K2, scaled(-0.5, Lp(4)))]

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vec2 = arrays(np.float64, (4,), elements=finite).map(lambda a: a[:2] + 1j * a[2:])


def test_known_values():
    x = np.array([3.0, -4.0])
    assert norm_eval(L1, x) == 7
    assert norm_eval(L2, x) == 5
    assert norm_eval(LINF, x) == 4
    assert norm_eval(scaled(2, L2), x) == 10
    assert norm_eval(Transformed(np.diag([1.0, 2.0]), L1), x) == 11
    assert norm_eval(L2, [1j, 1]) == pytest.approx(math.sqrt(2))


def test_lp_overflow_safe():
    assert norm_eval(Lp(3), [1e200, 1e200]) == pytest.approx(1e200 * 2 ** (1 / 3))
    assert norm_eval(L2, [1e-200, 1e-200]) == pytest.approx(1e-200 * math.sqrt(2))


@pytest.mark.parametrize("spec", SPECS, ids=spec_to_text)
@settings(max_examples=40, deadline=None)
@given(x=vec2, y=vec2, a=st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False))
def test_norm_axioms(spec, x, y, a):
    nx, ny = norm_eval(spec, x), norm_eval(spec, y)
    assert nx >= 0
    assert norm_eval(spec, x + y) <= (nx + ny) * (1 + 1e-12) + 1e-300
    assert norm_eval(spec, a * x) == pytest.approx(abs(a) * nx, rel=1e-12, abs=1e-300)
    if np.any(x):
        assert nx > 0


@pytest.mark.parametrize("spec", SPECS, ids=spec_to_text)
@settings(max_examples=40, deadline=None)
@given(y=vec2, x=vec2)
def test_dual_vector_properties(spec, y, x):
    if not np.any(y):
        return
    dv = dual_vector(spec, y)
    ny = norm_eval(spec, y)
    assert dv.attained == pytest.approx(ny, rel=1e-10)
    assert (dv.y0 @ y).real == pytest.approx(ny, rel=1e-10)
    assert abs(dv.y0 @ x) <= norm_eval(spec, x) * (1 + 1e-10) + 1e-300
    assert dual_norm_eval(spec, dv.y0) == pytest.approx(1.0, rel=1e-10)


def test_dual_examples():
    dv = dual_vector(LINF, [2.0, -2.0])
    np.testing.assert_allclose(dv.y0, [0.5, -0.5])
    dv = dual_vector(L1, [1.0, -2.0])
    np.testing.assert_allclose(dv.y0, [1.0, -1.0])
    assert dv.attained == 3
    # the l1 dual at a zero coordinate is still feasible
    np.testing.assert_allclose(dual_vector(L1, [1.0, 0.0]).y0, [1.0, 1.0])


def test_dual_norm_known():
    y = np.array([1.0, -3.0, 2.0])
    assert dual_norm_eval(L1, y) == 3
    assert dual_norm_eval(LINF, y) == 6
    assert dual_norm_eval(Lp(3), y) == pytest.approx(norm_eval(Lp(1.5), y))
    assert dual_norm_eval(scaled(2, L2), y) == pytest.approx(norm_eval(L2, y) / 2)


def test_dual_norm_against_grid():
    # max |y^T x| over ||x|| = 1, swept over the unit circle in R^2
    spec = Transformed(K2, Lp(3))
    y = np.array([1.0, 2.0])
    t = np.linspace(0, 2 * np.pi, 20001)
    X = np.stack([np.cos(t), np.sin(t)], axis=1)
    grid = max(abs(y @ x) / norm_eval(spec, x) for x in X)
    assert dual_norm_eval(spec, y) == pytest.approx(grid, rel=1e-6)


def test_zero_vector_has_no_dual():
    with pytest.raises(ZeroVector):
        dual_vector(L2, [0.0, 0.0])


def test_invalid_specs():
    with pytest.raises(InvalidExponent):
        Lp(0.5)
    with pytest.raises(SingularMatrix):
        Transformed(np.array([[1.0, 1.0], [1.0, 1.0]]), L2)
    with pytest.raises(SingularMatrix):
        scaled(0, L2)
    with pytest.raises(DimensionMismatch):
        norm_eval(Transformed(K2, L1), [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatch):
        Transformed(np.eye(3), Transformed(K2, L1))


def test_unitary_invariance_structure():
    assert is_unitarily_invariant(L2, 3)
    assert is_unitarily_invariant(scaled(4, L2), 3)
    assert is_unitarily_invariant(Lp(7), 1)
    assert not is_unitarily_invariant(L1, 2)
    assert not is_unitarily_invariant(Transformed(K2, L2), 2)


@pytest.mark.parametrize("text, expected", [
    ("l1", L1), ("l2", L2), ("linf", LINF), ("lp:3", Lp(3)), ("lp:inf", LINF),
])
def test_parse_simple(text, expected):
    assert parse_norm_spec(text) == expected


def test_parse_nested(tmp_path):
    (tmp_path / "K.json").write_text(json.dumps(matrix_to_json(K2)))
    spec = parse_norm_spec("scale:2*lin:K.json*lp:3", base_dir=tmp_path)
    x = np.array([1.0, -1.0])
    assert norm_eval(spec, x) == pytest.approx(2 * norm_eval(Lp(3), K2 @ x))
    assert spec_to_text(spec) == "scale:2*lin:<matrix>*lp:3"


@pytest.mark.parametrize("bad", ["", "l3", "lp:abc", "lp:0.5", "scale:2", "scale:0*l1", "scale:x*l2"])
def test_parse_errors(bad):
    with pytest.raises((ParseError, InvalidExponent)):
        parse_norm_spec(bad)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_norm_spec("scale:2*bogus")
    assert info.value.position == 8


@pytest.mark.parametrize("spec", SPECS, ids=spec_to_text)
def test_spec_json_round_trip(spec):
    back = spec_from_json(json.loads(json.dumps(spec_to_json(spec))))
    x = np.array([0.3 - 1j, 2.0])
    assert norm_eval(back, x) == norm_eval(spec, x)


def test_matrix_json_formats():
    M = matrix_from_json({"rows": 2, "cols": 2, "data": [[1, [0, 2]], [3.5, [1, -1]]]})
    np.testing.assert_array_equal(M, [[1, 2j], [3.5, 1 - 1j]])
    np.testing.assert_array_equal(matrix_from_json(matrix_to_json(M)), M)
    with pytest.raises(DimensionMismatch):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 2]]})
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 1, "cols": 1, "data": [["x"]]})
