import json

import pytest
from hypothesis import given, strategies as st

from tropimplicit.problem import ParseError, Problem, from_dict, parse, serialize, to_dict


def problems():
    def poly(d):
        return st.lists(st.tuples(*[st.integers(-5, 5)] * d), min_size=1, max_size=5, unique=True).flatmap(
            lambda sup: st.one_of(
                st.just({"support": [list(a) for a in sup]}),
                st.lists(st.tuples(st.floats(-1e6, 1e6, allow_nan=False).filter(lambda x: x != 0),
                                   st.floats(-1e6, 1e6, allow_nan=False)),
                         min_size=len(sup), max_size=len(sup)).map(
                    lambda cs: {"support": [list(a) for a in sup],
                                "coefficients": [{"re": re, "im": im} for re, im in cs]})))
    return st.integers(1, 3).flatmap(
        lambda d: st.lists(poly(d), min_size=1, max_size=4).map(lambda ps: {"dim": d, "polynomials": ps}))


@given(problems())
def test_round_trip_is_idempotent(doc):
    p = from_dict(doc)
    text = serialize(p)
    assert serialize(parse(text)) == text
    assert parse(text) == p


def test_bare_numbers_and_defaults():
    p = parse('{"dim": 1, "polynomials": [{"support": [[0], [2]], "coefficients": [1, {"re": 2.5}]}]}')
    assert p.polynomials[0].coefficients == (1 + 0j, 2.5 + 0j)
    assert to_dict(p)["polynomials"][0]["coefficients"] == [{"re": 1, "im": 0}, {"re": 2.5, "im": 0}]


def test_digest_depends_on_content_only():
    a = parse('{"dim": 1, "polynomials": [{"support": [[0], [1]]}]}')
    b = parse('{\n  "polynomials": [{"support": [[0],[1]]}],\n  "dim": 1\n}')
    c = parse('{"dim": 1, "polynomials": [{"support": [[0], [2]]}]}')
    assert a.digest() == b.digest() != c.digest()


@pytest.mark.parametrize("text,field", [
    ('{"polynomials": []}', "dim"),
    ('{"dim": 2, "polynomials": []}', "polynomials"),
    ('{"dim": 2, "polynomials": [{"support": [[1, 2, 3]]}]}', "polynomials[0].support[0]"),
    ('{"dim": 1, "polynomials": [{"support": [[1], [1]]}]}', "polynomials[0].support"),
    ('{"dim": 1, "polynomials": [{"support": [[1.5]]}]}', "polynomials[0].support[0][0]"),
    ('{"dim": 1, "polynomials": [{"support": [[1]], "coefficients": [1, 2]}]}', "polynomials[0].coefficients"),
    ('{"dim": 1, "polynomials": [{"support": [[1]], "coefficients": [0]}]}', "polynomials[0].coefficients"),
    ('{"dim": 1, "polynomials": [{"support": [[1]], "coefficients": [{"im": 1}]}]}', "polynomials[0].coefficients[0]"),
    ('{"dim": 1, "polynomials": [{"support": [[1]], "extra": 1}]}', "polynomials[0]"),
    ('{"dim": true, "polynomials": [{"support": [[1]]}]}', "dim"),
])
def test_field_diagnostics(text, field):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.field == field
    assert field in str(exc.value)


def test_line_diagnostics():
    with pytest.raises(ParseError) as exc:
        parse('{\n  "dim": 2,\n  "polynomials": [\n    {"support": [[0, 1]],}\n  ]\n}')
    assert exc.value.line == 4
    assert "line 4" in str(exc.value)


def test_system_and_laurent():
    p = parse('{"dim": 2, "polynomials": [{"support": [[0, 1], [1, 0]], "coefficients": [1, 2]},'
              ' {"support": [[0, 0]], "coefficients": [3]}, {"support": [[2, 2]], "coefficients": [4]}]}')
    assert p.system().supports[0] == ((0, 1), (1, 0))
    f = p.laurent()
    assert f[0].terms == (((0, 1), 1 + 0j), ((1, 0), 2 + 0j))
    q = Problem.from_supports([[(0, 1)], [(1, 1)]])
    assert not q.has_coefficients
    with pytest.raises(ValueError):
        q.laurent()
