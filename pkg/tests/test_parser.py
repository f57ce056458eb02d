import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xyswap.curve import catalog_curve
from xyswap.errors import ParseError
from xyswap.exact import RationalFunction
from xyswap.parser import BinOp, Neg, parse_curve_function, parse_expression, parse_rational_function

z = RationalFunction.variable("z")


def test_catalog_expressions():
    assert parse_curve_function("z^2") == catalog_curve("airy").x
    assert parse_curve_function("z + 1/z") == catalog_curve("gaussian").x
    assert parse_curve_function("z^3/3 - z") == catalog_curve("two-sided").y
    assert parse_curve_function("z**2") == z ** 2


def test_precedence():
    assert parse_curve_function("-z^2") == -(z ** 2)
    assert parse_curve_function("2^3^2") == RationalFunction.constant(2 ** 9)
    assert parse_curve_function("8/4/2") == RationalFunction.constant(1)
    assert parse_curve_function("5 - 3 - 1") == RationalFunction.constant(1)
    assert parse_curve_function("z^-1") == 1 / z
    node = parse_expression("-a*b")
    assert isinstance(node, BinOp) and node.op == "*" and isinstance(node.left, Neg)


@pytest.mark.parametrize(
    "src,offset",
    [("z^(1/2)", 1), ("z +", 3), ("(z", 2), ("z $ 2", 2), ("1/(z-z)", 1), ("w + z", 0), ("z z", 2)],
)
def test_errors_report_byte_offset(src, offset):
    with pytest.raises(ParseError) as err:
        parse_curve_function(src)
    assert err.value.offset == offset
    assert f"at byte {offset}" in str(err.value)


def test_non_integer_exponent_message():
    with pytest.raises(ParseError, match="non-integer exponent"):
        parse_curve_function("z^(1/2)")


def test_multivariate_parse():
    f = parse_rational_function("(5*z1^4 + 5*z2^4 + 3*z1^2*z2^2)/(128*z1^7*z2^7)")
    assert f.variables == ("z1", "z2")


small = st.integers(-4, 4)


@st.composite
def rfs(draw):
    out = RationalFunction.constant(draw(small))
    for e in range(4):
        out = out + draw(small) * z ** e
    den = RationalFunction.constant(draw(st.integers(1, 4)))
    for e in range(1, 3):
        den = den + draw(small) * z ** e
    if den.is_zero():
        den = RationalFunction.constant(1)
    return out / den


@settings(max_examples=100, deadline=None)
@given(rfs())
def test_render_parse_roundtrip(f):
    assert parse_rational_function(f.render()) == f
