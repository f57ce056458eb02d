from fractions import Fraction

import pytest
import sympy

from xyswap.curve import catalog_curve
from xyswap.errors import DependencyError
from xyswap.exact import differentiate
from xyswap.parser import parse_rational_function as rf
from xyswap.recursion import CorrelatorTable, zvars
from xyswap.swap import (
    SwapContext,
    hand_coded_reference,
    s_coefficient,
    swap_correlator,
    swap_genus0_tree,
    swap_n1_exponential,
    swap_via_operator_series,
    weight,
)


_DUAL = {}


def _dual(ctx, g, n):
    key = (id(ctx), g, n)
    if key not in _DUAL:
        _DUAL[key] = swap_correlator(ctx, g, n)[0]
    return _DUAL[key]


def test_s_coefficients():
    # S(w) = sinh(w/2)/(w/2); compare with sympy's series
    w = sympy.Symbol("w")
    ser = sympy.series(sympy.sinh(w / 2) / (w / 2), w, 0, 9).removeO()
    for h in range(5):
        c = ser.coeff(w, 2 * h)
        assert s_coefficient(h) == Fraction(int(c.p), int(c.q))
    assert s_coefficient(1) == Fraction(1, 24)


def test_weight_coinciding_labels(airy_ctx):
    assert weight(airy_ctx, 0, ((1, 0), (1, 0))) == rf("1/(16*z1^4)")


def test_weight_with_edge_genus(airy_ctx):
    # d/dx = (1/2z) d/dz applied twice to -1/(32 z^5), times 1/24
    z = sympy.Symbol("z1")
    f = -sympy.Rational(1, 32) / z ** 5
    for _ in range(2):
        f = sympy.diff(f, z) / (2 * z)
    assert sympy.simplify(f / 24 + sympy.Rational(35, 3072) / z ** 9) == 0
    assert weight(airy_ctx, 1, ((1, 1),)) == rf("-35/(3072*z1^9)")


def test_weight_distinct_labels_is_plain_w02(airy_ctx, airy):
    assert weight(airy_ctx, 0, ((1, 0), (2, 0))) == airy.w02("z1", "z2")


@pytest.mark.parametrize("gn", [(1, 1), (0, 3), (1, 2), (2, 1)])
def test_airy_swap_vanishes(airy_ctx, gn):
    value, report = swap_correlator(airy_ctx, *gn)
    assert value.is_zero()
    assert report.check()


def test_airy_group_subtotals(airy_ctx):
    _, report = swap_correlator(airy_ctx, 2, 1)
    expected = [rf(t) for t in ("87/(32*z1^10)", "-477/(128*z1^10)", "-63/(128*z1^10)", "3/(2*z1^10)")]
    assert list(report.groups.values()) == expected


def test_airy_hand_terms(airy_ctx):
    _, parts = hand_coded_reference(airy_ctx, (2, 1), parts=True)
    expected = [rf(t) for t in ("87/(32*z1^10)", "-477/(128*z1^10)", "-63/(128*z1^10)", "3/(2*z1^10)")]
    assert parts == expected


def test_reverse_airy(reverse_ctx):
    value, report = swap_correlator(reverse_ctx, 2, 1)
    assert value == rf("-105/(2048*z1^11)")
    nonzero = [e for e in report.entries if not e.contribution.is_zero()]
    assert len(nonzero) == 1


def test_report_running_totals(two_sided_ctx):
    value, report = swap_correlator(two_sided_ctx, 1, 2)
    assert report.check() and report.total == value
    assert len(report.entries) == 12


def test_missing_entries_raise_dependency_error():
    ctx = SwapContext(CorrelatorTable(catalog_curve("two-sided")), lazy=False)
    with pytest.raises(DependencyError):
        swap_correlator(ctx, 1, 1)


@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (1, 2), (2, 1)])
def test_two_sided_round_trip(two_sided_ctx, two_sided, two_sided_swapped, gn):
    assert swap_correlator(two_sided_ctx, *gn)[0] == two_sided_swapped.get(*gn)
    back = SwapContext(two_sided_swapped)
    assert swap_correlator(back, *gn)[0] == two_sided.get(*gn)


@pytest.mark.parametrize("gn", [(1, 1), (1, 2), (2, 1), (0, 3)])
def test_operator_form_agrees(two_sided_ctx, gn):
    assert swap_via_operator_series(two_sided_ctx, *gn) == swap_correlator(two_sided_ctx, *gn)[0]


@pytest.mark.parametrize("gn", [(1, 1), (1, 2), (2, 1)])
def test_hand_formulas_agree(two_sided_ctx, gn):
    assert hand_coded_reference(two_sided_ctx, gn) == swap_correlator(two_sided_ctx, *gn)[0]


def test_printed_index_differs(two_sided_ctx):
    graphs = swap_correlator(two_sided_ctx, 1, 2)[0]
    assert hand_coded_reference(two_sided_ctx, (1, 2), as_printed=True) != graphs


@pytest.mark.parametrize("n", [3, 4])
def test_tree_form_agrees(two_sided_ctx, n):
    assert swap_genus0_tree(two_sided_ctx, n) == _dual(two_sided_ctx, 0, n)


@pytest.mark.parametrize("g", [1, 2])
def test_exponential_form_agrees(two_sided_ctx, airy_ctx, g):
    assert swap_n1_exponential(two_sided_ctx, g) == swap_correlator(two_sided_ctx, g, 1)[0]
    assert swap_n1_exponential(airy_ctx, g).is_zero()


def test_unstable_conventions(two_sided_ctx):
    curve = two_sided_ctx.curve
    assert swap_via_operator_series(two_sided_ctx, 0, 1) == curve.x.rename({"z": "z1"})
    yp = [differentiate(curve.y, "z").rename({"z": v}) for v in ("z1", "z2")]
    assert swap_correlator(two_sided_ctx, 0, 2)[0] == rf("1/(z1-z2)^2") / (yp[0] * yp[1])


@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)])
def test_dual_symmetry_and_poles(two_sided_ctx, gn):
    value = _dual(two_sided_ctx, *gn)
    names = zvars(gn[1])
    for i in range(len(names) - 1):
        assert value.rename({names[i]: names[i + 1], names[i + 1]: names[i]}) == value
    # only ramification points of y = z^3/3 - z, i.e. z = 1 and z = -1
    den = value.denominator
    poly = sympy.Poly.from_dict({m: sympy.Rational(c.numerator, c.denominator) for m, c in den.sorted_terms()},
                                sympy.symbols(den.variables))
    for fac, _ in poly.factor_list()[1]:
        fac = fac.as_expr()
        (v,) = fac.free_symbols
        assert sympy.solve(fac, v)[0] in (1, -1)


def test_gaussian_dual_is_trivial(gaussian):
    # y = z has no ramification points, so every stable swapped correlator vanishes
    ctx = SwapContext(gaussian)
    for gn in [(0, 3), (1, 1), (1, 2)]:
        assert swap_correlator(ctx, *gn)[0].is_zero()
