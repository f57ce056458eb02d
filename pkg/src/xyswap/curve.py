"""Genus-zero spectral curves: ramification analysis and local involutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy.polys.domains import QQ

from .errors import (
    AssumptionViolated,
    ConvergenceError,
    CurveError,
    NonRationalRamification,
    UnsupportedRamificationProfile,
)
from .exact import (
    LaurentSeries,
    RationalFunction,
    as_fraction,
    differentiate,
    series_expand,
)

Z = "z"


def _z():
    return RationalFunction.variable(Z)


def _check_univariate(f, label):
    f = RationalFunction.coerce(f)
    extra = [v for v in f.variables if v != Z]
    if extra:
        raise CurveError(f"{label}(z) may only depend on z, found {', '.join(extra)}")
    return f


class SpectralCurve:
    """A pair of rational functions x(z), y(z) on the Riemann sphere."""

    def __init__(self, x, y, name=None):
        self.x = _check_univariate(x, "x")
        self.y = _check_univariate(y, "y")
        if self.x.is_constant() or self.y.is_constant():
            raise CurveError("x and y must both be nonconstant")
        self.name = name
        self._points = {}

    @property
    def dx(self):
        return differentiate(self.x, Z)

    @property
    def dy(self):
        return differentiate(self.y, Z)

    def function(self, branch):
        if branch == "x":
            return self.x
        if branch == "y":
            return self.y
        raise ValueError(f"branch must be 'x' or 'y', not {branch!r}")

    def key(self):
        """Canonical identity used for caching."""
        return f"x={self.x.render()};y={self.y.render()}"

    def __eq__(self, other):
        return isinstance(other, SpectralCurve) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"SpectralCurve({label}x={self.x.render()}, y={self.y.render()})"

    def ramification_points(self, branch="x", order=8):
        cached = self._points.get(branch)
        if cached is None:
            cached = ramification_points(self, branch, order)
            self._points[branch] = cached
        return cached


@dataclass
class RamificationPoint:
    location: Fraction
    branch: str
    involution: LaurentSeries = field(repr=False)
    involution_mode: str = "newton-local"
    global_map: RationalFunction = field(default=None, repr=False)


def _taylor(f, alpha, order):
    """Fraction coefficients of f(alpha + t) up to t^order."""
    s = series_expand(f, Z, alpha, None, order)
    return s.map_coefficients(lambda c: RationalFunction.coerce(c).constant_value())


def _is_pole(f, alpha):
    if not f.variables:
        return False
    return f.den.evaluate(f.den.ring.gens[0], QQ(alpha.numerator, alpha.denominator)) == 0


def _finite_roots(poly_rf, what):
    """Rational roots of the numerator of a univariate rational function, with multiplicity."""
    num = poly_rf.num
    if not poly_rf.variables:
        return []
    _, factors = num.factor_list()
    roots = []
    for fac, mult in factors:
        deg = fac.degree(0)
        if deg == 0:
            continue
        if deg > 1:
            raise NonRationalRamification(
                f"d{what} vanishes at roots of the irreducible factor {fac.as_expr()}"
                f" (degree {deg}); only rational ramification points are supported",
                factor=str(fac.as_expr()),
            )
        c1 = as_fraction(fac.coeff(fac.ring.gens[0]))
        c0 = as_fraction(fac.coeff(1))
        roots.append((-c0 / c1, mult))
    return sorted(roots)


def _infinity_order(f):
    """Order of vanishing of the differential df at z = infinity (negative for a pole)."""
    d = differentiate(f, Z)
    nd, dd = d.degree(Z)
    # df = f'(z) dz and dz = -dw/w^2 at w = 1/z
    return (dd - nd) - 2


def ramification_points(curve, branch="x", order=8):
    """Simple rational ramification points of ``branch`` with validated assumptions."""
    f = curve.function(branch)
    other_branch = "y" if branch == "x" else "x"
    other = curve.function(other_branch)
    if _infinity_order(f) > 0:
        raise UnsupportedRamificationProfile(
            f"d{branch} vanishes at z = infinity; ramification at infinity is not supported"
        )
    df = differentiate(f, Z)
    points = []
    roots = _finite_roots(df, branch)
    other_roots = None
    for alpha, mult in roots:
        if mult != 1:
            raise UnsupportedRamificationProfile(
                f"d{branch} has a zero of order {mult} at z = {alpha}; only simple ramification is supported"
            )
        if _is_pole(other, alpha):
            raise AssumptionViolated(f"{other_branch}(z) has a pole at the ramification point z = {alpha}")
        if other_roots is None:
            dother = differentiate(other, Z)
            other_roots = {a for a, _ in _finite_roots_lenient(dother)}
        if alpha in other_roots:
            raise AssumptionViolated(f"x and y both ramify at z = {alpha}")
        points.append(_make_point(curve, branch, alpha, order))
    return points


def _finite_roots_lenient(rf):
    try:
        return _finite_roots(rf, "")
    except NonRationalRamification:
        # irrational roots of the other differential cannot coincide with rational points
        _, factors = rf.num.factor_list()
        out = []
        for fac, mult in factors:
            if fac.degree(0) == 1:
                c1 = as_fraction(fac.coeff(fac.ring.gens[0]))
                c0 = as_fraction(fac.coeff(1))
                out.append((-c0 / c1, mult))
        return out


def _make_point(curve, branch, alpha, order):
    gmap = exact_global_involution(curve, branch, alpha)
    if gmap is not None:
        series = _global_series(gmap, alpha, order)
        return RamificationPoint(alpha, branch, series, "exact-global", gmap)
    series = newton_involution(curve.function(branch), alpha, order)
    return RamificationPoint(alpha, branch, series, "newton-local")


def exact_global_involution(curve, branch, alpha):
    """Try z -> 2a - z and z -> a^2/z; return the map if it preserves the branch function."""
    f = curve.function(branch)
    z = _z()
    candidates = [2 * alpha - z]
    if alpha != 0:
        candidates.append(RationalFunction.constant(alpha * alpha) / z)
    for cand in candidates:
        if f.substitute(Z, cand) == f:
            return cand
    return None


def _global_series(gmap, alpha, order):
    s = _taylor(gmap - alpha, alpha, order)
    return LaurentSeries(s.coeffs, s.min_degree, order)


def newton_involution(f, alpha, order):
    """Series s(t) = sigma(alpha + t) - alpha solving f(alpha + s) = f(alpha + t), s = -t + O(t^2).

    Newton iteration on G(s, t) = (F(s) - F(t)) / (s - t) with F(t) = f(alpha + t).
    Each step must at least double the number of correct coefficients.
    """
    F = _taylor(f, alpha, order + 1)
    a = {k: F[k] for k in range(2, order + 2)}
    t = LaurentSeries([Fraction(1)], 1, order)
    s = LaurentSeries([Fraction(-1)], 1, order)
    t_pows = [LaurentSeries([Fraction(1)], 0, order)]
    for _ in range(order + 1):
        t_pows.append(t_pows[-1] * t)
    prev = 1  # s = -t is correct modulo t^2
    for _ in range(order.bit_length() + 4):
        g = LaurentSeries([], order + 1, order)
        gs = LaurentSeries([], order + 1, order)
        h = LaurentSeries([Fraction(1)], 0, order)  # h_0
        dh = LaurentSeries([], order + 1, order)  # d/ds h_0
        for k in range(2, order + 2):
            # h_{k-1} = s h_{k-2} + t^{k-1}
            dh = s * dh + h
            h = s * h + t_pows[k - 1]
            if a[k]:
                g = g + h.scale(a[k])
                gs = gs + dh.scale(a[k])
        if g.is_zero():
            return s
        delta = g / gs
        delta = delta.truncate(order)
        if delta.is_zero():
            return s
        v = delta.valuation
        if v < 2 * prev:
            raise ConvergenceError(f"Newton step did not converge quadratically at z = {alpha}")
        prev = v
        s = (s - delta).truncate(order)
    raise ConvergenceError(f"Newton iteration did not terminate at z = {alpha}")


def local_involution(curve, point, order):
    """sigma(alpha + t) - alpha as a series in t up to t^order."""
    if point.involution_mode == "exact-global":
        return _global_series(point.global_map, point.location, order)
    return newton_involution(curve.function(point.branch), point.location, order)


def involution_series(curve, point, order):
    """The full series sigma(alpha + t) = alpha + s(t)."""
    s = local_involution(curve, point, order)
    return s + LaurentSeries([point.location], 0, order)


def swap_roles(curve):
    """The same curve with x and y exchanged."""
    name = None
    if curve.name:
        name = curve.name[:-8] if curve.name.endswith("-swapped") else curve.name + "-swapped"
    return SpectralCurve(curve.y, curve.x, name)


def _catalog():
    z = _z()
    return {
        "airy": SpectralCurve(z ** 2, z, "airy"),
        "gaussian": SpectralCurve(z + 1 / z, z, "gaussian"),
        "two-sided": SpectralCurve(z ** 2, z ** 3 / 3 - z, "two-sided"),
    }


CATALOG_ALIASES = {"catalan": "gaussian", "twosided": "two-sided", "semicircle": "gaussian"}


def catalog():
    """Named curves, each validated on load."""
    curves = _catalog()
    for c in curves.values():
        c.ramification_points("x")
    return curves


def catalog_curve(name):
    key = CATALOG_ALIASES.get(name, name)
    curves = _catalog()
    if key not in curves:
        raise KeyError(f"unknown curve {name!r}; known: {', '.join(sorted(curves))}")
    return curves[key]
