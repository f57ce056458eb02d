"""Exact arithmetic: polynomials and rational functions over Q, truncated Laurent series.

Polynomials are sparse (exponent tuple -> coefficient) and live in sympy's
``PolyRing`` over ``QQ`` with graded-lex order; one ring per ordered tuple of
variable names. Rational functions are kept in canonical form: gcd-free,
denominator monic in graded-lex order, unused variables dropped. Two equal
functions therefore have identical representations and identical text.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb

import flint
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex, lex
from sympy.polys.rings import PolyRing

from .errors import EmptySeriesError, TruncationError

__all__ = [
    "MultiPolynomial",
    "RationalFunction",
    "LaurentSeries",
    "as_fraction",
    "differentiate",
    "series_expand",
    "series_residue",
    "series_compose",
    "rf_sum",
    "var_key",
]

_NAME = re.compile(r"^([A-Za-z_]+?)(\d*)$")


def var_key(name):
    """Sort key putting ``z`` before ``z1`` before ``z2`` ... before ``z10``."""
    m = _NAME.match(name)
    if m is None:
        return (name, -1)
    prefix, digits = m.groups()
    return (prefix, int(digits) if digits else -1)


def _sorted_names(names):
    return tuple(sorted(set(names), key=var_key))


@lru_cache(maxsize=None)
def _ring(names):
    # lex is cheaper inside sympy's division loops; graded-lex is applied
    # explicitly wherever it matters (normalization and rendering)
    return PolyRing(names, QQ, lex)


def _grlex_key(m):
    return (sum(m), m)


def _lc(p):
    """Leading coefficient in graded-lex order."""
    if len(p) == 1:
        return next(iter(p.values()))
    return p[max(p.keys(), key=_grlex_key)]


_EMPTY = _ring(())


@lru_cache(maxsize=None)
def _flint_ctx(width):
    return flint.fmpq_mpoly_ctx.get(tuple(f"v{i}" for i in range(width)), "lex")


def _to_flint(p, ctx):
    return ctx.from_dict({m: flint.fmpq(int(c.numerator), int(c.denominator)) for m, c in p.items()})


def _from_flint(q, ring):
    return ring.from_dict({tuple(map(int, m)): QQ(int(c.p), int(c.q)) for m, c in q.to_dict().items()})


def _product(a, b):
    """a * b, handed to flint once both factors are sizable."""
    if len(a) * len(b) < 400 or not a.ring.gens:
        return a * b
    ctx = _flint_ctx(len(a.ring.gens))
    return _from_flint(_to_flint(a, ctx) * _to_flint(b, ctx), a.ring)


def _cofactors(a, b):
    """(gcd, a/gcd, b/gcd); flint does the multivariate gcd, sympy is the fallback."""
    width = len(a.ring.gens)
    if not width or a.is_ground or b.is_ground:
        return a.cofactors(b)
    ctx = _flint_ctx(width)
    fa, fb = _to_flint(a, ctx), _to_flint(b, ctx)
    g = fa.gcd(fb)
    if g.is_one():
        return a.ring.one, a, b
    return _from_flint(g, a.ring), _from_flint(fa / g, a.ring), _from_flint(fb / g, a.ring)


def _qq(c):
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    if isinstance(c, int):
        return QQ(c)
    return QQ.convert(c)


def as_fraction(c):
    """Convert a ground-domain element (mpq, int, Fraction) to ``Fraction``."""
    if isinstance(c, Fraction):
        return c
    return Fraction(int(c.numerator), int(c.denominator))


def _remap(p, old, new):
    """Move polynomial ``p`` from ring(old) to ring(new); ``new`` must cover used vars."""
    if old == new:
        return p
    ring = _ring(new)
    idx = [new.index(v) if v in new else -1 for v in old]
    width = len(new)
    out = {}
    for mon, c in p.items():
        m = [0] * width
        for i, e in enumerate(mon):
            if e:
                j = idx[i]
                if j < 0:
                    raise ValueError(f"variable {old[i]} not available in target ring")
                m[j] += e
        m = tuple(m)
        if m in out:
            out[m] += c
        else:
            out[m] = c
    return ring.from_dict({m: c for m, c in out.items() if c})


def _used(p, width):
    used = [False] * width
    for mon in p.itermonoms():
        for i, e in enumerate(mon):
            if e:
                used[i] = True
    return used


def _split(p, idx):
    """Split ``p`` by the exponent of generator ``idx``: {k: poly in remaining gens}."""
    names = p.ring.symbols
    rest = tuple(str(s) for j, s in enumerate(names) if j != idx)
    ring = _ring(rest)
    parts = {}
    for mon, c in p.items():
        k = mon[idx]
        parts.setdefault(k, {})[mon[:idx] + mon[idx + 1:]] = c
    return {k: ring.from_dict(d) for k, d in parts.items()}, rest


class MultiPolynomial:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("variables", "poly")

    def __init__(self, variables, poly):
        self.variables = tuple(variables)
        self.poly = poly

    @classmethod
    def from_terms(cls, variables, terms):
        variables = tuple(variables)
        ring = _ring(variables)
        return cls(variables, ring.from_dict({tuple(m): _qq(c) for m, c in terms.items() if c}))

    def terms(self):
        """Nonzero terms as ``{exponent tuple: Fraction}``."""
        return {m: as_fraction(c) for m, c in self.poly.items()}

    def sorted_terms(self):
        return [(m, as_fraction(c)) for m, c in self.poly.terms(order=grlex)]

    def is_zero(self):
        return not self.poly

    def degree(self, var):
        if var not in self.variables:
            return 0
        return self.poly.degree(self.variables.index(var))

    def to_structured(self):
        return [[list(m), str(c)] for m, c in self.sorted_terms()]

    def render(self):
        if not self.poly:
            return "0"
        pieces = []
        for mon, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.variables, mon):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            if not mono:
                term = str(c)
            elif c == 1:
                term = mono
            elif c == -1:
                term = "-" + mono
            else:
                term = f"{c}*{mono}"
            if pieces:
                pieces.append(" - " + term[1:] if term.startswith("-") else " + " + term)
            else:
                pieces.append(term)
        return "".join(pieces)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPolynomial)
            and self.variables == other.variables
            and self.poly == other.poly
        )

    def __hash__(self):
        return hash((self.variables, frozenset(self.poly.items())))

    def __repr__(self):
        return f"MultiPolynomial({self.render()!r})"


def _canonical(names, num, den):
    """Reduce num/den, make den monic in grlex and drop variables that do not occur."""
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return (), _EMPTY.zero, _EMPTY.one
    if den.is_ground:
        c = _lc(den)
        if c != 1:
            num = num.quo_ground(c)
        den = num.ring.one
    else:
        _, num, den = _cofactors(num, den)
        c = _lc(den)
        if c != 1:
            num = num.quo_ground(c)
            den = den.quo_ground(c)
    return _shrink(names, num, den)


def _shrink(names, num, den):
    width = len(names)
    if not width:
        return names, num, den
    un = _used(num, width)
    ud = _used(den, width)
    keep = tuple(v for v, a, b in zip(names, un, ud) if a or b)
    if keep != names:
        num = _remap(num, names, keep)
        den = _remap(den, names, keep)
    return keep, num, den


class RationalFunction:
    """Canonical quotient of two polynomials over Q.

    Instances are immutable. Arithmetic accepts ``int`` and ``Fraction``
    operands. The variable tuple lists exactly the variables that occur.
    """

    __slots__ = ("variables", "num", "den", "_hash")

    def __init__(self, variables, num, den, _canonical_form=False):
        if _canonical_form:
            self.variables, self.num, self.den = variables, num, den
        else:
            self.variables, self.num, self.den = _canonical(tuple(variables), num, den)
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c):
        c = _qq(c)
        return cls((), _EMPTY(c), _EMPTY.one, True)

    @classmethod
    def variable(cls, name):
        ring = _ring((name,))
        return cls((name,), ring.gens[0], ring.one, True)

    @classmethod
    def from_polynomials(cls, num, den=None):
        """Build from ``MultiPolynomial`` numerator and optional denominator."""
        if den is None:
            return cls(num.variables, num.poly, _ring(num.variables).one)
        names = _sorted_names(num.variables + den.variables)
        return cls(names, _remap(num.poly, num.variables, names), _remap(den.poly, den.variables, names))

    @classmethod
    def coerce(cls, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return cls.constant(other)
        raise TypeError(f"cannot convert {type(other).__name__} to RationalFunction")

    # accessors ----------------------------------------------------------
    @property
    def numerator(self):
        return MultiPolynomial(self.variables, self.num)

    @property
    def denominator(self):
        return MultiPolynomial(self.variables, self.den)

    def is_zero(self):
        return not self.num

    def is_constant(self):
        return not self.variables

    def constant_value(self):
        if self.variables:
            raise ValueError("not a constant")
        return as_fraction(self.num.LC) if self.num else Fraction(0)

    def degree(self, var):
        """(numerator degree, denominator degree) in ``var``."""
        if var not in self.variables:
            return (0, 0)
        i = self.variables.index(var)
        return (self.num.degree(i), self.den.degree(i))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if self.variables:
                return False
            return self.constant_value() == other
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.variables == other.variables and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if not self.variables:
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.variables, frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # arithmetic ---------------------------------------------------------
    def _unify(self, other):
        if self.variables == other.variables:
            return self.variables, self.num, self.den, other.num, other.den
        names = _sorted_names(self.variables + other.variables)
        return (
            names,
            _remap(self.num, self.variables, names),
            _remap(self.den, self.variables, names),
            _remap(other.num, other.variables, names),
            _remap(other.den, other.variables, names),
        )

    def _scaled(self, c):
        c = _qq(c)
        if not c:
            return ZERO
        return RationalFunction(self.variables, self.num.mul_ground(c), self.den, True)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            c = _qq(other)
            num = self.num + self.den.mul_ground(c)
            if not num:
                return ZERO
            return RationalFunction(*_shrink(self.variables, num, self.den), True)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        return rf_sum([self, other])

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.variables, -self.num, self.den, True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scaled(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if not other.variables:
            return self._scaled(other.num.LC)
        if not self.variables:
            return other._scaled(self.num.LC)
        names, an, ad, bn, bd = self._unify(other)
        g1, an, bd = _cofactors(an, bd)
        g2, bn, ad = _cofactors(bn, ad)
        num = _product(an, bn)
        den = _product(ad, bd)
        c = _lc(den)
        if c != 1:
            num = num.quo_ground(c)
            den = den.quo_ground(c)
        return RationalFunction(*_shrink(names, num, den), True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        num, den = self.den, self.num
        c = _lc(den)
        if c != 1:
            num = num.quo_ground(c)
            den = den.quo_ground(c)
        return RationalFunction(self.variables, num, den, True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self._scaled(Fraction(1) / Fraction(other))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ONE
        return RationalFunction(self.variables, self.num ** k, self.den ** k, True)

    # calculus / substitution -------------------------------------------
    def diff(self, var):
        return differentiate(self, var)

    def rename(self, mapping):
        """Simultaneously rename variables; merged names multiply (diagonal substitution)."""
        mapping = {k: v for k, v in mapping.items() if k in self.variables and k != v}
        if not mapping:
            return self
        targets = [mapping.get(v, v) for v in self.variables]
        names = _sorted_names(targets)
        merged = len(names) < len(targets)
        ring = _ring(names)
        pos = [names.index(t) for t in targets]

        def move(p):
            out = {}
            for mon, c in p.items():
                m = [0] * len(names)
                for i, e in enumerate(mon):
                    m[pos[i]] += e
                m = tuple(m)
                out[m] = out[m] + c if m in out else c
            return ring.from_dict({m: c for m, c in out.items() if c})

        num, den = move(self.num), move(self.den)
        if merged:
            return RationalFunction(names, num, den)
        c = _lc(den)
        if c != 1:
            num = num.quo_ground(c)
            den = den.quo_ground(c)
        return RationalFunction(names, num, den, True)

    def substitute(self, var, value):
        """Replace ``var`` by a rational function (or number)."""
        if var not in self.variables:
            return self
        value = RationalFunction.coerce(value)
        names = _sorted_names(self.variables + value.variables)
        idx = names.index(var)
        num = _remap(self.num, self.variables, names)
        den = _remap(self.den, self.variables, names)
        vn = _remap(value.num, value.variables, names)
        vd = _remap(value.den, value.variables, names)
        pn, rest = _split(num, idx)
        pd, _ = _split(den, idx)
        top = max(max(pn), max(pd))
        vn_pows = [names and _ring(names).one]
        for _ in range(top):
            vn_pows.append(vn_pows[-1] * vn)
        vd_pows = [_ring(names).one]
        for _ in range(top):
            vd_pows.append(vd_pows[-1] * vd)

        def build(parts):
            acc = _ring(names).zero
            for k, c in parts.items():
                acc += _remap(c, rest, names) * vn_pows[k] * vd_pows[top - k]
            return acc

        return RationalFunction(names, build(pn), build(pd))

    def evaluate(self, var, value):
        return self.substitute(var, RationalFunction.constant(value))

    # output -------------------------------------------------------------
    def render(self):
        return f"({self.numerator.render()})/({self.denominator.render()})"

    def to_structured(self):
        return {
            "variables": list(self.variables),
            "numerator": self.numerator.to_structured(),
            "denominator": self.denominator.to_structured(),
        }

    @classmethod
    def from_structured(cls, data):
        names = tuple(data["variables"])
        num = MultiPolynomial.from_terms(names, {tuple(m): Fraction(c) for m, c in data["numerator"]})
        den = MultiPolynomial.from_terms(names, {tuple(m): Fraction(c) for m, c in data["denominator"]})
        return cls(names, num.poly, den.poly)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"RationalFunction({self.render()!r})"


ZERO = RationalFunction((), _EMPTY.zero, _EMPTY.one, True)
ONE = RationalFunction((), _EMPTY.one, _EMPTY.one, True)


def rf_sum(items, reduce=True):
    """Sum rational functions sharing denominators with a single final reduction.

    With ``reduce=False`` the result keeps the lcm denominator and skips the
    final gcd; it is a correct value but not canonical, for intermediates only.
    """
    items = [RationalFunction.coerce(x) for x in items]
    items = [x for x in items if x.num]
    if not items:
        return ZERO
    if len(items) == 1:
        return items[0]
    names = _sorted_names(v for x in items for v in x.variables)
    groups = []
    for x in items:
        n = _remap(x.num, x.variables, names)
        d = _remap(x.den, x.variables, names)
        for g in groups:
            if g[1] == d:
                g[0] += n
                break
        else:
            groups.append([n, d])
    if len(groups) == 1 or not names:
        return RationalFunction(names, groups[0][0], groups[0][1], not reduce and bool(groups[0][0]))
    # common denominator built from gcd cofactors, accumulated in flint
    ring = groups[0][0].ring
    ctx = _flint_ctx(len(names))
    num, common = (_to_flint(p, ctx) for p in groups[0])
    for n, d in groups[1:]:
        n, d = _to_flint(n, ctx), _to_flint(d, ctx)
        g = common.gcd(d)
        c_common, c_d = (common, d) if g.is_one() else (common / g, d / g)
        num = num * c_d + n * c_common
        common = common * c_d
    num, common = _from_flint(num, ring), _from_flint(common, ring)
    if not reduce and num:
        return RationalFunction(*_shrink(names, num, common), True)
    return RationalFunction(names, num, common)


def differentiate(f, v):
    """Exact derivative of ``f`` with respect to variable ``v`` (zero if absent)."""
    f = RationalFunction.coerce(f)
    if v not in f.variables:
        return ZERO
    i = f.variables.index(v)
    n, d = f.num, f.den
    dn = n.diff(n.ring.gens[i])
    if d.is_ground:
        return RationalFunction(f.variables, dn, d)
    dd = d.diff(d.ring.gens[i])
    # d/dv (n/d) = (n' d - n d') / d^2, with the d^2 reduced against gcd(d, d')
    g, d_red, dd_red = _cofactors(d, dd)
    num = dn * d_red - n * dd_red
    den = d * d_red
    return RationalFunction(f.variables, num, den)


# ---------------------------------------------------------------------------
# Laurent series
# ---------------------------------------------------------------------------

class LaurentSeries:
    """Truncated Laurent series ``sum c_k t^k`` for ``min_degree <= k <= truncation``.

    Coefficients may be ``Fraction`` or ``RationalFunction`` (in spectator
    variables). Terms above ``truncation`` are unknown; every operation
    propagates the guaranteed order pessimistically.
    """

    __slots__ = ("coeffs", "min_degree", "truncation", "variable", "center")

    def __init__(self, coeffs, min_degree, truncation, variable="t", center=Fraction(0)):
        coeffs = list(coeffs)[: max(truncation - min_degree + 1, 0)]
        while coeffs and _is_zero(coeffs[0]):
            coeffs.pop(0)
            min_degree += 1
        if not coeffs:
            min_degree = truncation + 1
        else:
            while _is_zero(coeffs[-1]):
                coeffs.pop()
        self.coeffs = coeffs
        self.min_degree = min_degree
        self.truncation = truncation
        self.variable = variable
        self.center = center

    @classmethod
    def from_dict(cls, terms, truncation, variable="t", center=Fraction(0)):
        terms = {k: c for k, c in terms.items() if k <= truncation and not _is_zero(c)}
        if not terms:
            return cls([], truncation + 1, truncation, variable, center)
        lo, hi = min(terms), max(terms)
        return cls([terms.get(k, 0) for k in range(lo, hi + 1)], lo, truncation, variable, center)

    @classmethod
    def monomial(cls, c, k, truncation, variable="t"):
        return cls([c], k, truncation, variable)

    @property
    def valuation(self):
        return self.min_degree

    @property
    def max_degree(self):
        return self.min_degree + len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, k):
        if k > self.truncation:
            raise TruncationError(f"coefficient t^{k} beyond truncation {self.truncation}", self.truncation)
        i = k - self.min_degree
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def items(self):
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                yield self.min_degree + i, c

    def _like(self, coeffs, lo, trunc):
        return LaurentSeries(coeffs, lo, trunc, self.variable, self.center)

    def truncate(self, trunc):
        if trunc >= self.truncation:
            return self
        return self._like(self.coeffs, self.min_degree, trunc)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = self._like([other], 0, self.truncation)
        trunc = min(self.truncation, other.truncation)
        terms = {}
        for s in (self, other):
            for k, c in s.items():
                if k <= trunc:
                    terms.setdefault(k, []).append(c)
        return LaurentSeries.from_dict({k: _sum(v) for k, v in terms.items()}, trunc, self.variable, self.center)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.min_degree, self.truncation)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return self._like([c * a for a in self.coeffs], self.min_degree, self.truncation)

    def shift(self, k):
        """Multiply by t^k."""
        return self._like(self.coeffs, self.min_degree + k, self.truncation + k)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        return self.mul(other)

    def mul(self, other, order=None):
        """Product, computed only up to ``order`` if given."""
        v1, v2 = self.valuation, other.valuation
        trunc = min(self.truncation + v2, other.truncation + v1)
        if order is not None:
            trunc = min(trunc, order)
        if self.is_zero() or other.is_zero():
            return LaurentSeries([], trunc + 1, trunc, self.variable, self.center)
        out = []
        for k in range(v1 + v2, trunc + 1):
            acc = []
            for i, a in enumerate(self.coeffs):
                j = k - v1 - i - v2
                if j < 0:
                    break
                if j < len(other.coeffs):
                    b = other.coeffs[j]
                    if not _is_zero(a) and not _is_zero(b):
                        acc.append(a * b)
            out.append(_sum(acc))
        return self._like(out, v1 + v2, trunc)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of a series with no known nonzero term")
        v = self.valuation
        rel = self.truncation - v
        c0 = self.coeffs[0]
        inv0 = _inv(c0)
        out = [inv0]
        for k in range(1, rel + 1):
            acc = []
            for i in range(1, min(k, len(self.coeffs) - 1) + 1):
                a = self.coeffs[i]
                if not _is_zero(a) and not _is_zero(out[k - i]):
                    acc.append(a * out[k - i])
            out.append(-_sum(acc) * inv0)
        return self._like(out, -v, -v + rel)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return self.scale(_inv(other))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self._like([1], 0, self.truncation - self.valuation if not self.is_zero() else self.truncation)
        if k == 0:
            return self._like([1], 0, 10 ** 9)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def derivative(self):
        terms = {k - 1: k * c for k, c in self.items() if k != 0}
        return LaurentSeries.from_dict(terms, self.truncation - 1, self.variable, self.center)

    def map_coefficients(self, fn):
        return self._like([fn(c) for c in self.coeffs], self.min_degree, self.truncation)

    def __repr__(self):
        body = " + ".join(f"({c})*{self.variable}^{k}" for k, c in self.items()) or "0"
        return f"LaurentSeries({body} + O({self.variable}^{self.truncation + 1}))"

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.truncation == other.truncation
            and dict(self.items()) == dict(other.items())
        )


def _is_zero(c):
    if isinstance(c, RationalFunction):
        return not c.num
    return c == 0


def _inv(c):
    if isinstance(c, RationalFunction):
        return c.inverse()
    return Fraction(1) / Fraction(c)


def _sum(values, reduce=True):
    values = [v for v in values if not _is_zero(v)]
    if not values:
        return 0
    if any(isinstance(v, RationalFunction) for v in values):
        return rf_sum(values, reduce)
    return sum(values, Fraction(0))


def series_sum(series):
    """Sum of several Laurent series; coefficients are left unreduced."""
    series = list(series)
    trunc = min(s.truncation for s in series)
    terms = {}
    for s in series:
        for k, c in s.items():
            if k <= trunc:
                terms.setdefault(k, []).append(c)
    first = series[0]
    return LaurentSeries.from_dict({k: _sum(v, False) for k, v in terms.items()}, trunc, first.variable, first.center)


def series_residue(s):
    """Coefficient of t^-1."""
    if s.truncation < -1:
        raise TruncationError("truncation window excludes degree -1", s.truncation)
    return s[-1]


def series_compose(outer, inner, order=None):
    """Return ``outer(inner(t))``; ``inner`` must vanish at t = 0.

    The result is valid up to the order implied by both truncations. If an
    explicit ``order`` is requested and cannot be met, raises TruncationError
    carrying the achievable order.
    """
    v = inner.valuation
    if inner.is_zero() or v < 1:
        if v == 0 and outer.valuation >= 0 and outer.max_degree <= 0:
            pass
        else:
            raise ValueError("inner series must have strictly positive valuation")
    limit = (outer.truncation + 1) * v - 1
    if outer.is_zero():
        trunc = limit if order is None else min(limit, order)
        return LaurentSeries([], trunc + 1, trunc, inner.variable, inner.center)
    power_cache = {}

    def power(k):
        if k not in power_cache:
            if k == 0:
                power_cache[k] = LaurentSeries([1], 0, 10 ** 9, inner.variable, inner.center)
            elif k > 0:
                power_cache[k] = inner if k == 1 else power(k - 1) * inner
            else:
                power_cache[k] = inner.inverse() if k == -1 else power(k + 1) * power(-1)
        return power_cache[k]

    achievable = limit
    terms = {}
    for k, a in outer.items():
        p = power(k)
        achievable = min(achievable, p.truncation)
    achievable = min(achievable, limit)
    if order is not None:
        if order > achievable:
            raise TruncationError(f"composition only valid up to order {achievable}", achievable)
        achievable = order
    for k, a in outer.items():
        p = power(k)
        for j, c in p.items():
            if j <= achievable:
                terms.setdefault(j, []).append(a * c)
    return LaurentSeries.from_dict({j: _sum(v) for j, v in terms.items()}, achievable, inner.variable, inner.center)


def _shift_poly(parts, rest, center_poly, ring_rest):
    """Given P(v) = sum parts[k] v^k, return coefficients of P(center + t) in t."""
    top = max(parts) if parts else 0
    out = {}
    cpows = [ring_rest.one]
    for _ in range(top):
        cpows.append(cpows[-1] * center_poly)
    for k, pk in parts.items():
        for j in range(k + 1):
            term = pk * cpows[k - j]
            b = comb(k, j)
            if b != 1:
                term = term.mul_ground(QQ(b))
            out[j] = out[j] + term if j in out else term
    return {j: p for j, p in out.items() if p}


def series_expand(f, v, center=0, min_deg=None, max_deg=0, variable="t"):
    """Laurent expansion of ``f`` in ``t = v - center`` up to and including ``max_deg``.

    ``center`` is a rational number or a polynomial RationalFunction in the
    other variables. Coefficients are RationalFunctions in the remaining
    variables. ``min_deg`` (optional) pads the window below the detected
    leading order; it may not cut off nonzero terms.
    """
    f = RationalFunction.coerce(f)
    if v not in f.variables:
        if max_deg < 0 and f:
            raise EmptySeriesError(f"requested max degree {max_deg} below leading order 0")
        return LaurentSeries([f], 0, max_deg, variable, center)
    center_rf = RationalFunction.coerce(center)
    if not center_rf.den.is_ground:
        raise ValueError("series center must be polynomial")
    names = _sorted_names(f.variables + center_rf.variables)
    idx = names.index(v)
    num = _remap(f.num, f.variables, names)
    den = _remap(f.den, f.variables, names)
    pn, rest = _split(num, idx)
    pd, _ = _split(den, idx)
    ring_rest = _ring(rest)
    cpoly = _remap(center_rf.num, center_rf.variables, rest)
    cpoly = cpoly.quo_ground(_lc(center_rf.den)) if _lc(center_rf.den) != 1 else cpoly
    N = _shift_poly(pn, rest, cpoly, ring_rest)
    D = _shift_poly(pd, rest, cpoly, ring_rest)
    if not D:
        raise ZeroDivisionError("denominator vanishes identically at the expansion center")
    a, b = min(N), min(D)
    lead = a - b
    if max_deg < lead:
        raise EmptySeriesError(f"requested max degree {max_deg} below leading order {lead}")
    # pull out the t-content of the denominator
    dlist = [D.get(b + j, ring_rest.zero) for j in range(max(D) - b + 1)]
    content = ring_rest.zero
    for d in dlist:
        if d:
            content = d if not content else content.gcd(d)
            if content.is_ground:
                break
    if not content.is_ground:
        dlist = [d.exquo(content) if d else d for d in dlist]
    else:
        content = ring_rest.one
    nlist = [N.get(a + j, ring_rest.zero) for j in range(max(N) - a + 1)]
    count = max_deg - lead + 1
    d0 = dlist[0]
    # fraction-free long division: q_j = p_j / d0^(j+1)
    p = []
    d0pows = [ring_rest.one]
    for j in range(count):
        d0pows.append(d0pows[-1] * d0)
    for j in range(count):
        acc = nlist[j] * d0pows[j] if j < len(nlist) else ring_rest.zero
        for i in range(1, min(j, len(dlist) - 1) + 1):
            if dlist[i]:
                acc -= dlist[i] * p[j - i] * d0pows[i - 1]
        p.append(acc)
    coeffs = [RationalFunction(rest, pj, d0pows[j + 1] * content) for j, pj in enumerate(p)]
    lo = lead
    if min_deg is not None:
        if min_deg > lead and any(not c.is_zero() for c in coeffs[: min_deg - lead]):
            raise ValueError(f"window start {min_deg} excludes leading order {lead}")
        if min_deg < lead:
            coeffs = [ZERO] * (lead - min_deg) + coeffs
            lo = min_deg
    return LaurentSeries(coeffs, lo, max_deg, variable, center)
