"""Higher-order moment/free-cumulant relations over truncated power series.

Series are truncated in total degree: a ``PowerSeries`` with ``prec = p``
knows every coefficient of total degree <= p. Exact polynomials use
``prec = EXACT``. Objects with poles along X_i = 0 and X_i = X_j are kept as
``PoleSeries``: a numerator series over prod X_i^a_i prod (X_i - X_j)^e_ij.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .curve import Z
from .errors import IdentificationError, TruncationError
from .exact import LaurentSeries, RationalFunction, as_fraction, series_compose, series_expand
from .graphs import enumerate_decorated, stats
from .recursion import zvars

EXACT = 10 ** 9


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


class PowerSeries:
    """Truncated power series in n variables with Fraction coefficients."""

    __slots__ = ("n", "coeffs", "prec")

    def __init__(self, n, coeffs, prec=EXACT):
        self.n = n
        self.prec = prec
        self.coeffs = {tuple(k): _frac(v) for k, v in coeffs.items() if v and sum(k) <= prec}

    @classmethod
    def constant(cls, n, c, prec=EXACT):
        return cls(n, {(0,) * n: c}, prec)

    @classmethod
    def variable(cls, n, i, prec=EXACT):
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1}, prec)

    @classmethod
    def univariate(cls, coeffs, prec):
        return cls(1, {(k,): c for k, c in enumerate(coeffs)}, prec)

    def valuation(self):
        return min((sum(k) for k in self.coeffs), default=self.prec + 1)

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, k):
        if isinstance(k, int):
            k = (k,)
        if sum(k) > self.prec:
            raise TruncationError(f"coefficient of degree {sum(k)} beyond precision {self.prec}", self.prec)
        return self.coeffs.get(tuple(k), Fraction(0))

    def truncate(self, prec):
        return PowerSeries(self.n, self.coeffs, min(prec, self.prec))

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.constant(self.n, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return PowerSeries(self.n, out, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(self.n, {k: -v for k, v in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return PowerSeries(self.n, {k: v * c for k, v in self.coeffs.items()}, self.prec)

    def mul(self, other, cap=None):
        if not isinstance(other, PowerSeries):
            return self.scale(_frac(other))
        v1, v2 = self.valuation(), other.valuation()
        prec = min(self.prec + v2, other.prec + v1)
        if cap is not None:
            prec = min(prec, cap)
        out = defaultdict(Fraction)
        for k1, c1 in self.coeffs.items():
            d1 = sum(k1)
            for k2, c2 in other.coeffs.items():
                if d1 + sum(k2) <= prec:
                    out[tuple(a + b for a, b in zip(k1, k2))] += c1 * c2
        return PowerSeries(self.n, out, prec)

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = PowerSeries.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self):
        """1/f for f with nonzero constant term (univariate or multivariate)."""
        c0 = self.coeffs.get((0,) * self.n, 0)
        if not c0:
            raise ZeroDivisionError("series without constant term is not invertible")
        rest = (self - c0).scale(Fraction(-1) / c0)
        # 1/f = (1/c0) * sum rest^k; rest has valuation >= 1
        out = PowerSeries.constant(self.n, Fraction(1) / c0, self.prec)
        term = PowerSeries.constant(self.n, 1, self.prec)
        for _ in range(self.prec if self.prec < EXACT else 0):
            term = term.mul(rest, cap=self.prec)
            if term.is_zero():
                break
            out = out + term.scale(Fraction(1) / c0)
        return out

    def derivative(self, i):
        out = {}
        for k, v in self.coeffs.items():
            if k[i]:
                kk = list(k)
                kk[i] -= 1
                out[tuple(kk)] = v * k[i]
        return PowerSeries(self.n, out, self.prec - 1)

    def shift(self, i, a):
        """Multiply by X_i^a (a may be negative if divisible)."""
        out = {}
        for k, v in self.coeffs.items():
            kk = list(k)
            kk[i] += a
            if kk[i] < 0:
                raise ArithmeticError(f"series not divisible by X{i + 1}^{-a}")
            out[tuple(kk)] = v
        return PowerSeries(self.n, out, self.prec + a)

    def embed(self, n, index):
        """Univariate series as a series in variable ``index`` of n variables."""
        out = {}
        for (k,), v in self.coeffs.items():
            e = [0] * n
            e[index] = k
            out[tuple(e)] = v
        return PowerSeries(n, out, self.prec)

    def merge(self, mapping, n):
        """Rename variable i to mapping[i] in an n-variable series; repeats multiply."""
        out = defaultdict(Fraction)
        for k, v in self.coeffs.items():
            e = [0] * n
            for i, p in enumerate(k):
                e[mapping[i]] += p
            out[tuple(e)] += v
        return PowerSeries(n, out, self.prec)

    def equal_to_order(self, other, order):
        for k in set(self.coeffs) | set(other.coeffs):
            if sum(k) <= order and self.coeffs.get(k, 0) != other.coeffs.get(k, 0):
                return False
        return self.prec >= order and other.prec >= order

    def to_structured(self):
        items = sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return [[list(k), str(v)] for k, v in items]

    def __repr__(self):
        items = sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        body = " + ".join(f"{v}*X^{list(k)}" for k, v in items[:12])
        return f"PowerSeries({body} + O(deg {self.prec + 1}))"


def _poly_diff(n, i, j):
    """X_i - X_j as an exact series."""
    return PowerSeries.variable(n, i) - PowerSeries.variable(n, j)


class PoleSeries:
    """num / (prod V_i^a_i * prod_{i<j} (V_i - V_j)^e_ij)."""

    def __init__(self, num, a=None, e=None):
        self.num = num
        self.n = num.n
        self.a = tuple(a) if a is not None else (0,) * self.n
        self.e = {k: v for k, v in (e or {}).items() if v}

    def scale(self, c):
        return PoleSeries(self.num.scale(c), self.a, self.e)

    def _lift(self, a, e, cap):
        """Rewrite over the larger denominator (a, e)."""
        num = self.num
        for i in range(self.n):
            if a[i] != self.a[i]:
                num = num.shift(i, a[i] - self.a[i])
        for (i, j), p in e.items():
            extra = p - self.e.get((i, j), 0)
            if extra:
                num = num.mul(_poly_diff(self.n, i, j) ** extra, cap=cap)
        return num

    def add(self, other, cap=None):
        a = tuple(max(p, q) for p, q in zip(self.a, other.a))
        keys = set(self.e) | set(other.e)
        e = {k: max(self.e.get(k, 0), other.e.get(k, 0)) for k in keys}
        num = self._lift(a, e, cap) + other._lift(a, e, cap)
        return PoleSeries(num, a, e)

    def mul(self, other, cap=None):
        if not isinstance(other, PoleSeries):
            return PoleSeries(self.num.mul(other, cap=cap), self.a, self.e)
        a = tuple(p + q for p, q in zip(self.a, other.a))
        e = dict(self.e)
        for k, v in other.e.items():
            e[k] = e.get(k, 0) + v
        return PoleSeries(self.num.mul(other.num, cap=cap), a, e)

    def derivative(self, i, cap=None):
        n = self.n
        factors = []  # (polynomial factor, log-derivative numerator coefficient)
        if self.a[i]:
            factors.append(("a", i, PowerSeries.variable(n, i), Fraction(self.a[i])))
        for (p, q), m in self.e.items():
            if p == i:
                factors.append(("e", (p, q), _poly_diff(n, p, q), Fraction(m)))
            elif q == i:
                factors.append(("e", (p, q), _poly_diff(n, p, q), Fraction(-m)))
        dnum = self.num.derivative(i)
        if not factors:
            return PoleSeries(dnum, self.a, self.e)
        full = PowerSeries.constant(n, 1)
        for f in factors:
            full = full * f[2]
        new = dnum.mul(full, cap=cap)
        for idx, f in enumerate(factors):
            others = PowerSeries.constant(n, 1)
            for jdx, g in enumerate(factors):
                if jdx != idx:
                    others = others * g[2]
            new = new - self.num.mul(others, cap=cap).scale(f[3])
        a = list(self.a)
        e = dict(self.e)
        for kind, key, _, _ in factors:
            if kind == "a":
                a[key] += 1
            else:
                e[key] += 1
        return PoleSeries(new, a, e)

    def merge(self, mapping, n):
        if self.e:
            raise ValueError("cannot merge variables across a pole factor")
        a = [0] * n
        for i, p in enumerate(self.a):
            a[mapping[i]] += p
        return PoleSeries(self.num.merge(mapping, n), a, {})

    def to_series(self):
        """Divide out all denominator factors exactly."""
        num = self.num
        for i, p in enumerate(self.a):
            if p:
                num = num.shift(i, -p)
        for (i, j), p in sorted(self.e.items()):
            num = _divide_linear(num, i, j, p)
        return num


def _divide_linear(series, i, j, power):
    """Exact division of a truncated series by (X_i - X_j)^power."""
    n = series.n
    names = zvars(n, "X")
    from .exact import MultiPolynomial

    poly = MultiPolynomial.from_terms(names, series.coeffs)
    num = RationalFunction.from_polynomials(poly)
    lin = RationalFunction.variable(names[i]) - RationalFunction.variable(names[j])
    q = num / lin ** power
    if not q.denominator.poly.is_ground:
        raise ArithmeticError(f"series not divisible by (X{i + 1} - X{j + 1})^{power}")
    out = {}
    qn = q.numerator
    for mon, c in qn.terms().items():
        e = [0] * n
        for v, p in zip(qn.variables, mon):
            e[names.index(v)] = p
        out[tuple(e)] = c / as_fraction(q.denominator.poly.LC)
    return PowerSeries(n, out, series.prec - power)


# ---------------------------------------------------------------------------
# cumulant / moment containers
# ---------------------------------------------------------------------------

@dataclass
class CumulantSeries:
    entries: dict = field(default_factory=dict)  # (g, n) -> PowerSeries in Y_1..Y_n

    def get(self, g, n):
        if (g, n) in self.entries:
            return self.entries[(g, n)]
        if (g, n) == (0, 1):
            return PowerSeries.constant(1, 1)
        return PowerSeries(n, {})

    @classmethod
    def from_structured(cls, data):
        entries = {}
        for item in data:
            g, n = int(item["g"]), int(item["n"])
            coeffs = {tuple(k): Fraction(v) for k, v in item["coefficients"]}
            entries[(g, n)] = PowerSeries(n, coeffs, int(item.get("precision", EXACT)))
        return cls(entries)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_structured(json.load(fh))

    def to_structured(self):
        return [
            {"g": g, "n": n, "coefficients": s.to_structured()}
            | ({"precision": s.prec} if s.prec < EXACT else {})
            for (g, n), s in sorted(self.entries.items())
        ]


@dataclass
class MomentSeries:
    entries: dict = field(default_factory=dict)

    def to_structured(self):
        return [
            {"g": g, "n": n, "precision": s.prec, "coefficients": s.to_structured()}
            for (g, n), s in sorted(self.entries.items())
        ]


# ---------------------------------------------------------------------------
# first order
# ---------------------------------------------------------------------------

def solve_first_order(C01, order):
    """M_1 with C_1(X M_1(X)) = M_1(X), by Lagrange inversion.

    Y = X M(X) inverts X = Y / C(Y), so [X^{k+1}] Y = 1/(k+1) [w^k] C(w)^{k+1}.
    """
    C = C01.truncate(order) if C01.n == 1 else None
    if C is None:
        raise ValueError("first-order cumulant series must be univariate")
    if C[0] != 1:
        raise ValueError("C_{0,1} must have constant term 1")
    order = min(order, C.prec)
    coeffs = []
    power = PowerSeries.constant(1, 1, order)
    for k in range(order + 1):
        power = power.mul(C, cap=order)
        coeffs.append(power[k] / (k + 1))
    M = PowerSeries.univariate(coeffs, order)
    if not compose_univariate(C, M.mul(PowerSeries.variable(1, 0), cap=order), order).equal_to_order(M, order):
        raise ArithmeticError("back-substitution check failed")
    return M


def compose_univariate(outer, inner, order):
    """outer(inner(X)) for inner without constant term."""
    if inner[0] != 0:
        raise ValueError("inner series must vanish at 0")
    result = PowerSeries(1, {}, order)
    power = PowerSeries.constant(1, 1, order)
    top = min(order, outer.prec)
    for k in range(top + 1):
        c = outer.coeffs.get((k,), 0)
        if c:
            result = result + power.scale(c)
        power = power.mul(inner, cap=order)
    return PowerSeries(1, result.coeffs, min(order, outer.prec))


def fixed_point_first_order(C01, order):
    """Oracle: iterate M <- C(X M) until stable."""
    X = PowerSeries.variable(1, 0)
    M = PowerSeries.constant(1, 1, order)
    for _ in range(order + 2):
        M = compose_univariate(C01, M.mul(X, cap=order), order)
    return M


# ---------------------------------------------------------------------------
# higher orders
# ---------------------------------------------------------------------------

class _Substitution:
    """Y_i = X_i U(X_i) with U = M_{0,1}, truncated at total degree P."""

    def __init__(self, U, n, P):
        self.n, self.P = n, P
        X = PowerSeries.variable(1, 0)
        self.Y = U.mul(X, cap=P)
        self.U = U
        self.Uinv = U.truncate(P).inverse()
        self.dY = self.Y.derivative(0)
        self._ypow = {}

    def ypow(self, k):
        if k not in self._ypow:
            self._ypow[k] = self.Y.truncate(self.P) ** k if k else PowerSeries.constant(1, 1)
            self._ypow[k] = self._ypow[k].truncate(self.P)
        return self._ypow[k]

    def quotient(self, i, j):
        """(Y(X_i) - Y(X_j)) / (X_i - X_j) as a bivariate-in-n series."""
        out = defaultdict(Fraction)
        for (k,), c in self.Y.coeffs.items():
            for p in range(k):
                e = [0] * self.n
                e[i] += p
                e[j] += k - 1 - p
                out[tuple(e)] += c
        return PowerSeries(self.n, out, self.Y.prec - 1)

    def compose(self, ps):
        """PoleSeries in Y -> PoleSeries in X."""
        n, P = self.n, self.P
        out = defaultdict(Fraction)
        prec = P
        for k, c in ps.num.coeffs.items():
            term = {(0,) * n: Fraction(c)}
            for i, p in enumerate(k):
                if p:
                    yp = self.ypow(p)
                    new = {}
                    for kk, cc in term.items():
                        for (q,), d in yp.coeffs.items():
                            if sum(kk) + q <= P:
                                e = list(kk)
                                e[i] += q
                                new[tuple(e)] = new.get(tuple(e), 0) + cc * d
                    term = new
            for kk, cc in term.items():
                out[kk] += cc
        prec = min(prec, ps.num.prec)
        num = PowerSeries(n, out, prec)
        for i, a in enumerate(ps.a):
            if a:
                num = num.mul((self.Uinv ** a).embed(n, i), cap=P)
        for (i, j), e in ps.e.items():
            num = num.mul(self.quotient(i, j).inverse() ** e, cap=P)
        return PoleSeries(num, ps.a, ps.e)


def _free_weight(C, g_i, D, n, P):
    """Free weight of a decorated black vertex as a PoleSeries in Y_1..Y_n."""
    k = len(D)
    labels = [label - 1 for label, _ in D]
    base = C.get(g_i, k)
    ps = PoleSeries(base.truncate(P), (1,) * k)
    if (g_i, k) == (0, 2) and labels[0] != labels[1]:
        # C02 + Y1 Y2/(Y1 - Y2)^2, all over Y1 Y2
        extra = PoleSeries(PowerSeries.constant(2, 1), (0, 0), {(0, 1): 2})
        ps = ps.add(extra, cap=P)
    for slot, (_, h) in enumerate(D):
        for _ in range(2 * h):
            ps = ps.derivative(slot, cap=P)
        if h:
            ps = ps.scale(Fraction(1, 2 ** (2 * h) * factorial(2 * h + 1)))
    if ps.e:
        # only the distinct-label (0,2) vertex carries a pole between slots
        mapping = labels
        a = [0] * n
        for s, p in enumerate(ps.a):
            a[mapping[s]] += p
        e = {}
        for (s, t), p in ps.e.items():
            i, j = mapping[s], mapping[t]
            if i < j:
                e[(i, j)] = p
                num = ps.num.merge(mapping, n)
            else:
                e[(j, i)] = p
                num = ps.num.merge(mapping, n).scale((-1) ** p)
        return PoleSeries(num, a, e)
    return ps.merge(labels, n)


def moments_from_cumulants(C, g, n, order=None, U=None):
    """M_{g,n} from cumulants via the decorated-graph relation.

    (0,2) is included: the graph sum there gives M_{0,2} + X1 X2/(X1 - X2)^2,
    and the double pole is removed before returning.
    """
    if 2 * g - 2 + n < 0 or (g, n) == (0, 1):
        raise ValueError("need 2g - 2 + n >= 0 and (g,n) != (0,1)")
    order = default_order(n) if order is None else order
    margin = 4 * (2 * g - 2 + n) + 6
    for _ in range(4):
        P = order + margin
        try:
            result = _moments_once(C, g, n, P, U)
            if result.prec >= order:
                return result.truncate(order)
        except TruncationError:
            pass
        margin += 4
    raise TruncationError(f"could not reach order {order} for M_({g},{n})", None)


def default_order(n):
    return {1: 10, 2: 8}.get(n, 6)


def _moments_once(C, g, n, P, U):
    if U is None or U.prec < P:
        U = solve_first_order(C.get(0, 1), P)
    sub = _Substitution(U, n, P)
    total = None
    graphs = enumerate_decorated(n, g) if 2 * g - 2 + n > 0 else [_g02()]
    for graph in graphs:
        st = stats(graph)
        ps = PoleSeries(PowerSeries.constant(n, 1), (0,) * n)
        for g_i, D in graph.blacks:
            ps = ps.mul(_free_weight(C, g_i, D, n, P), cap=P)
        ps = sub.compose(ps)
        for i in range(n):
            # X_i^2 dY_i/dX_i, then (X_i^2 d/dX_i)^m
            ps = PoleSeries(ps.num.mul(sub.dY.embed(n, i), cap=P), ps.a, ps.e)
            ps = _shift_a(ps, i, -2)
            for _ in range(st.valences[i] + 2 * st.edge_genus[i] - 1):
                ps = _shift_a(ps.derivative(i, cap=P), i, -2)
        ps = ps.scale(Fraction(1, st.aut))
        total = ps if total is None else total.add(ps, cap=P)
    total = PoleSeries(total.num, tuple(a + 1 for a in total.a), total.e)
    if (g, n) == (0, 2):
        pole = PoleSeries(PowerSeries(2, {(1, 1): 1}), (0, 0), {(0, 1): 2})
        total = total.add(pole.scale(-1), cap=P)
    return total.to_series()


def _shift_a(ps, i, d):
    a = list(ps.a)
    a[i] += d
    return PoleSeries(ps.num, a, ps.e)


def _g02():
    from .graphs import DecoratedGraph

    return DecoratedGraph(2, ((0, ((1, 0), (2, 0))),))


def second_order_identity(C, order, U=None):
    """Check M2 + X1X2/(X1-X2)^2 = L1 L2 (C2 + Y1Y2/(Y1-Y2)^2) after clearing (X1-X2)^2.

    Returns (lhs, rhs) PowerSeries, both multiplied by (X1 - X2)^2.
    """
    P = order + 6
    if U is None:
        U = solve_first_order(C.get(0, 1), P)
    M2 = moments_from_cumulants(C, 0, 2, order + 2, U=U)
    d = _poly_diff(2, 0, 1)
    lhs = M2.mul(d * d, cap=order) + PowerSeries(2, {(1, 1): 1})
    sub = _Substitution(U, 2, P)
    # L_i = d log Y / d log X = X Y'/Y = 1 + X U'/U
    L = (PowerSeries.constant(1, 1) + PowerSeries.variable(1, 0).mul(U.derivative(0), cap=P).mul(sub.Uinv, cap=P))
    L1, L2 = L.embed(2, 0), L.embed(2, 1)
    C2 = C.get(0, 2).truncate(P)
    Yp = [sub.ypow(1).embed(2, i) for i in range(2)]
    composed = sub.compose(PoleSeries(C2, (0, 0))).num
    Q = sub.quotient(0, 1)
    inner = composed.mul(d * d, cap=P) + Yp[0].mul(Yp[1], cap=P).mul(Q.inverse() ** 2, cap=P)
    rhs = L1.mul(L2, cap=P).mul(inner, cap=P)
    return lhs.truncate(order), rhs.truncate(order)


# ---------------------------------------------------------------------------
# identification with correlator tables
# ---------------------------------------------------------------------------

def _simple_points(f, kind):
    """Simple rational zeros ('zero') or poles ('pole') of a univariate function, with infinity."""
    poly = f.num if kind == "zero" else f.den
    points = []
    if f.variables:
        _, factors = poly.factor_list()
        for fac, mult in factors:
            if fac.degree(0) == 1 and mult == 1:
                c1 = as_fraction(fac.coeff(fac.ring.gens[0]))
                c0 = as_fraction(fac.coeff(1))
                points.append(-c0 / c1)
    dn, dd = f.degree(Z) if f.variables else (0, 0)
    if (kind == "pole" and dn - dd == 1) or (kind == "zero" and dd - dn == 1):
        points.append(None)  # infinity
    return points


def _at_point(f, z0):
    """f in a local coordinate w with w = 0 at z0 (w = z - z0, or 1/z at infinity)."""
    if z0 is None:
        return f.substitute(Z, 1 / RationalFunction.variable(Z))
    return f.substitute(Z, RationalFunction.variable(Z) + z0)


def _limit(f, z0):
    s = series_expand(_at_point(f, z0), Z, 0, None, 0)
    if s.valuation < 0:
        return None
    return RationalFunction.coerce(s[0]).constant_value()


def _revert(series, order):
    """Compositional inverse of a univariate LaurentSeries with valuation 1."""
    a1 = series[1]
    inv = LaurentSeries([Fraction(1) / a1], 1, order)
    for _ in range(order.bit_length() + 2):
        # Newton: g <- g - (f(g) - X) / f'(g)
        fg = series_compose(series, inv)
        X = LaurentSeries([Fraction(1)], 1, order)
        dfg = series_compose(series.derivative(), inv)
        inv = (inv - (fg - X) / dfg).truncate(order)
    return inv


def find_expansion_point(table, direction):
    """Expansion point for the identification, or IdentificationError."""
    x, y = table.curve.x, table.curve.y
    kind = "pole" if direction == "moments" else "zero"
    for z0 in _simple_points(x, kind):
        lim = _limit(x * y, z0)
        if lim == 1:
            return z0
    raise IdentificationError(
        f"no simple {kind} of x with x*y -> 1; the {direction} identification is not available for this curve"
    )


def identify_with_swap(table, direction, entries=((0, 1), (0, 2), (1, 1)), order=None):
    """Expand table correlators into moment ('moments') or cumulant ('cumulants') series."""
    if direction not in ("moments", "cumulants"):
        raise ValueError("direction must be 'moments' or 'cumulants'")
    z0 = find_expansion_point(table, direction)
    curve = table.curve
    out = {}
    for g, n in entries:
        o = default_order(n) if order is None else order
        work = o + n + 4
        local = _at_point(curve.x, z0)
        xs = series_expand(local, Z, 0, None, work + 2).map_coefficients(lambda c: RationalFunction.coerce(c).constant_value())
        param = xs.inverse() if direction == "moments" else xs
        param = LaurentSeries(param.coeffs, param.min_degree, min(param.truncation, work))
        w_of_X = _revert(param, work)
        if (g, n) == (0, 2):
            from .recursion import w02_hat

            F = w02_hat(table, "z1", "z2")
        else:
            F = table.get(g, n)
        for v in zvars(n):
            F = _at_point_var(F, v, z0)
        s = _expand_multi(F, list(zvars(n)), w_of_X, work, -1 if direction == "moments" else 1)
        out[(g, n)] = s.truncate(o)
    return MomentSeries(out) if direction == "moments" else CumulantSeries(out)


def _at_point_var(F, v, z0):
    if v not in F.variables:
        return F
    var = RationalFunction.variable(v)
    return F.substitute(v, 1 / var if z0 is None else var + z0)


def _expand_multi(F, names, w_of_X, work, shift):
    """Expand F(w_1..w_n) with w_i = w(X_i), times prod X_i^shift, as a PowerSeries."""
    n = len(names)
    result = defaultdict(Fraction)
    prec = work

    def rec(f, idx, exps, lowest):
        nonlocal prec
        if idx == n:
            result[tuple(e + shift for e in exps)] += RationalFunction.coerce(f).constant_value()
            return
        name = names[idx]
        s = series_expand(f, name, 0, None, work)
        comp = series_compose(s, w_of_X)
        prec = min(prec, comp.truncation)
        for k, c in comp.items():
            if k + shift < 0:
                raise IdentificationError("correlator has a pole at the expansion point")
            if k + sum(exps) <= work:
                rec(c, idx + 1, exps + [k], lowest)

    rec(F, 0, [], 0)
    return PowerSeries(n, result, prec + n * shift if shift < 0 else prec)


def shifted_series(C01, order, M01=None):
    """Check C~_1(M~_1(X)) = 1/X; returns (C~, M~, composed) as LaurentSeries."""
    if M01 is None:
        M01 = solve_first_order(C01, order + 2)
    Mt = LaurentSeries([M01[k] for k in range(order + 2)], 1, order + 2)
    Ct = LaurentSeries([C01[k] if k <= C01.prec else 0 for k in range(order + 3)], -1, order + 1)
    composed = series_compose(Ct, Mt)
    return Ct, Mt, composed


def semicircle():
    """Cumulants with kappa_2 = 1 only."""
    return CumulantSeries({(0, 1): PowerSeries(1, {(0,): 1, (2,): 1})})
