"""Topological recursion on the z-plane.

All work is done with densities w_{g,n} = W_{g,n} * prod x'(z_i), i.e. the
coefficient of dz_1...dz_n in omega_{g,n}. At each ramification point alpha the
local parameter is t = q - alpha and sigma(alpha + t) = alpha + s(t).
"""
from __future__ import annotations

import hashlib
import os
from fractions import Fraction
from itertools import combinations

from . import ENGINE_VERSION
from .curve import Z, local_involution, swap_roles  # noqa: F401  (re-exported)
from .errors import DependencyError, EmptySeriesError, TruncationError
from .exact import (
    ONE,
    LaurentSeries,
    RationalFunction,
    differentiate,
    rf_sum,
    series_compose,
    series_sum,
    series_expand,
)

CACHE_ENV = "XYSWAP_CACHE_DIR"


def zvars(n, prefix="z"):
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def bergman(z1="z1", z2="z2"):
    """1/(z1 - z2)^2."""
    a = RationalFunction.variable(z1)
    b = RationalFunction.variable(z2)
    return (a - b) ** -2


def _at(f, name):
    """A univariate function of z re-expressed in the variable ``name``."""
    return f.rename({Z: name})


class CorrelatorTable:
    """Lazily filled map (g, n) -> W_{g,n} as a rational function of z1..zn."""

    def __init__(self, curve, cache_dir=None, margin=0):
        self.curve = curve
        self.points = curve.ramification_points("x")
        self.margin = margin
        self.entries = {}
        self._densities = {}
        self._expansions = {}
        self._local = {}
        self.cache_path = _cache_path(curve, cache_dir)
        if self.cache_path:
            self._load()

    # conventions ---------------------------------------------------------
    def xprime(self, name):
        return _at(self.curve.dx, name)

    def w01(self, name="z1"):
        return _at(self.curve.y, name)

    def w02(self, a="z1", b="z2"):
        return bergman(a, b) / (self.xprime(a) * self.xprime(b))

    def has(self, g, n):
        return (g, n) in self.entries

    def get(self, g, n):
        return compute_correlator(self, g, n)

    def density(self, g, n):
        key = (g, n)
        if key not in self._densities:
            if (g, n) == (0, 2):
                self._densities[key] = bergman()
            else:
                w = self.get(g, n)
                for v in zvars(n):
                    w = w * self.xprime(v)
                self._densities[key] = w
        return self._densities[key]

    # persistence ---------------------------------------------------------
    def _header(self):
        return [
            f"# engine: {ENGINE_VERSION}",
            f"# x: {self.curve.x.render()}",
            f"# y: {self.curve.y.render()}",
        ]

    def _load(self):
        from .parser import parse_rational_function

        if not os.path.exists(self.cache_path):
            return
        with open(self.cache_path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if lines[:3] != self._header():
            return
        for line in lines[3:]:
            if not line.strip():
                continue
            key, _, text = line.partition(":")
            g, n = (int(p) for p in key.strip().strip("()").split(","))
            self.entries[(g, n)] = parse_rational_function(text.strip())

    def save(self):
        if not self.cache_path:
            return
        os.makedirs(os.path.dirname(self.cache_path), exist_ok=True)
        body = self._header()
        for (g, n) in sorted(self.entries):
            if 2 * g - 2 + n > 0:
                body.append(f"({g},{n}): {self.entries[(g, n)].render()}")
        tmp = self.cache_path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write("\n".join(body) + "\n")
        os.replace(tmp, self.cache_path)

    def to_structured(self, g, n):
        w = self.get(g, n)
        data = w.to_structured()
        return {
            "curve": {"x": self.curve.x.render(), "y": self.curve.y.render()},
            "g": g,
            "n": n,
            "variables": data["variables"],
            "numerator": data["numerator"],
            "denominator": data["denominator"],
        }


def _cache_path(curve, cache_dir):
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return None
    digest = hashlib.sha256((ENGINE_VERSION + "|" + curve.key()).encode()).hexdigest()[:16]
    return os.path.join(cache_dir, f"curve-{digest}.txt")


# ---------------------------------------------------------------------------
# local data at a ramification point
# ---------------------------------------------------------------------------

class _Local:
    """Involution, kernel slice and cached expansions at one point for truncation N."""

    def __init__(self, table, point, N):
        self.alpha = point.location
        self.N = N
        self.s = local_involution(table.curve, point, N)
        self.ds = self.s.derivative()
        alpha = self.alpha
        curve = table.curve
        Y = _numeric(series_expand(curve.y, Z, alpha, None, N + 2))
        Xp = _numeric(series_expand(curve.dx, Z, alpha, None, N + 2))
        Ys = series_compose(Y, self.s)
        denom = (Y - Ys) * Xp
        inv = denom.inverse()
        # sum_k (t^k - s^k) / (z1 - alpha)^(k+1)
        zc = RationalFunction.variable("z1") - alpha
        spow = self.s
        terms = {}
        for k in range(1, N + 1):
            diff = LaurentSeries.monomial(Fraction(1), k, N) - spow
            inv_pow = zc ** (-k - 1)
            for j, c in diff.items():
                terms.setdefault(j, []).append(inv_pow * c)
            spow = spow * self.s
        num = LaurentSeries.from_dict({j: rf_sum(v) for j, v in terms.items()}, N)
        self.kernel = (num * inv).scale(Fraction(1, 2))


def _numeric(series):
    return series.map_coefficients(lambda c: RationalFunction.coerce(c).constant_value())


def _local(table, point, N):
    key = (point.location, N)
    if key not in table._local:
        table._local[key] = _Local(table, point, N)
    return table._local[key]


def _expansion(table, loc, g, k, composed):
    """w_{g,k}(z1..z_{k-1}, q) expanded at q = alpha + t (or q = sigma(alpha + t))."""
    key = (loc.alpha, loc.N, g, k, composed)
    cache = table._expansions
    if key in cache:
        return cache[key]
    if composed:
        base = _expansion(table, loc, g, k, False)
        res = series_compose(base, loc.s)
    else:
        w = table.density(g, k)
        res = series_expand(w, f"z{k}", loc.alpha, None, loc.N)
    cache[key] = res
    return res


def _renamed(series, names):
    mapping = {f"z{i}": v for i, v in enumerate(names, start=1)}
    return series.map_coefficients(lambda c: c.rename(mapping) if isinstance(c, RationalFunction) else c)


def _diagonal(table, loc, g, k, spectators):
    """w_{g,k}(I, alpha + t, sigma(alpha + t)) for (g,k) != (0,2), known up to t^0."""
    w = table.density(g, k)
    a, b = f"z{k - 1}", f"z{k}"
    N = loc.N
    outer = series_expand(w, a, loc.alpha, None, N)
    va = outer.valuation
    if outer.is_zero():
        return LaurentSeries([], 1, 0)
    pieces = []
    for i, c in outer.items():
        if i > -va:
            break
        try:
            inner = series_expand(c, b, loc.alpha, None, -i)
        except EmptySeriesError:
            continue
        comp = series_compose(inner, loc.s, order=-i)
        pieces.append(comp.shift(i))
    if outer.truncation < -va:
        raise TruncationError("diagonal expansion window too small", outer.truncation)
    total = series_sum(pieces).truncate(0)
    mapping = {f"z{i}": v for i, v in enumerate(spectators, start=1)}
    return total.map_coefficients(lambda c: c.rename(mapping) if isinstance(c, RationalFunction) else c)


def _bracket(table, loc, g, spectators):
    """Bracketed combination, times sigma'(t), up to t^0."""
    n = len(spectators)
    parts = []
    if g >= 1:
        if (g - 1, n + 2) == (0, 2):
            t = LaurentSeries.monomial(Fraction(1), 1, loc.N)
            parts.append((t - loc.s) ** -2)
        else:
            parts.append(_diagonal(table, loc, g - 1, n + 2, spectators))
    idx = range(n)
    for g1 in range(g + 1):
        g2 = g - g1
        for r in range(n + 1):
            for sub in combinations(idx, r):
                I1 = [spectators[i] for i in sub]
                I2 = [spectators[i] for i in idx if i not in sub]
                if (g1 == 0 and not I1) or (g2 == 0 and not I2):
                    continue
                A = _renamed(_expansion(table, loc, g1, len(I1) + 1, False), I1)
                B = _renamed(_expansion(table, loc, g2, len(I2) + 1, True), I2)
                parts.append(A.mul(B, 0))
    if not parts:
        return LaurentSeries([], 1, 0)
    total = series_sum(parts).mul(loc.ds, 0)
    if total.truncation < 0:
        raise TruncationError("bracket not known up to t^0", total.truncation)
    return total.truncate(0)


def _residue(loc, bracket):
    K = loc.kernel
    if bracket.is_zero():
        return RationalFunction.constant(0)
    need = -1 - bracket.valuation
    if K.truncation < need:
        raise TruncationError("kernel slice too short", K.truncation)
    acc = []
    for j, b in bracket.items():
        c = K[-1 - j]
        if c:
            acc.append(c * b)
    return rf_sum(acc)


def default_truncation(g, n):
    return 6 * g + 2 * n + 4


def _missing(table, g, n):
    return [(g, n)]


def compute_correlator(table, g, n, truncation=None):
    """W_{g,n} on the z-plane; stores and returns the canonical rational function."""
    if g < 0 or n < 1:
        raise ValueError("need g >= 0 and n >= 1")
    if (g, n) == (0, 1):
        return table.w01("z1")
    if (g, n) == (0, 2):
        return table.w02("z1", "z2")
    if (g, n) in table.entries and truncation is None:
        return table.entries[(g, n)]
    # make sure lower entries exist
    for gg in range(g + 1):
        for nn in range(1, n + 2):
            if (gg, nn) in ((0, 1), (0, 2)):
                continue
            if 2 * gg - 2 + nn < 2 * g - 2 + n and 2 * gg - 2 + nn > 0:
                compute_correlator(table, gg, nn)
    N = (truncation or default_truncation(g, n)) + table.margin
    spectators = zvars(n)[1:]
    for attempt in range(3):
        try:
            total = []
            for point in table.points:
                loc = _local(table, point, N)
                total.append(_residue(loc, _bracket(table, loc, g, spectators)))
            w = rf_sum(total)
            break
        except TruncationError:
            N += 4
    else:
        raise TruncationError(f"could not reach a stable window for ({g},{n})", N)
    for v in zvars(n):
        w = w / table.xprime(v)
    if truncation is None:
        table.entries[(g, n)] = w
        table._densities.pop((g, n), None)
        table.save()
    return w


def regularized_diagonal_w02(table, at="z"):
    """Limit z' -> z of W02(x(z), x(z')) - 1/(x(z) - x(z'))^2, by Taylor expansion in z' at z."""
    curve = table.curve
    z, zp = RationalFunction.variable("_a"), RationalFunction.variable("_b")
    x_a, x_b = _at(curve.x, "_a"), _at(curve.x, "_b")
    w02 = (z - zp) ** -2 / (_at(curve.dx, "_a") * _at(curve.dx, "_b"))
    first = series_expand(w02, "_b", z, None, 0)
    second = series_expand((x_a - x_b) ** -2, "_b", z, None, 0)
    value = RationalFunction.coerce((first - second)[0])
    return value.rename({"_a": at})


def w02_hat(table, a, b):
    """W02(x(a), x(b)) - 1/(x(a) - x(b))^2 as a rational function regular on a = b."""
    xa, xb = _at(table.curve.x, a), _at(table.curve.x, b)
    return table.w02(a, b) - (xa - xb) ** -2


def swapped_table(table, cache_dir=None):
    return CorrelatorTable(swap_roles(table.curve), cache_dir=cache_dir, margin=table.margin)


__all__ = [
    "CorrelatorTable",
    "bergman",
    "compute_correlator",
    "regularized_diagonal_w02",
    "swap_roles",
    "w02_hat",
    "zvars",
    "DependencyError",
    "ONE",
    "differentiate",
]
