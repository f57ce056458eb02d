"""Verification suite: exact reproductions plus cross-method checks.

Every check is run; failures are collected and reported with expected and
actual canonical forms.
"""
from __future__ import annotations

from dataclasses import dataclass

from .curve import catalog_curve, swap_roles
from .exact import ZERO, RationalFunction
from .graphs import automorphism_count, betti1, enumerate_decorated, enumerate_plain
from .parser import parse_rational_function
from .recursion import CorrelatorTable, compute_correlator, regularized_diagonal_w02
from .swap import (
    SwapContext,
    hand_coded_reference,
    swap_correlator,
    swap_genus0_tree,
    swap_n1_exponential,
    swap_via_operator_series,
)


@dataclass
class Check:
    suite: str
    name: str
    expected: str
    actual: str

    @property
    def ok(self):
        return self.expected == self.actual

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        if self.ok:
            return f"{status} [{self.suite}] {self.name}: {self.actual}"
        return f"{status} [{self.suite}] {self.name}: expected {self.expected}, got {self.actual}"

    def to_structured(self):
        return {"suite": self.suite, "name": self.name, "expected": self.expected, "actual": self.actual, "ok": self.ok}


def _rf(text):
    return parse_rational_function(text)


class _Runner:
    def __init__(self, suite):
        self.suite = suite
        self.checks = []

    def add(self, name, expected, compute):
        try:
            actual = compute()
            actual = actual.render() if isinstance(actual, RationalFunction) else str(actual)
        except Exception as exc:  # collected, not short-circuited
            actual = f"error: {type(exc).__name__}: {exc}"
        if isinstance(expected, RationalFunction):
            expected = expected.render()
        self.checks.append(Check(self.suite, name, str(expected), actual))


AIRY_EXPECTED = {
    (0, 3): "-1/(16*z1^3*z2^3*z3^3)",
    (1, 1): "-1/(32*z1^5)",
    (1, 2): "(5*z1^4 + 5*z2^4 + 3*z1^2*z2^2)/(128*z1^7*z2^7)",
    (2, 1): "-105/(2048*z1^11)",
}


def airy_suite(cache_dir=None):
    r = _Runner("airy")
    table = CorrelatorTable(catalog_curve("airy"), cache_dir=cache_dir)
    r.add("W(0,2)", _rf("1/(4*z1*z2*(z1-z2)^2)"), lambda: compute_correlator(table, 0, 2))
    for key, text in AIRY_EXPECTED.items():
        r.add(f"W{key}", _rf(text), lambda key=key: table.get(*key))
    r.add("W02 regularized diagonal", _rf("1/(16*z^4)"), lambda: regularized_diagonal_w02(table))
    ctx = SwapContext(table)
    for gn in ((1, 1), (0, 3), (1, 2), (2, 1)):
        r.add(f"swap{gn} vanishes", ZERO, lambda gn=gn: swap_correlator(ctx, *gn)[0])
    groups = [_rf(t) for t in ("87/(32*z1^10)", "-477/(128*z1^10)", "-63/(128*z1^10)", "3/(2*z1^10)")]
    r.add(
        "swap(2,1) group subtotals",
        ", ".join(g.render() for g in groups),
        lambda: ", ".join(v.render() for v in swap_correlator(ctx, 2, 1)[1].groups.values()),
    )
    reverse = SwapContext(CorrelatorTable(swap_roles(catalog_curve("airy")), cache_dir=cache_dir))
    r.add("reverse swap(2,1)", _rf("-105/(2048*z1^11)"), lambda: swap_correlator(reverse, 2, 1)[0])
    _methods(r, ctx, table)
    _methods(r, reverse, None, tag="reverse ")
    return r.checks


def _methods(r, ctx, table, tag=""):
    for gn in ((1, 1), (1, 2), (2, 1), (0, 3)):
        ref = swap_correlator(ctx, *gn)[0]
        r.add(f"{tag}operator{gn} = graphs", ref, lambda gn=gn: swap_via_operator_series(ctx, *gn))
        if gn[0] == 0:
            r.add(f"{tag}tree{gn} = graphs", ref, lambda gn=gn: swap_genus0_tree(ctx, gn[1]))
        else:
            r.add(f"{tag}hand{gn} = graphs", ref, lambda gn=gn: hand_coded_reference(ctx, gn))
        if gn[1] == 1:
            r.add(f"{tag}exponential{gn} = graphs", ref, lambda gn=gn: swap_n1_exponential(ctx, gn[0]))


def two_sided_suite(cache_dir=None):
    r = _Runner("two-sided")
    curve = catalog_curve("two-sided")
    table = CorrelatorTable(curve, cache_dir=cache_dir)
    dual = CorrelatorTable(swap_roles(curve), cache_dir=cache_dir)
    ctx, back = SwapContext(table), SwapContext(dual)
    for gn in ((0, 3), (1, 1), (1, 2), (2, 1)):
        r.add(f"swap{gn} = recursion on swapped curve", dual.get(*gn), lambda gn=gn: swap_correlator(ctx, *gn)[0])
        r.add(f"swap twice{gn} = original", table.get(*gn), lambda gn=gn: swap_correlator(back, *gn)[0])
    _methods(r, ctx, table)
    return r.checks


def graph_suite():
    r = _Runner("graphs")
    r.add("decorated (n=1, g=1) count", 2, lambda: len(enumerate_decorated(1, 1)))
    r.add("plain (n=1, order 3) automorphisms", "1, 2, 8, 6", lambda: ", ".join(
        str(automorphism_count(p)) for p in _fig_order(enumerate_plain(1, 3))))
    r.add("plain (n=2, order 2) automorphisms", "1, 2, 2, 2, 2, 2", lambda: ", ".join(
        str(automorphism_count(p)) for p in enumerate_plain(2, 2)))
    r.add("decorated (n=1, g=2) count and b1 split", "12 (6, 4, 2)", lambda: _split(enumerate_decorated(1, 2)))
    return r.checks


def _fig_order(graphs):
    # bare vertex, one loop, then the two b1=2 graphs by number of black vertices
    return sorted(graphs, key=lambda p: (betti1(p), -len(p.blacks)))


def _split(graphs):
    counts = [sum(1 for g in graphs if betti1(g) == b) for b in range(3)]
    return f"{len(graphs)} ({', '.join(map(str, counts))})"


def free_suite(cache_dir=None):
    from .free import (
        fixed_point_first_order,
        identify_with_swap,
        moments_from_cumulants,
        semicircle,
        shifted_series,
        solve_first_order,
    )

    r = _Runner("free")
    C = semicircle()
    r.add("semicircle M01", "1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42",
          lambda: ", ".join(str(solve_first_order(C.get(0, 1), 10)[k]) for k in range(11)))
    r.add("fixed-point oracle agrees", "True", lambda: solve_first_order(C.get(0, 1), 10).equal_to_order(
        fixed_point_first_order(C.get(0, 1), 10), 10))
    r.add("shifted series", "1/X + O(X^10)", lambda: _shifted(shifted_series(C.get(0, 1), 10)[2]))
    gauss = CorrelatorTable(catalog_curve("gaussian"), cache_dir=cache_dir)
    cside = identify_with_swap(CorrelatorTable(swap_roles(gauss.curve), cache_dir=cache_dir), "cumulants", order=16)
    mside = identify_with_swap(gauss, "moments", order=8)
    for gn in ((0, 2), (1, 1)):
        r.add(f"Gaussian cross-pipeline {gn}", "True",
              lambda gn=gn: moments_from_cumulants(cside, *gn, order=8).equal_to_order(mside.entries[gn], 8))
    return r.checks


def _shifted(series):
    lo = series.valuation
    rest = [k for k, c in series.items() if c and k != -1]
    if lo == -1 and series[-1] == 1 and not rest:
        return f"1/X + O(X^{series.truncation})"
    return repr(series)


SUITES = {
    "airy": airy_suite,
    "two-sided": two_sided_suite,
    "graphs": lambda cache_dir=None: graph_suite(),
    "free": free_suite,
}


def run_verify(suites=None, cache_dir=None):
    checks = []
    for name in suites or SUITES:
        checks.extend(SUITES[name](cache_dir=cache_dir))
    return checks
