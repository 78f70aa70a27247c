"""Match computation for sequence properties over dense time.

Works entirely on interval sets: each combinator rule is applied per
convex component and the results are unioned, which is exact for
intersection, union and the window shifts, and is applied per
component for recurrence (a continuous stretch cannot span a gap in
the operand's truth set).

End matches look backward: whether a sequence ends its match at t
depends only on the trace up to t.  Begin matches are computed with an
explicit restriction set giving the admissible end instants, threaded
through the recursion.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast
from .atoms import AtomTable, bexpr_truth
from .intervals import (
    Interval,
    IntervalSet,
    minkowski_diff_set,
    minkowski_sum_set,
    set_complement,
    set_difference,
    set_intersect,
    set_union,
)


def _shift_components(em: IntervalSet, dur: float, domain: Interval, eps: float) -> IntervalSet:
    """Recurrence rule: [l:r] -> [l+dur : r], dropped when too short."""
    out = []
    for c in em.items:
        iv = Interval(c.lo + dur, c.hi, c.lo_closed, c.hi_closed).intersect(domain)
        if not iv.is_empty:
            out.append(iv)
    return IntervalSet(out, eps)


class _Evaluator:
    def __init__(self, tab: AtomTable):
        self.tab = tab
        self.eps = tab.eps
        self.domain = tab.domain
        self.dom_set = IntervalSet([tab.domain], tab.eps)
        self._em_memo: dict[ast.SeqExpr, IntervalSet] = {}
        self._bexpr_memo: dict[ast.BExpr, IntervalSet] = {}

    def bexpr(self, b: ast.BExpr) -> IntervalSet:
        got = self._bexpr_memo.get(b)
        if got is None:
            got = self._bexpr_memo[b] = bexpr_truth(self.tab, b)
        return got

    def end(self, s: ast.SeqExpr) -> IntervalSet:
        got = self._em_memo.get(s)
        if got is None:
            got = self._em_memo[s] = self._end(s)
        return got

    def _end(self, s: ast.SeqExpr) -> IntervalSet:
        if isinstance(s, ast.SeqBool):
            return self.bexpr(s.bexpr)
        if isinstance(s, ast.Repeat):
            return _shift_components(self.end(s.seq), s.dur, self.domain, self.eps)
        if isinstance(s, ast.Delay):
            shifted = minkowski_sum_set(self.end(s.left), s.lo, s.hi, self.eps)
            return set_intersect(shifted, self.end(s.right), self.eps)
        if isinstance(s, ast.RepeatUntil):
            held = _shift_components(self.end(s.seq), s.lo, self.domain, self.eps)
            return set_intersect(held, self.end(s.cont), self.eps)
        raise TypeError(f"not a sequence expression: {type(s).__name__}")

    def begin(self, s: ast.SeqExpr, restrict: IntervalSet) -> IntervalSet:
        if restrict.is_empty:
            return restrict
        if isinstance(s, ast.SeqBool):
            return set_intersect(self.bexpr(s.bexpr), restrict, self.eps)
        ends = set_intersect(restrict, self.end(s), self.eps)
        if isinstance(s, ast.Repeat):
            pulled = minkowski_diff_set(ends, s.dur, s.dur, self.eps)
            return self.begin(s.seq, self._clip(pulled))
        if isinstance(s, ast.Delay):
            pulled = minkowski_diff_set(ends, s.lo, s.hi, self.eps)
            inner = set_intersect(self._clip(pulled), self.end(s.left), self.eps)
            return self.begin(s.left, inner)
        if isinstance(s, ast.RepeatUntil):
            pulled = minkowski_diff_set(ends, s.lo, s.hi, self.eps)
            inner = set_intersect(self._clip(pulled), self.end(s.seq), self.eps)
            return self.begin(s.seq, inner)
        raise TypeError(f"not a sequence expression: {type(s).__name__}")

    def _clip(self, s: IntervalSet) -> IntervalSet:
        return set_intersect(s, self.dom_set, self.eps)


def end_match(s: ast.SeqExpr, tab: AtomTable) -> IntervalSet:
    """All instants where the sequence completes a match."""
    return _Evaluator(tab).end(s)


def begin_match(s: ast.SeqExpr, restrict: IntervalSet, tab: AtomTable) -> IntervalSet:
    """All instants where a match starts whose end lies in ``restrict``."""
    return _Evaluator(tab).begin(s, restrict)


@dataclass(frozen=True)
class MatchReport:
    """Verdict partition of the trace domain for one assertion."""

    name: str
    domain: Interval
    nonvacuous: IntervalSet
    vacuous: IntervalSet
    fail: IntervalSet
    undetermined: IntervalSet
    horizon: float

    def status_at(self, t: float) -> str:
        if self.nonvacuous.contains(t):
            return "match"
        if self.vacuous.contains(t):
            return "vacuous"
        if self.undetermined.contains(t):
            return "undetermined"
        if self.fail.contains(t):
            return "fail"
        raise ValueError(f"{t} outside trace domain")

    @property
    def ok(self) -> bool:
        return self.fail.is_empty


def undetermined_region(domain: Interval, hor: float, eps: float) -> IntervalSet:
    """Instants whose verdict could still flip with more trace."""
    tail = Interval(domain.hi - hor, domain.hi, False, True).intersect(domain)
    if tail.is_empty:
        return IntervalSet([], eps)
    return IntervalSet([tail], eps)


def assertion_match(p: ast.Property, tab: AtomTable, name: str | None = None) -> MatchReport:
    """Classify every instant of the domain for one property."""
    ev = _Evaluator(tab)
    em_ante = ev.end(p.antecedent)
    bm_cons = ev.begin(p.consequent, ev.dom_set)
    if p.delay is not None:
        lo, hi = p.delay
        bm_cons = ev._clip(minkowski_diff_set(bm_cons, lo, hi, ev.eps))
    matched = set_intersect(em_ante, bm_cons, ev.eps)
    vac = set_complement(em_ante, tab.domain, ev.eps)
    fail_all = set_complement(set_union(matched, vac, ev.eps), tab.domain, ev.eps)
    hor = ast.horizon(p)
    und_region = undetermined_region(tab.domain, hor, ev.eps)
    und = set_intersect(fail_all, und_region, ev.eps)
    fail = set_difference(fail_all, und_region, tab.domain, ev.eps)
    return MatchReport(
        name=name if name is not None else (p.name or "assertion"),
        domain=tab.domain,
        nonvacuous=matched,
        vacuous=vac,
        fail=fail,
        undetermined=und,
        horizon=hor,
    )
