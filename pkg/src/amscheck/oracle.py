"""Brute-force ground truth on a dense time grid.

Evaluates the satisfaction relations directly: quantifiers over time
windows become loops over grid indices, begin matches are found by
exhaustive search.  Shares no code with the interval engine beyond the
trace and the syntax tree, so agreement between the two is evidence,
not tautology.  Cost is quadratic-ish in grid length; this is a test
instrument, not a checker.
"""

from __future__ import annotations

import math

import numpy as np

from . import ast
from .errors import GridError, TraceError
from .expr import eval_expr, expr_signals
from .trace import Trace

_TOL = 1e-9


def _bounds_of(p: ast.Property) -> list[float]:
    out = []

    def seq(s):
        if isinstance(s, ast.SeqBool):
            return
        if isinstance(s, ast.Repeat):
            out.append(s.dur)
            seq(s.seq)
        elif isinstance(s, ast.RepeatUntil):
            out.extend([s.lo, s.hi])
            seq(s.seq)
            seq(s.cont)
        elif isinstance(s, ast.Delay):
            out.extend([s.lo, s.hi])
            seq(s.left)
            seq(s.right)

    seq(p.antecedent)
    seq(p.consequent)
    if p.delay is not None:
        out.extend(p.delay)
    return [b for b in out if b > 0]


def _grid(trace: Trace, p: ast.Property, dt: float) -> np.ndarray:
    bounds = _bounds_of(p)
    if bounds and dt > min(bounds) / 10 + _TOL:
        raise GridError(f"dt={dt} too coarse for smallest bound {min(bounds)}")
    times = trace.times()
    min_gap = float(np.min(np.diff(times)))
    if dt > min_gap + _TOL:
        raise GridError(f"dt={dt} exceeds the smallest sample spacing {min_gap}")
    t0, t1 = trace.domain.lo, trace.domain.hi
    n = int(math.floor((t1 - t0) / dt + _TOL))
    return t0 + dt * np.arange(n + 1)


class _GridEval:
    def __init__(self, trace: Trace, grid: np.ndarray, dt: float, slack: float = 0.0):
        self.trace = trace
        self.grid = grid
        self.dt = dt
        # signed window slack: >0 widens every quantifier window (an
        # over-approximation), <0 narrows them (an under-approximation)
        self.slack = slack
        self.n = len(grid)
        self._sig: dict[str, np.ndarray] = {}
        self._bex: dict[ast.BExpr, np.ndarray] = {}
        self._em: dict[ast.SeqExpr, np.ndarray] = {}
        self._bm: dict[tuple[ast.SeqExpr, bytes], np.ndarray] = {}

    # -- signal sampling ------------------------------------------------

    def signal(self, name: str) -> np.ndarray:
        if name not in self._sig:
            times = self.trace.times()
            vals = self.trace.values(name)
            if self.trace.kinds[name] == "analog":
                self._sig[name] = np.interp(self.grid, times, vals)
            else:
                idx = np.searchsorted(times, self.grid, side="right") - 1
                self._sig[name] = vals[np.clip(idx, 0, len(vals) - 1)]
        return self._sig[name]

    # -- index windows --------------------------------------------------

    def _offsets(self, a: float, b: float) -> tuple[int, int]:
        lo = math.ceil(a / self.dt - _TOL)
        hi = math.floor(b / self.dt + _TOL)
        if hi < lo:
            lo = hi = round(0.5 * (a + b) / self.dt)
        return lo, hi

    def _widen(self, a: float, b: float) -> tuple[float, float] | None:
        a2 = max(0.0, a - self.slack)
        b2 = b + self.slack
        if b2 < a2:
            return None
        return a2, b2

    def _any_back(self, arr: np.ndarray, a: float, b: float) -> np.ndarray:
        """out[k] = any arr[j] with t_k - t_j in [a:b]."""
        win = self._widen(a, b)
        if win is None:
            return np.zeros(self.n, dtype=bool)
        lo, hi = self._offsets(*win)
        c = np.concatenate(([0], np.cumsum(arr.astype(np.int64))))
        k = np.arange(self.n)
        j1 = np.minimum(k - lo, self.n - 1)
        j0 = np.maximum(k - hi, 0)
        ok = j1 >= j0
        cnt = c[np.clip(j1, -1, self.n - 1) + 1] - c[np.clip(j0, 0, self.n)]
        return ok & (cnt > 0)

    def _any_fwd(self, arr: np.ndarray, a: float, b: float) -> np.ndarray:
        """out[k] = any arr[j] with t_j - t_k in [a:b]."""
        win = self._widen(a, b)
        if win is None:
            return np.zeros(self.n, dtype=bool)
        lo, hi = self._offsets(*win)
        c = np.concatenate(([0], np.cumsum(arr.astype(np.int64))))
        k = np.arange(self.n)
        j0 = np.maximum(k + lo, 0)
        j1 = np.minimum(k + hi, self.n - 1)
        ok = (j0 <= j1) & (j0 <= self.n - 1)
        cnt = c[np.clip(j1, -1, self.n - 1) + 1] - c[np.clip(j0, 0, self.n)]
        return ok & (cnt > 0)

    def _all_back(self, arr: np.ndarray, a: float) -> np.ndarray:
        """out[k] = all arr[j] with t_k - t_j in [0:a] (window fully on grid)."""
        w = math.floor(max(0.0, a - self.slack) / self.dt + _TOL)
        bad = np.concatenate(([0], np.cumsum((~arr).astype(np.int64))))
        k = np.arange(self.n)
        j0 = k - w
        cnt = bad[k + 1] - bad[np.maximum(j0, 0)]
        return (j0 >= 0) & (cnt == 0)

    def _shift_back(self, arr: np.ndarray, a: float) -> np.ndarray:
        """out[j] = arr[j + round(a/dt)] (exact pull of end instants to begins)."""
        s = round(a / self.dt)
        out = np.zeros(self.n, dtype=bool)
        if s < self.n:
            if s == 0:
                return arr.copy()
            out[:-s] = arr[s:]
        return out

    # -- boolean layer --------------------------------------------------

    def bexpr(self, b: ast.BExpr) -> np.ndarray:
        got = self._bex.get(b)
        if got is None:
            got = self._bex[b] = self._bexpr(b)
        return got

    def _bexpr(self, b: ast.BExpr) -> np.ndarray:
        if isinstance(b, ast.Porv):
            env = {s: self.signal(s) for s in expr_signals(b.expr)}
            for s in env:
                if self.trace.kinds[s] != "analog":
                    raise TraceError(f"V({s}) reads a boolean signal")
            g = eval_expr(b.expr, env)
            g = np.broadcast_to(np.asarray(g, dtype=float), (self.n,))
            return g >= 0 if b.rel == ">=" else g > 0
        if isinstance(b, ast.BoolSignal):
            if self.trace.kinds.get(b.name) != "boolean":
                raise TraceError(f"signal {b.name!r} is not boolean")
            return self.signal(b.name) == 1.0
        if isinstance(b, ast.EventAtom):
            p = self.bexpr(b.pred)
            rose = np.zeros(self.n, dtype=bool)
            fell = np.zeros(self.n, dtype=bool)
            rose[1:] = p[1:] & ~p[:-1]
            fell[1:] = ~p[1:] & p[:-1]
            if b.edge == "pos":
                return rose
            if b.edge == "neg":
                return fell
            return rose | fell
        if isinstance(b, ast.Not):
            return ~self.bexpr(b.operand)
        if isinstance(b, ast.And):
            out = self.bexpr(b.terms[0]).copy()
            for t in b.terms[1:]:
                out &= self.bexpr(t)
            return out
        if isinstance(b, ast.Or):
            return self.bexpr(b.left) | self.bexpr(b.right)
        raise TypeError(f"no grid semantics for {type(b).__name__}")

    # -- sequence layer -------------------------------------------------

    def end(self, s: ast.SeqExpr) -> np.ndarray:
        got = self._em.get(s)
        if got is None:
            got = self._em[s] = self._end(s)
        return got

    def _end(self, s: ast.SeqExpr) -> np.ndarray:
        if isinstance(s, ast.SeqBool):
            return self.bexpr(s.bexpr)
        if isinstance(s, ast.Repeat):
            return self._all_back(self.end(s.seq), s.dur)
        if isinstance(s, ast.Delay):
            reach = self._any_back(self.end(s.left), s.lo, s.hi)
            return reach & self.end(s.right)
        if isinstance(s, ast.RepeatUntil):
            return self._all_back(self.end(s.seq), s.lo) & self.end(s.cont)
        raise TypeError(f"no grid semantics for {type(s).__name__}")

    def begin(self, s: ast.SeqExpr, restrict: np.ndarray) -> np.ndarray:
        key = (s, restrict.tobytes())
        got = self._bm.get(key)
        if got is None:
            got = self._bm[key] = self._begin(s, restrict)
        return got

    def _begin(self, s: ast.SeqExpr, restrict: np.ndarray) -> np.ndarray:
        if isinstance(s, ast.SeqBool):
            return self.bexpr(s.bexpr) & restrict
        ends = restrict & self.end(s)
        if isinstance(s, ast.Repeat):
            return self.begin(s.seq, self._shift_back(ends, s.dur))
        if isinstance(s, ast.Delay):
            pulled = self._any_fwd(ends, s.lo, s.hi) & self.end(s.left)
            return self.begin(s.left, pulled)
        if isinstance(s, ast.RepeatUntil):
            pulled = self._any_fwd(ends, s.lo, s.hi) & self.end(s.seq)
            return self.begin(s.seq, pulled)
        raise TypeError(f"no grid semantics for {type(s).__name__}")


def _seq_nodes(s: ast.SeqExpr) -> list:
    out = [s]
    if isinstance(s, ast.Repeat):
        out += _seq_nodes(s.seq)
    elif isinstance(s, ast.RepeatUntil):
        out += _seq_nodes(s.seq) + _seq_nodes(s.cont)
    elif isinstance(s, ast.Delay):
        out += _seq_nodes(s.left) + _seq_nodes(s.right)
    return out


def _bexpr_has_event(b: ast.BExpr) -> bool:
    if isinstance(b, ast.EventAtom):
        return True
    if isinstance(b, ast.Not):
        return _bexpr_has_event(b.operand)
    if isinstance(b, ast.And):
        return any(_bexpr_has_event(t) for t in b.terms)
    if isinstance(b, ast.Or):
        return _bexpr_has_event(b.left) or _bexpr_has_event(b.right)
    return False


def _seq_has_event(s: ast.SeqExpr) -> bool:
    if isinstance(s, ast.SeqBool):
        return _bexpr_has_event(s.bexpr)
    return any(_seq_has_event(c) for c in _seq_nodes(s)[1:])


def _event_preds(b: ast.BExpr, out: list) -> None:
    if isinstance(b, ast.EventAtom):
        if not _bexpr_has_event(b.pred):
            out.append(b.pred)
        _event_preds(b.pred, out)
    elif isinstance(b, ast.Not):
        _event_preds(b.operand, out)
    elif isinstance(b, ast.And):
        for t in b.terms:
            _event_preds(t, out)
    elif isinstance(b, ast.Or):
        _event_preds(b.left, out)
        _event_preds(b.right, out)


def _narrow_run(vec: np.ndarray, dt: float, dt_f: float):
    """Narrowest constant run a dt grid is not guaranteed to sample.

    Only the run touching the grid start is exempt: the first grid point
    sits exactly on the domain edge, while the last one can fall up to
    dt short of it.
    """
    if len(vec) < 2:
        return None
    change = np.nonzero(vec[1:] != vec[:-1])[0]
    if len(change) == 0:
        return None
    edges = np.concatenate((change, [len(vec) - 1]))
    counts = np.diff(edges)
    if len(counts) == 0:
        return None
    k = int(np.argmin(counts))
    width = float(counts[k]) * dt_f
    if width < dt + 2 * dt_f:
        return width, int(edges[k] + 1)
    return None


def _narrow_atom_feature(trace: Trace, p: ast.Property, thresh: float):
    """Exact feature widths of every predicate truth set.

    Truth components and gaps come from the interval layer (linear
    crossing solves, not grid samples), so a feature narrower than the
    grid step cannot hide between probe points.  The run touching the
    domain start is exempt, as in _narrow_run.
    """
    from .atoms import build_table

    tab = build_table(trace, p)
    t0, t1 = trace.domain.lo, trace.domain.hi
    for a in tab.atoms():
        if isinstance(a, ast.EventAtom):
            continue
        comps = tab.get(a).items
        cuts = [t0]
        for c in comps:
            if c.hi - c.lo < thresh and c.lo > t0 + _TOL:
                return c.hi - c.lo, c.lo
            if c.lo > cuts[-1]:
                cuts.append(c.lo)
            if c.hi > cuts[-1]:
                cuts.append(c.hi)
        if t1 > cuts[-1]:
            cuts.append(t1)
        for lo, hi in zip(cuts[1:-1], cuts[2:]):
            if hi - lo < thresh:
                return hi - lo, lo
    return None


def check_resolution(trace: Trace, p: ast.Property, dt: float, refine: int = 8) -> None:
    """Raise GridError when a dt grid can miss a truth feature entirely.

    Quantified windows amplify an unseen feature: a sub-dt gap in a
    repeated predicate shifts a whole run boundary, a sub-dt match run
    escapes a delay window.  Feature widths are measured on a grid
    refined by ``refine``; event spike vectors are exempt (their
    predicates are what must be resolvable).
    """
    dt_f = dt / refine
    hit = _narrow_atom_feature(trace, p, dt + 2 * dt_f)
    if hit is not None:
        width, where = hit
        raise GridError(
            f"dt={dt} can step over a predicate feature of width "
            f"{width:.3g} near t={where:.6g}"
        )
    t0, t1 = trace.domain.lo, trace.domain.hi
    n = int(math.floor((t1 - t0) / dt_f + _TOL))
    grid = t0 + dt_f * np.arange(n + 1)
    ev = _GridEval(trace, grid, dt_f)
    nodes = _seq_nodes(p.antecedent) + _seq_nodes(p.consequent)
    vecs = [ev.end(s) for s in nodes if not _seq_has_event(s)]
    preds: list[ast.BExpr] = []
    for s in nodes:
        if isinstance(s, ast.SeqBool):
            _event_preds(s.bexpr, preds)
    vecs += [ev.bexpr(q) for q in preds]
    if p.delay is not None and not _seq_has_event(p.consequent):
        vecs.append(ev.begin(p.consequent, np.ones(len(grid), dtype=bool)))
    for vec in vecs:
        hit = _narrow_run(vec, dt, dt_f)
        if hit is not None:
            width, idx = hit
            raise GridError(
                f"dt={dt} can step over a truth feature of width about "
                f"{width:.3g} near t={float(grid[idx]):.6g}"
            )


def grid_resolves(trace: Trace, p: ast.Property, dt: float, refine: int = 8) -> bool:
    """True when the dt grid is fine enough to see every truth feature."""
    try:
        check_resolution(trace, p, dt, refine)
    except GridError:
        return False
    return True


def oracle_classify(trace: Trace, p: ast.Property, dt: float, slack: float | None = None):
    """Per-grid-point verdicts. Returns (grid times, list of kinds).

    Each point is judged twice, once with every quantifier window
    widened by ``slack`` and once narrowed by it.  A verdict is issued
    only when both sides agree; where they differ the point is within
    grid slack of a window or duration bound and the kind is
    "uncertain".  slack defaults to 3*dt, covering event placement,
    index rounding, and one composed boundary shift.  slack=0 gives the
    plain single-grid reading.
    """
    ast.validate(p)
    grid = _grid(trace, p, dt)
    check_resolution(trace, p, dt)
    if slack is None:
        slack = 3.0 * dt

    def side(s: float):
        ev = _GridEval(trace, grid, dt, slack=s)
        em = ev.end(p.antecedent)
        bm = ev.begin(p.consequent, np.ones(len(grid), dtype=bool))
        if p.delay is not None:
            return em, ev._any_fwd(bm, p.delay[0], p.delay[1])
        return em, bm

    em_lib, found_lib = side(slack)
    em_cons, found_cons = (em_lib, found_lib) if slack == 0 else side(-slack)
    kinds = []
    for k in range(len(grid)):
        if not em_lib[k]:
            kinds.append("vacuous")
        elif em_cons[k]:
            if found_cons[k]:
                kinds.append("match")
            elif not found_lib[k]:
                kinds.append("fail")
            else:
                kinds.append("uncertain")
        else:
            kinds.append("uncertain")
    return grid, kinds
