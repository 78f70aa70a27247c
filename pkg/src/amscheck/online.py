"""Streaming assertion checking with horizon-gated verdict emission.

Each assertion has a decision horizon: how far past an instant the
trace must extend before that instant's verdict is final.  As samples
arrive, atom truth runs are extended incrementally; once the stream
frontier passes t + horizon, the classification of t can never change
and is emitted.  Match and fail verdicts therefore come out chunked,
one slice per feed step; vacuous stretches are reported at finalize.

Raw samples are not retained: trackers keep only completed truth runs
plus the previous sample, so memory grows with the number of truth
components, not the number of samples.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast
from .atoms import AtomTable, BoolTracker, PorvTracker, event_points
from .engine import _Evaluator, undetermined_region
from .errors import ProtocolError, UnknownSignalError
from .intervals import TIME_TOL, Interval, IntervalSet, minkowski_diff_set, set_complement, set_difference, set_intersect
from .trace import KINDS


@dataclass(frozen=True)
class Verdict:
    name: str
    kind: str  # match | vacuous-end | fail | undetermined
    interval: Interval
    decided_at: float


@dataclass(frozen=True)
class Obligation:
    name: str
    component: Interval
    deadline: float


class _PropState:
    __slots__ = ("prop", "name", "horizon", "frontier")

    def __init__(self, prop: ast.Property, name: str):
        self.prop = prop
        self.name = name
        self.horizon = ast.horizon(prop)
        self.frontier = float("-inf")


class Session:
    """One streaming run over an ordered sample sequence."""

    def __init__(
        self,
        props: list[ast.Property],
        signals: "dict[str, str] | list[str] | tuple[str, ...]",
        eps: float = TIME_TOL,
    ):
        if isinstance(signals, dict):
            self.kinds = dict(signals)
        else:
            self.kinds = {name: "analog" for name in signals}
        for name, kind in self.kinds.items():
            if kind not in KINDS:
                raise ProtocolError(f"signal {name!r} has unknown kind {kind!r}")
        if not props:
            raise ProtocolError("no assertions to check")
        self.props = []
        for i, p in enumerate(props):
            ast.validate(p)
            for s in ast.property_signals(p):
                if s not in self.kinds:
                    raise UnknownSignalError(f"assertion uses undeclared signal {s!r}")
            self.props.append(_PropState(p, p.name or f"a{i + 1}"))
        self.eps = eps
        self._atoms: list[ast.Atom] = []
        for st in self.props:
            for a in ast.collect_atoms(st.prop):
                if a not in self._atoms:
                    self._atoms.append(a)
        self._trackers: dict[ast.Atom, PorvTracker | BoolTracker] = {}
        for a in self._atoms:
            base = a.pred if isinstance(a, ast.EventAtom) else a
            if base not in self._trackers:
                if isinstance(base, ast.Porv):
                    self._trackers[base] = PorvTracker(base, eps)
                else:
                    if self.kinds.get(base.name) != "boolean":
                        raise ProtocolError(
                            f"signal {base.name!r} used as a proposition must be declared boolean"
                        )
                    self._trackers[base] = BoolTracker(base.name)
        for tr in self._trackers.values():
            if isinstance(tr, PorvTracker):
                for s in tr.signals:
                    if self.kinds.get(s) == "boolean":
                        raise ProtocolError(f"V({s}) reads a signal declared boolean")
        self._t0: float | None = None
        self._t: float | None = None
        self._closed = False

    # -- sample intake --------------------------------------------------

    def _coerce(self, values) -> dict[str, float]:
        names = list(self.kinds)
        if isinstance(values, dict):
            got = values
        else:
            vals = list(values)
            if len(vals) != len(names):
                raise ProtocolError(f"expected {len(names)} values, got {len(vals)}")
            got = dict(zip(names, vals))
        out = {}
        for name in names:
            if name not in got:
                raise ProtocolError(f"sample missing signal {name!r}")
            v = float(got[name])
            if self.kinds[name] == "boolean" and v not in (0.0, 1.0):
                raise ProtocolError(f"boolean signal {name!r} must be 0 or 1, got {v}")
            out[name] = v
        return out

    def feed(self, t: float, values) -> list[Verdict]:
        if self._closed:
            raise ProtocolError("session already finalized")
        t = float(t)
        if self._t is not None and t <= self._t:
            raise ProtocolError(f"time must increase: {t} after {self._t}")
        vals = self._coerce(values)
        if self._t is None:
            self._t0 = t
            for tr in self._trackers.values():
                tr.begin(t, vals)
        else:
            for tr in self._trackers.values():
                tr.advance(t, vals)
        self._t = t
        out: list[Verdict] = []
        table = None
        for st in self.props:
            upto = t - st.horizon
            if upto < self._t0 or upto <= st.frontier:
                continue
            if table is None:
                table = self._snapshot()
            out.extend(self._emit_window(st, table, upto, t))
            st.frontier = upto
        return out

    def finalize(self) -> list[Verdict]:
        """Close the stream and classify everything still pending."""
        if self._closed:
            raise ProtocolError("session already finalized")
        self._closed = True
        if self._t is None:
            return []
        table = self._snapshot()
        end = self._t
        out: list[Verdict] = []
        for st in self.props:
            matched, fail_all, em = self._classify(st, table)
            window = Interval(st.frontier, end, False, True).intersect(table.domain)
            vac = set_complement(em, table.domain, self.eps)
            chunks: list[tuple[Interval, str]] = []
            for comp in vac.items:
                chunks.append((comp, "vacuous-end"))
            if not window.is_empty:
                wset = IntervalSet([window], self.eps)
                und_region = undetermined_region(table.domain, st.horizon, self.eps)
                for comp in set_intersect(matched, wset, self.eps).items:
                    chunks.append((comp, "match"))
                pending_fail = set_intersect(fail_all, wset, self.eps)
                for comp in set_difference(pending_fail, und_region, table.domain, self.eps).items:
                    chunks.append((comp, "fail"))
                for comp in set_intersect(pending_fail, und_region, self.eps).items:
                    chunks.append((comp, "undetermined"))
            chunks.sort(key=lambda c: c[0]._lkey())
            out.extend(Verdict(st.name, kind, comp, end) for comp, kind in chunks)
            st.frontier = end
        return out

    def pending_obligations(self) -> list[Obligation]:
        if self._t is None or self._closed:
            return []
        table = self._snapshot()
        out = []
        for st in self.props:
            em = self._antecedent_em(st, table)
            for comp in em.items:
                if comp.hi > st.frontier:
                    out.append(Obligation(st.name, comp, comp.lo + st.horizon))
        return out

    # -- internals ------------------------------------------------------

    def _snapshot(self) -> AtomTable:
        domain = Interval(self._t0, self._t)
        sets: dict[ast.Atom, IntervalSet] = {}
        comp_cache: dict[ast.Atom, list[Interval]] = {}
        for atom in self._atoms:
            base = atom.pred if isinstance(atom, ast.EventAtom) else atom
            if base not in comp_cache:
                comp_cache[base] = self._trackers[base].components(self._t)
            comps = comp_cache[base]
            if isinstance(atom, ast.EventAtom):
                comps = event_points(comps, domain, atom.edge)
            sets[atom] = IntervalSet(comps, self.eps)
        return AtomTable(domain, sets, self.eps)

    def _antecedent_em(self, st: _PropState, table: AtomTable) -> IntervalSet:
        return _Evaluator(table).end(st.prop.antecedent)

    def _classify(self, st: _PropState, table: AtomTable):
        ev = _Evaluator(table)
        p = st.prop
        em = ev.end(p.antecedent)
        bm = ev.begin(p.consequent, ev.dom_set)
        if p.delay is not None:
            lo, hi = p.delay
            bm = set_intersect(
                minkowski_diff_set(bm, lo, hi, self.eps), ev.dom_set, self.eps
            )
        matched = set_intersect(em, bm, self.eps)
        fail_all = set_difference(em, matched, table.domain, self.eps)
        return matched, fail_all, em

    def _emit_window(
        self, st: _PropState, table: AtomTable, upto: float, now: float
    ) -> list[Verdict]:
        matched, fail_all, _ = self._classify(st, table)
        window = Interval(st.frontier, upto, False, True).intersect(table.domain)
        if window.is_empty:
            return []
        wset = IntervalSet([window], self.eps)
        chunks = [(c, "match") for c in set_intersect(matched, wset, self.eps).items]
        chunks += [(c, "fail") for c in set_intersect(fail_all, wset, self.eps).items]
        chunks.sort(key=lambda c: c[0]._lkey())
        return [Verdict(st.name, kind, comp, now) for comp, kind in chunks]


def open_session(props, signals, eps: float = TIME_TOL) -> Session:
    return Session(props, signals, eps)
