"""Atom truth-interval extraction tests: predicates, booleans, events."""

import pytest

from amscheck import (
    Interval,
    IntervalSet,
    Trace,
    TraceError,
    UnknownSignalError,
    bool_truth,
    build_table,
    event_truth,
    parse_property,
    porv_truth,
)
from amscheck import ast as A
from amscheck.atoms import bexpr_truth
from amscheck.wavegen import fixture_trace

MS = 1e-3


def S(*spans):
    return IntervalSet(Interval(*sp) for sp in spans)


def porv_of(text):
    """Antecedent predicate of '{text} |-> {x};'."""
    p = parse_property("{%s} |-> {x};" % text)
    b = p.antecedent.bexpr
    assert isinstance(b, A.Porv)
    return b


def line_trace():
    # v(t) = t on [0:10]
    return Trace([0.0, 10.0], {"v": [0.0, 10.0], "x": [0.0, 0.0]},
                 kinds={"x": "boolean"})


class TestPorv:
    def test_strict_crossing_is_open(self):
        got = porv_truth(line_trace(), porv_of("V(v)>5"))
        assert got.approx_eq(S((5.0, 10.0, False, True)))

    def test_weak_crossing_is_closed(self):
        got = porv_truth(line_trace(), porv_of("V(v)>=5"))
        assert got.approx_eq(S((5.0, 10.0, True, True)))

    def test_constant_true(self):
        got = porv_truth(line_trace(), porv_of("V(v)>-1"))
        assert got.approx_eq(S((0.0, 10.0)))

    def test_constant_false(self):
        assert porv_truth(line_trace(), porv_of("V(v)>11")).is_empty

    def test_tangential_touch(self):
        # v dips to exactly 5 at t=1 and comes back up
        tr = Trace([0.0, 1.0, 2.0], {"v": [6.0, 5.0, 6.0], "x": [0, 0, 0]},
                   kinds={"x": "boolean"})
        weak = porv_truth(tr, porv_of("V(v)>=5"))
        assert weak.approx_eq(S((0.0, 2.0)))
        strict = porv_truth(tr, porv_of("V(v)>5"))
        assert strict.approx_eq(S((0.0, 1.0, True, False), (1.0, 2.0, False, True)))

    def test_touch_from_below(self):
        # v rises to exactly 5 at t=1 then falls: >= gives a point, > nothing
        tr = Trace([0.0, 1.0, 2.0], {"v": [4.0, 5.0, 4.0], "x": [0, 0, 0]},
                   kinds={"x": "boolean"})
        weak = porv_truth(tr, porv_of("V(v)>=5"))
        assert weak.approx_eq(S((1.0, 1.0)))
        assert porv_truth(tr, porv_of("V(v)>5")).is_empty

    def test_affine_combination(self):
        # 2*v - 10 > 0 is the same cut as v > 5
        got = porv_truth(line_trace(), porv_of("2*V(v)-10 > 0"))
        assert got.approx_eq(S((5.0, 10.0, False, True)))

    def test_unknown_signal(self):
        with pytest.raises(UnknownSignalError):
            porv_truth(line_trace(), porv_of("V(w)>1"))

    def test_settling_band_components(self):
        """Packaged settling waveform: the in-band predicate holds on four
        spans with endpoints on exact samples."""
        tr = fixture_trace("settling")
        band = parse_property(
            "{V(Vout)>=1.14 && V(Vout)<=1.26} |-> {x};"
        ).antecedent.bexpr
        got = bexpr_truth(_table_for(tr, band), band)
        want = S(
            (1.6 * MS, 2.03 * MS),
            (2.41 * MS, 2.66 * MS),
            (3.04 * MS, 3.55 * MS),
            (3.8 * MS, 7.9 * MS),
        )
        assert got.approx_eq(want, tol=1e-9)


def _table_for(trace, bexpr):
    """Build an atom table covering just this boolean expression."""
    p = A.Property(A.SeqBool(bexpr), A.SeqBool(bexpr))
    return build_table(trace, p)


class TestBool:
    def square_trace(self):
        t = [0, 1, 2, 3, 4, 5, 6, 7]
        d = [0, 1, 0, 1, 0, 1, 0, 0]
        return Trace(t, {"d": d}, kinds={"d": "boolean"})

    def test_hold_intervals_right_open(self):
        got = bool_truth(self.square_trace(), "d")
        want = S((1, 2, True, False), (3, 4, True, False), (5, 6, True, False))
        assert got.approx_eq(want)

    def test_true_to_end_is_closed(self):
        tr = Trace([0, 1, 2], {"d": [0, 1, 1]}, kinds={"d": "boolean"})
        assert bool_truth(tr, "d").approx_eq(S((1, 2)))

    def test_analog_signal_rejected(self):
        with pytest.raises(TraceError):
            bool_truth(line_trace(), "v")


class TestEvents:
    def event_of(self, text):
        p = parse_property("%s |-> {x};" % text)
        return p.antecedent.bexpr

    def test_rising_porv_event(self):
        got = event_truth(line_trace(), self.event_of("@+{V(v)>5}"))
        assert got.approx_eq(S((5.0, 5.0)))

    def test_no_event_at_trace_start(self):
        # already true at t=0: there is no onset instant
        got = event_truth(line_trace(), self.event_of("@+{V(v)>-1}"))
        assert got.is_empty

    def test_falling_event(self):
        tr = Trace([0.0, 10.0], {"v": [10.0, 0.0], "x": [0, 0]},
                   kinds={"x": "boolean"})
        got = event_truth(tr, self.event_of("@-{V(v)>5}"))
        assert got.approx_eq(S((5.0, 5.0)))

    def test_any_edge_on_square_wave(self):
        tr = TestBool().square_trace()
        got = event_truth(tr, self.event_of("@{d==1}"))
        want = S((1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (6, 6))
        assert got.approx_eq(want)

    def test_fall_at_closed_trace_end_not_counted(self):
        # d never falls inside the domain; switching off exactly at the end
        # sample is a boundary artifact, not an edge
        tr = Trace([0, 1, 2], {"d": [0, 1, 1]}, kinds={"d": "boolean"})
        got = event_truth(tr, self.event_of("@{d==1}"))
        assert got.approx_eq(S((1, 1)))


class TestBexpr:
    def test_contradiction_is_empty(self):
        tr = line_trace()
        b = parse_property("{V(v)>5 && V(v)<=5} |-> {x};").antecedent.bexpr
        assert bexpr_truth(_table_for(tr, b), b).is_empty

    def test_disjunction(self):
        tr = line_trace()
        b = parse_property("{V(v)>8 OR V(v)<=2} |-> {x};").antecedent.bexpr
        got = bexpr_truth(_table_for(tr, b), b)
        assert got.approx_eq(S((0, 2, True, True), (8, 10, False, True)))

    def test_event_conjoined_with_condition(self):
        # event fires at 5; the extra conjunct is true there
        tr = line_trace()
        b = parse_property("{@+{V(v)>5} && V(v)>=1} |-> {x};").antecedent.bexpr
        got = bexpr_truth(_table_for(tr, b), b)
        assert got.approx_eq(S((5.0, 5.0)))

    def test_event_gated_out_by_condition(self):
        tr = line_trace()
        b = parse_property("{@+{V(v)>5} && V(v)>=6} |-> {x};").antecedent.bexpr
        assert bexpr_truth(_table_for(tr, b), b).is_empty


class TestTable:
    def test_table_covers_all_atoms(self):
        tr = fixture_trace("settling")
        p = parse_property(
            "@+{V(Vout)>0.12} |-> ##[0.001:0.004] "
            "{V(Vout)>=1.14 && V(Vout)<=1.26}[*0.002];"
        )
        tab = build_table(tr, p)
        assert len(tab.atoms()) == 3

    def test_shared_atoms_deduplicated(self):
        tr = line_trace()
        p1 = parse_property("{V(v)>5} |-> {x};", name="p1")
        p2 = parse_property("{V(v)>5} |-> {x};", name="p2")
        tab = build_table(tr, [p1, p2])
        assert len(tab.atoms()) == 2  # the porv and the boolean signal
