"""Streaming checker tests: incremental verdicts and offline agreement."""

import pytest

from amscheck import (
    Interval,
    IntervalSet,
    ProtocolError,
    Session,
    assertion_match,
    build_table,
    horizon,
    open_session,
    parse_property,
    set_union,
)
from amscheck.wavegen import fixture_trace

MS = 1e-3

SETTLING = (
    "@+{V(Vout)>0.12} |-> ##[0.001:0.004] "
    "{V(Vout)>=1.14 && V(Vout)<=1.26}[*0.002];"
)


def stream(session, trace):
    out = []
    for i in range(len(trace)):
        t, vals = trace.sample(i)
        out.extend(session.feed(t, vals))
    return out


def union_of(verdicts, kinds):
    s = IntervalSet()
    for v in verdicts:
        if v.kind in kinds:
            s = set_union(s, IntervalSet([Interval(*v.interval)])) if isinstance(
                v.interval, tuple
            ) else set_union(s, IntervalSet([v.interval]))
    return s


class TestSettlingStream:
    def test_match_verdict_timing(self):
        tr = fixture_trace("settling")
        p = parse_property(SETTLING, name="settling")
        sess = Session([p], {"Vout": "analog"})
        live = stream(sess, tr)
        # the match at 0.7ms becomes decidable once the horizon has passed:
        # first sample at or after 0.7ms + 6ms
        matches = [v for v in live if v.kind == "match"]
        assert len(matches) == 1
        assert matches[0].interval.approx_eq(Interval(0.7 * MS, 0.7 * MS))
        assert matches[0].decided_at == pytest.approx(6.8 * MS)

    def test_vacuous_emitted_at_finalize(self):
        tr = fixture_trace("settling")
        p = parse_property(SETTLING, name="settling")
        sess = Session([p], {"Vout": "analog"})
        live = stream(sess, tr)
        assert not [v for v in live if v.kind == "vacuous-end"]
        final = sess.finalize()
        vac = [v for v in final if v.kind == "vacuous-end"]
        assert len(vac) == 2
        for v in vac:
            assert v.decided_at == pytest.approx(8 * MS)

    def test_agrees_with_offline(self):
        tr = fixture_trace("settling")
        p = parse_property(SETTLING, name="settling")
        sess = Session([p], {"Vout": "analog"})
        verdicts = stream(sess, tr) + sess.finalize()
        rep = assertion_match(p, build_table(tr, p))
        assert union_of(verdicts, {"match"}).approx_eq(rep.nonvacuous)
        assert union_of(verdicts, {"vacuous-end"}).approx_eq(rep.vacuous)
        assert union_of(verdicts, {"fail"}).approx_eq(rep.fail)
        assert union_of(verdicts, {"undetermined"}).approx_eq(rep.undetermined)


class TestEscapeStream:
    def test_fail_fires_when_window_closes(self):
        tr = fixture_trace("delay-escape")
        p = parse_property(
            "@+{V(Vin)>3} |-> ##[0.000002:0.00000425] {V(Vout)>1.8};",
            name="escape",
        )
        sess = Session([p], {"Vin": "analog", "Vout": "analog"})
        live = stream(sess, tr)
        fails = [v for v in live if v.kind == "fail"]
        assert len(fails) == 1
        assert fails[0].interval.approx_eq(Interval(1e-5, 1e-5))
        # first sample past 1e-5 + 4.25us is 1.43e-5
        assert fails[0].decided_at == pytest.approx(1.43e-5)

    def test_failure_does_not_wait_for_finalize(self):
        tr = fixture_trace("delay-escape")
        p = parse_property(
            "@+{V(Vin)>3} |-> ##[0.000002:0.00000425] {V(Vout)>1.8};"
        )
        sess = Session([p], {"Vin": "analog", "Vout": "analog"})
        seen_fail_at = None
        for i in range(len(tr)):
            t, vals = tr.sample(i)
            for v in sess.feed(t, vals):
                if v.kind == "fail" and seen_fail_at is None:
                    seen_fail_at = t
        assert seen_fail_at is not None and seen_fail_at < tr.domain.hi


class TestNeverTriggered:
    def test_all_vacuous_at_finalize(self):
        tr = fixture_trace("settling")
        p = parse_property("@+{V(Vout)>2} |-> {V(Vout)>1};", name="quiet")
        sess = Session([p], {"Vout": "analog"})
        live = stream(sess, tr)
        assert live == []
        final = sess.finalize()
        assert [v.kind for v in final] == ["vacuous-end"]
        assert final[0].interval.approx_eq(tr.domain)


class TestDecidedAtBound:
    def test_latency_within_horizon_plus_step(self):
        """Every verdict lands within one sample step of its horizon."""
        tr = fixture_trace("settling")
        p = parse_property(SETTLING, name="settling")
        hor = horizon(p)
        times = tr.times()
        max_gap = max(
            float(b - a) for a, b in zip(times[:-1], times[1:])
        )
        sess = Session([p], {"Vout": "analog"})
        for v in stream(sess, tr):
            start = v.interval.lo
            assert v.decided_at <= start + hor + max_gap + 1e-12


class TestProtocol:
    def make(self):
        p = parse_property("{V(v)>5} |-> {V(v)>1};")
        return Session([p], {"v": "analog"})

    def test_time_must_advance(self):
        s = self.make()
        s.feed(0.0, {"v": 0.0})
        with pytest.raises(ProtocolError):
            s.feed(0.0, {"v": 1.0})

    def test_missing_signal_value(self):
        s = self.make()
        with pytest.raises(ProtocolError):
            s.feed(0.0, {})

    def test_feed_after_finalize(self):
        s = self.make()
        s.feed(0.0, {"v": 0.0})
        s.feed(1.0, {"v": 1.0})
        s.finalize()
        with pytest.raises(ProtocolError):
            s.feed(2.0, {"v": 2.0})

    def test_unknown_property_signal(self):
        p = parse_property("{V(w)>5} |-> {V(w)>1};")
        with pytest.raises(Exception):
            Session([p], {"v": "analog"})

    def test_positional_values(self):
        p = parse_property("{V(v)>5} |-> {V(v)>1};")
        s = Session([p], ["v"])
        s.feed(0.0, [0.0])
        s.feed(1.0, [6.0])
        assert s.finalize()  # some verdicts exist

    def test_open_session_helper(self):
        p = parse_property("{V(v)>5} |-> {V(v)>1};")
        s = open_session([p], {"v": "analog"})
        assert isinstance(s, Session)


class TestObligations:
    def test_pending_reported_before_horizon(self):
        tr = fixture_trace("settling")
        p = parse_property(SETTLING, name="settling")
        sess = Session([p], {"Vout": "analog"})
        fired = False
        for i in range(len(tr)):
            t, vals = tr.sample(i)
            sess.feed(t, vals)
            if 1 * MS < t < 6 * MS:
                obs = sess.pending_obligations()
                # the 0.7ms trigger is still undecided in this window
                if any(o.component.lo <= 0.7 * MS <= o.component.hi for o in obs):
                    fired = True
        assert fired
