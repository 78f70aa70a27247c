"""Unit and randomized-law tests for the interval set layer."""

import random

import pytest

from amscheck import (
    Interval,
    IntervalSet,
    InvalidDelayError,
    minkowski_diff,
    minkowski_diff_set,
    minkowski_sum,
    minkowski_sum_set,
    set_complement,
    set_difference,
    set_intersect,
    set_union,
)

MS = 1e-3


def I(lo, hi, lc=True, hc=True):
    return Interval(lo, hi, lc, hc)


def S(*spans):
    """Build an IntervalSet from (lo, hi) or (lo, hi, lc, hc) tuples."""
    return IntervalSet(I(*sp) for sp in spans)


def subset(a, b, domain):
    return set_difference(a, b, domain).is_empty


class TestIntervalBasics:
    def test_point_interval(self):
        p = I(0.7 * MS, 0.7 * MS)
        assert p.is_point
        assert not p.is_empty
        assert p.length == 0.0

    def test_empty_when_reversed(self):
        assert I(2.0, 1.0).is_empty

    def test_open_point_is_empty(self):
        # a degenerate span needs both endpoints closed to contain anything
        assert I(1.0, 1.0, True, False).is_empty
        assert I(1.0, 1.0, False, True).is_empty

    def test_contains_respects_closure(self):
        iv = I(1.0, 2.0, False, True)
        assert not iv.contains(1.0)
        assert iv.contains(2.0)
        assert iv.contains(1.5)

    def test_intersect(self):
        got = I(1.0, 4.0).intersect(I(3.0, 6.0))
        assert got.approx_eq(I(3.0, 4.0))

    def test_str_rendering(self):
        assert str(I(1.0, 2.0, False, True)) == "(1:2]"


class TestMinkowski:
    def test_sum_basic(self):
        assert minkowski_sum(I(1.0, 2.0), 0.5, 1.0).approx_eq(I(1.5, 3.0))

    def test_sum_point_window(self):
        # delaying a point match by a window spreads it to the window width
        got = minkowski_sum(I(0.7 * MS, 0.7 * MS), 1 * MS, 4 * MS)
        assert got.approx_eq(I(1.7 * MS, 4.7 * MS))

    def test_sum_zero_is_identity(self):
        iv = I(0.25, 8.5, False, True)
        assert minkowski_sum(iv, 0.0, 0.0).approx_eq(iv)

    def test_diff_basic(self):
        got = minkowski_diff(I(3.8 * MS, 5.9 * MS), 1 * MS, 4 * MS)
        assert got.approx_eq(I(-0.2 * MS, 4.9 * MS))

    def test_diff_may_cross_zero(self):
        assert minkowski_diff(I(2.0, 3.0), 2.0, 4.0).approx_eq(I(-2.0, 1.0))

    def test_flags_preserved(self):
        iv = I(1.0, 2.0, False, True)
        s = minkowski_sum(iv, 0.5, 0.5)
        d = minkowski_diff(iv, 0.5, 0.5)
        assert (s.lo_closed, s.hi_closed) == (False, True)
        assert (d.lo_closed, d.hi_closed) == (False, True)

    @pytest.mark.parametrize("c,d", [(-1.0, 2.0), (3.0, 2.0), (float("nan"), 1.0)])
    def test_invalid_window_rejected(self, c, d):
        with pytest.raises(InvalidDelayError):
            minkowski_sum(I(0.0, 1.0), c, d)
        with pytest.raises(InvalidDelayError):
            minkowski_diff(I(0.0, 1.0), c, d)

    def test_set_variants_merge_overlaps(self):
        # widening by the window can fuse neighbouring components
        a = S((0.0, 1.0), (1.5, 2.5))
        got = minkowski_sum_set(a, 0.0, 1.0)
        assert got.approx_eq(S((0.0, 3.5)))


class TestSetOps:
    def test_intersect_basic(self):
        assert set_intersect(S((1, 4)), S((3, 6))).approx_eq(S((3, 4)))

    def test_intersect_multi(self):
        got = set_intersect(S((0, 1), (2, 3)), S((0.5, 2.5)))
        assert got.approx_eq(S((0.5, 1), (2, 2.5)))

    def test_union_merges_touching(self):
        got = set_union(S((1, 2)), S((2, 3, False, True)))
        assert got.approx_eq(S((1, 3)))

    def test_union_keeps_true_gap(self):
        got = set_union(S((1, 2, True, False)), S((2, 3, False, True)))
        assert len(got.items) == 2

    def test_complement_flips_closure(self):
        got = set_complement(S((1, 2)), I(0, 10))
        assert got.approx_eq(S((0, 1, True, False), (2, 10, False, True)))

    def test_complement_of_empty_is_domain(self):
        assert set_complement(IntervalSet(), I(0, 5)).approx_eq(S((0, 5)))

    def test_difference(self):
        dom = I(0, 10)
        got = set_difference(S((0, 10)), S((4, 6)), dom)
        assert got.approx_eq(S((0, 4, True, False), (6, 10, False, True)))

    def test_normalization_sorts_and_merges(self):
        s = IntervalSet([I(5, 6), I(0, 1), I(0.5, 2)])
        assert s.approx_eq(S((0, 2), (5, 6)))

    def test_empty_set(self):
        assert IntervalSet().is_empty
        assert set_intersect(S((0, 1)), S((2, 3))).is_empty


# Randomized algebraic laws.  Endpoints are drawn from a coarse lattice so
# exact-touch cases occur often; flags are random.  Each law application
# counts as one case and the acceptance suite requires >= 10^4 in total.

DOMAIN = Interval(0.0, 10.0)


def rand_interval(rng: random.Random) -> Interval:
    if rng.random() < 0.7:
        lo = rng.randrange(0, 41) * 0.25
        hi = lo + rng.randrange(0, 17) * 0.25
    else:
        lo = rng.uniform(0.0, 10.0)
        hi = lo + rng.uniform(0.0, 4.0)
    hi = min(hi, 10.0)
    return Interval(lo, hi, rng.random() < 0.5, rng.random() < 0.5)


def rand_set(rng: random.Random) -> IntervalSet:
    return IntervalSet(rand_interval(rng) for _ in range(rng.randrange(0, 5)))


def run_law_suite(n_triples: int, seed: int = 20240917) -> int:
    """Check the interval algebra laws on random sets; returns cases run."""
    rng = random.Random(seed)
    cases = 0
    for _ in range(n_triples):
        a, b, c = rand_set(rng), rand_set(rng), rand_set(rng)

        norm = IntervalSet(a.items)
        assert norm.approx_eq(a), f"normalization not idempotent: {a}"
        cases += 1

        assert set_union(a, b).approx_eq(set_union(b, a))
        assert set_intersect(a, b).approx_eq(set_intersect(b, a))
        cases += 2

        assert set_union(set_union(a, b), c).approx_eq(set_union(a, set_union(b, c)))
        assert set_intersect(set_intersect(a, b), c).approx_eq(
            set_intersect(a, set_intersect(b, c))
        )
        cases += 2

        assert set_intersect(a, set_union(b, c)).approx_eq(
            set_union(set_intersect(a, b), set_intersect(a, c))
        )
        cases += 1

        ca = set_complement(a, DOMAIN)
        assert set_complement(ca, DOMAIN).approx_eq(set_intersect(a, IntervalSet([DOMAIN])))
        cases += 1

        ab = set_intersect(set_union(a, b), IntervalSet([DOMAIN]))
        demorgan = set_complement(ab, DOMAIN)
        assert demorgan.approx_eq(
            set_intersect(set_complement(a, DOMAIN), set_complement(b, DOMAIN))
        )
        cases += 1

        assert set_intersect(a, ca).is_empty
        assert set_union(set_intersect(a, IntervalSet([DOMAIN])), ca).approx_eq(
            IntervalSet([DOMAIN])
        )
        cases += 2

        lo_w = rng.randrange(0, 9) * 0.25
        hi_w = lo_w + rng.randrange(0, 9) * 0.25
        widened = minkowski_sum_set(a, lo_w, hi_w)
        back = minkowski_diff_set(widened, lo_w, hi_w)
        wide = Interval(-100.0, 100.0)
        assert subset(a, back, wide), f"shift round-trip lost points: {a}"
        cases += 1
    return cases


def test_algebraic_laws_randomized():
    cases = run_law_suite(300)
    assert cases >= 3000
