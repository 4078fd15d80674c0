import math

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from textentry.errors import InconsistentInputError, InvalidChoiceCountError, UndefinedMetricError
from textentry.metrics import TaxonomyCounts
from textentry.timing import (
    CostTotals,
    TimingParams,
    aac,
    amortized_bounds,
    amortized_cost,
    complete,
    correction_penalty,
    fitts_time,
    hick_time,
    modification_cost,
    movement_cost,
    penalty_numerator,
)

UNIT = TimingParams()


def mp_log2(x):
    return mpmath.log(x, 2)


def test_fitts_examples():
    assert fitts_time(0, UNIT) == 0.0
    assert fitts_time(1, UNIT) == 1.0
    params = TimingParams(fitts_a=0.5, fitts_b=2)
    assert fitts_time(7, params) == 6.5
    with mpmath.workdps(50):
        assert fitts_time(7, params) == pytest.approx(float(mpmath.mpf("0.5") + 2 * mp_log2(8)), abs=1e-15)
    with pytest.raises(ValueError):
        fitts_time(-1, UNIT)


def test_hick_examples():
    assert hick_time(1, UNIT) == 1.0
    assert hick_time(3, UNIT) == 2.0
    with mpmath.workdps(50):
        expected = float(mpmath.mpf("0.5") * mp_log2(9))
    assert hick_time(8, TimingParams(hick_b=0.5)) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(1.58496, abs=1e-5)
    with pytest.raises(InvalidChoiceCountError):
        hick_time(0, UNIT)


@given(st.integers(0, 500), st.floats(0, 10), st.floats(0.01, 10))
def test_fitts_against_mpmath(d, a, b):
    params = TimingParams(fitts_a=a, fitts_b=b)
    with mpmath.workdps(40):
        expected = mpmath.mpf(a) + mpmath.mpf(b) * mp_log2(d + 1)
    assert fitts_time(d, params) == pytest.approx(float(expected), rel=1e-12, abs=1e-12)


@given(st.integers(1, 499), st.floats(0.01, 10))
def test_hick_and_fitts_strictly_increasing(n, b):
    params = TimingParams(fitts_b=b, hick_b=b)
    assert hick_time(n + 1, params) > hick_time(n, params)
    assert fitts_time(n + 1, params) > fitts_time(n, params)


@given(st.integers(1, 100), st.floats(0.01, 10), st.integers(2, 5))
def test_linear_in_slope(n, b, factor):
    assert hick_time(n, TimingParams(hick_b=b * factor)) == pytest.approx(factor * hick_time(n, TimingParams(hick_b=b)))
    assert fitts_time(n, TimingParams(fitts_b=b * factor)) == pytest.approx(factor * fitts_time(n, TimingParams(fitts_b=b)))


def test_params_validation():
    with pytest.raises(ValueError):
        TimingParams(fitts_b=-1)
    with pytest.raises(ValueError):
        TimingParams(default_candidates=0)
    with pytest.raises(ValueError):
        TimingParams(tf_mode="sum")
    assert UNIT.with_(hick_b=2).hick_b == 2


# -- amortized cost -------------------------------------------------------------


@pytest.mark.parametrize(
    "counts, expected", [((10, 0, 0, 0), 0.0), ((4, 1, 2, 1), 1.0), ((5, 2, 0, 0), 0.4)]
)
def test_amortized_cost(counts, expected):
    assert amortized_cost(TaxonomyCounts(*counts)) == pytest.approx(expected)


def test_amortized_cost_undefined():
    with pytest.raises(UndefinedMetricError):
        amortized_cost(TaxonomyCounts(0, 1, 0, 0))


@pytest.mark.parametrize(
    "args, expected", [((2, 3, 10), (0.2, 0.5)), ((0, 0, 5), (0.0, 0.0)), ((1, 2, 4), (0.25, 0.75))]
)
def test_amortized_bounds(args, expected):
    assert amortized_bounds(*args) == pytest.approx(expected)


@given(st.integers(0, 100), st.integers(0, 100), st.integers(1, 100))
def test_bounds_order(inf0, f_all, c):
    lower, upper = amortized_bounds(inf0, f_all, c)
    assert lower <= upper
    assert (lower == upper) == (f_all == 0)
    assert lower == inf0 / c


# -- correction penalty chain --------------------------------------------------------


def test_penalty_no_errors():
    b = correction_penalty(10, 0, 0, 4, UNIT)
    assert b.p == 0 and b.r == 1


def test_penalty_chain_single_error():
    b = complete(correction_penalty(9, 1, 1, 1, UNIT))
    assert (b.t_h, b.t_f) == (1.0, 1.0)
    assert b.p == pytest.approx(0.2)
    assert b.r == pytest.approx(0.9)
    assert b.m == pytest.approx(2 / 9)
    assert b.aac == pytest.approx(1 / 3)


def test_penalty_all_wrong():
    b = correction_penalty(0, 2, 2, 3, UNIT)
    assert b.t_h == 2.0
    assert b.t_f == pytest.approx(math.log2(3))
    assert b.p == pytest.approx((4 + 2 * math.log2(3)) / 2)
    assert b.r == 0
    with pytest.raises(UndefinedMetricError):
        modification_cost(b)


def test_modification_cost_and_aac_examples():
    assert modification_cost(correction_penalty(10, 0, 0, 1, UNIT)) == 0.0
    half = correction_penalty(1, 1, 1, 1, TimingParams(hick_b=0.5, fitts_b=0.5))
    assert half.p == pytest.approx(0.5) and half.r == 0.5
    assert modification_cost(half) == pytest.approx(1.0)
    assert aac(9, 1, 2 / 9) == pytest.approx(1 / 3)
    assert aac(10, 0, 0.0) == 0.0
    with pytest.raises(UndefinedMetricError):
        aac(0, 1, 0.0)


def test_penalty_rejects_inconsistent_input():
    with pytest.raises(InconsistentInputError):
        correction_penalty(5, 0, 2, 1, UNIT)
    with pytest.raises(UndefinedMetricError):
        correction_penalty(0, 0, 0, 1, UNIT)


def test_tf_modes():
    assert movement_cost(3, UNIT) == pytest.approx(3 * 2.0)
    assert movement_cost(3, UNIT.with_(tf_mode="time-only")) == pytest.approx(2.0)
    assert movement_cost(0, UNIT.with_(fitts_a=5)) == 0.0


def test_penalty_numerator_candidates():
    # per-instance Hick costs, with the default filling missing entries
    params = UNIT.with_(default_candidates=3)
    assert penalty_numerator(3, 2, [1, 7], params) == pytest.approx(1 + 3 + 2 + 2 * math.log2(3))


def test_zero_constants_collapse_aac():
    zero = TimingParams(fitts_a=0, fitts_b=0, hick_b=0)
    b = complete(correction_penalty(7, 3, 5, 4, zero))
    assert b.aac == 3 / 7


valid = st.tuples(
    st.integers(1, 200),  # c
    st.integers(0, 200),  # inf0
    st.integers(0, 50),  # max_dw
    st.integers(1, 20),  # n
    st.floats(0, 5),
    st.floats(0, 5),
    st.floats(0, 5),
)


@given(valid)
def test_algebraic_identities(t):
    c, inf0, max_dw, n, a, fb, hb = t
    assume(inf0 > 0 or max_dw == 0)
    params = TimingParams(fitts_a=a, fitts_b=fb, hick_b=hb)
    b = complete(correction_penalty(c, inf0, max_dw, n, params))
    assert b.m * b.r == pytest.approx(b.p, rel=1e-12, abs=1e-12)
    assert b.aac == pytest.approx(inf0 / c + b.m, rel=1e-12, abs=1e-12)
    # the second form of M divides the numerator by C directly
    direct = (b.t_h * inf0 + (b.t_f * max_dw if max_dw else 0.0)) / c
    assert b.m == pytest.approx(direct, rel=1e-12, abs=1e-12)


@given(st.integers(1, 100), st.integers(0, 50), st.integers(1, 30), st.integers(1, 10))
def test_aac_monotone(c, inf0, max_dw, n):
    def value(i, d):
        return complete(correction_penalty(c, i, d, n, UNIT)).aac

    errors = inf0 + 1  # max_dw > 0 needs at least one error
    assert value(errors + 1, max_dw) >= value(errors, max_dw)
    assert value(errors, max_dw + 1) >= value(errors, max_dw)


def test_totals_sum_before_dividing():
    totals = CostTotals()
    totals.add(4, 1, 5, [1], UNIT)
    totals.add(5, 0, 0, [], UNIT)
    numerator = 1 + 5 * math.log2(6)
    assert totals.p == pytest.approx(numerator / 10)
    assert totals.r == pytest.approx(0.9)
    assert totals.aac == pytest.approx(1 / 9 + numerator / 9)
