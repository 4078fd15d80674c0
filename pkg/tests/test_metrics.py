from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import actions, build_stream, presented_text
from oracles import GAP as ORACLE_GAP
from oracles import all_optimal_alignments, edit_script_distance, recursive_distance
from textentry.errors import NoCorrectionsError, ReplayError, UndefinedMetricError
from textentry.metrics import (
    GAP,
    CpcInputs,
    InputStream,
    Keystroke,
    Kind,
    TaxonomyCounts,
    classify_keystrokes,
    cpc,
    cpc_from_stream,
    derive_cpc_inputs,
    keys_from_text,
    kspc_from_stream,
    kspc_taxonomy,
    levenshtein_distance,
    msd_error_rate_new,
    msd_error_rate_old,
    msd_error_rate_taxonomy,
    optimal_alignments,
    renumber,
    replay,
    total_error_rate,
)

FOX_P = "the quick brown fox"
FOX_T = "the quixck brwn fox"

texts = st.text(alphabet="abc天", max_size=7)


def stream(presented, *events):
    return InputStream(tuple(renumber(events)), presented)


C, BS = Keystroke.char, Keystroke.backspace


# -- keystrokes and streams ---------------------------------------------------


def test_keystroke_validation():
    with pytest.raises(ValueError):
        Keystroke.select(0)
    with pytest.raises(ValueError):
        Keystroke.char("ab")
    with pytest.raises(ValueError):
        Keystroke.char(GAP)
    with pytest.raises(ValueError):
        Keystroke(Kind.BACKSPACE, 3)
    with pytest.raises(ValueError):
        Keystroke.cursor(True)


def test_stream_seq_must_be_contiguous():
    with pytest.raises(ValueError):
        InputStream((Keystroke.char("a", 0), Keystroke.char("b", 2)), "ab")
    with pytest.raises(ValueError):
        InputStream((Keystroke.char("a", 1),), "a")


def test_replay_cursor_and_erasure():
    events = renumber([C("a"), C("c"), Keystroke.cursor(-1), C("b"), Keystroke.cursor(1), BS()])
    rep = replay(events)
    assert rep.transcribed == "ab"
    assert rep.erased_chars == {1}


def test_replay_rejects_impossible_edits():
    with pytest.raises(ReplayError) as err:
        replay(renumber([BS()]))
    assert err.value.seq == 0
    with pytest.raises(ReplayError):
        replay(renumber([C("a"), Keystroke.cursor(2)]))


# -- levenshtein ----------------------------------------------------------------


@pytest.mark.parametrize(
    "p, t, expected",
    [(FOX_P, FOX_T, 2), ("abc", "abc", 0), ("kitten", "sitting", 3), ("", "", 0), ("", "ab", 2)],
)
def test_levenshtein_examples(p, t, expected):
    assert levenshtein_distance(p, t) == expected


def test_kitten_sitting_against_edit_script_search():
    assert edit_script_distance("kitten", "sitting", max_depth=4) == 3
    assert edit_script_distance("kitten", "sitting", max_depth=2) is None


def test_levenshtein_counts_code_points():
    assert levenshtein_distance("中文輸入", "中文輸出") == 1
    assert levenshtein_distance("天", "") == 1


@given(texts, texts)
def test_levenshtein_matches_recursive_oracle(p, t):
    assert levenshtein_distance(p, t) == recursive_distance(p, t)


@given(texts, texts)
def test_levenshtein_metric_properties(p, t):
    d = levenshtein_distance(p, t)
    assert d == levenshtein_distance(t, p)
    assert (d == 0) == (p == t)
    assert d <= max(len(p), len(t))


# -- alignments -----------------------------------------------------------------


def test_fox_alignment():
    result = optimal_alignments(FOX_P, FOX_T, 64)
    assert result.distance == 2
    assert [len(a) for a in result.alignments] == [20]
    assert result.mean_alignment_length == 20
    assert result.alignments[0].render() == ("the qui-ck brown fox", "the quixck br-wn fox")


def test_fox_alignment_matches_oracle():
    oracle = all_optimal_alignments(FOX_P, FOX_T)
    assert len(oracle) == 1
    assert len(oracle[0][0]) == 20


def test_trivial_alignments():
    one = optimal_alignments("a", "a", 64)
    assert one.distance == 0
    assert [a.render() for a in one.alignments] == [("a", "a")]
    assert one.mean_alignment_length == 1

    ins = optimal_alignments("", "ab", 64)
    assert ins.distance == 2
    assert [a.render() for a in ins.alignments] == [("--", "ab")]
    assert ins.mean_alignment_length == 2


def test_gap_marker_never_confused_with_text():
    # a hyphen in the text is a real character, not a gap
    result = optimal_alignments("a-b", "ab", 64)
    assert result.distance == 1
    assert all(a.presented.count(GAP) == 0 for a in result.alignments)
    assert all(a.transcribed.count(GAP) == 1 for a in result.alignments)


def test_enumeration_order_prefers_diagonal_then_delete():
    # "ab" -> "b": delete 'a' is the only optimal script, "ab" -> "ba" has three
    result = optimal_alignments("ab", "ba", 64)
    rendered = [a.render() for a in result.alignments]
    assert rendered[0] == ("ab", "ba")
    assert set(rendered) == {("ab", "ba"), ("ab-", "-ba"), ("-ab", "ba-")}


def test_cap_limits_enumeration():
    assert len(optimal_alignments("ab", "ba", 64).alignments) == 3
    capped = optimal_alignments("ab", "ba", 2)
    # the backtrace starts at the end: diagonal, then deleting the final "b"
    assert [a.render() for a in capped.alignments] == [("ab", "ba"), ("-ab", "ba-")]
    assert capped.mean_alignment_length == Fraction(5, 2)
    with pytest.raises(ValueError):
        optimal_alignments("a", "b", 0)


def _as_oracle(alignment):
    def conv(s):
        return tuple(ORACLE_GAP if ch == GAP else ch for ch in s)

    return conv(alignment.presented), conv(alignment.transcribed)


@settings(max_examples=150)
@given(st.text(alphabet="ab", max_size=5), st.text(alphabet="ab", max_size=5))
def test_alignments_match_oracle_set(p, t):
    result = optimal_alignments(p, t, 10_000)
    mine = [_as_oracle(a) for a in result.alignments]
    oracle = all_optimal_alignments(p, t)
    assert len(mine) == len(set(mine))
    assert set(mine) == set(oracle)
    lengths = [len(a[0]) for a in oracle]
    assert result.mean_alignment_length == Fraction(sum(lengths), len(lengths))


@given(texts, texts)
def test_alignment_invariants(p, t):
    result = optimal_alignments(p, t, 64)
    for a in result.alignments:
        assert len(a.presented) == len(a.transcribed)
        assert max(len(p), len(t)) <= len(a) <= len(p) + len(t)
        assert a.mismatches == result.distance
        assert a.presented.replace(GAP, "") == p
        assert a.transcribed.replace(GAP, "") == t


# -- error rates ----------------------------------------------------------------


def test_msd_rates_examples():
    assert msd_error_rate_old(FOX_P, FOX_T) == pytest.approx(2 / 19 * 100, abs=1e-9)
    assert msd_error_rate_new(FOX_P, FOX_T, 64) == pytest.approx(10.0, abs=1e-9)
    assert msd_error_rate_old("abcd", "abcd") == 0.0
    assert msd_error_rate_old("ab", "") == 100.0
    assert msd_error_rate_new("xyz", "xyz", 64) == 0.0


def test_msd_rate_ab_ba():
    # three optimal alignments: "ab"/"ba" (length 2) and two with a gap in
    # each string (length 3), so the mean length is 8/3
    oracle = all_optimal_alignments("ab", "ba")
    assert sorted(len(a[0]) for a in oracle) == [2, 3, 3]
    assert msd_error_rate_new("ab", "ba", 64) == pytest.approx(75.0, abs=1e-9)
    # with only the first (two-substitution) alignment the rate is 2/2
    assert msd_error_rate_new("ab", "ba", 1) == 100.0


def test_msd_rates_undefined_for_two_empty_strings():
    with pytest.raises(UndefinedMetricError):
        msd_error_rate_old("", "")
    with pytest.raises(UndefinedMetricError):
        msd_error_rate_new("", "", 64)


@given(texts, texts)
def test_new_rate_bounds(p, t):
    if not p and not t:
        return
    d = levenshtein_distance(p, t)
    new = msd_error_rate_new(p, t, 64)
    assert new >= d / (len(p) + len(t)) * 100 - 1e-9
    assert new <= msd_error_rate_old(p, t) + 1e-9


# -- taxonomy ---------------------------------------------------------------------


def test_classify_examples():
    counts, text = classify_keystrokes(stream("ab", C("a"), C("c"), BS(), C("b")))
    assert text == "ab" and counts == TaxonomyCounts(2, 0, 1, 1)
    counts, text = classify_keystrokes(stream("ab", C("a"), C("b")))
    assert text == "ab" and counts == TaxonomyCounts(2, 0, 0, 0)
    counts, text = classify_keystrokes(stream("abc", C("a"), C("x"), C("c")))
    assert text == "axc" and counts == TaxonomyCounts(2, 1, 0, 0)


def test_classify_requires_presented_text():
    with pytest.raises(UndefinedMetricError):
        classify_keystrokes(stream("", C("a")))


def test_selects_and_commits_are_not_fixes():
    counts, text = classify_keystrokes(
        stream("天", C("t"), BS(), C("天"), Keystroke.select(2), Keystroke.commit())
    )
    assert text == "天"
    assert counts == TaxonomyCounts(1, 0, 1, 1)


@given(actions, presented_text)
def test_taxonomy_invariants(acts, presented):
    s = build_stream(acts, presented)
    counts, text = classify_keystrokes(s)
    n_chars = sum(e.kind is Kind.CHAR for e in s.events)
    assert counts.c + counts.inf == len(text)
    assert counts.if_ + counts.c + counts.inf == n_chars
    assert counts.f == sum(e.kind in (Kind.BACKSPACE, Kind.CURSOR) for e in s.events)
    if counts.c + counts.inf:
        assert total_error_rate(counts) >= msd_error_rate_taxonomy(counts) - 1e-9
        if counts.if_ == 0:
            assert total_error_rate(counts) == msd_error_rate_taxonomy(counts)


@given(st.text(alphabet="abc", min_size=1, max_size=10), presented_text)
def test_fix_free_stream_kspc(typed, presented):
    s = InputStream(tuple(keys_from_text(typed)), presented)
    counts, _ = classify_keystrokes(s)
    assert counts.if_ == counts.f == 0
    assert kspc_from_stream(s) == 1.0 == kspc_taxonomy(counts)


@pytest.mark.parametrize(
    "counts, expected",
    [((2, 0, 1, 1), 100 / 3), ((5, 0, 0, 0), 0.0), ((0, 3, 1, 2), 100.0)],
)
def test_total_error_rate(counts, expected):
    assert total_error_rate(TaxonomyCounts(*counts)) == pytest.approx(expected)


@pytest.mark.parametrize("counts, expected", [((9, 1, 0, 0), 10.0), ((4, 0, 0, 0), 0.0), ((0, 2, 0, 0), 100.0)])
def test_msd_error_rate_taxonomy(counts, expected):
    assert msd_error_rate_taxonomy(TaxonomyCounts(*counts)) == pytest.approx(expected)


@pytest.mark.parametrize("counts, expected", [((2, 0, 1, 1), 2.0), ((3, 1, 0, 0), 1.0), ((1, 0, 2, 2), 5.0)])
def test_kspc_taxonomy(counts, expected):
    assert kspc_taxonomy(TaxonomyCounts(*counts)) == expected


def test_taxonomy_denominators():
    with pytest.raises(UndefinedMetricError):
        total_error_rate(TaxonomyCounts(0, 0, 0, 3))
    with pytest.raises(UndefinedMetricError):
        msd_error_rate_taxonomy(TaxonomyCounts(0, 0, 2, 2))
    with pytest.raises(UndefinedMetricError):
        kspc_taxonomy(TaxonomyCounts(0, 0, 1, 1))
    with pytest.raises(ValueError):
        TaxonomyCounts(-1, 0, 0, 0)


def test_kspc_from_stream_examples():
    four = stream("ab", C("a"), C("c"), BS(), C("b"))
    assert kspc_from_stream(four) == 2.0
    assert kspc_from_stream(stream("ab", C("a"), C("b"))) == 1.0
    seven = stream("ab", C("a"), C("x"), C("y"), BS(), BS(), C("b"), Keystroke.commit())
    assert kspc_from_stream(seven) == 3.5
    with pytest.raises(UndefinedMetricError):
        kspc_from_stream(stream("ab", C("a"), BS()))


# -- cost per correction ------------------------------------------------------------


@pytest.mark.parametrize(
    "inputs, expected", [((2, 2, 0, 2), 2.0), ((0, 1, 0, 1), 1.0), ((3, 4, 1, 4), 2.0)]
)
def test_cpc_examples(inputs, expected):
    assert cpc(CpcInputs(*inputs)) == expected


def test_cpc_requires_a_correction():
    with pytest.raises(NoCorrectionsError):
        cpc(CpcInputs(0, 0, 0, 0))
    with pytest.raises(NoCorrectionsError):
        cpc_from_stream(stream("ab", C("a"), C("b")))


def test_cpc_from_stream_examples():
    s = stream("ab", C("a"), C("c"), BS(), C("b"))
    assert derive_cpc_inputs(s) == CpcInputs(1, 1, 0, 1)
    assert cpc_from_stream(s) == 2.0

    s = stream("yw", C("x"), BS(), C("y"), C("z"), BS(), C("w"))
    assert derive_cpc_inputs(s) == CpcInputs(2, 2, 0, 2)
    assert cpc_from_stream(s) == 2.0


def test_cpc_counts_runs_and_wasted_selects():
    # one run of two fixes erases a selected character
    s = stream("a", C("a"), C("b"), Keystroke.select(1), Keystroke.cursor(-1), Keystroke.cursor(1), BS())
    assert derive_cpc_inputs(s) == CpcInputs(wls=1, fs=3, wcs=1, noc=1)


@given(st.tuples(*[st.integers(0, 50)] * 3), st.integers(1, 20), st.integers(1, 7))
def test_cpc_scale_invariant(terms, noc, factor):
    base = CpcInputs(*terms, noc)
    scaled = CpcInputs(*(x * factor for x in terms), noc * factor)
    assert cpc(scaled) == pytest.approx(cpc(base), rel=1e-12)
