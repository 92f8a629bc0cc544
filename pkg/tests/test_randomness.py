"""One-sided c-randomness verdicts and stream reports."""

import pytest
from hypothesis import given, settings, strategies as st

from kolmolab import complexity, generators, randomness
from kolmolab.randomness import (
    CERTIFIED_NON_RANDOM,
    CERTIFIED_RANDOM,
    NO_EVIDENCE,
    DeficiencyVerdict,
    EmptyInputError,
)
from kolmolab.tbvm import DEFAULT_LIMITS


def test_verdict_kind_strings():
    assert CERTIFIED_NON_RANDOM == "certified-non-random"
    assert CERTIFIED_RANDOM == "certified-random"
    assert NO_EVIDENCE == "no-evidence-at-budget"


def test_delta0():
    assert randomness.delta0(20, 16) == 3
    assert randomness.delta0(0, 0) == -1
    assert randomness.delta0(4, 5) == -2


# ---------------------------------------------------------------------------
# classify

def test_classify_twenty_zeros_flagged():
    verdict = randomness.classify("0" * 20, c=2)
    assert verdict.kind == CERTIFIED_NON_RANDOM
    assert verdict.deficiency == 3
    assert verdict.witness_bits == "0110100000011101"


def test_classify_certified_random_when_exact_is_cheap():
    # C(0^20|20) = 16 certified, so at c=3 the deficiency 3 is tolerated
    verdict = randomness.classify("0" * 20, c=3)
    assert verdict.kind == CERTIFIED_RANDOM
    assert verdict.deficiency == 3
    assert verdict.basis is not None and verdict.basis.certified


def test_classify_empty_sequence():
    verdict = randomness.classify("", c=0)
    assert verdict.kind == CERTIFIED_RANDOM
    assert verdict.deficiency == -1


def test_classify_pi_prefix_no_evidence():
    verdict = randomness.classify(generators.pi_bits(64), c=0)
    assert verdict.kind == NO_EVIDENCE
    assert verdict.deficiency is None


def test_classify_alternating_is_honestly_unflagged():
    # no short alternating emitter exists on this machine: the best
    # description is the literal, so c=2 yields no verdict either way
    verdict = randomness.classify("01" * 10, c=2)
    assert verdict.kind == NO_EVIDENCE


def test_classify_validates_arguments():
    with pytest.raises(ValueError):
        randomness.classify("02", c=0)
    with pytest.raises(ValueError):
        randomness.classify("0", c=-3)


# ---------------------------------------------------------------------------
# structural one-sidedness

def test_certified_random_requires_certified_basis():
    uncertified = complexity.ComplexityEstimate(
        value=5, witness_bits="10000", certified=False, max_stage=4,
        limits=DEFAULT_LIMITS)
    with pytest.raises(ValueError):
        DeficiencyVerdict(kind=CERTIFIED_RANDOM, level_c=0, deficiency=-1,
                          basis=uncertified)


def test_certified_random_requires_basis_at_all():
    with pytest.raises(ValueError):
        DeficiencyVerdict(kind=CERTIFIED_RANDOM, level_c=0, deficiency=-1)


def test_non_random_requires_witness():
    with pytest.raises(ValueError):
        DeficiencyVerdict(kind=CERTIFIED_NON_RANDOM, level_c=0, deficiency=3)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        DeficiencyVerdict(kind="probably-random", level_c=0)


@given(st.integers(min_value=0, max_value=8), st.integers(min_value=0, max_value=4),
       st.integers(min_value=0, max_value=9), st.booleans())
@settings(deadline=None)
def test_uncertified_estimates_never_certify_randomness(n, c, value, have_bound):
    """Mutation guard: feed every estimate combination lacking a certified
    exact value; certified-random must be unreachable."""
    witness = "1" + "0" * (value - 1) if value >= 1 else ""
    est = complexity.ComplexityEstimate(
        value=value, witness_bits=witness, certified=False, max_stage=4,
        limits=DEFAULT_LIMITS)
    bound = est if have_bound else None
    verdict = randomness.verdict_from_estimates(n, c, bound, est)
    assert verdict.kind != CERTIFIED_RANDOM
    verdict = randomness.verdict_from_estimates(n, c, bound, None)
    assert verdict.kind != CERTIFIED_RANDOM


def test_verdict_from_estimates_flags_on_bound_alone():
    bound = complexity.ComplexityEstimate(
        value=2, witness_bits="10", certified=False, max_stage=4,
        limits=DEFAULT_LIMITS)
    verdict = randomness.verdict_from_estimates(8, 2, bound, None)
    assert verdict.kind == CERTIFIED_NON_RANDOM
    assert verdict.deficiency == 5


# ---------------------------------------------------------------------------
# streams

def test_analyze_const_stream():
    report = randomness.analyze_stream(generators.pattern_bits("const0", 200),
                                       20, c=2)
    assert len(report.verdicts) == 10
    assert report.flagged_fraction == 1.0
    assert report.counts[CERTIFIED_NON_RANDOM] == 10
    assert report.excluded_trailing_bits == 0


def test_analyze_keeps_only_complete_blocks():
    report = randomness.analyze_stream("0" * 45, 20, c=2)
    assert len(report.verdicts) == 2
    assert report.excluded_trailing_bits == 5


def test_analyze_empty_stream_rejected():
    with pytest.raises(EmptyInputError):
        randomness.analyze_stream("0" * 19, 20)
    with pytest.raises(EmptyInputError):
        randomness.analyze_stream("", 1)


def test_analyze_with_table_matches_classify_route():
    bits = generators.sha1_stream(b"route", 64)
    table = complexity.build_table(8)
    with_table = randomness.analyze_stream(bits, 8, c=1, table=table)
    without = randomness.analyze_stream(bits, 8, c=1)
    assert [v.kind for v in with_table.verdicts] == \
        [v.kind for v in without.verdicts]
    assert [v.deficiency for v in with_table.verdicts] == \
        [v.deficiency for v in without.verdicts]


def test_analyze_workers_equal():
    bits = generators.sha1_stream(b"par", 120)
    serial = randomness.analyze_stream(bits, 20, c=1, workers=1)
    parallel = randomness.analyze_stream(bits, 20, c=1, workers=4)
    assert serial == parallel


def test_analyze_counts_cover_all_kinds():
    report = randomness.analyze_stream("0" * 40, 20, c=2)
    assert set(report.counts) == {CERTIFIED_NON_RANDOM, CERTIFIED_RANDOM,
                                  NO_EVIDENCE}
    assert sum(report.counts.values()) == len(report.verdicts)


def test_deficiency_fraction_counting_bound():
    table = complexity.build_table(8)
    for k in range(10):
        assert randomness.deficiency_fraction(table, k) < 2 ** -k


def test_report_to_dict_shape():
    report = randomness.analyze_stream("0" * 40, 20, c=2)
    payload = randomness.report_to_dict(report)
    assert payload["block_n"] == 20
    assert payload["level_c"] == 2
    assert len(payload["blocks"]) == 2
    assert payload["blocks"][0]["verdict"] == CERTIFIED_NON_RANDOM
    assert payload["blocks"][0]["witness_bits"] == "0110100000011101"
    assert payload["flagged_fraction"] == 1.0
