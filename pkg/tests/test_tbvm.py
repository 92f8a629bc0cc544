"""Machine semantics: parsing, execution, resolution, enumeration.

Every behavior is pinned twice where possible: once against hand-derived
values and once against the naive interpreter in reference.py.
"""

import pytest
from hypothesis import given, settings, strategies as st

import reference as ref
from kolmolab import tbvm
from kolmolab.tbvm import DEFAULT_LIMITS, ParseError, RunLimits

bits_st = st.text(alphabet="01", max_size=12)
codes_st = st.text(alphabet="01", max_size=12)
small_n = st.integers(min_value=0, max_value=20)

TIGHT = RunLimits(step_budget=300, output_cap=16, reg_cap=7,
                  tracked_state_cap=4096)


# ---------------------------------------------------------------------------
# parse

def test_parse_empty_is_empty_opcode_program():
    prog = tbvm.parse("")
    assert prog.kind == "opcodes"
    assert prog.ops == ()
    assert len(prog) == 0


def test_parse_literal():
    prog = tbvm.parse("10110")
    assert prog.kind == "literal"
    assert prog.payload == "0110"


def test_parse_opcodes():
    prog = tbvm.parse("0000001")
    assert prog.kind == "opcodes"
    assert prog.ops == (tbvm.OUT0, tbvm.OUT1)


def test_parse_trailing_bits():
    with pytest.raises(ParseError) as err:
        tbvm.parse("000")
    assert err.value.reason == "trailing-bits"


def test_parse_unmatched_loop():
    with pytest.raises(ParseError) as err:
        tbvm.parse("0100")
    assert err.value.reason == "unmatched-loop"


def test_parse_unmatched_end():
    with pytest.raises(ParseError) as err:
        tbvm.parse("0101")
    assert err.value.reason == "unmatched-end"


def test_parse_non_bit_character():
    with pytest.raises(ParseError) as err:
        tbvm.parse("0a1")
    assert err.value.reason == "non-bit-character"


@given(codes_st)
@settings(deadline=None)
def test_parse_matches_reference(code):
    kind, payload = ref.ref_parse(code)
    if kind == "error":
        with pytest.raises(ParseError) as err:
            tbvm.parse(code)
        assert err.value.reason == payload
    else:
        prog = tbvm.parse(code)
        assert prog.kind in ("literal", "opcodes")
        if kind == "literal":
            assert prog.kind == "literal" and prog.payload == payload
        else:
            assert prog.kind == "opcodes"
            assert [tbvm.OP_NAMES[op] for op in prog.ops] == payload


@given(codes_st)
@settings(deadline=None)
def test_unparse_round_trip(code):
    try:
        prog = tbvm.parse(code)
    except ParseError:
        return
    assert tbvm.unparse(prog) == code


# ---------------------------------------------------------------------------
# run

def test_run_literal_example():
    out = tbvm.run(tbvm.parse("10110"), 7)
    assert (out.status, out.output, out.steps_used) == ("halted", "0110", 4)


def test_run_two_emits():
    out = tbvm.run(tbvm.parse("0000001"), 0)
    assert (out.status, out.output, out.steps_used) == ("halted", "01", 2)


def test_run_counting_loop():
    out = tbvm.run(tbvm.parse("0110100000011101"), 3)
    assert (out.status, out.output, out.steps_used) == ("halted", "000", 14)


def test_run_counting_loop_full_width():
    out = tbvm.run(tbvm.parse("0110100000011101"), 20)
    assert (out.status, out.output, out.steps_used) == ("halted", "0" * 20, 82)


def test_run_step_limit_partial_output():
    limits = RunLimits(step_budget=10, output_cap=4096, reg_cap=4096,
                       tracked_state_cap=4096)
    out = tbvm.run(tbvm.parse("1" + "0" * 50), 0, limits)
    assert (out.status, out.output, out.steps_used) == ("step-limit", "0" * 10, 10)


def test_run_output_limit():
    limits = RunLimits(step_budget=1000, output_cap=4, reg_cap=4096,
                       tracked_state_cap=4096)
    out = tbvm.run(tbvm.parse("1" + "0" * 50), 0, limits)
    assert out.status == "output-limit"
    assert out.output == "0000"


def test_run_limits_validated():
    with pytest.raises(ValueError):
        RunLimits(step_budget=0, output_cap=1, reg_cap=1, tracked_state_cap=1)


@given(codes_st, small_n)
@settings(deadline=None)
def test_run_is_deterministic(code, n):
    try:
        prog = tbvm.parse(code)
    except ParseError:
        return
    first = tbvm.run(prog, n, TIGHT)
    second = tbvm.run(prog, n, TIGHT)
    assert first == second


@given(bits_st, small_n)
@settings(deadline=None)
def test_literal_upper_bound(x, n):
    out = tbvm.run(tbvm.parse("1" + x), n)
    assert (out.status, out.output, out.steps_used) == ("halted", x, len(x))


@given(codes_st, small_n)
@settings(deadline=None)
def test_step_monotonicity(code, n):
    try:
        prog = tbvm.parse(code)
    except ParseError:
        return
    out = tbvm.run(prog, n, TIGHT)
    if out.status != "halted":
        return
    exact_budget = max(out.steps_used, 1)
    again = tbvm.run(prog, n, RunLimits(step_budget=exact_budget,
                                        output_cap=TIGHT.output_cap,
                                        reg_cap=TIGHT.reg_cap,
                                        tracked_state_cap=TIGHT.tracked_state_cap))
    assert (again.status, again.output, again.steps_used) == \
        (out.status, out.output, out.steps_used)


@given(codes_st, small_n, st.integers(min_value=1, max_value=300))
@settings(deadline=None)
def test_output_grows_monotonically(code, n, budget):
    try:
        prog = tbvm.parse(code)
    except ParseError:
        return
    partial = tbvm.run(prog, n, RunLimits(step_budget=budget,
                                          output_cap=TIGHT.output_cap,
                                          reg_cap=TIGHT.reg_cap,
                                          tracked_state_cap=TIGHT.tracked_state_cap))
    full = tbvm.run(prog, n, TIGHT)
    assert full.output.startswith(partial.output) or \
        partial.output.startswith(full.output)


@given(codes_st, small_n)
@settings(deadline=None, max_examples=300)
def test_run_matches_reference(code, n):
    try:
        prog = tbvm.parse(code)
    except ParseError:
        return
    got = tbvm.run(prog, n, TIGHT)
    status, out, steps = ref.ref_run(code, n, TIGHT.step_budget,
                                     output_cap=TIGHT.output_cap,
                                     reg_cap=TIGHT.reg_cap)
    assert (got.status, got.output, got.steps_used) == (status, out, steps)


# ---------------------------------------------------------------------------
# resolve

def test_resolve_literal_halts():
    res = tbvm.resolve(tbvm.parse("10110"), 7)
    assert res.kind == "halts"
    assert res.outcome.output == "0110"


def test_resolve_detects_divergence():
    res = tbvm.resolve(tbvm.parse("0010100101"), 0)
    assert res.kind == "diverges"


def test_resolve_skipped_loop_halts():
    res = tbvm.resolve(tbvm.parse("0100000101"), 5)
    assert res.kind == "halts"
    assert res.outcome.output == ""


def test_resolve_unresolved_on_tiny_budget():
    limits = RunLimits(step_budget=3, output_cap=4096, reg_cap=4096,
                       tracked_state_cap=4096)
    res = tbvm.resolve(tbvm.parse("1" + "0" * 10), 0, limits)
    assert res.kind == "unresolved"
    assert res.reason == "step-limit"


@given(codes_st, small_n)
@settings(deadline=None, max_examples=300)
def test_diverges_is_sound_at_100x_budget(code, n):
    try:
        prog = tbvm.parse(code)
    except ParseError:
        return
    base = RunLimits(step_budget=100, output_cap=64, reg_cap=7,
                     tracked_state_cap=65536)
    res = tbvm.resolve(prog, n, base)
    if res.kind != "diverges":
        return
    status, _, _ = ref.ref_run(code, n, 100 * base.step_budget,
                               output_cap=base.output_cap,
                               reg_cap=base.reg_cap)
    assert status != "halted"


def test_resolve_output_limit_reason():
    limits = RunLimits(step_budget=1000, output_cap=2, reg_cap=4096,
                       tracked_state_cap=4096)
    res = tbvm.resolve(tbvm.parse("10000"), 0, limits)
    assert res.kind == "unresolved"
    assert res.reason == "output-limit"


# ---------------------------------------------------------------------------
# enumeration

@pytest.mark.parametrize("length", range(11))
def test_valid_programs_match_reference(length):
    expected = [code for code in ref.all_codes(length)
                if len(code) == length and ref.ref_parse(code)[0] != "error"]
    got = [prog.code for prog in tbvm.valid_programs(length)]
    assert got == expected
    assert got == sorted(got)
    assert tbvm.count_valid(length) == len(expected)


def test_opcode_mode_counts():
    mode0 = {0: 1, 1: 1, 4: 6, 7: 37, 10: 234, 13: 1514, 16: 9996, 19: 67181}
    for length, expected in mode0.items():
        literals = 0 if length == 0 else 1 << (length - 1)
        assert tbvm.count_valid(length) - literals == expected


def test_program_from_ops_round_trip():
    ops = (tbvm.LOADN, tbvm.LOOP, tbvm.OUT0, tbvm.DEC, tbvm.END)
    prog = tbvm.program_from_ops(ops)
    assert prog.code == "0110100000011101"
    assert tbvm.parse(prog.code).ops == ops
