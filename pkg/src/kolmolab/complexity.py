"""Conditional complexity C(x|n): budgeted upper bounds, certified exact
values, and full tables for one length with the counting facts over them.

A value is *certified* exact only when every valid program strictly shorter
than it has been resolved: halted with the wrong output, proven divergent, or
driven past the output cap. Step-limited programs block certification; the
result is then only an upper bound.

Searches sweep lengths in ascending order, opcode-mode programs before
literals within a length (that is lexicographic order: opcode codes start
with 0). Literal programs never need to be executed during a search: a
literal is a description of x only at length l(x)+1, and its outcome is
closed-form. Executed opcode-mode programs are charged against a work cap so
that desk-infeasible certifications fail fast instead of hanging.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

from . import tbvm
from .tbvm import DEFAULT_LIMITS, RunLimits

DEFAULT_TABLE_MAX_N = 12
DEFAULT_SWEEP_CAP = 1 << 16


@dataclass(frozen=True)
class ComplexityEstimate:
    value: int
    witness_bits: str
    certified: bool
    max_stage: int | None
    limits: RunLimits

    def __post_init__(self):
        if self.value != len(self.witness_bits):
            raise ValueError("witness length must equal the estimate value")


@dataclass(frozen=True)
class ComplexityTable:
    n: int
    entries: dict  # x_bits -> ComplexityEstimate
    limits: RunLimits


class UncertifiableAtBudget(Exception):
    """Exactness could not be certified; carries the best upper bound."""

    def __init__(self, estimate: ComplexityEstimate, detail: str):
        super().__init__(detail)
        self.estimate = estimate
        self.detail = detail


def _require_target(x: str, n: int):
    if not tbvm.is_bits(x):
        raise ValueError("x must be a bit string")
    if n != len(x):
        raise ValueError("n must equal l(x)")


def _literal_resolved(payload_len: int, limits: RunLimits) -> bool:
    # a literal halts (hence is resolved) iff its emission fits both caps
    return payload_len <= limits.step_budget and payload_len <= limits.output_cap


def _opcode_lengths(up_to: int):
    """Lengths <= up_to that contain opcode-mode programs."""
    return [0] + [length for length in range(1, up_to + 1) if (length - 1) % 3 == 0]


def upper_bound(x: str, n: int, max_stage: int,
                limits: RunLimits = DEFAULT_LIMITS,
                sweep_cap: int = DEFAULT_SWEEP_CAP) -> ComplexityEstimate:
    """Best description length discoverable by dovetailing to max_stage,
    never worse than the literal bound l(x)+1."""
    _require_target(x, n)
    if max_stage < 0:
        raise ValueError("max_stage must be >= 0")
    unresolved = set()  # lengths holding a program that stayed unresolved
    executed = 0
    witness = None
    for length in range(min(max_stage, len(x)) + 1):
        budget = min(max_stage + 1 - length, limits.step_budget)
        is_opcode_length = length == 0 or (length - 1) % 3 == 0
        if is_opcode_length:
            if x and budget < len(x):
                unresolved.add(length)  # skipped: cannot emit l(x) bits in time
                continue
            count = tbvm.count_valid(length) - (0 if length == 0 else 1 << (length - 1))
            if executed + count > sweep_cap:
                unresolved.add(length)
                break
            executed += count
            cell_limits = RunLimits(step_budget=budget, output_cap=limits.output_cap,
                                    reg_cap=limits.reg_cap,
                                    tracked_state_cap=limits.tracked_state_cap)
            for prog in tbvm.valid_programs(length):
                if prog.kind == "literal":
                    break  # literals cannot witness below l(x)+1
                res = tbvm.resolve(prog, n, cell_limits)
                if res.kind == tbvm.HALTS:
                    if res.outcome.output == x:
                        witness = prog.code
                        break
                elif res.kind == tbvm.UNRESOLVED and res.reason == tbvm.STEP_LIMIT:
                    unresolved.add(length)
            if witness is not None:
                break
        # literals of this length halt with a payload of the wrong length,
        # provided the cell budget lets them finish emitting
        if length >= 1 and not _literal_resolved(length - 1,
                                                 RunLimits(step_budget=budget,
                                                           output_cap=limits.output_cap)):
            unresolved.add(length)
    if witness is None:
        value, witness = len(x) + 1, "1" + x
        if max_stage < len(x):
            unresolved.add(len(x))  # opcode classes above max_stage unscanned
    else:
        value = len(witness)
    certified = not any(length < value for length in unresolved)
    return ComplexityEstimate(value=value, witness_bits=witness,
                              certified=certified, max_stage=max_stage,
                              limits=limits)


_EXACT_CACHE: dict = {}


def exact(x: str, n: int, limits: RunLimits = DEFAULT_LIMITS,
          sweep_cap: int = DEFAULT_SWEEP_CAP) -> ComplexityEstimate:
    """Certified C(x|n) via an ascending resolution sweep.

    Raises UncertifiableAtBudget when a shorter program stays unresolved at
    the step budget or the work cap is hit first; the exception carries the
    best upper bound found.
    """
    _require_target(x, n)
    key = (x, n, limits, sweep_cap)
    hit = _EXACT_CACHE.get(key)
    if hit is None:
        hit = _exact_uncached(x, n, limits, sweep_cap)
        _EXACT_CACHE[key] = hit
    ok, payload = hit
    if ok:
        return payload
    raise UncertifiableAtBudget(*payload)


def _exact_uncached(x: str, n: int, limits: RunLimits, sweep_cap: int):
    literal_ok = _literal_resolved(len(x), limits)
    executed = 0
    unresolved = set()
    for length in range(len(x) + 2):
        witness = None
        is_opcode_length = length == 0 or (length - 1) % 3 == 0
        if is_opcode_length:
            count = tbvm.count_valid(length) - (0 if length == 0 else 1 << (length - 1))
            if executed + count > sweep_cap:
                est = ComplexityEstimate(
                    value=len(x) + 1, witness_bits="1" + x, certified=False,
                    max_stage=None, limits=limits)
                return False, (est, f"work cap {sweep_cap} reached at length {length}")
            executed += count
            for prog in tbvm.valid_programs(length):
                if prog.kind == "literal":
                    break
                res = tbvm.resolve(prog, n, limits)
                if res.kind == tbvm.HALTS:
                    if res.outcome.output == x:
                        witness = prog.code
                        break
                elif res.kind == tbvm.UNRESOLVED and res.reason == tbvm.STEP_LIMIT:
                    unresolved.add(length)
        if witness is None and length >= 1:
            if length - 1 == len(x) and literal_ok:
                witness = "1" + x
            elif not _literal_resolved(length - 1, limits):
                unresolved.add(length)
        if witness is not None:
            certified = not any(shorter < length for shorter in unresolved)
            est = ComplexityEstimate(value=length, witness_bits=witness,
                                     certified=certified,
                                     max_stage=None, limits=limits)
            if not certified:
                return False, (est, "step-limited programs below the witness length")
            return True, est
    est = ComplexityEstimate(value=len(x) + 1, witness_bits="1" + x,
                             certified=False, max_stage=None, limits=limits)
    return False, (est, "literal fallback exceeds the run limits")


def _resolve_codes(args):
    codes, n, limits = args
    out = []
    for code in codes:
        res = tbvm.resolve(tbvm.parse(code), n, limits)
        if res.kind == tbvm.HALTS:
            out.append((code, tbvm.HALTS, res.outcome.output))
        else:
            out.append((code, res.kind, res.reason))
    return out


def build_table(n: int, limits: RunLimits = DEFAULT_LIMITS,
                max_n: int = DEFAULT_TABLE_MAX_N, workers: int = 1) -> ComplexityTable:
    """C(x|n) for every length-n sequence, via one enumeration sweep over all
    programs of length <= n (everything shorter than the literal bound)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > max_n:
        raise ValueError(f"table n={n} exceeds the configured maximum {max_n}")
    codes = [prog.code for length in range(n + 1)
             for prog in tbvm.valid_programs(length)]
    if workers > 1 and len(codes) > 1:
        shards = [codes[i::workers] for i in range(workers)]
        with multiprocessing.Pool(workers) as pool:
            results_parts = pool.map(_resolve_codes, [(s, n, limits) for s in shards])
        by_code = {r[0]: r for part in results_parts for r in part}
        results = [by_code[c] for c in codes]
    else:
        results = _resolve_codes((codes, n, limits))

    best: dict[str, str] = {}
    unresolved_lengths = set()
    for code, kind, detail in results:
        if kind == tbvm.HALTS:
            if len(detail) == n and detail not in best:
                best[detail] = code  # first hit in (length, lex) order wins
        elif kind == tbvm.UNRESOLVED and detail == tbvm.STEP_LIMIT:
            unresolved_lengths.add(len(code))
    min_unresolved = min(unresolved_lengths) if unresolved_lengths else None

    entries = {}
    for v in range(1 << n):
        x = format(v, f"0{n}b") if n else ""
        code = best.get(x, "1" + x)
        verify = tbvm.run(tbvm.parse(code), n, limits)
        if verify.status != tbvm.HALTED or verify.output != x:
            raise AssertionError(f"witness {code!r} failed re-execution for {x!r}")
        certified = min_unresolved is None or min_unresolved >= len(code)
        entries[x] = ComplexityEstimate(value=len(code), witness_bits=code,
                                        certified=certified, max_stage=None,
                                        limits=limits)
    return ComplexityTable(n=n, entries=entries, limits=limits)


def count_below(table: ComplexityTable, m: int) -> int:
    """|{x : l(x) = n, C(x|n) < m}|"""
    return sum(1 for est in table.entries.values() if est.value < m)


def histogram(table: ComplexityTable) -> dict:
    counts: dict[int, int] = {}
    for est in table.entries.values():
        counts[est.value] = counts.get(est.value, 0) + 1
    return dict(sorted(counts.items()))


def table_to_csv(table: ComplexityTable) -> str:
    lines = ["x_bits,n,c_value,certified,witness_bits"]
    for x in sorted(table.entries):
        est = table.entries[x]
        flag = "true" if est.certified else "false"
        lines.append(f"{x},{table.n},{est.value},{flag},{est.witness_bits}")
    return "\n".join(lines) + "\n"


def table_to_dict(table: ComplexityTable) -> dict:
    return {
        "n": table.n,
        "entries": [
            {"x_bits": x, "n": table.n, "c_value": est.value,
             "certified": est.certified, "witness_bits": est.witness_bits}
            for x, est in sorted(table.entries.items())
        ],
    }
