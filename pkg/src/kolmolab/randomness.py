"""Deficiency-based randomness verdicts.

The deficiency of x is delta0 = l(x) - C(x|l(x)) - 1. A sequence is c-random
when delta0 <= c. Verdicts are deliberately three-valued and one-sided:

  - certified-non-random: a verified witness program shows delta0 >= c+1.
    Any budget can produce this; a witness is a proof.
  - certified-random: delta0 <= c *and* the underlying estimate is certified
    exact (every shorter program resolved). Only exhaustive resolution at
    small sizes can produce this.
  - no-evidence-at-budget: everything else. Never collapsed into "random".
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

from . import complexity, tbvm
from .complexity import (DEFAULT_SWEEP_CAP, ComplexityEstimate, ComplexityTable,
                         UncertifiableAtBudget)
from .tbvm import DEFAULT_LIMITS, RunLimits

CERTIFIED_NON_RANDOM = "certified-non-random"
CERTIFIED_RANDOM = "certified-random"
NO_EVIDENCE = "no-evidence-at-budget"

VERDICT_KINDS = (CERTIFIED_NON_RANDOM, CERTIFIED_RANDOM, NO_EVIDENCE)

DEFAULT_MAX_STAGE = 128


class EmptyInputError(ValueError):
    pass


def delta0(n: int, c_value: int) -> int:
    """Martin-Löf deficiency for a length-n sequence with C(x|n) = c_value."""
    return n - c_value - 1


@dataclass(frozen=True)
class Deficiency:
    value: int
    basis: ComplexityEstimate


@dataclass(frozen=True)
class DeficiencyVerdict:
    kind: str
    level_c: int
    deficiency: int | None = None
    witness_bits: str | None = None
    best_value: int | None = None
    basis: ComplexityEstimate | None = None

    def __post_init__(self):
        if self.kind not in VERDICT_KINDS:
            raise ValueError(f"unknown verdict kind {self.kind!r}")
        if self.kind == CERTIFIED_RANDOM:
            # structural one-sidedness: impossible to build this verdict
            # from anything but a certified exact estimate
            if self.basis is None or not self.basis.certified:
                raise ValueError("certified-random requires a certified estimate")
        if self.kind == CERTIFIED_NON_RANDOM and self.witness_bits is None:
            raise ValueError("certified-non-random requires a witness")


def verdict_from_estimates(n: int, c: int, bound_est: ComplexityEstimate,
                           exact_est: ComplexityEstimate | None) -> DeficiencyVerdict:
    """Pure verdict logic. exact_est may be absent or uncertified; a
    certified-random verdict can only arise from a certified exact_est."""
    if exact_est is not None and exact_est.certified:
        d = delta0(n, exact_est.value)
        if d <= c:
            return DeficiencyVerdict(kind=CERTIFIED_RANDOM, level_c=c,
                                     deficiency=d, best_value=exact_est.value,
                                     basis=exact_est)
        return DeficiencyVerdict(kind=CERTIFIED_NON_RANDOM, level_c=c,
                                 deficiency=d, witness_bits=exact_est.witness_bits,
                                 best_value=exact_est.value, basis=exact_est)
    candidates = [e for e in (bound_est, exact_est) if e is not None]
    if not candidates:
        return DeficiencyVerdict(kind=NO_EVIDENCE, level_c=c)
    best = min(candidates, key=lambda e: e.value)
    d0 = delta0(n, best.value)
    if d0 >= c + 1:
        return DeficiencyVerdict(kind=CERTIFIED_NON_RANDOM, level_c=c,
                                 deficiency=d0, witness_bits=best.witness_bits,
                                 best_value=best.value, basis=best)
    return DeficiencyVerdict(kind=NO_EVIDENCE, level_c=c,
                             best_value=best.value, basis=best)


def classify(x: str, c: int = 0, max_stage: int = DEFAULT_MAX_STAGE,
             limits: RunLimits = DEFAULT_LIMITS,
             sweep_cap: int = DEFAULT_SWEEP_CAP) -> DeficiencyVerdict:
    """One-sided c-randomness verdict for a single sequence."""
    if not tbvm.is_bits(x):
        raise ValueError("x must be a bit string")
    if c < -2:
        raise ValueError("c must be >= -2 (the minimum possible deficiency)")
    n = len(x)
    bound = complexity.upper_bound(x, n, max_stage, limits, sweep_cap)
    if delta0(n, bound.value) >= c + 1:
        return verdict_from_estimates(n, c, bound, None)
    try:
        exact_est = complexity.exact(x, n, limits, sweep_cap)
    except UncertifiableAtBudget as err:
        exact_est = err.estimate
    return verdict_from_estimates(n, c, bound, exact_est)


@dataclass(frozen=True)
class StreamReport:
    block_n: int
    level_c: int
    verdicts: tuple
    counts: dict
    flagged_fraction: float
    excluded_trailing_bits: int


def _classify_block(args):
    block, c, max_stage, limits, sweep_cap = args
    return block, classify(block, c, max_stage, limits, sweep_cap)


def analyze_stream(bits: str, block_n: int, c: int = 0,
                   max_stage: int = DEFAULT_MAX_STAGE,
                   limits: RunLimits = DEFAULT_LIMITS,
                   sweep_cap: int = DEFAULT_SWEEP_CAP,
                   table: ComplexityTable | None = None,
                   workers: int = 1) -> StreamReport:
    """Split bits into complete block_n-blocks and classify each one.

    A prebuilt table for exactly block_n replaces per-block search with
    lookups (same verdicts: table entries are certified exact values). The
    trailing partial block is excluded, never padded: padding would change
    l(x) and with it the deficiency.
    """
    if not tbvm.is_bits(bits):
        raise ValueError("bits must be a bit string")
    if block_n < 1:
        raise ValueError("block_n must be >= 1")
    if len(bits) < block_n:
        raise EmptyInputError(f"need at least {block_n} bits, got {len(bits)}")
    num_blocks = len(bits) // block_n
    blocks = [bits[i * block_n:(i + 1) * block_n] for i in range(num_blocks)]
    if table is not None and table.n == block_n:
        mapping = {b: verdict_from_estimates(block_n, c, table.entries[b],
                                             table.entries[b])
                   for b in dict.fromkeys(blocks)}
    else:
        distinct = list(dict.fromkeys(blocks))
        tasks = [(b, c, max_stage, limits, sweep_cap) for b in distinct]
        if workers > 1 and len(tasks) > 1:
            with multiprocessing.Pool(workers) as pool:
                pairs = pool.map(_classify_block, tasks)
        else:
            pairs = [_classify_block(t) for t in tasks]
        mapping = dict(pairs)
    verdicts = tuple(mapping[b] for b in blocks)
    counts = {kind: 0 for kind in VERDICT_KINDS}
    for v in verdicts:
        counts[v.kind] += 1
    flagged = counts[CERTIFIED_NON_RANDOM] / num_blocks
    return StreamReport(block_n=block_n, level_c=c, verdicts=verdicts,
                        counts=counts, flagged_fraction=flagged,
                        excluded_trailing_bits=len(bits) - num_blocks * block_n)


def deficiency_fraction(table: ComplexityTable, k: int) -> float:
    """Fraction of length-n sequences with delta0 >= k."""
    total = len(table.entries)
    hits = sum(1 for est in table.entries.values()
               if delta0(table.n, est.value) >= k)
    return hits / total


def report_to_dict(report: StreamReport) -> dict:
    blocks = []
    for i, v in enumerate(report.verdicts):
        entry = {"index": i, "verdict": v.kind, "deficiency": v.deficiency}
        if v.witness_bits is not None:
            entry["witness_bits"] = v.witness_bits
        blocks.append(entry)
    return {
        "block_n": report.block_n,
        "level_c": report.level_c,
        "blocks": blocks,
        "counts": dict(report.counts),
        "flagged_fraction": report.flagged_fraction,
        "excluded_trailing_bits": report.excluded_trailing_bits,
    }
