"""Stage-scheduled program enumeration.

Stage i runs programs of length i, i-1, ..., 1, 0 with step budgets
1, 2, ..., i, i+1 (cell invariant: length + budget = stage + 1), programs in
lexicographic order inside a cell. Every program that halts in s steps is
therefore discovered at stage max(1, l, l + s - 1), so every description of a
target is eventually found.

Implementations are free to re-run from scratch with the larger budget
instead of resuming suspended machines; the discovery list is the contract.
find_descriptions exploits that: each length is run once at its best budget
within max_stage, and discoveries are ordered by (stage_found, cell position,
code), which is identical to the staged execution order.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, replace

from . import tbvm
from .tbvm import DEFAULT_LIMITS, Program, RunLimits


@dataclass(frozen=True)
class StageCell:
    program_length: int
    step_budget: int
    stage: int


@dataclass(frozen=True)
class Discovery:
    program: Program
    stage_found: int
    steps_used: int


def schedule_stage(i: int) -> list[StageCell]:
    """Cells of stage i in execution order."""
    if i < 1:
        raise ValueError("stage index must be >= 1")
    return [StageCell(program_length=length, step_budget=i + 1 - length, stage=i)
            for length in range(i, -1, -1)]


def stage_found(length: int, steps: int) -> int:
    """First stage whose cell for this length covers a run of `steps` steps."""
    return max(1, length, length + steps - 1)


def _scan_length(args):
    x, n, length, budget, limits = args
    cell_limits = replace(limits, step_budget=min(budget, limits.step_budget))
    hits = []
    for prog in tbvm.valid_programs(length):
        out = tbvm.run(prog, n, cell_limits)
        if out.status == tbvm.HALTED and out.output == x:
            hits.append((prog.code, out.steps_used))
    return hits


def find_descriptions(x: str, n: int, max_stage: int,
                      limits: RunLimits = DEFAULT_LIMITS,
                      workers: int = 1) -> list[Discovery]:
    """All programs of length <= max_stage that output x within their best
    stage budget, in discovery order; each program listed once.

    Cost grows as 2^max_stage: this is the exhaustive search itself.
    """
    if not tbvm.is_bits(x):
        raise ValueError("x must be a bit string")
    if n != len(x):
        raise ValueError("n must equal l(x)")
    if max_stage < 1:
        raise ValueError("max_stage must be >= 1")
    tasks = []
    for length in range(max_stage + 1):
        budget = max_stage + 1 - length
        if x and min(budget, limits.step_budget) < len(x):
            continue  # cannot emit l(x) bits in fewer steps
        tasks.append((x, n, length, budget, limits))
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            per_length = pool.map(_scan_length, tasks)
    else:
        per_length = [_scan_length(t) for t in tasks]
    found = []
    for hits in per_length:
        for code, steps in hits:
            st = stage_found(len(code), steps)
            found.append((st, st - len(code), code, steps))
    found.sort()
    return [Discovery(program=tbvm.parse(code), stage_found=st, steps_used=steps)
            for st, _, code, steps in found]


def enumerate_outputs(max_length: int, n: int,
                      limits: RunLimits = DEFAULT_LIMITS):
    """Yield (program, resolution) for every valid program of length
    <= max_length, in (length ascending, lexicographic) order."""
    if max_length < 0:
        raise ValueError("max_length must be >= 0")
    for length in range(max_length + 1):
        for prog in tbvm.valid_programs(length):
            yield prog, tbvm.resolve(prog, n, limits)


def discoveries_to_csv(discoveries: list[Discovery]) -> str:
    lines = ["stage,program_bits,program_length,steps_used"]
    for d in discoveries:
        lines.append(f"{d.stage_found},{d.program.code},{len(d.program.code)},{d.steps_used}")
    return "\n".join(lines) + "\n"
