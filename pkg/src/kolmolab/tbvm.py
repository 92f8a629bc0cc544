"""TBVM: the fixed toy universal machine all complexities are measured on.

Bit sequences are plain Python strings of '0'/'1'. A program is a bit string
in one of two modes:

  - first bit 1: literal; the remaining bits are emitted verbatim.
  - first bit 0: the remaining bits are consecutive 3-bit opcodes.

Opcodes (registers A and B start at 0 and saturate at reg_cap):

  000 OUT0   append 0 to the output
  001 OUT1   append 1 to the output
  010 INC    A := A + 1
  011 DEC    A := A - 1 (floor 0)
  100 LOOP   if A = 0, jump past the matching END
  101 END    jump back to the matching LOOP
  110 LOADN  A := min(n, reg_cap)
  111 SWAP   exchange A and B

The empty string parses to the empty opcode program (halts at once with empty
output). Every executed opcode costs one step, including LOOP tests and END
jumps; a literal costs one step per emitted bit. The literal mode guarantees
every x has a description of length l(x) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

OUT0, OUT1, INC, DEC, LOOP, END, LOADN, SWAP = range(8)
OP_NAMES = ("OUT0", "OUT1", "INC", "DEC", "LOOP", "END", "LOADN", "SWAP")

HALTED = "halted"
STEP_LIMIT = "step-limit"
OUTPUT_LIMIT = "output-limit"
PARSE_ERROR = "parse-error"

HALTS = "halts"
DIVERGES = "diverges"
UNRESOLVED = "unresolved"


class ParseError(ValueError):
    """Raised for bit strings that are not programs."""

    def __init__(self, reason: str, code: str = ""):
        super().__init__(f"{reason}: {code!r}")
        self.reason = reason
        self.code = code


@dataclass(frozen=True)
class RunLimits:
    step_budget: int = 100_000
    output_cap: int = 4096
    reg_cap: int = 4096
    tracked_state_cap: int = 65_536

    def __post_init__(self):
        for name in ("step_budget", "output_cap", "reg_cap", "tracked_state_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


DEFAULT_LIMITS = RunLimits()


@dataclass(frozen=True)
class MachineOutcome:
    status: str  # halted | step-limit | output-limit | parse-error
    output: str
    steps_used: int


@dataclass(frozen=True)
class ResolutionStatus:
    """Outcome of a run with divergence detection.

    kind "halts" carries the halted MachineOutcome; "diverges" means a machine
    state recurred with no output in between (the program can never halt);
    "unresolved" carries reason "step-limit" (budget exhausted, nothing
    proven) or "output-limit" (output cap breached; the program can never
    emit the target, since output is append-only).
    """

    kind: str  # halts | diverges | unresolved
    reason: str | None = None
    outcome: MachineOutcome | None = None


@dataclass(frozen=True)
class Program:
    code: str
    kind: str  # literal | opcodes
    payload: str | None = None
    ops: tuple[int, ...] | None = None
    # match[i] = index of the partner LOOP/END for bracket ops, else -1
    match: tuple[int, ...] = field(default=(), repr=False)
    # per-LOOP static facts about its bracket extent, for divergence analysis
    loop_info: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.code)


def is_bits(s: str) -> bool:
    return all(ch in "01" for ch in s)


def parse(code: str) -> Program:
    """Parse a bit string into a Program; raise ParseError if invalid."""
    if not is_bits(code):
        raise ParseError("non-bit-character", code)
    if code == "":
        return Program(code="", kind="opcodes", ops=(), match=())
    if code[0] == "1":
        return Program(code=code, kind="literal", payload=code[1:])
    body = code[1:]
    if len(body) % 3 != 0:
        raise ParseError("trailing-bits", code)
    ops = tuple(int(body[i : i + 3], 2) for i in range(0, len(body), 3))
    return _program_from_ops(code, ops)


def _program_from_ops(code: str, ops: tuple[int, ...]) -> Program:
    match = [-1] * len(ops)
    stack = []
    for i, op in enumerate(ops):
        if op == LOOP:
            stack.append(i)
        elif op == END:
            if not stack:
                raise ParseError("unmatched-end", code)
            j = stack.pop()
            match[i] = j
            match[j] = i
    if stack:
        raise ParseError("unmatched-loop", code)
    loop_info = {}
    for i, op in enumerate(ops):
        if op == LOOP:
            extent = ops[i + 1 : match[i]]
            silent = not any(o in (OUT0, OUT1, DEC, SWAP) for o in extent)
            loop_info[i] = (silent, LOADN in extent)
    return Program(code=code, kind="opcodes", ops=ops, match=tuple(match),
                   loop_info=loop_info)


def program_from_ops(ops: tuple[int, ...]) -> Program:
    """Build an opcode program directly (enumeration fast path)."""
    code = "0" + "".join(format(op, "03b") for op in ops)
    return _program_from_ops(code, ops)


def unparse(program: Program) -> str:
    return program.code


def _run_literal(payload: str, limits: RunLimits) -> MachineOutcome:
    # closed form for the bit-by-bit emission loop: before each bit the step
    # budget is checked first, then the output cap
    p = len(payload)
    if p <= limits.step_budget and p <= limits.output_cap:
        return MachineOutcome(HALTED, payload, p)
    if limits.step_budget <= limits.output_cap:
        s = limits.step_budget
        return MachineOutcome(STEP_LIMIT, payload[:s], s)
    cap = limits.output_cap
    return MachineOutcome(OUTPUT_LIMIT, payload[:cap], cap)


def run(program: Program, n: int, limits: RunLimits = DEFAULT_LIMITS) -> MachineOutcome:
    """Execute a parsed program on input n under the given limits."""
    if program.kind == "literal":
        return _run_literal(program.payload, limits)
    status, out, steps, _ = _exec(program, n, limits, detect=False)
    return MachineOutcome(status, out, steps)


def resolve(program: Program, n: int, limits: RunLimits = DEFAULT_LIMITS) -> ResolutionStatus:
    """Run with divergence detection.

    Diverges is reported when a (pc, A, B) state recurs with no output
    emitted in between; this is sound because registers saturate at reg_cap
    and output is append-only. Tracking stops (and the run continues to the
    step budget) if the seen-state set would exceed tracked_state_cap.
    """
    if program.kind == "literal":
        out = _run_literal(program.payload, limits)
        if out.status == HALTED:
            return ResolutionStatus(HALTS, outcome=out)
        return ResolutionStatus(UNRESOLVED, reason=out.status)
    status, out, steps, diverged = _exec(program, n, limits, detect=True)
    if diverged:
        return ResolutionStatus(DIVERGES, reason="state-repetition")
    if status == HALTED:
        return ResolutionStatus(HALTS, outcome=MachineOutcome(HALTED, out, steps))
    return ResolutionStatus(UNRESOLVED, reason=status)


def _exec(program: Program, n: int, limits: RunLimits, detect: bool):
    """Core opcode loop. Returns (status, output, steps, diverged)."""
    ops = program.ops
    match = program.match
    loop_info = program.loop_info
    budget = limits.step_budget
    out_cap = limits.output_cap
    reg_cap = limits.reg_cap
    state_cap = limits.tracked_state_cap
    loadn_val = n if n < reg_cap else reg_cap

    out = []
    steps = 0
    pc = 0
    a = 0
    b = 0
    size = len(ops)
    seen = set() if detect else None

    while pc < size:
        if steps == budget:
            return STEP_LIMIT, "".join(out), steps, False
        if seen is not None:
            state = (pc, a, b)
            if state in seen:
                return STEP_LIMIT, "".join(out), steps, True
            seen.add(state)
            if len(seen) > state_cap:
                seen = None
        op = ops[pc]
        if op == OUT0 or op == OUT1:
            if len(out) == out_cap:
                return OUTPUT_LIMIT, "".join(out), steps, False
            out.append("0" if op == OUT0 else "1")
            if seen is not None:
                seen.clear()
            pc += 1
        elif op == INC:
            if a < reg_cap:
                a += 1
            pc += 1
        elif op == DEC:
            if a > 0:
                a -= 1
            pc += 1
        elif op == LOOP:
            if a == 0:
                pc = match[pc] + 1
            else:
                if detect:
                    silent, has_loadn = loop_info[pc]
                    if silent and (not has_loadn or n >= 1):
                        # the extent cannot zero A, emit, or escape: the run
                        # is a silent infinite loop
                        return STEP_LIMIT, "".join(out), steps, True
                pc += 1
        elif op == END:
            pc = match[pc]
        elif op == LOADN:
            a = loadn_val
            pc += 1
        else:  # SWAP
            a, b = b, a
            pc += 1
        steps += 1
    return HALTED, "".join(out), steps, False


# ---------------------------------------------------------------------------
# Program-space enumeration helpers (shared by dovetail/complexity/certlab)

def _opcode_bodies(k: int):
    """Yield all bracket-valid opcode tuples of length k, in lexicographic
    order of their bit encoding (= numeric order of the base-8 digits)."""
    if k == 0:
        yield ()
        return

    # depth-first over digit positions beats filtering 8**k candidates:
    # prune as soon as brackets go negative or cannot close in time
    def rec(prefix, depth):
        remaining = k - len(prefix)
        if remaining == 0:
            if depth == 0:
                yield prefix
            return
        if depth > remaining:
            return
        for op in range(8):
            if op == END and depth == 0:
                continue
            yield from rec(prefix + (op,), depth + (op == LOOP) - (op == END))
    yield from rec((), 0)


def valid_programs(length: int):
    """Yield every valid program of exactly this length, in lexicographic
    order of the code bits (opcode-mode programs first, then literals)."""
    if length == 0:
        yield parse("")
        return
    if (length - 1) % 3 == 0:
        for ops in _opcode_bodies((length - 1) // 3):
            yield program_from_ops(ops)
    half = length - 1
    for v in range(1 << half):
        payload = format(v, f"0{half}b") if half else ""
        yield Program(code="1" + payload, kind="literal", payload=payload)


def count_valid(length: int) -> int:
    """Number of valid programs of exactly this length."""
    if length == 0:
        return 1
    total = 1 << (length - 1)  # literals
    if (length - 1) % 3 == 0:
        total += _count_balanced((length - 1) // 3)
    return total


def _count_balanced(k: int, _cache={}) -> int:
    """Count opcode strings of length k with balanced LOOP/END brackets."""
    if k in _cache:
        return _cache[k]
    # dp[d] = number of prefixes at bracket depth d
    dp = {0: 1}
    for _ in range(k):
        nxt = {}
        for d, ways in dp.items():
            nxt[d] = nxt.get(d, 0) + 6 * ways  # the six non-bracket opcodes
            nxt[d + 1] = nxt.get(d + 1, 0) + ways  # LOOP
            if d > 0:
                nxt[d - 1] = nxt.get(d - 1, 0) + ways  # END
        dp = nxt
    _cache[k] = dp.get(0, 0)
    return _cache[k]
