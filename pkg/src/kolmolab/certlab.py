"""Bounded lower-bound certificates for time-bounded complexity.

A certificate is an exhaustive-enumeration record for the statement
C^s(x|n) >= m: every valid program of length < m was run for s steps on
input n and none halted with output x. Issuing re-runs the machine, so a
certificate can only ever assert a resource-bounded lower bound; there is
deliberately no operation that emits an unbounded one.

Also hosts the gap calculator: the largest N with N <= log2(N) + c, the
regime a c-sized prover cannot rule out.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from multiprocessing import Pool
from typing import Mapping, Optional

from . import tbvm
from .tbvm import DEFAULT_LIMITS, Program, RunLimits

TALLY_FIELDS = ("halted_other", "diverged", "step_limited", "output_limited")
CERT_VERSION = 1

REASON_WITNESS = "witness-found"
REASON_TALLY = "tally-mismatch"
REASON_MALFORMED = "malformed"


class WitnessExists(Exception):
    """A program shorter than m outputs x: the statement is false."""

    def __init__(self, program: Program, statement: "BoundedLowerBoundStatement"):
        self.program = program
        self.statement = statement
        super().__init__(
            f"program {program.code!r} of length {len(program.code)} "
            f"outputs the target within budget")


class NotFoundWithinBudget(Exception):
    """No candidate certified within the stage budget."""


@dataclass(frozen=True)
class BoundedLowerBoundStatement:
    """C^s(x|n) >= m, with the step budget s part of the claim."""
    x_bits: str
    n: int
    m: int
    s: int

    def __post_init__(self):
        if not tbvm.is_bits(self.x_bits):
            raise ValueError("x_bits must be a bit string")
        if self.n != len(self.x_bits):
            raise ValueError("n must equal l(x)")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.s < 1:
            raise ValueError("s must be >= 1")


@dataclass(frozen=True)
class LengthTally:
    """Resolution counts for all valid programs of one length."""
    halted_other: int = 0
    diverged: int = 0
    step_limited: int = 0
    output_limited: int = 0

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in TALLY_FIELDS}


@dataclass(frozen=True)
class BoundedLowerBoundCertificate:
    statement: BoundedLowerBoundStatement
    tally: Mapping[int, LengthTally]  # one entry per length 0..m-1
    limits: RunLimits  # caps in force when issued; step_budget == statement.s
    version: int = CERT_VERSION


@dataclass(frozen=True)
class VerificationReport:
    accepted: bool
    reason: Optional[str] = None  # witness-found | tally-mismatch | malformed
    detail: str = ""
    witness_bits: Optional[str] = None


def _classify(res: tbvm.ResolutionStatus, x: str) -> str:
    """Tally bucket for one resolved program; 'witness' when it outputs x."""
    if res.kind == tbvm.HALTS:
        return "witness" if res.outcome.output == x else "halted_other"
    if res.kind == tbvm.DIVERGES:
        return "diverged"
    return "step_limited" if res.reason == tbvm.STEP_LIMIT else "output_limited"


def _resolve_shard(args):
    codes, n, limits = args
    out = []
    for code in codes:
        res = tbvm.resolve(tbvm.parse(code), n, limits)
        output = res.outcome.output if res.kind == tbvm.HALTS else None
        out.append((code, res.kind, res.reason, output))
    return out


def _literal_tally(length: int, x: str, limits: RunLimits):
    """Closed-form tally of the 2^(length-1) literals of one length.

    Returns (counts, witness_code). Every literal of a length shares one
    outcome; the only possible witness is the literal of x itself.
    """
    payload_len = length - 1
    count = 1 << payload_len
    counts = dict.fromkeys(TALLY_FIELDS, 0)
    if payload_len <= min(limits.step_budget, limits.output_cap):
        witness = "1" + x if payload_len == len(x) else None
        counts["halted_other"] = count - (1 if witness else 0)
        return counts, witness
    if limits.step_budget <= limits.output_cap:
        counts["step_limited"] = count
    else:
        counts["output_limited"] = count
    return counts, None


def _scan_length(x: str, n: int, length: int, limits: RunLimits,
                 workers: int = 1):
    """Tally every valid program of one length; witness = lex-first program
    halting with output x, or None."""
    counts = dict.fromkeys(TALLY_FIELDS, 0)
    codes = []
    for prog in tbvm.valid_programs(length):
        if prog.kind == "literal":
            break  # literals of this length are tallied in closed form
        codes.append(prog.code)
    witnesses = []
    if workers > 1 and len(codes) > workers:
        shards = [(codes[i::workers], n, limits) for i in range(workers)]
        with Pool(workers) as pool:
            shard_results = pool.map(_resolve_shard, shards)
        for results in shard_results:
            for code, kind, reason, output in results:
                if kind == tbvm.HALTS and output == x:
                    witnesses.append(code)
                elif kind == tbvm.HALTS:
                    counts["halted_other"] += 1
                elif kind == tbvm.DIVERGES:
                    counts["diverged"] += 1
                elif reason == tbvm.STEP_LIMIT:
                    counts["step_limited"] += 1
                else:
                    counts["output_limited"] += 1
    else:
        for code in codes:
            bucket = _classify(tbvm.resolve(tbvm.parse(code), n, limits), x)
            if bucket == "witness":
                return counts, code  # codes arrive in lex order
            counts[bucket] += 1
    if length >= 1:
        literal_counts, literal_witness = _literal_tally(length, x, limits)
        if witnesses:
            return counts, min(witnesses)  # same length: lex = discovery order
        for name in TALLY_FIELDS:
            counts[name] += literal_counts[name]
        if literal_witness is not None:
            return counts, literal_witness
    elif witnesses:
        return counts, min(witnesses)
    return counts, None


def issue(x: str, n: int, m: int, s: int,
          limits: RunLimits = DEFAULT_LIMITS,
          workers: int = 1) -> BoundedLowerBoundCertificate:
    """Exhaustively run every valid program of length < m for s steps on
    input n; certify iff none halts with output x.

    Raises WitnessExists (carrying the lex-first witness) when the statement
    is false. Cost grows exponentially in m.
    """
    statement = BoundedLowerBoundStatement(x_bits=x, n=n, m=m, s=s)
    run_limits = replace(limits, step_budget=s)
    tally = {}
    for length in range(m):
        counts, witness = _scan_length(x, n, length, run_limits, workers)
        if witness is not None:
            raise WitnessExists(tbvm.parse(witness), statement)
        tally[length] = LengthTally(**counts)
    return BoundedLowerBoundCertificate(statement=statement, tally=tally,
                                        limits=run_limits)


# ---------------------------------------------------------------------------
# serialization

def cert_to_dict(cert: BoundedLowerBoundCertificate) -> dict:
    return {
        "version": cert.version,
        "statement": {
            "x_bits": cert.statement.x_bits,
            "n": cert.statement.n,
            "m": cert.statement.m,
            "s": cert.statement.s,
        },
        "tally": {str(length): entry.as_dict()
                  for length, entry in sorted(cert.tally.items())},
        "limits": {
            "output_cap": cert.limits.output_cap,
            "reg_cap": cert.limits.reg_cap,
            "tracked_state_cap": cert.limits.tracked_state_cap,
        },
    }


class MalformedCertificate(ValueError):
    pass


def _require(cond: bool, detail: str):
    if not cond:
        raise MalformedCertificate(detail)


def cert_from_dict(doc) -> BoundedLowerBoundCertificate:
    """Rebuild a certificate from its JSON form; strict about structure but
    not about tally coverage (verify reports missing lengths as a mismatch,
    not as malformed input)."""
    _require(isinstance(doc, dict), "certificate must be a JSON object")
    _require(doc.get("version") == CERT_VERSION,
             f"unsupported version {doc.get('version')!r}")
    unknown = set(doc) - {"version", "statement", "tally", "limits"}
    _require(not unknown, f"unknown fields {sorted(unknown)}")
    stmt = doc.get("statement")
    _require(isinstance(stmt, dict), "statement must be an object")
    _require(set(stmt) == {"x_bits", "n", "m", "s"},
             "statement needs exactly x_bits, n, m, s")
    _require(isinstance(stmt["x_bits"], str), "x_bits must be a string")
    for name in ("n", "m", "s"):
        _require(isinstance(stmt[name], int) and not isinstance(stmt[name], bool),
                 f"{name} must be an integer")
    try:
        statement = BoundedLowerBoundStatement(**stmt)
    except ValueError as err:
        raise MalformedCertificate(str(err)) from err
    lim = doc.get("limits")
    _require(isinstance(lim, dict), "limits must be an object")
    _require(set(lim) == {"output_cap", "reg_cap", "tracked_state_cap"},
             "limits needs exactly output_cap, reg_cap, tracked_state_cap")
    for name, value in lim.items():
        _require(isinstance(value, int) and not isinstance(value, bool)
                 and value >= 1, f"{name} must be a positive integer")
    limits = RunLimits(step_budget=statement.s, **lim)
    raw_tally = doc.get("tally")
    _require(isinstance(raw_tally, dict), "tally must be an object")
    tally = {}
    for key, entry in raw_tally.items():
        _require(isinstance(key, str) and key.isdigit(),
                 f"tally key {key!r} must be a decimal length")
        _require(isinstance(entry, dict) and set(entry) == set(TALLY_FIELDS),
                 f"tally entry for length {key} needs exactly {TALLY_FIELDS}")
        for name, value in entry.items():
            _require(isinstance(value, int) and not isinstance(value, bool)
                     and value >= 0, f"count {name} at length {key} invalid")
        tally[int(key)] = LengthTally(**entry)
    return BoundedLowerBoundCertificate(statement=statement, tally=tally,
                                        limits=limits)


# ---------------------------------------------------------------------------
# verification

def verify_document(doc, workers: int = 1) -> VerificationReport:
    """Re-enumerate per the statement and accept iff no witness exists and
    the recomputed tallies match the recorded ones exactly."""
    try:
        cert = cert_from_dict(doc)
    except MalformedCertificate as err:
        return VerificationReport(accepted=False, reason=REASON_MALFORMED,
                                  detail=str(err))
    stmt = cert.statement
    recomputed = {}
    for length in range(stmt.m):
        counts, witness = _scan_length(stmt.x_bits, stmt.n, length,
                                       cert.limits, workers)
        if witness is not None:
            return VerificationReport(
                accepted=False, reason=REASON_WITNESS,
                detail=f"length-{len(witness)} program outputs the target",
                witness_bits=witness)
        recomputed[length] = LengthTally(**counts)
    if recomputed != dict(cert.tally):
        missing = sorted(set(recomputed) - set(cert.tally))
        extra = sorted(set(cert.tally) - set(recomputed))
        if missing:
            detail = f"tally is missing lengths {missing}"
        elif extra:
            detail = f"tally has extra lengths {extra}"
        else:
            wrong = sorted(length for length in recomputed
                           if recomputed[length] != cert.tally[length])
            detail = f"counts disagree at lengths {wrong}"
        return VerificationReport(accepted=False, reason=REASON_TALLY,
                                  detail=detail)
    return VerificationReport(accepted=True)


def verify(cert: BoundedLowerBoundCertificate,
           workers: int = 1) -> VerificationReport:
    return verify_document(cert_to_dict(cert), workers=workers)


# ---------------------------------------------------------------------------
# searching for certifiably hard sequences

def search_high_complexity(N: int, max_stage: int, s: int,
                           limits: RunLimits = DEFAULT_LIMITS,
                           workers: int = 1):
    """First (x, certificate) with C^s(x|l(x)) >= N+1, candidates ordered by
    length then lexicographically; candidate lengths run up to max_stage.

    Every find is budget-relative by construction. Raises
    NotFoundWithinBudget when no candidate length <= max_stage works.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if max_stage < 0:
        raise ValueError("max_stage must be >= 0")
    run_limits = replace(limits, step_budget=s)
    for length in range(max_stage + 1):
        # every x of this length has a literal witness below N+1: skip
        if length + 1 <= N and length <= min(s, limits.output_cap):
            continue
        witnessed = set()
        for prog_length in range(N + 1):
            for prog in tbvm.valid_programs(prog_length):
                if prog.kind == "literal":
                    break  # wrong output length or over budget: never a hit
                res = tbvm.resolve(prog, length, run_limits)
                if res.kind == tbvm.HALTS and len(res.outcome.output) == length:
                    witnessed.add(res.outcome.output)
        if len(witnessed) == 1 << length:
            continue
        for value in range(1 << length):
            x = format(value, f"0{length}b") if length else ""
            if x not in witnessed:
                return x, issue(x, length, N + 1, s, limits=limits,
                                workers=workers)
    raise NotFoundWithinBudget(
        f"no sequence of length <= {max_stage} certifies at m = {N + 1}")


# ---------------------------------------------------------------------------
# the gap

def chaitin_gap(c: int) -> int:
    """Largest N >= 1 with N <= log2(N) + c, or 0 when none exists.

    Integer test: N <= log2(N) + c iff N <= c or 2^(N-c) <= N. Beyond
    N = 2c + 4 the inequality always fails, so the scan stops there.
    """
    if c < 0:
        raise ValueError("c must be >= 0")
    best = 0
    for candidate in range(1, 2 * c + 5):
        if candidate <= c or (1 << (candidate - c)) <= candidate:
            best = candidate
    return best
