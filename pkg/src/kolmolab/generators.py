"""Reference bit sources: SHA-1 counter-mode stream, binary expansion of pi,
deterministic calibration patterns, and RNG-dump file ingestion.

Bit order is MSB-first everywhere: digest bytes, raw file bytes, hex digits.
Every source is pure and prefix-coherent (the first k bits do not depend on
how many bits were requested).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from urllib.parse import parse_qs

PATTERN_KINDS = ("const0", "const1", "alternating", "counter")
FILE_FORMATS = ("raw", "ascii01", "hex")


class SourceError(ValueError):
    """Unusable source spec or source data (domain error)."""


class SourceURIError(ValueError):
    """Malformed source URI (usage error)."""


# ---------------------------------------------------------------------------
# SHA-1 (FIPS 180), written out longhand: the counter stream below needs
# bit-exact, dependency-free digests

_H0 = (0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476, 0xC3D2E1F0)
_MASK = 0xFFFFFFFF


def _rotl(v: int, k: int) -> int:
    return ((v << k) | (v >> (32 - k))) & _MASK


def sha1_digest(message: bytes) -> bytes:
    """20-byte SHA-1 digest of the message."""
    ml = len(message) * 8
    padded = message + b"\x80" + b"\x00" * ((55 - len(message)) % 64)
    padded += struct.pack(">Q", ml)
    h0, h1, h2, h3, h4 = _H0
    for off in range(0, len(padded), 64):
        w = list(struct.unpack(">16I", padded[off:off + 64]))
        for t in range(16, 80):
            w.append(_rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1))
        a, b, c, d, e = h0, h1, h2, h3, h4
        for t in range(80):
            if t < 20:
                f, k = (b & c) | (~b & d), 0x5A827999
            elif t < 40:
                f, k = b ^ c ^ d, 0x6ED9EBA1
            elif t < 60:
                f, k = (b & c) | (b & d) | (c & d), 0x8F1BBCDC
            else:
                f, k = b ^ c ^ d, 0xCA62C1D6
            a, b, c, d, e = ((_rotl(a, 5) + f + e + k + w[t]) & _MASK,
                             a, _rotl(b, 30), c, d)
        h0 = (h0 + a) & _MASK
        h1 = (h1 + b) & _MASK
        h2 = (h2 + c) & _MASK
        h3 = (h3 + d) & _MASK
        h4 = (h4 + e) & _MASK
    return struct.pack(">5I", h0, h1, h2, h3, h4)


def sha1_hex(message: bytes) -> str:
    return sha1_digest(message).hex()


def bytes_to_bits(data: bytes) -> str:
    return "".join(format(byte, "08b") for byte in data)


def sha1_stream(seed: bytes, count: int) -> str:
    """Counter-mode stream: digests of seed || i (8-byte big-endian),
    concatenated MSB-first and truncated to count bits."""
    if count < 0:
        raise ValueError("count must be >= 0")
    chunks = []
    total = 0
    index = 0
    while total < count:
        chunks.append(bytes_to_bits(sha1_digest(seed + struct.pack(">Q", index))))
        total += 160
        index += 1
    return "".join(chunks)[:count]


# ---------------------------------------------------------------------------
# pi

def _atan_inv_scaled(q: int, prec: int) -> int:
    """floor-ish arctan(1/q) * 2^prec via the alternating series."""
    total = 0
    power = (1 << prec) // q
    k = 0
    qq = q * q
    while power:
        term = power // (2 * k + 1)
        total += term if k % 2 == 0 else -term
        power //= qq
        k += 1
    return total


def pi_bits(count: int) -> str:
    """First count bits of the fractional part of pi (MSB-first).

    Machin's formula with integer fixed-point arithmetic; 64 guard bits keep
    the truncation error far below the last requested bit.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return ""
    prec = count + 64
    pi_scaled = 16 * _atan_inv_scaled(5, prec) - 4 * _atan_inv_scaled(239, prec)
    frac = pi_scaled - (3 << prec)
    return format(frac, f"0{prec}b")[:count]


# ---------------------------------------------------------------------------
# patterns and files

def pattern_bits(kind: str, count: int) -> str:
    if count < 0:
        raise ValueError("count must be >= 0")
    if kind == "const0":
        return "0" * count
    if kind == "const1":
        return "1" * count
    if kind == "alternating":
        return ("01" * (count // 2 + 1))[:count]
    if kind == "counter":
        chunks = []
        total = 0
        i = 0
        while total < count:
            rep = format(i, "b")
            chunks.append(rep)
            total += len(rep)
            i += 1
        return "".join(chunks)[:count]
    raise SourceError(f"unknown pattern kind {kind!r}")


def ingest_file(path: str, fmt: str = "raw") -> str:
    """Read a whole file as bits. raw: bytes MSB-first; ascii01: '0'/'1'
    characters, whitespace skipped; hex: 4 bits per digit, whitespace
    skipped."""
    if fmt not in FILE_FORMATS:
        raise SourceError(f"unknown file format {fmt!r}")
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as err:
        raise SourceError(f"cannot read {path}: {err}") from err
    if fmt == "raw":
        return bytes_to_bits(data)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as err:
        raise SourceError(f"{path} is not ASCII as {fmt} requires") from err
    bits = []
    for ch in text:
        if ch.isspace():
            continue
        if fmt == "ascii01":
            if ch not in "01":
                raise SourceError(f"invalid character {ch!r} for ascii01")
            bits.append(ch)
        else:
            if ch not in "0123456789abcdefABCDEF":
                raise SourceError(f"invalid character {ch!r} for hex")
            bits.append(format(int(ch, 16), "04b"))
    return "".join(bits)


# ---------------------------------------------------------------------------
# source URIs

@dataclass(frozen=True)
class SourceSpec:
    kind: str  # sha1 | pi | const0 | const1 | alternating | counter | file
    seed: bytes = b""
    path: str = ""
    fmt: str = "raw"


def parse_source_uri(uri: str) -> SourceSpec:
    """sha1:<hex-seed>, pi:, const0:, const1:, alt:, counter:,
    file:<path>?format=raw|ascii01|hex"""
    if ":" not in uri:
        raise SourceURIError(f"missing scheme in source URI {uri!r}")
    scheme, rest = uri.split(":", 1)
    if scheme == "sha1":
        try:
            seed = bytes.fromhex(rest)
        except ValueError as err:
            raise SourceURIError(f"sha1 seed must be hex: {rest!r}") from err
        return SourceSpec(kind="sha1", seed=seed)
    if scheme in ("pi", "const0", "const1", "counter", "alt"):
        if rest:
            raise SourceURIError(f"{scheme}: takes no argument, got {rest!r}")
        kind = "alternating" if scheme == "alt" else scheme
        return SourceSpec(kind=kind)
    if scheme == "file":
        path = rest.split("?", 1)[0]
        if not path:
            raise SourceURIError("file: needs a path")
        fmt = "raw"
        if "?" in rest:
            params = parse_qs(rest.split("?", 1)[1])
            values = params.get("format", ["raw"])
            fmt = values[-1]
            if fmt not in FILE_FORMATS:
                raise SourceURIError(f"unknown file format {fmt!r}")
            unknown = set(params) - {"format"}
            if unknown:
                raise SourceURIError(f"unknown file parameters {sorted(unknown)}")
        return SourceSpec(kind="file", path=path, fmt=fmt)
    raise SourceURIError(f"unknown source scheme {scheme!r}")


def bits_from_source(spec: SourceSpec, count: int) -> str:
    """Produce exactly count bits; a file shorter than the request is an
    explicit error, never a silent short read."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if spec.kind == "sha1":
        return sha1_stream(spec.seed, count)
    if spec.kind == "pi":
        return pi_bits(count)
    if spec.kind in PATTERN_KINDS:
        return pattern_bits(spec.kind, count)
    if spec.kind == "file":
        bits = ingest_file(spec.path, spec.fmt)
        if len(bits) < count:
            raise SourceError(
                f"{spec.path} provides {len(bits)} bits, {count} requested")
        return bits[:count]
    raise SourceError(f"unknown source kind {spec.kind!r}")
