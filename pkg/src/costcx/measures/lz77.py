"""Self-contained LZ77 codec with a fixed, byte-exact token format.

Layout: 4-byte big-endian original length, then groups of up to eight
tokens, each group led by a flag byte (bit k set = token k is a match,
least significant bit first). A literal is one raw byte. A match is two
bytes of (distance - 1) and two bytes of (length - MIN_MATCH), big-endian.
"""

from __future__ import annotations

import struct

from ..errors import DomainError, InternalError

WINDOW = 32 * 1024
MIN_MATCH = 3
MAX_MATCH = MIN_MATCH + 0xFFFF
MAX_CHAIN = 32
# only the tail of a long match is indexed; earlier positions are
# shadowed by nearer candidates anyway
INSERT_TAIL = 256


def _match_length(data: bytes, i: int, j: int, limit: int) -> int:
    n = 0
    step = 16
    while n < limit:
        step = min(step, limit - n)
        if data[i + n:i + n + step] == data[j + n:j + n + step]:
            n += step
            step *= 2
        elif step == 1:
            break
        else:
            step //= 2
    return n


def compress(data: bytes) -> bytes:
    data = bytes(data)
    size = len(data)
    if size > 0xFFFFFFFF:
        raise DomainError("input larger than 4 GiB")
    out = bytearray(struct.pack(">I", size))
    chains: dict[bytes, list[int]] = {}
    flag_pos = -1
    ntok = 8
    i = 0
    while i < size:
        if ntok == 8:
            flag_pos = len(out)
            out.append(0)
            ntok = 0
        best_len = 0
        best_dist = 0
        if i + MIN_MATCH <= size:
            key = data[i:i + MIN_MATCH]
            chain = chains.get(key)
            if chain is not None:
                limit = min(MAX_MATCH, size - i)
                lo = i - WINDOW
                seen = 0
                for k in range(len(chain) - 1, -1, -1):
                    j = chain[k]
                    if j < lo or seen == MAX_CHAIN:
                        break
                    seen += 1
                    n = _match_length(data, i, j, limit)
                    if n > best_len:
                        best_len, best_dist = n, i - j
                        if n == limit:
                            break
                chain.append(i)
            else:
                chains[key] = [i]
        if best_len >= MIN_MATCH:
            out[flag_pos] |= 1 << ntok
            out += struct.pack(">HH", best_dist - 1, best_len - MIN_MATCH)
            end = i + best_len
            start = max(i + 1, end - INSERT_TAIL)
            for p in range(start, min(end, size - MIN_MATCH + 1)):
                chains.setdefault(data[p:p + MIN_MATCH], []).append(p)
            i = end
        else:
            out.append(data[i])
            i += 1
        ntok += 1
    return bytes(out)


def decompress(blob: bytes) -> tuple[bytes, int]:
    """Return (data, step count).

    A literal costs one step; a match costs one step to decode plus one per
    byte copied.
    """
    if len(blob) < 4:
        raise DomainError("truncated stream header")
    (size,) = struct.unpack_from(">I", blob, 0)
    out = bytearray()
    steps = 0
    pos = 4
    end = len(blob)
    while len(out) < size:
        if pos >= end:
            raise DomainError("truncated stream")
        flags = blob[pos]
        pos += 1
        for k in range(8):
            if len(out) >= size:
                break
            if flags >> k & 1:
                if pos + 4 > end:
                    raise DomainError("truncated match token")
                dist, length = struct.unpack_from(">HH", blob, pos)
                pos += 4
                dist += 1
                length += MIN_MATCH
                if dist > len(out):
                    raise DomainError("match distance reaches before stream start")
                start = len(out) - dist
                if dist >= length:
                    out += out[start:start + length]
                else:
                    pattern = bytes(out[start:])
                    out += (pattern * (length // dist + 1))[:length]
                steps += 1 + length
            else:
                if pos >= end:
                    raise DomainError("truncated literal")
                out.append(blob[pos])
                pos += 1
                steps += 1
    if len(out) != size or pos != end:
        raise DomainError("stream length does not match its header")
    return bytes(out), steps


def _roundtrip(data: bytes) -> tuple[bytes, int]:
    if len(data) == 0:
        raise DomainError("data must be non-empty")
    blob = compress(data)
    restored, steps = decompress(blob)
    if restored != data:
        raise InternalError("LZ77 round trip mismatch")
    return blob, steps


def description_length_proxy(data: bytes) -> tuple[int, float]:
    """Compressed size and compression ratio, an upper-bound proxy for
    description length."""
    data = bytes(data)
    blob, _ = _roundtrip(data)
    return len(blob), len(blob) / len(data)


def logical_depth_proxy(data: bytes) -> int:
    """Decoder operation count needed to regenerate `data` from its
    compressed form."""
    _, steps = _roundtrip(bytes(data))
    return steps
