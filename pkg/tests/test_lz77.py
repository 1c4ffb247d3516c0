import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from costcx import DomainError
from costcx.measures import compress, decompress, description_length_proxy, logical_depth_proxy
from costcx.measures import lz77

MILLIONS = b"million" * 10**6


def corpus():
    rng = np.random.default_rng(2024)
    return [
        b"x",
        b"ab",
        b"abc",
        b"aaaa",
        b"abcabcabcabcabc",
        b"\x00" * 70_000,
        b"million " * 5000,
        rng.bytes(5000),
        bytes(rng.integers(0, 4, 20_000, dtype=np.uint8)),
        rng.bytes(40_000) + rng.bytes(40_000)[:100] * 3,
        ("The quick brown fox jumps over the lazy dog. " * 300).encode(),
        bytes(range(256)) * 300,
    ]


@pytest.mark.parametrize("data", corpus(), ids=range(len(corpus())))
def test_round_trip_corpus(data):
    blob = compress(data)
    out, _ = decompress(blob)
    assert out == data


@settings(max_examples=200, deadline=None)
@given(st.binary(min_size=1, max_size=3000))
def test_round_trip_property(data):
    assert decompress(compress(data))[0] == data


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([b"ab", b"abc", b"million", b"z"]), min_size=1, max_size=400))
def test_round_trip_repetitive(parts):
    data = b"".join(parts)
    assert decompress(compress(data))[0] == data


def test_match_beyond_window_not_used():
    rng = np.random.default_rng(1)
    head = rng.bytes(64)
    data = head + rng.bytes(lz77.WINDOW + 10) + head
    blob = compress(data)
    assert decompress(blob)[0] == data
    # no match token can reach the repeated head: the tail costs 64 literals
    _, steps = decompress(blob)
    assert steps >= len(data)


def test_millions_ratio():
    clen, ratio = description_length_proxy(MILLIONS)
    assert ratio < 0.01
    assert clen == len(compress(MILLIONS))


def test_random_megabyte_ratio():
    data = np.random.default_rng(7).bytes(2**20)
    assert description_length_proxy(data)[1] > 0.95


def test_single_byte():
    assert description_length_proxy(b"q")[1] >= 1.0
    assert logical_depth_proxy(b"q") == 1


def test_depth_grows_with_output_length():
    small = b"million" * 10**4
    d_small = logical_depth_proxy(small)
    d_large = logical_depth_proxy(MILLIONS)
    assert d_large / d_small == pytest.approx(len(MILLIONS) / len(small), rel=0.01)
    assert description_length_proxy(MILLIONS)[0] < 1000


def test_depth_is_not_length():
    n = 64 * 1024
    rnd = np.random.default_rng(9).bytes(n)
    rep = (b"abcdefg" * n)[:n]
    r_rnd = description_length_proxy(rnd)[1]
    r_rep = description_length_proxy(rep)[1]
    assert r_rnd / r_rep > 100
    d_rnd, d_rep = logical_depth_proxy(rnd), logical_depth_proxy(rep)
    assert 0.5 < d_rnd / d_rep < 2.0


def test_deterministic_bytes():
    data = b"abracadabra " * 1000
    assert compress(data) == compress(data)
    assert logical_depth_proxy(data) == logical_depth_proxy(data)


def test_empty_rejected():
    with pytest.raises(DomainError):
        description_length_proxy(b"")
    with pytest.raises(DomainError):
        logical_depth_proxy(b"")


@pytest.mark.parametrize("blob", [b"", b"\x00\x00", b"\x00\x00\x00\x05\x00ab", b"\x00\x00\x00\x04\x01\x00\x05\x00\x00"])
def test_corrupt_streams(blob):
    with pytest.raises(DomainError):
        decompress(blob)
