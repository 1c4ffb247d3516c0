import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from costcx import DomainError
from costcx.measures import SymbolDistribution, shannon_entropy

# mpmath, 50 digits: -(0.1 log2 0.1 + 0.9 log2 0.9)
TEN_NINETY = 0.46899559358928122


@pytest.mark.parametrize(
    "counts, expected, tol",
    [
        ({"tea": 50, "time": 50}, 1.0, 1e-12),
        ({"tea": 10, "time": 90}, 0.469, 5e-4),
        ({"a": 100}, 0.0, 0.0),
        ({"a": 1, "b": 1, "c": 1, "d": 1}, 2.0, 0.0),
    ],
)
def test_examples(counts, expected, tol):
    assert abs(shannon_entropy(counts) - expected) <= tol


def test_ten_ninety_high_precision():
    assert shannon_entropy({"tea": 10, "time": 90}) == pytest.approx(TEN_NINETY, abs=1e-15)


def test_zero_counts_contribute_nothing():
    assert shannon_entropy({"a": 5, "b": 5, "c": 0}) == 1.0


def test_empty_is_domain_error():
    with pytest.raises(DomainError):
        shannon_entropy({})
    with pytest.raises(DomainError):
        shannon_entropy({"a": 0})


def test_negative_count_rejected():
    with pytest.raises(DomainError):
        SymbolDistribution({"a": -1})


def test_from_text_tokenizes_on_whitespace():
    d = SymbolDistribution.from_text("tea time\ntea  Tea")
    assert d.counts == {"tea": 2, "time": 1, "Tea": 1}
    assert SymbolDistribution.from_text("tea Tea", lowercase=True).counts == {"tea": 2}


counts_st = st.lists(st.integers(0, 1000), min_size=1, max_size=12).filter(lambda c: sum(c) > 0)


@given(counts_st)
def test_bounds(counts):
    dist = {i: c for i, c in enumerate(counts)}
    h = shannon_entropy(dist)
    s = sum(1 for c in counts if c > 0)
    assert 0.0 <= h <= math.log2(s) if s > 1 else h == 0.0
    positive = {c for c in counts if c > 0}
    if len(positive) == 1:
        assert h == math.log2(s)
    else:
        assert h < math.log2(s)


@given(counts_st, st.randoms())
def test_permutation_invariance(counts, rnd):
    labels = list(range(len(counts)))
    rnd.shuffle(labels)
    a = shannon_entropy({i: c for i, c in enumerate(counts)})
    b = shannon_entropy({labels[i]: c for i, c in enumerate(counts)})
    assert a == pytest.approx(b, abs=1e-12)
