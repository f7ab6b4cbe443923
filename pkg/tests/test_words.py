import pytest
from hypothesis import given, settings, strategies as st

from primstab.words import (
    CyclicWord,
    Word,
    canonical_class,
    cyclic_reduce,
    cyclic_subword_occurs,
    enumerate_cyclic_words,
    free_reduce,
    letter_from_ascii,
    letter_inverse,
    letter_to_ascii,
    parse_cyclic_word,
    parse_word,
    power,
)

raw_letters = st.lists(st.integers(min_value=0, max_value=3), max_size=14)


def cyclic_words(rank=2, max_len=8):
    return (
        st.lists(st.integers(0, 2 * rank - 1), min_size=1, max_size=max_len)
        .map(lambda ls: free_reduce(ls, rank))
        .filter(lambda w: len(w) > 0)
        .map(lambda w: cyclic_reduce(w)[0])
    )


def test_letter_encoding():
    assert letter_to_ascii(0) == "a"
    assert letter_to_ascii(1) == "A"
    assert letter_to_ascii(4) == "c"
    assert letter_inverse(0) == 1
    assert letter_inverse(5) == 4
    assert letter_from_ascii("B", 2) == 3
    with pytest.raises(ValueError):
        letter_from_ascii("c", 2)
    with pytest.raises(ValueError):
        letter_from_ascii("?", 2)


def test_parse_and_format_round_trip():
    w = parse_word("abAB", 2)
    assert str(w) == "abAB"
    assert len(w) == 4
    assert str(parse_word("", 2)) == ""
    assert str(parse_word("aA", 2)) == ""


def test_word_validates_free_reduction():
    with pytest.raises(ValueError):
        Word((0, 1), 2)
    with pytest.raises(ValueError):
        Word((0, 4), 2)  # letter out of rank
    Word((0, 0, 2), 2)


def test_free_reduce_cancels_nested_pairs():
    # abB A -> a A -> empty
    assert free_reduce((0, 2, 3, 1), 2).letters == ()
    assert free_reduce((0, 2, 2, 3), 2).letters == (0, 2)


@given(raw_letters)
def test_free_reduce_idempotent(ls):
    w = free_reduce(ls, 2)
    assert free_reduce(w.letters, 2) == w


@given(raw_letters, raw_letters)
def test_product_length_subadditive(ls1, ls2):
    u, v = free_reduce(ls1, 2), free_reduce(ls2, 2)
    assert len(u * v) <= len(u) + len(v)


@given(raw_letters)
def test_word_times_inverse_is_trivial(ls):
    w = free_reduce(ls, 2)
    assert len(w * w.inverse()) == 0
    assert w.inverse().inverse() == w


def test_cyclic_reduce_example():
    c, u = cyclic_reduce(parse_word("abA", 2))
    assert str(c) == "b"
    assert str(u) == "a"


def test_cyclic_reduce_trivial_errors():
    with pytest.raises(ValueError, match="trivial"):
        cyclic_reduce(parse_word("", 2))
    with pytest.raises(ValueError, match="trivial"):
        parse_cyclic_word("aA", 2)


@given(raw_letters)
def test_cyclic_reduce_round_trip(ls):
    w = free_reduce(ls, 2)
    if len(w) == 0:
        return
    c, u = cyclic_reduce(w)
    assert u * c.to_word() * u.inverse() == w
    # core really is cyclically reduced
    assert c.letters[0] != c.letters[-1] ^ 1 or len(c) == 1


def test_cyclic_word_rotation_invariance():
    assert CyclicWord.parse("bA", 2) == CyclicWord.parse("Ab", 2)
    assert CyclicWord((2, 1), 2) == CyclicWord((1, 2), 2)
    assert CyclicWord((1, 2), 2).letters == (1, 2)  # A < b already canonical


@given(cyclic_words(), st.integers(0, 7))
def test_cyclic_word_rotations_equal(c, k):
    assert CyclicWord(c.rotated_letters(k), c.rank) == c


def test_cyclic_word_validation():
    with pytest.raises(ValueError, match="cyclically"):
        CyclicWord((0, 2, 1), 2)  # abA wraps a against A
    with pytest.raises(ValueError):
        CyclicWord((0, 1, 0), 2)  # aAa not freely reduced
    with pytest.raises(ValueError, match="trivial"):
        CyclicWord((), 2)


def test_canonical_class_folds_inversion_by_default():
    comm = parse_cyclic_word("abAB", 2)
    assert canonical_class(comm) == canonical_class(comm.inverse_class())
    chiral = parse_cyclic_word("aab", 2)
    assert canonical_class(chiral) == canonical_class(chiral.inverse_class())
    assert canonical_class(chiral, include_inversion=False) != canonical_class(
        chiral.inverse_class(), include_inversion=False
    )


@given(cyclic_words())
def test_canonical_class_is_class_function(c):
    rep = canonical_class(c)
    assert canonical_class(c.inverse_class()) == rep
    assert canonical_class(CyclicWord(c.rotated_letters(1), c.rank)) == rep


def test_power_lengths_and_errors():
    c = parse_cyclic_word("ab", 2)
    assert str(power(c, 3)) == "ababab"
    assert len(power(c, 5)) == 10
    with pytest.raises(ValueError):
        power(c, 0)


@given(cyclic_words(), st.integers(1, 5))
def test_power_never_cancels(c, k):
    assert len(power(c, k)) == k * len(c)


def test_cyclic_occurrence_frozen_cases():
    # oracle: scan host repeated enough times, e.g. "aaabaaab" for host aaab
    assert cyclic_subword_occurs(parse_cyclic_word("aaab", 2), parse_word("aaa", 2))
    # wraparound: "abab" contains "ba" across the seam
    assert cyclic_subword_occurs(parse_cyclic_word("ab", 2), parse_word("ba", 2))
    # pattern longer than host occurs in the periodization
    assert cyclic_subword_occurs(parse_cyclic_word("ab", 2), parse_word("abab", 2))
    # orientation matters: scanning "abABabAB" never meets BAb, but the
    # inverse class baBA contains it ("baBAbaBA"[2:5])
    host = parse_cyclic_word("abAB", 2)
    pat = parse_word("BAb", 2)
    assert not cyclic_subword_occurs(host, pat)
    assert cyclic_subword_occurs(host.inverse_class(), pat)
    assert not cyclic_subword_occurs(parse_cyclic_word("ab", 2), parse_word("aa", 2))
    with pytest.raises(ValueError, match="rank"):
        cyclic_subword_occurs(parse_cyclic_word("ab", 2), parse_word("abc", 3))


@settings(max_examples=200)
@given(cyclic_words(), st.integers(0, 6), st.integers(0, 9))
def test_cyclic_spans_always_occur(host, start, length):
    # spans of the periodization are freely reduced by cyclic reducedness
    pattern = Word(
        tuple(host.letters[(start + i) % len(host)] for i in range(length)),
        host.rank,
    )
    assert cyclic_subword_occurs(host, pattern)


@settings(max_examples=200)
@given(cyclic_words(), raw_letters)
def test_cyclic_occurrence_matches_string_scan(host, ls):
    # independent oracle: substring search on the ASCII serializations
    pattern = free_reduce(ls, host.rank)
    copies = (len(pattern) // len(host)) + 2
    expected = str(pattern) in str(host.to_word()) * copies
    assert cyclic_subword_occurs(host, pattern) == expected


def test_exponent_sums():
    assert parse_word("abAB", 2).exponent_sums() == (0, 0)
    assert parse_word("aaab", 2).exponent_sums() == (3, 1)
    assert parse_cyclic_word("aBB", 2).exponent_sums() == (1, -2)
    w = parse_word("abbA", 2)
    assert w.inverse().exponent_sums() == (0, -2)


def test_enumerate_cyclic_words_counts():
    # rank 2: 4 letters; length 2 pairs excluding inverse neighbors and
    # inverse wraparound are the same set: 4*3 = 12
    assert len(list(enumerate_cyclic_words(2, 1))) == 4
    assert len(list(enumerate_cyclic_words(2, 2))) == 12
    for letters in enumerate_cyclic_words(2, 4):
        CyclicWord(letters, 2)  # all constructible: cyclically reduced
