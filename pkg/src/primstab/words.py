"""Exact arithmetic on words in a free group of finite rank.

Letters are encoded as small ints: the letter ``2*i`` is the i-th
generator and ``2*i + 1`` is its inverse, so taking inverses is ``^ 1``
and the natural int order gives the letter order a < a^-1 < b < b^-1 < ...
used for canonical forms.  The ASCII convention maps generator i to the
i-th lowercase letter and its inverse to the uppercase letter, so
``"abAB"`` is the commutator of the first two generators.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "Word",
    "CyclicWord",
    "letter",
    "letter_index",
    "letter_is_inverted",
    "letter_inverse",
    "letter_to_ascii",
    "letter_from_ascii",
    "parse_word",
    "parse_cyclic_word",
    "free_reduce",
    "cyclic_reduce",
    "canonical_class",
    "power",
    "cyclic_subword_occurs",
    "enumerate_cyclic_words",
]

MAX_RANK = 26  # one lowercase ASCII letter per generator


def letter(generator_index: int, inverted: bool = False) -> int:
    if generator_index < 0:
        raise ValueError("generator index must be nonnegative")
    return 2 * generator_index + (1 if inverted else 0)


def letter_index(ltr: int) -> int:
    return ltr >> 1


def letter_is_inverted(ltr: int) -> bool:
    return bool(ltr & 1)


def letter_inverse(ltr: int) -> int:
    return ltr ^ 1


def letter_to_ascii(ltr: int) -> str:
    idx = ltr >> 1
    if idx >= MAX_RANK:
        raise ValueError("rank beyond 26 has no ASCII form")
    base = ord("A") if ltr & 1 else ord("a")
    return chr(base + idx)


def letter_from_ascii(ch: str, rank: int) -> int:
    if "a" <= ch <= "z":
        ltr = 2 * (ord(ch) - ord("a"))
    elif "A" <= ch <= "Z":
        ltr = 2 * (ord(ch) - ord("A")) + 1
    else:
        raise ValueError(f"invalid letter {ch!r}")
    if (ltr >> 1) >= rank:
        raise ValueError(f"letter {ch!r} exceeds rank {rank}")
    return ltr


def _check_letters(letters: tuple[int, ...], rank: int) -> None:
    if not 1 <= rank <= MAX_RANK:
        raise ValueError(f"rank must be between 1 and {MAX_RANK}")
    for ltr in letters:
        if not 0 <= ltr < 2 * rank:
            raise ValueError(f"letter {ltr} out of range for rank {rank}")


def _is_freely_reduced(letters: tuple[int, ...]) -> bool:
    return all(letters[i] != letters[i + 1] ^ 1 for i in range(len(letters) - 1))


@dataclass(frozen=True)
class Word:
    """A freely reduced word, with the rank it lives in.

    >>> w = parse_word("abA", 2)
    >>> str(w), len(w)
    ('abA', 3)
    >>> str(w * w.inverse())
    ''
    """

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        _check_letters(self.letters, self.rank)
        if not _is_freely_reduced(self.letters):
            raise ValueError("word is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(letter_to_ascii(ltr) for ltr in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r}, rank={self.rank})"

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return free_reduce(self.letters + other.letters, self.rank)

    def inverse(self) -> "Word":
        return Word(tuple(ltr ^ 1 for ltr in reversed(self.letters)), self.rank)

    def exponent_sums(self) -> tuple[int, ...]:
        sums = [0] * self.rank
        for ltr in self.letters:
            sums[ltr >> 1] += -1 if ltr & 1 else 1
        return tuple(sums)


def _canonical_rotation_index(letters: tuple[int, ...]) -> int:
    n = len(letters)
    doubled = letters + letters
    return min(range(n), key=lambda k: doubled[k:k + n])


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced word up to rotation.

    The constructor normalizes to the least rotation in letter order, so
    two rotations of the same word compare equal.

    >>> CyclicWord.parse("bA", 2) == CyclicWord.parse("Ab", 2)
    True
    """

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        _check_letters(self.letters, self.rank)
        if not self.letters:
            raise ValueError("trivial element")
        if not _is_freely_reduced(self.letters):
            raise ValueError("word is not freely reduced")
        if len(self.letters) > 1 and self.letters[-1] == self.letters[0] ^ 1:
            raise ValueError("word is not cyclically reduced")
        k = _canonical_rotation_index(self.letters)
        if k:
            rotated = self.letters[k:] + self.letters[:k]
            object.__setattr__(self, "letters", rotated)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(letter_to_ascii(ltr) for ltr in self.letters)

    def __repr__(self) -> str:
        return f"CyclicWord({str(self)!r}, rank={self.rank})"

    def to_word(self) -> Word:
        return Word(self.letters, self.rank)

    def inverse_class(self) -> "CyclicWord":
        return CyclicWord(tuple(ltr ^ 1 for ltr in reversed(self.letters)), self.rank)

    def rotated_letters(self, k: int) -> tuple[int, ...]:
        k %= len(self.letters)
        return self.letters[k:] + self.letters[:k]

    def exponent_sums(self) -> tuple[int, ...]:
        return self.to_word().exponent_sums()

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.letters), self.letters)

    @staticmethod
    def parse(text: str, rank: int) -> "CyclicWord":
        return parse_cyclic_word(text, rank)


def parse_word(text: str, rank: int) -> Word:
    letters = tuple(letter_from_ascii(ch, rank) for ch in text)
    return free_reduce(letters, rank)


def parse_cyclic_word(text: str, rank: int) -> CyclicWord:
    cyc, _ = cyclic_reduce(parse_word(text, rank))
    return cyc


def free_reduce(letters, rank: int) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for ltr in letters:
        if stack and stack[-1] == ltr ^ 1:
            stack.pop()
        else:
            stack.append(ltr)
    return Word(tuple(stack), rank)


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    """Split w as u * c * u^-1 with c cyclically reduced.

    Returns (c, u).  The conjugator u absorbs the rotation that the
    CyclicWord constructor applies, so the identity
    ``w == u * c.to_word() * u.inverse()`` holds exactly.
    """
    letters = w.letters
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == letters[hi - 1] ^ 1:
        lo += 1
        hi -= 1
    core = letters[lo:hi]
    if not core:
        raise ValueError("trivial element")
    k = _canonical_rotation_index(core)
    conjugator = Word(letters[:lo] + core[:k], w.rank)
    return CyclicWord(core, w.rank), conjugator


def canonical_class(c: CyclicWord, include_inversion: bool = True) -> CyclicWord:
    """Canonical representative of the conjugacy class of c.

    With include_inversion (the default) the class of c and of c^-1 get
    the same representative, which is the right notion for unoriented
    curves; pass False to keep orientations distinct.
    """
    if not include_inversion:
        return c
    inv = c.inverse_class()
    return c if c.sort_key() <= inv.sort_key() else inv


def power(c: CyclicWord, k: int) -> Word:
    """The word c^k; no cancellation can occur since c is cyclically reduced."""
    if k < 1:
        raise ValueError("exponent must be positive")
    return Word(c.letters * k, c.rank)


def cyclic_subword_occurs(host: CyclicWord, pattern: Word) -> bool:
    """True iff pattern occurs in the bi-infinite periodization of host.

    Equivalent to scanning host repeated ceil(|pattern|/|host|) + 1
    times, which covers every starting offset.  Orientation matters: a
    pattern may occur in the periodization of host^-1 but not of host.
    """
    if host.rank != pattern.rank:
        raise ValueError("rank mismatch")
    pat = pattern.letters
    if not pat:
        return True
    m = len(host.letters)
    copies = -(-len(pat) // m) + 1
    text = host.letters * copies
    return any(text[i:i + len(pat)] == pat for i in range(m))


def enumerate_cyclic_words(rank: int, length: int):
    """Yield the letter tuples of all cyclically reduced words of the given length."""
    if length < 1:
        return
    alphabet = range(2 * rank)
    if length == 1:
        for ltr in alphabet:
            yield (ltr,)
        return
    for first in alphabet:
        prefix = [first]

        def extend(pos: int):
            if pos == length:
                if prefix[-1] != prefix[0] ^ 1:
                    yield tuple(prefix)
                return
            for ltr in alphabet:
                if ltr == prefix[-1] ^ 1:
                    continue
                prefix.append(ltr)
                yield from extend(pos + 1)
                prefix.pop()

        yield from extend(1)
