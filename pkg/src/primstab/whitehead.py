"""Whitehead graphs, Whitehead automorphisms, and primitivity decisions.

The Whitehead graph of a cyclic word has one vertex per letter (2n
vertices in rank n) and one edge {u, v^-1} for every cyclically adjacent
pair (u, v) of the word, wraparound included.  A connected graph with no
cut vertex certifies that the word is not part of any free splitting of
the group, hence in particular not primitive; the converse direction is
decided separately by length minimization over Whitehead automorphisms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache

from .words import (
    CyclicWord,
    Word,
    canonical_class,
    cyclic_reduce,
    cyclic_subword_occurs,
    enumerate_cyclic_words,
    free_reduce,
    letter_to_ascii,
    power,
)
from .words import _canonical_rotation_index

__all__ = [
    "WhiteheadGraph",
    "ConnectivityReport",
    "SeparabilityVerdict",
    "LetterPermutation",
    "WhiteheadMove",
    "PrimitivityVerdict",
    "BlockingReport",
    "whitehead_graph",
    "connectivity_report",
    "whitehead_separability_test",
    "all_letter_permutations",
    "all_whitehead_automorphisms",
    "apply_automorphism",
    "apply_to_class",
    "minimize",
    "enumerate_primitive_classes",
    "primitivity_oracle",
    "blocking_witness",
    "graph_to_dot",
    "graph_to_adjacency",
]


@dataclass
class WhiteheadGraph:
    """Undirected multigraph on the 2n letters, with edge multiplicities.

    Edge keys are ordered pairs (u, v) with u <= v; loops are legal keys
    even though they never arise from a cyclically reduced word.
    """

    rank: int
    multiplicities: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (u, v), m in self.multiplicities.items():
            if not (0 <= u <= v < 2 * self.rank):
                raise ValueError(f"bad edge key ({u}, {v})")
            if m < 1:
                raise ValueError("multiplicities must be positive")

    @property
    def vertices(self) -> range:
        return range(2 * self.rank)

    def total_multiplicity(self) -> int:
        return sum(self.multiplicities.values())

    def simple_adjacency(self) -> dict[int, set[int]]:
        """Underlying simple graph, loops dropped."""
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for (u, v) in self.multiplicities:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj


def whitehead_graph(c: CyclicWord) -> WhiteheadGraph:
    """Whitehead graph of a cyclic word: edge {u, v^-1} per cyclic bigram (u, v)."""
    mult: dict[tuple[int, int], int] = {}
    letters = c.letters
    n = len(letters)
    for i in range(n):
        u = letters[i]
        v = letters[(i + 1) % n] ^ 1
        key = (u, v) if u <= v else (v, u)
        mult[key] = mult.get(key, 0) + 1
    return WhiteheadGraph(c.rank, mult)


@dataclass(frozen=True)
class ConnectivityReport:
    is_connected: bool
    cut_vertices: tuple[int, ...]


def connectivity_report(g: WhiteheadGraph) -> ConnectivityReport:
    """Connectivity over the full 2n-vertex set, plus articulation points.

    Cut vertices are computed on the underlying simple graph, so loops
    and multiplicities never influence them.
    """
    adj = g.simple_adjacency()
    verts = list(g.vertices)

    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    connected = len(seen) == len(verts)

    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    counter = itertools.count()

    def dfs(u: int, parent: int | None):
        disc[u] = low[u] = next(counter)
        children = 0
        for v in adj[u]:
            if v not in disc:
                children += 1
                dfs(v, u)
                low[u] = min(low[u], low[v])
                if parent is not None and low[v] >= disc[u]:
                    cuts.add(u)
            elif v != parent:
                low[u] = min(low[u], disc[v])
        if parent is None and children > 1:
            cuts.add(u)

    for v in verts:
        if v not in disc:
            dfs(v, None)

    return ConnectivityReport(connected, tuple(sorted(cuts)))


class SeparabilityVerdict(Enum):
    NOT_SEPARABLE = "not-separable"
    INCONCLUSIVE = "inconclusive"


def whitehead_separability_test(c: CyclicWord) -> SeparabilityVerdict:
    """One-directional graph test.

    A connected Whitehead graph without cut vertices rules out
    separability (and with it primitivity).  Anything else is
    inconclusive: the graph alone never certifies the positive
    direction.
    """
    rep = connectivity_report(whitehead_graph(c))
    if rep.is_connected and not rep.cut_vertices:
        return SeparabilityVerdict.NOT_SEPARABLE
    return SeparabilityVerdict.INCONCLUSIVE


@dataclass(frozen=True)
class LetterPermutation:
    """Automorphism permuting generators and flipping signs (letter-wise relabeling)."""

    rank: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != 2 * self.rank:
            raise ValueError("need one image per letter")
        if sorted(self.images) != list(range(2 * self.rank)):
            raise ValueError("images must be a bijection on letters")
        for ltr in range(2 * self.rank):
            if self.images[ltr ^ 1] != self.images[ltr] ^ 1:
                raise ValueError("images must respect inverses")

    @cached_property
    def letter_images(self) -> tuple[tuple[int, ...], ...]:
        return tuple((img,) for img in self.images)

    def __str__(self) -> str:
        pairs = ", ".join(
            f"{letter_to_ascii(2 * g)}->{letter_to_ascii(self.images[2 * g])}"
            for g in range(self.rank)
        )
        return f"perm({pairs})"


@dataclass(frozen=True)
class WhiteheadMove:
    """Type-II Whitehead automorphism given by a letter set and a multiplier.

    The multiplier a lies in the cut set while a^-1 does not.  A letter
    x picks up a on the left when x is in the cut set and a^-1 on the
    right when x^-1 is, while a itself is fixed.
    """

    rank: int
    cut: frozenset[int]
    multiplier: int

    def __post_init__(self):
        if not 0 <= self.multiplier < 2 * self.rank:
            raise ValueError("bad multiplier")
        if self.multiplier not in self.cut or self.multiplier ^ 1 in self.cut:
            raise ValueError("need multiplier in cut set and its inverse outside")
        for ltr in self.cut:
            if not 0 <= ltr < 2 * self.rank:
                raise ValueError(f"letter {ltr} out of range")

    @cached_property
    def letter_images(self) -> tuple[tuple[int, ...], ...]:
        a = self.multiplier
        images = []
        for ltr in range(2 * self.rank):
            if ltr == a or ltr == a ^ 1:
                images.append((ltr,))
                continue
            img: tuple[int, ...] = (ltr,)
            if ltr in self.cut:
                img = (a,) + img
            if ltr ^ 1 in self.cut:
                img = img + (a ^ 1,)
            images.append(img)
        return tuple(images)

    def __str__(self) -> str:
        letters = ",".join(letter_to_ascii(ltr) for ltr in sorted(self.cut))
        return f"({{{letters}}}, {letter_to_ascii(self.multiplier)})"


WhiteheadAutomorphism = LetterPermutation | WhiteheadMove


@lru_cache(maxsize=None)
def all_letter_permutations(rank: int) -> tuple[LetterPermutation, ...]:
    """All signed generator permutations: n! * 2^n of them, identity included."""
    out = []
    for perm in itertools.permutations(range(rank)):
        for signs in itertools.product((0, 1), repeat=rank):
            images = [0] * (2 * rank)
            for g in range(rank):
                for inv in (0, 1):
                    images[2 * g + inv] = 2 * perm[g] + (inv ^ signs[g])
            out.append(LetterPermutation(rank, tuple(images)))
    return tuple(out)


@lru_cache(maxsize=None)
def all_whitehead_automorphisms(rank: int) -> tuple[WhiteheadMove, ...]:
    """All type-II moves acting nontrivially: 2n * (2^(2n-2) - 1) of them.

    The enumeration order is fixed (multiplier ascending, then cut set
    by bitmask over the remaining letters), so greedy minimization is
    deterministic.
    """
    out = []
    for a in range(2 * rank):
        others = [ltr for ltr in range(2 * rank) if ltr != a and ltr != a ^ 1]
        for mask in range(1, 1 << len(others)):
            cut = frozenset(
                [a] + [ltr for bit, ltr in enumerate(others) if mask >> bit & 1]
            )
            out.append(WhiteheadMove(rank, cut, a))
    return tuple(out)


def apply_automorphism(phi: WhiteheadAutomorphism, w: Word) -> Word:
    """Image of a word under the automorphism, freely reduced."""
    if phi.rank != w.rank:
        raise ValueError("rank mismatch")
    images = phi.letter_images
    out: list[int] = []
    for ltr in w.letters:
        out.extend(images[ltr])
    return free_reduce(out, w.rank)


def apply_to_class(phi: WhiteheadAutomorphism, c: CyclicWord) -> CyclicWord:
    """Image of a conjugacy class: apply, then reduce cyclically."""
    return cyclic_reduce(apply_automorphism(phi, c.to_word()))[0]


@dataclass(frozen=True)
class PrimitivityVerdict:
    is_primitive: bool
    minimal_length: int
    trace: tuple[tuple[WhiteheadMove, CyclicWord], ...]
    minimal_word: CyclicWord

    def __post_init__(self):
        if self.is_primitive != (self.minimal_length == 1):
            raise ValueError("primitive means minimal length one")


def minimize(c: CyclicWord) -> PrimitivityVerdict:
    """Greedy cyclic-length descent over type-II Whitehead moves.

    Takes the first strictly shortening move in the fixed enumeration
    order and repeats until none shortens.  Peak reduction guarantees
    the terminal length is minimal over the automorphism orbit, so the
    word is primitive exactly when the terminal length is 1.
    """
    moves = all_whitehead_automorphisms(c.rank)
    trace: list[tuple[WhiteheadMove, CyclicWord]] = []
    current = c
    improved = True
    while improved:
        improved = False
        for phi in moves:
            image = apply_to_class(phi, current)
            if len(image) < len(current):
                trace.append((phi, image))
                current = image
                improved = True
                break
    return PrimitivityVerdict(
        is_primitive=len(current) == 1,
        minimal_length=len(current),
        trace=tuple(trace),
        minimal_word=current,
    )


@lru_cache(maxsize=None)
def _primitive_classes_cached(
    rank: int, max_length: int, include_inversion: bool
) -> tuple[CyclicWord, ...]:
    seen: set[CyclicWord] = set()
    primitives: list[CyclicWord] = []
    for length in range(1, max_length + 1):
        for letters in enumerate_cyclic_words(rank, length):
            if _canonical_rotation_index(letters) != 0:
                continue  # same class will appear in canonical rotation
            rep = canonical_class(CyclicWord(letters, rank), include_inversion)
            if rep in seen:
                continue
            seen.add(rep)
            if minimize(rep).is_primitive:
                primitives.append(rep)
    return tuple(sorted(primitives, key=CyclicWord.sort_key))


def enumerate_primitive_classes(
    rank: int, max_length: int, include_inversion: bool = True
) -> tuple[CyclicWord, ...]:
    """All primitive conjugacy classes of cyclic length <= max_length.

    Classes are deduplicated up to rotation, and up to inversion as well
    unless include_inversion is False.  Sorted by length, then letter
    order.  Results are cached per (rank, bound) since enumeration
    dominates the cost of everything built on top of it.
    """
    if max_length < 1:
        return ()
    return _primitive_classes_cached(rank, max_length, include_inversion)


@lru_cache(maxsize=None)
def _primitive_closure(rank: int, bound: int, depth: int) -> frozenset[CyclicWord]:
    autos: tuple[WhiteheadAutomorphism, ...] = (
        all_whitehead_automorphisms(rank) + all_letter_permutations(rank)
    )
    start = canonical_class(CyclicWord((0,), rank))
    seen = {start}
    frontier = [start]
    for _ in range(depth):
        if not frontier:
            break
        fresh: list[CyclicWord] = []
        for cur in frontier:
            for phi in autos:
                image = canonical_class(apply_to_class(phi, cur))
                if len(image) <= bound and image not in seen:
                    seen.add(image)
                    fresh.append(image)
        frontier = fresh
    if frontier:
        raise RuntimeError("closure did not stabilize; increase depth")
    return frozenset(seen)


def primitivity_oracle(c: CyclicWord, depth: int = 64) -> bool:
    """Decide primitivity independently of minimize.

    Closes the class of the first generator under all Whitehead
    automorphisms, pruning any image longer than c, and tests
    membership.  Every primitive class of length <= |c| is reached
    because a shortening chain for it stays within the length bound when
    reversed.  Intended for small rank and length; the closure is cached
    per (rank, bound).
    """
    closure = _primitive_closure(c.rank, len(c), depth)
    return canonical_class(c) in closure


@dataclass(frozen=True)
class BlockingReport:
    """Bounded-evidence search for a power of g avoided by all short primitives."""

    word: CyclicWord
    n_max: int
    l_max: int
    witness_n: int | None
    bound_limited: bool
    classes_checked: int

    @property
    def evidence_label(self) -> str:
        return f"bounded evidence (n <= {self.n_max}, primitive length <= {self.l_max})"


def blocking_witness(g: CyclicWord, n_max: int = 4, l_max: int = 10) -> BlockingReport:
    """Least n <= n_max with g^n in no primitive class of length <= l_max.

    Occurrence is cyclic and checked in both orientations of each class,
    since the class list folds inverses together.  If g itself is longer
    than l_max the search is vacuous: n = 1 is reported immediately and
    flagged bound-limited.  Either way the result is evidence up to the
    stated bounds, not a proof.
    """
    if n_max < 1 or l_max < 1:
        raise ValueError("bounds must be positive")
    if len(g) > l_max:
        return BlockingReport(g, n_max, l_max, 1, True, 0)
    classes = enumerate_primitive_classes(g.rank, l_max)
    for n in range(1, n_max + 1):
        pattern = power(g, n)
        found = any(
            cyclic_subword_occurs_either(c, pattern) for c in classes
        )
        if not found:
            return BlockingReport(g, n_max, l_max, n, False, len(classes))
    return BlockingReport(g, n_max, l_max, None, False, len(classes))


def cyclic_subword_occurs_either(host: CyclicWord, pattern: Word) -> bool:
    """Occurrence in the periodization of host or of its inverse."""
    return cyclic_subword_occurs(host, pattern) or cyclic_subword_occurs(
        host.inverse_class(), pattern
    )


def graph_to_dot(g: WhiteheadGraph) -> str:
    """DOT text for the graph; output is a pure function of the graph."""
    lines = ["graph whitehead {", "  node [shape=circle];"]
    for v in g.vertices:
        lines.append(f'  "{letter_to_ascii(v)}";')
    for (u, v) in sorted(g.multiplicities):
        m = g.multiplicities[(u, v)]
        lines.append(
            f'  "{letter_to_ascii(u)}" -- "{letter_to_ascii(v)}" [label="{m}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_adjacency(g: WhiteheadGraph) -> dict:
    """JSON-friendly adjacency map: vertex -> {neighbor: multiplicity}."""
    adjacency: dict[str, dict[str, int]] = {
        letter_to_ascii(v): {} for v in g.vertices
    }
    for (u, v), m in sorted(g.multiplicities.items()):
        lu, lv = letter_to_ascii(u), letter_to_ascii(v)
        adjacency[lu][lv] = m
        if u != v:
            adjacency[lv][lu] = m
    return {"rank": g.rank, "adjacency": adjacency}
