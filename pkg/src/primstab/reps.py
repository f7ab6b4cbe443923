"""Representations of a free group into PSL(2, C) and stability metrics.

For each primitive conjugacy class the broken geodesic through the orbit
of a base point is compared against a genuine geodesic: the lower slope
and additive defect measure the quasi-geodesic quality of the path, and
the axis margin measures how far the path strays from the invariant
axis of the image isometry.  A uniform positive slope and bounded
margin across all primitive classes is the behavior these diagnostics
are designed to surface; individual degenerate classes (image not
loxodromic) are flagged rather than treated as errors.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .h3 import (
    H3Point,
    IsometryType,
    MoebiusMap,
    act_h3,
    axis,
    classify,
    dist_h3,
    dist_to_geodesic,
    near_parabolic,
    translation_length,
)
from .whitehead import enumerate_primitive_classes
from .words import CyclicWord, Word

__all__ = [
    "Representation",
    "OrbitPath",
    "PSMetrics",
    "LengthTrend",
    "PSSummary",
    "PSReport",
    "CertificateStatus",
    "DEFAULT_BASE_POINT",
    "DEFAULT_SCHOTTKY_S",
    "evaluate",
    "orbit_path",
    "ps_metrics",
    "ps_report",
    "default_repetitions",
    "make_schottky_pair",
    "make_sanov",
    "make_punctured_torus",
    "ping_pong_certificate",
    "rep_to_json",
    "rep_from_json",
    "load_representation",
    "resolve_workers",
]

DEFAULT_BASE_POINT = H3Point(0.0, 1.0)
DEFAULT_SCHOTTKY_S = 2.0 * math.log(4.0)

RENORM_EVERY = 32
# Past this entry size the determinant of the stored floats is all
# cancellation noise, so renormalizing would corrupt the matrix.
RENORM_SCALE_LIMIT = 1e6


@dataclass(frozen=True)
class Representation:
    """Images of the free generators under a homomorphism to PSL(2, C)."""

    rank: int
    generator_images: tuple[MoebiusMap, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generator_images", tuple(self.generator_images))
        if len(self.generator_images) != self.rank:
            raise ValueError("need one image per generator")
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @cached_property
    def letter_maps(self) -> tuple[MoebiusMap, ...]:
        maps = []
        for g in self.generator_images:
            maps.append(g)
            maps.append(g.inverse())
        return tuple(maps)


def _renorm_step(m: MoebiusMap, step: int) -> MoebiusMap:
    if step % RENORM_EVERY == 0 and m.entry_scale() < RENORM_SCALE_LIMIT:
        return m.renormalized()
    return m


def evaluate(rho: Representation, w: "Word | CyclicWord") -> MoebiusMap:
    """Image matrix of a word, built left to right.

    Drift is damped by renormalizing every 32 multiplications while the
    entries are small enough for the determinant to be meaningful.
    Raises OverflowError once entries leave double range.
    """
    if w.rank != rho.rank:
        raise ValueError("rank mismatch")
    maps = rho.letter_maps
    m = MoebiusMap.identity()
    for step, ltr in enumerate(w.letters, 1):
        m = m @ maps[ltr]
        m = _renorm_step(m, step)
    return m


@dataclass(frozen=True)
class OrbitPath:
    """Orbit of the base point along the bi-infinite periodic word.

    Vertex j is the image of the base point under the prefix of the
    periodized word from position 0 to j (inverted prefix for j < 0).
    Indices run from -floor(mR/2) to ceil(mR/2).
    """

    word: CyclicWord
    repetitions: int
    base: H3Point
    offset: int
    vertices: tuple[H3Point, ...]

    @property
    def index_range(self) -> range:
        return range(self.offset, self.offset + len(self.vertices))

    def vertex(self, j: int) -> H3Point:
        if j not in self.index_range:
            raise IndexError(f"vertex index {j} outside {self.index_range}")
        return self.vertices[j - self.offset]


def default_repetitions(word_length: int) -> int:
    """Smallest R with word_length * R >= 60 and R >= 4."""
    return max(4, -(-60 // word_length))


def orbit_path(
    rho: Representation,
    c: CyclicWord,
    repetitions: int | None = None,
    base: H3Point = DEFAULT_BASE_POINT,
) -> OrbitPath:
    """Sample the orbit of the base point along c repeated R times."""
    if c.rank != rho.rank:
        raise ValueError("rank mismatch")
    m = len(c)
    reps = default_repetitions(m) if repetitions is None else repetitions
    if reps < 2:
        raise ValueError("need at least two repetitions")
    total = m * reps
    lo = -(total // 2)
    hi = total - total // 2
    maps = rho.letter_maps
    letters = c.letters

    forward: list[H3Point] = []
    mat = MoebiusMap.identity()
    for j in range(hi):
        mat = mat @ maps[letters[j % m]]
        mat = _renorm_step(mat, j + 1)
        forward.append(act_h3(mat, base))
    backward: list[H3Point] = []
    mat = MoebiusMap.identity()
    for j in range(-1, lo - 1, -1):
        mat = mat @ maps[letters[j % m] ^ 1]
        mat = _renorm_step(mat, -j)
        backward.append(act_h3(mat, base))

    vertices = tuple(reversed(backward)) + (base,) + tuple(forward)
    return OrbitPath(c, reps, base, lo, vertices)


@dataclass(frozen=True)
class PSMetrics:
    """Stability diagnostics for one conjugacy class.

    slope_lower is the least distance-per-index over vertex pairs at
    least `window` apart; additive_defect is the worst additive loss
    against unit speed; axis_margin is the farthest the orbit strays
    from the axis (infinite when there is no loxodromic axis). A class
    is degenerate when its image is not loxodromic.  Overflow rows keep
    the flags but carry no numbers.
    """

    word: CyclicWord
    word_length: int
    trace_class: IsometryType | None
    near_parabolic: bool
    translation_length: float
    slope_lower: float
    slope_upper: float
    additive_defect: float
    axis_margin: float
    degenerate: bool
    overflow: bool = False


def ps_metrics(
    rho: Representation,
    c: CyclicWord,
    repetitions: int | None = None,
    window: int = 5,
    base: H3Point = DEFAULT_BASE_POINT,
    tol_parabolic: float = 1e-9,
) -> PSMetrics:
    """Quasi-geodesic diagnostics of the orbit path of one class.

    Pair distances are computed from fresh segment products rather than
    differences of far-out vertex coordinates, which would cancel
    catastrophically.  Axis margins are exactly periodic along the path
    (the axis is invariant under the image of c), so one period
    suffices.
    """
    if c.rank != rho.rank:
        raise ValueError("rank mismatch")
    if window < 1:
        raise ValueError("window must be positive")
    m = len(c)
    reps = default_repetitions(m) if repetitions is None else repetitions
    if reps < 2:
        raise ValueError("need at least two repetitions")
    maps = rho.letter_maps
    letters = c.letters
    total = m * reps
    lo = -(total // 2)
    hi = total - total // 2

    image = evaluate(rho, c)
    kind = classify(image, tol_parabolic)
    nearp = near_parabolic(image)
    degenerate = kind != IsometryType.LOXODROMIC
    if kind == IsometryType.ELLIPTIC:
        tl = 0.0
    else:
        tl = translation_length(image, tol_parabolic)

    slope_lower = math.inf
    slope_upper = 0.0
    defect = 0.0
    for i in range(lo, hi):
        seg = MoebiusMap.identity()
        for j in range(i + 1, hi + 1):
            seg = seg @ maps[letters[(j - 1) % m]]
            seg = _renorm_step(seg, j - i)
            d = dist_h3(base, act_h3(seg, base))
            sep = j - i
            if sep == 1 and d > slope_upper:
                slope_upper = d
            if sep >= window:
                slope_lower = min(slope_lower, d / sep)
            if sep - d > defect:
                defect = sep - d

    if degenerate:
        margin = math.inf
    else:
        geo = axis(image, tol_parabolic)
        prefix = MoebiusMap.identity()
        margin = dist_to_geodesic(base, geo)
        for j in range(m - 1):
            prefix = prefix @ maps[letters[j]]
            margin = max(margin, dist_to_geodesic(act_h3(prefix, base), geo))

    return PSMetrics(
        word=c,
        word_length=m,
        trace_class=kind,
        near_parabolic=nearp,
        translation_length=tl,
        slope_lower=slope_lower,
        slope_upper=slope_upper,
        additive_defect=defect,
        axis_margin=margin,
        degenerate=degenerate,
    )


def _overflow_row(c: CyclicWord) -> PSMetrics:
    nan = math.nan
    return PSMetrics(
        word=c,
        word_length=len(c),
        trace_class=None,
        near_parabolic=False,
        translation_length=nan,
        slope_lower=nan,
        slope_upper=nan,
        additive_defect=nan,
        axis_margin=math.inf,
        degenerate=True,
        overflow=True,
    )


class CertificateStatus(Enum):
    CERTIFIED = "certified"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class LengthTrend:
    length: int
    n_classes: int
    min_slope_lower: float
    max_axis_margin: float


@dataclass(frozen=True)
class PSSummary:
    min_slope_lower: float
    max_axis_margin: float
    degenerate_count: int
    near_parabolic_count: int
    overflow_count: int
    certificate: CertificateStatus
    by_length: tuple[LengthTrend, ...]


@dataclass(frozen=True)
class PSReport:
    label: str
    rank: int
    max_length: int
    repetitions: "int | None"
    window: int
    base: H3Point
    rows: tuple[PSMetrics, ...]
    summary: PSSummary


def resolve_workers(max_workers: int | None, n_tasks: int) -> int:
    """Worker count: explicit argument, else PRIMSTAB_THREADS, else CPU count."""
    env = os.environ.get("PRIMSTAB_THREADS")
    cap = None
    if env is not None:
        try:
            cap = max(1, int(env))
        except ValueError:
            cap = None
    if max_workers is not None:
        workers = max(1, max_workers)
        if cap is not None:
            workers = min(workers, cap)
    else:
        workers = cap if cap is not None else min(8, os.cpu_count() or 1)
    return max(1, min(workers, max(1, n_tasks)))


def ps_report(
    rho: Representation,
    max_length: int,
    repetitions: int | None = None,
    window: int = 5,
    base: H3Point = DEFAULT_BASE_POINT,
    include_inversion: bool = True,
    tol_parabolic: float = 1e-9,
    max_workers: int | None = None,
) -> PSReport:
    """Metrics for every primitive class up to max_length, plus a summary.

    Rows always come out in the canonical enumeration order no matter
    how many workers run; a class whose evaluation overflows becomes an
    overflow row instead of aborting the report.
    """
    classes = enumerate_primitive_classes(rho.rank, max_length, include_inversion)

    def one(c: CyclicWord) -> PSMetrics:
        try:
            return ps_metrics(rho, c, repetitions, window, base, tol_parabolic)
        except OverflowError:
            return _overflow_row(c)

    workers = resolve_workers(max_workers, len(classes))
    if workers == 1:
        rows = tuple(one(c) for c in classes)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(one, classes))

    try:
        certificate = ping_pong_certificate(rho)
    except ValueError:
        certificate = CertificateStatus.UNKNOWN

    good = [r for r in rows if not r.overflow]
    trends = []
    for length in sorted({r.word_length for r in rows}):
        bucket = [r for r in rows if r.word_length == length]
        finite = [r for r in bucket if not r.overflow]
        trends.append(
            LengthTrend(
                length=length,
                n_classes=len(bucket),
                min_slope_lower=min((r.slope_lower for r in finite), default=math.nan),
                max_axis_margin=max((r.axis_margin for r in finite), default=math.nan),
            )
        )
    summary = PSSummary(
        min_slope_lower=min((r.slope_lower for r in good), default=math.nan),
        max_axis_margin=max((r.axis_margin for r in good), default=math.nan),
        degenerate_count=sum(r.degenerate for r in rows),
        near_parabolic_count=sum(r.near_parabolic for r in rows),
        overflow_count=sum(r.overflow for r in rows),
        certificate=certificate,
        by_length=tuple(trends),
    )
    return PSReport(
        label=rho.label,
        rank=rho.rank,
        max_length=max_length,
        repetitions=repetitions,
        window=window,
        base=base,
        rows=rows,
        summary=summary,
    )


def make_schottky_pair(s: float = DEFAULT_SCHOTTKY_S) -> Representation:
    """Two loxodromic translations of length s along crossing axes.

    The first translates along the vertical axis over 0, the second
    along the geodesic from -1 to 1; both have translation length s.
    """
    if s <= 0:
        raise ValueError("translation length must be positive")
    h = s / 2.0
    first = MoebiusMap(math.exp(h), 0.0, 0.0, math.exp(-h))
    second = MoebiusMap(math.cosh(h), math.sinh(h), math.sinh(h), math.cosh(h))
    return Representation(2, (first, second), label=f"schottky(s={s:.6g})")


def make_sanov() -> Representation:
    """Parabolic translations by 2 horizontally and by 2 along the unit circle."""
    return Representation(
        2,
        (MoebiusMap(1.0, 2.0, 0.0, 1.0), MoebiusMap(1.0, 0.0, 2.0, 1.0)),
        label="sanov",
    )


def make_punctured_torus() -> Representation:
    """Integer matrices with parabolic commutator (trace -2)."""
    return Representation(
        2,
        (MoebiusMap(1.0, 1.0, 1.0, 2.0), MoebiusMap(1.0, -1.0, -1.0, 2.0)),
        label="punctured-torus",
    )


# Fixed generic conjugation used before reading off isometric circles;
# it moves infinity to a point no sensible example fixes.
_CERT_FRAME = MoebiusMap.from_entries(1.0, -1.0j, 1.0, 1.0j)
_CERT_FRAME_INV = _CERT_FRAME.inverse()


def ping_pong_certificate(
    rho: Representation, separation_tol: float = 1e-9
) -> CertificateStatus:
    """Certify freeness and discreteness from disjoint isometric discs.

    All generators and inverses are conjugated into a fixed generic
    frame; if every isometric disc is disjoint from every other, the
    ping-pong argument applies and the group is free, discrete, and
    purely loxodromic.  Tangent or overlapping discs prove nothing, so
    the answer is then Unknown.  Separation must exceed separation_tol
    to count, keeping tangency (parabolic commutators, Sanov-type
    generators) out of the certified set.
    """
    discs = []
    for g in rho.generator_images:
        for m in (g, g.inverse()):
            conj = _CERT_FRAME @ m @ _CERT_FRAME_INV
            if abs(conj.c) < 1e-12:
                raise ValueError(
                    "a generator fixes infinity in the certificate frame; "
                    "choose a different normalization"
                )
            center = -conj.d / conj.c
            radius = 1.0 / abs(conj.c)
            discs.append((center, radius))
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            ci, ri = discs[i]
            cj, rj = discs[j]
            if abs(ci - cj) <= ri + rj + separation_tol:
                return CertificateStatus.UNKNOWN
    return CertificateStatus.CERTIFIED


def rep_to_json(rho: Representation) -> dict:
    """JSON layout: each generator is a 2x2 matrix of [re, im] pairs."""

    def entry(x: complex) -> list[float]:
        return [x.real, x.imag]

    return {
        "rank": rho.rank,
        "label": rho.label,
        "generators": [
            [[entry(g.a), entry(g.b)], [entry(g.c), entry(g.d)]]
            for g in rho.generator_images
        ],
    }


def rep_from_json(data: dict) -> Representation:
    """Parse and normalize a representation; singular matrices are rejected."""
    try:
        rank = int(data["rank"])
        label = str(data.get("label", ""))
        gens = data["generators"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed representation: {exc}") from exc
    if len(gens) != rank:
        raise ValueError("generator count does not match rank")
    images = []
    for g in gens:
        try:
            (a, b), (c, d) = g
            entries = [complex(x[0], x[1]) for x in (a, b, c, d)]
        except (TypeError, ValueError, IndexError) as exc:
            raise ValueError(f"malformed generator matrix: {exc}") from exc
        images.append(MoebiusMap.from_entries(*entries))
    return Representation(rank, tuple(images), label)


_BUILTINS = {
    "schottky": make_schottky_pair,
    "sanov": make_sanov,
    "ptorus": make_punctured_torus,
}


def load_representation(source: str) -> Representation:
    """Load from a JSON file, or resolve a builtin:name without touching disk."""
    import json

    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        if name not in _BUILTINS:
            known = ", ".join(sorted(_BUILTINS))
            raise ValueError(f"unknown builtin {name!r} (known: {known})")
        return _BUILTINS[name]()
    with open(source) as fh:
        return rep_from_json(json.load(fh))
