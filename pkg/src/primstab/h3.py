"""Upper half-space model of hyperbolic 3-space and its isometries.

Points are (z, t) with z complex and t > 0; the sphere at infinity is
the complex plane plus a point at infinity, represented by the float
``inf``.  Isometries are determinant-one complex 2x2 matrices acting by
Moebius maps on the boundary and by the Poincare extension inside, with
the matrix and its negative giving the same isometry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "INFINITY",
    "H3Point",
    "MoebiusMap",
    "BoundaryGeodesic",
    "IsometryType",
    "chordal_distance",
    "classify",
    "near_parabolic",
    "fixed_points",
    "translation_length",
    "axis",
    "act_h3",
    "dist_h3",
    "transport_to_vertical",
    "dist_to_geodesic",
    "format_sphere_point",
]

INFINITY = float("inf")

SpherePoint = "complex | float"


def _is_infinity(p) -> bool:
    return isinstance(p, float) and math.isinf(p)


def format_sphere_point(p) -> str:
    if _is_infinity(p):
        return "inf"
    p = complex(p)
    if p.imag == 0:
        return format(p.real, "g")
    return format(p, "g")


def chordal_distance(p, q) -> float:
    """Distance on the boundary sphere in the round metric of diameter 2."""
    if _is_infinity(p) and _is_infinity(q):
        return 0.0
    if _is_infinity(p):
        return 2.0 / math.sqrt(1.0 + abs(complex(q)) ** 2)
    if _is_infinity(q):
        return 2.0 / math.sqrt(1.0 + abs(complex(p)) ** 2)
    p, q = complex(p), complex(q)
    return 2.0 * abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


@dataclass(frozen=True)
class H3Point:
    """Interior point (z, t), t > 0."""

    z: complex
    t: float

    def __post_init__(self):
        z = complex(self.z)
        t = float(self.t)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "t", t)
        if not (cmath.isfinite(z) and math.isfinite(t)):
            raise ValueError("point coordinates must be finite")
        if t <= 0:
            raise ValueError("height must be positive")

    def __str__(self) -> str:
        return f"({self.z.real:g}{self.z.imag:+g}i, {self.t:g})"


@dataclass(frozen=True)
class MoebiusMap:
    """Determinant-one 2x2 complex matrix, up to sign as an isometry.

    The determinant check is scale-aware: for a product with huge
    entries the determinant of the stored floats cannot be measured
    better than eps * |a d| anyway, so the tolerance grows with the
    entry size instead of rejecting exact products of valid maps.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        if not all(cmath.isfinite(x) for x in (a, b, c, d)):
            raise OverflowError("matrix entries overflowed double precision")
        det = a * d - b * c
        scale = 1.0 + abs(a * d) + abs(b * c)
        if abs(det - 1.0) > 1e-9 * scale:
            raise ValueError(f"determinant {det:.6g} is not 1; use from_entries")

    @staticmethod
    def from_entries(a, b, c, d) -> "MoebiusMap":
        """Normalize an arbitrary nonsingular matrix to determinant one."""
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if abs(det) <= 1e-14:
            raise ValueError("matrix is numerically singular")
        s = cmath.sqrt(det)
        return MoebiusMap(a / s, b / s, c / s, d / s)

    @staticmethod
    def identity() -> "MoebiusMap":
        return MoebiusMap(1, 0, 0, 1)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def renormalized(self) -> "MoebiusMap":
        return MoebiusMap.from_entries(self.a, self.b, self.c, self.d)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def entry_scale(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def apply_sphere(self, p):
        """Action on the boundary sphere."""
        if _is_infinity(p):
            return self.a / self.c if self.c != 0 else INFINITY
        p = complex(p)
        den = self.c * p + self.d
        if den == 0:
            return INFINITY
        return (self.a * p + self.b) / den

    def __str__(self) -> str:
        return f"[[{self.a:g}, {self.b:g}], [{self.c:g}, {self.d:g}]]"


class IsometryType(Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    LOXODROMIC = "loxodromic"


def classify(m: MoebiusMap, tol_parabolic: float = 1e-9) -> IsometryType:
    """Type of the isometry from the squared trace.

    The squared trace is sign-independent.  Identity means the matrix is
    within 1e-9 of plus or minus the identity entrywise; parabolic means
    the squared trace is within tol_parabolic of 4; elliptic means it is
    real in [0, 4); everything else is loxodromic.
    """
    near_id = max(
        abs(m.a - 1), abs(m.b), abs(m.c), abs(m.d - 1)
    ) < 1e-9 or max(abs(m.a + 1), abs(m.b), abs(m.c), abs(m.d + 1)) < 1e-9
    if near_id:
        return IsometryType.IDENTITY
    tau = m.trace * m.trace
    if abs(tau - 4.0) < tol_parabolic:
        return IsometryType.PARABOLIC
    if abs(tau.imag) < tol_parabolic and -tol_parabolic <= tau.real < 4.0:
        return IsometryType.ELLIPTIC
    return IsometryType.LOXODROMIC


def near_parabolic(m: MoebiusMap, tol: float = 1e-6) -> bool:
    """Squared trace within tol of 4: the type decision is tolerance-bound."""
    tau = m.trace * m.trace
    return abs(tau - 4.0) < tol


def fixed_points(m: MoebiusMap, tol_parabolic: float = 1e-9) -> tuple:
    """Boundary fixed points, one for parabolic maps and two otherwise.

    Roots of c z^2 + (d - a) z - b = 0, with the quadratic solved
    against cancellation (sign-chosen square root, second root from the
    product of roots).  Deterministic order: finite points by real then
    imaginary part, infinity last.
    """
    if classify(m, tol_parabolic) == IsometryType.IDENTITY:
        raise ValueError("identity fixes every point")
    a, b, c, d = m.a, m.b, m.c, m.d
    if abs(c) < 1e-14:
        if abs(d - a) < 1e-14:
            return (INFINITY,)
        return _sorted_sphere((b / (d - a), INFINITY))
    disc = m.trace * m.trace - 4.0
    if abs(disc) < tol_parabolic:
        return ((a - d) / (2.0 * c),)
    s = cmath.sqrt(disc)
    if ((a - d).conjugate() * s).real < 0.0:
        s = -s
    r1 = (a - d + s) / (2.0 * c)
    if abs(r1) > 1e-30:
        r2 = -b / (c * r1)
    else:
        r2 = (a - d - s) / (2.0 * c)
    return _sorted_sphere((r1, r2))


def _sphere_sort_key(p):
    if _is_infinity(p):
        return (1, 0.0, 0.0)
    p = complex(p)
    return (0, p.real, p.imag)


def _sorted_sphere(points):
    return tuple(sorted(points, key=_sphere_sort_key))


def translation_length(m: MoebiusMap, tol_parabolic: float = 1e-9) -> float:
    """Hyperbolic translation length; 0 for parabolic and identity maps.

    Computed as 2 Re acosh(tr/2), which does not depend on the sign of
    the trace.  Elliptic maps have no translation length.
    """
    kind = classify(m, tol_parabolic)
    if kind in (IsometryType.IDENTITY, IsometryType.PARABOLIC):
        return 0.0
    if kind == IsometryType.ELLIPTIC:
        raise ValueError("no translation length for elliptic maps")
    return 2.0 * abs(cmath.acosh(m.trace / 2.0).real)


def axis(m: MoebiusMap, tol_parabolic: float = 1e-9) -> "BoundaryGeodesic":
    """Invariant geodesic of a loxodromic (or elliptic) map."""
    pts = fixed_points(m, tol_parabolic)
    if len(pts) != 2:
        raise ValueError("axis needs two fixed points")
    return BoundaryGeodesic(pts[0], pts[1])


def act_h3(m: MoebiusMap, p: H3Point) -> H3Point:
    """Poincare extension of the boundary action to the upper half-space."""
    z, t = p.z, p.t
    den = m.c * z + m.d
    big = abs(den) ** 2 + abs(m.c) ** 2 * t * t
    if big == 0.0 or not math.isfinite(big):
        raise OverflowError("isometry action overflowed double precision")
    t2 = t / big
    z2 = ((m.a * z + m.b) * den.conjugate() + m.a * m.c.conjugate() * t * t) / big
    if not (cmath.isfinite(z2) and math.isfinite(t2)) or t2 <= 0.0:
        raise OverflowError("isometry action overflowed double precision")
    return H3Point(z2, t2)


def dist_h3(p: H3Point, q: H3Point) -> float:
    """Hyperbolic distance between interior points."""
    dz = abs(p.z - q.z)
    dt = p.t - q.t
    arg = 1.0 + (dz * dz + dt * dt) / (2.0 * p.t * q.t)
    return math.acosh(max(arg, 1.0))


@dataclass(frozen=True)
class BoundaryGeodesic:
    """Geodesic named by its two distinct endpoints on the sphere."""

    p: "complex | float"
    q: "complex | float"

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not _is_infinity(v):
                object.__setattr__(self, name, complex(v))
        if chordal_distance(self.p, self.q) <= 1e-12:
            raise ValueError("endpoints must be distinct on the sphere")

    def __str__(self) -> str:
        return f"{{{format_sphere_point(self.p)}, {format_sphere_point(self.q)}}}"


def transport_to_vertical(g: BoundaryGeodesic) -> MoebiusMap:
    """A map sending the geodesic's endpoints to 0 and infinity."""
    p, q = g.p, g.q
    if _is_infinity(p):
        return MoebiusMap.from_entries(0, 1, 1, -q)
    if _is_infinity(q):
        return MoebiusMap.from_entries(1, -p, 0, 1)
    return MoebiusMap.from_entries(1, -p, 1, -q)


def dist_to_geodesic(p: H3Point, g: BoundaryGeodesic) -> float:
    """Distance from a point to a geodesic.

    The geodesic is moved onto the vertical axis over 0, where the
    distance has the closed form asinh(|z| / t).
    """
    moved = act_h3(transport_to_vertical(g), p)
    return math.asinh(abs(moved.z) / moved.t)
