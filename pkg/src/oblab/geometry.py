"""Points, rays and convex polygons at working precision."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from mpmath import mpf

from .precision import cos, eps, pi, sin, to_scalar


class GeometryError(ValueError):
    pass


class InvalidPolygon(GeometryError):
    pass


class DegenerateIntersection(GeometryError):
    pass


class Point(NamedTuple):
    x: mpf
    y: mpf

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(to_scalar(x), to_scalar(y))

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __mul__(self, k):  # type: ignore[override]
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self):
        return Point(-self.x, -self.y)

    def norm(self) -> mpf:
        return (self.x**2 + self.y**2) ** mpf("0.5")

    def as_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


def as_point(p) -> Point:
    if isinstance(p, Point):
        return p
    return Point.of(p[0], p[1])


def cross(a, b) -> mpf:
    return a[0] * b[1] - a[1] * b[0]


def dist(a, b) -> mpf:
    return ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2) ** mpf("0.5")


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon.  Vertices are stored clockwise unless
    `clockwise` is False (which only happens for mirrored copies)."""

    vertices: tuple[Point, ...]
    clockwise: bool = True
    label: str = ""
    _check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        vs = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) < 3:
            raise InvalidPolygon("a polygon needs at least 3 vertices")
        if self._check and not is_strictly_convex(vs, self.clockwise):
            raise InvalidPolygon("vertices are not strictly convex in the declared orientation")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % self.n]) for i in range(self.n)]

    def side_lengths(self) -> list[mpf]:
        return [dist(a, b) for a, b in self.edges()]

    def centroid(self) -> Point:
        n = self.n
        return Point(sum(v.x for v in self.vertices) / n, sum(v.y for v in self.vertices) / n)

    def trailing_rays(self) -> list["Ray"]:
        """Open rays extending each edge backwards past its first vertex."""
        return [Ray(a, a - b) for a, b in self.edges()]

    def forward_rays(self) -> list["Ray"]:
        """Open rays extending each edge forwards past its second vertex."""
        return [Ray(b, b - a) for a, b in self.edges()]

    def contains(self, p, strict: bool = True) -> bool:
        sign = -1 if self.clockwise else 1
        tol = eps()
        for a, b in self.edges():
            c = sign * cross(b - a, as_point(p) - a)
            if c < tol if strict else c < -tol:
                return False
        return True

    @cached_property
    def float_vertices(self) -> np.ndarray:
        return np.array([[float(v.x), float(v.y)] for v in self.vertices])

    def area(self) -> mpf:
        vs = self.vertices
        s = sum(cross(vs[i], vs[(i + 1) % self.n]) for i in range(self.n))
        return abs(s) / 2


def is_strictly_convex(vs: Sequence[Point], clockwise: bool = True) -> bool:
    n = len(vs)
    tol = eps()
    want = -1 if clockwise else 1
    for i in range(n):
        a, b, c = vs[i], vs[(i + 1) % n], vs[(i + 2) % n]
        if want * cross(b - a, c - b) <= tol:
            return False
    return True


@dataclass(frozen=True)
class RegularNGonSpec:
    n: int
    radius: object = 1
    center: tuple = (0, 0)

    @property
    def parity(self) -> str:
        if self.n % 2:
            return "odd"
        return "twice-odd" if (self.n // 2) % 2 else "twice-even"


def regular_angles(n: int) -> list[mpf]:
    """Polar angles measured clockwise from the +y axis for the canonical n-gon."""
    offset = 0 if n % 2 else pi / n
    return [2 * pi * k / n + offset for k in range(n)]


def make_regular_ngon(spec: RegularNGonSpec | int, radius=1, center=(0, 0)) -> ConvexPolygon:
    """Canonical regular polygon with clockwise vertices.

    Odd n has a vertex at the top; even n has a horizontal bottom edge.  Either
    way the polygon is symmetric about the vertical line through its centre.
    """
    if isinstance(spec, int):
        spec = RegularNGonSpec(spec, radius, center)
    if spec.n < 3:
        raise InvalidPolygon("n must be at least 3")
    r = to_scalar(spec.radius)
    if r <= 0:
        raise InvalidPolygon("radius must be positive")
    cx, cy = to_scalar(spec.center[0]), to_scalar(spec.center[1])
    verts = [Point(cx + r * sin(a), cy + r * cos(a)) for a in regular_angles(spec.n)]
    return ConvexPolygon(tuple(verts), label=f"N{spec.n}")


def rotated(poly: ConvexPolygon, angle, about=(0, 0)) -> ConvexPolygon:
    """Rotate counter-clockwise by angle (radians) about a point."""
    a = to_scalar(angle)
    c, s = cos(a), sin(a)
    ox, oy = to_scalar(about[0]), to_scalar(about[1])
    vs = tuple(Point(ox + c * (v.x - ox) - s * (v.y - oy), oy + s * (v.x - ox) + c * (v.y - oy)) for v in poly.vertices)
    return ConvexPolygon(vs, clockwise=poly.clockwise, label=poly.label)


def side_length(n: int, radius=1) -> mpf:
    return 2 * to_scalar(radius) * sin(pi / n)


def radius_from_side(s, n: int) -> mpf:
    return to_scalar(s) / (2 * sin(pi / n))


def apothem(n: int, radius=1) -> mpf:
    return to_scalar(radius) * cos(pi / n)


def reflect_y(obj):
    """Mirror in the y-axis.  Polygons keep vertex order, so orientation flips."""
    if isinstance(obj, ConvexPolygon):
        vs = tuple(Point(-v.x, v.y) for v in obj.vertices)
        return ConvexPolygon(vs, clockwise=not obj.clockwise, label=obj.label, _check=obj._check)
    p = as_point(obj)
    return Point(-p.x, p.y)


def reoriented(poly: ConvexPolygon) -> ConvexPolygon:
    """Same point set listed clockwise."""
    if poly.clockwise:
        return poly
    return ConvexPolygon(tuple(reversed(poly.vertices)), clockwise=True, label=poly.label)


@dataclass(frozen=True)
class Line:
    origin: Point
    direction: Point

    def param_ok(self, t) -> bool:
        return True


@dataclass(frozen=True)
class Ray(Line):
    """Ray starting at origin.  Open rays exclude the origin itself."""

    open: bool = True

    def param_ok(self, t) -> bool:
        return t > eps() if self.open else t >= -eps()


def line_intersection(r1: Line, r2: Line):
    """Intersection of two lines or rays, or None.

    Raises DegenerateIntersection when the carrier lines coincide.
    """
    p, d = as_point(r1.origin), as_point(r1.direction)
    q, e = as_point(r2.origin), as_point(r2.direction)
    den = cross(d, e)
    scale = max(d.norm() * e.norm(), mpf(1))
    if abs(den) <= eps() * scale:
        if abs(cross(q - p, d)) <= eps() * max(d.norm(), mpf(1)):
            raise DegenerateIntersection("lines coincide")
        return None
    w = q - p
    t = cross(w, e) / den
    u = cross(w, d) / den
    if not (r1.param_ok(t) and r2.param_ok(u)):
        return None
    return p + d * t
