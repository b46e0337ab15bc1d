"""The outer billiards map, its inverse, orbits and return-map displacements."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from mpmath import mpf

from .geometry import ConvexPolygon, Point, as_point, cross, dist, reflect_y
from .precision import eps


class SingularPoint(ValueError):
    """The point lies on the singular set (an edge line or extension)."""


class InteriorPoint(ValueError):
    pass


class NoPinwheelForm(ValueError):
    pass


def _side(P: ConvexPolygon, inverse: bool) -> int:
    # clockwise polygons keep the body on the right of the ray p -> c
    s = -1 if P.clockwise else 1
    return -s if inverse else s


def support_vertex(P: ConvexPolygon, p, inverse: bool = False, hint: int = 0) -> int:
    """Index of the vertex that p reflects through.

    For the forward map the polygon lies strictly on the right of the ray from
    p to the returned vertex (clockwise polygons).  `inverse` uses the left.
    """
    p = as_point(p)
    vs = P.vertices
    n = len(vs)
    s = _side(P, inverse)
    tol = eps() * (1 + abs(p.x) + abs(p.y))
    for j in range(n):
        i = (hint + j) % n
        d = vs[i] - p
        a = cross(d, vs[i - 1] - p) * s
        if a <= tol:
            continue
        b = cross(d, vs[(i + 1) % n] - p) * s
        if b > tol:
            return i
    if P.contains(p, strict=True):
        raise InteriorPoint(f"{p.as_float()} is inside the polygon")
    raise SingularPoint(f"{p.as_float()} is on the singular set")


def tau(P: ConvexPolygon, p, hint: int = 0) -> Point:
    p = as_point(p)
    c = P.vertices[support_vertex(P, p, hint=hint)]
    return Point(2 * c.x - p.x, 2 * c.y - p.y)


def tau_inverse(P: ConvexPolygon, p, hint: int = 0) -> Point:
    p = as_point(p)
    c = P.vertices[support_vertex(P, p, inverse=True, hint=hint)]
    return Point(2 * c.x - p.x, 2 * c.y - p.y)


def tau_inverse_by_mirror(P: ConvexPolygon, p) -> Point:
    """Inverse map computed as reflect_y . tau . reflect_y.

    Only valid for polygons that are mirror symmetric about the y-axis.
    """
    Q = reflect_y(P)
    mirrored = ConvexPolygon(tuple(reversed(Q.vertices)), clockwise=True)
    return reflect_y(tau(mirrored, reflect_y(p)))


@dataclass
class OrbitRecord:
    start: Point
    points: list = field(default_factory=list)
    corner_indices: list[int] = field(default_factory=list)
    period: int | None = None
    termination: str = "max_iter"
    n: int = 0

    @property
    def step_sequence(self) -> list[int]:
        c = self.corner_indices
        return [(c[i + 1] - c[i]) % self.n for i in range(len(c) - 1)]

    @property
    def iterations(self) -> int:
        return max(len(self.corner_indices) - 1, 0) if self.period else len(self.corner_indices)

    def winding(self) -> Fraction | None:
        steps = self.step_sequence
        return winding_number(steps, self.n) if steps else None


def iterate_orbit(
    P: ConvexPolygon,
    p,
    max_iter: int = 10**7,
    record_points: bool = False,
    backend: str = "mp",
    tol: float | None = None,
) -> OrbitRecord:
    """Iterate until the orbit returns to p, hits the singular set, or max_iter.

    backend="mp" works at the current mpmath precision; backend="float" uses
    double precision and is much faster for long runs.
    """
    if backend == "float":
        return FloatTangent(P).orbit(as_point(p).as_float(), max_iter, record_points, tol or 1e-9)
    p0 = as_point(p)
    rec = OrbitRecord(start=p0, n=P.n)
    tol_ = eps() * (1 + abs(p0.x) + abs(p0.y)) * 10
    q = p0
    hint = 0
    step = P.n // 2
    for k in range(1, max_iter + 1):
        try:
            i = support_vertex(P, q, hint=hint)
        except SingularPoint:
            rec.termination = "singular_hit"
            return rec
        if rec.corner_indices:
            step = (i - rec.corner_indices[-1]) % P.n
        rec.corner_indices.append(i)
        c = P.vertices[i]
        q = Point(2 * c.x - q.x, 2 * c.y - q.y)
        hint = (i + step) % P.n
        if record_points:
            rec.points.append(q)
        if abs(q.x - p0.x) <= tol_ and abs(q.y - p0.y) <= tol_:
            rec.period = k
            rec.termination = "period_found"
            rec.corner_indices.append(rec.corner_indices[0])
            return rec
    return rec


def orbit_period(P: ConvexPolygon, p, max_iter: int = 10**7, backend: str = "mp") -> int | None:
    return iterate_orbit(P, p, max_iter, backend=backend).period


def winding_number(steps: Sequence[int], n: int) -> Fraction:
    """Mean step divided by n, as an exact fraction."""
    if not steps:
        raise ValueError("empty step sequence")
    return Fraction(sum(steps), len(steps) * n)


class FloatTangent:
    """Double precision kernels for long orbits and batches of seeds."""

    def __init__(self, P: ConvexPolygon, inverse: bool = False):
        self.poly = P
        self.V = P.float_vertices
        self.n = len(self.V)
        self.side = _side(P, inverse)
        self.vx = [float(v) for v in self.V[:, 0]]
        self.vy = [float(v) for v in self.V[:, 1]]

    def support(self, x: float, y: float, hint: int = 0, tol: float = 1e-12) -> int:
        vx, vy, n, s = self.vx, self.vy, self.n, self.side
        for j in range(n):
            i = (hint + j) % n
            dx, dy = vx[i] - x, vy[i] - y
            a = (dx * (vy[i - 1] - y) - dy * (vx[i - 1] - x)) * s
            if a <= tol:
                continue
            k = (i + 1) % n
            b = (dx * (vy[k] - y) - dy * (vx[k] - x)) * s
            if b > tol:
                return i
        raise SingularPoint((x, y))

    def orbit(self, p, max_iter: int, record_points: bool = False, tol: float = 1e-9) -> OrbitRecord:
        x0, y0 = p
        rec = OrbitRecord(start=Point.of(x0, y0), n=self.n)
        x, y = x0, y0
        vx, vy, n = self.vx, self.vy, self.n
        corners = rec.corner_indices
        hint, step = 0, n // 2
        scale = tol * (1 + abs(x0) + abs(y0))
        for k in range(1, max_iter + 1):
            try:
                i = self.support(x, y, hint)
            except SingularPoint:
                rec.termination = "singular_hit"
                return rec
            if corners:
                step = (i - corners[-1]) % n
            corners.append(i)
            x, y = 2 * vx[i] - x, 2 * vy[i] - y
            hint = (i + step) % n
            if record_points:
                rec.points.append((x, y))
            if abs(x - x0) <= scale and abs(y - y0) <= scale:
                rec.period = k
                rec.termination = "period_found"
                corners.append(corners[0])
                return rec
        return rec

    def steps(self, p, m: int) -> list[int]:
        """First m steps of the orbit of p, without period detection."""
        x, y = p
        vx, vy, n = self.vx, self.vy, self.n
        out = []
        prev = self.support(x, y)
        hint = prev
        step = n // 2
        for _ in range(m):
            x, y = 2 * vx[prev] - x, 2 * vy[prev] - y
            i = self.support(x, y, (prev + step) % n)
            step = (i - prev) % n
            out.append(step)
            prev = i
        return out

    def batch(self, P: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """One step for an (m, 2) array.  Returns images, vertex indices, and a
        mask of points that were in the domain."""
        V = self.V
        x = P[:, :1]
        y = P[:, 1:2]
        dx = V[None, :, 0] - x
        dy = V[None, :, 1] - y
        Vp = np.roll(V, 1, 0)
        Vn = np.roll(V, -1, 0)
        a = (dx * (Vp[None, :, 1] - y) - dy * (Vp[None, :, 0] - x)) * self.side
        b = (dx * (Vn[None, :, 1] - y) - dy * (Vn[None, :, 0] - x)) * self.side
        ok = (a > tol) & (b > tol)
        alive = ok.any(axis=1)
        idx = ok.argmax(axis=1)
        return 2 * V[idx] - P, idx, alive


def pinwheel_vectors(P: ConvexPolygon) -> list[Point]:
    """V_i = 2(v_i - v_{i+m}) with m = floor(n/2), for i = 1..n."""
    vs = P.vertices
    n = len(vs)
    if n % 2 == 0:
        raise NoPinwheelForm("the return-map vectors are only defined for odd n")
    m = n // 2
    return [(vs[i] - vs[(i + m) % n]) * 2 for i in range(n)]


@dataclass(frozen=True)
class PinwheelDisplacement:
    vector_index: int
    sign: int
    multiplicity: int


def _match_vector(d: Point, vecs: list[Point]) -> tuple[int, int] | None:
    tol = eps() * 100 * (1 + d.norm())
    for i, v in enumerate(vecs, 1):
        if dist(d, v) <= tol:
            return i, 1
        if dist(d, -v) <= tol:
            return i, -1
    return None


def return_displacement(P: ConvexPolygon, p, max_run: int = 10**6) -> PinwheelDisplacement:
    """Classify the tau^2 displacement of p as one of +-V_i.

    The multiplicity counts how many consecutive tau^2 steps repeat that same
    vector, i.e. how far the accelerated orbit travels along one strip.
    """
    vecs = pinwheel_vectors(P)
    q = as_point(p)
    q2 = tau(P, tau(P, q))
    d = q2 - q
    if d.norm() <= eps():
        return PinwheelDisplacement(0, 1, 0)
    hit = _match_vector(d, vecs)
    if hit is None:
        raise NoPinwheelForm(f"displacement {d.as_float()} is not one of the return vectors")
    mult = 1
    while mult < max_run:
        q3 = tau(P, tau(P, q2))
        if dist(q3 - q2, d) > eps() * 100 * (1 + d.norm()):
            break
        q2 = q3
        mult += 1
    return PinwheelDisplacement(hit[0], hit[1], mult)
