"""Quasi-regular polygons: Ring2, Riffle and woven constructions, their
regular factors, and boundedness probes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mpf

from .family import ConsistencyError, is_prime
from .geometry import ConvexPolygon, InvalidPolygon, Point, is_strictly_convex, make_regular_ngon
from .periodicity import ring_centers
from .precision import cos, pi, sin, to_scalar
from .tangent import FloatTangent


class ConvexityError(InvalidPolygon):
    pass


@dataclass(frozen=True)
class Factor:
    name: str
    d: int
    indices: tuple[int, ...]  # positions in the parent's vertex list

    def vertices(self, parent: ConvexPolygon) -> list[Point]:
        return [parent.vertices[i] for i in self.indices]

    def radius(self, parent: ConvexPolygon) -> mpf:
        c = parent.centroid()
        return max((v - c).norm() for v in self.vertices(parent))


@dataclass
class QuasiPolygon:
    kind: str
    polygon: ConvexPolygon
    params: dict = field(default_factory=dict)
    factors: list[Factor] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.polygon.n

    def factor(self, name: str) -> Factor:
        return next(f for f in self.factors if f.name == name)

    def factor_radii(self) -> dict[str, mpf]:
        return {f.name: f.radius(self.polygon) for f in self.factors}


def ring2_polygon(n: int) -> QuasiPolygon:
    """The 3n/2-gon left after taking every other point of a regular n-gon
    whose sides carry two extra equally spaced points.

    Odd n is replaced by 2n.  Factor A is made of original vertices and has
    radius 1; B and C come from the interior points and share a smaller
    radius.  For n = 4 the factors are segments.
    """
    if n % 2:
        n = 2 * n
    if n < 4:
        raise ValueError("n must be at least 4")
    base = make_regular_ngon(n).vertices
    ring = []
    for j in range(n):
        a, b = base[j], base[(j + 1) % n]
        for i in range(3):
            ring.append(a + (b - a) * (mpf(i) / 3))
    verts = ring[::2]
    poly = ConvexPolygon(tuple(verts), label=f"N{n}Ring2")
    m = len(verts)
    factors = [
        Factor("A", n // 2, tuple(range(0, m, 3))),
        Factor("B", n // 2, tuple(range(1, m, 3))),
        Factor("C", n // 2, tuple(range(2, m, 3))),
    ]
    return QuasiPolygon("ring2", poly, {"n": n}, factors)


def riffle_polygon(n: int, rho) -> QuasiPolygon:
    """Interleave the odd vertices A of the regular n-gon with the even ones
    rotated clockwise by rho * 2 pi / n.

    rho = 0 is the n-gon itself and rho = 1 collapses onto A.  Odd n uses 2n.
    """
    if n % 2:
        n = 2 * n
    r = to_scalar(rho)
    if not 0 <= r <= 1:
        raise ValueError("rho must lie in [0, 1]")
    base = make_regular_ngon(n).vertices
    A = list(base[0::2])
    if r == 1:
        poly = ConvexPolygon(tuple(A), label=f"N{n}Riffle")
        return QuasiPolygon("riffle", poly, {"n": n, "rho": rho}, [Factor("A", n // 2, tuple(range(n // 2)))])
    t = -r * 2 * pi / n  # clockwise
    c, s = cos(t), sin(t)
    C = [Point(c * v.x - s * v.y, s * v.x + c * v.y) for v in base[1::2]]
    verts = [p for pair in zip(A, C) for p in pair]
    poly = ConvexPolygon(tuple(verts), label=f"N{n}Riffle")
    factors = [Factor("A", n // 2, tuple(range(0, n, 2))), Factor("C", n // 2, tuple(range(1, n, 2)))]
    return QuasiPolygon("riffle", poly, {"n": n, "rho": rho}, factors)


def woven_polygon(k: int, r1, r2) -> QuasiPolygon:
    """2k-gon alternating two regular k-gons of radii r1 and r2, the second
    turned by pi/k.  Raises ConvexityError outside the convexity window."""
    r1, r2 = to_scalar(r1), to_scalar(r2)
    if k < 3 or r2 <= 0 or r1 < r2:
        raise ValueError("need k >= 3 and r1 >= r2 > 0")
    verts = []
    for j in range(k):
        a = 2 * pi * j / k
        verts.append(Point(r1 * sin(a), r1 * cos(a)))
        b = a + pi / k
        verts.append(Point(r2 * sin(b), r2 * cos(b)))
    if not is_strictly_convex(verts):
        raise ConvexityError(f"radii {float(r1)}, {float(r2)} give a non-convex {2 * k}-gon")
    poly = ConvexPolygon(tuple(verts), label=f"Woven{k}")
    factors = [Factor("A", k, tuple(range(0, 2 * k, 2))), Factor("B", k, tuple(range(1, 2 * k, 2)))]
    return QuasiPolygon("woven", poly, {"k": k, "r1": r1, "r2": r2}, factors)


def woven_window(k: int) -> tuple[mpf, mpf]:
    """Open interval of r2/r1 giving a convex woven 2k-gon."""
    c = cos(pi / k)
    return c, 1 / c


@dataclass
class FactorGraph:
    n: int
    factors: list[Factor]

    def count(self, d: int) -> int:
        return sum(1 for f in self.factors if f.d == d)

    @property
    def divisors(self) -> list[int]:
        return sorted({f.d for f in self.factors})


def factor_graph(P: ConvexPolygon | QuasiPolygon | int) -> FactorGraph:
    """Embedded regular polygons sharing vertices with the parent.

    A regular n-gon gets n/d rotated copies of the d-gon for every divisor
    d >= 3; quasi-regular polygons report their declared factors.
    """
    if isinstance(P, QuasiPolygon):
        return FactorGraph(P.n, list(P.factors))
    n = P if isinstance(P, int) else P.n
    out = []
    if not is_prime(n):
        for d in range(3, n):
            if n % d:
                continue
            step = n // d
            for r in range(step):
                out.append(Factor(f"{d}-gon[{r}]", d, tuple(range(r, n, step))))
    return FactorGraph(n, out)


def ring_polygon(n: int, k: int) -> ConvexPolygon:
    """Convex polygon through the centres of ring k, collinear points dropped."""
    pts = ring_centers(n, k)
    c = Point(sum(p.x for p in pts) / len(pts), sum(p.y for p in pts) / len(pts))
    pts = sorted(pts, key=lambda p: -mpmath.atan2(p.y - c.y, p.x - c.x))  # clockwise
    tol = mpf(10) ** -20
    keep = []
    m = len(pts)
    for i in range(m):
        a, b, q = pts[i - 1], pts[i], pts[(i + 1) % m]
        if abs((b.x - a.x) * (q.y - b.y) - (b.y - a.y) * (q.x - b.x)) > tol:
            keep.append(b)
    return ConvexPolygon(tuple(keep), label=f"N{n}Ring{k}")


def riffle_parameter_for_ratio(n: int, ratio) -> mpf:
    """rho for which the Riffle of the regular 2n-gon (n odd) has alternating
    sides in the given ratio."""
    ratio = to_scalar(ratio)
    h = pi / (2 * n)
    return mpmath.findroot(lambda r: sin((1 + r) * h) - ratio * sin((1 - r) * h), mpf("0.3"))


@dataclass
class ProbeResult:
    max_radius: np.ndarray  # per seed
    trace: np.ndarray  # running max over all seeds, sampled every `every` steps
    escaped: bool
    ceiling: float
    singular: int

    @property
    def escapes(self) -> int:
        return int((self.max_radius > self.ceiling).sum())


def boundedness_probe(
    P: ConvexPolygon,
    seeds: np.ndarray,
    iterations: int = 10**5,
    ceiling_factor: float = 100.0,
    every: int = 1000,
) -> ProbeResult:
    """Iterate all seeds together, tracking their distance from the centroid.

    This is a falsification test: an escape past ceiling_factor times the
    polygon radius would be evidence of unbounded motion.  Seeds that land on
    the singular set are dropped.
    """
    V = P.float_vertices
    c = V.mean(axis=0)
    ceiling = ceiling_factor * float(np.max(np.hypot(*(V - c).T)))
    ft = FloatTangent(P)
    cur = np.asarray(seeds, float).copy()
    idx = np.arange(len(cur))
    best = np.hypot(*(cur - c).T)
    trace = []
    for it in range(1, iterations + 1):
        img, _, ok = ft.batch(cur, 1e-12)
        cur, idx = img[ok], idx[ok]
        r = np.hypot(*(cur - c).T)
        np.maximum.at(best, idx, r)
        if it % every == 0:
            trace.append(best.max())
        if len(cur) == 0 or r.max() > ceiling:
            break
    return ProbeResult(best, np.array(trace), bool(best.max() > ceiling), ceiling, len(seeds) - len(idx))


def annulus_seeds(P: ConvexPolygon, count: int, r_min: float, r_max: float, seed: int = 0) -> np.ndarray:
    """Uniform random seeds in an annulus around the centroid, outside P."""
    rng = np.random.default_rng(seed)
    V = P.float_vertices
    c = V.mean(axis=0)
    out = []
    while len(out) < count:
        r = math.sqrt(rng.uniform(r_min**2, r_max**2))
        a = rng.uniform(0, 2 * math.pi)
        p = c + r * np.array([math.cos(a), math.sin(a)])
        if not P.contains(Point.of(*p), strict=False):
            out.append(p)
    return np.array(out)


def ring0_leaks(P: ConvexPolygon, inner: float, bound: float, seeds: int = 100, iterations: int = 20000, seed: int = 0) -> int:
    """Seeds started within `inner` radii whose orbits pass `bound` radii.

    A regular polygon's ring of D tiles confines such orbits; a positive
    count means the ring has gaps.
    """
    V = P.float_vertices
    R = float(np.max(np.hypot(*(V - V.mean(axis=0)).T)))
    S = annulus_seeds(P, seeds, 1.0 * R, inner * R, seed)
    res = boundedness_probe(P, S, iterations, ceiling_factor=10**6, every=iterations)
    return int((res.max_radius > bound * R).sum())


def riffle_rho(rho) -> Fraction | float:
    """Accept p, p/q strings or floats for the riffle rotation."""
    if isinstance(rho, str):
        return Fraction(rho) if "/" in rho else float(rho)
    return rho


def check_decomposition(n: int, corners: list[int]) -> Factor:
    """Factor whose vertex set an orbit's corner indices cover exactly."""
    seen = set(corners)
    for f in factor_graph(n).factors:
        if seen == set(f.indices):
            return f
    raise ConsistencyError(f"corners {sorted(seen)} match no factor of N={n}")
