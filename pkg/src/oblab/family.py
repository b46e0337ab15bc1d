"""Star points, scales and the canonical family of resonant tiles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

from mpmath import mpf

from .geometry import (
    ConvexPolygon,
    Line,
    Point,
    Ray,
    make_regular_ngon,
    radius_from_side,
    side_length,
)
from .precision import cos, cot, digits, eps, pi, sin, to_scalar


class ConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class StarPoint:
    k: int
    location: Point


@dataclass(frozen=True)
class ScaleTable:
    n: int
    side: mpf
    stars: tuple[StarPoint, ...]
    scales: tuple[mpf, ...]
    r_d: mpf
    c_d: Point
    y0: mpf
    half_gen_scale: mpf | None = None  # GenScale of N/2 when N is twice-odd

    @property
    def gen_scale(self) -> mpf:
        return self.scales[-1]

    @property
    def gen_star(self) -> Point:
        return self.stars[-1].location

    def scale(self, k: int) -> mpf:
        """1-based access, matching the usual scale[k] notation."""
        return self.scales[k - 1]


@dataclass(frozen=True)
class TileSpec:
    kind: str  # M, D, S, DS, LS, M[j], D[j]
    index: int | None
    center: Point
    radius: mpf
    sides: int
    mutation: bool = False
    expected_period: int | None = None
    virtual: bool | None = False
    woven_radii: tuple[mpf, mpf] | None = None

    @property
    def name(self) -> str:
        if self.index is None:
            return self.kind
        if self.kind in ("M[j]", "D[j]"):
            return f"{self.kind[0]}[{self.index}]"
        return f"{self.kind}[{self.index}]"

    def polygon(self) -> ConvexPolygon:
        return make_regular_ngon(self.sides, self.radius, self.center)

    def apothem(self) -> mpf:
        return self.radius * cos(pi / self.sides)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(math.isqrt(n)) + 1))


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def algebraic_complexity(n: int) -> int:
    """Degree of cos(2*pi/n) over the rationals, phi(n)/2 (1 for n <= 4)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return max(totient(n) // 2, 1)


def _bottom_edge(P: ConvexPolygon) -> int:
    vs = P.vertices
    n = len(vs)
    lowest = min(range(n), key=lambda i: vs[i].y + vs[(i + 1) % n].y)
    a, b = vs[lowest], vs[(lowest + 1) % n]
    if abs(a.y - b.y) > eps() or a.x < b.x:
        raise ConsistencyError("canonical polygon has no right-to-left horizontal bottom edge")
    return lowest


def star_points(n: int, radius=1) -> list[StarPoint]:
    """Intersections of trailing-edge extensions with the bottom forward edge line.

    The first star point is the bottom-left vertex itself; x strictly
    decreases with k.
    """
    if n < 5:
        raise ValueError("star points need n >= 5")
    P = make_regular_ngon(n, radius)
    e = _bottom_edge(P)
    vs = P.vertices
    star1 = vs[(e + 1) % n]
    base = Line(star1, vs[(e + 1) % n] - vs[e])
    found: list[Point] = [star1]
    for ray in P.trailing_rays():
        if abs(ray.direction.y) <= eps():
            continue
        q = _intersect_closed(ray, base)
        if q is None or q.x > star1.x - eps():
            continue
        if all(abs(q.x - f.x) > eps() * 100 for f in found):
            found.append(q)
    found.sort(key=lambda q: -q.x)
    return [StarPoint(k, q) for k, q in enumerate(found, 1)]


def _intersect_closed(ray: Ray, line: Line):
    from .geometry import line_intersection

    closed = Ray(ray.origin, ray.direction, open=False)
    return line_intersection(closed, line)


def expected_star_count(n: int) -> int:
    return n // 2 if n % 2 else n // 2 - 1


@lru_cache(maxsize=256)
def _scale_table_cached(n: int, radius: str, dps: int) -> ScaleTable:
    R = to_scalar(radius)
    stars = star_points(n, R)
    s = side_length(n, R)
    scales = tuple(s / (-2 * sp.location.x) for sp in stars)
    y0 = stars[0].location.y
    gs = stars[-1].location
    if n % 2:
        r_d = s / (2 * sin(pi / (2 * n)))
        cy = R  # D's centre sits at the height of M's top vertex
    else:
        r_d = R
        cy = mpf(0)
    c_d = Point(gs.x - s / 2, cy)
    half = None
    if n % 2 == 0 and (n // 2) % 2 == 1 and n // 2 >= 5:
        half = _scale_table_cached(n // 2, "1", dps).gen_scale
    table = ScaleTable(n, s, tuple(stars), scales, r_d, c_d, y0, half)
    _validate(table, R)
    return table


def scale_table(n: int, radius=1) -> ScaleTable:
    return _scale_table_cached(n, str(radius), digits())


def closed_form_gen_scale(n: int) -> mpf:
    c = cos(pi / n)
    return (1 - c) / c


def closed_form_gen_star(n: int) -> Point:
    c = cos(pi / n)
    return Point(-cot(pi / n) * (1 + c), -c)


def _validate(t: ScaleTable, R) -> None:
    if len(t.stars) != expected_star_count(t.n):
        raise ConsistencyError(f"found {len(t.stars)} star points for N={t.n}")
    tol = eps() * 1000
    if abs(t.scales[0] - 1) > tol:
        raise ConsistencyError("scale[1] must be 1")
    if t.n % 2:
        gs = closed_form_gen_star(t.n)
        if abs(t.gen_scale - closed_form_gen_scale(t.n)) > tol:
            raise ConsistencyError("GenScale disagrees with the closed form")
        if abs(t.gen_star.x - R * gs.x) > tol or abs(t.gen_star.y - R * gs.y) > tol:
            raise ConsistencyError("GenStar disagrees with the closed form")


def closed_form_residuals(n: int) -> tuple[mpf, mpf]:
    """|geometric - closed form| for GenScale and GenStar.x (odd n)."""
    t = scale_table(n)
    return abs(t.gen_scale - closed_form_gen_scale(n)), abs(t.gen_star.x - closed_form_gen_star(n).x)


def d_spacing(n: int) -> mpf:
    """Horizontal distance between the two D tiles flanking the generator."""
    t = scale_table(n)
    return abs(2 * (t.gen_star.x - t.side / 2))


def _s_centers(t: ScaleTable) -> list[Point]:
    star1 = t.stars[0].location
    out = []
    for sp in t.stars:
        xc = sp.location.x - t.side / 2
        u = (xc - star1.x) / (t.c_d.x - star1.x)
        out.append(Point(xc, t.y0 + u * (t.c_d.y - t.y0)))
    return out


def woven_ratio(n: int, k: int) -> mpf:
    """Radius ratio of the two interwoven polygons replacing a mutated S[k].

    The woven edges have to lie on web directions, which are the edge
    directions of the generator; the nearest admissible direction gives the
    ratio.
    """
    g = math.gcd(k, n)
    m = 2 * n // g
    delta = pi / (2 * n)
    return cos(pi / m - delta) / cos(delta)


def first_family(n: int) -> list[TileSpec]:
    """Canonical family for the generator of circumradius 1 centred at the origin.

    Odd n: M, D, S[1..n//2-1] and DS[1..n-4] (the right-hand copy of D and the
    duplicates DS[n-3] = S[n//2-1], DS[n-2] = M are left out).
    Even n: M, D, S[1..n/2-2] and LS[1..n/2-3], where LS[k] mirrors S[k]
    across the vertical line halfway to D.
    """
    t = scale_table(n)
    g = t.gen_scale
    prime = is_prime(n)
    centers = _s_centers(t)
    last = len(t.stars)
    tiles = [TileSpec("M", None, Point(mpf(0), mpf(0)), mpf(1), n)]
    if n % 2:
        tiles.append(TileSpec("D", None, t.c_d, t.r_d, 2 * n, expected_period=n if prime else None))
        for k in range(1, last):
            mut = math.gcd(k, n) > 1
            r = t.r_d * g / t.scale(k)
            woven = (r, r * woven_ratio(n, k)) if mut else None
            tiles.append(
                TileSpec("S", k, centers[k - 1], r, 2 * n, mut, n if prime else None, woven_radii=woven)
            )
        twin = scale_table(2 * n, t.r_d)
        twin_centers = _s_centers(twin)
        for k in range(1, n - 3):
            off = twin_centers[k - 1]
            c = Point(t.c_d.x - off.x, t.c_d.y + off.y)
            j = (k - 1) // 2
            if k % 2:
                r, sides = t.scale(last - j), n
            else:
                r, sides = t.r_d * g / t.scale(k // 2), 2 * n
            per = n * (n - (k + 2)) if prime else None
            tiles.append(TileSpec("DS", k, c, r, sides, math.gcd(k, n) > 1, per))
    else:
        tiles.append(TileSpec("D", None, t.c_d, mpf(1), n))
        twice_odd = (n // 2) % 2 == 1
        for k in range(1, last):
            r, sides = g / t.scale(k), n
            if twice_odd and k == last - 1:
                sides, r = n // 2, radius_from_side(t.side, n // 2)
            tiles.append(TileSpec("S", k, centers[k - 1], r, sides, math.gcd(k, n) > 1))
        for k in range(1, last - 1):
            s = tiles[1 + k]
            c = Point(t.c_d.x - s.center.x, s.center.y)
            tiles.append(replace(s, kind="LS", center=c))
    return tiles


def family_tile(n: int, name: str) -> TileSpec:
    for tile in first_family(n):
        if tile.name == name:
            return tile
    raise KeyError(name)


def s_tiles_full(n: int) -> list[TileSpec]:
    """All S[k] for k = 1..len(stars), with the last one being D."""
    fam = first_family(n)
    s = [t for t in fam if t.kind == "S"]
    d = next(t for t in fam if t.kind == "D")
    return s + [replace(d, kind="S", index=len(s) + 1)]


def virtual_chain(n: int, depth: int) -> list[TileSpec]:
    """M[j] and D[j] for j = 0..depth along the line from the origin to GenStar.

    M[j] has radius GenScale^j centred at (1 - GenScale^j) GenStar; D[j] has
    radius rD GenScale^j centred at (1 - GenScale^j (2 + GenScale)) GenStar.
    """
    if n % 2 == 0 or depth < 1:
        raise ValueError("virtual chains need odd n and depth >= 1")
    t = scale_table(n)
    g, gs = t.gen_scale, t.gen_star
    out = []
    for j in range(depth + 1):
        gj = g**j
        known = True if (j <= 1 or n % 4 == 1) else None
        m_per = d_per = None
        if is_prime(n) and j == 1:
            m_per, d_per = n * (n - 3), n * (n - 4)
        out.append(TileSpec("M[j]", j, gs * (1 - gj), gj, n, expected_period=m_per, virtual=not known if known else None))
        dc = gs * (1 - gj * (2 + g))
        out.append(TileSpec("D[j]", j, dc, t.r_d * gj, 2 * n, expected_period=d_per, virtual=not known if known else None))
    return out


@dataclass
class EquivalenceReport:
    n: int
    checks: list[tuple[str, mpf, mpf]] = field(default_factory=list)

    @property
    def max_residual(self) -> mpf:
        return max((abs(a - b) for _, a, b in self.checks), default=mpf(0))


def scale_equivalences(n: int) -> EquivalenceReport:
    """Check the identities linking the scale table of even n to itself and,
    for twice-odd n, to the table of n/2.

    The scales pair up as GenScale/scale[j] = scale[m + 1 - j] with m the
    number of scales; for twice-even n the middle one pairs with itself.
    """
    if n % 2:
        raise ValueError("scale equivalences are stated for even n")
    t = scale_table(n)
    k = n // 2
    m = len(t.scales)
    rep = EquivalenceReport(n)
    for j in range(2, m):
        rep.checks.append((f"GenScale[{n}]/scale[{j}] = scale[{m + 1 - j}]", t.gen_scale / t.scale(j), t.scale(m + 1 - j)))
    if k % 2 == 1:
        if k >= 5:
            rep.checks.append((f"scale[{k - 2}] = GenScale[{k}]", t.scale(k - 2), scale_table(k).gen_scale))
    else:
        rep.checks.append((f"GenScale[{n}] = scale[{n // 4}]^2", t.gen_scale, t.scale(n // 4) ** 2))
    bad = [c for c in rep.checks if abs(c[1] - c[2]) > eps() * 1000]
    if bad:
        raise ConsistencyError(f"identity failed: {bad[0][0]}")
    return rep
