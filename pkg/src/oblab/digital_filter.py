"""Second-order digital filter overflow map, its rectification, and the
piecewise rotations of Goetz.

The overflow map acts on [-1, 1)^2 by (x, y) -> (y, f(-x + a y)) where f
wraps into [-1, 1).  Away from the wrap it is an elliptical rotation by
theta with a = 2 cos(theta); a linear change of coordinates turns it into a
true rotation, which is how Df webs are laid over outer billiards webs.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np
from mpmath import mpf
from scipy.spatial import cKDTree

from .family import first_family, scale_table
from .geometry import make_regular_ngon
from .periodicity import dimension_estimate
from .tangent import FloatTangent, iterate_orbit
from .web import WebConfig, generate_web


class OutOfRange(ValueError):
    pass


class Degenerate(ValueError):
    pass


class OutOfDomain(ValueError):
    pass


@dataclass(frozen=True)
class DfParams:
    """Twist rho = theta / 2pi.  Rationals are kept exact; floats are allowed
    for irrational scans."""

    rho: Fraction | float

    def __post_init__(self):
        r = self.rho
        if isinstance(r, str):
            r = Fraction(r)
        if isinstance(r, int):
            r = Fraction(r)
        object.__setattr__(self, "rho", r)
        if not 0 < r <= Fraction(1, 4):
            raise OutOfRange(f"rho={r} must lie in (0, 1/4]")

    @classmethod
    def from_a(cls, a: float) -> "DfParams":
        """Parameters for a given filter coefficient a = 2 cos(theta)."""
        if not 0 <= a < 2:
            raise OutOfRange("a must lie in [0, 2)")
        return cls(math.acos(a / 2) / (2 * math.pi))

    @property
    def theta(self) -> float:
        return 2 * math.pi * float(self.rho)

    @property
    def a(self) -> float:
        return 2 * math.cos(self.theta)

    @property
    def is_rational(self) -> bool:
        return isinstance(self.rho, Fraction)


def _wrap(z):
    return ((z + 1) % 2) - 1


def df_map(state, params: DfParams):
    """One step of the overflow map.  Works for floats, mpf and numpy arrays
    of shape (m, 2)."""
    if isinstance(state, np.ndarray) and state.ndim == 2:
        x, y = state[:, 0], state[:, 1]
        return np.column_stack([y, _wrap(-x + params.a * y)])
    x, y = state
    return (y, _wrap(-x + params.a * y))


def atom_classify(state, params: DfParams) -> int:
    """1 on A (-x + ay >= 1), 0 on B, -1 on C (-x + ay < -1)."""
    x, y = state
    z = -x + params.a * y
    if z >= 1:
        return 1
    if z >= -1:
        return 0
    return -1


def atom_labels(points: np.ndarray, params: DfParams) -> np.ndarray:
    z = -points[:, 0] + params.a * points[:, 1]
    return np.where(z >= 1, 1, np.where(z >= -1, 0, -1))


def _trig(params: DfParams) -> tuple[float, float]:
    s = math.sin(params.theta)
    if abs(s) < 1e-15:
        raise Degenerate("theta = 0 has no rectification")
    return math.cos(params.theta), s


def rectify(state, params: DfParams):
    """(x, y) -> (x, (y - x cos t) / sin t), then a quarter turn."""
    c, s = _trig(params)
    if isinstance(state, np.ndarray) and state.ndim == 2:
        u = state[:, 0]
        v = (state[:, 1] - u * c) / s
        return np.column_stack([-v, u])
    x, y = state
    v = (y - x * c) / s
    return (-v, x)


def unrectify(point, params: DfParams):
    c, s = _trig(params)
    if isinstance(point, np.ndarray) and point.ndim == 2:
        x = point[:, 1]
        v = -point[:, 0]
        return np.column_stack([x, v * s + x * c])
    p, q = point
    x, v = q, -p
    return (x, v * s + x * c)


def rectified_translations(params: DfParams) -> dict[int, tuple[float, float]]:
    """Translation part of each atom after rectification."""
    out = {}
    for label, shift in ((1, -2.0), (0, 0.0), (-1, 2.0)):
        # the wrap adds `shift` to the new y coordinate; carry it through rectify
        out[label] = rectify((0.0, shift), params)
    return out


def rho_to_polygon(rho) -> tuple[int, int]:
    """Regular polygon and web step matching a rational twist p/q."""
    r = Fraction(rho)
    if not 0 < r <= Fraction(1, 4):
        raise OutOfRange(f"rho={r} must lie in (0, 1/4]")
    p, q = r.numerator, r.denominator
    return (q, p) if q % 2 == 0 else (2 * q, 2 * p)


@dataclass
class DfWeb:
    params: DfParams
    levels: int
    points: np.ndarray
    birth: np.ndarray
    atoms: np.ndarray
    rectified: np.ndarray

    def at_level(self, k: int, rectified: bool = False) -> np.ndarray:
        src = self.rectified if rectified else self.points
        return src[self.birth <= k]


def separatrices(params: DfParams, samples: int) -> np.ndarray:
    """The two wrap lines -x + ay = +-1 inside the square, sampled at
    `samples` points per unit of x."""
    a = params.a
    m = max(2, int(round(a * samples)))
    t = (np.arange(m) + 0.5) / m
    x1 = -1 + a * t
    x2 = 1 - a + a * t
    return np.vstack([np.column_stack([x1, (x1 + 1) / a]), np.column_stack([x2, (x2 - 1) / a])])


def df_web(params: DfParams, levels: int, samples: int = 1000) -> DfWeb:
    if levels < 0:
        raise ValueError("levels must be >= 0")
    cur = separatrices(params, samples)
    pts, births = [cur], [np.zeros(len(cur), int)]
    for k in range(1, levels + 1):
        cur = df_map(cur, params)
        pts.append(cur)
        births.append(np.full(len(cur), k))
    P = np.vstack(pts)
    return DfWeb(params, levels, P, np.concatenate(births), atom_labels(P, params), rectify(P, params))


def df_period(state, params: DfParams, max_iter: int = 10**5, tol: float = 1e-9) -> int | None:
    x0, y0 = float(state[0]), float(state[1])
    x, y = x0, y0
    a = params.a
    for k in range(1, max_iter + 1):
        x, y = y, _wrap(-x + a * y)
        if abs(x - x0) <= tol and abs(y - y0) <= tol:
            return k
    return None


# tangent map <-> Df bridge


@dataclass(frozen=True)
class Similarity:
    """z -> scale * e^{i rotation} z + translation, on complex coordinates."""

    scale: float
    rotation: float
    translation: complex
    residual: float = 0.0

    def apply(self, pts: np.ndarray) -> np.ndarray:
        z = pts[:, 0] + 1j * pts[:, 1]
        w = self.scale * np.exp(1j * self.rotation) * z + self.translation
        return np.column_stack([w.real, w.imag])


def fit_similarity(src: np.ndarray, dst: np.ndarray) -> Similarity:
    """Least-squares similarity taking src to dst (paired rows)."""
    z = src[:, 0] + 1j * src[:, 1]
    w = dst[:, 0] + 1j * dst[:, 1]
    A = np.column_stack([z, np.ones_like(z)])
    (m, t), *_ = np.linalg.lstsq(A, w, rcond=None)
    res = float(np.max(np.abs(A @ np.array([m, t]) - w)))
    return Similarity(float(abs(m)), float(cmath.phase(m)), complex(t), res)


def central_polygon(params: DfParams) -> np.ndarray:
    """Vertices of the limiting central tile in rectified coordinates.

    The wrap lines rectify to lines at distance 1 from the origin, and the
    rotation sweeps them around, so the tile is the regular polygon with
    apothem 1 whose edge normals are multiples of theta.
    """
    n, _ = rho_to_polygon(params.rho)
    th = 2 * math.pi / n
    R = 1 / math.cos(th / 2)
    ang = np.pi / 2 + th / 2 + th * np.arange(n)
    # clockwise, matching the tangent-map generators
    return np.column_stack([R * np.cos(ang), R * np.sin(ang)])[::-1]


def bridge_similarity(n: int) -> Similarity:
    """Fit from the canonical tangent n-gon (circumradius 1) onto the
    rectified Df central polygon for rho = 1/n.

    Among the n cyclic vertex matchings, all of which fit exactly because of
    rotational symmetry, the one with the smallest rotation is returned.
    """
    params = DfParams(Fraction(1, n))
    src = make_regular_ngon(n).float_vertices
    dst = central_polygon(params)
    best = None
    for shift in range(n):
        s = fit_similarity(src, np.roll(dst, shift, axis=0))
        if s.residual > 1e-9:
            continue
        if best is None or abs(s.rotation) < abs(best.rotation) - 1e-12:
            best = s
    if best is None:
        raise Degenerate("no vertex matching gives a similarity")
    return best


def tangent_to_df(point, n: int) -> tuple[float, float]:
    """Tangent-map coordinates of the canonical n-gon to Df coordinates at rho = 1/n."""
    s = bridge_similarity(n)
    p = s.apply(np.array([[float(point[0]), float(point[1])]]))
    x, y = unrectify(p, DfParams(Fraction(1, n)))[0]
    return float(x), float(y)


def df_to_tangent(state, n: int) -> tuple[float, float]:
    s = bridge_similarity(n)
    r = rectify(np.array([[float(state[0]), float(state[1])]]), DfParams(Fraction(1, n)))
    z = complex(r[0, 0], r[0, 1])
    w = (z - s.translation) / (s.scale * cmath.exp(1j * s.rotation))
    return w.real, w.imag


@dataclass
class CensusRow:
    name: str
    df_period: int | None
    tangent_period: int | None
    tangent_tiles: int


@dataclass
class DfCensus:
    n: int  # the tangent polygon has 2n sides
    rows: list[CensusRow] = field(default_factory=list)

    def row(self, name: str) -> CensusRow:
        return next(r for r in self.rows if r.name == name)

    def predicted(self, k: int) -> int:
        """2kN tiles for the S[k]/LS[k] pair, or 2N when the pair coincides."""
        p = self.row(f"S[{k}]").df_period
        return 2 * self.n if p == 2 else 2 * p * self.n

    def counted(self, k: int) -> int:
        s = self.row(f"S[{k}]").tangent_tiles
        ls = self.row(f"LS[{k}]").tangent_tiles
        return s if self.row(f"S[{k}]").df_period == 2 else s + ls


def _tile_count(ft: FloatTangent, center: tuple[float, float], m: int, max_iter: int) -> int:
    """Distinct tiles met by the orbits of the m rotated and mirrored copies
    of a periodic centre."""
    x, y = center
    seen: set = set()
    for j in range(m):
        a = 2 * math.pi * j / m
        p = (math.cos(a) * x - math.sin(a) * y, math.sin(a) * x + math.cos(a) * y)
        for q in (p, (-p[0], p[1])):
            if (round(q[0], 7), round(q[1], 7)) in seen:
                continue
            rec = ft.orbit(q, max_iter, record_points=True)
            seen.update((round(u, 7), round(v, 7)) for u, v in rec.points)
    return len(seen)


def df_period_census(n: int, max_iter: int = 10**5) -> DfCensus:
    """Df and tangent periods of S[k] and LS[k] for the regular 2n-gon at
    theta = 2 pi / 2n, with tangent-side tile counts.

    LS[k] at the last index coincides with S[k] and is listed for
    completeness.
    """
    m = 2 * n
    params = DfParams(Fraction(1, m))
    fam = first_family(m)
    P = make_regular_ngon(m)
    ft = FloatTangent(P)
    tiles = [t for t in fam if t.kind == "S"]
    s_last = tiles[-1]
    tiles += [t for t in fam if t.kind == "LS"]
    tiles.append(replace(s_last, kind="LS"))
    census = DfCensus(n)
    for t in tiles:
        c = t.center.as_float()
        dfp = df_period(tangent_to_df(c, m), params, max_iter)
        tp = iterate_orbit(P, t.center, max_iter).period
        census.rows.append(CensusRow(t.name, dfp, tp, _tile_count(ft, c, m, max_iter)))
    return census


# conjugacy check between rectified Df webs and tangent webs


def web_conjugacy(n: int, levels: Sequence[int], samples: int = 400, extent: float = 12.0) -> list[float]:
    """One-sided distance from the rectified rho = 1/n Df web to the combined
    tangent web of the regular n-gon, per level.

    The tangent web is carried through the fitted bridge similarity so both
    live in rectified Df coordinates.
    """
    params = DfParams(Fraction(1, n))
    sim = bridge_similarity(n)
    top = max(levels)
    dweb = df_web(params, top, samples)
    P = make_regular_ngon(n)
    # sample density is per unit length in the target coordinates
    tspu = int(math.ceil(samples * sim.scale))
    tweb = generate_web(P, WebConfig(levels=top, samples_per_unit_length=tspu, extent=extent), "combined")
    out = []
    for k in levels:
        a = dweb.at_level(k, rectified=True)
        b = sim.apply(tweb.at_level(k))
        d, _ = cKDTree(b).query(a)
        out.append(float(d.max()))
    return out


# rhombi accounting


@dataclass
class RhombiReport:
    n: int
    count: int
    rhombus_area: float
    total_area: float
    union_area: float
    overlap_excess: float
    star_area: float
    shape_mismatch: float

    @property
    def accounted_area(self) -> float:
        """Total rhombus area less the area counted more than once."""
        return self.total_area - self.overlap_excess


def rhombi_accounting(n: int) -> RhombiReport:
    """Area bookkeeping for the n/2 rotated copies of the rectified Df square
    at theta = 2 pi / n, against the inner star.

    The star is the {n / (n/2 - 1)} star polygon of the apothem-1 central
    tile; its tips are the acute corners of the rhombi.
    """
    from shapely import affinity
    from shapely.geometry import Polygon
    from shapely.ops import unary_union

    if n % 2 or n < 6:
        raise ValueError("needs even n >= 6")
    params = DfParams(Fraction(1, n))
    th = params.theta
    sq = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    rh = Polygon(rectify(sq, params))
    copies = [affinity.rotate(rh, j * th, origin=(0, 0), use_radians=True) for j in range(n // 2)]
    total = sum(r.area for r in copies)
    union = unary_union(copies)
    k = n // 2 - 1
    tip, inner = 1 / math.cos(k * th / 2), 1 / math.cos((k - 1) * th / 2)
    corners = np.asarray(rh.exterior.coords)[:-1]
    far = corners[np.argmax(np.hypot(corners[:, 0], corners[:, 1]))]
    a0 = math.atan2(far[1], far[0])
    star = []
    for j in range(n):
        a = a0 + j * th
        star.append((tip * math.cos(a), tip * math.sin(a)))
        star.append((inner * math.cos(a + th / 2), inner * math.sin(a + th / 2)))
    S = Polygon(star)
    return RhombiReport(
        n,
        len(copies),
        rh.area,
        total,
        union.area,
        total - union.area,
        S.area,
        union.symmetric_difference(S).area,
    )


# Goetz piecewise rotations


@dataclass(frozen=True)
class Atom:
    triangle: tuple[complex, complex, complex]
    coefficient: complex
    translation: complex

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        a, b, c = self.triangle
        d1 = _orient(a, b, z)
        d2 = _orient(b, c, z)
        d3 = _orient(c, a, z)
        neg = d1 < -tol or d2 < -tol or d3 < -tol
        pos = d1 > tol or d2 > tol or d3 > tol
        return not (neg and pos)

    def __call__(self, z: complex) -> complex:
        return self.coefficient * z + self.translation


def _orient(a: complex, b: complex, z: complex) -> float:
    return ((b - a).conjugate() * (z - a)).imag


@dataclass(frozen=True)
class PiecewiseRotationMap:
    atoms: tuple[Atom, ...]
    dispatch: Callable[[complex], int] | None = None

    def index(self, z: complex) -> int:
        hits = [i for i, A in enumerate(self.atoms) if A.contains(z)]
        if not hits:
            raise OutOfDomain(f"{z} lies outside every atom")
        if self.dispatch is not None:
            return self.dispatch(z)
        return hits[0]

    def __call__(self, z: complex) -> complex:
        return self.atoms[self.index(z)](z)

    def orbit(self, z: complex, steps: int) -> list[complex]:
        out = [z]
        for _ in range(steps):
            z = self(z)
            out.append(z)
        return out


def goetz_pi5() -> PiecewiseRotationMap:
    a = cmath.exp(1j * math.pi / 5)
    s = a**2 + a**4 + a**6
    A0 = Atom((0j, s, -1 + 0j), a**4, s)
    A1 = Atom((0j, -1 + 0j, a**6), a**6, a**6)
    return PiecewiseRotationMap((A0, A1), lambda z: 0 if z.imag > 0 else 1)


def goetz_pi7() -> PiecewiseRotationMap:
    a = cmath.exp(1j * math.pi / 7)
    A0 = Atom((0j, a**5 - 1, -1 + 0j), a**6, a**5 - 1)
    A1 = Atom((0j, -1 + 0j, -(a**3)), -a, -(a**4) + a**5 - a**6 - 1)
    A2 = Atom((0j, -(a**3), -(a**3) + a**2), a**6, -(a**3))
    return PiecewiseRotationMap((A0, A1, A2))


def goetz_map(variant: str, z: complex) -> complex:
    maps = {"pi5": goetz_pi5, "pi7": goetz_pi7}
    if variant not in maps:
        raise ValueError(f"unknown variant {variant!r}")
    return maps[variant]()(complex(z))


def pi5_fixed_point() -> complex:
    """Centre of the pentagon fixed by the first atom map."""
    a = cmath.exp(1j * math.pi / 5)
    return (a**2 + a**4 + a**6) / (1 - a**4)


@dataclass(frozen=True)
class GoetzScaling:
    geometric: mpf
    dimension: mpf | None


def pi5_scaling() -> GoetzScaling:
    k = 2 / (1 + mpmath.sqrt(5))
    return GoetzScaling(k, dimension_estimate(2, k))


def pi7_scaling() -> GoetzScaling:
    return GoetzScaling(4 * mpmath.sin(mpmath.pi / 14) ** 2, None)


def pi7_nu_identity_residual() -> mpf:
    """|nu - 2 cos(pi/7) GenScale[7]|."""
    nu = pi7_scaling().geometric
    return abs(nu - 2 * mpmath.cos(mpmath.pi / 7) * scale_table(7).gen_scale)


def pi7_temporal_factors(n: int) -> tuple[int, int]:
    return (2 ** (2 * n + 1) + 1) // 3, (4 ** (n + 1) - 1) // 3
