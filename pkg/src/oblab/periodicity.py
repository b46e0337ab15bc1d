"""Period formulas, ring structure, decomposition and generation tables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .family import (
    ConsistencyError,
    TileSpec,
    first_family,
    is_prime,
    scale_table,
    virtual_chain,
)
from .geometry import Point, make_regular_ngon
from .precision import cos, digits_context, pi, sin, to_scalar
from .tangent import iterate_orbit, winding_number


class UnsupportedComposite(ValueError):
    pass


def prime_family_period(n: int, kind: str, k: int | None = None) -> int:
    """Closed-form periods for prime n.

    kind is one of "S" (any k), "D" (the D tile), "M[1]", "D[1]", "DS"
    (step-k tiles from D, period n(n - (k + 2))).
    """
    if not is_prime(n) or n < 5:
        raise UnsupportedComposite(f"no closed form for N={n}; simulate instead")
    if kind in ("S", "D"):
        return n
    if kind == "M[1]":
        return n * (n - 3)
    if kind == "D[1]":
        return n * (n - 4)
    if kind == "DS":
        if k is None or not 1 <= k <= n - 3:
            raise ValueError("DS needs a step 1 <= k <= n-3")
        return n * (n - (k + 2))
    raise ValueError(f"unknown tile kind {kind!r}")


def pentagon_d(n: int) -> int:
    """Closed form 5/7 (8 6^(n-1) + (-1)^n), exact."""
    num = 5 * (8 * 6 ** (n - 1) + (-1) ** n)
    if num % 7:
        raise ArithmeticError("closed form is not integral")
    return num // 7


def pentagon_d_recurrence(n: int) -> int:
    d = {1: 5, 2: 35}
    for i in range(3, n + 1):
        d[i] = 5 * d[i - 1] + 6 * d[i - 2]
    return d[n]


def pentagon_p(n: int) -> int:
    """Pentagon-tile periods; twice this is 5 (3 d_n / 5 + (-1)^(n-1))."""
    d = pentagon_d(n)
    twice = 5 * (3 * d // 5 + (-1) ** (n - 1))
    return twice // 2


def pentagon_periods(n: int) -> tuple[int, int]:
    if n < 1:
        raise ValueError("n >= 1")
    return pentagon_d(n), pentagon_p(n)


def dimension_estimate(growth_ratio, geometric_scale) -> mpf:
    """ln(growth_ratio) / ln(1/geometric_scale)."""
    r = to_scalar(growth_ratio)
    s = to_scalar(geometric_scale)
    if r <= 1 or not 0 < s < 1:
        raise ValueError("need growth_ratio > 1 and 0 < scale < 1")
    return mpmath.log(r) / mpmath.log(1 / s)


@dataclass
class RingSpec:
    n: int
    k: int
    step_sequence: list[int]
    periods: list[int]
    count: int
    centers: list[Point] = field(default_factory=list)
    simulated: bool = False

    @property
    def winding(self) -> Fraction:
        return winding_number(self.step_sequence, self.n)


def _ring_prediction(n: int, k: int) -> tuple[list[int], int, list[int]]:
    if n % 2:
        m = n // 2
        steps = [m] + [m, m + 1] * k
        count = n * (2 * k + 1)
    else:
        m = n // 2
        steps = [m - 1] + [m] * k
        count = n * (k + 1)
    period = len(steps) * n // math.gcd(sum(steps), n)
    return steps, count, [period] * (count // period)


def _rot(p: Point, a) -> Point:
    c, s = cos(a), sin(a)
    return Point(c * p.x - s * p.y, s * p.x + c * p.y)


def ring_centers(n: int, k: int) -> list[Point]:
    """Tile centres of ring k.

    Even n: the ring is the regular polygon with vertices (k+1) cD rotated,
    with k evenly spaced tiles between consecutive vertices.  Odd n: the orbit
    of the D centre pushed k spacings further out visits every tile.
    """
    t = scale_table(n)
    if n % 2:
        spacing = 2 * abs(t.c_d.x)
        start = Point(-t.c_d.x + k * spacing, t.c_d.y)
        rec = iterate_orbit(make_regular_ngon(n), start, max_iter=10 * n * (2 * k + 1), record_points=True)
        return [start] + rec.points[:-1]
    verts = [_rot(t.c_d * (k + 1), 2 * pi * j / n) for j in range(n)]
    out = []
    for j in range(n):
        a, b = verts[j], verts[(j + 1) % n]
        for i in range(k + 1):
            out.append(a + (b - a) * (mpf(i) / (k + 1)))
    return out


def ring_structure(n: int, k: int, simulate: bool = False) -> RingSpec:
    steps, count, periods = _ring_prediction(n, k)
    spec = RingSpec(n, k, steps, periods, count)
    if not simulate:
        return spec
    P = make_regular_ngon(n)
    centers = ring_centers(n, k)
    found = []
    seen = [False] * len(centers)
    for i, c in enumerate(centers):
        if seen[i]:
            continue
        rec = iterate_orbit(P, c, max_iter=4 * count, record_points=True)
        if rec.period is None:
            raise ConsistencyError(f"ring {k} centre {i} is not periodic")
        for q in rec.points:
            for j, r in enumerate(centers):
                if not seen[j] and abs(q.x - r.x) + abs(q.y - r.y) < mpf(10) ** -20:
                    seen[j] = True
        found.append((rec.period, rec.step_sequence))
    sim_periods = sorted(p for p, _ in found)
    if sim_periods != sorted(periods) or len(centers) != count:
        raise ConsistencyError(f"ring {k}: predicted {periods}, simulated {sim_periods}")
    word = found[0][1]
    if not _cyclic_multiple(word, steps):
        raise ConsistencyError(f"ring {k}: step word {word[:12]} does not match {steps}")
    spec.centers = centers
    spec.simulated = True
    return spec


def _cyclic_multiple(word: list[int], unit: list[int]) -> bool:
    """True if word is a repetition of some rotation of unit."""
    if len(word) % len(unit):
        return False
    for r in range(len(unit)):
        rot = unit[r:] + unit[:r]
        if rot * (len(word) // len(unit)) == word:
            return True
    return False


def off_center_probe(tile: TileSpec) -> Point:
    return Point(tile.center.x + tile.radius / 10, tile.center.y)


@dataclass
class PropensityResult:
    center_period: int | None
    probe_period: int | None

    @property
    def consistent(self) -> bool:
        k, j = self.center_period, self.probe_period
        if k is None or j is None:
            return False
        return j == (2 * k if k % 2 else k)


def propensity(n: int, tile: TileSpec, max_iter: int = 10**7, backend: str = "mp") -> PropensityResult:
    """Centre period k versus an off-centre period (expected 2k for odd k, k otherwise)."""
    P = make_regular_ngon(n)
    kc = iterate_orbit(P, tile.center, max_iter, backend=backend).period
    kp = iterate_orbit(P, off_center_probe(tile), max_iter, backend=backend).period
    return PropensityResult(kc, kp)


@dataclass
class DecompositionResult:
    n: int
    step: int
    decomposes: bool
    factor_count: int
    periods: list[int] = field(default_factory=list)


def decomposition_check(n: int, k: int, tile: str = "S", simulate: bool = False) -> DecompositionResult:
    """Orbits of step-k tiles split into gcd(k, n) pieces exactly when gcd > 1."""
    if not 1 <= k <= n:
        raise ValueError("bad step")
    g = math.gcd(k, n)
    res = DecompositionResult(n, k, g > 1, g)
    if simulate:
        spec = next(t for t in first_family(n) if t.kind == tile and t.index == k)
        total = n if tile == "S" else n * (n - (k + 2))
        per = iterate_orbit(make_regular_ngon(n), spec.center, 10 * total).period
        if per is None or total % per:
            raise ConsistencyError(f"period {per} does not divide {total}")
        res.periods = [per] * (total // per)
        if len(res.periods) != max(g, 1) and g > 1:
            raise ConsistencyError(f"{len(res.periods)} groups but gcd is {g}")
    return res


@dataclass
class GenerationRow:
    generation: int
    kind: str
    period: int | None
    ratio: float | None
    status: str = "simulated"


@dataclass
class GenerationTable:
    n: int
    rows: list[GenerationRow]

    def periods(self, kind: str) -> list[int | None]:
        return [r.period for r in self.rows if r.kind == kind]


def generation_table(n: int, depth: int, max_iter: int = 10**7, backend: str = "mp") -> GenerationTable:
    """Simulate the periods of the M[j] and D[j] chain centres for j = 1..depth."""
    g = scale_table(n).gen_scale
    need = 10 + int(depth * abs(mpmath.log10(g))) + 20
    rows: list[GenerationRow] = []
    with digits_context(max(mpmath.mp.dps, need)):
        chain = virtual_chain(n, depth)
        P = make_regular_ngon(n)
        prev: dict[str, int | None] = {"M": None, "D": None}
        for tile in chain:
            if tile.index == 0:
                continue
            kind = tile.kind[0]
            rec = iterate_orbit(P, tile.center, max_iter, backend=backend)
            per = rec.period
            last = prev[kind]
            ratio = per / last if per and last else None
            status = "simulated" if per else rec.termination
            rows.append(GenerationRow(tile.index, kind, per, ratio, status))
            prev[kind] = per
    return GenerationTable(n, rows)


def pentagon_chain_periods(depth: int, backend: str = "mp") -> list[int | None]:
    """Simulated D[j] periods for N=5, to compare with the difference equation."""
    tab = generation_table(5, depth, backend=backend)
    return tab.periods("D")
