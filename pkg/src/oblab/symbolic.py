"""Substitution words, step-word statistics and bud addresses."""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from mpmath import mpf

from .family import ConsistencyError, first_family, scale_table, virtual_chain
from .geometry import ConvexPolygon, Point, make_regular_ngon
from .precision import cos, pi, sin
from .tangent import FloatTangent, SingularPoint, iterate_orbit


class AlphabetError(KeyError):
    pass


class AddressError(ValueError):
    pass


@dataclass(frozen=True)
class SubstitutionRule:
    images: dict

    @property
    def alphabet(self) -> list:
        return sorted(self.images)

    def __call__(self, word: Iterable) -> list:
        return substitution_apply(self, word)

    def power(self, word: Iterable, k: int) -> list:
        w = list(word)
        for _ in range(k):
            w = substitution_apply(self, w)
        return w

    def is_primitive(self, max_power: int = 10) -> bool:
        letters = set(self.alphabet)
        for k in range(1, max_power + 1):
            if all(set(self.power([a], k)) >= letters for a in letters):
                return True
        return False

    def fixed_point_prefix(self, symbol, length: int) -> list:
        """Prefix of the fixed point grown from `symbol` (which must start its own image)."""
        if self.images[symbol][0] != symbol:
            raise ValueError("symbol does not begin its own image")
        w = [symbol]
        while len(w) < length:
            nxt = substitution_apply(self, w)
            if len(nxt) == len(w):
                break
            w = nxt
        return w[:length]


PENTAGON_RULE = SubstitutionRule({1: (1, 2, 1, 2, 1, 1, 1), 2: (1, 1, 1)})
MORSE_RULE = SubstitutionRule({0: (0, 1), 1: (1, 0)})


def substitution_apply(rule: SubstitutionRule, word: Iterable) -> list:
    out: list = []
    for a in word:
        try:
            out.extend(rule.images[a])
        except KeyError:
            raise AlphabetError(a) from None
    return out


def is_cyclic_rotation(a: Sequence, b: Sequence) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = list(b) + list(b)
    n = len(a)
    a = list(a)
    return any(doubled[i : i + n] == a for i in range(n))


def minimal_period(word: Sequence) -> int:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and list(word[p:]) == list(word[:-p]):
            return p
    return n


@dataclass
class WordCheck:
    generation: int
    period: int | None
    word: list[int]
    expected: list[int]
    matches: bool


def verify_orbit_word(generation: int, max_iter: int = 10**7) -> WordCheck:
    """Compare the step word of the N=5 D[j] centre with the substitution image.

    The simulated word, cut to its minimal period, must be a cyclic rotation
    of the rule applied j-1 times to (1).
    """
    if generation < 1:
        raise ValueError("generation >= 1")
    tile = next(t for t in virtual_chain(5, generation) if t.kind == "D[j]" and t.index == generation)
    rec = iterate_orbit(make_regular_ngon(5), tile.center, max_iter)
    expected = PENTAGON_RULE.power([1], generation - 1)
    if rec.period is None:
        raise ConsistencyError(f"D[{generation}] centre did not close up ({rec.termination})")
    word = rec.step_sequence
    unit = word[: minimal_period(word)]
    ok = is_cyclic_rotation(unit, expected)
    if not ok:
        first = next((i for i, (x, y) in enumerate(zip(unit, expected)) if x != y), min(len(unit), len(expected)))
        raise ConsistencyError(f"D[{generation}] word diverges at index {first}")
    return WordCheck(generation, rec.period, unit, expected, ok)


@dataclass
class WordStats:
    tally: dict
    length: int
    winding: Fraction

    def winding_float(self) -> float:
        return float(self.winding)


def word_statistics(word: Sequence[int], n: int, m: int | None = None) -> WordStats:
    """Symbol tally and winding estimate mean(step)/n over the first m symbols."""
    w = list(word if m is None else word[:m])
    if m is not None and len(w) < m:
        raise ValueError("word shorter than requested prefix")
    tally = dict(sorted(Counter(w).items(), key=lambda kv: -kv[0]))
    return WordStats(tally, len(w), Fraction(sum(w), len(w) * n))


def parse_word(text: str) -> list[int]:
    return [int(t) for t in text.replace("{", "").replace("}", "").split(",") if t.strip()]


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(a) for a in word)


def corner_word_counts(P: ConvexPolygon, n: int, samples: int = 4000, radius: float | None = None, seed: int = 0) -> list[int]:
    """Distinct corner words of lengths 1..n over random exterior seeds.

    These are lower bounds for the true complexity since only sampled tiles
    contribute.
    """
    ft = FloatTangent(P)
    V = ft.V
    # words of length n need seeds out to roughly n polygon diameters
    R = radius or 2.0 * n * float(np.max(np.hypot(V[:, 0], V[:, 1])))
    rng = random.Random(seed)
    words: list[set] = [set() for _ in range(n)]
    done = 0
    while done < samples:
        r = R * math.sqrt(rng.random())
        a = rng.random() * 2 * math.pi
        x, y = r * math.cos(a), r * math.sin(a)
        if P.contains(Point.of(x, y), strict=False):
            continue
        try:
            corners = []
            hint = 0
            for _ in range(n):
                i = ft.support(x, y, hint)
                corners.append(i)
                x, y = 2 * ft.vx[i] - x, 2 * ft.vy[i] - y
                hint = i
        except SingularPoint:
            continue
        for L in range(1, n + 1):
            words[L - 1].add(tuple(corners[:L]))
        done += 1
    return [len(s) for s in words]


@dataclass
class ComplexityReport:
    counts: list[int]
    degree_estimate: float


def empirical_complexity(P: ConvexPolygon, n: int = 12, samples: int = 4000, seed: int = 0) -> ComplexityReport:
    counts = corner_word_counts(P, n, samples, seed=seed)
    xs = np.log(np.arange(max(2, n // 2), n + 1))
    ys = np.log(np.array(counts[max(2, n // 2) - 1 :], dtype=float))
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) > 1 else 0.0
    return ComplexityReport(counts, slope)


@dataclass(frozen=True)
class BudAddress:
    n: int
    digits: tuple[int, ...]
    periodic: bool = True


def _address_root(n: int):
    """Level-0 tile, number of buds and the per-level scale."""
    if n % 2:
        t = scale_table(n)
        return t.c_d, t.r_d, 2 * n, t.gen_scale
    if (n // 2) % 2 == 1 and n // 2 >= 5:
        t = scale_table(n)
        return Point(mpf(0), mpf(0)), mpf(1), n, t.half_gen_scale
    raise AddressError("bud addresses are defined for odd and twice-odd N")


def address_to_point(n: int, address: Sequence[int], depth: int, periodic: bool = True) -> tuple[Point, mpf]:
    """Centre of the tile reached after depth + 1 bud choices, and its radius.

    The walk starts at the level-0 tile (left D for odd n, the generator for
    twice-odd n).  Bud b of a tile with `sides` buds points at angle
    -(b - 1) 2 pi / sides from 3 o'clock; the next tile is the current one
    scaled by GenScale and touching it vertex to vertex.  Depth 0 is D[1].
    The limit point lies within the returned radius times 1/(1 - GenScale)
    of the returned centre.
    """
    c, r, sides, g = _address_root(n)
    digits = list(address)
    if not digits:
        raise AddressError("empty address")
    need = depth + 1
    if len(digits) < need:
        if not periodic:
            raise AddressError("address shorter than depth")
        digits = (digits * (need // len(digits) + 1))[:need]
    for b in digits[:need]:
        if not 1 <= b <= sides:
            raise AddressError(f"bud {b} outside 1..{sides}")
        a = -(b - 1) * 2 * pi / sides
        step = r * (1 + g)
        c = Point(c.x + step * cos(a), c.y + step * sin(a))
        r = r * g
    return c, r


def address_limit(n: int, address: Sequence[int]) -> Point:
    """Closed-form limit of a periodic address (geometric series)."""
    c, r, sides, g = _address_root(n)
    digits = list(address)
    L = len(digits)
    acc = Point(mpf(0), mpf(0))
    for j, b in enumerate(digits):
        a = -(b - 1) * 2 * pi / sides
        w = r * (1 + g) * g**j
        acc = Point(acc.x + w * cos(a), acc.y + w * sin(a))
    f = 1 / (1 - g**L)
    return Point(c.x + acc.x * f, c.y + acc.y * f)


def address_orbit_steps(n: int, address: Sequence[int], depth: int, m: int) -> list[int]:
    """First m orbit steps of the depth-level address point (double precision)."""
    p, _ = address_to_point(n, address, depth)
    return FloatTangent(make_regular_ngon(n)).steps(p.as_float(), m)


def periodic_windings_n5(depth: int = 3) -> dict[str, Fraction]:
    """Winding numbers of the periodic family and chain tiles of N=5."""
    P = make_regular_ngon(5)
    out: dict[str, Fraction] = {}
    tiles = [t for t in first_family(5) if t.kind != "M"] + [t for t in virtual_chain(5, depth) if t.index]
    for t in tiles:
        for label, p in ((t.name, t.center), (t.name + "'", Point(t.center.x + t.radius / 10, t.center.y))):
            rec = iterate_orbit(P, p, 10**6)
            if rec.period:
                out[label] = rec.winding()
    return out
