"""Sampled singularity webs.

The forward web starts from the edges and their trailing extensions and is
pushed through the inverse map; the inverse web starts from the edges and
forward extensions and is pushed through the map itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .geometry import ConvexPolygon
from .tangent import FloatTangent

MODES = ("forward", "inverse", "combined")


@dataclass(frozen=True)
class WebConfig:
    levels: int = 10
    samples_per_unit_length: int = 1000
    extent: float = 12.0  # ray length, in units of the polygon's circumradius
    window: tuple[float, float, float, float] | None = None  # xmin, ymin, xmax, ymax

    def __post_init__(self):
        if self.levels < 0:
            raise ValueError("levels must be >= 0")
        if self.samples_per_unit_length < 1:
            raise ValueError("need at least one sample per unit length")
        if self.extent <= 1:
            raise ValueError("extent must exceed the polygon radius")


@dataclass
class Web:
    mode: str
    level: int
    points: np.ndarray  # (m, 2)
    birth: np.ndarray  # level at which each point was produced
    alive: np.ndarray  # whether the seed behind the point survived to the final level
    seed_alive: list[np.ndarray] = field(default_factory=list)  # per level, over ray seeds
    source: str = ""

    def at_level(self, k: int) -> np.ndarray:
        """Points of W_k, i.e. everything born at level <= k."""
        return self.points[self.birth <= k]

    def born_at(self, k: int) -> np.ndarray:
        return self.points[self.birth == k]

    def in_window(self, window) -> "Web":
        xmin, ymin, xmax, ymax = window
        m = (self.points[:, 0] >= xmin) & (self.points[:, 0] <= xmax) & (self.points[:, 1] >= ymin) & (self.points[:, 1] <= ymax)
        return Web(self.mode, self.level, self.points[m], self.birth[m], self.alive[m], self.seed_alive, self.source)


def _circumradius(P: ConvexPolygon) -> float:
    c = P.float_vertices.mean(axis=0)
    return float(np.max(np.hypot(*(P.float_vertices - c).T)))


def level0_set(P: ConvexPolygon, mode: str = "forward", extent: float = 12.0) -> list[tuple[np.ndarray, np.ndarray, bool]]:
    """Edges plus open extension rays cut at `extent` radii.

    Returns (start, end, is_ray) triples.  For rays the start is the polygon
    vertex, which is not part of the open ray.
    """
    if mode not in MODES:
        raise ValueError(mode)
    V = P.float_vertices
    n = len(V)
    L = extent * _circumradius(P)
    out = []
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        out.append((a, b, False))
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        d = (b - a) / np.hypot(*(b - a))
        if mode in ("forward", "combined"):
            out.append((a, a - d * L, True))
        if mode in ("inverse", "combined"):
            out.append((b, b + d * L, True))
    return out


def _sample(seg, spu: int) -> np.ndarray:
    a, b, is_ray = seg
    length = float(np.hypot(*(b - a)))
    m = max(2, int(round(length * spu)))
    t = (np.arange(m) + 0.5) / m
    return a + (b - a) * t[:, None]


def _iterate(P: ConvexPolygon, seeds: np.ndarray, levels: int, inverse: bool, tol: float):
    ft = FloatTangent(P, inverse=inverse)
    cur = seeds
    idx = np.arange(len(seeds))
    pts, births, owners = [seeds], [np.zeros(len(seeds), int)], [idx]
    alive_hist = [np.ones(len(seeds), bool)]
    alive = np.ones(len(seeds), bool)
    for k in range(1, levels + 1):
        img, _, ok = ft.batch(cur, tol)
        keep = ok
        cur, idx = img[keep], idx[keep]
        alive = np.zeros(len(seeds), bool)
        alive[idx] = True
        alive_hist.append(alive)
        pts.append(cur)
        births.append(np.full(len(cur), k))
        owners.append(idx)
    return pts, births, owners, alive_hist


def generate_web(P: ConvexPolygon, config: WebConfig, mode: str = "forward", tol: float = 1e-9) -> Web:
    """Sampled web up to config.levels.

    Each sampled ray point carries its image history; a point that lands on
    the singular set (within tol) is retired and marked not alive.
    """
    if mode not in MODES:
        raise ValueError(mode)
    if mode == "combined":
        f = generate_web(P, config, "forward", tol)
        i = generate_web(P, config, "inverse", tol)
        return Web(
            "combined",
            config.levels,
            np.vstack([f.points, i.points]),
            np.concatenate([f.birth, i.birth]),
            np.concatenate([f.alive, i.alive]),
            [np.concatenate([a, b]) for a, b in zip(f.seed_alive, i.seed_alive)],
            P.label,
        )
    segs = level0_set(P, mode, config.extent)
    spu = config.samples_per_unit_length
    edges = np.vstack([_sample(s, spu) for s in segs if not s[2]])
    rays = np.vstack([_sample(s, spu) for s in segs if s[2]])
    pts, births, owners, hist = _iterate(P, rays, config.levels, inverse=(mode == "forward"), tol=tol)
    final_alive = hist[-1]
    all_pts = np.vstack([edges] + pts)
    all_birth = np.concatenate([np.zeros(len(edges), int)] + births)
    all_alive = np.concatenate([np.ones(len(edges), bool)] + [final_alive[o] for o in owners])
    web = Web(mode, config.levels, all_pts, all_birth, all_alive, hist, P.label)
    if config.window is not None:
        web = web.in_window(config.window)
    return web


def survival_rate(web: Web, level: int) -> float:
    """Fraction of ray seeds still alive at `level` (see local_survival for a
    windowed version)."""
    if level > web.level:
        raise ValueError("level beyond the generated web")
    if level == 0:
        return 1.0
    hist = web.seed_alive
    return float(hist[level].sum() / hist[0].sum())


def local_survival(P: ConvexPolygon, window, levels: int, spu: int = 1000, mode: str = "inverse", tol: float = 1e-9) -> float:
    """Pooled fraction of web points inside `window` that survive one more step,
    over levels 1..levels."""
    segs = level0_set(P, mode)
    cur = np.vstack([_sample(s, spu) for s in segs if s[2]])
    ft = FloatTangent(P, inverse=(mode == "forward"))
    xmin, ymin, xmax, ymax = window
    seen = kept = 0
    for _ in range(levels):
        img, _, ok = ft.batch(cur, tol)
        inside = (cur[:, 0] >= xmin) & (cur[:, 0] <= xmax) & (cur[:, 1] >= ymin) & (cur[:, 1] <= ymax)
        seen += int(inside.sum())
        kept += int(ok[inside].sum())
        cur = img[ok]
    return kept / seen if seen else 1.0


def one_sided_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """max over a of the distance to the nearest point of b."""
    if len(a) == 0:
        return 0.0
    d, _ = cKDTree(b).query(a)
    return float(d.max())


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    return max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a))


def mirror_distance(P: ConvexPolygon, config: WebConfig) -> list[float]:
    """Hausdorff distance between the forward web and the mirrored inverse web, per level."""
    f = generate_web(P, config, "forward")
    i = generate_web(P, config, "inverse")
    out = []
    for k in range(config.levels + 1):
        a = f.at_level(k)
        b = i.at_level(k) * np.array([-1.0, 1.0])
        out.append(hausdorff(a, b))
    return out


def points_inside(points: np.ndarray, poly: ConvexPolygon, shrink: float = 0.999) -> int:
    """Number of points strictly inside poly shrunk about its centroid."""
    V = poly.float_vertices
    c = V.mean(axis=0)
    V = c + (V - c) * shrink
    n = len(V)
    sign = -1.0 if poly.clockwise else 1.0
    inside = np.ones(len(points), bool)
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        cr = (b[0] - a[0]) * (points[:, 1] - a[1]) - (b[1] - a[1]) * (points[:, 0] - a[0])
        inside &= sign * cr > 0
    return int(inside.sum())
