import numpy as np
import pytest
from mpmath import pi

from oblab.family import family_tile, first_family, virtual_chain
from oblab.geometry import make_regular_ngon, rotated
from oblab.web import (
    WebConfig,
    generate_web,
    level0_set,
    local_survival,
    mirror_distance,
    points_inside,
    survival_rate,
)


def test_level0_counts():
    D = rotated(make_regular_ngon(4), pi / 4)
    segs = level0_set(D, "forward")
    assert len(segs) == 8
    assert sum(1 for s in segs if s[2]) == 4
    assert len(level0_set(make_regular_ngon(7), "inverse")) == 14


def test_level0_web_matches_level0_set():
    P = make_regular_ngon(5)
    w = generate_web(P, WebConfig(levels=0, samples_per_unit_length=50), "forward")
    assert w.level == 0 and (w.birth == 0).all()
    segs = level0_set(P, "forward")

    def seg_dist(p):
        best = np.inf
        for a, b, _ in segs:
            t = np.clip(np.dot(p - a, b - a) / np.dot(b - a, b - a), 0, 1)
            best = min(best, np.linalg.norm(p - (a + t * (b - a))))
        return best

    assert len(w.points) > 0
    assert max(seg_dist(p) for p in w.points) < 1e-12


def test_config_validation():
    with pytest.raises(ValueError):
        WebConfig(levels=-1)
    with pytest.raises(ValueError):
        WebConfig(extent=0.5)


def test_nesting_and_survival():
    P = make_regular_ngon(5)
    w = generate_web(P, WebConfig(levels=8, samples_per_unit_length=60), "inverse")
    sizes = [len(w.at_level(k)) for k in range(9)]
    assert sizes == sorted(sizes)
    rates = [survival_rate(w, k) for k in range(9)]
    assert rates[0] == 1.0
    assert all(a >= b for a, b in zip(rates, rates[1:]))


@pytest.mark.parametrize("n", [5, 7])
def test_mirror_property(n):
    spu = 100
    d = mirror_distance(make_regular_ngon(n), WebConfig(levels=6, samples_per_unit_length=spu))
    assert max(d) < 2 / spu


def test_first_family_emergence_heptagon():
    P = make_regular_ngon(7)
    w = generate_web(P, WebConfig(levels=10, samples_per_unit_length=150), "forward")
    late = w.points[w.birth >= 4]
    for name in ("S[1]", "S[2]", "D"):
        assert points_inside(late, family_tile(7, name).polygon()) == 0


def test_hendecagon_s1_s2_stable():
    P = make_regular_ngon(11)
    w = generate_web(P, WebConfig(levels=11, samples_per_unit_length=150), "combined")
    for name in ("S[1]", "S[2]"):
        t = family_tile(11, name)
        assert t.sides == 22
        assert points_inside(w.points, t.polygon()) == 0


def test_survival_higher_for_hendecagon():
    rates = {}
    for n in (5, 11):
        d1 = virtual_chain(n, 1)[3]
        assert d1.name == "D[1]"
        c, r = d1.center.as_float(), 1.5 * float(d1.radius)
        window = (c[0] - r, c[1] - r, c[0] + r, c[1] + r)
        rates[n] = local_survival(make_regular_ngon(n), window, levels=30, spu=1000)
    assert rates[11] > rates[5]


def test_window_filter():
    w = generate_web(make_regular_ngon(5), WebConfig(levels=2, samples_per_unit_length=40), "forward")
    sub = w.in_window((0, 0, 3, 3))
    assert len(sub.points) < len(w.points)
    assert (sub.points >= 0).all() and (sub.points <= 3).all()
