import pytest
from mpmath import cos, mpf, pi, sqrt

from oblab.geometry import (
    ConvexPolygon,
    DegenerateIntersection,
    InvalidPolygon,
    Line,
    Point,
    Ray,
    is_strictly_convex,
    line_intersection,
    make_regular_ngon,
    reflect_y,
    rotated,
    side_length,
)
from oblab.family import scale_table


def close(a, b, tol=1e-7):
    return abs(float(a) - float(b)) < tol


def diamond():
    return rotated(make_regular_ngon(4), pi / 4)


def test_even_n_has_flat_bottom():
    P = make_regular_ngon(8)
    ys = sorted(float(v.y) for v in P.vertices)
    assert close(ys[0], ys[1], 1e-25) and close(ys[0], -float(cos(pi / 8)))


def test_diamond():
    P = diamond()
    assert P.clockwise and is_strictly_convex(P.vertices)
    want = [(0, 1), (1, 0), (0, -1), (-1, 0)]
    assert all(close(v.x, w[0], 1e-25) and close(v.y, w[1], 1e-25) for v, w in zip(P.vertices, want))
    assert close(side_length(4), sqrt(2), 1e-25)


def test_heptagon_side_and_d_radius():
    assert close(side_length(7), 0.8677675)
    assert close(scale_table(7).r_d, 1.9498558)


def test_pentagon_bottom_edge():
    P = make_regular_ngon(5)
    ys = sorted(float(v.y) for v in P.vertices)
    assert close(ys[0], -0.8090170) and close(ys[1], -0.8090170)


def test_clockwise_orientation():
    P = make_regular_ngon(9)
    assert is_strictly_convex(P.vertices, clockwise=True)
    assert not is_strictly_convex(P.vertices, clockwise=False)


def test_reflect_y_is_an_involution():
    P = make_regular_ngon(5)
    Q = reflect_y(P)
    assert isinstance(Q, ConvexPolygon)
    assert all(close(a.x, b.x, 1e-25) and close(a.y, b.y, 1e-25) for a, b in zip(reflect_y(Q).vertices, P.vertices))
    assert reflect_y(Point.of(2, 3)) == Point.of(-2, 3)


def test_nonconvex_rejected():
    sq = [Point.of(0, 0), Point.of(0, 1), Point.of(1, 1), Point.of(1, 0)]
    ConvexPolygon(sq)
    with pytest.raises(InvalidPolygon):
        ConvexPolygon([Point.of(0, 0), Point.of(0, 1), Point.of(mpf("0.2"), mpf("0.2")), Point.of(1, 0)])
    with pytest.raises(InvalidPolygon):
        ConvexPolygon(sq[:2])


def test_line_intersection():
    a = Line(Point.of(0, 0), Point.of(1, 1))
    b = Line(Point.of(0, 2), Point.of(1, -1))
    p = line_intersection(a, b)
    assert close(p.x, 1, 1e-25) and close(p.y, 1, 1e-25)


def test_parallel_lines():
    a = Line(Point.of(0, 0), Point.of(1, 0))
    assert line_intersection(a, Line(Point.of(0, 1), Point.of(1, 0))) is None
    with pytest.raises(DegenerateIntersection):
        line_intersection(a, Line(Point.of(3, 0), Point.of(-2, 0)))


def test_ray_misses_behind_origin():
    a = Ray(Point.of(0, 0), Point.of(1, 0))
    b = Ray(Point.of(-1, -1), Point.of(0, 1))
    assert line_intersection(a, b) is None
