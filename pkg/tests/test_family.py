import math

import pytest
from mpmath import mpf

from oblab.family import (
    ConsistencyError,
    algebraic_complexity,
    closed_form_residuals,
    d_spacing,
    expected_star_count,
    family_tile,
    first_family,
    is_prime,
    scale_equivalences,
    scale_table,
    star_points,
    virtual_chain,
    woven_ratio,
)
from oblab.geometry import make_regular_ngon
from oblab.tangent import iterate_orbit
from oblab.web import WebConfig, generate_web, points_inside


def approx(a, b, tol=1e-7):
    return abs(float(a) - b) < tol


@pytest.mark.parametrize("n,count", [(11, 5), (16, 7), (7, 3), (8, 3)])
def test_star_point_counts(n, count):
    assert len(star_points(n)) == count == expected_star_count(n)


def test_star_counts_all_odd():
    for n in range(5, 32, 2):
        assert len(scale_table(n).stars) == n // 2


def test_heptagon_table():
    t = scale_table(7)
    assert t.scale(1) == 1 or approx(t.scale(1), 1.0, 1e-25)
    assert approx(t.scale(2), 0.3840429)
    # printed value is truncated in the last place
    assert abs(float(t.gen_scale) - 0.1099162) < 1.5e-7
    assert approx(t.gen_star.x, -3.94741, 1e-5)
    assert approx(d_spacing(7), 8.76257, 1e-5)


def test_pentagon_gen_scale():
    assert approx(scale_table(5).gen_scale, 0.2360680)


def test_scales_decrease():
    for n in (7, 11, 12, 16, 22):
        s = scale_table(n).scales
        assert all(0 < b < a for a, b in zip(s, s[1:]))


def test_closed_form_agreement():
    for n in range(5, 32, 2):
        g, x = closed_form_residuals(n)
        assert g < mpf(10) ** -25 and x < mpf(10) ** -25


@pytest.mark.parametrize("n,size", [(11, 13), (22, 19), (7, 7), (9, 10), (16, 13)])
def test_family_sizes(n, size):
    assert len(first_family(n)) == size


def test_hendecagon_family_tiles():
    fam = first_family(11)
    kinds = [t.name for t in fam]
    assert kinds[:2] == ["M", "D"]
    assert all(t.sides <= 22 for t in fam)
    assert sum(1 for t in fam if t.kind == "S") == 4


def test_22gon_symmetric_about_s9():
    fam = first_family(22)
    s9 = family_tile(22, "S[9]")
    for k in range(1, 9):
        s, ls = family_tile(22, f"S[{k}]"), family_tile(22, f"LS[{k}]")
        assert abs(s.radius - ls.radius) < mpf(10) ** -25
        assert abs((s.center.x + ls.center.x) / 2 - s9.center.x) < mpf(10) ** -25
    assert len(fam) == 19


def test_nonagon_mutation_and_woven_ratio():
    s3 = family_tile(9, "S[3]")
    assert s3.mutation
    assert not family_tile(9, "S[2]").mutation
    assert approx(woven_ratio(9, 3), 0.95418889, 1e-8)
    assert not any(t.mutation for t in first_family(11))


def test_virtual_chain_anchors():
    chain = virtual_chain(7, 2)
    m0, d0 = chain[0], chain[1]
    assert abs(m0.center.x) < mpf(10) ** -25 and abs(m0.center.y) < mpf(10) ** -25
    assert approx(d0.center.x, 4.38129, 1e-5) and approx(d0.center.y, 1.0, 1e-25)
    # D_Right mirrors the family D
    d = family_tile(7, "D")
    assert abs(d0.center.x + d.center.x) < mpf(10) ** -25
    assert [t.name for t in chain] == ["M[0]", "D[0]", "M[1]", "D[1]", "M[2]", "D[2]"]


def test_m1_is_ds1_for_13():
    m1 = virtual_chain(13, 1)[2]
    assert abs(m1.radius - scale_table(13).gen_scale) < mpf(10) ** -25
    assert abs(family_tile(13, "DS[1]").radius - m1.radius) < mpf(10) ** -25


def test_virtual_chain_rejects_even():
    with pytest.raises(ValueError):
        virtual_chain(8, 1)


@pytest.mark.parametrize("n,deg", [(11, 5), (16, 4), (3, 1), (7, 3), (14, 3)])
def test_algebraic_complexity(n, deg):
    assert algebraic_complexity(n) == deg


def test_equivalences():
    assert scale_equivalences(14).max_residual < mpf(10) ** -25
    assert approx(scale_table(14).scale(5), 0.1099162, 1.5e-7)
    assert scale_equivalences(16).max_residual < mpf(10) ** -25
    t26 = scale_table(26)
    assert abs(t26.gen_scale / t26.scale(4) - t26.scale(9)) < mpf(10) ** -25
    with pytest.raises(ValueError):
        scale_equivalences(7)


@pytest.mark.parametrize("n", [5, 7, 8, 9, 11, 12, 13, 16, 22])
def test_family_non_overlapping(n):
    fam = first_family(n)
    for i, a in enumerate(fam):
        for b in fam[i + 1 :]:
            d = math.dist(a.center.as_float(), b.center.as_float())
            assert d >= float(a.apothem() + b.apothem()) - 1e-9, (a.name, b.name)


@pytest.mark.parametrize("n", [5, 7, 11, 13])
def test_s_tiles_have_period_n(n):
    P = make_regular_ngon(n)
    for t in first_family(n):
        if t.kind == "S":
            assert iterate_orbit(P, t.center, 10 * n).period == n
            assert t.expected_period == n


def test_family_tiles_untouched_by_web():
    n = 7
    w = generate_web(make_regular_ngon(n), WebConfig(levels=2 * n, samples_per_unit_length=100), "forward")
    for t in first_family(n)[1:]:
        assert points_inside(w.points, t.polygon()) == 0, t.name


def test_twice_odd_congruence():
    """M, D and S tiles of the heptagon reappear in the 14-gon family, scaled
    so that the heptagon M becomes the 14-gon's S[5]."""
    ratio = family_tile(14, "S[5]").radius
    big = [(t.sides, t.radius) for t in first_family(14)]
    for t in first_family(7):
        if t.kind == "DS":
            continue
        assert any(sd == t.sides and abs(r - t.radius * ratio) < mpf(10) ** -25 for sd, r in big), t.name


def test_is_prime():
    assert [k for k in range(2, 30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
