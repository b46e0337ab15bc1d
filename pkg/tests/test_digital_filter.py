import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from oblab.digital_filter import (
    Degenerate,
    DfParams,
    OutOfDomain,
    OutOfRange,
    atom_classify,
    bridge_similarity,
    central_polygon,
    df_map,
    df_period,
    df_period_census,
    df_web,
    goetz_map,
    goetz_pi5,
    pi5_fixed_point,
    pi5_scaling,
    pi7_nu_identity_residual,
    pi7_scaling,
    pi7_temporal_factors,
    rectified_translations,
    rectify,
    rho_to_polygon,
    rhombi_accounting,
    separatrices,
    tangent_to_df,
    df_to_tangent,
    unrectify,
    web_conjugacy,
)

P14 = DfParams(Fraction(1, 14))


def test_params():
    assert math.isclose(P14.a, 2 * math.cos(2 * math.pi / 14))
    assert P14.is_rational
    with pytest.raises(OutOfRange):
        DfParams(Fraction(1, 3))
    with pytest.raises(OutOfRange):
        DfParams(0)


def test_origin_fixed():
    assert df_map((0.0, 0.0), P14) == (0.0, 0.0)
    assert atom_classify((0.0, 0.0), P14) == 0
    assert rectify((0.0, 0.0), P14) == (0.0, 0.0)


def test_atom_a_wraps_down_by_two():
    x, y = -0.99, 0.5
    assert atom_classify((x, y), P14) == 1
    nx, ny = df_map((x, y), P14)
    assert nx == y and math.isclose(ny, -x + P14.a * y - 2)
    assert atom_classify((0.99, -0.5), P14) == -1


def test_central_region_period():
    assert df_period((0.1, 0.05), P14) == 14


def test_rectified_linear_part_is_rotation():
    rng = np.random.default_rng(0)
    pts = rng.uniform(-0.3, 0.3, size=(100, 2))
    lin = np.column_stack([pts[:, 1], -pts[:, 0] + P14.a * pts[:, 1]])
    got = rectify(lin, P14)
    z = rectify(pts, P14)
    w = (z[:, 0] + 1j * z[:, 1]) * cmath.exp(-1j * P14.theta)
    assert np.abs(got[:, 0] + 1j * got[:, 1] - w).max() < 1e-13
    assert np.abs(unrectify(z, P14) - pts).max() < 1e-14


def test_degenerate_rectify():
    # theta = 0 is refused by DfParams, so build one by hand
    bad = DfParams.__new__(DfParams)
    object.__setattr__(bad, "rho", Fraction(0))
    with pytest.raises(Degenerate):
        rectify((0.1, 0.1), bad)


def test_translation_lengths():
    t = rectified_translations(P14)
    L = 2 / math.sin(P14.theta)
    assert math.isclose(math.hypot(*t[1]), L) and math.isclose(math.hypot(*t[-1]), L)
    assert t[0] == (0.0, 0.0) or math.hypot(*t[0]) == 0


def test_bijective_on_square():
    rng = np.random.default_rng(1)
    pts = rng.uniform(-1, 1, size=(10**5, 2))
    img = df_map(pts, P14)
    assert (img >= -1).all() and (img < 1).all()
    # inverse: x = wrap(a x' - y'), y = x'
    back_x = ((P14.a * img[:, 0] - img[:, 1] + 1) % 2) - 1
    err = np.abs(back_x - pts[:, 0])
    err = np.minimum(err, 2 - err)
    assert err.max() < 1e-12
    assert np.array_equal(img[:, 0], pts[:, 1])


@pytest.mark.parametrize("rho,want", [("1/14", (14, 1)), ("1/7", (14, 2)), ("3/16", (16, 3)), ("1/4", (4, 1))])
def test_rho_to_polygon(rho, want):
    assert rho_to_polygon(Fraction(rho)) == want


def test_rho_out_of_range():
    with pytest.raises(OutOfRange):
        rho_to_polygon(Fraction(3, 10))


def test_level0_is_separatrices():
    w = df_web(P14, 0, samples=100)
    assert np.array_equal(w.points, separatrices(P14, 100))
    z = -w.points[:, 0] + P14.a * w.points[:, 1]
    assert np.allclose(np.abs(z), 1)


def test_central_tile_is_regular_14gon():
    w = df_web(P14, 100, samples=300)
    r = np.hypot(*w.rectified.T)
    assert r.min() > 1 - 1e-9
    poly = central_polygon(P14)
    assert len(poly) == 14
    assert np.allclose(np.hypot(*poly.T), 1 / math.cos(math.pi / 14))
    # every side of the 14-gon is traced by the web
    mids = (poly + np.roll(poly, -1, axis=0)) / 2
    for m in mids:
        assert np.hypot(*(w.rectified - m).T).min() < 0.02


def test_bridge_is_pure_scaling():
    for n, scale in ((14, 1 / math.cos(math.pi / 14)), (16, 1.01959116)):
        s = bridge_similarity(n)
        assert math.isclose(s.scale, scale, rel_tol=1e-8)
        assert abs(s.rotation) < 1e-12 and abs(s.translation) < 1e-12 and s.residual < 1e-12


def test_bridge_round_trip():
    p = (1.7, -2.3)
    q = df_to_tangent(tangent_to_df(p, 14), 14)
    assert math.dist(p, q) < 1e-12


def test_web_conjugacy_small():
    d = web_conjugacy(14, [0, 1, 5], samples=200)
    assert max(d) < 3 / 200


def test_census_11():
    c = df_period_census(11)
    assert [r.df_period for r in c.rows if r.name.startswith("S[")] == list(range(10, 1, -1))


def test_census_16():
    c = df_period_census(8)
    assert [c.row(f"S[{k}]").df_period for k in range(1, 7)] == [7, 6, 5, 4, 3, 2]
    assert [c.row(f"S[{k}]").tangent_period for k in range(1, 7)] == [16, 8, 16, 4, 16, 8]
    assert [c.row(f"LS[{k}]").tangent_period for k in range(1, 7)] == [96, 40, 64, 12, 32, 8]
    assert c.predicted(4) == 64 == c.row("S[4]").tangent_tiles + c.row("LS[4]").tangent_tiles
    assert c.predicted(6) == 2 * c.n == c.counted(6)
    assert all(c.predicted(k) == c.counted(k) for k in range(1, 7))


@pytest.mark.parametrize("n", [8, 14, 16])
def test_rhombi_fill_the_star(n):
    r = rhombi_accounting(n)
    assert r.count == n // 2
    assert math.isclose(r.rhombus_area, 4 / math.sin(2 * math.pi / n))
    assert abs(r.accounted_area - r.star_area) < 1e-6 * r.star_area
    assert r.shape_mismatch < 1e-9


def test_rhombi_needs_even():
    with pytest.raises(ValueError):
        rhombi_accounting(7)


def test_goetz_pi5_fixed_point():
    z = pi5_fixed_point()
    assert goetz_pi5().index(z) == 0
    assert abs(goetz_map("pi5", z) - z) < 1e-12
    assert abs(abs(goetz_pi5().atoms[0].coefficient) - 1) < 1e-15


def test_goetz_domain():
    with pytest.raises(OutOfDomain):
        goetz_map("pi5", 5 + 5j)
    with pytest.raises(ValueError):
        goetz_map("pi9", 0)


def test_goetz_orbits_stay_in_domain():
    for variant in ("pi5", "pi7"):
        z = complex(-0.3, 0.05)
        for _ in range(2000):
            z = goetz_map(variant, z)


def test_goetz_scalings():
    s = pi5_scaling()
    assert abs(float(s.geometric) - 2 / (1 + math.sqrt(5))) < 1e-15
    assert abs(float(s.dimension) - 1.4404) < 1e-4
    assert abs(float(pi7_scaling().geometric) - 4 * math.sin(math.pi / 14) ** 2) < 1e-15
    assert pi7_nu_identity_residual() < 1e-25


def test_pi7_temporal_ratio():
    a, b = pi7_temporal_factors(10)
    a1, b1 = pi7_temporal_factors(11)
    assert abs(a1 / a - 4) < 1e-5 and abs(b1 / b - 4) < 1e-5
    assert pi7_temporal_factors(0) == (1, 1)
