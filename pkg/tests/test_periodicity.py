from fractions import Fraction

import pytest

from oblab.family import family_tile, scale_table, virtual_chain
from oblab.periodicity import (
    UnsupportedComposite,
    decomposition_check,
    dimension_estimate,
    generation_table,
    pentagon_chain_periods,
    pentagon_d,
    pentagon_d_recurrence,
    pentagon_p,
    pentagon_periods,
    prime_family_period,
    propensity,
    ring_structure,
)


@pytest.mark.parametrize(
    "n,kind,k,want",
    [(7, "M[1]", None, 28), (7, "D[1]", None, 21), (13, "M[1]", None, 130), (13, "D[1]", None, 117), (11, "S", 3, 11)],
)
def test_prime_family_period(n, kind, k, want):
    assert prime_family_period(n, kind, k) == want


def test_prime_only():
    with pytest.raises(UnsupportedComposite):
        prime_family_period(9, "S", 1)


def test_d_step_formula():
    assert prime_family_period(11, "DS", 2) == 11 * (11 - 4)
    assert prime_family_period(11, "D") == 11


def test_pentagon_lists():
    assert [pentagon_d(n) for n in range(1, 5)] == [5, 35, 205, 1235]
    assert [pentagon_p(n) for n in range(1, 5)] == [10, 50, 310, 1850]
    assert pentagon_d(10) == 57586835
    assert pentagon_periods(3) == (205, 310)


def test_pentagon_recurrence_matches_closed_form():
    for n in range(1, 21):
        assert pentagon_d(n) == pentagon_d_recurrence(n)


def test_pentagon_simulation():
    assert pentagon_chain_periods(3) == [pentagon_d(j) for j in range(1, 4)]
    assert pentagon_chain_periods(4, backend="float") == [5, 35, 205, 1235]


def test_generation_ratios():
    tab = generation_table(13, 2, backend="float")
    assert tab.periods("M") == [130, 2366]
    assert tab.periods("D") == [117, 1547]
    m2 = [r for r in tab.rows if r.kind == "M" and r.generation == 2][0]
    assert abs(m2.ratio - 18.2) < 1e-12


def test_heptagon_generation():
    tab = generation_table(7, 3, backend="float")
    assert tab.periods("M") == [28, 98, 2212]
    assert tab.periods("D")[:2] == [21, 336]


def test_pentagon_ratios_approach_six():
    d = [pentagon_d(n) for n in range(1, 15)]
    assert abs(d[-1] / d[-2] - 6) < 1e-6


@pytest.mark.parametrize("k,count,periods,w", [(0, 7, [7], Fraction(3, 7)), (1, 21, [21], Fraction(10, 21)), (2, 35, [35], Fraction(17, 35))])
def test_heptagon_rings(k, count, periods, w):
    r = ring_structure(7, k, simulate=True)
    assert r.count == count and r.periods == periods and r.winding == w


def test_14gon_rings():
    assert ring_structure(14, 0, simulate=True).periods == [7, 7]
    assert ring_structure(14, 1, simulate=True).periods == [28]
    r2 = ring_structure(14, 2, simulate=True)
    assert r2.periods == [21, 21]
    assert sorted(r2.step_sequence) == [6, 7, 7]


def test_16gon_rings():
    assert [ring_structure(16, k, simulate=True).periods for k in range(3)] == [[16], [32], [48]]


def test_ring_counts_sum():
    for n in (7, 9, 14, 16):
        for k in range(4):
            r = ring_structure(n, k)
            assert sum(r.periods) == r.count == (n * (2 * k + 1) if n % 2 else n * (k + 1))


def test_ring_winding_monotone():
    ws = [ring_structure(7, k).winding for k in range(30)]
    assert all(a < b for a, b in zip(ws, ws[1:]))
    assert all(w < Fraction(1, 2) for w in ws)
    assert abs(float(ws[-1]) - 0.5) < 0.01


def test_decomposition():
    r = decomposition_check(9, 3, simulate=True)
    assert r.decomposes and r.factor_count == 3 and r.periods == [3, 3, 3]
    ds = decomposition_check(9, 3, tile="DS", simulate=True)
    assert ds.periods == [12, 12, 12] and sum(ds.periods) == 36
    for k in range(1, 4):
        assert not decomposition_check(7, k).decomposes


def test_nonagon_factor_steps_agree():
    from oblab.geometry import make_regular_ngon
    from oblab.tangent import iterate_orbit

    s3 = family_tile(9, "S[3]")
    rec = iterate_orbit(make_regular_ngon(9), s3.center, 100)
    assert set(rec.step_sequence) == {3}


def test_propensity_nonagon_s3():
    r = propensity(9, family_tile(9, "S[3]"))
    assert r.center_period == 3 and r.probe_period == 6 and r.consistent


def test_even_d_fail_to_double():
    chain = [t for t in virtual_chain(7, 3) if t.kind == "D[j]" and t.index >= 1]
    doubled = [propensity(7, t, backend="float").probe_period == 2 * propensity(7, t, backend="float").center_period for t in chain]
    assert doubled == [True, False, True]


@pytest.mark.parametrize(
    "ratio,scale,printed",
    [
        (6, scale_table(5).gen_scale, 1.24114),
        (9, scale_table(8).gen_scale, 1.24648),
        (27, scale_table(12).gen_scale, 1.2513),
        (200, scale_table(7).gen_scale ** 2, 1.19978),
    ],
)
def test_dimension_estimate(ratio, scale, printed):
    assert abs(float(dimension_estimate(ratio, scale)) - printed) < 1e-5


def test_dimension_estimate_domain():
    with pytest.raises(ValueError):
        dimension_estimate(1, 0.5)
    with pytest.raises(ValueError):
        dimension_estimate(6, 1.5)
