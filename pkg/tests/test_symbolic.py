from fractions import Fraction

import pytest
from mpmath import cos, mpf, pi

from oblab.family import virtual_chain
from oblab.geometry import make_regular_ngon, rotated
from oblab.symbolic import (
    MORSE_RULE,
    PENTAGON_RULE,
    AddressError,
    AlphabetError,
    address_limit,
    address_orbit_steps,
    address_to_point,
    corner_word_counts,
    empirical_complexity,
    format_word,
    is_cyclic_rotation,
    minimal_period,
    parse_word,
    periodic_windings_n5,
    substitution_apply,
    verify_orbit_word,
    word_statistics,
)


def test_images():
    assert substitution_apply(PENTAGON_RULE, [1]) == [1, 2, 1, 2, 1, 1, 1]
    assert substitution_apply(PENTAGON_RULE, [2]) == [1, 1, 1]
    assert len(PENTAGON_RULE.power([1], 2)) == 41


def test_unknown_symbol():
    with pytest.raises(AlphabetError):
        substitution_apply(PENTAGON_RULE, [1, 3])


def test_primitive():
    assert PENTAGON_RULE.is_primitive()
    for a in (1, 2):
        assert set(PENTAGON_RULE.power([a], 2)) == {1, 2}


def test_fixed_point_prefix_property():
    for k in range(7):
        w = PENTAGON_RULE.power([1], k)
        assert PENTAGON_RULE(w)[: len(w)] == w


def test_morse():
    assert MORSE_RULE.power([0], 3) == [0, 1, 1, 0, 1, 0, 0, 1]


@pytest.mark.parametrize("j,period,length", [(1, 5, 1), (2, 35, 7), (3, 205, 41)])
def test_orbit_words(j, period, length):
    r = verify_orbit_word(j)
    assert r.matches and r.period == period and len(r.word) == length


def test_cyclic_helpers():
    assert is_cyclic_rotation([1, 2, 3], [3, 1, 2])
    assert not is_cyclic_rotation([1, 2, 3], [1, 3, 2])
    assert minimal_period([1, 2, 1, 2, 1, 2]) == 2
    assert parse_word("{1,2,1}") == [1, 2, 1]
    assert format_word([3, 2]) == "3,2"


def test_fixed_point_winding():
    u = PENTAGON_RULE.fixed_point_prefix(1, 10**5)
    assert abs(word_statistics(u, 5, 10**5).winding_float() - 0.25) < 0.01


def test_constant_word_winding():
    assert word_statistics([3] * 10, 7).winding == Fraction(3, 7)


def test_prefix_too_long():
    with pytest.raises(ValueError):
        word_statistics([1, 2], 5, 3)


def test_one_letter_words():
    for n in (5, 7, 8):
        assert corner_word_counts(make_regular_ngon(n), 1, samples=500)[0] == n


def test_complexity_monotone():
    c = empirical_complexity(make_regular_ngon(5), 10, samples=2000).counts
    assert all(a <= b for a, b in zip(c, c[1:]))


def test_diamond_quadratic():
    D = rotated(make_regular_ngon(4), pi / 4)
    rep = empirical_complexity(D, 12, samples=4000)
    assert 1.5 < rep.degree_estimate < 2.5


def test_address_depth_zero_is_d1():
    d1 = virtual_chain(5, 1)[3]
    p, r = address_to_point(5, [2, 5], 0)
    assert abs(p.x - d1.center.x) < mpf(10) ** -25 and abs(p.y - d1.center.y) < mpf(10) ** -25
    assert abs(r - d1.radius) < mpf(10) ** -25


def test_pentagon_limit_on_forward_edge():
    q = address_limit(5, [2, 5])
    assert abs(q.y + cos(pi / 5)) < mpf(10) ** -25
    p, r = address_to_point(5, [2, 5], 12)
    assert abs(p.x - q.x) < 3 * r and abs(p.y - q.y) < 3 * r


def test_bad_bud():
    with pytest.raises(AddressError):
        address_to_point(5, [11], 0)
    with pytest.raises(AddressError):
        address_to_point(8, [1], 0)


def test_14gon_limit_steps():
    assert address_orbit_steps(14, [6, 3], 8, 20) == [3, 3, 3, 2, 1, 1, 1, 1, 2, 3, 3, 3, 2, 1, 1, 2, 3, 3, 3, 2]


def test_no_periodic_quarter_winding():
    ws = periodic_windings_n5(3)
    assert ws and all(w != Fraction(1, 4) for w in ws.values())
