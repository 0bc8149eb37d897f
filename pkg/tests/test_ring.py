import math

import pytest
from hypothesis import given, settings, strategies as st

from qcatalyst.ring import (
    DependentGeneratorError,
    Dyadic,
    RingError,
    TowerSpec,
    UnrepresentablePhaseError,
    format_ring,
    make_clifford_t_tower,
    make_cyclotomic_tower,
    make_gaussian_tower,
    parse_ring,
)

TOWER = make_clifford_t_tower()


def test_dyadic_normalisation():
    assert Dyadic(4, 2) == Dyadic(1, 0)
    assert Dyadic(0, 7) == Dyadic(0, 0)
    assert Dyadic(6, 1) == Dyadic(3, 0)
    assert float(Dyadic(3, 3)) == 3 / 8
    assert Dyadic.from_str("3/8") == Dyadic(3, 3)
    assert Dyadic.from_str("-5") == Dyadic(-5, 0)


def test_dyadic_arithmetic():
    a, b = Dyadic(3, 2), Dyadic(1, 1)
    assert a + b == Dyadic(5, 2)
    assert a - b == Dyadic(1, 2)
    assert a * b == Dyadic(3, 3)
    assert (-a).sign() == -1
    assert Dyadic(0).sign() == 0


def test_omega_squares_to_i():
    w = TOWER.root_of_unity(3)
    i = TOWER.imag_unit()
    assert w * w == i
    assert w ** 8 == TOWER.one()
    assert w.conj() * w == TOWER.one()
    assert w.conj() == -(i * w)


def test_sqrt2_identities():
    s = TOWER.sqrt2_over_2()
    assert s * s == TOWER.from_dyadic(Dyadic(1, 1))
    sqrt2 = s + s
    one_norm = sqrt2 + sqrt2 - TOWER.one()
    assert abs(one_norm.embed_float().real - (2 * math.sqrt(2) - 1)) < 1e-12


def test_omega_minus_i_omega_squares_to_two():
    # (w - i*w)^2 = w^2 (1 - i)^2 = i * (-2i) = 2
    w = TOWER.root_of_unity(3)
    i = TOWER.imag_unit()
    x = w - i * w
    assert x * x == TOWER.from_dyadic(2)
    assert abs(x.embed_float() - math.sqrt(2)) < 1e-12


def test_real_imag_parts():
    w = TOWER.root_of_unity(3)
    assert w.real_part() + w.imag_part() * TOWER.imag_unit() == w
    assert w.real_part() == TOWER.sqrt2_over_2()
    assert not w.is_real()
    assert (w * w.conj()).is_real()


def test_parse_format_round_trip():
    text = "1/2 + 3*w - 1/4*i*w"
    x = parse_ring(text, TOWER)
    assert parse_ring(format_ring(x), TOWER) == x
    assert parse_ring("1/2 + 3·w - 1/4·i·w", TOWER) == x
    with pytest.raises(RingError):
        parse_ring("1/2 + q", TOWER)


def test_cyclotomic_tower_depth():
    t4 = make_cyclotomic_tower(4)
    w16 = t4.root_of_unity(4)
    assert w16 * w16 == t4.root_of_unity(3)
    assert w16 ** 16 == t4.one()
    with pytest.raises(UnrepresentablePhaseError):
        TOWER.root_of_unity(4)


def test_gaussian_tower():
    g = make_gaussian_tower()
    i = g.imag_unit()
    assert i * i == -g.one()
    with pytest.raises(UnrepresentablePhaseError):
        g.root_of_unity(3)


def test_dependent_generator_rejected():
    # a second copy of i is linearly dependent over the lower ring
    with pytest.raises(DependentGeneratorError):
        TowerSpec(
            [
                ("i", {0: -1}, {1: -1}, 1j),
                ("j", {0: -1}, {1: -1}, 1j),
            ]
        )


def test_tower_mismatch():
    g = make_gaussian_tower()
    with pytest.raises(RingError):
        g.one() + TOWER.one()


coeff = st.builds(Dyadic, st.integers(-64, 64), st.integers(0, 4))
element = st.builds(
    lambda cs: TOWER.from_coeffs(dict(enumerate(cs))),
    st.lists(coeff, min_size=4, max_size=4),
)


@settings(max_examples=60, deadline=None)
@given(element, element, element)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + TOWER.zero() == a
    assert a * TOWER.one() == a
    assert a - a == TOWER.zero()


@settings(max_examples=60, deadline=None)
@given(element, element)
def test_conjugation_homomorphism(a, b):
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a
    assert (a * a.conj()).is_real()


@settings(max_examples=60, deadline=None)
@given(element, element)
def test_float_embedding_homomorphism(a, b):
    assert abs((a + b).embed_float() - (a.embed_float() + b.embed_float())) < 1e-6
    assert abs((a * b).embed_float() - a.embed_float() * b.embed_float()) < 1e-3
    assert abs(a.conj().embed_float() - a.embed_float().conjugate()) < 1e-6


@settings(max_examples=60, deadline=None)
@given(element)
def test_text_round_trip(a):
    assert parse_ring(format_ring(a), TOWER) == a
