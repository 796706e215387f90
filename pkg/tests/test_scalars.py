import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaselab.scalars import (
    BoolScalar,
    CycloScalar,
    RingError,
    cyclo_div,
    rational_from_json,
    rational_to_json,
    squared_modulus,
)


def cyclo(coeffs, k=0):
    return CycloScalar(coeffs, k)


cyclo_strategy = st.builds(
    cyclo,
    st.tuples(*(st.integers(-9, 9) for _ in range(4))),
    st.integers(0, 4),
)


def approx_equal(z1, z2, tol=1e-9):
    return abs(z1 - z2) < tol


# -- canonical form ---------------------------------------------------------


def test_sqrt2_squared_is_two():
    s = CycloScalar.sqrt2()
    assert s * s == CycloScalar.from_int(2)


def test_inv_sqrt2_product_is_half_with_k_two():
    h = CycloScalar.inv_sqrt2()
    p = h * h
    assert p.coeffs == (1, 0, 0, 0) and p.k == 2
    assert p.rational_value() == Fraction(1, 2)


def test_omega_minus_omega_cubed_over_sqrt2_reduces_to_one():
    s = CycloScalar((0, 1, 0, -1), 1)
    assert s == CycloScalar.one()


def test_zero_normalises_denominator():
    assert CycloScalar((0, 0, 0, 0), 5) == CycloScalar.zero()


@given(cyclo_strategy, st.integers(0, 5))
def test_canonical_form_unique(a, extra):
    # Re-inflate the representation by extra sqrt(2) factors and reduce back.
    c = a.coeffs
    for _ in range(extra):
        from phaselab.scalars import _sqrt2_times

        c = _sqrt2_times(c)
    assert CycloScalar(c, a.k + extra) == a


@given(cyclo_strategy, cyclo_strategy)
def test_arithmetic_matches_complex_oracle(a, b):
    assert approx_equal((a + b).to_complex(), a.to_complex() + b.to_complex())
    assert approx_equal((a * b).to_complex(), a.to_complex() * b.to_complex())
    assert approx_equal((-a).to_complex(), -a.to_complex())
    assert approx_equal(a.dagger().to_complex(), a.to_complex().conjugate())


# -- dagger -----------------------------------------------------------------


def test_dagger_of_omega():
    w = CycloScalar.omega()
    assert w.dagger() == CycloScalar((0, 0, 0, -1))
    assert w.dagger() == CycloScalar.omega(7)


@given(cyclo_strategy)
def test_dagger_is_involution(a):
    assert a.dagger().dagger() == a


@given(cyclo_strategy, cyclo_strategy)
def test_dagger_is_homomorphism(a, b):
    assert (a + b).dagger() == a.dagger() + b.dagger()
    assert (a * b).dagger() == a.dagger() * b.dagger()


# -- squared modulus ---------------------------------------------------------


def test_squared_modulus_examples():
    assert squared_modulus(CycloScalar.inv_sqrt2()) == Fraction(1, 2)
    assert squared_modulus(CycloScalar.omega()) == 1
    one_plus_i_over_sqrt2 = CycloScalar((1, 0, 1, 0), 1)
    assert squared_modulus(one_plus_i_over_sqrt2) == 1


def test_squared_modulus_rejects_irrational():
    with pytest.raises(RingError):
        squared_modulus(CycloScalar((1, 1, 0, 0)))


def random_amplitude(rng):
    """A random scalar from the rational-squared-modulus set (the amplitudes).

    Products of integers, phases, sqrt(2) powers and (1 +/- i) all have
    rational squared modulus; the set is closed under multiplication.
    """
    atoms = [
        CycloScalar.from_int(rng.randint(-3, 3)),
        CycloScalar.omega(rng.randrange(8)),
        CycloScalar.sqrt2(),
        CycloScalar.inv_sqrt2(),
        CycloScalar((1, 0, 1, 0)),
        CycloScalar((1, 0, -1, 0)),
    ]
    value = CycloScalar.one()
    for _ in range(rng.randint(1, 3)):
        value = value * rng.choice(atoms)
    return value


def test_squared_modulus_multiplicative_thousand_cases():
    rng = random.Random(1729)
    for _ in range(1000):
        a = random_amplitude(rng)
        b = random_amplitude(rng)
        assert squared_modulus(a * b) == squared_modulus(a) * squared_modulus(b)


# -- positivity and field division -------------------------------------------


def test_positive_real_detection():
    assert CycloScalar.from_int(3).is_positive_real()
    assert CycloScalar.sqrt2().is_positive_real()
    assert not CycloScalar.from_int(-2).is_positive_real()
    # 1 - sqrt(2) < 0 even though the leading coefficient is positive.
    assert not CycloScalar((1, -1, 0, 1)).is_positive_real()
    # 3 - sqrt(2) > 0.
    assert CycloScalar((3, -1, 0, 1)).is_positive_real()
    assert not CycloScalar.omega().is_positive_real()


@given(cyclo_strategy, cyclo_strategy)
def test_cyclo_div_inverts_multiplication(a, b):
    if b.is_zero():
        return
    q = cyclo_div(a * b, b)
    assert q == a


def test_cyclo_div_rejects_values_outside_ring():
    # 1 / 3 is not in the ring.
    assert cyclo_div(CycloScalar.one(), CycloScalar.from_int(3)) is None


# -- booleans ----------------------------------------------------------------


def test_boolean_semiring_laws():
    one, zero = BoolScalar.one(), BoolScalar.zero()
    assert one + one == one
    assert zero * one == zero
    assert zero + one == one
    assert one.dagger() == one
    assert (-one) == one


def test_boolean_idempotents_are_exactly_zero_and_one():
    idempotents = [s for s in (BoolScalar.zero(), BoolScalar.one()) if s * s == s]
    assert len(idempotents) == 2


def test_rational_idempotents_are_exactly_zero_and_one():
    candidates = [Fraction(n, d) for n in range(-4, 5) for d in range(1, 5)]
    idem = sorted(set(q for q in candidates if q * q == q))
    assert idem == [0, 1]


# -- json ---------------------------------------------------------------------


def test_json_round_trips():
    a = CycloScalar((1, -2, 0, 3), 3)
    assert CycloScalar.from_json(a.to_json()) == a
    assert BoolScalar.from_json(BoolScalar.one().to_json()) == BoolScalar.one()
    q = Fraction(-3, 7)
    assert rational_from_json(rational_to_json(q)) == q
