#!/usr/bin/env python3
"""
Unit tests for finite_field.py.

Field axioms are checked exhaustively on small fields.
"""
import sys
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import pytest
from finite_field import (
    conj_q,
    ff_arith,
    ff_make,
    field_of_order,
    is_irreducible,
    is_prime_power,
    prime_power,
    smallest_irreducible,
    trace_zero_elements,
)


SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


# --- ff_make ---

class TestFieldConstruction:
    def test_prime_field_size(self):
        F = ff_make(3, 1)
        assert F.order == 3
        assert len(F.elements()) == 3

    def test_gf4_nonzero_cube_is_one(self):
        F = ff_make(2, 2)
        assert F.order == 4
        for x in F.nonzero_elements():
            assert x ** 3 == F.one

    def test_non_prime_characteristic_rejected(self):
        with pytest.raises(ValueError, match="prime"):
            ff_make(4, 1)

    def test_zero_degree_rejected(self):
        with pytest.raises(ValueError):
            ff_make(3, 0)

    def test_gf4_modulus_is_x2_x_1(self):
        assert ff_make(2, 2).modulus == (1, 1, 1)

    def test_modulus_choice_is_deterministic(self):
        assert smallest_irreducible(3, 2) == ff_make(3, 2).modulus
        assert ff_make(3, 2) is ff_make(3, 2)

    def test_modulus_is_irreducible(self):
        for p, f in SMALL_FIELDS:
            assert is_irreducible(ff_make(p, f).modulus, p)

    def test_reducible_polynomial_detected(self):
        # x^2 + 1 = (x + 1)^2 over GF(2)
        assert not is_irreducible((1, 0, 1), 2)

    def test_primitive_element_generates(self):
        for p, f in SMALL_FIELDS:
            F = ff_make(p, f)
            g = F.primitive_element
            powers = {g ** k for k in range(F.order - 1)}
            assert len(powers) == F.order - 1

    def test_element_from_coefficients(self):
        F = ff_make(3, 2)
        x = F.element([0, 1])
        assert x.coeffs == (0, 1)
        with pytest.raises(ValueError):
            F.element([3, 0])

    def test_field_of_order(self):
        assert field_of_order(9).order == 9
        with pytest.raises(ValueError):
            field_of_order(6)


# --- prime powers ---

class TestPrimePower:
    def test_split(self):
        assert prime_power(2) == (2, 1)
        assert prime_power(9) == (3, 2)
        assert prime_power(64) == (2, 6)
        assert prime_power(625) == (5, 4)

    def test_rejects_composites(self):
        for q in (1, 6, 12, 100):
            assert not is_prime_power(q)
            with pytest.raises(ValueError):
                prime_power(q)


# --- ff_arith ---

class TestArithmetic:
    def test_gf3_product(self):
        F = ff_make(3, 1)
        assert ff_arith(F.element(2), F.element(2), 'mul') == F.one

    def test_gf4_x_squared(self):
        F = ff_make(2, 2)
        x = F.element([0, 1])
        assert ff_arith(x, x, 'mul') == F.element([1, 1])

    def test_division_by_zero(self):
        F = ff_make(5, 1)
        with pytest.raises(ZeroDivisionError):
            ff_arith(F.element(3), F.zero, 'div')

    def test_mismatched_fields(self):
        with pytest.raises(ValueError, match="Mismatched"):
            ff_arith(ff_make(3, 1).one, ff_make(5, 1).one, 'add')

    def test_unknown_operation(self):
        F = ff_make(3, 1)
        with pytest.raises(ValueError):
            ff_arith(F.one, F.one, 'pow')

    def test_division_inverts_multiplication(self):
        F = ff_make(3, 2)
        for a in F.elements():
            for b in F.nonzero_elements():
                assert ff_arith(ff_arith(a, b, 'div'), b, 'mul') == a

    @pytest.mark.parametrize("p,f", [(2, 2), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2)])
    def test_field_axioms_exhaustive(self, p, f):
        F = ff_make(p, f)
        elems = F.elements()
        for a, b, c in product(elems, repeat=3):
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
        for a in elems:
            assert a - a == F.zero
            assert a * F.one == a

    @pytest.mark.parametrize("p,f", SMALL_FIELDS)
    def test_fermat(self, p, f):
        F = ff_make(p, f)
        for x in F.nonzero_elements():
            assert x ** (F.order - 1) == F.one

    def test_integer_coercion(self):
        F = ff_make(5, 1)
        assert F.element(3) + 4 == F.element(2)
        assert 2 * F.element(3) == F.one


# --- conj_q ---

class TestConjugation:
    def test_zero_fixed(self):
        F = ff_make(2, 2)
        assert conj_q(F.zero, 2) == F.zero

    def test_gf4_omega(self):
        F = ff_make(2, 2)
        omega = F.element([0, 1])
        assert conj_q(omega, 2) == omega * omega
        assert conj_q(omega, 2) == omega + F.one

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_involution_and_fixed_subfield(self, q):
        F = field_of_order(q * q)
        fixed = [x for x in F.elements() if conj_q(x, q) == x]
        assert len(fixed) == q
        assert fixed == F.subfield_elements(q)
        for a in F.elements():
            assert conj_q(conj_q(a, q), q) == a

    def test_multiplicative(self):
        F = ff_make(3, 2)
        for a, b in product(F.elements(), repeat=2):
            assert conj_q(a * b, 3) == conj_q(a, 3) * conj_q(b, 3)

    def test_wrong_field_rejected(self):
        with pytest.raises(ValueError):
            conj_q(ff_make(2, 3).one, 2)

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_trace_zero_set_has_q_elements(self, q):
        assert len(trace_zero_elements(field_of_order(q * q), q)) == q

    def test_trace_zero_in_gf4(self):
        F = ff_make(2, 2)
        assert trace_zero_elements(F, 2) == [F.zero, F.one]
