#!/usr/bin/env python3
"""
Exact arithmetic in GF(p^f).

Elements are dense coefficient vectors over GF(p) (lowest degree first).
Each field precomputes addition and exp/log tables once, so element
arithmetic is table lookup. The modulus is the smallest monic irreducible
polynomial of degree f, ordered lexicographically by its coefficients from
the top down, which keeps element indices reproducible across runs.

Usage:
    python finite_field.py <p> <f>

Output (JSON):
    {
        "order": 4,
        "modulus": [1, 1, 1],
        "primitive_element": [0, 1],
        "elements": [[0, 0], [1, 0], [0, 1], [1, 1]]
    }
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Tuple, Union

from sympy import isprime, perfect_power

from gq_constants import MAX_FIELD_ORDER


Coeffs = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Polynomial helpers over GF(p) (coefficient tuples, lowest degree first)
# ---------------------------------------------------------------------------

def _trim(poly: List[int]) -> List[int]:
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_rem(a: List[int], b: Coeffs, p: int) -> List[int]:
    """Remainder of a modulo the monic polynomial b."""
    rem = _trim(list(a))
    db = len(b) - 1
    while len(rem) - 1 >= db and any(rem):
        c = rem[-1]
        shift = len(rem) - 1 - db
        for j, bj in enumerate(b):
            rem[shift + j] = (rem[shift + j] - c * bj) % p
        rem.pop()
        _trim(rem)
    return rem


def _poly_mulmod(a: Coeffs, b: Coeffs, modulus: Coeffs, p: int) -> Coeffs:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    f = len(modulus) - 1
    rem = _poly_rem(prod, modulus, p)
    return tuple(rem + [0] * (f - len(rem)))


def _monic_polys(p: int, degree: int) -> Iterator[Coeffs]:
    """Monic polynomials of a given degree, lexicographic from the top coefficient down."""
    for tail in product(range(p), repeat=degree):
        yield tuple(reversed(tail)) + (1,)


def is_irreducible(poly: Coeffs, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    degree = len(poly) - 1
    if degree <= 1:
        return degree == 1
    for d in range(1, degree // 2 + 1):
        for divisor in _monic_polys(p, d):
            if not any(_poly_rem(list(poly), divisor, p)):
                return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, f: int) -> Coeffs:
    for poly in _monic_polys(p, f):
        if is_irreducible(poly, p):
            return poly
    raise ValueError(f"No irreducible polynomial of degree {f} over GF({p})")


# ---------------------------------------------------------------------------
# Field and element types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteField:
    """GF(p^f) with a fixed monic irreducible modulus."""
    p: int
    f: int
    modulus: Coeffs
    _elements: List["FieldElement"] = field(default_factory=list, init=False, repr=False, compare=False)
    _index: Dict[Coeffs, int] = field(default_factory=dict, init=False, repr=False, compare=False)
    _add: List[List[int]] = field(default_factory=list, init=False, repr=False, compare=False)
    _neg: List[int] = field(default_factory=list, init=False, repr=False, compare=False)
    _exp: List[int] = field(default_factory=list, init=False, repr=False, compare=False)
    _log: List[int] = field(default_factory=list, init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.order
        coeff_list = [self._digits(i) for i in range(n)]
        for i, coeffs in enumerate(coeff_list):
            self._index[coeffs] = i
            self._elements.append(FieldElement(self, coeffs, i))

        p = self.p
        for i in range(n):
            a = coeff_list[i]
            row = []
            for j in range(n):
                b = coeff_list[j]
                row.append(self._index[tuple((x + y) % p for x, y in zip(a, b))])
            self._add.append(row)
            self._neg.append(self._index[tuple((-x) % p for x in a)])

        # exp/log tables from the first primitive element
        for g in range(2 if n > 2 else 1, n):
            powers = [1]
            current = coeff_list[g]
            while self._index[current] != 1:
                powers.append(self._index[current])
                current = _poly_mulmod(current, coeff_list[g], self.modulus, p)
            if len(powers) == n - 1:
                self._exp.extend(powers)
                self._log.extend([0] * n)
                for k, idx in enumerate(powers):
                    self._log[idx] = k
                break

    def _digits(self, index: int) -> Coeffs:
        digits = []
        for _ in range(self.f):
            digits.append(index % self.p)
            index //= self.p
        return tuple(digits)

    @property
    def order(self) -> int:
        return self.p ** self.f

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> "FieldElement":
        return self._elements[0]

    @property
    def one(self) -> "FieldElement":
        return self._elements[1]

    @property
    def primitive_element(self) -> "FieldElement":
        return self._elements[self._exp[1] if self.order > 2 else 1]

    def elements(self) -> List["FieldElement"]:
        """All elements in index order (0, 1, then lexicographic on coefficients)."""
        return list(self._elements)

    def nonzero_elements(self) -> List["FieldElement"]:
        return self._elements[1:]

    def element(self, value: Union[int, Coeffs, List[int]]) -> "FieldElement":
        """Element from an integer of the prime subfield or from a coefficient vector."""
        if isinstance(value, int):
            return self._elements[value % self.p]
        coeffs = tuple(int(c) for c in value)
        if len(coeffs) != self.f or any(c < 0 or c >= self.p for c in coeffs):
            raise ValueError(f"Coefficient vector {list(coeffs)} is not reduced for GF({self.order})")
        return self._elements[self._index[coeffs]]

    def from_index(self, index: int) -> "FieldElement":
        return self._elements[index]

    def subfield_elements(self, q: int) -> List["FieldElement"]:
        """Elements fixed by x -> x^q (the GF(q) subfield)."""
        _check_subfield(self.order, q)
        return [x for x in self._elements if x ** q == x]

    def __str__(self) -> str:
        return f"GF({self.order})"


@dataclass(frozen=True)
class FieldElement:
    """Element of a FiniteField; arithmetic is table lookup in the owner."""
    owner: FiniteField = field(repr=False)
    coeffs: Coeffs
    index: int = field(compare=False, repr=False, default=-1)

    def _other(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.owner.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.owner is not self.owner and other.owner != self.owner:
            raise ValueError(f"Mismatched fields: {self.owner} and {other.owner}")
        return other

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.owner._elements[self.owner._add[self.index][other.index]]

    __radd__ = __add__

    def __neg__(self):
        return self.owner._elements[self.owner._neg[self.index]]

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.index == 0 or other.index == 0:
            return self.owner.zero
        F = self.owner
        return F._elements[F._exp[(F._log[self.index] + F._log[other.index]) % (F.order - 1)]]

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.index == 0:
            raise ZeroDivisionError(f"Division by zero in {self.owner}")
        F = self.owner
        return F._elements[F._exp[(-F._log[self.index]) % (F.order - 1)]]

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, exponent: int):
        F = self.owner
        if self.index == 0:
            if exponent < 0:
                raise ZeroDivisionError(f"Zero raised to a negative power in {F}")
            return F.one if exponent == 0 else F.zero
        return F._elements[F._exp[(F._log[self.index] * exponent) % (F.order - 1)]]

    def __bool__(self) -> bool:
        return self.index != 0

    def is_zero(self) -> bool:
        return self.index == 0

    def __str__(self) -> str:
        if self.owner.f == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def ff_make(p: int, f: int = 1) -> FiniteField:
    """Build GF(p^f). Cached so repeated builds share one table set."""
    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"Field characteristic must be prime, got {p}")
    if not isinstance(f, int) or f < 1:
        raise ValueError(f"Field degree must be a positive integer, got {f}")
    if p ** f > MAX_FIELD_ORDER:
        raise ValueError(f"GF({p}^{f}) exceeds the supported field order {MAX_FIELD_ORDER}")
    return FiniteField(p, f, smallest_irreducible(p, f))


def field_of_order(q: int) -> FiniteField:
    """GF(q) for a prime power q."""
    p, f = prime_power(q)
    return ff_make(p, f)


def prime_power(q: int) -> Tuple[int, int]:
    """Split q = p^f; raises for anything that is not a prime power."""
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"{q} is not a prime power")
    if isprime(q):
        return q, 1
    split = perfect_power(q)
    if split:
        base, exp = split
        if isprime(base):
            return int(base), int(exp)
        inner = prime_power(int(base))
        return inner[0], inner[1] * int(exp)
    raise ValueError(f"{q} is not a prime power")


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except ValueError:
        return False
    return True


_OPS = {
    'add': lambda a, b: a + b,
    'sub': lambda a, b: a - b,
    'mul': lambda a, b: a * b,
    'div': lambda a, b: a / b,
}


def ff_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if op not in _OPS:
        raise ValueError(f"Unknown field operation '{op}' (expected one of {sorted(_OPS)})")
    if a.owner != b.owner:
        raise ValueError(f"Mismatched fields: {a.owner} and {b.owner}")
    return _OPS[op](a, b)


def _check_subfield(order: int, q: int) -> None:
    if q < 2 or q * q != order:
        raise ValueError(f"Field of order {order} is not GF({q}^2)")


def conj_q(x: FieldElement, q: int) -> FieldElement:
    """The involution x -> x^q of GF(q^2)."""
    _check_subfield(x.owner.order, q)
    return x ** q


def trace_zero_elements(F: FiniteField, q: int) -> List[FieldElement]:
    """{a in GF(q^2) : a + a^q = 0}, a set of exactly q elements."""
    _check_subfield(F.order, q)
    return [a for a in F.elements() if (a + a ** q).is_zero()]


def main():
    parser = argparse.ArgumentParser(description='Print the element table of GF(p^f)')
    parser.add_argument('p', type=int, help='Characteristic (prime)')
    parser.add_argument('f', type=int, nargs='?', default=1, help='Extension degree (default 1)')
    args = parser.parse_args()

    try:
        F = ff_make(args.p, args.f)
    except ValueError as e:
        print(json.dumps({'error': str(e)}))
        sys.exit(1)

    print(json.dumps({
        'order': F.order,
        'modulus': list(F.modulus),
        'primitive_element': list(F.primitive_element.coeffs),
        'elements': [list(x.coeffs) for x in F.elements()],
    }, indent=2))


if __name__ == '__main__':
    main()
