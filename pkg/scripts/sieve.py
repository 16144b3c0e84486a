#!/usr/bin/env python3
"""
Arithmetic feasibility sieve for (s, t) pairs of point-transitive GQs.

For a candidate pair (G, G_p) with |P| = v, an admissible s must divide a
divisor certificate c(q) = u(q)(f(q) - 1) + v(q)h(q), share its
characteristic part with v - 1, divide |G_p| and beat the power bound
1 + s > q^beta. Each surviving s gives t from v = (1+s)(1+st), which must
lie in [sqrt(s), s^2] and satisfy s + t | st(t + 1).

Case data lives in data/sieve_cases.json (see gq_constants.data_dir()).

Usage:
    python3 sieve.py run --case G2-line1 [--q-max N] [--jobs K]
    python3 sieve.py verify-cert --case 3D4-line3
    python3 sieve.py all [--q-max N] [--jobs K]
    python3 sieve.py bounds --kind GL --a 2 --q 3

Output (JSON):
{
  "case": "G2-line1",
  "q_range": [3, 625],
  "survivors": [],
  "verdict": "excluded"
}
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import QQ, ZZ, Poly, Symbol, cyclotomic_poly

from finite_field import prime_power
from gq_constants import (
    CERT_CHECK_POINTS, DEFAULT_JOBS, DEFAULT_SEED, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, MAX_PHI_INDEX,
    SIEVE_CASES_FILE, data_dir,
)
from gq_core import check_point_stabilizer_facts

Q = Symbol('q')

KINDS = ('parabolic', 'index', 'residue')
CONSTRAINT_NAMES = ('r0_part', 'divides_gp', 'divides_c', 'bound', 'r_divides_t')


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------

def _denominator_lcm(poly: Poly) -> int:
    return lcm(1, *(int(sympy.Rational(c).q) for c in poly.all_coeffs()))


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial in q, coefficients from the constant term up."""
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        trimmed = [int(c) for c in self.coeffs]
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, 'coeffs', tuple(trimmed))

    @classmethod
    def constant(cls, value: int) -> "IntPoly":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPoly":
        return cls((0,) * degree + (coeff,))

    @classmethod
    def from_poly(cls, poly: Poly) -> "IntPoly":
        coeffs = []
        for c in reversed(poly.all_coeffs()):
            r = sympy.Rational(c)
            if r.q != 1:
                raise ValueError(f"Polynomial {poly.as_expr()} has non-integer coefficient {r}")
            coeffs.append(int(r.p))
        return cls(tuple(coeffs))

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        """Read an integer polynomial written in q, e.g. '5**4*19**4*q**2'."""
        try:
            expr = sympy.sympify(text, locals={'q': Q})
        except (sympy.SympifyError, TypeError) as e:
            raise ValueError(f"Cannot parse polynomial '{text}': {e}") from None
        if expr.free_symbols - {Q}:
            raise ValueError(f"Polynomial '{text}' uses symbols other than q")
        return cls.from_poly(Poly(expr, Q))

    def to_poly(self, domain=ZZ) -> Poly:
        return Poly(list(reversed(self.coeffs)) or [0], Q, domain=domain)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def valuation(self) -> int:
        """Exponent of the lowest nonzero term."""
        if self.is_zero():
            raise ValueError("The zero polynomial has no valuation")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def truncate(self, k: int) -> "IntPoly":
        """Terms of degree below k (the remainder mod q^k)."""
        return IntPoly(self.coeffs[:k])

    def __call__(self, q: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            total = total * q + c
        return total

    @staticmethod
    def _coerce(other) -> "IntPoly":
        return other if isinstance(other, IntPoly) else IntPoly.constant(int(other))

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        result = IntPoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def divmod_qq(self, other: "IntPoly") -> Tuple[Poly, Poly]:
        """Quotient and remainder over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("Polynomial division by zero")
        return self.to_poly(QQ).div(other.to_poly(QQ))

    def divides(self, other: "IntPoly") -> bool:
        """True when other = self * w with w in Z[q]."""
        quo, rem = other.divmod_qq(self)
        return rem.is_zero and _denominator_lcm(quo) == 1

    def __str__(self) -> str:
        return str(self.to_poly().as_expr())

    def to_json(self) -> str:
        return str(self)


# ---------------------------------------------------------------------------
# Cyclotomic values and group-order formulas
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _phi_poly(i: int) -> IntPoly:
    return IntPoly.from_poly(Poly(cyclotomic_poly(i, Q), Q))


def phi_eval(i: int, q: int) -> int:
    """Phi_i(q), exactly."""
    if not isinstance(i, int) or not 1 <= i <= MAX_PHI_INDEX:
        raise ValueError(f"Unsupported cyclotomic index {i} (expected 1..{MAX_PHI_INDEX})")
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    return _phi_poly(i)(q)


# d = gcd(2,q-1), e+ = gcd(3,q-1), e- = gcd(3,q+1), f- = gcd(4,q+1)
_PREFACTORS = {
    '1': lambda q: 1,
    'd': lambda q: gcd(2, q - 1),
    'e+': lambda q: gcd(3, q - 1),
    'e-': lambda q: gcd(3, q + 1),
    'f-': lambda q: gcd(4, q + 1),
}


@dataclass(frozen=True)
class GroupOrderFormula:
    """q^N * prod Phi_i^e_i divided by the prefactor symbol d0."""
    q_exponent: int = 0
    phi: Tuple[Tuple[int, int], ...] = ()
    prefactor: str = '1'

    def __post_init__(self):
        if self.prefactor not in _PREFACTORS:
            raise ValueError(f"Unknown prefactor '{self.prefactor}' (expected one of {', '.join(_PREFACTORS)})")
        if self.q_exponent < 0:
            raise ValueError("q exponent must be nonnegative")
        merged: Dict[int, int] = {}
        for i, e in self.phi:
            if not isinstance(i, int) or not 1 <= i <= MAX_PHI_INDEX:
                raise ValueError(f"Unsupported cyclotomic index {i} (expected 1..{MAX_PHI_INDEX})")
            if e < 0:
                raise ValueError(f"Negative multiplicity for Phi_{i}")
            merged[i] = merged.get(i, 0) + e
        object.__setattr__(self, 'phi', tuple(sorted((i, e) for i, e in merged.items() if e)))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GroupOrderFormula":
        phi = data.get('phi', {})
        if not isinstance(phi, dict):
            raise ValueError("'phi' must map cyclotomic indices to multiplicities")
        return cls(q_exponent=int(data.get('q', 0)),
                   phi=tuple((int(i), int(e)) for i, e in phi.items()),
                   prefactor=str(data.get('prefactor', '1')))

    def to_dict(self) -> Dict[str, Any]:
        return {'q': self.q_exponent, 'phi': {str(i): e for i, e in self.phi}, 'prefactor': self.prefactor}

    def numerator(self) -> IntPoly:
        """h(x) = x^N * prod Phi_i(x)^e_i, the formula before division by d0."""
        out = IntPoly.monomial(self.q_exponent)
        for i, e in self.phi:
            out = out * _phi_poly(i) ** e
        return out

    def evaluate(self, q: int) -> int:
        num = q ** self.q_exponent
        for i, e in self.phi:
            num *= phi_eval(i, q) ** e
        d0 = _PREFACTORS[self.prefactor](q)
        if num % d0:
            raise ValueError(f"{self} is not integral at q={q}")
        return num // d0

    def quotient(self, other: "GroupOrderFormula") -> "GroupOrderFormula":
        """self / other, e.g. |G| / |G_p| = v."""
        exponents = dict(self.phi)
        for i, e in other.phi:
            exponents[i] = exponents.get(i, 0) - e
        bad = sorted(i for i, e in exponents.items() if e < 0)
        if bad or other.q_exponent > self.q_exponent:
            raise ValueError(f"{other} does not divide {self} (Phi indices {bad})")
        if self.prefactor == other.prefactor:
            prefactor = '1'
        elif other.prefactor == '1':
            prefactor = self.prefactor
        else:
            raise ValueError(f"Cannot divide prefactor {self.prefactor} by {other.prefactor}")
        return GroupOrderFormula(self.q_exponent - other.q_exponent, tuple(exponents.items()), prefactor)

    def __str__(self) -> str:
        parts = [f"q^{self.q_exponent}"] if self.q_exponent else []
        parts += [f"Phi{i}^{e}" if e > 1 else f"Phi{i}" for i, e in self.phi]
        text = '*'.join(parts) or '1'
        return text if self.prefactor == '1' else f"{text}/{self.prefactor}"


def formula_eval(formula: GroupOrderFormula, q: int) -> int:
    return formula.evaluate(q)


# ---------------------------------------------------------------------------
# Divisor certificates and congruences
# ---------------------------------------------------------------------------

def bezout_cert(a: IntPoly, b: IntPoly) -> Tuple[IntPoly, IntPoly, IntPoly]:
    """u, v, c in Z[q] with u*a + v*b = c, c = n * gcd_Q(a, b) and n minimal.

    The rational gcd g is taken primitive with positive leading coefficient.
    With A = a/g, B = b/g coprime over Q, the Bezout pair over Q is scaled by
    the least n clearing its denominators.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("Divisor certificates need nonzero polynomials")
    A, B = a.to_poly(), b.to_poly()
    _, g = A.gcd(B).primitive()
    if g.LC() < 0:
        g = -g
    A0, B0 = A.exquo(g), B.exquo(g)

    if B0.degree() == 0:
        k = int(B0.LC())
        return IntPoly(), IntPoly.constant(1 if k > 0 else -1), IntPoly.from_poly(g.mul_ground(abs(k)))

    s, t, h = A0.gcdex(B0)
    if h.degree() != 0:
        raise ValueError("Cofactors are not coprime after removing the gcd")
    s, t = s.quo_ground(h.LC()), t.quo_ground(h.LC())
    n = _denominator_lcm(s)
    if abs(int(B0.LC())) != 1:
        n = lcm(n, _denominator_lcm(t))
    u = IntPoly.from_poly(s.mul_ground(n))
    v = IntPoly.from_poly(t.mul_ground(n))
    return u, v, IntPoly.from_poly(g.mul_ground(n))


def poly_xgcd_cert(f: IntPoly, h: IntPoly) -> Tuple[IntPoly, IntPoly, IntPoly]:
    """u, v, c with u*(f - 1) + v*h = c; s | c(q) whenever s | f(q) - 1 and s | h(q)."""
    return bezout_cert(f - 1, h)


def _real_root_ceiling(poly: Poly) -> Optional[Fraction]:
    if poly.is_zero or poly.degree() <= 0:
        return None
    uppers = [Fraction(int(sympy.Rational(b).p), int(sympy.Rational(b).q)) for (_, b), _ in poly.intervals()]
    return max(uppers) if uppers else None


@dataclass(frozen=True)
class CongruenceReduction:
    """scale * v = remainder (mod modulus) in Z[q]; for q >= threshold, 0 < |remainder(q)| < modulus(q)."""
    scale: int
    remainder: IntPoly
    modulus: IntPoly
    threshold: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {'scale': self.scale, 'remainder': str(self.remainder), 'modulus': str(self.modulus),
                'threshold': self.threshold}


def congruence_reduction(v: IntPoly, s_poly: IntPoly) -> CongruenceReduction:
    """Least k with k*v = R (mod 1 + s(q)) in Z[q], plus the q beyond which 1 + s(q) cannot divide v(q)."""
    modulus = s_poly + 1
    quo, rem = v.divmod_qq(modulus)
    scale = lcm(_denominator_lcm(quo), _denominator_lcm(rem))
    remainder = IntPoly.from_poly(rem.mul_ground(scale))
    if remainder.is_zero():
        return CongruenceReduction(scale, remainder, modulus, None)
    R, M = remainder.to_poly(), modulus.to_poly()
    bound = Fraction(1)
    for poly in (R, M - R, M + R):
        top = _real_root_ceiling(poly)
        if top is not None:
            bound = max(bound, top)
    return CongruenceReduction(scale, remainder, modulus, max(2, int(bound) + 1))


def symbolic_t(v: IntPoly, s_poly: IntPoly) -> Optional[IntPoly]:
    """t(q) with v = (1+s)(1+st) as polynomials, when it exists in Z[q]."""
    quo, rem = v.divmod_qq(s_poly + 1)
    if not rem.is_zero:
        return None
    t, rem2 = (quo - 1).div(s_poly.to_poly(QQ))
    if not rem2.is_zero or _denominator_lcm(t) != 1:
        return None
    return IntPoly.from_poly(t)


@dataclass(frozen=True)
class ResidueCertificate:
    """s = h(q) (mod q^k) while s divides c(q); excluded whenever c(q) < h(q) < q^k."""
    c: IntPoly
    modulus_exponent: int
    h: IntPoly

    def excludes(self, q: int) -> bool:
        return self.c(q) < self.h(q) < q ** self.modulus_exponent

    def to_dict(self) -> Dict[str, Any]:
        return {'c': str(self.c), 'modulus': f"q^{self.modulus_exponent}", 'h': str(self.h)}


def residue_exclusion(a: IntPoly, b: IntPoly, s_exponent: int) -> ResidueCertificate:
    """Rank-3 suborbit argument: s(t+1) = a, s^2 t = b and s has characteristic part q^s_exponent.

    Then t has characteristic part q^(val(b) - 2*s_exponent), so a = s (mod q^k)
    with k = val(b) - s_exponent, and s divides the Bezout certificate of (a, b).
    """
    _, _, c = bezout_cert(a, b)
    k = b.valuation() - s_exponent
    if k <= s_exponent:
        raise ValueError("Suborbit lengths leave no room for a residue argument")
    return ResidueCertificate(c, k, a.truncate(k))


# ---------------------------------------------------------------------------
# Feasible pairs
# ---------------------------------------------------------------------------

def _part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    return p ** sympy.multiplicity(p, n) if n else 0


def _beats_bound(x: int, q: int, beta: Fraction) -> bool:
    """x > q^beta, compared as x^b > q^a."""
    return x ** beta.denominator > q ** beta.numerator


@dataclass(frozen=True)
class PairConstraints:
    """Constraint set for feasible_pairs; every field is optional."""
    q: Optional[int] = None
    c: Optional[int] = None
    gp: Optional[int] = None
    beta: Optional[Fraction] = None
    r0_part: bool = False
    r: Optional[int] = None
    r_power: int = 1

    def __post_init__(self):
        if self.r0_part and self.q is None:
            raise ValueError("Constraint r0_part references undefined symbol q")
        if self.beta is not None and self.q is None:
            raise ValueError("Constraint bound references undefined symbol q")
        if self.r_power < 1:
            raise ValueError("r_power must be at least 1")


@dataclass(frozen=True)
class FeasiblePair:
    s: int
    t: Optional[int]
    trace: Dict[str, bool] = field(compare=False)

    @property
    def feasible(self) -> bool:
        return self.t is not None and all(self.trace.values())

    def to_dict(self) -> Dict[str, Any]:
        return {'s': self.s, 't': self.t, 'trace': dict(self.trace)}


def _assess(v: int, s: int, cons: PairConstraints) -> FeasiblePair:
    trace = {
        'divides_v_minus_1': (v - 1) % s == 0,
        'coprime_v': gcd(s, v) == 1,
    }
    if cons.r0_part:
        p, _ = prime_power(cons.q)
        trace['r0_part'] = _part(s, p) == _part(v - 1, p)
    if cons.c is not None:
        trace['divides_c'] = cons.c % s == 0
    if cons.gp is not None:
        trace['divides_gp'] = cons.gp % s == 0
    if cons.beta is not None:
        trace['bound'] = _beats_bound(1 + s, cons.q, cons.beta)

    t = None
    if v % (1 + s) == 0 and (v // (1 + s) - 1) % s == 0:
        t = (v // (1 + s) - 1) // s
    trace['t_integral'] = t is not None
    if t is not None:
        trace['thick'] = s >= 2 and t >= 2
        trace['range'] = s <= t * t and t <= s * s
        trace['divisibility'] = (s * t * (t + 1)) % (s + t) == 0
        if cons.r is not None:
            trace['r_divides_t'] = t % (cons.r ** cons.r_power) == 0
    return FeasiblePair(s, t, trace)


def feasible_pairs(v: int, constraints: Optional[PairConstraints] = None,
                   include_rejected: bool = False) -> List[FeasiblePair]:
    """Every (s, t) with (1+s)(1+st) = v surviving the constraint set.

    With c given, s ranges over the divisors of gcd(c, v - 1, |G_p|);
    otherwise over d - 1 for the divisors d >= 3 of v.
    """
    if v < 15:
        raise ValueError(f"v must be at least 15 for a thick GQ, got {v}")
    cons = constraints or PairConstraints()
    if cons.c is not None:
        pool = gcd(cons.c, v - 1)
        if cons.gp is not None:
            pool = gcd(pool, cons.gp)
        if cons.beta is not None and not _beats_bound(1 + pool, cons.q, cons.beta):
            return []
        candidates = [s for s in sympy.divisors(pool) if s >= 2]
    else:
        candidates = [d - 1 for d in sympy.divisors(v) if d >= 3]
    results = [_assess(v, s, cons) for s in candidates]
    return results if include_rejected else [pair for pair in results if pair.feasible]


# ---------------------------------------------------------------------------
# Case data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SieveCase:
    name: str
    group: str
    kind: str
    provenance: str = ''
    gp: Optional[GroupOrderFormula] = None
    v: Optional[GroupOrderFormula] = None
    c: Optional[IntPoly] = None
    beta: Optional[Fraction] = None
    constraints: Tuple[str, ...] = ()
    q_max: Optional[int] = None
    parity: str = 'odd'
    expected: str = 'excluded'
    symbolic_s: Tuple[IntPoly, ...] = ()
    order: Optional[int] = None
    subgroups: Tuple[Tuple[str, int], ...] = ()
    residue_a: Optional[GroupOrderFormula] = None
    residue_b: Optional[GroupOrderFormula] = None
    s_exponent: int = 1
    cert_note: str = ''
    computed_c: Optional[IntPoly] = field(default=None, compare=False)

    def constraints_at(self, q: int) -> PairConstraints:
        names = set(self.constraints)
        return PairConstraints(
            q=q,
            c=self.c(q) if 'divides_c' in names else None,
            gp=self.gp.evaluate(q) if 'divides_gp' in names else None,
            beta=self.beta if 'bound' in names else None,
            r0_part='r0_part' in names,
            r=prime_power(q)[0] if 'r_divides_t' in names else None,
        )


def _parse_formula(data: Any, groups: Dict[str, GroupOrderFormula], gp: Optional[GroupOrderFormula],
                   label: str) -> GroupOrderFormula:
    if not isinstance(data, dict):
        raise ValueError(f"{label} must be an object")
    if 'over' in data:
        name = data['over']
        if name not in groups:
            raise ValueError(f"{label} references undefined group '{name}'")
        if gp is None:
            raise ValueError(f"{label} needs a gp formula to divide by")
        return groups[name].quotient(gp)
    return GroupOrderFormula.from_dict(data)


def _parse_case(raw: Dict[str, Any], groups: Dict[str, GroupOrderFormula]) -> SieveCase:
    name = raw.get('name')
    if not name:
        raise ValueError("missing 'name'")
    kind = raw.get('kind')
    if kind not in KINDS:
        raise ValueError(f"unknown kind '{kind}' (expected one of {', '.join(KINDS)})")
    unknown = [c for c in raw.get('constraints', []) if c not in CONSTRAINT_NAMES]
    if unknown:
        raise ValueError(f"unknown constraint '{unknown[0]}'")

    fields: Dict[str, Any] = {
        'name': name,
        'group': raw.get('group', ''),
        'kind': kind,
        'provenance': raw.get('provenance', ''),
        'constraints': tuple(raw.get('constraints', [])),
        'q_max': raw.get('q_max'),
        'parity': raw.get('parity', 'odd'),
        'expected': raw.get('expected', 'excluded'),
    }
    if fields['parity'] not in ('odd', 'even', 'any'):
        raise ValueError(f"unknown parity '{fields['parity']}'")
    if 'gp' in raw:
        fields['gp'] = GroupOrderFormula.from_dict(raw['gp'])
    if 'v' in raw:
        fields['v'] = _parse_formula(raw['v'], groups, fields.get('gp'), 'v')
    if 'c' in raw:
        fields['c'] = IntPoly.parse(raw['c'])
        fields['cert_note'] = str(raw.get('c_note', ''))
    if 'beta' in raw:
        fields['beta'] = Fraction(str(raw['beta']))
    if 'symbolic' in raw:
        fields['symbolic_s'] = tuple(IntPoly.parse(s) for s in raw['symbolic'].get('s', []))

    if kind == 'parabolic':
        missing = [k for k in ('gp', 'v', 'q_max') if fields.get(k) is None]
        if missing:
            raise ValueError(f"parabolic case needs {', '.join(missing)}")
        names = set(fields['constraints'])
        if 'divides_c' in names and 'c' not in fields:
            raise ValueError("constraint divides_c references undefined symbol c")
        if 'bound' in names and 'beta' not in fields:
            raise ValueError("constraint bound references undefined symbol beta")
    elif kind == 'index':
        order = raw.get('order')
        subs = raw.get('subgroups', [])
        if not isinstance(order, int) or not subs:
            raise ValueError("index case needs 'order' and 'subgroups'")
        for sub in subs:
            if order % sub['order']:
                raise ValueError(f"subgroup {sub['name']} order {sub['order']} does not divide {order}")
        fields['order'] = order
        fields['subgroups'] = tuple((sub['name'], int(sub['order'])) for sub in subs)
    else:
        residue = raw.get('residue')
        if not isinstance(residue, dict) or 'a' not in residue or 'b' not in residue:
            raise ValueError("residue case needs 'residue' with suborbit lengths 'a' and 'b'")
        fields['residue_a'] = GroupOrderFormula.from_dict(residue['a'])
        fields['residue_b'] = GroupOrderFormula.from_dict(residue['b'])
        fields['s_exponent'] = int(residue.get('s_exponent', 1))
        if fields.get('q_max') is None:
            raise ValueError("residue case needs q_max")
    return SieveCase(**fields)


@lru_cache(maxsize=None)
def _table_cert(f: IntPoly, h: IntPoly) -> Tuple[IntPoly, IntPoly, IntPoly]:
    return poly_xgcd_cert(f, h)


def _with_certificate(case: SieveCase) -> SieveCase:
    """Recompute c(q) from v and |G_p|; the stored c must be a multiple of it."""
    if case.c is None or case.v is None or case.gp is None:
        return case
    if case.v.prefactor != '1':
        raise ValueError("v must be a polynomial (prefactor 1) for a certificate")
    _, _, computed = _table_cert(case.v.numerator(), case.gp.numerator())
    if not computed.divides(case.c):
        raise ValueError(f"stored certificate {case.c} is not a multiple of the recomputed {computed}")
    return replace(case, computed_c=computed)


def parse_cases(content: str) -> Tuple[Optional[Dict[str, SieveCase]], List[str]]:
    """
    Parse the sieve case file.

    Returns:
        Tuple of (cases by name or None, parse_errors)
    """
    try:
        data = json.loads(content)
    except json.JSONDecodeError as e:
        return None, [f"Invalid JSON: {e}"]
    if not isinstance(data, dict) or not isinstance(data.get('cases'), list):
        return None, ["Case file must hold an object with a 'cases' list"]

    errors = []
    groups: Dict[str, GroupOrderFormula] = {}
    for name, raw in (data.get('groups') or {}).items():
        try:
            groups[name] = GroupOrderFormula.from_dict(raw)
        except (ValueError, TypeError) as e:
            errors.append(f"Group {name}: {e}")

    cases: Dict[str, SieveCase] = {}
    for i, raw in enumerate(data['cases']):
        label = raw.get('name', f"#{i}") if isinstance(raw, dict) else f"#{i}"
        try:
            case = _with_certificate(_parse_case(raw, groups))
        except (ValueError, TypeError, KeyError) as e:
            errors.append(f"Case {label}: {e}")
            continue
        if case.name in cases:
            errors.append(f"Case {label}: duplicate name")
            continue
        cases[case.name] = case
    if errors:
        return None, errors
    return cases, []


def load_cases(file_path: Optional[str] = None) -> Tuple[Optional[Dict[str, SieveCase]], List[str]]:
    path = Path(file_path) if file_path else data_dir() / SIEVE_CASES_FILE
    try:
        content = path.read_text(encoding='utf-8')
    except OSError as e:
        return None, [f"Cannot read {path}: {e}"]
    return parse_cases(content)


# ---------------------------------------------------------------------------
# Running cases
# ---------------------------------------------------------------------------

def prime_powers(q_max: int, q_min: int = 2, parity: str = 'any') -> List[int]:
    out = []
    for p in sympy.primerange(2, q_max + 1):
        pk = p
        while pk <= q_max:
            if pk >= q_min:
                out.append(pk)
            pk *= p
    if parity == 'odd':
        out = [q for q in out if q % 2]
    elif parity == 'even':
        out = [q for q in out if q % 2 == 0]
    return sorted(out)


def _scan_parabolic(case: SieveCase, qs: Sequence[int]) -> List[Dict[str, Any]]:
    survivors = []
    for q in qs:
        v = case.v.evaluate(q)
        for pair in feasible_pairs(v, case.constraints_at(q)):
            survivors.append({'q': q, **pair.to_dict()})
    return survivors


def _scan_residue(case: SieveCase, qs: Sequence[int]) -> List[Dict[str, Any]]:
    cert = residue_exclusion(case.residue_a.numerator(), case.residue_b.numerator(), case.s_exponent)
    return [{'q': q, 's': None, 't': None, 'trace': {'residue_window': False}}
            for q in qs if not cert.excludes(q)]


def _scan_chunk(args: Tuple[SieveCase, Tuple[int, ...]]) -> List[Dict[str, Any]]:
    case, qs = args
    if case.kind == 'residue':
        return _scan_residue(case, qs)
    return _scan_parabolic(case, qs)


def _fan_out(case: SieveCase, qs: List[int], jobs: int) -> List[Dict[str, Any]]:
    if jobs <= 1 or len(qs) < 2:
        return _scan_chunk((case, tuple(qs)))
    chunks = [tuple(qs[i::jobs]) for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_scan_chunk, [(case, chunk) for chunk in chunks if chunk]))
    merged = [row for part in parts for row in part]
    return sorted(merged, key=lambda row: (row['q'], row['s'] or 0))


def _symbolic_entry(v: IntPoly, s_poly: IntPoly, qs: Sequence[int]) -> Dict[str, Any]:
    t = symbolic_t(v, s_poly)
    if t is not None:
        s_plus_t = s_poly + t
        product = s_poly * t * (t + 1)
        _, rem = product.divmod_qq(s_plus_t)
        hits = [q for q in qs if product(q) % s_plus_t(q) == 0]
        return {'s': str(s_poly), 't': str(t), 'divides_as_polynomials': rem.is_zero,
                'divisible_at': hits, 'excluded': not hits}
    red = congruence_reduction(v, s_poly)
    if red.threshold is None:
        below = [q for q in qs if v(q) % (s_poly(q) + 1) == 0]
    else:
        below = [q for q in prime_powers(red.threshold - 1) if v(q) % (s_poly(q) + 1) == 0]
    return {'s': str(s_poly), **red.to_dict(), 'divisible_below_threshold': below,
            'excluded': red.threshold is not None and not below}


def _index_report(case: SieveCase) -> Tuple[List[Dict[str, Any]], List[Dict[str, Any]]]:
    rows, survivors = [], []
    for name, sub_order in case.subgroups:
        index = case.order // sub_order
        pairs = feasible_pairs(index, include_rejected=True)
        integral = []
        for p in pairs:
            if p.t is None or p.t < 1:
                continue
            facts = check_point_stabilizer_facts(index, p.s, p.t, sub_order, group_order=case.order)
            integral.append({
                's': p.s, 't': p.t,
                'failed': sorted(k for k, ok in p.trace.items() if not ok),
                'stabilizer_failed': [c['name'] for c in facts['checks'] if c['status'] == 'fail'],
            })
        rows.append({'subgroup': name, 'index': index, 'integer_solutions': integral})
        survivors.extend({'index': index, 'subgroup': name, **p.to_dict()} for p in pairs if p.feasible)
    return rows, survivors


def run_case(case: SieveCase, q_max: Optional[int] = None, jobs: int = DEFAULT_JOBS) -> Dict[str, Any]:
    """Scan the case and report survivors; 'excluded' means none anywhere."""
    if jobs < 1:
        raise ValueError("jobs must be positive")
    report: Dict[str, Any] = {'case': case.name, 'group': case.group, 'kind': case.kind,
                              'provenance': case.provenance}
    excluded = True

    if case.kind == 'index':
        report['q_range'] = None
        report['indices'], survivors = _index_report(case)
    else:
        top = q_max if q_max is not None else case.q_max
        qs = prime_powers(top, q_min=2, parity=case.parity)
        report['q_range'] = [qs[0], qs[-1]] if qs else None
        report['q_count'] = len(qs)
        if case.computed_c is not None:
            report['certificate'] = {'stored': str(case.c), 'computed': str(case.computed_c),
                                     'exact': case.c == case.computed_c}
        survivors = _fan_out(case, qs, jobs)
        if case.kind == 'residue':
            cert = residue_exclusion(case.residue_a.numerator(), case.residue_b.numerator(), case.s_exponent)
            report['residue'] = cert.to_dict()
        if case.symbolic_s:
            v_poly = case.v.numerator()
            report['symbolic'] = [_symbolic_entry(v_poly, s, qs) for s in case.symbolic_s]
            excluded = all(entry['excluded'] for entry in report['symbolic'])

    report['survivors'] = survivors
    verdict = 'excluded' if excluded and not survivors else 'survivors'
    report['verdict'] = verdict
    report['expected'] = case.expected
    report['matches_expected'] = verdict == case.expected
    return report


def _identity_holds(u: IntPoly, v: IntPoly, f: IntPoly, h: IntPoly, c: IntPoly, seed: int) -> Tuple[bool, bool]:
    symbolic = (u * f + v * h - c).is_zero()
    rng = np.random.default_rng(seed)
    points = [int(x) for x in rng.integers(2, 10 ** 6, size=CERT_CHECK_POINTS)]
    numeric = all(u(q) * f(q) + v(q) * h(q) == c(q) for q in points)
    return symbolic, numeric


def verify_cert(case: SieveCase, seed: int = DEFAULT_SEED) -> Dict[str, Any]:
    """Recompute the divisor certificate of a case and compare it with the stored c(q)."""
    report: Dict[str, Any] = {'case': case.name, 'kind': case.kind}
    if case.kind == 'index':
        report['status'] = 'skipped'
        return report

    checks = []
    if case.v is not None and case.gp is not None and case.c is not None:
        if case.v.prefactor != '1':
            raise ValueError(f"Case {case.name}: v must be a polynomial (prefactor 1) for a certificate")
        f, h = case.v.numerator(), case.gp.numerator()
        u, w, c = _table_cert(f, h)
        symbolic, numeric = _identity_holds(u, w, f - 1, h, c, seed)
        divides = c.divides(case.c)
        cofactor = IntPoly.from_poly(case.c.divmod_qq(c)[0]) if divides else None
        checks.append({
            'name': 'table_certificate', 'computed_c': str(c), 'stored_c': str(case.c),
            'identity_symbolic': symbolic, 'identity_numeric': numeric,
            'exact': c == case.c, 'divides_stored': divides,
            'cofactor': str(cofactor) if cofactor is not None else None,
            'note': case.cert_note,
            'status': 'pass' if symbolic and numeric and divides else 'fail',
        })
    if case.kind == 'residue':
        a, b = case.residue_a.numerator(), case.residue_b.numerator()
        u, w, c = bezout_cert(a, b)
        symbolic, numeric = _identity_holds(u, w, a, b, c, seed)
        checks.append({
            'name': 'suborbit_certificate', 'computed_c': str(c),
            'identity_symbolic': symbolic, 'identity_numeric': numeric,
            'status': 'pass' if symbolic and numeric else 'fail',
        })
    report['checks'] = checks
    report['status'] = 'pass' if all(c['status'] == 'pass' for c in checks) else 'fail'
    return report


# ---------------------------------------------------------------------------
# Classical group order sandwiches
# ---------------------------------------------------------------------------

def _gl_order(a: int, q: int) -> int:
    out = 1
    for i in range(a):
        out *= q ** a - q ** i
    return out


def _gu_order(a: int, q: int) -> int:
    out = q ** (a * (a - 1) // 2)
    for i in range(1, a + 1):
        out *= q ** i - (-1) ** i
    return out


def gl_gu_report(a: int, q: int, kind: str) -> Dict[str, Any]:
    """Both sides of the |GL_a(q)| / |GU_a(q)| sandwich, compared in integers."""
    if a < 2 or q < 2:
        raise ValueError("Order bounds need a >= 2 and q >= 2")
    if kind == 'GL':
        order = _gl_order(a, q)
        lower_lhs, lower_rhs = (q * q - q - 1) * q ** (a * a), order * q ** 2
        upper_lhs, upper_rhs = order * q ** 3, (q - 1) * (q * q - 1) * q ** (a * a)
    elif kind == 'GU':
        order = _gu_order(a, q)
        lower_lhs, lower_rhs = (q + 1) * (q * q - 1) * q ** (a * a), order * q ** 3
        upper_lhs, upper_rhs = order * q ** 6, (q + 1) * (q * q - 1) * (q ** 3 + 1) * q ** (a * a)
    else:
        raise ValueError(f"Unknown kind '{kind}' (expected GL or GU)")

    strict, weak = lower_lhs < lower_rhs, lower_lhs <= lower_rhs
    upper = upper_lhs <= upper_rhs
    return {'kind': kind, 'a': a, 'q': q, 'order': order, 'lower_strict': strict, 'lower_weak': weak,
            'upper': upper, 'holds': weak and upper}


def check_gl_gu_bounds(a: int, q: int, kind: str) -> bool:
    return gl_gu_report(a, q, kind)['holds']


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def run_cases(cases: Dict[str, SieveCase], names: Sequence[str], q_max: Optional[int] = None,
              jobs: int = DEFAULT_JOBS) -> Dict[str, Any]:
    reports = [run_case(cases[name], q_max=q_max, jobs=jobs) for name in names]
    return {'cases': reports, 'all_match_expected': all(r['matches_expected'] for r in reports)}


def main(argv: Optional[List[str]] = None):
    parser = argparse.ArgumentParser(description='Feasible (s,t) sieve over exceptional-group cases')
    parser.add_argument('--cases-file', help='Case data file (default: $GQ_DATA_DIR or scripts/data)')
    sub = parser.add_subparsers(dest='command', required=True)

    p_run = sub.add_parser('run', help='Scan one case')
    p_run.add_argument('--case', required=True)
    p_run.add_argument('--q-max', type=int)
    p_run.add_argument('--jobs', type=int, default=DEFAULT_JOBS)

    p_cert = sub.add_parser('verify-cert', help='Recompute the divisor certificate of a case')
    p_cert.add_argument('--case', required=True)
    p_cert.add_argument('--seed', type=int, default=DEFAULT_SEED)

    p_all = sub.add_parser('all', help='Scan every case')
    p_all.add_argument('--q-max', type=int)
    p_all.add_argument('--jobs', type=int, default=DEFAULT_JOBS)

    p_bounds = sub.add_parser('bounds', help='Check the GL/GU order sandwich')
    p_bounds.add_argument('--kind', choices=['GL', 'GU'], required=True)
    p_bounds.add_argument('--a', type=int, required=True)
    p_bounds.add_argument('--q', type=int, required=True)

    args = parser.parse_args(argv)

    if args.command == 'bounds':
        try:
            result = gl_gu_report(args.a, args.q, args.kind)
        except ValueError as e:
            print(json.dumps({'error': str(e)}))
            sys.exit(EXIT_INPUT_ERROR)
        print(json.dumps(result, indent=2))
        sys.exit(0 if result['holds'] else EXIT_CHECK_FAILED)

    cases, errors = load_cases(args.cases_file)
    if errors:
        print(json.dumps({'error': errors}))
        sys.exit(EXIT_INPUT_ERROR)

    if args.command == 'all':
        result = run_cases(cases, list(cases), q_max=args.q_max, jobs=args.jobs)
        print(json.dumps(result, indent=2))
        sys.exit(0 if result['all_match_expected'] else EXIT_CHECK_FAILED)

    if args.case not in cases:
        print(json.dumps({'error': f"Unknown case '{args.case}'", 'available': sorted(cases)}))
        sys.exit(EXIT_INPUT_ERROR)

    if args.command == 'verify-cert':
        result = verify_cert(cases[args.case], seed=args.seed)
        print(json.dumps(result, indent=2))
        sys.exit(0 if result['status'] != 'fail' else EXIT_CHECK_FAILED)

    result = run_case(cases[args.case], q_max=args.q_max, jobs=args.jobs)
    print(json.dumps(result, indent=2))
    sys.exit(0 if result['matches_expected'] else EXIT_CHECK_FAILED)


if __name__ == '__main__':
    main()
