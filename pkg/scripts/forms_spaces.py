#!/usr/bin/env python3
"""
Forms on V = F^n and the linear maps that preserve them.

A FormSpec is alternating (Gram matrix B, k(x,y) = x B y^T), Hermitian
(H(x,y) = x B conj(y)^T over GF(q^2)) or quadratic (upper-triangular
coefficients of Q). The polar form of a quadratic form is
f(x,y) = Q(x+y) - Q(x) - Q(y) in every characteristic.

Maps act on column vectors: (Mx)_i = sum_j M_ij x_j.

Usage:
    python forms_spaces.py <family> <q>

Output (JSON):
    {
        "kind": "alternating",
        "dim": 4,
        "field_order": 3,
        "isotropic_points": 40
    }
"""

import argparse
import json
import sys
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple

from finite_field import FieldElement, FiniteField, field_of_order


Vector = Tuple[FieldElement, ...]
Matrix = Tuple[Tuple[FieldElement, ...], ...]

KINDS = ('alternating', 'quadratic', 'hermitian')


# ---------------------------------------------------------------------------
# Vectors and matrices over a finite field
# ---------------------------------------------------------------------------

def basis_vector(F: FiniteField, n: int, i: int) -> Vector:
    return tuple(F.one if j == i else F.zero for j in range(n))


def identity_matrix(F: FiniteField, n: int) -> Matrix:
    return tuple(basis_vector(F, n, i) for i in range(n))


def vector_key(vec: Sequence[FieldElement]) -> Tuple[int, ...]:
    """Integer key used for ordering and lookup."""
    return tuple(x.index for x in vec)


def normalize(vec: Sequence[FieldElement]) -> Vector:
    """Scale so the first nonzero coordinate is 1."""
    for x in vec:
        if not x.is_zero():
            inv = x.inverse()
            return tuple(c * inv for c in vec)
    raise ValueError("The zero vector does not span a projective point")


def row_reduce(rows: Sequence[Sequence[FieldElement]], F: FiniteField) -> Tuple[List[List[FieldElement]], List[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence[FieldElement]], F: FiniteField) -> List[Vector]:
    """Basis of {x : Mx = 0}."""
    reduced, pivots = row_reduce(rows, F)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [F.zero] * ncols
        vec[fc] = F.one
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(tuple(vec))
    return basis


def rank(rows: Sequence[Sequence[FieldElement]], F: FiniteField) -> int:
    return len(row_reduce(rows, F)[1])


def span_vectors(basis: Sequence[Vector], F: FiniteField) -> List[Vector]:
    """Every nonzero vector of the span (small spans only)."""
    if not basis:
        return []
    n = len(basis[0])
    out = []
    for coeffs in product(F.elements(), repeat=len(basis)):
        if all(c.is_zero() for c in coeffs):
            continue
        vec = [F.zero] * n
        for c, b in zip(coeffs, basis):
            if not c.is_zero():
                vec = [v + c * x for v, x in zip(vec, b)]
        out.append(tuple(vec))
    return out


# ---------------------------------------------------------------------------
# Projective points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectivePoint:
    """A 1-space, stored by its normalized representative."""
    coords: Vector

    def __post_init__(self):
        if all(x.is_zero() for x in self.coords):
            raise ValueError("The zero vector does not span a projective point")
        normalized = normalize(self.coords)
        if vector_key(normalized) != vector_key(self.coords):
            object.__setattr__(self, 'coords', normalized)

    @property
    def key(self) -> Tuple[int, ...]:
        return vector_key(self.coords)

    def to_json(self) -> List[List[int]]:
        return [list(x.coeffs) for x in self.coords]


def projective_points(F: FiniteField, n: int) -> List[ProjectivePoint]:
    """All points of PG(n-1, F), sorted lexicographically on normalized coordinates."""
    elements = F.elements()
    points = []
    for lead in range(n):
        head = [F.zero] * lead + [F.one]
        for tail in product(elements, repeat=n - lead - 1):
            points.append(ProjectivePoint(tuple(head) + tuple(tail)))
    points.sort(key=lambda pt: pt.key)
    return points


# ---------------------------------------------------------------------------
# Forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormSpec:
    """Nondegenerate alternating, quadratic or Hermitian form on F^dim.

    `coefficients` is the Gram matrix for alternating/Hermitian kinds and the
    upper-triangular coefficient matrix of Q for the quadratic kind. `q` is
    the order of the fixed field of conjugation (Hermitian kind only).
    """
    kind: str
    dim: int
    field: FiniteField
    coefficients: Matrix
    q: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown form kind '{self.kind}' (expected one of {', '.join(KINDS)})")
        if len(self.coefficients) != self.dim or any(len(r) != self.dim for r in self.coefficients):
            raise ValueError(f"Coefficient matrix must be {self.dim}x{self.dim}")
        if self.kind == 'hermitian' and (self.q is None or self.q * self.q != self.field.order):
            raise ValueError(f"Hermitian forms need GF(q^2); got {self.field} with q={self.q}")
        terms = tuple((i, j, c) for i, row in enumerate(self.coefficients)
                      for j, c in enumerate(row) if not c.is_zero())
        object.__setattr__(self, '_terms', terms)
        self._check_shape()
        self._check_nondegenerate()

    def _check_shape(self):
        B = self.coefficients
        n = self.dim
        if self.kind == 'alternating':
            for i in range(n):
                if not B[i][i].is_zero():
                    raise ValueError(f"Alternating Gram matrix has nonzero diagonal entry at {i}")
                for j in range(n):
                    if B[j][i] != -B[i][j]:
                        raise ValueError(f"Alternating Gram matrix is not skew at ({i},{j})")
        elif self.kind == 'hermitian':
            for i in range(n):
                for j in range(n):
                    if B[j][i] != B[i][j] ** self.q:
                        raise ValueError(f"Hermitian Gram matrix fails B_ji = B_ij^q at ({i},{j})")
        else:
            for i in range(n):
                for j in range(i):
                    if not B[i][j].is_zero():
                        raise ValueError("Quadratic coefficients must be upper triangular")

    def _check_nondegenerate(self):
        F = self.field
        n = self.dim
        if self.kind != 'quadratic':
            if rank(self.coefficients, F) != n:
                raise ValueError(f"Degenerate {self.kind} form: Gram matrix is singular")
            return
        # singular radical must be trivial; in even characteristic the polar
        # form of Q(4,q) has a one-dimensional nonsingular radical
        basis = [basis_vector(F, n, i) for i in range(n)]
        gram = [[eval_form(self, x, y, polar=True) for y in basis] for x in basis]
        radical = nullspace(gram, F)
        for r in span_vectors(radical, F):
            if eval_form(self, r).is_zero():
                raise ValueError(f"Degenerate quadratic form: singular radical vector {[str(c) for c in r]}")

    def sigma(self, x: FieldElement) -> FieldElement:
        """Companion automorphism: conjugation for Hermitian forms, identity otherwise."""
        return x ** self.q if self.kind == 'hermitian' else x

    @property
    def basis(self) -> List[Vector]:
        return [basis_vector(self.field, self.dim, i) for i in range(self.dim)]


def _check_dim(form: FormSpec, vec) -> None:
    if len(vec) != form.dim:
        raise ValueError(f"Vector of length {len(vec)} does not match form dimension {form.dim}")


def eval_form(form: FormSpec, x: Sequence[FieldElement], y: Optional[Sequence[FieldElement]] = None,
              polar: bool = False) -> FieldElement:
    """Value of the form.

    Alternating/Hermitian: form(x, y), y required. Quadratic: Q(x), or the
    polar form f(x, y) when polar=True.
    """
    _check_dim(form, x)
    F = form.field
    if form.kind == 'quadratic':
        if y is None:
            if polar:
                raise ValueError("Polar form needs two vectors")
            total = F.zero
            for i, j, c in form._terms:
                if not x[i].is_zero() and not x[j].is_zero():
                    total = total + c * x[i] * x[j]
            return total
        if not polar:
            raise ValueError("Quadratic forms take one vector; pass polar=True for f(x, y)")
        _check_dim(form, y)
        xy = tuple(a + b for a, b in zip(x, y))
        return eval_form(form, xy) - eval_form(form, x) - eval_form(form, y)

    if y is None:
        raise ValueError(f"{form.kind.capitalize()} forms need two vectors")
    _check_dim(form, y)
    total = F.zero
    hermitian = form.kind == 'hermitian'
    for i, j, c in form._terms:
        if x[i].is_zero() or y[j].is_zero():
            continue
        yj = y[j] ** form.q if hermitian else y[j]
        total = total + x[i] * c * yj
    return total


def bilinear(form: FormSpec, x, y) -> FieldElement:
    """k(x,y), H(x,y) or the polar form f(x,y), whichever the kind calls for."""
    if form.kind == 'quadratic':
        return eval_form(form, x, y, polar=True)
    return eval_form(form, x, y)


def is_isotropic(form: FormSpec, pt) -> bool:
    """Q(x) = 0 or form(x, x) = 0; pt may be a ProjectivePoint or a vector."""
    x = pt.coords if isinstance(pt, ProjectivePoint) else tuple(pt)
    if form.kind == 'quadratic':
        return eval_form(form, x).is_zero()
    return eval_form(form, x, x).is_zero()


def _matrix(F: FiniteField, entries: dict, n: int) -> Matrix:
    rows = [[F.zero] * n for _ in range(n)]
    for (i, j), value in entries.items():
        rows[i][j] = value
    return tuple(tuple(r) for r in rows)


def alternating_form(F: FiniteField) -> FormSpec:
    """k(x,y) = x1y2 - x2y1 + x3y4 - x4y3 on F^4."""
    one = F.one
    B = _matrix(F, {(0, 1): one, (1, 0): -one, (2, 3): one, (3, 2): -one}, 4)
    return FormSpec('alternating', 4, F, B)


def parabolic_form(F: FiniteField) -> FormSpec:
    """Q(x) = x1x2 + x3x4 + x5^2 on F^5."""
    one = F.one
    C = _matrix(F, {(0, 1): one, (2, 3): one, (4, 4): one}, 5)
    return FormSpec('quadratic', 5, F, C)


def irreducible_quadratic(F: FiniteField) -> Tuple[FieldElement, FieldElement]:
    """First (a, b) in index order with X^2 + aX + b irreducible over F."""
    elements = F.elements()
    for a in elements:
        for b in elements[1:]:
            if all(not (x * x + a * x + b).is_zero() for x in elements):
                return a, b
    raise ValueError(f"No irreducible quadratic over {F}")


def elliptic_form(F: FiniteField) -> FormSpec:
    """Q(x) = x1x2 + x3x4 + x5^2 + a x5x6 + b x6^2 on F^6, X^2+aX+b irreducible."""
    one = F.one
    a, b = irreducible_quadratic(F)
    C = _matrix(F, {(0, 1): one, (2, 3): one, (4, 4): one, (4, 5): a, (5, 5): b}, 6)
    return FormSpec('quadratic', 6, F, C)


def hermitian_form(F: FiniteField, q: int, n: int = 4) -> FormSpec:
    """H(x,y) = x1y2^q + x2y1^q + x3y4^q + x4y3^q (+ x5y5^q when n = 5)."""
    if n not in (4, 5):
        raise ValueError(f"Hermitian forms are provided in dimension 4 or 5, not {n}")
    one = F.one
    entries = {(0, 1): one, (1, 0): one, (2, 3): one, (3, 2): one}
    if n == 5:
        entries[(4, 4)] = one
    return FormSpec('hermitian', n, F, _matrix(F, entries, n), q=q)


# ---------------------------------------------------------------------------
# Linear maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearMap:
    """Invertible n x n matrix acting on column vectors."""
    matrix: Matrix
    field: FiniteField

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise ValueError("Linear maps need a square matrix")
        if rank(self.matrix, self.field) != n:
            raise ValueError("Matrix is not invertible")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, x: Sequence[FieldElement]) -> Vector:
        if len(x) != self.dim:
            raise ValueError(f"Vector of length {len(x)} does not match map dimension {self.dim}")
        zero = self.field.zero
        out = []
        for row in self.matrix:
            total = zero
            for m, xi in zip(row, x):
                if not m.is_zero() and not xi.is_zero():
                    total = total + m * xi
            out.append(total)
        return tuple(out)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other."""
        n = self.dim
        zero = self.field.zero
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                total = zero
                for k in range(n):
                    total = total + self.matrix[i][k] * other.matrix[k][j]
                row.append(total)
            rows.append(tuple(row))
        return LinearMap(tuple(rows), self.field)

    def is_identity(self) -> bool:
        return self.matrix == identity_matrix(self.field, self.dim)

    @classmethod
    def identity(cls, F: FiniteField, n: int) -> "LinearMap":
        return cls(identity_matrix(F, n), F)

    @classmethod
    def diagonal(cls, entries: Sequence[FieldElement]) -> "LinearMap":
        F = entries[0].owner
        n = len(entries)
        return cls(_matrix(F, {(i, i): e for i, e in enumerate(entries)}, n), F)


def preserves_form(form: FormSpec, g: LinearMap) -> bool:
    """Isometry test on basis vectors (enough for sesquilinear and quadratic forms)."""
    if g.dim != form.dim or g.field != form.field:
        return False
    basis = form.basis
    images = [g.apply(e) for e in basis]
    if form.kind == 'quadratic':
        for i in range(form.dim):
            if eval_form(form, images[i]) != eval_form(form, basis[i]):
                return False
            for j in range(i + 1, form.dim):
                if bilinear(form, images[i], images[j]) != bilinear(form, basis[i], basis[j]):
                    return False
        return True
    return all(eval_form(form, images[i], images[j]) == form.coefficients[i][j]
               for i in range(form.dim) for j in range(form.dim))


def symmetry_generator_ta(form: FormSpec, a: FieldElement) -> LinearMap:
    """t_a(x) = x + a form(x, e1) e1, a symmetry about <e1>.

    For Hermitian forms this is e2 -> e2 + a e1 and needs a + a^q = 0.
    """
    if form.kind == 'quadratic':
        raise ValueError("Quadratic forms have no t_a family about <e1>")
    F = form.field
    if a.owner != F:
        raise ValueError(f"Scalar from {a.owner} used with a form over {F}")
    if form.kind == 'hermitian' and not (a + a ** form.q).is_zero():
        raise ValueError(f"Hermitian symmetry parameter must satisfy a + a^q = 0, got {a}")
    n = form.dim
    e1 = basis_vector(F, n, 0)
    functional = [eval_form(form, basis_vector(F, n, j), e1) for j in range(n)]
    rows = [list(r) for r in identity_matrix(F, n)]
    for j in range(n):
        rows[0][j] = rows[0][j] + a * functional[j]
    return LinearMap(tuple(tuple(r) for r in rows), F)


def transvection_tau(form: FormSpec, alpha: FieldElement, u: Sequence[FieldElement],
                     v: Sequence[FieldElement]) -> LinearMap:
    """x -> x + alpha k(x,u) v - alpha^s k(v,x)^s u.

    k is the form (polar form for quadratic kinds) and s its companion
    automorphism. <u, v> must be totally isotropic (totally singular).
    """
    F = form.field
    u, v = tuple(u), tuple(v)
    _check_dim(form, u)
    _check_dim(form, v)
    if all(x.is_zero() for x in u) or all(x.is_zero() for x in v):
        raise ValueError("Transvection vectors must be nonzero")
    if form.kind == 'quadratic':
        if vector_key(normalize(u)) == vector_key(normalize(v)):
            raise ValueError("Siegel transformations need <u> != <v>")
        if not (eval_form(form, u).is_zero() and eval_form(form, v).is_zero()):
            raise ValueError("Siegel transformations need singular u and v")
    elif not (is_isotropic(form, u) and is_isotropic(form, v)):
        raise ValueError("Transvection vectors must be isotropic")
    if not bilinear(form, u, v).is_zero():
        raise ValueError("u and v must span a totally isotropic subspace")

    n = form.dim
    alpha_s = form.sigma(alpha)
    rows = [list(r) for r in identity_matrix(F, n)]
    for j in range(n):
        ej = basis_vector(F, n, j)
        left = alpha * bilinear(form, ej, u)
        right = alpha_s * form.sigma(bilinear(form, v, ej))
        for i in range(n):
            rows[i][j] = rows[i][j] + left * v[i] - right * u[i]
    return LinearMap(tuple(tuple(r) for r in rows), F)


def main():
    from gq_constants import get_family_order

    parser = argparse.ArgumentParser(description='Describe the form of a classical family')
    parser.add_argument('family', help='W3, Q4, Qminus5, H3 or H4')
    parser.add_argument('q', type=int, help='Prime power q')
    args = parser.parse_args()

    try:
        info = get_family_order(args.family, args.q)
        F = field_of_order(info['field_order'])
        form = {
            'W3': lambda: alternating_form(F),
            'Q4': lambda: parabolic_form(F),
            'Qminus5': lambda: elliptic_form(F),
            'H3': lambda: hermitian_form(F, args.q, 4),
            'H4': lambda: hermitian_form(F, args.q, 5),
        }[args.family]()
    except ValueError as e:
        print(json.dumps({'error': str(e)}))
        sys.exit(1)

    count = sum(1 for pt in projective_points(F, form.dim) if is_isotropic(form, pt))
    print(json.dumps({
        'kind': form.kind,
        'dim': form.dim,
        'field_order': F.order,
        'isotropic_points': count,
    }, indent=2))


if __name__ == '__main__':
    main()
