#!/usr/bin/env python3
"""
The five classical generalized quadrangles built from explicit forms.

    W3       W(3,q)     alternating form on GF(q)^4        order (q, q)
    Q4       Q(4,q)     parabolic quadric in GF(q)^5       order (q, q)
    Qminus5  Q-(5,q)    elliptic quadric in GF(q)^6        order (q, q^2)
    H3       H(3,q^2)   Hermitian form on GF(q^2)^4        order (q^2, q)
    H4       H(4,q^2)   Hermitian form on GF(q^2)^5        order (q^2, q^3)

Points are the isotropic (singular) projective points in lexicographic
order of their normalized coordinates; lines are the totally isotropic
(singular) 2-spaces, each stored as its projective points.
Not meant to be called directly; `gq.py build` is the command-line entry.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from finite_field import FieldElement, field_of_order, prime_power
from forms_spaces import (
    FormSpec, ProjectivePoint, Vector, alternating_form, bilinear, elliptic_form,
    hermitian_form, is_isotropic, normalize, parabolic_form, projective_points, vector_key,
)
from gq_constants import FAMILIES, MAX_POINTS, get_family_order
from gq_core import GeneralizedQuadrangle, verify_gq
from gq_utils import GeometryError


@dataclass(frozen=True, eq=False)
class ClassicalGQ:
    """A built classical GQ together with its form and point coordinates."""
    family: str
    q: int
    form: FormSpec
    gq: GeneralizedQuadrangle
    coordinates: Tuple[ProjectivePoint, ...]
    _lookup: Dict[Tuple[int, ...], int] = field(default_factory=dict, repr=False)

    def point_of(self, vec: Sequence[FieldElement]) -> int:
        """Index of <vec>; raises when <vec> is not a point of the geometry."""
        key = vector_key(normalize(vec))
        if key not in self._lookup:
            raise ValueError(f"<{','.join(str(x) for x in vec)}> is not a point of {self.family}({self.q})")
        return self._lookup[key]

    def vector(self, index: int) -> Vector:
        return self.coordinates[index].coords


def family_warnings(family: str, q: int) -> List[str]:
    info = get_family_order(family, q)
    if info['odd_q_only'] and q % 2 == 0:
        return [f"{info['title']} with even q={q}: no central symmetries expected for even q not asserted"]
    return []


def _make_form(family: str, q: int) -> FormSpec:
    info = get_family_order(family, q)
    F = field_of_order(info['field_order'])
    if family == 'W3':
        return alternating_form(F)
    if family == 'Q4':
        return parabolic_form(F)
    if family == 'Qminus5':
        return elliptic_form(F)
    return hermitian_form(F, q, info['dim'])


def build(family: str, q: int, force: bool = False, max_points: int = MAX_POINTS) -> ClassicalGQ:
    """Construct and verify a classical GQ."""
    if family not in FAMILIES:
        raise ValueError(f"Unknown family '{family}' (expected one of {', '.join(FAMILIES)})")
    prime_power(q)
    info = get_family_order(family, q)
    if info['points'] > max_points and not force:
        raise ValueError(f"{info['title']} at q={q} has {info['points']} points, above the limit of "
                         f"{max_points}; pass force to build it anyway")

    form = _make_form(family, q)
    F = form.field
    points = [pt for pt in projective_points(F, form.dim) if is_isotropic(form, pt)]
    lookup = {pt.key: i for i, pt in enumerate(points)}
    n = len(points)

    scalars = F.elements()
    covered = np.zeros((n, n), dtype=bool)
    lines: List[Tuple[int, ...]] = []
    for i in range(n):
        x = points[i].coords
        for j in range(i + 1, n):
            if covered[i, j]:
                continue
            y = points[j].coords
            if not bilinear(form, x, y).is_zero():
                continue
            members = {i}
            for a in scalars:
                members.add(lookup[vector_key(normalize(tuple(a * xi + yi for xi, yi in zip(x, y))))])
            line = tuple(sorted(members))
            idx = np.array(line)
            covered[np.ix_(idx, idx)] = True
            lines.append(line)

    gq = verify_gq([pt.to_json() for pt in points], lines, family=family, q=q)
    if gq.order != (info['s'], info['t']):
        raise GeometryError(f"{info['title']} built with order {gq.order}, expected ({info['s']},{info['t']})")
    return ClassicalGQ(family=family, q=q, form=form, gq=gq, coordinates=tuple(points), _lookup=lookup)


def canonical_basis_points(built: ClassicalGQ, which: Optional[Sequence[int]] = None) -> List[int]:
    """Indices of <e_1>, <e_2>, ... in the geometry.

    With `which` (1-based basis positions) every requested point must be
    isotropic; without it, the isotropic basis points are returned.
    """
    F = built.form.field
    n = built.form.dim
    positions = list(which) if which is not None else list(range(1, n + 1))
    out = []
    for k in positions:
        if not 1 <= k <= n:
            raise ValueError(f"Basis position {k} outside 1..{n}")
        e = tuple(F.one if j == k - 1 else F.zero for j in range(n))
        if not is_isotropic(built.form, e):
            if which is not None:
                raise ValueError(f"<e{k}> is not isotropic for {built.family}")
            continue
        out.append(built.point_of(e))
    return out


def hyperbolic_line_by_subspace(built: ClassicalGQ, x: int, y: int) -> FrozenSet[int]:
    """Isotropic points of the 2-space <x, y>, by direct enumeration."""
    F = built.form.field
    vx, vy = built.vector(x), built.vector(y)
    members = set()
    candidates = [vx] + [tuple(a * xi + yi for xi, yi in zip(vx, vy)) for a in F.elements()]
    for vec in candidates:
        if is_isotropic(built.form, vec):
            members.add(built.point_of(vec))
    return frozenset(members)
