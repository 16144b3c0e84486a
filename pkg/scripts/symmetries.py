#!/usr/bin/env python3
"""
Collineations, central symmetries and the group-action checks built on them.

Collineations act on the right: x^(gh) = (x^g)^h, so `g.then(h)` applies g
first. Permutation arrays use perm[x] = image of x.

full_symmetry_group(gq, p) finds every collineation fixing p^perp pointwise.
Any such map sends a point z off p^perp into the hyperbolic line {p,z}^perp-perp,
and once the image of one point z0 is chosen the images of all other points
are forced line by line through their projections onto p^perp. The search
therefore tries each candidate image of z0 and keeps those that extend to a
collineation; the node budget counts forced assignments.
Not meant to be called directly; `gq.py symmetries` and `gq.py report` are
the command-line entries.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from classical_gq import ClassicalGQ
from forms_spaces import LinearMap, preserves_form
from gq_constants import (
    DEFAULT_NODE_BUDGET, DEFAULT_SAMPLE_SIZE, DEFAULT_SEED, EXHAUSTIVE_POINT_LIMIT, GROUP_ORDER_LIMIT,
)
from gq_core import GeneralizedQuadrangle, perp, span
from gq_utils import GeometryError, SearchBudgetExceeded, check_result


# ---------------------------------------------------------------------------
# Collineations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Collineation:
    """Point permutation plus the induced line permutation; equality is on points."""
    point_perm: Tuple[int, ...]
    line_perm: Tuple[int, ...] = field(compare=False, repr=False)

    @classmethod
    def identity(cls, gq: GeneralizedQuadrangle) -> "Collineation":
        return cls(tuple(range(gq.num_points)), tuple(range(gq.num_lines)))

    def then(self, other: "Collineation") -> "Collineation":
        return Collineation(tuple(other.point_perm[x] for x in self.point_perm),
                            tuple(other.line_perm[li] for li in self.line_perm))

    def inverse(self) -> "Collineation":
        points = [0] * len(self.point_perm)
        for x, y in enumerate(self.point_perm):
            points[y] = x
        lines = [0] * len(self.line_perm)
        for a, b in enumerate(self.line_perm):
            lines[b] = a
        return Collineation(tuple(points), tuple(lines))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.point_perm))

    def fixed_points(self) -> List[int]:
        return [x for x, y in enumerate(self.point_perm) if x == y]

    def fixed_lines(self) -> List[int]:
        return [a for a, b in enumerate(self.line_perm) if a == b]

    def order(self) -> int:
        k, g = 1, self
        while not g.is_identity():
            g = g.then(self)
            k += 1
        return k


def _line_lookup(gq: GeneralizedQuadrangle) -> Dict[Tuple[int, ...], int]:
    return {line: i for i, line in enumerate(gq.lines)}


def collineation_from_point_map(gq: GeneralizedQuadrangle, point_perm: Sequence[int]) -> Collineation:
    """Wrap a point permutation, checking that every line maps onto a line."""
    perm = tuple(int(x) for x in point_perm)
    n = gq.num_points
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise GeometryError("Point map is not a permutation", {'length': len(perm)})
    line_perm = []
    for li, line in enumerate(gq.lines):
        image = tuple(sorted(perm[x] for x in line))
        target = gq.line_through(image[0], image[1])
        if target is None or gq.lines[target] != image:
            raise GeometryError("Point map does not preserve incidence", {'line': list(line), 'image': list(image)})
        line_perm.append(target)
    return Collineation(perm, tuple(line_perm))


def lift_matrix(built: ClassicalGQ, M: LinearMap) -> Collineation:
    """Permutation induced by a linear isometry of the form."""
    form = built.form
    if M.dim != form.dim or M.field != form.field:
        raise ValueError(f"Matrix over {M.field} of size {M.dim} does not act on the {form.kind} form space")
    if not preserves_form(form, M):
        raise ValueError("Matrix is not an isometry of the form")
    image = []
    for i in range(built.gq.num_points):
        try:
            image.append(built.point_of(M.apply(built.vector(i))))
        except ValueError:
            raise ValueError(f"Matrix moves point {i} off the point set") from None
    return collineation_from_point_map(built.gq, image)


def _perm_arrays(elements: Iterable[Any]) -> List[np.ndarray]:
    out = []
    for g in elements:
        perm = g.point_perm if isinstance(g, Collineation) else g
        out.append(np.asarray(perm, dtype=np.int32))
    return out


# ---------------------------------------------------------------------------
# Permutation group helpers
# ---------------------------------------------------------------------------

def generate_group(generators: Iterable[Any], n: int, limit: int = GROUP_ORDER_LIMIT) -> np.ndarray:
    """All elements of <generators> as rows, sorted lexicographically."""
    gens = _perm_arrays(generators)
    identity = np.arange(n, dtype=np.int32)
    seen = {identity.tobytes()}
    elements = [identity]
    frontier = identity[None, :]
    while len(frontier):
        fresh = []
        for g in gens:
            for row in g[frontier]:
                key = row.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                fresh.append(row)
                elements.append(row)
                if len(elements) > limit:
                    raise SearchBudgetExceeded(f"Group generation exceeded {limit} elements")
        frontier = np.array(fresh, dtype=np.int32) if fresh else np.empty((0, n), dtype=np.int32)
    table = np.array(elements, dtype=np.int32)
    return table[np.lexsort(table.T[::-1])]


def orbit(generators: Iterable[Any], start: int) -> FrozenSet[int]:
    gens = _perm_arrays(generators)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = int(g[x])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def _minimal_block(gens: List[np.ndarray], n: int, a: int, b: int) -> List[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parent[find(b)] = find(a)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        for g in gens:
            u, v = find(int(g[x])), find(int(g[y]))
            if u != v:
                parent[v] = u
                queue.append((u, v))
    root = find(a)
    return [x for x in range(n) if find(x) == root]


def is_primitive(generators: Iterable[Any], n: int) -> Tuple[bool, Optional[Dict[str, Any]]]:
    """Transitivity plus a minimal-block search from point 0."""
    gens = _perm_arrays(generators)
    reach = orbit(gens, 0)
    if len(reach) != n:
        return False, {'reason': 'intransitive', 'orbit_size': len(reach)}
    for b in range(1, n):
        block = _minimal_block(gens, n, 0, b)
        if len(block) < n:
            return False, {'reason': 'block', 'block': block}
    return True, None


# ---------------------------------------------------------------------------
# Central symmetries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryGroup:
    """The full group of symmetries about `center`, elements sorted by point permutation."""
    center: int
    elements: Tuple[Collineation, ...]
    nodes: int = field(default=0, compare=False)
    generated_order: Optional[int] = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def nontrivial(self) -> List[Collineation]:
        return [g for g in self.elements if not g.is_identity()]

    def validate(self, gq: GeneralizedQuadrangle) -> None:
        """Group axioms, pointwise fixing of center^perp, order | t and freeness off center^perp."""
        members = set(self.elements)
        p = self.center
        fixed = gq.collinearity[p]
        if Collineation.identity(gq) not in members:
            raise GeometryError("Symmetry group lacks the identity", {'center': p})
        for g in self.elements:
            if g.inverse() not in members:
                raise GeometryError("Symmetry group is not closed under inverses", {'center': p})
            for h in self.elements:
                if g.then(h) not in members:
                    raise GeometryError("Symmetry group is not closed under composition", {'center': p})
            moved = [x for x in np.flatnonzero(fixed) if g.point_perm[x] != x]
            if moved:
                raise GeometryError("Element moves a point of center^perp", {'center': p, 'point': int(moved[0])})
            if not g.is_identity():
                still = [x for x in np.flatnonzero(~fixed) if g.point_perm[x] == x]
                if still:
                    raise GeometryError("Nonidentity symmetry fixes a point off center^perp",
                                        {'center': p, 'point': int(still[0])})
        if gq.t % self.order:
            raise GeometryError("Symmetry group order does not divide t", {'center': p, 'order': self.order, 't': gq.t})


def is_central_symmetry(gq: GeneralizedQuadrangle, g: Collineation, p: int) -> bool:
    """True iff g fixes p^perp pointwise; then also checks the lines through p and freeness."""
    gq.check_point(p)
    fixed = gq.collinearity[p]
    if any(g.point_perm[x] != x for x in np.flatnonzero(fixed)):
        return False
    moved_line = next((li for li in gq.lines_through[p] if g.line_perm[li] != li), None)
    if moved_line is not None:
        raise GeometryError("Symmetry fixes p^perp but moves a line through p", {'center': p, 'line': moved_line})
    if not g.is_identity():
        still = next((int(x) for x in np.flatnonzero(~fixed) if g.point_perm[x] == x), None)
        if still is not None:
            raise GeometryError("Nonidentity symmetry fixes a point off p^perp", {'center': p, 'point': still})
    return True


def _hyperbolic_lines_from(gq: GeneralizedQuadrangle, p: int) -> Dict[int, FrozenSet[int]]:
    A = gq.collinearity
    out = {}
    for y in np.flatnonzero(~A[p]):
        tr = A[p] & A[y]
        out[int(y)] = frozenset(int(z) for z in np.flatnonzero(A[:, tr].all(axis=1)))
    return out


def _anchors(gq: GeneralizedQuadrangle, p: int) -> Dict[int, int]:
    """For each line missing p, its unique point collinear with p."""
    out = {}
    row = gq.collinearity[p]
    for li, line in enumerate(gq.lines):
        if p in line:
            continue
        hits = [x for x in line if row[x]]
        out[li] = hits[0]
    return out


def _propagate(gq: GeneralizedQuadrangle, fixed: np.ndarray, z0: int, w: int,
               hyp: Dict[int, FrozenSet[int]], anchors: Dict[int, int], budget: List[int],
               node_budget: int) -> Optional[Tuple[int, ...]]:
    n = gq.num_points
    image = [-1] * n
    for x in np.flatnonzero(fixed):
        image[x] = int(x)
    image[z0] = w
    queue = deque([z0])
    while queue:
        x = queue.popleft()
        gx = image[x]
        for li in gq.lines_through[x]:
            a = anchors[li]
            gl = gq.line_through(gx, a)
            if gl is None:
                return None
            target = gq.lines[gl]
            for y in gq.lines[li]:
                if y == a or y == x:
                    continue
                if image[y] >= 0:
                    if not gq.incidence[image[y], gl]:
                        return None
                    continue
                hits = [z for z in target if z in hyp[y]]
                if len(hits) != 1:
                    return None
                image[y] = hits[0]
                budget[0] += 1
                if budget[0] > node_budget:
                    raise SearchBudgetExceeded(f"Symmetry search exceeded {node_budget} nodes")
                queue.append(y)
    if -1 in image:
        raise GeometryError("Points off p^perp are not connected by collinearity", {'unreached': image.index(-1)})
    if len(set(image)) != n:
        return None
    return tuple(image)


def full_symmetry_group(gq: GeneralizedQuadrangle, p: int, node_budget: int = DEFAULT_NODE_BUDGET,
                        generators: Sequence[Collineation] = ()) -> SymmetryGroup:
    """Every collineation fixing p^perp pointwise.

    When `generators` (e.g. lifted t_a maps) are given, their closure is
    computed first and must lie inside the searched group.
    """
    gq.check_point(p)
    fixed = gq.collinearity[p]
    off = np.flatnonzero(~fixed)
    z0 = int(off[0])
    hyp = _hyperbolic_lines_from(gq, p)
    anchors = _anchors(gq, p)
    budget = [0]

    found = []
    for w in sorted(hyp[z0] - {p}):
        perm = _propagate(gq, fixed, z0, w, hyp, anchors, budget, node_budget)
        if perm is None:
            continue
        try:
            found.append(collineation_from_point_map(gq, perm))
        except GeometryError:
            continue
    found.sort(key=lambda g: g.point_perm)

    generated_order = None
    if generators:
        closure = generate_group(generators, gq.num_points)
        generated_order = len(closure)
        searched = {g.point_perm for g in found}
        missing = [row for row in closure if tuple(int(x) for x in row) not in searched]
        if missing:
            raise GeometryError("Generator closure is not contained in the searched group", {'center': p})

    group = SymmetryGroup(center=p, elements=tuple(found), nodes=budget[0], generated_order=generated_order)
    group.validate(gq)
    return group


def symmetry_groups_at_all_points(gq: GeneralizedQuadrangle,
                                  node_budget: int = DEFAULT_NODE_BUDGET) -> List[SymmetryGroup]:
    return [full_symmetry_group(gq, p, node_budget) for p in range(gq.num_points)]


def summarize_symmetry_groups(gq: GeneralizedQuadrangle, groups: Sequence[SymmetryGroup]) -> Dict[str, Any]:
    orders = sorted({g.order for g in groups})
    ok = len(orders) == 1 and gq.t % orders[0] == 0
    return check_result('symmetries', ok, {'orders': orders},
                        orders=orders, trivial=orders == [1], nodes=sum(g.nodes for g in groups))


# ---------------------------------------------------------------------------
# Fixed substructures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedSubstructure:
    points: Tuple[int, ...]
    lines: Tuple[int, ...]
    kind: str
    apex: Optional[int] = None
    axis: Optional[int] = None
    order: Optional[Tuple[int, int]] = None


def classify_fixed(gq: GeneralizedQuadrangle, g: Collineation) -> FixedSubstructure:
    """Fixed points and lines of g, typed A, B, C, C-dual, D, D-dual or E."""
    P = tuple(g.fixed_points())
    L = tuple(g.fixed_lines())
    Pset = set(P)

    if not L:
        if any(gq.are_collinear(x, y) for i, x in enumerate(P) for y in P[i + 1:]):
            raise GeometryError("Fixed points are collinear but no line is fixed", {'points': list(P)})
        return FixedSubstructure(P, L, 'A')
    if not P:
        if any(set(gq.lines[a]) & set(gq.lines[b]) for i, a in enumerate(L) for b in L[i + 1:]):
            raise GeometryError("Fixed lines meet but no point is fixed", {'lines': list(L)})
        return FixedSubstructure(P, L, 'B')

    for p in P:
        if all(gq.are_collinear(p, x) for x in P) and all(gq.on_line(p, li) for li in L):
            return FixedSubstructure(P, L, 'C', apex=p)
    for axis in L:
        axis_points = set(gq.lines[axis])
        if Pset <= axis_points and all(axis_points & set(gq.lines[li]) for li in L):
            return FixedSubstructure(P, L, 'C-dual', axis=axis)

    per_line = {len(Pset & set(gq.lines[li])) for li in L}
    per_point = {sum(1 for li in gq.lines_through[x] if li in set(L)) for x in P}
    if len(per_line) != 1 or len(per_point) != 1:
        raise GeometryError("Fixed structure matches no substructure type",
                            {'points_per_line': sorted(per_line), 'lines_per_point': sorted(per_point)})
    s_sub = per_line.pop() - 1
    t_sub = per_point.pop() - 1
    Lset = set(L)
    for x in P:
        for li in L:
            if gq.on_line(x, li):
                continue
            y = gq.projection(x, li)
            if y not in Pset or gq.line_through(x, y) not in Lset:
                raise GeometryError("Fixed structure is not closed under projection", {'point': x, 'line': li})
    if t_sub == 1:
        kind = 'D'
    elif s_sub == 1:
        kind = 'D-dual'
    else:
        kind = 'E'
    return FixedSubstructure(P, L, kind, order=(s_sub, t_sub))


# ---------------------------------------------------------------------------
# Homologies and linewise stabilizers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyGroup:
    centers: Tuple[int, int]
    elements: Tuple[Collineation, ...]
    free: bool
    witness: Optional[Dict[str, Any]] = None

    @property
    def order(self) -> int:
        return len(self.elements)


def _fixes_pencil(gq: GeneralizedQuadrangle, g: Collineation, x: int) -> bool:
    return all(g.line_perm[li] == li for li in gq.lines_through[x])


def homology_group(gq: GeneralizedQuadrangle, x: int, y: int,
                   candidates: Iterable[Collineation]) -> HomologyGroup:
    """Group generated by the candidates fixing every line through x and through y.

    Each nonidentity element must act freely on l minus {x, proj_l(y)} for
    every line l on x (and symmetrically on y).
    """
    if gq.are_collinear(x, y):
        raise ValueError("Homology centers must be noncollinear")
    kept = [g for g in candidates if _fixes_pencil(gq, g, x) and _fixes_pencil(gq, g, y)]
    table = generate_group(kept, gq.num_points) if kept else np.arange(gq.num_points, dtype=np.int32)[None, :]
    elements = tuple(collineation_from_point_map(gq, row) for row in table)

    witness = None
    for g in elements:
        if g.is_identity():
            continue
        for centre, other in ((x, y), (y, x)):
            for li in gq.lines_through[centre]:
                allowed = {centre, gq.projection(other, li)}
                still = [z for z in gq.lines[li] if z not in allowed and g.point_perm[z] == z]
                if still:
                    witness = {'line': li, 'point': still[0]}
                    break
            if witness:
                break
        if witness:
            break
    return HomologyGroup((x, y), elements, witness is None, witness)


def linewise_stabilizer(gq: GeneralizedQuadrangle, group: np.ndarray, u: int) -> np.ndarray:
    """Rows of `group` fixing every line through u."""
    mask = np.ones(len(group), dtype=bool)
    for li in gq.lines_through[u]:
        line = np.array(gq.lines[li])
        mask &= np.isin(group[:, line], line).all(axis=1)
    return group[mask]


# ---------------------------------------------------------------------------
# Property reports
# ---------------------------------------------------------------------------

def _all_generators(groups: Sequence[SymmetryGroup]) -> List[Collineation]:
    return [g for group in groups for g in group.nontrivial]


def _noncollinear_pairs(gq: GeneralizedQuadrangle, exhaustive: bool, rng: np.random.Generator,
                        sample_size: int) -> List[Tuple[int, int]]:
    n = gq.num_points
    if exhaustive:
        return [(int(x), int(y)) for x in range(n) for y in np.flatnonzero(~gq.collinearity[x])]
    pairs = []
    while len(pairs) < sample_size:
        x, y = (int(v) for v in rng.integers(0, n, size=2))
        if not gq.collinearity[x, y]:
            pairs.append((x, y))
    return pairs


def _point_sample(gq: GeneralizedQuadrangle, exhaustive: bool, rng: np.random.Generator, k: int = 8) -> List[int]:
    if exhaustive:
        return list(range(gq.num_points))
    return sorted(int(x) for x in rng.choice(gq.num_points, size=min(k, gq.num_points), replace=False))


def _check_e1(gq, groups, exhaustive, rng, sample_size):
    n = gq.num_points
    if exhaustive:
        pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
    else:
        pairs = []
        while len(pairs) < sample_size:
            x, y = sorted(int(v) for v in rng.integers(0, n, size=2))
            if x != y:
                pairs.append((x, y))
    identity = Collineation.identity(gq)
    for x, y in pairs:
        common = set(groups[x].elements) & set(groups[y].elements)
        if common != {identity}:
            return check_result('E1', False, {'points': [x, y], 'common_elements': len(common)}, pairs=len(pairs))
        commute = all(g.then(h) == h.then(g) for g in groups[x].nontrivial for h in groups[y].nontrivial)
        if commute != gq.are_collinear(x, y):
            return check_result('E1', False, {'points': [x, y], 'collinear': gq.are_collinear(x, y),
                                              'commute': commute}, pairs=len(pairs))
    return check_result('E1', True, pairs=len(pairs))


def _check_e2(gq, groups, exhaustive, rng):
    for p in _point_sample(gq, exhaustive, rng):
        pp = perp(gq, p)
        gens = [g for u in pp for g in groups[u].nontrivial]
        rest = sorted(pp - {p})
        reach = orbit(gens, rest[0])
        if reach != frozenset(rest):
            return check_result('E2', False, {'center': p, 'orbit_size': len(reach), 'expected': len(rest)})
        pencil = set(gq.lines_through[p])
        seen = {gq.lines_through[p][0]}
        queue = deque(seen)
        while queue:
            li = queue.popleft()
            for g in gens:
                lj = g.line_perm[li]
                if lj not in seen:
                    seen.add(lj)
                    queue.append(lj)
        if seen != pencil:
            return check_result('E2', False, {'center': p, 'line_orbit_size': len(seen), 'expected': len(pencil)})
    return check_result('E2', True)


def _pair_orbit_size(gens: List[np.ndarray], a: int, b: int) -> int:
    seen = {(a, b)}
    queue = deque(seen)
    while queue:
        x, y = queue.popleft()
        for g in gens:
            pair = (int(g[x]), int(g[y]))
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return len(seen)


def _check_e3_exhaustive(gq, group):
    target = (gq.s + 1) * gq.s
    for li, line in enumerate(gq.lines):
        pts = np.array(line)
        stab = group[np.isin(group[:, pts], pts).all(axis=1)]
        pairs = {(int(g[line[0]]), int(g[line[1]])) for g in stab}
        if len(pairs) != target:
            return check_result('E3', False, {'line': li, 'pair_orbit': len(pairs), 'expected': target},
                                mode='exhaustive', group_order=len(group))
    return check_result('E3', True, mode='exhaustive', group_order=len(group))


def _check_e3_sampled(gq, gens, rng, sample_size):
    lookup = _line_lookup(gq)
    base = gq.lines[0]
    base_arr = np.array(base)
    identity = np.arange(gq.num_points, dtype=np.int32)
    transversal = {0: identity}
    queue = deque([0])
    while queue:
        li = queue.popleft()
        u = transversal[li]
        for g in gens:
            image = lookup[tuple(sorted(int(x) for x in g[u[base_arr]]))]
            if image not in transversal:
                transversal[image] = g[u]
                queue.append(image)
    stabilizer = []
    for _ in range(sample_size):
        word = identity
        for k in rng.integers(0, len(gens), size=24):
            word = gens[k][word]
        image = lookup[tuple(sorted(int(x) for x in word[base_arr]))]
        back = np.argsort(transversal[image]).astype(np.int32)
        stabilizer.append(back[word])
    size = _pair_orbit_size(stabilizer, base[0], base[1])
    target = (gq.s + 1) * gq.s
    return check_result('E3', size == target, {'line': 0, 'pair_orbit': size, 'expected': target},
                        mode='sampled', samples=sample_size)


def check_E_properties(gq: GeneralizedQuadrangle, groups: Sequence[SymmetryGroup], seed: int = DEFAULT_SEED,
                       exhaustive_limit: int = EXHAUSTIVE_POINT_LIMIT,
                       sample_size: int = DEFAULT_SAMPLE_SIZE) -> Dict[str, Any]:
    """(E1), (E2), (E3), |span(x,y)| >= |E(x)| + 1 and the order facts."""
    rng = np.random.default_rng(seed)
    exhaustive = gq.num_points <= exhaustive_limit
    checks = []

    orders = {g.order for g in groups}
    checks.append(check_result('order_constant', len(orders) == 1, {'orders': sorted(orders)}))
    checks.append(check_result('order_divides_t', all(gq.t % o == 0 for o in orders), {'orders': sorted(orders)}))

    witness = None
    pairs = _noncollinear_pairs(gq, exhaustive, rng, sample_size)
    for x, y in pairs:
        if len(span(gq, x, y)) < groups[x].order + 1:
            witness = {'points': [x, y], 'span': len(span(gq, x, y)), 'group_order': groups[x].order}
            break
    checks.append(check_result('span_inequality', witness is None, witness, pairs=len(pairs)))

    if min(orders) == 1:
        for name in ('E1', 'E2', 'E3'):
            checks.append(check_result(name, None, reason='trivial symmetry groups'))
    else:
        checks.append(_check_e1(gq, groups, exhaustive, rng, sample_size))
        checks.append(_check_e2(gq, groups, exhaustive, rng))
        gens = _perm_arrays(_all_generators(groups))
        if exhaustive:
            try:
                checks.append(_check_e3_exhaustive(gq, generate_group(gens, gq.num_points)))
            except SearchBudgetExceeded:
                checks.append(_check_e3_sampled(gq, gens, rng, sample_size))
        else:
            checks.append(_check_e3_sampled(gq, gens, rng, sample_size))

    return {'mode': 'exhaustive' if exhaustive else 'sampled', 'seed': seed, 'checks': checks,
            'passed': all(c['status'] != 'fail' for c in checks)}


def check_orbit_lemmas(gq: GeneralizedQuadrangle, groups: Sequence[SymmetryGroup], seed: int = DEFAULT_SEED,
                       exhaustive_limit: int = EXHAUSTIVE_POINT_LIMIT,
                       sample_size: int = DEFAULT_SAMPLE_SIZE) -> Dict[str, Any]:
    """Cover lemma (v^g in span(u,v)), orbit lemma (v in the <E(u),E(v)>-orbit of u), primitivity."""
    rng = np.random.default_rng(seed)
    exhaustive = gq.num_points <= exhaustive_limit
    pairs = _noncollinear_pairs(gq, exhaustive, rng, sample_size)
    checks = []

    witness = None
    for u, v in pairs:
        hyper = span(gq, u, v)
        bad = next((g for g in groups[u].elements if g.point_perm[v] not in hyper), None)
        if bad is not None:
            witness = {'points': [u, v], 'image': bad.point_perm[v]}
            break
    checks.append(check_result('cover_lemma', witness is None, witness, pairs=len(pairs)))

    if min(g.order for g in groups) == 1:
        checks.append(check_result('orbit_lemma', None, reason='trivial symmetry groups'))
        checks.append(check_result('primitivity', None, reason='trivial symmetry groups'))
    else:
        witness = None
        for u, v in pairs:
            if v not in orbit(groups[u].nontrivial + groups[v].nontrivial, u):
                witness = {'points': [u, v]}
                break
        checks.append(check_result('orbit_lemma', witness is None, witness, pairs=len(pairs)))
        primitive, witness = is_primitive(_all_generators(groups), gq.num_points)
        checks.append(check_result('primitivity', primitive, witness))

    return {'mode': 'exhaustive' if exhaustive else 'sampled', 'seed': seed, 'checks': checks,
            'passed': all(c['status'] != 'fail' for c in checks)}
