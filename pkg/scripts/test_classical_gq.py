#!/usr/bin/env python3
"""
Unit tests for classical_gq.py: construction, basis points and the
hyperbolic-line cross-check against direct subspace enumeration.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import numpy as np
import pytest
from classical_gq import build, canonical_basis_points, family_warnings, hyperbolic_line_by_subspace
from gq_constants import get_family_order, generate_markdown_table
from gq_core import check_parameter_bounds, collinearity_srg, dualize, span


BUILDS = {}


def cached(family, q):
    key = (family, q)
    if key not in BUILDS:
        BUILDS[key] = build(family, q)
    return BUILDS[key]


# --- build ---

class TestBuild:
    @pytest.mark.parametrize("family,q,order,points", [
        ('W3', 2, (2, 2), 15),
        ('W3', 3, (3, 3), 40),
        ('Q4', 3, (3, 3), 40),
        ('Qminus5', 2, (2, 4), 27),
        ('Qminus5', 3, (3, 9), 112),
        ('H3', 2, (4, 2), 45),
        ('H3', 3, (9, 3), 280),
        ('H4', 2, (4, 8), 165),
    ])
    def test_orders_and_counts(self, family, q, order, points):
        built = cached(family, q)
        s, t = order
        assert built.gq.order == order
        assert built.gq.num_points == points == (1 + s) * (1 + s * t)
        assert built.gq.num_lines == (1 + t) * (1 + s * t)

    def test_w32_lines(self):
        assert cached('W3', 2).gq.num_lines == 15

    def test_h4_lines(self):
        assert cached('H4', 2).gq.num_lines == 297

    def test_points_sorted_lexicographically(self):
        built = cached('W3', 2)
        keys = [pt.key for pt in built.coordinates]
        assert keys == sorted(keys)

    def test_even_q_parabolic_builds_with_warning(self):
        warnings = family_warnings('Q4', 2)
        assert len(warnings) == 1
        assert "no central symmetries expected for even q" in warnings[0]
        assert build('Q4', 2).gq.order == (2, 2)

    def test_odd_q_has_no_warning(self):
        assert family_warnings('Q4', 3) == []
        assert family_warnings('W3', 2) == []

    def test_size_refusal(self):
        with pytest.raises(ValueError, match="limit"):
            build('H4', 5)

    def test_bad_q(self):
        with pytest.raises(ValueError):
            build('W3', 6)

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="Unknown family"):
            build('W5', 2)

    def test_point_lookup(self):
        built = cached('W3', 3)
        for i in (0, 7, 39):
            assert built.point_of(built.vector(i)) == i

    def test_parameter_bounds_hold(self):
        for key in (('W3', 2), ('Q4', 3), ('H3', 2), ('H4', 2)):
            report = check_parameter_bounds(*cached(*key).gq.order)
            assert report['passed'], key


# --- canonical_basis_points ---

class TestBasisPoints:
    def test_symplectic_all_present(self):
        built = cached('W3', 3)
        assert len(canonical_basis_points(built)) == 4

    def test_hermitian_e1_e2_noncollinear(self):
        built = cached('H3', 2)
        e1, e2 = canonical_basis_points(built, [1, 2])
        assert not built.gq.are_collinear(e1, e2)

    def test_parabolic_e5_rejected(self):
        built = cached('Q4', 3)
        with pytest.raises(ValueError, match="not isotropic"):
            canonical_basis_points(built, [5])

    def test_parabolic_default_skips_e5(self):
        assert len(canonical_basis_points(cached('Q4', 3))) == 4

    def test_position_out_of_range(self):
        with pytest.raises(ValueError):
            canonical_basis_points(cached('W3', 2), [5])


# --- hyperbolic lines ---

class TestHyperbolicLines:
    @pytest.mark.parametrize("family,q", [('W3', 2), ('W3', 3), ('H3', 2), ('H4', 2)])
    def test_basis_span_has_q_plus_one_points(self, family, q):
        built = cached(family, q)
        e1, e2 = canonical_basis_points(built, [1, 2])
        hyper = span(built.gq, e1, e2)
        assert len(hyper) == q + 1
        assert hyper == hyperbolic_line_by_subspace(built, e1, e2)

    def test_w32_every_span_matches_subspace(self):
        built = cached('W3', 2)
        gq = built.gq
        for x in range(gq.num_points):
            for y in np.flatnonzero(~gq.collinearity[x]):
                assert span(gq, x, int(y)) == hyperbolic_line_by_subspace(built, x, int(y))

    def test_q43_spans_are_pairs(self):
        built = cached('Q4', 3)
        gq = built.gq
        x = 0
        for y in np.flatnonzero(~gq.collinearity[x]):
            assert len(span(gq, x, int(y))) == 2


# --- duality and family table ---

class TestFamilies:
    def test_h3_dual_matches_elliptic_invariants(self):
        dual = dualize(cached('H3', 2).gq)
        elliptic = cached('Qminus5', 2).gq
        assert dual.order == elliptic.order
        assert collinearity_srg(dual) == collinearity_srg(elliptic)

    def test_family_order_is_fresh(self):
        info = get_family_order('H4', 2)
        info['s'] = 0
        assert get_family_order('H4', 2)['s'] == 4

    def test_markdown_table(self):
        table = generate_markdown_table()
        assert '| W(3,q) | (q,q) | 15 | 40 |' in table
        assert 'H(4,q^2)' in table
