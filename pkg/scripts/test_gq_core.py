#!/usr/bin/env python3
"""
Unit tests for gq_core.py and the geometry-file helpers in gq_utils.py.

Geometries come from the classical constructions; builds are cached per module.
"""
import os
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import numpy as np
import pytest
from classical_gq import build
from gq_core import (
    check_parameter_bounds,
    check_point_stabilizer_facts,
    check_subgq_params,
    check_substructure,
    collinearity_graph,
    collinearity_srg,
    dualize,
    find_ovoid,
    gq_from_record,
    is_m_ovoid,
    perp,
    span,
    trace,
    verify_gq,
)
from gq_utils import (
    GeometryError,
    GeometryRecord,
    all_passed,
    check_result,
    keep_previous,
    parse_geometry,
    parse_geometry_file,
    write_geometry,
)


def grid(n=3):
    """n x n grid: order (n-1, 1), not thick."""
    points = list(range(n * n))
    rows = [[r * n + c for c in range(n)] for r in range(n)]
    cols = [[r * n + c for r in range(n)] for c in range(n)]
    return points, rows + cols


def noncollinear_pair(gq):
    x = 0
    y = int(np.flatnonzero(~gq.collinearity[x])[0])
    return x, y


@pytest.fixture(scope='module')
def w32():
    return build('W3', 2).gq


@pytest.fixture(scope='module')
def w33():
    return build('W3', 3).gq


@pytest.fixture(scope='module')
def q43():
    return build('Q4', 3).gq


@pytest.fixture(scope='module')
def h34():
    return build('H3', 2).gq


@pytest.fixture(scope='module')
def h44():
    return build('H4', 2).gq


@pytest.fixture(scope='module')
def qm52():
    return build('Qminus5', 2).gq


# --- verify_gq ---

class TestVerify:
    def test_w32_order(self, w32):
        assert w32.order == (2, 2)
        assert w32.num_points == 15
        assert w32.num_lines == 15

    def test_h34_order(self, h34):
        assert h34.order == (4, 2)
        assert h34.num_points == 45

    def test_grid_not_thick(self):
        points, lines = grid()
        with pytest.raises(GeometryError, match="Not thick") as info:
            verify_gq(points, lines)
        assert info.value.witness == {'order': [2, 1]}

    def test_missing_line_fails_fast(self, w32):
        lines = [list(line) for line in w32.lines[:-1]]
        with pytest.raises(GeometryError) as info:
            verify_gq(list(w32.points), lines)
        assert 'violations' not in info.value.witness

    def test_collect_all_violations(self, w32):
        lines = [list(line) for line in w32.lines[:-1]]
        with pytest.raises(GeometryError) as info:
            verify_gq(list(w32.points), lines, collect_all=True)
        assert len(info.value.witness['violations']) >= 2

    def test_line_outside_point_range(self):
        with pytest.raises(GeometryError, match="outside"):
            verify_gq([0, 1, 2], [[0, 1, 5]])

    def test_empty_rejected(self):
        with pytest.raises(GeometryError):
            verify_gq([], [])

    def test_declared_order_mismatch(self, w32):
        record = w32.to_record()
        record.order = (2, 4)
        with pytest.raises(GeometryError, match="Declared order"):
            gq_from_record(record)

    def test_lemma_bounds_hold_for_classical(self, w32, w33, q43, h34, h44, qm52):
        for gq in (w32, w33, q43, h34, h44, qm52):
            s, t = gq.order
            v = gq.num_points
            assert v == (1 + s) * (1 + s * t)
            assert (1 + s) ** 4 > v
            report = check_parameter_bounds(s, t)
            assert report['checks'][0]['status'] == 'pass'
            # Q-(5,q) has no symmetries: s + t does not divide st(t + 1)
            assert report['passed'] == (gq is not qm52)

    def test_upper_bound_is_advisory(self, h34, w32, q43):
        # s = t^2: 5^5 = 3125 > 45^2 = 2025
        upper = check_parameter_bounds(*h34.order)['checks'][1]
        assert upper['status'] == 'fail'
        assert upper['advisory']
        # (2,2): 3^5 = 243 > 15^2 = 225
        assert check_parameter_bounds(*w32.order)['checks'][1]['status'] == 'fail'
        assert check_parameter_bounds(*q43.order)['checks'][1]['status'] == 'pass'


# --- perp / trace / span ---

class TestPerpAndSpan:
    def test_perp_size_w32(self, w32):
        for x in range(w32.num_points):
            px = perp(w32, x)
            assert len(px) == 7
            assert x in px

    def test_perp_size_h44(self, h44):
        assert h44.order == (4, 8)
        assert len(perp(h44, 0)) == 37

    def test_perp_invalid_index(self, w32):
        with pytest.raises(ValueError):
            perp(w32, 15)

    def test_span_w33_size_four(self, w33):
        x, y = noncollinear_pair(w33)
        assert len(span(w33, x, y)) == 4

    def test_span_q43_always_two(self, q43):
        for x in range(q43.num_points):
            for y in np.flatnonzero(~q43.collinearity[x]):
                assert span(q43, x, int(y)) == frozenset({x, int(y)})

    def test_span_of_collinear_points_is_line(self, w33):
        line = w33.lines[0]
        assert span(w33, line[0], line[1]) == frozenset(line)

    def test_span_same_point_rejected(self, w32):
        with pytest.raises(ValueError, match="distinct"):
            span(w32, 3, 3)

    def test_span_members_pairwise_noncollinear(self, w33):
        x, y = noncollinear_pair(w33)
        members = sorted(span(w33, x, y))
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                assert not w33.are_collinear(a, b)

    def test_span_sees_whole_trace(self, h34):
        x, y = noncollinear_pair(h34)
        tr = trace(h34, x, y)
        assert len(tr) == h34.t + 1
        for z in span(h34, x, y):
            assert all(h34.are_collinear(z, w) for w in tr)

    def test_projection(self, w32):
        x = 0
        line = next(li for li in range(w32.num_lines) if not w32.on_line(x, li))
        y = w32.projection(x, line)
        assert w32.on_line(y, line)
        assert w32.are_collinear(x, y)
        assert w32.projection(w32.lines[line][0], line) == w32.lines[line][0]


# --- parameter predicates ---

class TestParameterBounds:
    def test_three_three(self):
        report = check_parameter_bounds(3, 3)
        assert report['v'] == 40
        assert report['passed']

    def test_elliptic_parameters_fail_divisibility(self):
        report = check_parameter_bounds(2, 4)
        statuses = {c['name']: c['status'] for c in report['checks']}
        assert statuses['s_plus_t_divides'] == 'fail'
        assert not report['passed']

    def test_hermitian_parameters_pass(self):
        report = check_parameter_bounds(4, 2)
        statuses = {c['name']: c['status'] for c in report['checks']}
        assert statuses['s_plus_t_divides'] == 'pass'

    def test_thin_rejected(self):
        with pytest.raises(ValueError):
            check_parameter_bounds(1, 3)


class TestSubquadrangleParams:
    def test_hermitian_triple_consistent(self):
        report = check_subgq_params(4, 2, 2)
        assert report['consistent']

    def test_equal_orders_force_thin_subquadrangle(self):
        report = check_subgq_params(3, 3, 2)
        assert not report['consistent']
        assert report['clauses'][0]['status'] == 'fail'

    def test_clause_three(self):
        report = check_subgq_params(8, 4, 3)
        statuses = {c['name']: c['status'] for c in report['clauses']}
        assert statuses['clause_3'] == 'fail'
        assert check_subgq_params(8, 4, 2)['clauses'][2]['status'] == 'pass'

    def test_clause_four(self):
        assert check_subgq_params(4, 2, 2, s_double_prime=1)['consistent']
        assert not check_subgq_params(4, 2, 2, s_double_prime=2)['consistent']

    def test_proper_subquadrangle_required(self):
        with pytest.raises(ValueError):
            check_subgq_params(3, 3, 3)


class TestPointStabilizerFacts:
    def test_symplectic_three(self):
        report = check_point_stabilizer_facts(40, 3, 3, 648, r=3, group_order=25920)
        assert report['passed']

    def test_odd_stabilizer_fails(self):
        report = check_point_stabilizer_facts(15, 2, 2, 45)
        failed = [c['name'] for c in report['checks'] if c['status'] == 'fail']
        assert failed == ['s_divides_stabilizer']


# --- ovoids ---

class TestOvoids:
    def test_all_points(self, w32):
        assert is_m_ovoid(w32, range(w32.num_points)) == w32.s + 1

    def test_single_line_is_not_m_ovoid(self, w32):
        assert is_m_ovoid(w32, w32.lines[0]) is None

    def test_w32_ovoid(self, w32):
        ovoid = find_ovoid(w32)
        assert ovoid is not None
        assert len(ovoid) == 5
        assert is_m_ovoid(w32, ovoid) == 1
        for i, a in enumerate(ovoid):
            for b in ovoid[i + 1:]:
                assert not w32.are_collinear(a, b)

    def test_q43_ovoid(self, q43):
        ovoid = find_ovoid(q43)
        assert ovoid is not None
        assert len(ovoid) == 10

    def test_empty_rejected(self, w32):
        with pytest.raises(ValueError):
            is_m_ovoid(w32, [])


# --- collinearity graph ---

class TestSRG:
    def test_w32(self, w32):
        assert collinearity_srg(w32) == (15, 6, 1, 3)

    def test_h34(self, h34):
        assert collinearity_srg(h34) == (45, 12, 3, 3)

    def test_q43(self, q43):
        assert collinearity_srg(q43) == (40, 12, 2, 4)

    def test_mu_is_trace_size(self, q43):
        x, y = noncollinear_pair(q43)
        assert collinearity_srg(q43)[3] == len(trace(q43, x, y)) == q43.t + 1

    def test_graph_has_no_loops(self, w32):
        graph = collinearity_graph(w32)
        assert graph.number_of_nodes() == 15
        assert graph.number_of_edges() == 15 * 6 // 2


# --- dualize ---

class TestDual:
    def test_w32_self_paired(self, w32):
        dual = dualize(w32)
        assert dual.order == (2, 2)
        assert dual.num_points == 15

    def test_h34_dual_has_elliptic_parameters(self, h34, qm52):
        dual = dualize(h34)
        assert dual.order == (2, 4)
        assert dual.num_points == 27
        assert qm52.order == (2, 4)
        assert collinearity_srg(dual) == collinearity_srg(qm52)

    def test_double_dual(self, w32):
        back = dualize(dualize(w32))
        assert back.lines == w32.lines
        assert back.family == w32.family


# --- substructures ---

class TestSubstructure:
    def test_whole_geometry(self, w32):
        assert check_substructure(w32, range(w32.num_points), range(w32.num_lines))['passed']

    def test_line_with_its_points(self, w32):
        assert check_substructure(w32, w32.lines[0], [0])['passed']

    def test_collinear_points_without_line(self, w32):
        a, b = w32.lines[0][:2]
        report = check_substructure(w32, [a, b], [])
        assert report['checks'][0]['status'] == 'fail'
        assert not report['passed']

    def test_projection_line_missing(self, w32):
        x = 0
        line = next(li for li in range(w32.num_lines) if not w32.on_line(x, li))
        report = check_substructure(w32, [x], [line])
        assert report['checks'][2]['status'] == 'fail'


# --- geometry files ---

class TestGeometryFiles:
    def test_write_and_parse(self, w32):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'w32.json')
            write_geometry(w32.to_record(), path)
            record, errors = parse_geometry_file(path)
            assert errors == []
            assert record.family == 'W3'
            assert record.order == (2, 2)
            assert gq_from_record(record).order == (2, 2)

    def test_previous_versions_numbered(self, w32):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'w32.json')
            assert keep_previous(path) is None
            write_geometry(w32.to_record(), path)
            first = keep_previous(path)
            second = keep_previous(path)
            assert os.path.basename(first) == 'w32.prev1.json'
            assert os.path.basename(second) == 'w32.prev2.json'
            record, errors = parse_geometry_file(second)
            assert errors == [] and record.family == 'W3'

    def test_invalid_json(self):
        record, errors = parse_geometry("{not json")
        assert record is None
        assert errors[0].startswith("Invalid JSON")

    def test_missing_points(self):
        record, errors = parse_geometry('{"lines": [[0, 1]]}')
        assert record is None
        assert "points" in errors[0]

    def test_index_out_of_range(self):
        record, errors = parse_geometry('{"points": [0, 1], "lines": [[0, 2]]}')
        assert record is None
        assert "out of range" in errors[0]

    def test_missing_file(self):
        record, errors = parse_geometry_file('/nonexistent/geometry.json')
        assert record is None
        assert errors

    def test_extra_keys_preserved(self):
        record, errors = parse_geometry('{"points": [0], "lines": [[0]], "note": "x"}')
        assert errors == []
        assert isinstance(record, GeometryRecord)
        assert record.to_dict()['note'] == 'x'


class TestCheckResult:
    def test_statuses(self):
        assert check_result('a', True)['status'] == 'pass'
        assert check_result('a', False, {'p': 1})['witness'] == {'p': 1}
        assert check_result('a', None)['status'] == 'skipped'
        assert 'witness' not in check_result('a', True, {'p': 1})

    def test_all_passed_ignores_skipped(self):
        assert all_passed([check_result('a', True), check_result('b', None)])
        assert not all_passed([check_result('a', False)])
