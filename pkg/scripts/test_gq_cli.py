#!/usr/bin/env python3
"""
Command-line tests for gq.py: each subcommand is driven through main()
with an argv list; stdout is parsed as JSON and exit codes are checked.
"""
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import numpy as np
import pytest
from classical_gq import build
from gq import RunConfig, main
from gq_constants import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK


def run(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    out, err = capsys.readouterr()
    return exc.value.code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    return code, json.loads(out), err


@pytest.fixture(scope="module")
def geometry_dir(tmp_path_factory):
    base = tmp_path_factory.mktemp("geometries")
    for family, q in (('W3', 2), ('Q4', 3), ('H3', 2), ('Qminus5', 2)):
        record = build(family, q).gq.to_record()
        (base / f"{family}-{q}.json").write_text(json.dumps(record.to_dict()), encoding='utf-8')
    return base


@pytest.fixture
def w32_file(geometry_dir):
    return str(geometry_dir / 'W3-2.json')


# --- build ---

class TestBuild:
    def test_stdout_geometry(self, capsys):
        code, data, _ = run_json(['build', '--family', 'W3', '--q', '3'], capsys)
        assert code == EXIT_OK
        assert len(data['points']) == 40
        assert len(data['lines']) == 40

    def test_even_parabolic_warns(self, capsys):
        code, data, err = run_json(['build', '--family', 'Q4', '--q', '2'], capsys)
        assert code == EXIT_OK
        assert err.startswith("Warning:")
        assert "no central symmetries expected for even q" in err
        assert len(data['points']) == 15

    def test_size_refusal(self, capsys):
        code, data, _ = run_json(['build', '--family', 'H4', '--q', '5'], capsys)
        assert code == EXIT_INPUT_ERROR
        assert 'limit' in data['error']

    def test_unknown_family_is_usage_error(self, capsys):
        code, _, err = run(['build', '--family', 'W5', '--q', '2'], capsys)
        assert code == EXIT_INPUT_ERROR
        assert "Error:" in err

    def test_bad_q(self, capsys):
        code, data, _ = run_json(['build', '--family', 'W3', '--q', '6'], capsys)
        assert code == EXIT_INPUT_ERROR
        assert 'error' in data

    def test_out_keeps_previous(self, tmp_path, capsys):
        out = str(tmp_path / 'w32.json')
        code, data, _ = run_json(['build', '--family', 'W3', '--q', '2', '--out', out], capsys)
        assert code == EXIT_OK
        assert data['points'] == 15
        assert data['order'] == [2, 2]
        assert 'previous' not in data
        code, data, _ = run_json(['build', '--family', 'W3', '--q', '2', '--out', out], capsys)
        assert Path(data['previous']).name == 'w32.prev1.json'
        assert Path(data['previous']).exists()


# --- verify ---

class TestVerify:
    def test_valid(self, w32_file, capsys):
        code, data, _ = run_json(['verify', w32_file], capsys)
        assert code == EXIT_OK
        assert data['valid']
        assert data['srg'] == [15, 6, 1, 3]

    def test_axiom_failure(self, tmp_path, capsys):
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps({'points': [0, 1, 2, 3], 'lines': [[0, 1], [2, 3]]}), encoding='utf-8')
        code, data, _ = run_json(['verify', str(path)], capsys)
        assert code == EXIT_CHECK_FAILED
        assert not data['valid']
        assert data['witness']

    def test_all_violations(self, tmp_path, capsys):
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps({'points': [0, 1, 2, 3], 'lines': [[0, 1], [2, 3]]}), encoding='utf-8')
        code, data, _ = run_json(['verify', str(path), '--all-violations'], capsys)
        assert code == EXIT_CHECK_FAILED
        assert len(data['witness']['violations']) > 1

    def test_malformed_file(self, tmp_path, capsys):
        path = tmp_path / 'broken.json'
        path.write_text('{"points": [', encoding='utf-8')
        code, data, _ = run_json(['verify', str(path)], capsys)
        assert code == EXIT_INPUT_ERROR
        assert 'error' in data

    def test_missing_file(self, tmp_path, capsys):
        code, _, _ = run(['verify', str(tmp_path / 'absent.json')], capsys)
        assert code == EXIT_INPUT_ERROR


# --- report ---

def _by_name(data):
    return {c['name']: c for c in data['checks']}


class TestReport:
    def test_default_checks(self, w32_file, capsys):
        code, data, _ = run_json(['report', w32_file], capsys)
        assert code == EXIT_OK
        checks = _by_name(data)
        assert checks['srg']['params'] == [15, 6, 1, 3]
        assert checks['bounds']['status'] == 'pass'
        assert checks['bounds']['advisory_failed'] == ['two_fifths_power']
        assert data['passed']

    def test_elliptic_bounds_fail(self, geometry_dir, capsys):
        code, data, _ = run_json(['report', str(geometry_dir / 'Qminus5-2.json'), '--checks', 'bounds'], capsys)
        assert code == EXIT_CHECK_FAILED
        assert _by_name(data)['bounds']['witness']['failed'] == ['s_plus_t_divides']

    def test_parabolic_symmetries_trivial(self, geometry_dir, capsys):
        code, data, _ = run_json(['report', str(geometry_dir / 'Q4-3.json'), '--checks', 'symmetries'], capsys)
        assert code == EXIT_OK
        check = _by_name(data)['symmetries']
        assert check['trivial']
        assert check['orders'] == [1]

    def test_hermitian_e_properties(self, geometry_dir, capsys):
        code, data, _ = run_json(['report', str(geometry_dir / 'H3-2.json'), '--checks', 'E1,E2,E3'], capsys)
        assert code == EXIT_OK
        assert [c['name'] for c in data['checks']] == ['E1', 'E2', 'E3']
        assert all(c['status'] == 'pass' for c in data['checks'])
        assert data['mode'] == 'exhaustive'

    def test_all_checks_w32(self, w32_file, capsys):
        code, data, _ = run_json(['report', w32_file, '--checks', 'all'], capsys)
        assert code == EXIT_OK
        checks = _by_name(data)
        assert checks['linewise']['stabilizer_order'] == 8
        assert checks['ovoid']['exists']
        assert checks['primitivity']['status'] == 'pass'
        assert checks['span_inequality']['status'] == 'pass'

    def test_unknown_check(self, w32_file, capsys):
        code, data, _ = run_json(['report', w32_file, '--checks', 'srg,nope'], capsys)
        assert code == EXIT_INPUT_ERROR
        assert 'nope' in data['error']

    def test_report_file_matches_stdout(self, w32_file, tmp_path, capsys):
        target = tmp_path / 'report.json'
        code, data, _ = run_json(['report', w32_file, '--report', str(target)], capsys)
        assert code == EXIT_OK
        assert json.loads(target.read_text(encoding='utf-8')) == data

    def test_text_format(self, w32_file, capsys):
        code, out, _ = run(['report', w32_file, '--checks', 'srg', '--format', 'text'], capsys)
        assert code == EXIT_OK
        assert 'passed: true' in out.splitlines()
        assert 'checks.0.params: [15, 6, 1, 3]' in out.splitlines()


# --- symmetries / span / dual ---

class TestGeometryCommands:
    def test_symmetries_at_point(self, w32_file, capsys):
        code, data, _ = run_json(['symmetries', w32_file, '--point', '0'], capsys)
        assert code == EXIT_OK
        assert data['group_order'] == 2
        assert data['fixed_kinds'] == ['C']
        assert len(data['elements']) == 2

    def test_symmetries_everywhere_trivial(self, geometry_dir, capsys):
        code, data, _ = run_json(['symmetries', str(geometry_dir / 'Q4-3.json')], capsys)
        assert code == EXIT_OK
        assert data['summary'] == 'trivial at every point'

    def test_symmetries_everywhere(self, w32_file, capsys):
        code, data, _ = run_json(['symmetries', w32_file], capsys)
        assert code == EXIT_OK
        assert data['summary'] == 'order 2 at every point'

    def test_node_budget_exhausted(self, w32_file, capsys):
        code, _, err = run(['symmetries', w32_file, '--point', '0', '--node-budget', '1'], capsys)
        assert code == EXIT_INPUT_ERROR
        assert "raise --node-budget" in err

    def test_point_out_of_range(self, w32_file, capsys):
        code, _, _ = run(['symmetries', w32_file, '--point', '99'], capsys)
        assert code == EXIT_INPUT_ERROR

    def test_span(self, w32_file, capsys):
        gq = build('W3', 2).gq
        y = int(np.flatnonzero(~gq.collinearity[0])[0])
        code, data, _ = run_json(['span', w32_file, '--x', '0', '--y', str(y)], capsys)
        assert code == EXIT_OK
        assert not data['collinear']
        assert data['size'] == 3
        assert len(data['trace']) == 3
        assert 0 in data['span'] and y in data['span']

    def test_span_needs_both_points(self, w32_file, capsys):
        code, _, _ = run(['span', w32_file, '--x', '0'], capsys)
        assert code == EXIT_INPUT_ERROR

    def test_dual_round_trip(self, geometry_dir, tmp_path, capsys):
        out = str(tmp_path / 'h34-dual.json')
        code, data, _ = run_json(['dual', str(geometry_dir / 'H3-2.json'), '--out', out], capsys)
        assert code == EXIT_OK
        assert data['order'] == [2, 4]
        code, data, _ = run_json(['verify', out], capsys)
        assert data['srg'] == [27, 10, 1, 5]


# --- sieve ---

class TestSieve:
    def test_single_case(self, capsys):
        code, data, _ = run_json(['sieve', '--case', 'G2-line1'], capsys)
        assert code == EXIT_OK
        assert data['verdict'] == 'excluded'
        assert data['survivors'] == []

    def test_unknown_case(self, capsys):
        code, data, _ = run_json(['sieve', '--case', 'bogus'], capsys)
        assert code == EXIT_INPUT_ERROR
        assert 'G2-line1' in data['available']

    def test_needs_selector(self, capsys):
        code, data, _ = run_json(['sieve'], capsys)
        assert code == EXIT_INPUT_ERROR
        assert '--case' in data['error']

    def test_several_cases(self, capsys):
        code, data, _ = run_json(['sieve', '--case', '2F42', '--case', 'G2-line1', '--q-max', '27'], capsys)
        assert code == EXIT_OK
        assert data['all_match_expected']
        assert len(data['cases']) == 2

    def test_verify_cert(self, capsys):
        code, data, _ = run_json(['sieve', '--case', 'G2-line1', '--verify-cert'], capsys)
        assert code == EXIT_OK
        assert data['passed']
        assert data['certificates'][0]['checks'][0]['exact']

    def test_q_max_too_small(self, capsys):
        code, _, _ = run(['sieve', '--case', 'G2-line1', '--q-max', '1'], capsys)
        assert code == EXIT_INPUT_ERROR

    def test_text_format(self, capsys):
        code, out, _ = run(['sieve', '--case', '2F42', '--format', 'text'], capsys)
        assert code == EXIT_OK
        assert 'verdict: "excluded"' in out.splitlines()

    def test_cases_file_with_unexpected_verdict(self, tmp_path, capsys):
        raw = {'name': 'tiny', 'kind': 'index', 'order': 40, 'subgroups': [{'name': 'trivial', 'order': 1}],
               'expected': 'excluded'}
        path = tmp_path / 'cases.json'
        path.write_text(json.dumps({'cases': [raw]}), encoding='utf-8')
        # index 40 = (1+3)(1+3*3): W(3,3) parameters survive
        code, data, _ = run_json(['sieve', '--case', 'tiny', '--cases-file', str(path)], capsys)
        assert code == EXIT_CHECK_FAILED
        assert data['verdict'] == 'survivors'
        assert data['survivors'][0]['s'] == 3


# --- RunConfig ---

class TestRunConfig:
    def test_defaults_validate(self):
        RunConfig(command='sieve', all_cases=True).validate()

    def test_rejects_bad_budget(self):
        with pytest.raises(ValueError, match="node-budget"):
            RunConfig(command='report', file='x.json', node_budget=0).validate()

    def test_rejects_conflicting_selectors(self):
        with pytest.raises(ValueError, match="either"):
            RunConfig(command='sieve', cases=('G2-line1',), all_cases=True).validate()
