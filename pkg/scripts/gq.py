#!/usr/bin/env python3
"""
Single command-line entry for building, verifying and probing generalized
quadrangles and for running the arithmetic sieve.

Usage:
    python3 gq.py build --family W3 --q 3 [--out w33.json] [--force]
    python3 gq.py verify w33.json [--all-violations]
    python3 gq.py report w33.json --checks srg,symmetries,E1,E2,E3 [--seed N]
    python3 gq.py symmetries w33.json [--point P] [--node-budget N]
    python3 gq.py span w33.json --x 0 --y 5
    python3 gq.py dual w33.json --out w33-dual.json
    python3 gq.py sieve --case G2-line1 [--q-max N] [--jobs K]
    python3 gq.py sieve --all
    python3 gq.py sieve --case 3D4-line3 --verify-cert

Every subcommand accepts --format json|text and --report FILE.
Exit codes: 0 pass, 1 usage or input error, 2 a check failed.

Output (JSON):
    {
        "file": "w32.json",
        "family": "W3",
        "order": [2, 2],
        "checks": [{"name": "srg", "status": "pass", "params": [15, 6, 1, 3]}],
        "passed": true
    }
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from classical_gq import build, family_warnings
from gq_constants import (
    DEFAULT_JOBS, DEFAULT_NODE_BUDGET, DEFAULT_SAMPLE_SIZE, DEFAULT_SEED, EXIT_CHECK_FAILED,
    EXIT_INPUT_ERROR, EXIT_OK, FAMILIES, GROUP_ORDER_LIMIT,
)
from gq_core import (
    GeneralizedQuadrangle, check_parameter_bounds, collinearity_srg, dualize, find_ovoid, gq_from_record,
    is_m_ovoid, span, trace,
)
from gq_utils import (
    GeometryError, SearchBudgetExceeded, check_result, emit, keep_previous, parse_geometry_file, warn,
    write_geometry, write_json,
)
from sieve import load_cases, run_case, run_cases, verify_cert
from symmetries import (
    check_E_properties, check_orbit_lemmas, classify_fixed, full_symmetry_group, generate_group,
    linewise_stabilizer, summarize_symmetry_groups, symmetry_groups_at_all_points,
)

COMMANDS = ('build', 'verify', 'report', 'symmetries', 'span', 'dual', 'sieve')
REPORT_CHECKS = ('srg', 'bounds', 'symmetries', 'span', 'E1', 'E2', 'E3', 'lemmas', 'ovoid', 'linewise')
DEFAULT_REPORT_CHECKS = ('srg', 'bounds')
_NEEDS_GROUPS = {'symmetries', 'span', 'E1', 'E2', 'E3', 'lemmas', 'linewise'}
_E_CHECK_NAMES = {'span': 'span_inequality', 'E1': 'E1', 'E2': 'E2', 'E3': 'E3'}

Outcome = Tuple[Dict[str, Any], int]


class GQArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT_ERROR)


@dataclass
class RunConfig:
    """Validated options for one invocation."""
    command: str
    file: Optional[str] = None
    family: Optional[str] = None
    q: Optional[int] = None
    out: Optional[str] = None
    fmt: str = 'json'
    report: Optional[str] = None
    seed: int = DEFAULT_SEED
    node_budget: int = DEFAULT_NODE_BUDGET
    sample_size: int = DEFAULT_SAMPLE_SIZE
    jobs: int = DEFAULT_JOBS
    force: bool = False
    all_violations: bool = False
    checks: Tuple[str, ...] = DEFAULT_REPORT_CHECKS
    point: Optional[int] = None
    x: Optional[int] = None
    y: Optional[int] = None
    cases: Tuple[str, ...] = field(default_factory=tuple)
    all_cases: bool = False
    verify_cert: bool = False
    q_max: Optional[int] = None
    cases_file: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}'")
        if self.fmt not in ('json', 'text'):
            raise ValueError(f"Unknown format '{self.fmt}'")
        for name in ('node_budget', 'sample_size', 'jobs'):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if self.q_max is not None and self.q_max < 2:
            raise ValueError("--q-max must be at least 2")
        if self.command == 'build':
            if self.family not in FAMILIES:
                raise ValueError(f"Unknown family '{self.family}' (expected one of {', '.join(FAMILIES)})")
            if self.q is None:
                raise ValueError("build needs --q")
        elif self.command != 'sieve' and not self.file:
            raise ValueError(f"{self.command} needs a geometry file")
        if self.command == 'report':
            unknown = [c for c in self.checks if c not in REPORT_CHECKS]
            if unknown:
                raise ValueError(f"Unknown check(s) {', '.join(unknown)} (expected {', '.join(REPORT_CHECKS)})")
        if self.command == 'span' and (self.x is None or self.y is None):
            raise ValueError("span needs --x and --y")
        if self.command == 'sieve':
            if self.all_cases and self.cases:
                raise ValueError("Use either --case or --all")
            if not self.all_cases and not self.cases:
                raise ValueError("sieve needs --case NAME or --all")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        checks = DEFAULT_REPORT_CHECKS
        raw_checks = getattr(args, 'checks', None)
        if raw_checks:
            names = [c.strip() for c in raw_checks.split(',') if c.strip()]
            checks = REPORT_CHECKS if names == ['all'] else tuple(names)
        config = cls(
            command=args.command,
            file=getattr(args, 'file_path', None),
            family=getattr(args, 'family', None),
            q=getattr(args, 'q', None),
            out=getattr(args, 'out', None),
            fmt=args.format,
            report=args.report,
            seed=args.seed,
            node_budget=getattr(args, 'node_budget', DEFAULT_NODE_BUDGET),
            sample_size=getattr(args, 'sample_size', DEFAULT_SAMPLE_SIZE),
            jobs=getattr(args, 'jobs', DEFAULT_JOBS),
            force=getattr(args, 'force', False),
            all_violations=getattr(args, 'all_violations', False),
            checks=checks,
            point=getattr(args, 'point', None),
            x=getattr(args, 'x', None),
            y=getattr(args, 'y', None),
            cases=tuple(getattr(args, 'case', None) or ()),
            all_cases=getattr(args, 'all', False),
            verify_cert=getattr(args, 'verify_cert', False),
            q_max=getattr(args, 'q_max', None),
            cases_file=getattr(args, 'cases_file', None),
        )
        config.validate()
        return config


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _load_geometry(config: RunConfig) -> GeneralizedQuadrangle:
    record, errors = parse_geometry_file(config.file)
    if errors:
        raise ValueError('; '.join(errors))
    return gq_from_record(record)


def _summary(gq: GeneralizedQuadrangle) -> Dict[str, Any]:
    return {'family': gq.family, 'q': gq.q, 'order': list(gq.order),
            'points': gq.num_points, 'lines': gq.num_lines}


def cmd_build(config: RunConfig) -> Outcome:
    for message in family_warnings(config.family, config.q):
        warn(message)
    built = build(config.family, config.q, force=config.force)
    record = built.gq.to_record()
    if not config.out:
        return record.to_dict(), EXIT_OK
    previous = keep_previous(config.out)
    write_geometry(record, config.out)
    result = _summary(built.gq)
    result['out'] = config.out
    if previous:
        result['previous'] = previous
    return result, EXIT_OK


def cmd_verify(config: RunConfig) -> Outcome:
    record, errors = parse_geometry_file(config.file)
    if errors:
        raise ValueError('; '.join(errors))
    try:
        gq = gq_from_record(record, collect_all=config.all_violations)
        srg = collinearity_srg(gq)
    except GeometryError as e:
        return {'valid': False, 'error': str(e), 'witness': e.witness}, EXIT_CHECK_FAILED
    result = {'valid': True}
    result.update(_summary(gq))
    result['srg'] = list(srg)
    return result, EXIT_OK


def _srg_check(gq: GeneralizedQuadrangle) -> Dict[str, Any]:
    try:
        return check_result('srg', True, params=list(collinearity_srg(gq)))
    except GeometryError as e:
        return check_result('srg', False, e.witness, error=str(e))


def _bounds_check(gq: GeneralizedQuadrangle) -> Dict[str, Any]:
    try:
        report = check_parameter_bounds(gq.s, gq.t)
    except ValueError as e:
        return check_result('bounds', None, reason=str(e))
    failed = [c['name'] for c in report['checks'] if c['status'] == 'fail' and not c.get('advisory')]
    advisory = [c['name'] for c in report['checks'] if c['status'] == 'fail' and c.get('advisory')]
    return check_result('bounds', report['passed'], {'failed': failed}, s=gq.s, t=gq.t, advisory_failed=advisory)


def _ovoid_check(gq: GeneralizedQuadrangle, node_budget: int) -> Dict[str, Any]:
    try:
        found = find_ovoid(gq, node_budget)
    except SearchBudgetExceeded as e:
        return check_result('ovoid', None, reason=str(e))
    if found is None:
        return check_result('ovoid', True, exists=False)
    try:
        m = is_m_ovoid(gq, found)
    except GeometryError as e:
        return check_result('ovoid', False, e.witness, error=str(e))
    return check_result('ovoid', m == 1, {'m': m}, exists=True, points=list(found))


def _linewise_check(gq: GeneralizedQuadrangle, groups) -> Dict[str, Any]:
    gens = [g for group in groups for g in group.nontrivial]
    if not gens:
        return check_result('linewise', None, reason='trivial symmetry groups')
    try:
        generated = generate_group(gens, gq.num_points, GROUP_ORDER_LIMIT)
    except SearchBudgetExceeded as e:
        return check_result('linewise', None, reason=str(e))
    u = 0
    stabilizer = linewise_stabilizer(gq, generated, u)
    rows = {tuple(int(x) for x in row) for row in stabilizer}
    contains = all(g.point_perm in rows for g in groups[u].elements)
    return check_result('linewise', contains and len(rows) > groups[u].order,
                        {'point': u, 'stabilizer_order': len(rows)},
                        point=u, stabilizer_order=len(rows), symmetry_order=groups[u].order,
                        generated_order=len(generated))


def cmd_report(config: RunConfig) -> Outcome:
    gq = _load_geometry(config)
    selected = [c for c in REPORT_CHECKS if c in config.checks]
    groups = None
    if _NEEDS_GROUPS & set(selected):
        groups = symmetry_groups_at_all_points(gq, config.node_budget)

    e_report = lemma_report = None
    checks: List[Dict[str, Any]] = []
    for name in selected:
        if name == 'srg':
            checks.append(_srg_check(gq))
        elif name == 'bounds':
            checks.append(_bounds_check(gq))
        elif name == 'symmetries':
            checks.append(summarize_symmetry_groups(gq, groups))
        elif name in _E_CHECK_NAMES:
            if e_report is None:
                e_report = check_E_properties(gq, groups, seed=config.seed, sample_size=config.sample_size)
            checks.extend(c for c in e_report['checks'] if c['name'] == _E_CHECK_NAMES[name])
        elif name == 'lemmas':
            lemma_report = check_orbit_lemmas(gq, groups, seed=config.seed, sample_size=config.sample_size)
            checks.extend(lemma_report['checks'])
        elif name == 'ovoid':
            checks.append(_ovoid_check(gq, config.node_budget))
        elif name == 'linewise':
            checks.append(_linewise_check(gq, groups))

    mode = (e_report or lemma_report or {}).get('mode', 'exhaustive')
    result = {
        'file': config.file,
        'family': gq.family,
        'order': list(gq.order),
        'points': gq.num_points,
        'seed': config.seed,
        'mode': mode,
        'checks': checks,
        'passed': all(c['status'] != 'fail' for c in checks),
    }
    return result, EXIT_OK if result['passed'] else EXIT_CHECK_FAILED


def cmd_symmetries(config: RunConfig) -> Outcome:
    gq = _load_geometry(config)
    if config.point is not None:
        gq.check_point(config.point)
        group = full_symmetry_group(gq, config.point, config.node_budget)
        kinds = sorted({classify_fixed(gq, g).kind for g in group.nontrivial})
        result = _summary(gq)
        result.update({
            'center': config.point,
            'group_order': group.order,
            'trivial': group.order == 1,
            'nodes': group.nodes,
            'fixed_kinds': kinds,
            'elements': [list(g.point_perm) for g in group.elements],
        })
        return result, EXIT_OK

    groups = symmetry_groups_at_all_points(gq, config.node_budget)
    check = summarize_symmetry_groups(gq, groups)
    result = _summary(gq)
    result.update({
        'orders': check['orders'],
        'trivial': check['trivial'],
        'nodes': check['nodes'],
        'summary': ('trivial at every point' if check['trivial']
                    else f"order {','.join(str(o) for o in check['orders'])} at every point"),
        'passed': check['status'] == 'pass',
    })
    return result, EXIT_OK if result['passed'] else EXIT_CHECK_FAILED


def cmd_span(config: RunConfig) -> Outcome:
    gq = _load_geometry(config)
    x, y = config.x, config.y
    hyper = span(gq, x, y)
    return {
        'x': x,
        'y': y,
        'collinear': gq.are_collinear(x, y),
        'trace': sorted(trace(gq, x, y)),
        'span': sorted(hyper),
        'size': len(hyper),
    }, EXIT_OK


def cmd_dual(config: RunConfig) -> Outcome:
    dual = dualize(_load_geometry(config))
    record = dual.to_record()
    if not config.out:
        return record.to_dict(), EXIT_OK
    previous = keep_previous(config.out)
    write_geometry(record, config.out)
    result = _summary(dual)
    result['out'] = config.out
    if previous:
        result['previous'] = previous
    return result, EXIT_OK


def cmd_sieve(config: RunConfig) -> Outcome:
    cases, errors = load_cases(config.cases_file)
    if errors:
        raise ValueError('; '.join(errors))
    names = list(cases) if config.all_cases else list(config.cases)
    unknown = [n for n in names if n not in cases]
    if unknown:
        return {'error': f"Unknown case '{unknown[0]}'", 'available': sorted(cases)}, EXIT_INPUT_ERROR

    if config.verify_cert:
        certs = [verify_cert(cases[n], seed=config.seed) for n in names]
        result = {'certificates': certs, 'passed': all(c['status'] != 'fail' for c in certs)}
        return result, EXIT_OK if result['passed'] else EXIT_CHECK_FAILED

    if len(names) == 1:
        result = run_case(cases[names[0]], q_max=config.q_max, jobs=config.jobs)
        return result, EXIT_OK if result['matches_expected'] else EXIT_CHECK_FAILED
    result = run_cases(cases, names, q_max=config.q_max, jobs=config.jobs)
    return result, EXIT_OK if result['all_match_expected'] else EXIT_CHECK_FAILED


_DISPATCH = {
    'build': cmd_build,
    'verify': cmd_verify,
    'report': cmd_report,
    'symmetries': cmd_symmetries,
    'span': cmd_span,
    'dual': cmd_dual,
    'sieve': cmd_sieve,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> GQArgumentParser:
    common = GQArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'text'], default='json', help='Output format (default: json)')
    common.add_argument('--report', '-r', metavar='FILE', help='Also write the full JSON result to FILE')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED, help=f'Sampling seed (default: {DEFAULT_SEED})')

    budget = GQArgumentParser(add_help=False)
    budget.add_argument('--node-budget', type=int, default=DEFAULT_NODE_BUDGET,
                        help=f'Search node budget (default: {DEFAULT_NODE_BUDGET})')

    parser = GQArgumentParser(description='Generalized quadrangles, central symmetries and the (s,t) sieve')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('build', parents=[common], help='Construct a classical GQ')
    p.add_argument('--family', required=True, choices=FAMILIES)
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--out', '-o', help='Geometry JSON to write (default: stdout)')
    p.add_argument('--force', action='store_true', help='Build above the point limit')

    p = sub.add_parser('verify', parents=[common], help='Check the GQ axioms of a geometry file')
    p.add_argument('file_path')
    p.add_argument('--all-violations', action='store_true', help='Collect every violation')

    p = sub.add_parser('report', parents=[common, budget], help='Run property checks on a geometry file')
    p.add_argument('file_path')
    p.add_argument('--checks', default=','.join(DEFAULT_REPORT_CHECKS),
                   help=f"Comma-separated subset of {','.join(REPORT_CHECKS)}, or 'all'")
    p.add_argument('--sample-size', type=int, default=DEFAULT_SAMPLE_SIZE)

    p = sub.add_parser('symmetries', parents=[common, budget], help='Full symmetry groups')
    p.add_argument('file_path')
    p.add_argument('--point', type=int, help='Only the group about this point')

    p = sub.add_parser('span', parents=[common], help='Trace and span of two points')
    p.add_argument('file_path')
    p.add_argument('--x', type=int, required=True)
    p.add_argument('--y', type=int, required=True)

    p = sub.add_parser('dual', parents=[common], help='Write the dual geometry')
    p.add_argument('file_path')
    p.add_argument('--out', '-o', help='Geometry JSON to write (default: stdout)')

    p = sub.add_parser('sieve', parents=[common], help='Run sieve cases from the data file')
    p.add_argument('--case', action='append', help='Case name (repeatable)')
    p.add_argument('--all', action='store_true', help='Every case in the data file')
    p.add_argument('--verify-cert', action='store_true', help='Recompute divisor certificates instead of scanning')
    p.add_argument('--q-max', type=int, help="Override the case's largest q")
    p.add_argument('--jobs', type=int, default=DEFAULT_JOBS, help='Worker processes for the q scan')
    p.add_argument('--cases-file', help='Case data file (default: $GQ_DATA_DIR or scripts/data)')
    return parser


def main(argv: Optional[List[str]] = None):
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.from_args(args)
    except ValueError as e:
        print(json.dumps({'error': str(e)}))
        sys.exit(EXIT_INPUT_ERROR)

    try:
        result, code = _DISPATCH[config.command](config)
    except SearchBudgetExceeded as e:
        print(f"Error: {e}; raise --node-budget to continue", file=sys.stderr)
        print(json.dumps({'error': str(e)}))
        sys.exit(EXIT_INPUT_ERROR)
    except GeometryError as e:
        print(json.dumps({'error': str(e), 'witness': e.witness}, indent=2))
        sys.exit(EXIT_CHECK_FAILED)
    except (ValueError, OSError) as e:
        print(json.dumps({'error': str(e)}))
        sys.exit(EXIT_INPUT_ERROR)

    if config.report:
        write_json(result, config.report)
    emit(result, config.fmt)
    sys.exit(code)


if __name__ == '__main__':
    main()
