#!/usr/bin/env python3
"""
Core geometry-file and report utilities used by other scripts.
Not meant to be called directly.
"""

import json
import shutil
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple


class GeometryError(ValueError):
    """A geometry or group check failed; `witness` names the offending objects."""

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class SearchBudgetExceeded(RuntimeError):
    """The symmetry certifier ran out of search nodes."""


def keep_previous(path: str) -> Optional[str]:
    """Copy an existing geometry file to `<stem>.prevN<suffix>`, N the first free number."""
    p = Path(path)
    if not p.is_file():
        return None
    n = 1
    while (kept := p.with_name(f"{p.stem}.prev{n}{p.suffix}")).exists():
        n += 1
    shutil.copy2(p, kept)
    return str(kept)


@dataclass
class GeometryRecord:
    """On-disk form of a point-line geometry."""
    points: List[Any]
    lines: List[List[int]]
    family: str = "abstract"
    q: Optional[int] = None
    order: Optional[Tuple[int, int]] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def num_points(self) -> int:
        return len(self.points)

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'family': self.family,
            'q': self.q,
            'order': list(self.order) if self.order else None,
            'points': self.points,
            'lines': [list(line) for line in self.lines],
        }
        out.update(self.extra)
        return out


def parse_geometry(content: str) -> Tuple[Optional[GeometryRecord], List[str]]:
    """
    Parse geometry JSON into a GeometryRecord.

    Returns:
        Tuple of (record or None, parse_errors)
    """
    errors = []
    try:
        data = json.loads(content)
    except json.JSONDecodeError as e:
        return None, [f"Invalid JSON: {e}"]

    if not isinstance(data, dict):
        return None, ["Geometry file must hold a JSON object"]

    points = data.get('points')
    lines = data.get('lines')
    if not isinstance(points, list) or not points:
        errors.append("Missing or empty 'points' list")
    if not isinstance(lines, list) or not lines:
        errors.append("Missing or empty 'lines' list")
    if errors:
        return None, errors

    n = len(points)
    for i, line in enumerate(lines):
        if not isinstance(line, list) or not all(isinstance(x, int) for x in line):
            errors.append(f"Line {i}: expected a list of point indices")
        elif any(x < 0 or x >= n for x in line):
            errors.append(f"Line {i}: point index out of range 0..{n - 1}")

    order = data.get('order')
    if order is not None and (not isinstance(order, list) or len(order) != 2):
        errors.append("'order' must be a two-element list [s, t]")
        order = None

    q = data.get('q')
    if q is not None and not isinstance(q, int):
        errors.append("'q' must be an integer")
        q = None

    if errors:
        return None, errors

    known = {'family', 'q', 'order', 'points', 'lines'}
    record = GeometryRecord(
        points=points,
        lines=lines,
        family=data.get('family') or 'abstract',
        q=q,
        order=tuple(order) if order else None,
        extra={k: v for k, v in data.items() if k not in known},
    )
    return record, []


def parse_geometry_file(file_path: str) -> Tuple[Optional[GeometryRecord], List[str]]:
    """Read and parse a geometry JSON file."""
    try:
        content = Path(file_path).read_text(encoding='utf-8-sig')
    except OSError as e:
        return None, [f"Cannot read {file_path}: {e}"]
    return parse_geometry(content)


def write_json(payload: Dict[str, Any], file_path: str) -> None:
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2, ensure_ascii=False)
        f.write('\n')


def write_geometry(record: GeometryRecord, file_path: str) -> None:
    write_json(record.to_dict(), file_path)


def check_result(name: str, passed: Optional[bool], witness: Optional[Dict[str, Any]] = None,
                 **details) -> Dict[str, Any]:
    """One entry of a property report; passed=None marks a skipped check."""
    status = 'skipped' if passed is None else ('pass' if passed else 'fail')
    result = {'name': name, 'status': status}
    result.update(details)
    if witness is not None and status == 'fail':
        result['witness'] = witness
    return result


def all_passed(results: List[Dict[str, Any]]) -> bool:
    """True when no non-advisory entry failed."""
    return all(r['status'] != 'fail' for r in results if not r.get('advisory'))


def _text_lines(value: Any, prefix: str = '') -> List[str]:
    if isinstance(value, dict) and value:
        out = []
        for key, sub in value.items():
            out.extend(_text_lines(sub, f"{prefix}{key}."))
        return out
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        out = []
        for i, sub in enumerate(value):
            out.extend(_text_lines(sub, f"{prefix}{i}."))
        return out
    label = prefix.rstrip('.')
    return [f"{label}: {json.dumps(value)}"]


def emit(result: Dict[str, Any], fmt: str = 'json', stream=None) -> None:
    """Print a result as indented JSON or as flat `key: value` lines."""
    stream = stream or sys.stdout
    if fmt == 'text':
        print('\n'.join(_text_lines(result)), file=stream)
    else:
        print(json.dumps(result, indent=2), file=stream)


def warn(message: str) -> None:
    print(f"Warning: {message}", file=sys.stderr)
