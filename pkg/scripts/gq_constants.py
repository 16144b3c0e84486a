"""
Shared limits, budgets and family data. Single source of truth.

Every script takes its defaults from here; command-line flags override
them per run.

To print the classical family table:
    python3 scripts/gq_constants.py --markdown
"""

import os
from pathlib import Path

# === Size guards ===
MAX_POINTS = 5000             # refuse larger geometries unless --force
MAX_FIELD_ORDER = 1024        # largest GF(p^f) with precomputed tables
EXHAUSTIVE_POINT_LIMIT = 45   # full-group checks up to here, seeded sampling above
GROUP_ORDER_LIMIT = 500_000   # explicit group enumeration stops here

# === Search and sampling ===
DEFAULT_NODE_BUDGET = 10 ** 7
DEFAULT_SEED = 1729
DEFAULT_SAMPLE_SIZE = 4000
DEFAULT_JOBS = 1

# === Exit codes ===
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CHECK_FAILED = 2

# === Sieve data ===
SIEVE_CASES_FILE = 'sieve_cases.json'
MAX_PHI_INDEX = 30            # largest cyclotomic index the group-order formulas use
CERT_CHECK_POINTS = 20        # random q values used to re-check a divisor certificate
_DEFAULT_DATA_DIR = Path(__file__).resolve().parent / 'data'


# === Classical families (canonical source) ===
# Orders are powers of q: (s, t) = (q^s_exp, q^t_exp). The symmetry exponent
# is the expected |Ẽ(p)| = q^sym_exp.
_FAMILIES = {
    'W3': {
        'title': 'W(3,q)',
        'kind': 'alternating',
        'dim': 4,
        'square_field': False,
        's_exp': 1, 't_exp': 1,
        'sym_exp': 1,
    },
    'Q4': {
        'title': 'Q(4,q)',
        'kind': 'quadratic',
        'dim': 5,
        'square_field': False,
        's_exp': 1, 't_exp': 1,
        'sym_exp': 0,
        'odd_q_only': True,  # even q builds, with a warning
    },
    'Qminus5': {
        'title': 'Q-(5,q)',
        'kind': 'quadratic',
        'dim': 6,
        'square_field': False,
        's_exp': 1, 't_exp': 2,
        'sym_exp': 0,
    },
    'H3': {
        'title': 'H(3,q^2)',
        'kind': 'hermitian',
        'dim': 4,
        'square_field': True,
        's_exp': 2, 't_exp': 1,
        'sym_exp': 1,
    },
    'H4': {
        'title': 'H(4,q^2)',
        'kind': 'hermitian',
        'dim': 5,
        'square_field': True,
        's_exp': 2, 't_exp': 3,
        'sym_exp': 1,
    },
}

FAMILIES = tuple(_FAMILIES)


def get_family_order(family, q):
    """Return the parameter dict of a classical family at q.

    Args:
        family: one of FAMILIES
        q: prime power (not validated here)

    Returns:
        Fresh dict with s, t, point/line counts, the expected symmetry
        group order and the form data.
    """
    if family not in _FAMILIES:
        raise ValueError(f"Unknown family '{family}' (expected one of {', '.join(FAMILIES)})")
    entry = _FAMILIES[family]
    s = q ** entry['s_exp']
    t = q ** entry['t_exp']
    return {
        'family': family,
        'title': entry['title'],
        'kind': entry['kind'],
        'dim': entry['dim'],
        'field_order': q * q if entry['square_field'] else q,
        's': s,
        't': t,
        'points': (1 + s) * (1 + s * t),
        'lines': (1 + t) * (1 + s * t),
        'symmetry_order': q ** entry['sym_exp'],
        'odd_q_only': entry.get('odd_q_only', False),
    }


def data_dir():
    """Directory holding the sieve case file; GQ_DATA_DIR overrides the bundled one."""
    override = os.environ.get('GQ_DATA_DIR')
    return Path(override) if override else _DEFAULT_DATA_DIR


def generate_markdown_table(q_values=(2, 3)):
    rows = ['| Family | (s,t) | ' + ' | '.join(f'|P| at q={q}' for q in q_values) + ' |',
            '|---|---|' + '---|' * len(q_values)]
    for family, entry in _FAMILIES.items():
        order = f"(q^{entry['s_exp']},q^{entry['t_exp']})".replace('^1', '')
        counts = [str(get_family_order(family, q)['points']) for q in q_values]
        rows.append(f"| {entry['title']} | {order} | " + ' | '.join(counts) + ' |')
    return '\n'.join(rows)


if __name__ == '__main__':
    import sys
    if '--markdown' in sys.argv:
        print(generate_markdown_table())
    else:
        print('Usage: python3 gq_constants.py --markdown')
        print('  --markdown  Print the classical family table to stdout')
        sys.exit(1)
