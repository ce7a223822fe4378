'''Frozen finite-scale values of the sentences whose intended reading needs
infinite groups (psi_n, the psi variants, Exept, Card_l).

`compute_golden` evaluates every case from scratch, `audit` checks each
value against an algebraic oracle where the finite value is forced, and
the frozen copy in data/golden.json is the regression anchor.
'''
from __future__ import annotations

import json
from collections import Counter
from importlib import resources

from .catalog import (
    GroupFormulaKind, RingFormulaKind, build_group_formula, build_ring_formula, declared_parameters,
)
from .endoring import Endomorphism, ring_size
from .evaluation import Evaluator
from .formulas import pretty
from .pgroup import PGroupShape
from .structures import group_structure, ring_structure

GOLDEN_FILE = 'golden.json'

# every shape with |End(A)| <= 256
GOLDEN_RING_SHAPES = [
    PGroupShape(2, (1,)), PGroupShape(2, (2,)), PGroupShape(2, (3,)), PGroupShape(2, (4,)),
    PGroupShape(2, (1, 1)), PGroupShape(2, (1, 2)), PGroupShape(2, (1, 3)), PGroupShape(2, (2, 2)),
    PGroupShape(3, (1,)), PGroupShape(3, (2,)), PGroupShape(3, (1, 1)),
    PGroupShape(5, (1,)), PGroupShape(7, (1,)),
]
# psi3 nests four ring quantifiers; beyond this ring size it takes minutes
PSI3_RING_LIMIT = 64
EXEPT_MAX_ORDER = 16
# numeric parameters used for the exported catalog texts
CATALOG_DEFAULTS = {'p': 2, 'n': 4, 'k': 2, 'l': 1, 'i': 1}


def groups_up_to(max_order: int, primes=(2, 3, 5, 7, 11, 13)) -> list[PGroupShape]:
    '''All p-group shapes of order at most max_order, small first.'''
    out = []
    for p in primes:
        k = 1
        while p ** k <= max_order:
            out.extend(PGroupShape(p, part) for part in _partitions(k))
            k += 1
    return sorted(out, key=lambda s: (s.order, s.p, s.exps))


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield rest + (first,)


def layer_projection(shape: PGroupShape, level: int) -> Endomorphism:
    '''Projection onto the summands of exponent p^level along the others.'''
    r = shape.rank
    return Endomorphism(shape, tuple(tuple(int(i == j and shape.exps[i] == level) for j in range(r))
                                     for i in range(r)))


def golden_cases():
    '''(case id, language, kind, numeric params, shape) in a fixed order.'''
    for shape in GOLDEN_RING_SHAPES:
        p = shape.p
        for n in (p, p * p, p ** 3):
            yield f'Psi_n[n={n}]@{shape}', 'ring', 'Psi_n', {'p': p, 'n': n}, shape
            yield f'Psi_n_literal[n={n}]@{shape}', 'ring', 'Psi_n', {'p': p, 'n': n, 'literal': True}, shape
        yield f'Psi2@{shape}', 'ring', 'Psi2', {'p': p}, shape
        yield f'Psi2Tilde[n={p * p}]@{shape}', 'ring', 'Psi2Tilde', {'p': p, 'n': p * p}, shape
        if ring_size(shape) <= PSI3_RING_LIMIT:
            yield f'Psi3@{shape}', 'ring', 'Psi3', {'p': p}, shape
        yield f'Psi4@{shape}', 'ring', 'Psi4', {'p': p}, shape
        yield f'Psi5@{shape}', 'ring', 'Psi5', {'p': p}, shape
        k = shape.max_exp
        for l in range(1, k + 1):
            yield f'Card_l[k={k},l={l}]@{shape}', 'ring', 'Card_l', {'p': p, 'k': k, 'l': l}, shape
    for shape in groups_up_to(EXEPT_MAX_ORDER):
        yield f'Exept@{shape}', 'group', 'Exept', {'p': shape.p}, shape


def evaluate_case(language, kind, params, shape) -> bool:
    if language == 'group':
        return Evaluator(group_structure(shape)).evaluate(build_group_formula(kind, params))
    f = build_ring_formula(kind, params)
    valuation = {}
    if kind == 'Card_l':
        valuation = {f'rho{i}': layer_projection(shape, i) for i in range(1, params['k'] + 1)}
    return Evaluator(ring_structure(shape)).evaluate(f, valuation)


def audit(kind: str, params: dict, shape: PGroupShape, value: bool) -> bool | None:
    '''Oracle verdict on a golden value; None where nothing is forced at finite scale.'''
    if kind == 'Psi_n' and not params.get('literal'):
        return value == (shape.exponent <= params['n'])
    if kind == 'Exept':
        return value is False
    if kind == 'Card_l':
        mult = Counter(shape.exps)
        l = params['l']
        return value == all(mult[l] >= mult[i] for i in range(1, params['k'] + 1))
    return None


def compute_golden() -> list[dict]:
    rows = []
    for case_id, language, kind, params, shape in golden_cases():
        value = evaluate_case(language, kind, params, shape)
        rows.append({'id': case_id, 'language': language, 'kind': kind, 'params': params,
                     'structure': str(shape), 'value': value})
    return rows


def load_golden() -> list[dict]:
    text = resources.files('endotheory').joinpath('data', GOLDEN_FILE).read_text()
    return json.loads(text)['cases']


def catalog_exports() -> dict[str, str]:
    """File name -> sentence-grammar text for every catalog kind."""
    out = {}
    for enum, build in ((GroupFormulaKind, build_group_formula), (RingFormulaKind, build_ring_formula)):
        for kind in enum:
            names, nums = declared_parameters(kind)
            params = {k: CATALOG_DEFAULTS[k] for k in nums if k in CATALOG_DEFAULTS}
            header = [f'; {kind.value}']
            if names:
                header.append('; free: ' + ' '.join(names))
            if params:
                header.append('; params: ' + ' '.join(f'{k}={v}' for k, v in params.items()))
            out[f'{kind.value}.sexp'] = '\n'.join(header) + '\n' + pretty(build(kind, params)) + '\n'
    return out


def read_catalog_export(name: str) -> str:
    return resources.files('endotheory').joinpath('data', 'catalog', name).read_text()
