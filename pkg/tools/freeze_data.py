"""Regenerate the frozen files under src/endotheory/data.

Refuses to write the golden file when any oracle audit fails, and records
for each corpus entry how far the reference evaluator could confirm it.
"""
import argparse
import json
from pathlib import Path

from endotheory.corpus import ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS
from endotheory.errors import ResourceCapError
from endotheory.evaluation import Evaluator
from endotheory.formulas import parse
from endotheory.golden import GOLDEN_FILE, audit, catalog_exports, compute_golden
from endotheory.pgroup import PGroupShape
from endotheory.reference import ReferenceEvaluator
from endotheory.structures import group_structure, ring_structure
from endotheory.translate import translation_rules_used

DATA = Path(__file__).resolve().parent.parent / 'src' / 'endotheory' / 'data'

ROUNDTRIP_GROUPS = ['p=2;exps=1', 'p=2;exps=2', 'p=3;exps=1', 'p=2;exps=1,1', 'p=2;exps=3',
                    'p=2;exps=1,2', 'p=2;exps=1,1,1', 'p=5;exps=1', 'p=7;exps=1']

ROUNDTRIP_SENTENCES = {
    'commutative': '(forall x (forall y (forall u (forall v (implies (and (times u x y) (times v y x)) (eq u v))))))',
    'trivial': '(forall x (forall y (eq x y)))',
    'nontrivial_idempotent':
        '(exists e (and (times e e e) (and (not (plus e e e)) (not (forall y (times y e y))))))',
    'characteristic_two': '(forall x (exists z (and (plus z x x) (plus z z z))))',
    'square_zero_element': '(exists x (and (not (plus x x x)) (exists y (and (times y x x) (plus y y y)))))',
    'additive_neutral': '(exists z (forall x (plus x x z)))',
    'noncommuting_pair': '(exists x (exists y (exists u (and (times u x y) (not (times u y x))))))',
    'multiplicative_unit': '(exists e (forall y (and (times y e y) (times y y e))))',
    'boolean': '(forall x (times x x x))',
    'squares_zero_or_fixed': '(forall x (exists y (and (times y x x) (or (eq y x) (plus y y y)))))',
    'zero_divisors': '(exists x (exists y (and (and (not (plus x x x)) (not (plus y y y))) '
                     '(exists t (and (times t x y) (plus t t t))))))',
    'absorbing_idempotent_pair': '(exists e (exists f (and (and (times e e e) (times f f f)) '
                                 '(and (not (eq e f)) (exists t (and (times t e f) (eq t e)))))))',
}

SECOND_ORDER_GROUPS = ['p=2;exps=1', 'p=3;exps=1', 'p=2;exps=2', 'p=2;exps=1,1']

SECOND_ORDER_SENTENCES = {
    'halves_form_a_set': '(exists2 (P 1 full) (forall x (iff (pred P x) (exists y (plus x y y)))))',
    'closed_sets_contain_zero':
        '(forall2 (P 1 full) (implies (and (exists x (pred P x)) (forall x (forall y (implies (and (pred P x) '
        '(pred P y)) (forall z (implies (plus z x y) (pred P z))))))) (exists z (and (pred P z) (plus z z z)))))',
    'fixed_point_free_map':
        '(exists2 (F 2 full) (and (forall x (exists y (pred F x y))) (and (forall x (forall y (forall z '
        '(implies (and (pred F x y) (pred F x z)) (eq y z))))) (forall x (forall y (implies (pred F x y) '
        '(not (eq x y))))))))',
    'extensionality':
        '(forall2 (P 1 full) (forall2 (Q 1 full) (implies (and (forall x (implies (pred P x) (pred Q x))) '
        '(forall x (implies (pred Q x) (pred P x)))) (forall x (iff (pred P x) (pred Q x))))))',
    'proper_nontrivial_subgroup':
        '(exists2 (P 1 full) (and (and (exists z (and (pred P z) (plus z z z))) (forall x (forall y '
        '(implies (and (pred P x) (pred P y)) (forall z (implies (plus x z y) (pred P z))))))) '
        '(and (exists x (not (pred P x))) (exists x (and (pred P x) (not (plus x x x)))))))',
}


# the naive evaluator is only run where it finishes in seconds
REFERENCE_MAX_CARRIER = 16


def _reference(structure, f):
    if structure.n > REFERENCE_MAX_CARRIER:
        return None
    try:
        return ReferenceEvaluator(structure).evaluate(f)
    except ResourceCapError:
        return None


def freeze_roundtrip():
    entries = []
    for name, text in ROUNDTRIP_SENTENCES.items():
        f = parse(text)
        expected, confirmed = {}, []
        for spec in ROUNDTRIP_GROUPS:
            R = ring_structure(PGroupShape.parse(spec))
            value = Evaluator(R).evaluate(f)
            ref = _reference(R, f)
            if ref is not None:
                if ref != value:
                    raise SystemExit(f'{name} on End({spec}): evaluators disagree')
                confirmed.append(spec)
            expected[spec] = value
        entries.append({
            'id': name, 'language': 'ring', 'sentence': text, 'expected': expected,
            'rules': translation_rules_used(f),
            'provenance': '[DERIVED] exhaustive evaluation over End(A); the reference evaluator agrees on '
                          + (', '.join(confirmed) if confirmed else 'no group within its size limit'),
        })
    return {'groups': ROUNDTRIP_GROUPS, 'entries': entries}


def freeze_second_order():
    entries = []
    for name, text in SECOND_ORDER_SENTENCES.items():
        f = parse(text)
        expected = {}
        for spec in SECOND_ORDER_GROUPS:
            G = group_structure(PGroupShape.parse(spec))
            value = Evaluator(G).evaluate(f)
            ref = _reference(G, f)
            if ref is not None and ref != value:
                raise SystemExit(f'{name} on {spec}: evaluators disagree')
            expected[spec] = value
        entries.append({'id': name, 'language': 'group2', 'sentence': text, 'expected': expected,
                        'provenance': '[DERIVED] full enumeration of the predicate ranges'})
    return {'groups': SECOND_ORDER_GROUPS, 'entries': entries}


def freeze_golden():
    rows = compute_golden()
    bad = []
    for row in rows:
        verdict = audit(row['kind'], row['params'], PGroupShape.parse(row['structure']), row['value'])
        row['audit'] = {True: 'oracle', None: 'unconstrained'}.get(verdict, 'FAILED')
        if verdict is False:
            bad.append(row['id'])
    if bad:
        raise SystemExit('oracle audit failed: ' + ', '.join(bad))
    return {'cases': rows}


def _write(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + '\n')
    print('wrote', path)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument('what', nargs='*', default=['roundtrip', 'second-order', 'golden', 'catalog'])
    args = ap.parse_args()
    DATA.mkdir(exist_ok=True)
    if 'roundtrip' in args.what:
        _write(DATA / ROUNDTRIP_CORPUS, freeze_roundtrip())
    if 'second-order' in args.what:
        _write(DATA / SECOND_ORDER_CORPUS, freeze_second_order())
    if 'golden' in args.what:
        _write(DATA / GOLDEN_FILE, freeze_golden())
    if 'catalog' in args.what:
        (DATA / 'catalog').mkdir(exist_ok=True)
        for name, text in catalog_exports().items():
            (DATA / 'catalog' / name).write_text(text)
        print('wrote', DATA / 'catalog')


if __name__ == '__main__':
    main()
