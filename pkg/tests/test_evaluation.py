import pytest

from endotheory.catalog import endom, gr, holds_at_zero, is_negative
from endotheory.corpus import ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS, corpus_groups, load_corpus
from endotheory.errors import BudgetExceeded, ResourceCapError, UnboundVariableError, UnknownGuardError
from endotheory.evaluation import Evaluator, evaluate, verify_hint_soundness
from endotheory.formulas import And, ExistsObj, ForallObj, ForallPred, Implies, Not, Pred, expand_abbreviations, parse
from endotheory.pgroup import PGroupShape
from endotheory.reference import reference_evaluate
from endotheory.structures import ModelBinding, Relation, group_structure, guard_enumerator, ring_structure

Z2 = PGroupShape(2, (1,))
Z4 = PGroupShape(2, (2,))
Z2_Z2 = PGroupShape(2, (1, 1))

COMMUTATIVE = '(forall x (forall y (forall u (forall v (implies (and (plus u x y) (plus v y x)) (eq u v))))))'
NONCOMMUTING = '(exists x (exists y (exists u (exists v (and (times u x y) (and (times v y x) (not (eq u v))))))))'


def _ev(structure, text, valuation=None, **kw):
    return Evaluator(structure, **kw).evaluate(parse(text) if isinstance(text, str) else text, valuation)


def test_first_order_examples():
    assert _ev(group_structure(Z2), COMMUTATIVE)
    assert not _ev(group_structure(Z2), '(forall x (exists y (plus x y y)))')
    assert _ev(ring_structure(Z2_Z2), NONCOMMUTING)
    assert not _ev(ring_structure(Z4), NONCOMMUTING)


def test_product_convention_in_ring_structure():
    S = ring_structure(Z2_Z2)
    # u = x*y means: apply x, then y
    for x in S.elements:
        for y in S.elements:
            u = S.elements[S.mul(S.index_of(x), S.index_of(y))]
            assert _ev(S, '(times u x y)', {'u': u, 'x': x, 'y': y})


def test_guard_counts():
    assert len(guard_enumerator(group_structure(Z4), 'EndoGraph', 2)) == 4
    assert len(guard_enumerator(group_structure(Z2_Z2), 'Subgroup', 1)) == 5
    assert len(guard_enumerator(group_structure(Z2_Z2), 'endo', 2)) == 16


def test_guard_errors():
    with pytest.raises(UnknownGuardError):
        guard_enumerator(group_structure(Z4), 'subgroup', 2)
    with pytest.raises(UnknownGuardError):
        guard_enumerator(group_structure(Z4), 'nonsense', 1)
    with pytest.raises(UnknownGuardError):
        guard_enumerator(ring_structure(Z4), 'subgroup', 1)


def test_hint_soundness_examples():
    assert verify_hint_soundness(group_structure(Z4), 'endo', 2, endom('P'))
    assert verify_hint_soundness(group_structure(Z2), 'subgroup', 1, gr('P'))


def test_wrong_guard_formula_detected():
    no_closure = And(holds_at_zero('P'),
                     ForallObj('a', Implies(Pred('P', ('a',)), ExistsObj('b', And(is_negative('b', 'a'), Pred('P', ('b',)))))))
    assert not verify_hint_soundness(group_structure(Z4), 'subgroup', 1, no_closure)
    assert not verify_hint_soundness(group_structure(Z2_Z2), 'subgroup', 1, no_closure)


def test_full_enumeration_cap_is_an_error():
    f = parse('(exists x (exists y (exists2 (P 2) (pred P x y))))')
    with pytest.raises(ResourceCapError):
        _ev(group_structure(PGroupShape(2, (1, 2))), f)
    assert _ev(group_structure(PGroupShape(2, (1, 2))), f, so_enum_cap=64)


def test_card_bound_enumerates_small_relations():
    S = group_structure(Z2_Z2)
    # some relation of at most one pair relates every element to something: false, 4 elements
    text = '(exists2 (P 2 card<={k}) (forall x (exists y (pred P x y))))'
    assert not _ev(S, text.format(k=1), so_enum_cap=64)
    assert _ev(S, text.format(k=4), so_enum_cap=64)


def test_unbound_variables_raise():
    with pytest.raises(UnboundVariableError):
        _ev(group_structure(Z2), '(eq x y)', {'x': Z2.zero})
    with pytest.raises(UnboundVariableError):
        _ev(group_structure(Z2), '(pred P x)', {'x': Z2.zero})


def test_valuations_accept_elements_and_sets():
    S = group_structure(Z4)
    two = Z4.element(2)
    assert _ev(S, '(pred P x)', {'x': two, 'P': [two, Z4.zero]})
    assert not _ev(S, '(pred P x)', {'x': Z4.element(1), ('P', 1): Relation.unary([0])})
    value, stats = evaluate(ModelBinding(S, {'x': two}), parse('(exists y (plus x y y))'))
    assert value and stats.as_dict()['quantifier_expansions'] >= 1


@pytest.mark.parametrize('name', [ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS])
def test_corpus_expectations_and_boolean_laws(name):
    for entry in load_corpus(name):
        f = entry.formula
        for spec, expected in entry.expected.items():
            shape = PGroupShape.parse(spec)
            S = ring_structure(shape) if entry.language == 'ring' else group_structure(shape)
            if S.n > 16:
                continue
            ev = Evaluator(S)
            assert ev.evaluate(f) == expected, (entry.id, spec)
            assert ev.evaluate(Not(Not(f))) == expected
            assert ev.evaluate(And(f, f)) == expected
            assert ev.evaluate(expand_abbreviations(f)) == expected


@pytest.mark.parametrize('name', [ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS])
def test_reference_evaluator_agrees_on_corpus(name):
    compared = 0
    for entry in load_corpus(name):
        for spec in corpus_groups(name):
            shape = PGroupShape.parse(spec)
            S = ring_structure(shape) if entry.language == 'ring' else group_structure(shape)
            if S.n > 8:
                continue
            fast = Evaluator(S).evaluate(entry.formula)
            try:
                slow = reference_evaluate(ModelBinding(S), entry.formula)
            except BudgetExceeded:
                continue
            assert slow == fast, (entry.id, spec)
            compared += 1
    assert compared >= 10


def test_no_hints_mode_agrees_with_explicit_guard():
    S = group_structure(Z2_Z2)
    body = '(exists x (and (pred P x) (plus x x x)))'
    hinted = parse(f'(forall2 (P 1 subgroup) {body})')
    guarded = ForallPred('P', 1, None, Implies(gr('P'), parse(body)))
    assert _ev(S, hinted) is _ev(S, guarded) is True
    assert _ev(S, hinted, use_hints=False) is False


def test_short_circuit_skips_expensive_right_operand():
    S = group_structure(PGroupShape(2, (1, 2)))
    expensive = '(forall x (forall2 (P 2) (pred P x x)))'
    with pytest.raises(ResourceCapError):
        _ev(S, expensive)
    assert not _ev(S, f'(and (forall x (plus x x x)) {expensive})')
    assert _ev(S, f'(or (exists x (plus x x x)) {expensive})')
