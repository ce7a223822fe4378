import itertools

import pytest

from endotheory.catalog import (
    GroupFormulaKind, RingFormulaKind, build_group_formula, build_ring_formula, declared_parameters,
)
from endotheory.endoring import Endomorphism, enumerate_endos, is_primitive_idempotent
from endotheory.errors import EndotheoryError, SignatureError
from endotheory.evaluation import Evaluator
from endotheory.formulas import (
    Eq, ExistsObj, ForallPred, Iff, Pred, Times, free_vars, language_of, parse, walk,
)
from endotheory.golden import catalog_exports, read_catalog_export
from endotheory.pgroup import PGroupShape, enumerate_subgroups, order
from endotheory.structures import group_structure, ring_structure
from endotheory.translate import (
    TRANSLATION_RULES, translate_theorem42, translate_theorem43, translation_rules_used,
)
from endotheory.verify import base_admitted

Z2 = PGroupShape(2, (1,))
Z4 = PGroupShape(2, (2,))
Z2_Z2 = PGroupShape(2, (1, 1))
Z2_Z4 = PGroupShape(2, (1, 2))

COMMUTATIVE = parse('(forall x (forall y (forall u (forall v (implies (and (times u x y) (times v y x)) (eq u v))))))')
TRIVIAL_RING = parse('(forall x (forall y (eq x y)))')


def _holds(kind, shape, valuation, **params):
    return Evaluator(group_structure(shape)).evaluate(build_group_formula(kind, params), valuation)


def test_every_kind_builds_and_has_declared_free_variables():
    for kind in GroupFormulaKind:
        names, nums = declared_parameters(kind)
        f = build_group_formula(kind, {**{n: n for n in names}, **({'p': 2} if 'p' in nums else {})})
        objs, preds = free_vars(f)
        assert {v for v in objs} | {name for name, _ in preds} == set(names)
        assert language_of(f) in ('group', 'group2')
    for kind in RingFormulaKind:
        names, nums = declared_parameters(kind)
        params = {k: v for k, v in {'p': 2, 'n': 4, 'k': 2, 'l': 1, 'i': 1}.items() if k in nums}
        if '...' not in names:
            params.update({n: n for n in names})
        f = build_ring_formula(kind, params)
        assert language_of(f) in ('ring', 'group')
        if '...' not in names:
            assert set(free_vars(f)[0]) == set(names)
        else:
            assert set(free_vars(f)[0]) == {f'rho{j}' for j in range(1, params['k'] + 1)}


def test_builder_errors():
    with pytest.raises(EndotheoryError):
        build_group_formula('Nope')
    with pytest.raises(EndotheoryError):
        build_group_formula('Serv')
    with pytest.raises(EndotheoryError):
        build_group_formula('Gr', {'Q': 'X'})
    with pytest.raises(EndotheoryError):
        build_ring_formula('Phi_n', {'p': 2, 'n': 6})


def test_gr_on_every_subset_of_z4():
    S = group_structure(Z4)
    subs = {frozenset(H.members) for H in enumerate_subgroups(Z4)}
    els = list(Z4.elements())
    hits = 0
    for r in range(len(els) + 1):
        for subset in itertools.combinations(els, r):
            value = _holds('Gr', Z4, {('P', 1): subset})
            assert value == (frozenset(subset) in subs)
            hits += value
    assert hits == 3


@pytest.mark.parametrize('shape', [Z2, Z4, Z2_Z2, Z2_Z4, PGroupShape(3, (1, 1))], ids=str)
def test_divisible_and_base_on_subgroups(shape):
    for H in enumerate_subgroups(shape):
        members = list(H.members)
        assert _holds('D', shape, {('P', 1): members}, p=shape.p) == H.is_trivial()
        assert _holds('Base', shape, {('P', 1): members}, p=shape.p) == H.is_whole()


def test_order_comparison_and_bounded_subgroups():
    for a, b in itertools.product(Z2_Z4.elements(), repeat=2):
        assert _holds('OrdLeq', Z2_Z4, {'a1': a, 'a2': b}) == (order(a) <= order(b))
    for H in enumerate_subgroups(Z2_Z4):
        for a in Z2_Z4.elements():
            expected = all(order(h) <= order(a) for h in H)
            assert _holds('GOrd_a', Z2_Z4, {('P', 1): list(H.members), 'a': a}) == expected


def test_idem_star_on_z2_z4():
    table = enumerate_endos(Z2_Z4)
    ev = Evaluator(ring_structure(Z2_Z4))
    f = build_ring_formula('IdemStar')
    for e in table.elements:
        assert ev.evaluate(f, {'rho': e}) == is_primitive_idempotent(e, table)


def test_exponent_sentences_on_z2_z4():
    ev = Evaluator(ring_structure(Z2_Z4))
    assert ev.evaluate(build_ring_formula('Phi_n', p=2, n=4))
    assert not ev.evaluate(build_ring_formula('Phi_n', p=2, n=2))


def test_comp_on_coordinate_projections():
    ev = Evaluator(ring_structure(Z2_Z4))
    first = Endomorphism(Z2_Z4, ((1, 0), (0, 0)))
    second = Endomorphism(Z2_Z4, ((0, 0), (0, 1)))
    f = build_ring_formula('Comp', p=2, k=2)
    assert ev.evaluate(f, {'rho1': first, 'rho2': second})
    assert not ev.evaluate(f, {'rho1': first, 'rho2': first})


def test_exept_false_on_small_groups():
    for shape in (Z2, Z4, Z2_Z2, PGroupShape(3, (1,))):
        assert not Evaluator(group_structure(shape)).evaluate(build_group_formula('Exept', p=shape.p))


def test_catalog_exports_match_frozen_files():
    exports = catalog_exports()
    assert len(exports) == len(GroupFormulaKind) + len(RingFormulaKind)
    for name, text in exports.items():
        assert read_catalog_export(name) == text
        body = '\n'.join(line for line in text.splitlines() if not line.startswith(';'))
        parse(body)


# ---------------------------------------------------------------- translations

def _first(f, cls):
    return next(g for g in walk(f) if isinstance(g, cls))


def test_equality_translates_to_graph_equivalence():
    g = translate_theorem42(parse('(forall x1 (forall x2 (eq x1 x2)))'))
    inner = [h for h in walk(g) if isinstance(h, Iff) and isinstance(h.a, Pred) and isinstance(h.b, Pred)]
    assert inner and {inner[-1].a.name, inner[-1].b.name} == {'P_x1', 'P_x2'}
    assert not any(isinstance(h, (Eq,)) and {h.x, h.y} == {'x1', 'x2'} for h in walk(g))


def test_product_translates_to_composition_through_t():
    g = translate_theorem42(parse('(forall x1 (forall x2 (forall x3 (times x1 x2 x3))))'))
    witness = [h for h in walk(g) if isinstance(h, ExistsObj) and h.var == 't']
    assert witness
    body = witness[-1].body
    assert {p.name for p in walk(body) if isinstance(p, Pred)} == {'P_x2', 'P_x3'}
    assert not any(isinstance(h, Times) for h in walk(g))


def test_quantifiers_become_endo_guarded_predicate_quantifiers():
    g = translate_theorem42(COMMUTATIVE)
    quants = [h for h in walk(g) if isinstance(h, ForallPred)]
    assert [q.name for q in quants] == ['P_x', 'P_y', 'P_u', 'P_v']
    assert all(q.arity == 2 and q.hint.kind == 'endo' for q in quants)


def test_translating_twice_is_rejected():
    for tr in (translate_theorem42, lambda f: translate_theorem43(f, 2)):
        once = tr(COMMUTATIVE)
        with pytest.raises(SignatureError):
            tr(once)


def test_free_ring_variables_become_free_graph_predicates():
    g = translate_theorem42(parse('(times x y z)'))
    assert free_vars(g) == (frozenset(), frozenset({('P_x', 2), ('P_y', 2), ('P_z', 2)}))


def test_translation_needs_a_prime():
    with pytest.raises(EndotheoryError):
        translate_theorem43(COMMUTATIVE, 4)


def test_rules_used():
    assert translation_rules_used(COMMUTATIVE) == ['forall', 'equality', 'product']
    assert translation_rules_used(parse('(exists z (forall x (plus x x z)))')) == ['forall', 'exists', 'sum']
    assert set(TRANSLATION_RULES) == {'forall', 'exists', 'equality', 'sum', 'product'}


@pytest.mark.parametrize('shape', [Z2, Z4, Z2_Z2], ids=str)
@pytest.mark.parametrize('sentence', [COMMUTATIVE, TRIVIAL_RING, parse('(exists z (forall x (plus x x z)))')],
                         ids=['commutative', 'trivial', 'neutral'])
def test_both_translations_preserve_truth(shape, sentence):
    direct = Evaluator(ring_structure(shape)).evaluate(sentence)
    G = group_structure(shape)
    assert Evaluator(G).evaluate(translate_theorem42(sentence)) == direct
    assert Evaluator(G).evaluate(translate_theorem43(sentence, shape.p)) == direct


def test_commutativity_truth_pattern():
    assert Evaluator(ring_structure(Z4)).evaluate(COMMUTATIVE)
    assert Evaluator(group_structure(Z4)).evaluate(translate_theorem42(COMMUTATIVE))
    assert not Evaluator(ring_structure(Z2_Z2)).evaluate(COMMUTATIVE)
    assert not Evaluator(group_structure(Z2_Z2)).evaluate(translate_theorem42(COMMUTATIVE))


def test_trivial_ring_sentence_false_on_z2():
    assert not Evaluator(ring_structure(Z2)).evaluate(TRIVIAL_RING)
    assert not Evaluator(group_structure(Z2)).evaluate(translate_theorem43(TRIVIAL_RING, 2))


@pytest.mark.parametrize('shape', [Z2, Z4, Z2_Z2, Z2_Z4, PGroupShape(2, (3,)), PGroupShape(3, (1,))], ids=str)
def test_base_guard_admits_only_the_whole_group(shape):
    admitted = base_admitted(shape)
    assert len(admitted) == 1
    assert len(admitted[0]) == shape.order
