import pytest
from hypothesis import given, settings, strategies as st

from endotheory.corpus import ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS, load_corpus
from endotheory.errors import ArityConflictError, FormulaSyntaxError, InadmissibleSubstitution, SignatureError
from endotheory.formulas import (
    And, Eq, ExistsObj, ExistsPred, ForallObj, ForallPred, Hint, Iff, Implies, Not, Or, Plus, Pred, Signature,
    Times, all_object_vars, check_signature, expand_abbreviations, free_vars, is_admissible, is_core,
    is_sentence, language_of, parse, parse_many, pretty, substitute, to_sexp,
)

VARS = ['x', 'y', 'z', 'u', 'x1', 'x2']


def formulas(second_order=False):
    v = st.sampled_from(VARS)
    atoms = [st.builds(Eq, v, v), st.builds(Plus, v, v, v)]
    if second_order:
        atoms.append(st.builds(lambda n, args: Pred(n, tuple(args)), st.just('P'), st.lists(v, min_size=1, max_size=1)))
    else:
        atoms.append(st.builds(Times, v, v, v))

    def extend(inner):
        parts = [st.builds(Not, inner), st.builds(And, inner, inner), st.builds(Or, inner, inner),
                 st.builds(Implies, inner, inner), st.builds(Iff, inner, inner),
                 st.builds(ForallObj, v, inner), st.builds(ExistsObj, v, inner)]
        if second_order:
            hints = st.sampled_from([None, Hint('full'), Hint('subgroup'), Hint('card', bound=2)])
            parts += [st.builds(ForallPred, st.just('P'), st.just(1), hints, inner),
                      st.builds(ExistsPred, st.just('P'), st.just(1), hints, inner)]
        return st.one_of(parts)

    return st.recursive(st.one_of(atoms), extend, max_leaves=12)


def test_parse_examples():
    assert parse('(forall x (eq x x))') == ForallObj('x', Eq('x', 'x'))
    f = parse('(exists2 (P 1) (pred P x))')
    assert free_vars(f) == (frozenset({'x'}), frozenset())
    assert parse('(plus x y z)') == Plus('x', 'y', 'z')


def test_parse_hints():
    f = parse('(forall2 (F 2 homfrom:B) (exists2 (Q 1 card<=3) (pred Q x)))')
    assert f.hint == Hint('homfrom', param='B')
    assert f.body.hint == Hint('card', bound=3)
    assert free_vars(f)[1] == frozenset({('B', 1)})


@pytest.mark.parametrize('text', [
    '(forall x (eq x x)', '(eq x)', '(frob x y)', '(forall2 (P 1 weird) (pred P x))', '', '(eq x y) (eq y x)',
])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_parse_error_reports_position():
    with pytest.raises(FormulaSyntaxError, match='2'):
        parse_many('(eq x y)\n(frob x)')


def test_arity_is_part_of_predicate_identity():
    with pytest.raises(ArityConflictError):
        parse('(and (pred P x) (pred P x y))')


def test_free_vars_examples():
    assert free_vars(parse('(forall x1 (eq x2 x1))'))[0] == {'x2'}
    assert free_vars(parse('(plus x1 x2 x3)'))[0] == {'x1', 'x2', 'x3'}
    f = parse('(forall x (eq x x))')
    assert free_vars(f) == (frozenset(), frozenset()) and is_sentence(f)


def test_substitution_examples():
    f = parse('(forall x1 (eq x2 x1))')
    assert not is_admissible(f, 'x1', 'x2')
    with pytest.raises(InadmissibleSubstitution):
        substitute(f, 'x1', 'x2')
    assert substitute(f, 'x3', 'x2') == parse('(forall x1 (eq x3 x1))')
    assert substitute(f, 'x2', 'x2') is f


def test_capture_avoiding_substitution_renames_with_lowest_index():
    f = parse('(forall x1 (eq x2 x1))')
    assert substitute(f, 'x1', 'x2', rename=True) == parse('(forall x3 (eq x1 x3))')


@settings(max_examples=300, deadline=None)
@given(formulas(), st.sampled_from(VARS), st.sampled_from(VARS))
def test_free_variable_equation_for_substitution(f, t, x):
    free = free_vars(f)[0]
    if not is_admissible(f, t, x):
        with pytest.raises(InadmissibleSubstitution):
            substitute(f, t, x)
        return
    g = substitute(f, t, x)
    expected = (free - {x}) | {t} if x in free else free
    assert free_vars(g)[0] == expected


@settings(max_examples=300, deadline=None)
@given(formulas(), st.sampled_from(VARS), st.sampled_from(VARS))
def test_renaming_substitution_always_succeeds(f, t, x):
    free = free_vars(f)[0]
    g = substitute(f, t, x, rename=True)
    assert free_vars(g)[0] == ((free - {x}) | {t} if x in free else free)


def test_abbreviation_examples():
    phi, psi = parse('(eq x y)'), parse('(plus x y z)')
    assert expand_abbreviations(Or(phi, psi)) == Not(And(Not(phi), Not(psi)))
    assert expand_abbreviations(ExistsObj('x', phi)) == Not(ForallObj('x', Not(phi)))
    core = parse('(not (and (eq x y) (forall z (plus z z z))))')
    assert expand_abbreviations(core) == core


@settings(max_examples=200, deadline=None)
@given(formulas(second_order=True))
def test_expansion_lands_in_core_and_keeps_free_vars(f):
    g = expand_abbreviations(f)
    assert is_core(g)
    assert free_vars(g) == free_vars(f)


@settings(max_examples=300, deadline=None)
@given(formulas(second_order=True))
def test_print_parse_inverse_on_generated_formulas(f):
    assert parse(to_sexp(f)) == f
    assert parse(pretty(f, width=30)) == f
    assert to_sexp(parse(to_sexp(f))) == to_sexp(f)


@pytest.mark.parametrize('name', [ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS])
def test_print_parse_inverse_on_corpus(name):
    for entry in load_corpus(name):
        f = entry.formula
        assert to_sexp(f) == entry.sentence
        assert parse(pretty(f)) == f
        assert ' '.join(pretty(f).split()).replace('( ', '(') == ' '.join(entry.sentence.split())


def test_whitespace_is_insignificant():
    assert parse('( forall  x\n ( eq x x ) )') == parse('(forall x (eq x x))')


def test_languages_and_signatures():
    assert language_of(parse('(plus x y z)')) == 'group'
    assert language_of(parse('(times x y z)')) == 'ring'
    assert language_of(parse('(pred P x)')) == 'group2'
    with pytest.raises(SignatureError):
        check_signature(parse('(times x y z)'), Signature.GROUP)
    with pytest.raises(SignatureError):
        check_signature(parse('(pred P x)'), Signature.RING)
    with pytest.raises(SignatureError):
        language_of(parse('(and (pred P x) (times x y z))'))


def test_all_object_vars_includes_bound():
    assert all_object_vars(parse('(forall x (exists y (eq x z)))')) == {'x', 'y', 'z'}
