import json

import pytest

from endotheory.corpus import (
    ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS, corpus_groups, load_corpus, read_corpus_file,
)
from endotheory.errors import EndotheoryError, FormulaSyntaxError
from endotheory.formulas import is_sentence
from endotheory.golden import audit, compute_golden, groups_up_to, load_golden
from endotheory.pgroup import PGroupShape
from endotheory.translate import TRANSLATION_RULES, translation_rules_used


def test_roundtrip_corpus_shape():
    entries = load_corpus(ROUNDTRIP_CORPUS)
    assert len(entries) >= 10
    used = set()
    for e in entries:
        assert e.language == 'ring' and is_sentence(e.formula)
        used.update(translation_rules_used(e.formula))
        assert set(e.expected) == set(corpus_groups(ROUNDTRIP_CORPUS))
    assert used == set(TRANSLATION_RULES)
    assert all(PGroupShape.parse(s).order <= 8 for s in corpus_groups(ROUNDTRIP_CORPUS))


def test_second_order_corpus_shape():
    entries = load_corpus(SECOND_ORDER_CORPUS)
    assert len(entries) == 5
    assert all(e.language == 'group2' and is_sentence(e.formula) for e in entries)


def test_sentence_file_entries(tmp_path):
    path = tmp_path / 'two.sexp'
    path.write_text('; comment\n(forall x (eq x x))\n\n(exists y\n  (plus y y y))\n')
    entries = read_corpus_file(path)
    assert [e.id for e in entries] == ['two.sexp:2', 'two.sexp:4']
    assert entries[1].sentence == '(exists y (plus y y y))'


@pytest.mark.parametrize('text,where', [
    ('(forall x (eq x x))\n(eq x', ':2'), ('(eq x x))', ':1'), ('(eq x x)\nstray', ':2'), ('\n(frob x)', 'bad.sexp:2: unknown form'),
])
def test_sentence_file_errors_name_the_line(tmp_path, text, where):
    path = tmp_path / 'bad.sexp'
    path.write_text(text)
    with pytest.raises(FormulaSyntaxError, match=where):
        read_corpus_file(path)


def test_json_corpus_file(tmp_path):
    path = tmp_path / 'c.json'
    path.write_text(json.dumps({'entries': [{'id': 'a', 'language': 'group', 'sentence': '(forall x (eq x x))'}]}))
    assert read_corpus_file(path)[0].formula is not None
    path.write_text(json.dumps({'entries': [{'id': 'a', 'language': 'group', 'sentence': '(eq x x)'}] * 2}))
    with pytest.raises(EndotheoryError):
        read_corpus_file(path)
    path.write_text(json.dumps({'entries': [{'id': 'a'}]}))
    with pytest.raises(EndotheoryError):
        read_corpus_file(path)


def test_groups_up_to():
    shapes = groups_up_to(16)
    assert len(shapes) == len(set(shapes))
    assert all(s.order <= 16 for s in shapes)
    # 2-groups of order 16 are the five partitions of 4
    assert sum(1 for s in shapes if s.order == 16) == 5


def _without_audit(rows):
    return [{k: v for k, v in r.items() if k != 'audit'} for r in rows]


@pytest.fixture(scope='module')
def golden_pair():
    return compute_golden(), load_golden()


def test_golden_values_are_reproduced(golden_pair):
    fresh, frozen = golden_pair
    assert _without_audit(frozen) == fresh


def test_golden_values_pass_their_oracles(golden_pair):
    fresh, _ = golden_pair
    audited = 0
    forced = sum(1 for r in fresh if r['kind'] in ('Exept', 'Card_l')
                 or (r['kind'] == 'Psi_n' and not r['params'].get('literal')))
    for row in fresh:
        verdict = audit(row['kind'], row['params'], PGroupShape.parse(row['structure']), row['value'])
        assert verdict is not False, row['id']
        audited += verdict is True
    assert audited == forced


def test_exept_false_and_psi_n_tracks_exponent(golden_pair):
    fresh, _ = golden_pair
    for row in fresh:
        shape = PGroupShape.parse(row['structure'])
        if row['kind'] == 'Exept':
            assert row['value'] is False
        if row['kind'] == 'Psi_n' and not row['params'].get('literal'):
            assert row['value'] == (shape.exponent <= row['params']['n'])
