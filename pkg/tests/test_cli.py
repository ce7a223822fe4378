import csv
import io
import json
import subprocess
import sys
from importlib import resources

import pytest

import endotheory

from endotheory.cli import EXIT_CAP, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, run
from endotheory.formulas import parse

COMMUT = '(forall x (forall y (forall u (forall v (implies (and (plus u x y) (plus v y x)) (eq u v))))))\n'
NONCOMMUT = '(exists x (exists y (exists u (exists v (and (times u x y) (and (times v y x) (not (eq u v))))))))\n'
RING_COMMUT = '(forall x (forall y (forall u (forall v (implies (and (times u x y) (times v y x)) (eq u v))))))\n'


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in (('commut.sexp', COMMUT), ('noncommut.sexp', NONCOMMUT), ('ring.sexp', RING_COMMUT),
                       ('empty.sexp', ''), ('broken.sexp', '(forall x (eq x x))\n(eq x')):
        (tmp_path / name).write_text(text)
        paths[name] = str(tmp_path / name)
    return paths


def _rows(text):
    return [json.loads(line) for line in text.splitlines()]


def test_eval_group(files):
    code, out = run(['eval', '--group', 'p=2;exps=1', files['commut.sexp']])
    assert code == EXIT_OK
    [row] = _rows(out)
    assert row['value'] is True and row['id'] == 'commut.sexp:1' and row['kind'] == 'group'
    assert 'seconds' not in row


def test_eval_ring(files):
    code, out = run(['eval', '--ring', 'p=2;exps=1,1', files['noncommut.sexp']])
    assert code == EXIT_OK and _rows(out)[0]['value'] is True


def test_empty_corpus(files):
    assert run(['eval', '--group', 'p=2;exps=1', files['empty.sexp']]) == (EXIT_OK, '')


def test_eval_shipped_corpus_with_workers(files):
    path = str(resources.files(endotheory).joinpath('data', 'roundtrip_corpus.json'))
    code1, out1 = run(['eval', path, '--max-ring-size', '64'])
    code4, out4 = run(['eval', path, '--max-ring-size', '64', '--workers', '4'])
    assert out1 == out4
    rows = _rows(out1)
    done = [r for r in rows if 'error' not in r]
    assert done and all(r['agrees'] for r in done)
    assert code1 == EXIT_CAP
    assert all(r['error'].startswith('resource cap') for r in rows if 'error' in r)


def test_timing_flag(files):
    _, out = run(['eval', '--group', 'p=2;exps=1', files['commut.sexp'], '--timing'])
    assert 'seconds' in _rows(out)[0]


def test_csv_output(files):
    code, out = run(['eval', '--group', 'p=2;exps=1,1', files['commut.sexp'], files['noncommut.sexp'], '--csv'])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r['value'] for r in rows] == ['True', '']
    assert rows[1]['error']
    assert code == EXIT_USAGE


def test_syntax_error_exit_code(files, capsys):
    code, _ = run(['eval', '--group', 'p=2;exps=1', files['broken.sexp']])
    assert code == EXIT_USAGE
    assert 'broken.sexp:2' in capsys.readouterr().err


def test_cap_exit_code(files):
    assert run(['eval', '--group', 'p=2;exps=7', files['commut.sexp']])[0] == EXIT_CAP


def test_config_and_flag_precedence(files, tmp_path):
    cfg = tmp_path / 'settings.cfg'
    cfg.write_text('# small caps\nmax-group-order = 4\n')
    assert run(['eval', '--group', 'p=2;exps=3', files['commut.sexp'], '--config', str(cfg)])[0] == EXIT_CAP
    code, _ = run(['eval', '--group', 'p=2;exps=3', files['commut.sexp'], '--config', str(cfg),
                   '--max-group-order', '8'])
    assert code == EXIT_OK


def test_bad_config_is_usage_error(files, tmp_path):
    cfg = tmp_path / 'settings.cfg'
    cfg.write_text('colour = blue\n')
    assert run(['eval', '--group', 'p=2;exps=1', files['commut.sexp'], '--config', str(cfg)])[0] == EXIT_USAGE


def test_mismatch_exit_code(tmp_path):
    path = tmp_path / 'wrong.json'
    path.write_text(json.dumps({'entries': [{'id': 'w', 'language': 'group', 'sentence': '(forall x (plus x x x))',
                                             'expected': {'p=2;exps=1': True}}]}))
    code, out = run(['eval', str(path)])
    assert code == EXIT_MISMATCH and _rows(out)[0]['agrees'] is False


def test_translate_output_parses_back(files):
    code, out = run(['translate', files['ring.sexp']])
    assert code == EXIT_OK
    f = parse(out)
    assert str(f) == out.strip()
    code, out = run(['translate', files['ring.sexp'], '--method', '43', '--prime', '2', '--pretty'])
    assert code == EXIT_OK and parse(out)


def test_translate_json(files):
    _, out = run(['translate', files['ring.sexp'], '--json'])
    row = _rows(out)[0]
    assert row['method'] == '42' and parse(row['translation'])


def test_translating_twice_is_rejected(files, tmp_path):
    _, out = run(['translate', files['ring.sexp']])
    again = tmp_path / 'again.sexp'
    again.write_text(out)
    assert run(['translate', str(again)])[0] == EXIT_USAGE
    assert run(['translate', files['ring.sexp'], '--method', '43'])[0] == EXIT_USAGE


def test_verify_suites():
    for suite in ('shelah', 'roundtrip-42'):
        code, out = run(['verify', suite])
        report = json.loads(out)
        assert code == EXIT_OK and report['ok'], report
        assert all(c['failed'] == 0 for c in report['checks'].values())


def test_verify_formula_semantics_max_order():
    code, out = run(['verify', 'formula-semantics', '--max-order', '16'])
    assert code == EXIT_OK and json.loads(out)['ok']


def test_verify_unknown_suite():
    assert run(['verify', 'nonsense'])[0] == EXIT_USAGE


def test_enumerate(files):
    _, out = run(['enumerate', 'subgroups', '--group', 'p=2;exps=1,2'])
    assert len(_rows(out)) == 8
    _, out = run(['enumerate', 'endos', '--group', 'p=2;exps=1,2'])
    assert len(_rows(out)) == 32
    _, out = run(['enumerate', 'idempotents', '--group', 'p=2;exps=1,2'])
    rows = _rows(out)
    assert all(r['primitive'] == (r['image_order'] in (2, 4) and r['matrix'] != [[1, 0], [0, 1]]) for r in rows)
    _, out = run(['enumerate', 'beautiful', '--n', '2', '--prime', '2', '--l', '2'])
    assert [r['coefficients'] for r in _rows(out)] == [[0, 1], [1, 0]]
    assert run(['enumerate', 'endos'])[0] == EXIT_USAGE


def test_depth():
    code, out = run(['depth', 'domain=1..3; map=2,3,3'])
    assert code == EXIT_OK
    assert [r['depth'] for r in _rows(out)] == [0, 1, 'inf']
    _, out = run(['depth', 'domain=1..3; map=2,3,3', '--x', '2'])
    assert _rows(out) == [{'depth': 1, 'image': 3, 'x': 2}]
    assert run(['depth', 'domain=1..3; map=2,3'])[0] == EXIT_USAGE


def test_console_script_entry_point(files):
    proc = subprocess.run([sys.executable, '-m', 'endotheory.cli', 'eval', '--group', 'p=2;exps=1',
                           files['commut.sexp']], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)['value'] is True
