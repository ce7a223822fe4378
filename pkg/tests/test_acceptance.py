'''The nine acceptance criteria, each timed, each printing one PASS/FAIL line.'''
import time

import pytest

from endotheory.corpus import ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS, corpus_groups, load_corpus
from endotheory.endoring import RingTable, center, count_endos, ring_size
from endotheory.golden import GOLDEN_RING_SHAPES, audit, compute_golden, groups_up_to, load_golden
from endotheory.pgroup import PGroupShape
from endotheory.translate import TRANSLATION_RULES, translation_rules_used
from endotheory.verify import card_coincidence, formula_semantics, hint_soundness, roundtrip, scalars, shelah


class Criterion:
    def __init__(self, number, title, limit, capsys):
        self.number, self.title, self.limit, self.capsys = number, title, limit, capsys
        self.problems = []

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def require(self, ok, what):
        if not ok:
            self.problems.append(what)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is not None:
            self.problems.append(f'{exc_type.__name__}: {exc}')
        if self.limit is not None and elapsed >= self.limit:
            self.problems.append(f'took {elapsed:.1f}s, limit {self.limit}s')
        verdict = 'PASS' if not self.problems else 'FAIL'
        limit = f' (limit {self.limit}s)' if self.limit is not None else ''
        line = f'[{verdict}] criterion {self.number}: {self.title}: {elapsed:.1f}s{limit}'
        if self.problems:
            line += ' -- ' + '; '.join(map(str, self.problems[:3]))
        with self.capsys.disabled():
            print('\n' + line)
        assert not self.problems
        return False


@pytest.fixture
def criterion(capsys):
    return lambda number, title, limit=None: Criterion(number, title, limit, capsys)


def _failures(report):
    return {name: c.failures[:3] for name, c in report.checks.items() if c.failures}


def test_criterion_1_ring_size_law(criterion):
    with criterion(1, 'ring-size law, enumerated vs product formula', 10) as c:
        shapes = [s for s in groups_up_to(3 ** 4, primes=(2, 3)) if sum(s.exps) <= 4]
        c.require(len(shapes) == 2 * 11, f'{len(shapes)} shapes')
        for s in shapes:
            formula = 1
            for ei in s.exps:
                for ej in s.exps:
                    formula *= s.p ** min(ei, ej)
            c.require(count_endos(s) == formula == ring_size(s), str(s))


def _center_shapes():
    specs = set(corpus_groups(ROUNDTRIP_CORPUS)) | {str(s) for s in GOLDEN_RING_SHAPES}
    specs |= {str(s) for s in groups_up_to(3 ** 4, primes=(2, 3)) if sum(s.exps) <= 4}
    shapes = [PGroupShape.parse(s) for s in sorted(specs)]
    return [s for s in shapes if ring_size(s) <= 4096]


def test_criterion_2_center_is_scalars(criterion):
    with criterion(2, 'center of End(A) is the scalars, of size p^e_max', 30) as c:
        for s in _center_shapes():
            z = center(RingTable(s))
            c.require(set(z) == scalars(s) and len(z) == s.p ** s.max_exp, str(s))


def test_criterion_3_roundtrip_endomorphism_graphs(criterion):
    with criterion(3, 'ring sentences vs endomorphism-graph translation, groups of order <= 8', 60) as c:
        entries = load_corpus(ROUNDTRIP_CORPUS)
        groups = corpus_groups(ROUNDTRIP_CORPUS)
        c.require(len(entries) >= 10, 'corpus too small')
        c.require(set().union(*(translation_rules_used(e.formula) for e in entries)) == set(TRANSLATION_RULES),
                  'not every rule exercised')
        small = [PGroupShape.parse(s) for s in groups]
        c.require({str(s) for s in groups_up_to(8)} <= set(groups), 'a group of order <= 8 is missing')
        c.require(all(s.order <= 8 for s in small), 'a corpus group is larger than 8')
        rep = roundtrip('42')
        c.require(rep.ok, _failures(rep))
        c.require(rep.checks['agreement'].checked == len(entries) * len(groups), 'not every pair checked')


def test_criterion_4_roundtrip_basic_subgroup(criterion):
    with criterion(4, 'ring sentences vs basic-subgroup translation, Base admits only B = A', 120) as c:
        entries = load_corpus(ROUNDTRIP_CORPUS)
        groups = corpus_groups(ROUNDTRIP_CORPUS)
        rep = roundtrip('43')
        c.require(rep.ok, _failures(rep))
        c.require(rep.checks['agreement'].checked == len(entries) * len(groups), 'not every pair checked')
        c.require(rep.checks['base-guard'].checked == len(groups), 'Base guard not checked on every group')


def test_criterion_5_formula_semantics(criterion):
    with criterion(5, 'formula semantics vs algebraic oracles, groups of order <= 16', 120) as c:
        rep = formula_semantics(16)
        c.require(rep.ok, _failures(rep))
        for kind in ('Gr', 'Cycl', 'Serv', 'FD', 'D', 'Base', 'GOrd_a', 'OrdLeq', 'Idem', 'IdemStar',
                     'OrdLeqCenter', 'Phi_n'):
            c.require(rep.checks.get(kind) is not None and rep.checks[kind].checked > 0, f'{kind} not checked')


def test_criterion_6_hint_soundness(criterion):
    with criterion(6, 'guarded enumeration equals filtered full enumeration, groups of order <= 4', 60) as c:
        rep = hint_soundness(4)
        c.require(rep.ok, _failures(rep))
        c.require({'endo', 'subgroup', 'homfrom'} <= set(rep.checks), sorted(rep.checks))


def test_criterion_7_depth_and_beautiful(criterion):
    with criterion(7, 'depth bounds and beautiful combinations', 30) as c:
        rep = shelah()
        c.require(rep.ok, _failures(rep))
        for name in ('extension-depth', 'commuting-depth', 'beautiful-classification'):
            c.require(rep.checks[name].checked > 0, f'{name} not checked')


def test_criterion_8_card_bound_coincidence(criterion):
    with criterion(8, 'card-bounded predicate ranges with bound >= |A|^arity equal full ranges') as c:
        entries = load_corpus(SECOND_ORDER_CORPUS)
        groups = corpus_groups(SECOND_ORDER_CORPUS)
        c.require(len(entries) == 5, f'{len(entries)} sentences')
        c.require(all(PGroupShape.parse(s).order <= 4 for s in groups), 'a group is larger than 4')
        c.require({str(s) for s in groups_up_to(4)} == set(groups), 'a group of order <= 4 is missing')
        rep = card_coincidence()
        c.require(rep.ok, _failures(rep))
        c.require(rep.checks['coincidence'].checked == 2 * len(entries) * len(groups), 'not every pair checked')


def test_criterion_9_golden_values(criterion):
    with criterion(9, 'golden finite-scale values: regression-exact and oracle-audited') as c:
        fresh = compute_golden()
        frozen = load_golden()
        c.require([{k: v for k, v in r.items() if k != 'audit'} for r in frozen] == fresh, 'golden drift')
        kinds = {r['kind'] for r in fresh}
        c.require({'Psi_n', 'Psi2', 'Psi2Tilde', 'Psi3', 'Psi4', 'Psi5', 'Exept', 'Card_l'} <= kinds, sorted(kinds))
        for r in fresh:
            shape = PGroupShape.parse(r['structure'])
            c.require(audit(r['kind'], r['params'], shape, r['value']) is not False, r['id'])
            if r['kind'] == 'Exept':
                c.require(r['value'] is False, r['id'])
            if r['kind'] == 'Psi_n' and not r['params'].get('literal'):
                c.require(r['value'] == (shape.exponent <= r['params']['n']), r['id'])
        exept_groups = {r['structure'] for r in fresh if r['kind'] == 'Exept'}
        c.require(exept_groups == {str(s) for s in groups_up_to(16)}, 'Exept not on every group of order <= 16')
