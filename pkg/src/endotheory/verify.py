'''Invariant suites behind `endotheory verify`.

Every suite pits an implementation route against an independent oracle and
returns per-check counts.  A suite passes when no check reports a failure.
'''
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import catalog as C
from .corpus import ROUNDTRIP_CORPUS, SECOND_ORDER_CORPUS, corpus_groups, load_corpus
from .endoring import (
    DEFAULT_RING_CAP, Endomorphism, RingTable, center, compose, count_endos, image, is_idempotent,
    is_primitive_idempotent, ring_size,
)
from .errors import EndotheoryError
from .evaluation import Evaluator, verify_hint_soundness
from .formulas import (
    And, ExistsObj, ExistsPred, ForallObj, ForallPred, Formula, Iff, Implies, Not, Or, card_at_most, walk,
)
from .golden import groups_up_to
from .pgroup import (
    PGroupShape, enumerate_subgroups, is_cyclic, is_divisible_subgroup, is_pure, order, quotient_is_divisible,
)
from .shelah import (
    FunctionGraph, all_function_graphs, check_lemma31, check_lemma32, depth_map, enumerate_beautiful,
    extension_respects_composition, idempotent_coefficients, is_beautiful, on_cycle,
)
from .structures import Relation, group_structure, guard_enumerator, ring_structure, to_relation
from .translate import BASE_SET, translate_theorem42, translate_theorem43

SUITES = ('formula-semantics', 'roundtrip-42', 'roundtrip-43', 'hint-soundness', 'shelah', 'ring-facts')


@dataclass
class Check:
    checked: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, detail=None) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(detail)


@dataclass
class SuiteReport:
    suite: str
    checks: dict = field(default_factory=dict)
    seconds: float = 0.0

    def check(self, name: str) -> Check:
        return self.checks.setdefault(name, Check())

    @property
    def ok(self) -> bool:
        return all(not c.failures for c in self.checks.values())

    def as_dict(self, timing: bool = False) -> dict:
        out = {'suite': self.suite, 'ok': self.ok,
               'checks': {k: {'checked': c.checked, 'failed': len(c.failures),
                              'examples': [str(x) for x in c.failures[:5]]}
                          for k, c in sorted(self.checks.items())}}
        if timing:
            out['seconds'] = round(self.seconds, 3)
        return out


# ---------------------------------------------------------------- oracles

def image_exponent(f: Endomorphism) -> int:
    return max(order(x) for x in image(f))


def primitive_by_image(f: Endomorphism) -> bool:
    '''Independent of the splitting search: nonzero idempotent with cyclic image.'''
    return is_idempotent(f) and not f.is_zero() and is_cyclic(image(f))


def scalars(shape: PGroupShape) -> set[Endomorphism]:
    return {Endomorphism.scalar(shape, n) for n in range(shape.exponent)}


# ---------------------------------------------------------------- formula semantics

GROUP_SUBSET_KINDS = ('Gr', 'Cycl', 'DCycl', 'Serv', 'FD', 'D', 'Base')


def _subset_oracle(kind: str, H, shape: PGroupShape) -> bool:
    return {
        'Gr': True,
        'Cycl': is_cyclic(H),
        'DCycl': True,
        'Serv': is_pure(H),
        'FD': quotient_is_divisible(H),
        'D': is_divisible_subgroup(H),
        'Base': H.is_whole(),
    }[kind]


def formula_semantics(max_order: int = 16, ring_cap: int = DEFAULT_RING_CAP, report: SuiteReport | None = None):
    report = report or SuiteReport('formula-semantics')
    for shape in groups_up_to(max_order):
        p = shape.p
        G = group_structure(shape)
        ev = Evaluator(G)
        subs = enumerate_subgroups(shape)
        rels = [to_relation(G, list(H), 1) for H in subs]
        formulas = {k: C.build_group_formula(k, p=p) if 'p' in C.declared_parameters(k)[1]
                    else C.build_group_formula(k) for k in GROUP_SUBSET_KINDS}
        for H, R in zip(subs, rels):
            for kind, f in formulas.items():
                got = ev.evaluate(f, {('P', 1): R})
                report.check(kind).record(got == _subset_oracle(kind, H, shape), (str(shape), str(H), got))
        # a non-subgroup subset must fail Gr
        whole = set(range(G.n))
        for size in range(2, G.n):
            for combo in itertools.combinations(sorted(whole), size):
                if G.closure(combo) != frozenset(combo):
                    R = Relation.unary(combo)
                    report.check('Gr').record(not ev.evaluate(formulas['Gr'], {('P', 1): R}), (str(shape), combo))
                    break
        orders = [G.order_of(i) for i in range(G.n)]
        ord_leq = C.build_group_formula('OrdLeq')
        for a1, a2 in itertools.product(range(G.n), repeat=2):
            got = ev.evaluate(ord_leq, {'a1': a1, 'a2': a2})
            report.check('OrdLeq').record(got == (orders[a1] <= orders[a2]), (str(shape), a1, a2))
        gord = C.build_group_formula('GOrd_a')
        for H, R in zip(subs, rels):
            top = max(order(h) for h in H)
            for a in range(G.n):
                got = ev.evaluate(gord, {('P', 1): R, 'a': a})
                report.check('GOrd_a').record(got == (top <= orders[a]), (str(shape), str(H), a))
        if ring_size(shape) <= ring_cap:
            _ring_semantics(shape, report)
    return report


def _ring_semantics(shape: PGroupShape, report: SuiteReport) -> None:
    p = shape.p
    R = ring_structure(shape)
    T: RingTable = R.table
    ev = Evaluator(R)
    idem_f = C.build_ring_formula('Idem')
    for i, f in enumerate(T.elements):
        got = ev.evaluate(idem_f, {'rho': i})
        report.check('Idem').record(got == (compose(f, f) == f), (str(shape), str(f)))
    star = C.build_ring_formula('IdemStar')
    ids = T.idempotents()
    for f in ids:
        got = ev.evaluate(star, {'rho': f})
        report.check('IdemStar').record(got == primitive_by_image(f), (str(shape), str(f)))
    olc = C.build_ring_formula('OrdLeqCenter')
    expo = [image_exponent(f) for f in ids]
    # all pairs when affordable, otherwise every idempotent against one representative per exponent
    reps = ids if len(ids) <= 64 else list({e: f for f, e in zip(ids, expo)}.values())
    for f, ef in zip(ids, expo):
        for g in reps:
            got = ev.evaluate(olc, {'rho1': f, 'rho2': g})
            report.check('OrdLeqCenter').record(got == (ef <= image_exponent(g)), (str(shape), str(f), str(g)))
    for k in range(shape.max_exp + 2):
        got = ev.evaluate(C.build_ring_formula('Phi_n', p=p, n=p ** k))
        report.check('Phi_n').record(got == (p ** k >= shape.exponent), (str(shape), p ** k))


# ---------------------------------------------------------------- round trips

def base_admitted(shape: PGroupShape) -> list:
    '''Subgroups the Base guard of the second translation lets through.'''
    G = group_structure(shape)
    ev = Evaluator(G)
    f = C.base(BASE_SET, shape.p)
    return [H for H in enumerate_subgroups(shape) if ev.evaluate(f, {(BASE_SET, 1): to_relation(G, list(H), 1)})]


def roundtrip(method: str, corpus: str = ROUNDTRIP_CORPUS, groups: list[str] | None = None,
              report: SuiteReport | None = None) -> SuiteReport:
    if method not in ('42', '43'):
        raise EndotheoryError(f'unknown translation method {method!r}')
    report = report or SuiteReport(f'roundtrip-{method}')
    entries = load_corpus(corpus)
    specs = groups or corpus_groups(corpus)
    for spec in specs:
        shape = PGroupShape.parse(spec)
        ring_ev = Evaluator(ring_structure(shape))
        group_ev = Evaluator(group_structure(shape))
        for e in entries:
            phi = e.formula
            ring_value = ring_ev.evaluate(phi)
            if spec in e.expected:
                report.check('expected').record(ring_value == e.expected[spec], (e.id, spec, ring_value))
            psi = translate_theorem42(phi) if method == '42' else translate_theorem43(phi, shape.p)
            group_value = group_ev.evaluate(psi)
            report.check('agreement').record(ring_value == group_value, (e.id, spec, ring_value, group_value))
        if method == '43':
            admitted = base_admitted(shape)
            report.check('base-guard').record(len(admitted) == 1 and admitted[0].is_whole(),
                                              (spec, [str(H) for H in admitted]))
    return report


# ---------------------------------------------------------------- hints

def guard_cases(shape: PGroupShape):
    '''(label, guard, arity, guard formula, predicate variable, parameter binding).'''
    G = group_structure(shape)
    yield 'endo', 'endo', 2, C.endom('P'), 'P', None
    yield 'subgroup', 'subgroup', 1, C.gr('P'), 'P', None
    for H in enumerate_subgroups(shape):
        yield 'homfrom', 'homfrom', 2, C.hom_from('P', 'B'), 'P', ('B', to_relation(G, list(H), 1))


def hint_soundness(max_order: int = 4, so_enum_cap: int = 16, report: SuiteReport | None = None) -> SuiteReport:
    '''Each guard enumerator against filtering every relation by its defining formula.'''
    report = report or SuiteReport('hint-soundness')
    for shape in groups_up_to(max_order):
        G = group_structure(shape)
        for label, guard, arity, f, var, param in guard_cases(shape):
            ok = verify_hint_soundness(G, guard, arity, f, var=var, param=param, so_enum_cap=so_enum_cap)
            report.check(label).record(ok, (str(shape), None if param is None else str(param[1])))
    return report


def rehint(f: Formula, hint) -> Formula:
    '''f with every predicate quantifier switched to `hint`.'''
    if isinstance(f, (ForallPred, ExistsPred)):
        return type(f)(f.name, f.arity, hint, rehint(f.body, hint))
    if isinstance(f, Not):
        return Not(rehint(f.f, hint))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(rehint(f.a, hint), rehint(f.b, hint))
    if isinstance(f, (ForallObj, ExistsObj)):
        return type(f)(f.var, rehint(f.body, hint))
    return f


def max_predicate_arity(f: Formula) -> int:
    return max((g.arity for g in walk(f) if isinstance(g, (ForallPred, ExistsPred))), default=0)


def card_coincidence(corpus: str = SECOND_ORDER_CORPUS, report: SuiteReport | None = None) -> SuiteReport:
    '''Card-bounded ranges with a bound of at least |A|^arity change nothing.'''
    report = report or SuiteReport('card-coincidence')
    for spec in corpus_groups(corpus):
        G = group_structure(PGroupShape.parse(spec))
        for e in load_corpus(corpus):
            f = e.formula
            full = Evaluator(G).evaluate(f)
            if spec in e.expected:
                report.check('expected').record(full == e.expected[spec], (e.id, spec))
            kappa = G.n ** max_predicate_arity(f)
            for bound in (kappa, kappa + 1):
                bounded = Evaluator(G).evaluate(rehint(f, card_at_most(bound)))
                report.check('coincidence').record(bounded == full, (e.id, spec, bound))
    return report


# ---------------------------------------------------------------- depth and beautiful combinations

DEPTH_CHECK_PARAMETERS = ((2, 1), (2, 2), (3, 1))
BEAUTIFUL_CASES = ((2, 2, 2), (2, 3, 1), (3, 2, 1))


def shelah(max_index: int = 3, max_commuting: int = 6, report: SuiteReport | None = None) -> SuiteReport:
    report = report or SuiteReport('shelah')
    for n in range(1, max_index + 1):
        for h in all_function_graphs(n):
            for p, l in DEPTH_CHECK_PARAMETERS:
                r = check_lemma31(h, p, l)
                c = report.check('extension-depth')
                c.checked += r.checked
                c.failures.extend(r.violations)
    for n in range(1, max_commuting + 1):
        for h in all_function_graphs(n):
            d = depth_map(h)
            for x in h.domain:
                report.check('depth-vs-cycles').record((d[x] == float('inf')) == on_cycle(x, h), (str(h), x))
            for k in range(n + 1):
                r = check_lemma32(h, h.power(k))
                c = report.check('commuting-depth')
                c.checked += r.checked
                c.failures.extend(r.violations)
    for n in range(1, 3):
        graphs = list(all_function_graphs(n))
        for h1, h2 in itertools.product(graphs, repeat=2):
            for p, l in DEPTH_CHECK_PARAMETERS:
                report.check('extension-composition').record(extension_respects_composition(h1, h2, p, l),
                                                             (str(h1), str(h2), p, l))
    for n, p, l in BEAUTIFUL_CASES:
        found = enumerate_beautiful(n, p, l)
        units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        report.check('beautiful-classification').record(sorted(found) == sorted(units), (n, p, l, found))
        for k in itertools.product(range(p ** l), repeat=n):
            report.check('beautiful-vs-idempotent').record(is_beautiful(k, p, l) == idempotent_coefficients(k, p, l),
                                                           (n, p, l, k))
    return report


# ---------------------------------------------------------------- ring facts

AXIOM_SAMPLES = 2000


def ring_facts(max_exp_sum: int = 4, center_limit: int = 4096, primitive_order: int = 16,
               axioms_limit: int = 64, report: SuiteReport | None = None) -> SuiteReport:
    report = report or SuiteReport('ring-facts')
    shapes = [s for s in groups_up_to(3 ** max_exp_sum, primes=(2, 3)) if sum(s.exps) <= max_exp_sum]
    for shape in shapes:
        report.check('ring-size').record(count_endos(shape) == ring_size(shape), str(shape))
    for shape in shapes:
        if ring_size(shape) > center_limit:
            continue
        T = RingTable(shape)
        Z = center(T)
        report.check('center').record(set(Z) == scalars(shape) and len(Z) == shape.exponent, str(shape))
        if len(T) > axioms_limit:
            _ring_axioms_sampled(T, report)
    for shape in groups_up_to(primitive_order):
        if ring_size(shape) > DEFAULT_RING_CAP:
            continue
        T = ring_structure(shape).table
        for f in T.idempotents():
            report.check('primitive-idempotents').record(
                is_primitive_idempotent(f, T) == primitive_by_image(f), (str(shape), str(f)))
    for shape in groups_up_to(16):
        if ring_size(shape) > axioms_limit:
            continue
        _ring_axioms(shape, report)
    return report


def _ring_axioms(shape: PGroupShape, report: SuiteReport) -> None:
    R = ring_structure(shape)
    n = R.n
    add = np.array(R.add_table)
    mul = np.array(R.mul_table)
    z, one = R.zero_index, R.table.identity_index
    idx = np.arange(n)
    ok = (np.array_equal(add, add.T) and np.array_equal(add[z], idx)
          and np.array_equal(add[add[:, :, None], idx[None, None, :]], add[idx[:, None, None], add[None, :, :]]))
    report.check('additive-group').record(bool(ok), str(shape))
    assoc = np.array_equal(mul[mul[:, :, None], idx[None, None, :]], mul[idx[:, None, None], mul[None, :, :]])
    report.check('associativity').record(bool(assoc), str(shape))
    left = np.array_equal(mul[idx[:, None, None], add[None, :, :]], add[mul[:, :, None], mul[:, None, :]])
    right = np.array_equal(mul[add[:, :, None], idx[None, None, :]], add[mul[:, None, :], mul[None, :, :]])
    report.check('distributivity').record(left and right, str(shape))
    unit = np.array_equal(mul[one], idx) and np.array_equal(mul[:, one], idx)
    report.check('unit').record(bool(unit), str(shape))
    report.check('ring-law-sample').record(
        all(R.mul(i, j) == R.table.index(compose(R.elements[i], R.elements[j]))
            for i in range(0, n, 7) for j in range(0, n, 5)), str(shape))


def _ring_axioms_sampled(T: RingTable, report: SuiteReport, samples: int = AXIOM_SAMPLES) -> None:
    '''Associativity and both distributive laws on random triples, in matrix arithmetic.'''
    rng = np.random.default_rng(len(T))
    mats = T.mats
    trip = rng.integers(0, len(T), size=(samples, 3))
    F, G, H = mats[trip[:, 0]], mats[trip[:, 1]], mats[trip[:, 2]]
    # f*g applies f first, so its matrix is G @ F
    report.check('associativity-sampled').record(
        bool(np.array_equal(T.reduce(H @ T.reduce(G @ F)), T.reduce(T.reduce(H @ G) @ F))), str(T.shape))
    report.check('distributivity-sampled').record(
        bool(np.array_equal(T.reduce((G + H) @ F), T.reduce(G @ F + H @ F))
             and np.array_equal(T.reduce(H @ (F + G)), T.reduce(H @ F + H @ G))), str(T.shape))


# ---------------------------------------------------------------- dispatch

def run_suite(name: str, max_order: int | None = None, so_enum_cap: int = 16) -> SuiteReport:
    start = time.perf_counter()
    if name == 'formula-semantics':
        rep = formula_semantics(max_order or 16)
    elif name == 'roundtrip-42':
        rep = roundtrip('42', groups=_groups_up_to_order(max_order))
    elif name == 'roundtrip-43':
        rep = roundtrip('43', groups=_groups_up_to_order(max_order))
    elif name == 'hint-soundness':
        rep = hint_soundness(max_order or 4, so_enum_cap=so_enum_cap)
    elif name == 'shelah':
        rep = shelah()
    elif name == 'ring-facts':
        rep = ring_facts()
    else:
        raise EndotheoryError(f'unknown suite {name!r}; choose from {", ".join(SUITES)}')
    rep.seconds = time.perf_counter() - start
    return rep


def _groups_up_to_order(max_order: int | None) -> list[str] | None:
    if max_order is None:
        return None
    return [s for s in corpus_groups(ROUNDTRIP_CORPUS) if PGroupShape.parse(s).order <= max_order]
