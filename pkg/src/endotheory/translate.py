'''Translating ring sentences about End(A) into second-order sentences about A.

Two compilers share one recursion.  Each ring variable x becomes a binary
predicate variable read as the graph of an endomorphism:

* ``translate_theorem42`` ranges it over all graphs satisfying Endom, with
  the endo hint so the evaluator enumerates actual endomorphisms;
* ``translate_theorem43`` first picks a basic subgroup B and ranges x over
  maps defined on B that extend to endomorphisms, so a ring element is
  stored as its restriction to B.  Products then need the extension of the
  second factor, spelled with ``phi_value``.

Atoms are rewritten pointwise: x1 = x2 compares graphs, x1 = x2 + x3 adds
values and x1 = x2 * x3 follows x2 and then x3.
'''
from __future__ import annotations

from .catalog import (  # noqa: F401  (re-exported catalog API)
    GroupFormulaKind, RingFormulaKind, base, build_group_formula, build_ring_formula, declared_parameters,
    endom, endom_from_base, phi_value,
)
from .errors import EndotheoryError, SignatureError
from .formulas import (
    ENDO, And, Eq, ExistsObj, ExistsPred, ForallObj, ForallPred, Formula, Iff, Implies, Not, Or, Plus, Pred,
    SUBGROUP, Times, hom_from, language_of, walk,
)
from .pgroup import is_prime

BASE_SET = 'B'


def _check_ring_input(phi: Formula) -> None:
    try:
        lang = language_of(phi)
    except SignatureError as exc:
        raise SignatureError(f'not a ring formula: {exc}') from None
    if lang == 'group2':
        raise SignatureError('the input already uses predicate variables; translation expects a ring formula')


def graph_name(x: str, prefix: str) -> str:
    return f'{prefix}_{x}'


def _equal_graphs(P1: str, P2: str) -> Formula:
    return ForallObj('y1', ForallObj('y2', Iff(Pred(P1, ('y1', 'y2')), Pred(P2, ('y1', 'y2')))))


def _sum_graphs(P1: str, P2: str, P3: str) -> Formula:
    return ForallObj('y', ForallObj('z1', ForallObj('z2', ForallObj('z3', Implies(
        And(Pred(P2, ('y', 'z2')), Pred(P3, ('y', 'z3'))),
        Iff(Pred(P1, ('y', 'z1')), Plus('z1', 'z2', 'z3')))))))


def _product_graphs(P1: str, P2: str, P3: str, second_step) -> Formula:
    return ForallObj('y', ForallObj('z', Implies(
        Pred(P1, ('y', 'z')),
        ExistsObj('t', And(Pred(P2, ('y', 't')), second_step(P3, 't', 'z'))))))


class _Translator:
    def __init__(self, prefix: str, guard, hint, second_step):
        self.prefix = prefix
        self.guard = guard
        self.hint = hint
        self.second_step = second_step

    def name(self, x: str) -> str:
        return graph_name(x, self.prefix)

    def __call__(self, f: Formula) -> Formula:
        n = self.name
        if isinstance(f, Eq):
            return _equal_graphs(n(f.x), n(f.y))
        if isinstance(f, Plus):
            return _sum_graphs(n(f.x), n(f.y), n(f.z))
        if isinstance(f, Times):
            return _product_graphs(n(f.x), n(f.y), n(f.z), self.second_step)
        if isinstance(f, Not):
            return Not(self(f.f))
        if isinstance(f, (And, Or, Implies, Iff)):
            return type(f)(self(f.a), self(f.b))
        if isinstance(f, ForallObj):
            P = n(f.var)
            return ForallPred(P, 2, self.hint, Implies(self.guard(P), self(f.body)))
        if isinstance(f, ExistsObj):
            P = n(f.var)
            return ExistsPred(P, 2, self.hint, And(self.guard(P), self(f.body)))
        raise SignatureError(f'unexpected node {type(f).__name__} in a ring formula')


def translate_theorem42(phi: Formula) -> Formula:
    '''Ring variables become endomorphism graphs P_x of A.'''
    _check_ring_input(phi)
    step = (lambda P3, t, z: Pred(P3, (t, z)))
    return _Translator('P', endom, ENDO, step)(phi)


def translate_theorem43(phi: Formula, p: int) -> Formula:
    '''Ring variables become maps Phi_x on a basic subgroup B of the p-group A.

    The Base guard comes first so only basic subgroups are explored; on a
    finite group that is A itself.
    '''
    if not is_prime(p):
        raise EndotheoryError(f'{p} is not prime')
    _check_ring_input(phi)
    step = (lambda P3, t, z: phi_value(z, t, P3, BASE_SET, p))
    body = _Translator('Phi', lambda P: endom_from_base(P, BASE_SET, p), hom_from(BASE_SET), step)(phi)
    return ExistsPred(BASE_SET, 1, SUBGROUP, And(base(BASE_SET, p), body))


TRANSLATION_RULES = ('forall', 'exists', 'equality', 'sum', 'product')
_RULE_OF = {ForallObj: 'forall', ExistsObj: 'exists', Eq: 'equality', Plus: 'sum', Times: 'product'}


def translation_rules_used(phi: Formula) -> list[str]:
    '''Which atom and quantifier rewrites translating phi goes through.'''
    seen = {_RULE_OF[type(g)] for g in walk(phi) if type(g) in _RULE_OF}
    return [r for r in TRANSLATION_RULES if r in seen]
