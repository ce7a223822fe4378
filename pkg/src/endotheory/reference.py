'''A deliberately naive satisfaction checker used to cross-check Evaluator.

It walks the syntax tree directly, always evaluates every operand and
every quantifier instance, and enumerates predicate ranges on its own
(subsets via bit masks, subgroups via the pgroup oracle, endomorphism
graphs via matrix action).  Nothing here shares code with the compiled
evaluator apart from the formula and structure types.
'''
from __future__ import annotations

from .endoring import apply, compose, enumerate_endos
from .errors import BudgetExceeded, ResourceCapError, UnboundVariableError
from .formulas import (
    And, Eq, ExistsObj, ExistsPred, ForallObj, ForallPred, Formula, Iff, Implies, Not, Or, Plus, Pred, Times,
)
from .pgroup import enumerate_subgroups, subgroup_closure
from .structures import DEFAULT_SO_ENUM_CAP, GroupStructure, ModelBinding, Relation, Structure

DEFAULT_BUDGET = 5_000_000


class ReferenceEvaluator:
    def __init__(self, structure: Structure, budget: int = DEFAULT_BUDGET, so_enum_cap: int = DEFAULT_SO_ENUM_CAP,
                 use_hints: bool = True):
        self.S = structure
        self.budget = budget
        self.so_enum_cap = so_enum_cap
        self.use_hints = use_hints
        self.steps = 0

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f'reference evaluation exceeded {self.budget} steps')

    def evaluate(self, f: Formula, valuation=None) -> bool:
        objs, preds = ModelBinding(self.S, valuation or {}).resolve()
        self.steps = 0
        return self._eval(f, dict(objs), {k: v for k, v in preds.items()})

    def _value(self, env, v):
        try:
            return env[v]
        except KeyError:
            raise UnboundVariableError(f'variable {v} is not bound') from None

    def _eval(self, f, env, penv) -> bool:
        self._tick()
        S = self.S
        if isinstance(f, Eq):
            return self._value(env, f.x) == self._value(env, f.y)
        if isinstance(f, Plus):
            a, b = S.elements[self._value(env, f.y)], S.elements[self._value(env, f.z)]
            return S.index_of(a + b) == self._value(env, f.x)
        if isinstance(f, Times):
            a, b = S.elements[self._value(env, f.y)], S.elements[self._value(env, f.z)]
            return S.index_of(compose(a, b)) == self._value(env, f.x)
        if isinstance(f, Pred):
            rel = penv.get((f.name, len(f.args)))
            if rel is None:
                raise UnboundVariableError(f'predicate {f.name} is not bound')
            return tuple(self._value(env, a) for a in f.args) in set(rel.tuples)
        if isinstance(f, Not):
            return not self._eval(f.f, env, penv)
        if isinstance(f, (And, Or, Implies, Iff)):
            a = self._eval(f.a, env, penv)
            b = self._eval(f.b, env, penv)
            if isinstance(f, And):
                return a and b
            if isinstance(f, Or):
                return a or b
            if isinstance(f, Implies):
                return (not a) or b
            return a == b
        if isinstance(f, (ForallObj, ExistsObj)):
            values = []
            for x in range(S.n):
                inner = dict(env)
                inner[f.var] = x
                values.append(self._eval(f.body, inner, penv))
            return all(values) if isinstance(f, ForallObj) else any(values)
        values = []
        for R in self._range(f, penv):
            inner = dict(penv)
            inner[(f.name, f.arity)] = R
            values.append(self._eval(f.body, env, inner))
        return all(values) if isinstance(f, ForallPred) else any(values)

    def _range(self, f, penv):
        S = self.S
        hint = f.hint
        kind = hint.kind if hint is not None else 'full'
        if kind in ('endo', 'subgroup', 'homfrom') and not self.use_hints:
            kind = 'full'
        universe = [t for t in _tuples(S.n, f.arity)]
        if kind == 'full':
            if len(universe) > self.so_enum_cap:
                raise ResourceCapError('full enumeration cap exceeded')
            return [Relation(f.arity, [universe[i] for i in range(len(universe)) if mask >> i & 1])
                    for mask in range(2 ** len(universe))]
        if kind == 'card':
            out = []
            for mask in range(2 ** len(universe)) if len(universe) <= 20 else ():
                if bin(mask).count('1') <= hint.bound:
                    out.append(Relation(f.arity, [universe[i] for i in range(len(universe)) if mask >> i & 1]))
            if len(universe) > 20:
                raise ResourceCapError('reference card enumeration only handles 20 tuples')
            return out
        assert isinstance(S, GroupStructure)
        if kind == 'subgroup':
            return [Relation(1, [(S.index_of(e),) for e in H]) for H in enumerate_subgroups(S.shape)]
        if kind == 'endo':
            return [Relation(2, [(i, S.index_of(apply(g, a))) for i, a in enumerate(S.elements)])
                    for g in enumerate_endos(S.shape)]
        # homfrom: restrictions of endomorphisms do not cover every map from a
        # subgroup, so maps are found by brute force over all functions on it
        domain = subgroup_closure([S.elements[i] for i in penv[(hint.param, 1)].members], S.shape)
        dom = [S.index_of(e) for e in domain]
        out = []
        for images in _functions(len(dom), S.n, self):
            phi = dict(zip(dom, images))
            if all(phi[S.index_of(S.elements[a] + S.elements[b])] == S.index_of(S.elements[phi[a]] + S.elements[phi[b]])
                   for a in dom for b in dom):
                out.append(Relation(2, phi.items()))
        return out


def _tuples(n, arity):
    if arity == 0:
        yield ()
        return
    for head in range(n):
        for rest in _tuples(n, arity - 1):
            yield (head,) + rest


def _functions(k, n, ev):
    if k == 0:
        yield ()
        return
    for head in range(n):
        ev._tick()
        for rest in _functions(k - 1, n, ev):
            yield (head,) + rest


def reference_evaluate(binding: ModelBinding, f: Formula, budget: int = DEFAULT_BUDGET,
                       use_hints: bool = True) -> bool:
    return ReferenceEvaluator(binding.structure, budget=budget, use_hints=use_hints).evaluate(f, binding.valuation)
