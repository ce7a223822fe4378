'''Satisfaction over finite structures.

Formulas are compiled to Python closures over a slot environment.  The
satisfaction relation is the usual inductive one; And, Or, Implies and
quantifiers stop at the first deciding operand, scanning left to right.

Three things keep second-order sentences tractable:

* runs of same-kind quantifiers form a block whose variables draw their
  candidates from guard conjuncts (``y = a + b`` fixes y, ``P(x, y)``
  lists y, a conjunct mentioning only y filters once per structure);
  assignments a guard rules out cannot change the block's value;
* every other conjunct is checked as soon as the block variables it
  mentions are assigned;
* quantified subformulas with at most two free variables, or with
  predicate quantifiers inside, are memoised on the values of their free
  variables.
'''
from __future__ import annotations

import itertools
import sys
import time
from dataclasses import dataclass, field

from .errors import ResourceCapError, SignatureError, UnboundVariableError, UnknownGuardError
from .formulas import (
    ATOMS, OBJ_QUANT, PRED_QUANT, And, Eq, ExistsObj, ExistsPred, ForallObj, ForallPred, Formula, Hint, Iff,
    Implies, Not, Or, Plus, Pred, Times, conj, free_vars, has_predicate_quantifier,
)
from .structures import (
    DEFAULT_SO_ENUM_CAP, ModelBinding, Relation, Structure, check_card_cap, check_full_cap, guard_enumerator,
    iter_subsets,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

MEMO_LIMIT = 1_000_000
# full-enumeration ranges up to this many relations are kept in memory
RANGE_CACHE_LIMIT = 4096


@dataclass
class EvalStats:
    quantifier_expansions: int = 0
    relations_enumerated: int = 0
    short_circuits: int = 0
    memo_hits: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            'memo_hits': self.memo_hits,
            'quantifier_expansions': self.quantifier_expansions,
            'relations_enumerated': self.relations_enumerated,
            'short_circuits': self.short_circuits,
            'wall_time': round(self.wall_time, 6),
        }


# ---------------------------------------------------------------- normal form

def normalize(f: Formula, _memo: dict | None = None) -> Formula:
    '''Drop double negations and push negation through quantifiers.'''
    memo = {} if _memo is None else _memo
    key = id(f)
    hit = memo.get(key)
    if hit is not None and hit[0] is f:
        return hit[1]
    if isinstance(f, ATOMS):
        out = f
    elif isinstance(f, Not):
        g = f.f
        if isinstance(g, Not):
            out = normalize(g.f, memo)
        elif isinstance(g, ForallObj):
            out = ExistsObj(g.var, normalize(Not(g.body), memo))
        elif isinstance(g, ExistsObj):
            out = ForallObj(g.var, normalize(Not(g.body), memo))
        elif isinstance(g, ForallPred):
            out = ExistsPred(g.name, g.arity, g.hint, normalize(Not(g.body), memo))
        elif isinstance(g, ExistsPred):
            out = ForallPred(g.name, g.arity, g.hint, normalize(Not(g.body), memo))
        else:
            out = Not(normalize(g, memo))
    elif isinstance(f, (And, Or, Implies, Iff)):
        out = type(f)(normalize(f.a, memo), normalize(f.b, memo))
    elif isinstance(f, OBJ_QUANT):
        out = type(f)(f.var, normalize(f.body, memo))
    else:
        out = type(f)(f.name, f.arity, f.hint, normalize(f.body, memo))
    memo[key] = (f, out)
    return out


def conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return conjuncts(f.a) + conjuncts(f.b)
    if isinstance(f, Not) and isinstance(f.f, Not):
        return conjuncts(f.f.f)
    return [f]


def split_universal_body(f: Formula) -> tuple[list[Formula], Formula | None]:
    '''Write f as (a1 and ... and ak) => c; c None stands for falsity.'''
    if isinstance(f, Implies):
        ante, cons = split_universal_body(f.b)
        return conjuncts(f.a) + ante, cons
    if isinstance(f, Not):
        return conjuncts(f.f), None
    if isinstance(f, Or):
        left = f.a.f if isinstance(f.a, Not) else Not(f.a)
        ante, cons = split_universal_body(f.b)
        return conjuncts(left) + ante, cons
    return [], f


def _var_key(node) -> tuple:
    if isinstance(node, OBJ_QUANT):
        return ('o', node.var)
    return ('p', node.name, node.arity)


def _deps(f: Formula) -> set:
    o, p = free_vars(f)
    return {('o', x) for x in o} | {('p',) + k for k in p}


# ---------------------------------------------------------------- compiler

class _Scope:
    def __init__(self):
        self.slots: dict = {}
        self.size = 0

    def bind(self, key):
        old = self.slots.get(key)
        self.slots[key] = self.size
        self.size += 1
        return self.size - 1, old

    def restore(self, key, old):
        if old is None:
            del self.slots[key]
        else:
            self.slots[key] = old

    def slot(self, key):
        try:
            return self.slots[key]
        except KeyError:
            name = key[1] if key[0] == 'o' else f'{key[1]}/{key[2]}'
            raise UnboundVariableError(f'variable {name} is not bound') from None


class _Unit:
    __slots__ = ('keys', 'fn', 'size', 'memo')

    def __init__(self, keys):
        self.keys = keys
        self.fn = None
        self.size = 0
        self.memo = {}


class Evaluator:
    '''Compiled model checker bound to one structure.

    Compiled subformulas and their memo tables persist across calls, so
    evaluating one formula under many valuations reuses earlier work.
    '''

    def __init__(self, structure: Structure, so_enum_cap: int = DEFAULT_SO_ENUM_CAP, use_hints: bool = True,
                 memo_limit: int = MEMO_LIMIT):
        self.structure = structure
        self.so_enum_cap = so_enum_cap
        self.use_hints = use_hints
        self.memo_limit = memo_limit
        self.stats = EvalStats()
        self._units: dict = {}
        self._norm_memo: dict = {}
        self._ranges: dict = {}

    # -- public

    def evaluate(self, f: Formula, valuation=None) -> bool:
        if isinstance(valuation, ModelBinding):
            objs, preds = valuation.resolve()
        else:
            objs, preds = ModelBinding(self.structure, valuation or {}).resolve()
        start = time.perf_counter()
        try:
            g = normalize(f, self._norm_memo)
            unit = self._unit(g)
            key = []
            for k in unit.keys:
                if k[0] == 'o':
                    if k[1] not in objs:
                        raise UnboundVariableError(f'free variable {k[1]} has no value')
                    key.append(objs[k[1]])
                else:
                    rel = preds.get((k[1], k[2]))
                    if rel is None:
                        raise UnboundVariableError(f'free predicate {k[1]}/{k[2]} has no value')
                    key.append(rel)
            return self._call(unit, tuple(key))
        finally:
            self.stats.wall_time += time.perf_counter() - start

    def relations(self, hint: Hint | None, arity: int, param: Relation | None = None) -> list[Relation]:
        '''The range of a predicate quantifier with this hint.'''
        S = self.structure
        kind = hint.kind if hint is not None else 'full'
        if kind in ('endo', 'subgroup', 'homfrom') and not self.use_hints:
            kind = 'full'
        if kind == 'full':
            check_full_cap(S.n, arity, self.so_enum_cap)
            return self._range(('full', arity), lambda: iter_subsets(S.n, arity))
        if kind == 'card':
            check_card_cap(S.n, arity, hint.bound, self.so_enum_cap)
            return self._range(('card', arity, hint.bound), lambda: iter_subsets(S.n, arity, hint.bound))
        return guard_enumerator(S, kind, arity, param)

    # -- internals

    def _range(self, key, make):
        hit = self._ranges.get(key)
        if hit is not None:
            return hit
        items = []
        for r in make():
            items.append(r)
            if len(items) > RANGE_CACHE_LIMIT:
                return _Regenerating(make)
        self._ranges[key] = items
        return items

    def _call(self, unit: _Unit, key: tuple) -> bool:
        r = unit.memo.get(key)
        if r is None:
            env = [None] * unit.size
            env[:len(key)] = key
            r = unit.fn(env)
            if len(unit.memo) < self.memo_limit:
                unit.memo[key] = r
        else:
            self.stats.memo_hits += 1
        return r

    def _unit(self, node: Formula) -> _Unit:
        u = self._units.get(node)
        if u is not None:
            return u
        o, p = free_vars(node)
        keys = tuple(sorted(('o', x) for x in o)) + tuple(sorted(('p',) + k for k in p))
        u = _Unit(keys)
        scope = _Scope()
        for k in keys:
            scope.bind(k)
        u.fn = self._compile(node, scope, root=node)
        u.size = scope.size
        self._units[node] = u
        return u

    def _unit_call(self, node: Formula, scope: _Scope):
        u = self._unit(node)
        slots = [scope.slot(k) for k in u.keys]
        memo = u.memo
        st = self.stats
        limit = self.memo_limit

        if len(slots) == 1:
            s0 = slots[0]

            def call(env):
                key = (env[s0],)
                r = memo.get(key)
                if r is None:
                    e = [None] * u.size
                    e[0] = key[0]
                    r = u.fn(e)
                    if len(memo) < limit:
                        memo[key] = r
                else:
                    st.memo_hits += 1
                return r
            return call

        def call(env):
            key = tuple([env[s] for s in slots])
            r = memo.get(key)
            if r is None:
                e = [None] * u.size
                e[:len(key)] = key
                r = u.fn(e)
                if len(memo) < limit:
                    memo[key] = r
            else:
                st.memo_hits += 1
            return r
        return call

    def _memoisable(self, node: Formula) -> bool:
        if not isinstance(node, OBJ_QUANT + PRED_QUANT):
            return False
        if has_predicate_quantifier(node):
            return True
        o, p = free_vars(node)
        return len(o) + len(p) <= 2

    def _compile(self, f: Formula, scope: _Scope, root: Formula | None = None):
        if f is not root and self._memoisable(f):
            return self._unit_call(f, scope)
        if isinstance(f, ATOMS):
            return self._compile_atom(f, scope)
        st = self.stats
        if isinstance(f, Not):
            g = self._compile(f.f, scope)
            return lambda env: not g(env)
        if isinstance(f, And):
            parts = [self._compile(c, scope) for c in conjuncts(f)]

            def conj_fn(env):
                for c in parts:
                    if not c(env):
                        st.short_circuits += 1
                        return False
                return True
            return conj_fn
        if isinstance(f, Or):
            a, b = self._compile(f.a, scope), self._compile(f.b, scope)

            def or_fn(env):
                if a(env):
                    st.short_circuits += 1
                    return True
                return b(env)
            return or_fn
        if isinstance(f, Implies):
            a, b = self._compile(f.a, scope), self._compile(f.b, scope)

            def imp_fn(env):
                if not a(env):
                    st.short_circuits += 1
                    return True
                return b(env)
            return imp_fn
        if isinstance(f, Iff):
            a, b = self._compile(f.a, scope), self._compile(f.b, scope)
            return lambda env: a(env) == b(env)
        return self._compile_block(f, scope)

    def _compile_atom(self, f, scope: _Scope):
        S = self.structure
        if isinstance(f, Eq):
            x, y = scope.slot(('o', f.x)), scope.slot(('o', f.y))
            return lambda env: env[x] == env[y]
        if isinstance(f, Pred):
            p = scope.slot(('p', f.name, f.arity))
            slots = [scope.slot(('o', a)) for a in f.args]
            if len(slots) == 1:
                a = slots[0]
                return lambda env: env[a] in env[p].members
            if len(slots) == 2:
                a, b = slots
                return lambda env: (env[a], env[b]) in env[p].members
            return lambda env: tuple([env[s] for s in slots]) in env[p].members
        x, y, z = (scope.slot(('o', v)) for v in (f.x, f.y, f.z))
        if isinstance(f, Plus):
            T = S.add_table
            if T is not None:
                return lambda env: T[env[y]][env[z]] == env[x]
            add = S.add
            return lambda env: add(env[y], env[z]) == env[x]
        if S.kind != 'ring':
            raise SignatureError('the group language has no product')
        T = S.mul_table
        if T is not None:
            return lambda env: T[env[y]][env[z]] == env[x]
        mul = S.mul
        return lambda env: mul(env[y], env[z]) == env[x]

    # -- quantifier blocks

    def _compile_block(self, node: Formula, scope: _Scope):
        universal = isinstance(node, (ForallObj, ForallPred))
        same = (ForallObj, ForallPred) if universal else (ExistsObj, ExistsPred)
        block: list[tuple] = []
        nodes: dict = {}
        g = node
        while isinstance(g, same) and _var_key(g) not in nodes:
            k = _var_key(g)
            block.append(k)
            nodes[k] = g
            g = g.body
        if universal:
            guards, cons = split_universal_body(g)
        else:
            guards, cons = conjuncts(g), None
        self._absorb_existentials(block, nodes, guards, cons)

        block_set = set(block)
        deps = [_deps(c) & block_set for c in guards]
        outer_bound = set()   # block vars already placed
        order: list[tuple] = []
        producers: dict = {}
        consumed: set[int] = set()
        filters: dict = {k: [] for k in block}

        remaining = list(block)
        while remaining:
            best = None
            for k in remaining:
                cand = self._plan_var(k, nodes[k], guards, deps, consumed, outer_bound, block_set)
                if cand is None:
                    continue
                if best is None or cand[0] > best[0]:
                    best = cand + (k,)
            if best is None:
                # only possible when a homfrom set is a later block variable that nothing binds
                best = (0, ('full',), None, remaining[0])
            score, spec, used, k = best
            remaining.remove(k)
            order.append(k)
            producers[k] = spec
            if used is not None:
                consumed.update(used)
            outer_bound.add(k)
            if k[0] == 'o':
                for i, c in enumerate(guards):
                    if i in consumed or not isinstance(c, ATOMS):
                        continue
                    if k in deps[i] and deps[i] <= outer_bound:
                        filters[k].append(i)
                        consumed.add(i)

        position = {k: i for i, k in enumerate(order)}
        placed: dict[int, list[int]] = {}
        for i in range(len(guards)):
            if i in consumed and not any(i in fl for fl in filters.values()):
                continue
            if any(i in fl for fl in filters.values()):
                continue
            level = max((position[k] for k in deps[i]), default=-1)
            placed.setdefault(level, []).append(i)

        # compile in the extended scope
        saved = []
        slot_of = {}
        for k in order:
            slot, old = scope.bind(k)
            saved.append((k, old))
            slot_of[k] = slot
        try:
            compiled = {}
            for i, c in enumerate(guards):
                if i in consumed and not any(i in fl for fl in filters.values()):
                    continue
                compiled[i] = self._compile(c, scope)
            cons_fn = self._compile(cons, scope) if cons is not None else None
            gens = [self._producer(k, nodes[k], producers[k], guards, scope, slot_of) for k in order]
        finally:
            for k, old in reversed(saved):
                scope.restore(k, old)

        levels = []
        for idx, k in enumerate(order):
            checks = [compiled[i] for i in filters[k]] + [compiled[i] for i in placed.get(idx, [])]
            levels.append((slot_of[k], gens[idx], checks))
        pre = [compiled[i] for i in placed.get(-1, [])]
        return self._assemble(universal, pre, levels, cons_fn)

    def _absorb_existentials(self, block, nodes, guards, cons):
        '''Pull an existential conjunct's variable into the block when no capture can occur.'''
        changed = True
        while changed:
            changed = False
            for i, c in enumerate(guards):
                if not isinstance(c, ExistsObj):
                    continue
                k = ('o', c.var)
                if k in nodes:
                    continue
                others = [g for j, g in enumerate(guards) if j != i] + ([cons] if cons is not None else [])
                if any(c.var in free_vars(g)[0] for g in others):
                    continue
                block.append(k)
                nodes[k] = c
                guards[i:i + 1] = conjuncts(c.body)
                changed = True
                break

    def _plan_var(self, k, node, guards, deps, consumed, bound, block_set):
        '''Best candidate source for block variable k given the already-placed ones.'''
        if k[0] == 'p':
            hint = node.hint
            if hint is not None and hint.kind == 'homfrom':
                pk = ('p', hint.param, 1)
                if pk in block_set and pk not in bound:
                    return None
            for i, c in enumerate(guards):
                if i in consumed or k not in deps[i] or not deps[i] <= bound | {k}:
                    continue
                env_spec = _envelope(c, k[1], k[2])
                if env_spec is not None:
                    return (3, ('envelope',) + env_spec, {i})
            return (1, ('pred',), None)
        var = k[1]
        best = (0, ('full',), None)
        statics = []
        for i, c in enumerate(guards):
            if i in consumed or k not in deps[i] or not deps[i] <= bound | {k}:
                continue
            o, p = free_vars(c)
            if o == {var} and not p:
                statics.append(i)
            if isinstance(c, ATOMS):
                spec = _solve_atom(c, var)
                if spec is not None:
                    score = 3 if spec[0] == 'index' else 4
                    if score > best[0]:
                        best = (score, spec, {i})
        if best[0] < 2 and statics:
            best = (2, ('static', tuple(statics)), set(statics))
        return best

    def _producer(self, k, node, spec, guards, scope, slot_of):
        if k[0] != 'p':
            return self._object_producer(k, node, spec, guards, scope, slot_of)
        base = self._pred_range(node, scope)
        if spec[0] == 'envelope':
            return self._envelope_producer(base, node.arity, spec, scope)
        return base

    def _pred_range(self, node, scope):
        hint = node.hint
        arity = node.arity
        st = self.stats
        if hint is not None and hint.kind == 'homfrom' and self.use_hints:
            ps = scope.slot(('p', hint.param, 1))

            def gen_hom(env):
                rels = self.relations(hint, arity, env[ps])
                st.relations_enumerated += len(rels)
                return rels
            return gen_hom
        if hint is not None and hint.kind == 'homfrom':
            scope.slot(('p', hint.param, 1))
        rels = None

        def gen_pred(env):
            nonlocal rels
            if rels is None:
                rels = self.relations(hint, arity, None)
            st.relations_enumerated += len(rels) if isinstance(rels, list) else 0
            return rels
        return gen_pred

    def _envelope_producer(self, base, arity, spec, scope):
        """Candidates between the bounds a guard carves out (see _envelope)."""
        _, ys, upper, lower = spec
        n = self.structure.n
        tuples = list(itertools.product(range(n), repeat=arity))
        call = self._call

        def region_fn(phi):
            unit = self._unit(phi)
            where = []
            for key in unit.keys:
                if key[0] == 'o' and key[1] in ys:
                    where.append((True, ys.index(key[1])))
                else:
                    where.append((False, scope.slot(key)))

            def region(env):
                outer = [None if is_y else env[s] for is_y, s in where]
                inside = []
                for t in tuples:
                    if call(unit, tuple([t[s] if is_y else outer[j] for j, (is_y, s) in enumerate(where)])):
                        inside.append(t[0] if arity == 1 else t)
                return frozenset(inside)
            return region

        up = region_fn(upper)
        low = region_fn(lower) if lower is not None else None
        by_members = {}

        def gen_envelope(env):
            U = up(env)
            rels = base(env)
            if low is None:
                return [R for R in rels if R.members <= U]
            L = low(env)
            if L == U and isinstance(rels, list):
                idx = by_members.get(id(rels))
                if idx is None or idx[0] is not rels:
                    idx = (rels, {R.members: R for R in rels})
                    by_members[id(rels)] = idx
                hit = idx[1].get(U)
                return (hit,) if hit is not None else ()
            return [R for R in rels if L <= R.members <= U]
        return gen_envelope

    def _object_producer(self, k, node, spec, guards, scope, slot_of):
        S = self.structure
        kind = spec[0]
        if kind == 'full':
            rng = range(S.n)
            return lambda env: rng
        if kind == 'copy':
            s = scope.slot(('o', spec[1]))
            return lambda env: (env[s],)
        if kind in ('add', 'sub', 'mul'):
            a, b = scope.slot(('o', spec[1])), scope.slot(('o', spec[2]))
            table = {'add': S.add_table, 'sub': S.sub_table, 'mul': S.mul_table}[kind]
            if table is not None:
                return lambda env: (table[env[a]][env[b]],)
            fn = {'add': S.add, 'sub': S.sub, 'mul': S.mul}[kind]
            return lambda env: (fn(env[a], env[b]),)
        if kind == 'index':
            _, pkey, pos, others = spec
            ps = scope.slot(pkey)
            oslots = tuple(scope.slot(('o', v)) for v in others)
            if not oslots:
                return lambda env: sorted(env[ps].members)
            if len(oslots) == 1:
                o0 = oslots[0]
                return lambda env: env[ps].lookup(pos, (env[o0],))
            return lambda env: env[ps].lookup(pos, tuple([env[s] for s in oslots]))
        # static: carrier elements meeting every conjunct that mentions only this variable
        formula = conj(*(guards[i] for i in spec[1]))
        unit = self._unit(formula)
        cell = []

        def gen_static(env):
            if not cell:
                cell.append([x for x in range(S.n) if self._call(unit, (x,))])
            return cell[0]
        return gen_static

    def _assemble(self, universal, pre, levels, cons_fn):
        st = self.stats

        def build(idx):
            if idx == len(levels):
                if universal:
                    if cons_fn is None:
                        return lambda env: False
                    return cons_fn
                return lambda env: True
            slot, gen, checks = levels[idx]
            inner = build(idx + 1)
            if universal:
                def run(env):
                    for v in gen(env):
                        env[slot] = v
                        st.quantifier_expansions += 1
                        for c in checks:
                            if not c(env):
                                break
                        else:
                            if not inner(env):
                                st.short_circuits += 1
                                return False
                    return True
            else:
                def run(env):
                    for v in gen(env):
                        env[slot] = v
                        st.quantifier_expansions += 1
                        for c in checks:
                            if not c(env):
                                break
                        else:
                            if inner(env):
                                st.short_circuits += 1
                                return True
                    return False
            return run

        body = build(0)
        if not pre:
            return body
        if universal:
            def guarded(env):
                for c in pre:
                    if not c(env):
                        return True
                return body(env)
        else:
            def guarded(env):
                for c in pre:
                    if not c(env):
                        return False
                return body(env)
        return guarded


class _Regenerating:
    '''A relation range too large to cache; re-enumerated on each pass.'''

    def __init__(self, make):
        self.make = make

    def __iter__(self):
        return iter(self.make())


def _envelope(c, name, arity):
    """Bounds a guard puts on the predicate `name`, if it has the right shape.

    Shapes: for all vs, [psi =>] (name(ys) => phi) or (name(ys) <=> phi),
    with ys distinct variables among vs and name absent from psi and phi.
    With ws the remaining variables, the guard holds exactly when
    {ys : exists ws (psi and phi)} <= name <= {ys : forall ws (psi => phi)};
    the lower bound only applies to the biconditional.
    """
    vs = []
    g = c
    while isinstance(g, ForallObj):
        vs.append(g.var)
        g = g.body
    psi = None
    if isinstance(g, Implies) and isinstance(g.b, (Implies, Iff)):
        psi, g = g.a, g.b
    phi = None
    exact = False
    if isinstance(g, Implies) and isinstance(g.a, Pred) and g.a.name == name:
        atom, phi = g.a, g.b
    elif isinstance(g, Iff) and isinstance(g.a, Pred) and g.a.name == name:
        atom, phi, exact = g.a, g.b, True
    elif isinstance(g, Iff) and isinstance(g.b, Pred) and g.b.name == name:
        atom, phi, exact = g.b, g.a, True
    else:
        return None
    ys = atom.args
    if atom.arity != arity or len(set(ys)) != arity or not set(ys) <= set(vs) or len(set(vs)) != len(vs):
        return None
    key = (name, arity)
    if key in free_vars(phi)[1] or (psi is not None and key in free_vars(psi)[1]):
        return None
    ws = [v for v in vs if v not in ys]
    upper = phi if psi is None else Implies(psi, phi)
    for w in reversed(ws):
        upper = ForallObj(w, upper)
    lower = None
    if exact:
        lower = phi if psi is None else And(psi, phi)
        for w in reversed(ws):
            lower = ExistsObj(w, lower)
    return (tuple(ys), upper, lower)


def _solve_atom(c, var):
    '''How an atom determines var from its other arguments, if it does.'''
    if isinstance(c, Eq):
        if c.x == var and c.y != var:
            return ('copy', c.y)
        if c.y == var and c.x != var:
            return ('copy', c.x)
        return None
    if isinstance(c, Pred):
        if c.args.count(var) != 1:
            return None
        pos = c.args.index(var)
        return ('index', ('p', c.name, c.arity), pos, c.args[:pos] + c.args[pos + 1:])
    args = (c.x, c.y, c.z)
    if args.count(var) != 1:
        return None
    if isinstance(c, Plus):
        if c.x == var:
            return ('add', c.y, c.z)
        if c.y == var:
            return ('sub', c.x, c.z)
        return ('sub', c.x, c.y)
    if c.x == var:
        return ('mul', c.y, c.z)
    return None


# ---------------------------------------------------------------- convenience

def evaluate(binding: ModelBinding, f: Formula, so_enum_cap: int = DEFAULT_SO_ENUM_CAP,
             use_hints: bool = True) -> tuple[bool, EvalStats]:
    ev = Evaluator(binding.structure, so_enum_cap=so_enum_cap, use_hints=use_hints)
    value = ev.evaluate(f, binding)
    return value, ev.stats


def verify_hint_soundness(structure: Structure, guard: str, arity: int, guard_formula: Formula,
                          var: str = 'P', param: tuple[str, Relation] | None = None,
                          so_enum_cap: int = DEFAULT_SO_ENUM_CAP) -> bool:
    '''Does the guard enumerator list exactly the relations satisfying guard_formula?

    guard_formula speaks about the predicate variable `var` of the given
    arity; `param` binds the unary set a homfrom guard is relative to.
    '''
    check_full_cap(structure.n, arity, so_enum_cap)
    hinted = set(guard_enumerator(structure, guard, arity, param[1] if param else None))
    ev = Evaluator(structure, so_enum_cap=so_enum_cap)
    extra = {(param[0], 1): param[1]} if param else {}
    filtered = set()
    for R in iter_subsets(structure.n, arity):
        if ev.evaluate(guard_formula, {(var, arity): R, **extra}):
            filtered.add(R)
    return filtered == hinted
