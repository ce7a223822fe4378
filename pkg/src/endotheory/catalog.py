'''Constructors for the definable formulas over groups and endomorphism rings.

Every builder returns a formula whose free variables are exactly the names
it was given.  Bound names are chosen deterministically (the base name when
it is free, else the lowest unused index), so equal calls build equal
formulas and the evaluator can share work between them.

The languages have no constants, so derived notation is spelled out:

* ``zero(z)`` is the atom z = z + z, which pins z to the neutral element;
* ``b = -a`` is "a + b is zero";
* ``x = p*y`` is a chain of additions with fresh intermediate variables;
* in rings ``one(e)`` says e*y = y = y*e for all y, and "c is central"
  says c*y = y*c for all y.

Products are read left factor first, as everywhere else in the package.
'''
from __future__ import annotations

from enum import Enum
from functools import lru_cache

from .errors import EndotheoryError
from .formulas import (
    And, Eq, ExistsObj, ExistsPred, ForallObj, ForallPred, Formula, Iff, Implies, Not, Or, Plus, Pred, Times,
    SUBGROUP, conj, fresh_name, neq,
)
from .formulas import hom_from as hom_from_hint
from .pgroup import is_prime


class _Names:
    '''Hands out bound names that avoid a fixed set of free names.'''

    def __init__(self, *taken: str):
        self.taken = set(taken)

    def __call__(self, base: str) -> str:
        name = base if base not in self.taken else fresh_name(base, self.taken)
        self.taken.add(name)
        return name


def _check_p(p: int) -> int:
    if not is_prime(p):
        raise EndotheoryError(f'{p} is not prime')
    return p


def _exists(vars_, body):
    for v in reversed(vars_):
        body = ExistsObj(v, body)
    return body


def _forall(vars_, body):
    for v in reversed(vars_):
        body = ForallObj(v, body)
    return body


# ================================================================ shared notation

def zero(z: str) -> Formula:
    return Plus(z, z, z)


def nonzero(z: str) -> Formula:
    return Not(Plus(z, z, z))


@lru_cache(maxsize=None)
def tautology() -> Formula:
    return ForallObj('x', Eq('x', 'x'))


@lru_cache(maxsize=None)
def times_p(x: str, y: str, p: int) -> Formula:
    '''x = p*y'''
    if p == 2:
        return Plus(x, y, y)
    fresh = _Names(x, y)
    steps = [fresh('u') for _ in range(p - 2)]
    atoms = [Plus(steps[0], y, y)]
    for prev, cur in zip(steps, steps[1:]):
        atoms.append(Plus(cur, prev, y))
    atoms.append(Plus(x, steps[-1], y))
    return _exists(steps, conj(*atoms))


@lru_cache(maxsize=None)
def times_pk(x: str, y: str, p: int, k: int) -> Formula:
    '''x = p^k * y'''
    if k == 0:
        return Eq(x, y)
    if k == 1:
        return times_p(x, y, p)
    fresh = _Names(x, y)
    mids = [fresh('w') for _ in range(k - 1)]
    chain = [y] + mids + [x]
    return _exists(mids, conj(*(times_p(b, a, p) for a, b in zip(chain, chain[1:]))))


@lru_cache(maxsize=None)
def annihilated(x: str, p: int, k: int) -> Formula:
    '''p^k * x = 0'''
    if k == 0:
        return zero(x)
    w = _Names(x)('w')
    return ExistsObj(w, And(times_pk(w, x, p, k), zero(w)))


@lru_cache(maxsize=None)
def is_negative(b: str, a: str) -> Formula:
    '''b = -a'''
    t = _Names(a, b)('t')
    return ExistsObj(t, And(Plus(t, a, b), zero(t)))


@lru_cache(maxsize=None)
def holds_at_zero(P: str) -> Formula:
    '''P(0)'''
    return ExistsObj('z', And(zero('z'), Pred(P, ('z',))))


@lru_cache(maxsize=None)
def graph_holds_at_zero(F: str, x: str) -> Formula:
    '''F(x, 0)'''
    z = _Names(x)('z')
    return ExistsObj(z, And(zero(z), Pred(F, (x, z))))


@lru_cache(maxsize=None)
def subset(P: str, Q: str) -> Formula:
    return ForallObj('x', Implies(Pred(P, ('x',)), Pred(Q, ('x',))))


# ================================================================ group formulas

@lru_cache(maxsize=None)
def func(P: str) -> Formula:
    '''P is the graph of a map A -> A.'''
    return And(
        ForallObj('x', ExistsObj('y', Pred(P, ('x', 'y')))),
        _forall(['x', 'y1', 'y2'], Implies(And(Pred(P, ('x', 'y1')), Pred(P, ('x', 'y2'))), Eq('y1', 'y2'))))


@lru_cache(maxsize=None)
def additive_graph(P: str) -> Formula:
    '''P(x1, y1) and P(x2, y2) give P(x1 + x2, y1 + y2).'''
    return _forall(['x1', 'x2', 'y1', 'y2'], Implies(
        And(Pred(P, ('x1', 'y1')), Pred(P, ('x2', 'y2'))),
        _exists(['u', 'w'], conj(Plus('u', 'x1', 'x2'), Plus('w', 'y1', 'y2'), Pred(P, ('u', 'w'))))))


@lru_cache(maxsize=None)
def endom(P: str) -> Formula:
    return And(func(P), additive_graph(P))


@lru_cache(maxsize=None)
def hom_from(P: str, B: str) -> Formula:
    '''P is the graph of an additive map from the set B into A.'''
    return conj(
        ForallObj('x', Iff(Pred(B, ('x',)), ExistsObj('y', Pred(P, ('x', 'y'))))),
        _forall(['x', 'y1', 'y2'], Implies(And(Pred(P, ('x', 'y1')), Pred(P, ('x', 'y2'))), Eq('y1', 'y2'))),
        additive_graph(P))


@lru_cache(maxsize=None)
def gr(P: str) -> Formula:
    '''P is a subgroup.'''
    return conj(
        _forall(['a', 'b'], Implies(And(Pred(P, ('a',)), Pred(P, ('b',))),
                                    ExistsObj('c', And(Plus('c', 'a', 'b'), Pred(P, ('c',)))))),
        holds_at_zero(P),
        ForallObj('a', Implies(Pred(P, ('a',)), ExistsObj('b', And(is_negative('b', 'a'), Pred(P, ('b',)))))))


@lru_cache(maxsize=None)
def cycl(P: str) -> Formula:
    '''P is a cyclic subgroup: some a in P lies in no subgroup missing part of P.'''
    Q = _Names(P)('Pa')
    return And(gr(P), ExistsObj('a', And(
        Pred(P, ('a',)),
        ForallPred(Q, 1, SUBGROUP, Implies(And(gr(Q), Pred(Q, ('a',))), subset(P, Q))))))


@lru_cache(maxsize=None)
def dcycl(P: str, p: int) -> Formula:
    '''P is a direct sum of cyclic subgroups.

    Each nonzero a of order p in P lies in a cyclic summand P1 of P with a
    complement P2 inside P.
    '''
    preds = _Names(P)
    P1, P2 = preds('P1'), preds('P2')
    a = 'a'
    return And(gr(P), ForallObj(a, Implies(
        conj(Pred(P, (a,)), nonzero(a), annihilated(a, p, 1)),
        ExistsPred(P1, 1, SUBGROUP, ExistsPred(P2, 1, SUBGROUP, conj(
            cycl(P1),
            gr(P2),
            Pred(P1, (a,)),
            subset(P1, P),
            subset(P2, P),
            ForallObj('b', Implies(And(Pred(P1, ('b',)), Pred(P2, ('b',))), zero('b'))),
            ForallObj('b', Implies(Pred(P, ('b',)), _exists(['b1', 'b2'], conj(
                Pred(P1, ('b1',)), Pred(P2, ('b2',)), Plus('b', 'b1', 'b2')))))))))))


@lru_cache(maxsize=None)
def gr_generated(Pa: str, a: str) -> Formula:
    '''Pa is the subgroup generated by a.'''
    Q = _Names(Pa)('P')
    return conj(
        Pred(Pa, (a,)),
        gr(Pa),
        ForallPred(Q, 1, SUBGROUP, Implies(And(Pred(Q, (a,)), gr(Q)), subset(Pa, Q))))


@lru_cache(maxsize=None)
def ord_leq(a1: str, a2: str) -> Formula:
    '''o(a1) <= o(a2): an injective correspondence from <a1> into <a2> exists.

    The correspondence is sought among additive maps on <a1>, which is
    enough because both groups are cyclic.
    '''
    P1, P2, F = 'P1', 'P2', 'F'
    names = _Names(a1, a2)
    b1, b2, c1, c2 = names('b1'), names('b2'), names('c1'), names('c2')
    return ExistsPred(P1, 1, SUBGROUP, ExistsPred(P2, 1, SUBGROUP, ExistsPred(F, 2, hom_from_hint(P1), conj(
        gr_generated(P1, a1),
        gr_generated(P2, a2),
        hom_from(F, P1),
        ForallObj(b1, Implies(Pred(P1, (b1,)), ExistsObj(b2, And(Pred(P2, (b2,)), Pred(F, (b1, b2)))))),
        _forall([b1, b2, c1, c2], Implies(
            conj(Pred(P1, (b1,)), Pred(P1, (c1,)), neq(b1, c1), Pred(P2, (b2,)), Pred(P2, (c2,)),
                 Pred(F, (b1, b2)), Pred(F, (c1, c2))),
            neq(b2, c2)))))))


@lru_cache(maxsize=None)
def ord_eq(a1: str, a2: str) -> Formula:
    return And(ord_leq(a1, a2), ord_leq(a2, a1))


@lru_cache(maxsize=None)
def ord_lt(a1: str, a2: str) -> Formula:
    return And(ord_leq(a1, a2), Not(ord_leq(a2, a1)))


@lru_cache(maxsize=None)
def gord(P: str, a: str) -> Formula:
    '''P is a subgroup whose elements have order at most o(a).'''
    b = _Names(a)('b')
    return And(gr(P), ForallObj(b, Implies(Pred(P, (b,)), ord_leq(b, a))))


@lru_cache(maxsize=None)
def mult(x: str, b: str, a: str, p: int) -> Formula:
    '''x is nonzero, <x, b> is cyclic and b has order o(a) modulo <x>.

    This is x = o(a) * b up to a unit of the cyclic group, which is all the
    purity test needs.  The witness F is a map on a cyclic P with kernel
    exactly <x> (it kills x but no p-th root of x), so o(F(b)) is the order
    of b modulo <x>.
    '''
    P, F = 'P', 'Pxb'
    n = _Names(x, b, a)
    b1, b2, b3, c1, c2, c3, y, c = (n(v) for v in ('b1', 'b2', 'b3', 'c1', 'c2', 'c3', 'y', 'c'))
    return ExistsPred(P, 1, SUBGROUP, ExistsPred(F, 2, hom_from_hint(P), conj(
        cycl(P),
        Pred(P, (x,)),
        Pred(P, (b,)),
        ForallObj(b1, Implies(Pred(P, (b1,)), ExistsObj(b2, And(Pred(P, (b2,)), Pred(F, (b1, b2)))))),
        _forall([b1, b2, b3], Implies(conj(Pred(P, (b1,)), Pred(F, (b1, b2)), Pred(F, (b1, b3))), Eq(b2, b3))),
        _forall([b1, b2, b3, c1, c2, c3], Implies(
            conj(Pred(P, (b1,)), Pred(P, (b2,)), Pred(P, (b3,)), Plus(b3, b1, b2), Plus(c3, c1, c2),
                 Pred(F, (b1, c1)), Pred(F, (b2, c2))),
            Pred(F, (b3, c3)))),
        graph_holds_at_zero(F, x),
        ForallObj(y, Implies(And(Pred(P, (y,)), times_p(x, y, p)), Not(graph_holds_at_zero(F, y)))),
        ExistsObj(c, And(Pred(F, (b, c)), ord_eq(c, a))))))


@lru_cache(maxsize=None)
def serv(P: str, p: int) -> Formula:
    '''P is a pure subgroup: whenever x in P is o(a) times something, it is o(a) times something in P.'''
    return And(gr(P), _forall(['a', 'x'], Implies(
        Pred(P, ('x',)),
        Implies(ExistsObj('b', mult('x', 'b', 'a', p)),
                ExistsObj('c', And(Pred(P, ('c',)), mult('x', 'c', 'a', p)))))))


@lru_cache(maxsize=None)
def fd(P: str, p: int) -> Formula:
    '''A/P is divisible: every a is p*(b + x2) - x1 with x1, x2 in P.'''
    return And(gr(P), ForallObj('a', _exists(['b', 'x1', 'x2'], conj(
        Pred(P, ('x1',)), Pred(P, ('x2',)),
        _exists(['s', 't'], conj(Plus('s', 'a', 'x1'), Plus('t', 'b', 'x2'), times_p('s', 't', p)))))))


@lru_cache(maxsize=None)
def base(P: str, p: int) -> Formula:
    return conj(gr(P), dcycl(P, p), serv(P, p), fd(P, p))


@lru_cache(maxsize=None)
def divisible(P: str, p: int) -> Formula:
    return And(gr(P), ForallObj('a', Implies(
        Pred(P, ('a',)), ExistsObj('b', And(Pred(P, ('b',)), times_p('a', 'b', p))))))


@lru_cache(maxsize=None)
def exept(p: int) -> Formula:
    '''No nonzero divisible subgroup, and no basic subgroup as large as A.'''
    F = 'F'
    bijection = conj(
        ForallObj('a', Implies(Pred('P', ('a',)), ExistsObj('b', Pred(F, ('a', 'b'))))),
        ForallObj('b', ExistsObj('a', And(Pred('P', ('a',)), Pred(F, ('a', 'b'))))),
        _forall(['a', 'b'], Implies(Pred(F, ('a', 'b')), Pred('P', ('a',)))),
        _forall(['a1', 'a2', 'b1', 'b2'], Implies(
            conj(neq('a1', 'a2'), Pred(F, ('a1', 'b1')), Pred(F, ('a2', 'b2'))), neq('b1', 'b2'))),
        _forall(['b1', 'b2', 'a1', 'a2'], Implies(
            conj(neq('b1', 'b2'), Pred(F, ('a1', 'b1')), Pred(F, ('a2', 'b2'))), neq('a1', 'a2'))))
    return And(
        ForallPred('P', 1, SUBGROUP, Implies(gr('P'), Not(divisible('P', p)))),
        ForallPred('P', 1, SUBGROUP, Implies(base('P', p), Not(ExistsPred(F, 2, None, bijection)))))


# ---------------------------------------------------------------- relativisation

def relativize(f: Formula, G: str) -> Formula:
    '''Restrict every quantifier of f to the unary predicate G.

    Object quantifiers range over G, unary predicates over subsets of G and
    binary predicates over relations on G.  The restricting clause comes
    first so guarded enumerations stay sound.
    '''
    memo: dict = {}

    def inside(name: str, arity: int) -> Formula:
        vs = ['x', 'y'][:arity] if arity <= 2 else [f'x{i}' for i in range(1, arity + 1)]
        return _forall(vs, Implies(Pred(name, tuple(vs)), conj(*(Pred(G, (v,)) for v in vs))))

    def go(g):
        key = id(g)
        hit = memo.get(key)
        if hit is not None and hit[0] is g:
            return hit[1]
        if isinstance(g, (Eq, Plus, Times, Pred)):
            out = g
        elif isinstance(g, Not):
            out = Not(go(g.f))
        elif isinstance(g, (And, Or, Implies, Iff)):
            out = type(g)(go(g.a), go(g.b))
        elif isinstance(g, ForallObj):
            if g.var == G:
                raise EndotheoryError(f'{G} is used as an object variable')
            out = ForallObj(g.var, Implies(Pred(G, (g.var,)), go(g.body)))
        elif isinstance(g, ExistsObj):
            out = ExistsObj(g.var, And(Pred(G, (g.var,)), go(g.body)))
        else:
            if g.name == G:
                raise EndotheoryError(f'{G} is rebound inside the formula')
            if isinstance(g, ForallPred):
                out = ForallPred(g.name, g.arity, g.hint, Implies(inside(g.name, g.arity), go(g.body)))
            else:
                out = ExistsPred(g.name, g.arity, g.hint, And(inside(g.name, g.arity), go(g.body)))
        memo[key] = (g, out)
        return out

    return go(f)


@lru_cache(maxsize=None)
def base_within(G: str, B: str, p: int) -> Formula:
    '''B is a basic subgroup of the subgroup G.'''
    return relativize(base(B, p), G)


# ---------------------------------------------------------------- basic-subgroup translation

@lru_cache(maxsize=None)
def phi_value(b: str, a: str, Phi: str, B: str, p: int) -> Formula:
    '''b = Phi(a) for a map Phi defined on B, extended to a by additivity.

    The cheap first clause covers a in B; the second (any subgroup G
    containing B and a in which B is basic carries an additive extension of
    Phi sending a to b) is reached only for a outside B.
    '''
    preds = _Names(Phi, B)
    G, phi = preds('G'), preds('phi')
    n = _Names(a, b)
    x, y = n('x'), n('y')
    clause_in = And(Pred(B, (a,)), Pred(Phi, (a, b)))
    clause_out = And(Not(Pred(B, (a,))), ForallPred(G, 1, SUBGROUP, Implies(
        conj(gr(G), Pred(G, (a,)), subset(B, G), base_within(G, B, p)),
        ExistsPred(phi, 2, hom_from_hint(G), conj(
            hom_from(phi, G),
            _forall([x, y], Implies(Pred(Phi, (x, y)), Pred(phi, (x, y)))),
            Pred(phi, (a, b)))))))
    return Or(clause_in, clause_out)


@lru_cache(maxsize=None)
def endom_from_base(Phi: str, B: str, p: int) -> Formula:
    '''Phi on B extends to an endomorphism of A.'''
    return conj(
        hom_from(Phi, B),
        ForallObj('a', ExistsObj('b', phi_value('b', 'a', Phi, B, p))),
        _forall(['a1', 'a2', 'b1', 'b2'], Implies(
            And(phi_value('b1', 'a1', Phi, B, p), phi_value('b2', 'a2', Phi, B, p)),
            _exists(['s', 't'], conj(Plus('s', 'b1', 'b2'), Plus('t', 'a1', 'a2'), phi_value('s', 't', Phi, B, p))))))


# ================================================================ ring formulas

@lru_cache(maxsize=None)
def product_is(x: str, factors: tuple[str, ...]) -> Formula:
    '''x = f1 * f2 * ... (left factor applied first).'''
    if len(factors) == 1:
        return Eq(x, factors[0])
    if len(factors) == 2:
        return Times(x, factors[0], factors[1])
    n = _Names(x, *factors)
    mids = [n('m') for _ in range(len(factors) - 2)]
    acc = [factors[0]] + mids + [x]
    atoms = [Times(acc[i + 1], acc[i], factors[i + 1]) for i in range(len(factors) - 1)]
    return _exists(mids, conj(*atoms))


@lru_cache(maxsize=None)
def product_zero(factors: tuple[str, ...]) -> Formula:
    t = _Names(*factors)('t')
    return ExistsObj(t, And(product_is(t, factors), zero(t)))


@lru_cache(maxsize=None)
def orthogonal(a: str, b: str) -> Formula:
    '''ab = ba = 0'''
    return And(product_zero((a, b)), product_zero((b, a)))


@lru_cache(maxsize=None)
def one(e: str) -> Formula:
    y = _Names(e)('y')
    return ForallObj(y, And(Times(y, e, y), Times(y, y, e)))


@lru_cache(maxsize=None)
def central(c: str) -> Formula:
    n = _Names(c)
    y, u = n('y'), n('u')
    return ForallObj(y, ExistsObj(u, And(Times(u, c, y), Times(u, y, c))))


@lru_cache(maxsize=None)
def idem(r: str) -> Formula:
    return Times(r, r, r)


@lru_cache(maxsize=None)
def idem_star(r: str) -> Formula:
    '''r is a nonzero idempotent that is not a sum of two nonzero orthogonal idempotents.'''
    n = _Names(r)
    t1, t2 = n('tau1'), n('tau2')
    return conj(idem(r), nonzero(r), _forall([t1, t2], Implies(
        conj(idem(t1), idem(t2), orthogonal(t1, t2), Plus(r, t1, t2)),
        Or(zero(t1), zero(t2)))))


@lru_cache(maxsize=None)
def idem_star_i(r: str, p: int, i: int) -> Formula:
    '''Projection onto a summand isomorphic to Z(p^i).'''
    if i < 1:
        raise EndotheoryError('the layer index starts at 1')
    return conj(idem_star(r), Not(annihilated(r, p, i - 1)), annihilated(r, p, i))


@lru_cache(maxsize=None)
def complement_in(r: str, whole: str) -> Formula:
    '''r is a summand of the idempotent `whole`: whole = r + r' with r' an orthogonal idempotent.'''
    r2 = _Names(r, whole)('rho_c')
    return ExistsObj(r2, conj(idem(r2), orthogonal(r, r2), Plus(whole, r, r2)))


@lru_cache(maxsize=None)
def sum_is_one(terms: tuple[str, ...]) -> Formula:
    if len(terms) == 1:
        return one(terms[0])
    n = _Names(*terms)
    partial = [terms[0]] + [n('s') for _ in range(len(terms) - 1)]
    atoms = [Plus(partial[i + 1], partial[i], terms[i + 1]) for i in range(len(terms) - 1)]
    return _exists(partial[1:], conj(*atoms, one(partial[-1])))


@lru_cache(maxsize=None)
def comp(rhos: tuple[str, ...], p: int) -> Formula:
    '''rho_1 + ... + rho_k = 1 splits A into homogeneous layers, layer i of exponent p^i.'''
    k = len(rhos)
    r = _Names(*rhos)('rho')
    parts = [sum_is_one(rhos)]
    for i in range(k):
        for j in range(i + 1, k):
            parts.append(orthogonal(rhos[i], rhos[j]))
    parts += [idem(x) for x in rhos]
    parts += [annihilated(x, p, i + 1) for i, x in enumerate(rhos)]
    parts += [Not(annihilated(x, p, i)) for i, x in enumerate(rhos)]
    for i, x in enumerate(rhos):
        parts.append(ForallObj(r, Implies(And(idem_star(r), complement_in(r, x)), idem_star_i(r, p, i + 1))))
    return conj(*parts)


@lru_cache(maxsize=None)
def idem_bar_star(r: str, layer: str, p: int, i: int) -> Formula:
    '''r projects onto a cyclic summand of order p^i inside the layer `layer`.'''
    return And(idem_star_i(r, p, i), complement_in(r, layer))


@lru_cache(maxsize=None)
def idem_bar(r: str, layer: str) -> Formula:
    return And(idem(r), complement_in(r, layer))


@lru_cache(maxsize=None)
def card_l(rhos: tuple[str, ...], l: int, p: int) -> Formula:
    '''Layer l is at least as large as every other layer.'''
    k = len(rhos)
    if not 1 <= l <= k:
        raise EndotheoryError(f'l must lie in 1..{k}')
    n = _Names(*rhos)
    a, r = n('a'), n('rho')
    parts = [ExistsObj(a, ForallObj(r, Implies(idem_bar_star(r, rhos[i - 1], p, i),
                                               Not(product_zero((r, a, rhos[l - 1]))))))
             for i in range(1, k + 1) if i != l]
    return conj(*parts) if parts else tautology()


@lru_cache(maxsize=None)
def card_le(r1: str, r2: str) -> Formula:
    '''|r1 A| <= |r2 A|: some a is nonzero, after r2, on every indecomposable summand of r1 A.'''
    n = _Names(r1, r2)
    a, r = n('a'), n('rho')
    return ExistsObj(a, ForallObj(r, Implies(And(idem_star(r), complement_in(r, r1)),
                                             Not(product_zero((r, a, r2))))))


@lru_cache(maxsize=None)
def card_lt(r1: str, r2: str) -> Formula:
    return And(card_le(r1, r2), Not(card_le(r2, r1)))


@lru_cache(maxsize=None)
def card_eq(r1: str, r2: str) -> Formula:
    return And(card_le(r1, r2), card_le(r2, r1))


@lru_cache(maxsize=None)
def fin(r: str) -> Formula:
    n = _Names(r)
    r1, r2 = n('rho1'), n('rho2')
    return _forall([r1, r2], Implies(
        conj(idem(r1), idem(r2), idem(r), Plus(r1, r, r2), orthogonal(r, r2)),
        card_lt(r, r1)))


@lru_cache(maxsize=None)
def inf(r: str) -> Formula:
    return And(idem(r), Not(fin(r)))


@lru_cache(maxsize=None)
def count(r: str) -> Formula:
    r1 = _Names(r)('rho1')
    return And(inf(r), ForallObj(r1, Implies(inf(r1), card_le(r, r1))))


@lru_cache(maxsize=None)
def idem_omega(r: str, layer: str) -> Formula:
    return And(idem_bar(r, layer), count(r))


@lru_cache(maxsize=None)
def phi_n(p: int, k: int) -> Formula:
    '''For all x, p^k x = 0.'''
    return ForallObj('x', annihilated('x', p, k))


@lru_cache(maxsize=None)
def no_order_p_endos(r: str, p: int) -> Formula:
    '''Every r x r is zero or has order above p.'''
    n = _Names(r)
    x, v = n('x'), n('v')
    return ForallObj(x, ExistsObj(v, And(product_is(v, (r, x, r)), Or(zero(v), Not(annihilated(v, p, 1))))))


@lru_cache(maxsize=None)
def psi_body(r1: str, r2: str, p: int, k: int, literal: bool = False) -> Formula:
    '''A = r1 A + r2 A with r2 A bounded by p^k and r1 A free of cyclic summands.

    With literal=True the inner primitivity test is kept exactly as
    displayed, where tau1 = r, tau2 = 0 always witnesses a splitting.
    '''
    n = _Names(r1, r2)
    x, v, r, rp, t1, t2 = (n(s) for s in ('x', 'v', 'rho', "rho'", 'tau1', 'tau2'))
    indecomposable = _forall([t1, t2], Implies(
        conj(idem(t1), idem(t2), orthogonal(t1, t2)) if literal else
        conj(idem(t1), idem(t2), orthogonal(t1, t2), nonzero(t1), nonzero(t2)),
        Not(Plus(r, t1, t2))))
    if not literal:
        indecomposable = And(nonzero(r), indecomposable)
    return conj(
        orthogonal(r1, r2), idem(r1), idem(r2), sum_is_one((r1, r2)),
        ForallObj(x, ExistsObj(v, And(product_is(v, (r2, x, r2)), annihilated(v, p, k)))),
        _forall([r, rp], Implies(
            conj(idem(r), idem(rp), orthogonal(r, rp), Plus(r1, r, rp), indecomposable),
            no_order_p_endos(r, p))))


@lru_cache(maxsize=None)
def psi_n(p: int, k: int, literal: bool = False) -> Formula:
    '''A is a divisible group plus a group of exponent at most p^k.'''
    return _exists(['rho1', 'rho2'], psi_body('rho1', 'rho2', p, k, literal))


# ---------------------------------------------------------------- centre-based order formulas

@lru_cache(maxsize=None)
def central_guarded(c: str, body: Formula, universal: bool = True) -> Formula:
    if universal:
        return ForallObj(c, Implies(central(c), body))
    return ExistsObj(c, And(central(c), body))


@lru_cache(maxsize=None)
def ord_leq_center(r1: str, r2: str) -> Formula:
    '''o(r1) <= o(r2): every central c killing r2 kills r1.'''
    c = _Names(r1, r2)('c')
    return central_guarded(c, Implies(product_zero((c, r2)), product_zero((c, r1))))


@lru_cache(maxsize=None)
def ord_lt_center(r1: str, r2: str) -> Formula:
    return And(ord_leq_center(r1, r2), Not(ord_leq_center(r2, r1)))


@lru_cache(maxsize=None)
def ord_eq_center(r1: str, r2: str) -> Formula:
    return And(ord_leq_center(r1, r2), ord_leq_center(r2, r1))


@lru_cache(maxsize=None)
def inside(small: str, big: str) -> Formula:
    '''small A lies in big A, written small*big = small.'''
    return Times(small, small, big)


@lru_cache(maxsize=None)
def ord_rho(f: str, r: str) -> Formula:
    '''f projects onto a sum of cyclic summands of order o(r).'''
    fp = _Names(f, r)("f'")
    return And(idem(f), ForallObj(fp, Implies(And(idem_star(fp), inside(fp, f)), ord_eq_center(fp, r))))


@lru_cache(maxsize=None)
def rest_rho(f: str, r: str) -> Formula:
    '''f projects onto a sum of cyclic summands of order at most o(r).'''
    fp = _Names(f, r)("f'")
    return And(idem(f), ForallObj(fp, Implies(And(idem_star(fp), inside(fp, f)), ord_leq_center(fp, r))))


@lru_cache(maxsize=None)
def max_ord_rho(f: str, r: str) -> Formula:
    fp = _Names(f, r)("f'")
    return conj(idem(f), ord_rho(f, r), ForallObj(fp, Implies(
        And(ord_rho(fp, r), inside(f, fp)), inside(fp, f))))


@lru_cache(maxsize=None)
def max_rest_rho(f: str, r: str) -> Formula:
    fp = _Names(f, r)("f'")
    return conj(idem(f), rest_rho(f, r), ForallObj(fp, Implies(
        And(rest_rho(fp, r), inside(f, fp)), inside(fp, f))))


@lru_cache(maxsize=None)
def injective_on(fp: str, phi: str) -> Formula:
    '''Every central c not killing f' leaves c f' phi nonzero.'''
    c = _Names(fp, phi)('c')
    return central_guarded(c, Implies(Not(product_zero((c, fp))), Not(product_zero((c, fp, phi)))))


@lru_cache(maxsize=None)
def summands_match(f: str, phi: str) -> Formula:
    '''An indecomposable summand lies in f A exactly when phi does not kill it.'''
    fp = _Names(f, phi)("f'")
    return ForallObj(fp, Implies(idem_star(fp), Iff(inside(fp, f), injective_on(fp, phi))))


@lru_cache(maxsize=None)
def base_bar(phi: str) -> Formula:
    n = _Names(phi)
    r, f = n('rho'), n('f')
    return ForallObj(r, Implies(idem_star(r), ExistsObj(f, And(max_rest_rho(f, r), summands_match(f, phi)))))


@lru_cache(maxsize=None)
def base_endo(phi: str) -> Formula:
    '''phi A is a basic subgroup.'''
    n = _Names(phi)
    fs, r, f = n('fs'), n('rho'), n('f')
    return And(base_bar(phi), ForallObj(fs, Implies(
        And(idem_star(fs), Not(product_zero((fs, phi)))),
        _exists([r, f], conj(idem_star(r), max_rest_rho(f, r), summands_match(f, phi), inside(fs, f))))))


# ---------------------------------------------------------------- case-splitting sentences

@lru_cache(maxsize=None)
def psi_split(rd: str, rg: str, p: int) -> Formula:
    '''A = rd A + rg A with rd A divisible and rg A reduced.'''
    n = _Names(rd, rg)
    rp = n("rho'")
    return conj(
        idem(rd), idem(rg), orthogonal(rd, rg), sum_is_one((rd, rg)),
        no_order_p_endos(rd, p),
        ForallObj(rp, Implies(And(idem_star(rp), inside(rp, rg)), Not(no_order_p_endos(rp, p)))))


@lru_cache(maxsize=None)
def maps_through(u: str, left: tuple[str, ...], right: tuple[str, ...]) -> Formula:
    return And(product_is(u, left), product_is(u, right))


@lru_cache(maxsize=None)
def psi2(p: int) -> Formula:
    '''There is an embedding of the reduced part into the divisible part.'''
    rd, rg, h, r, u = 'rho_D', 'rho_G', 'h', 'rho', 'u'
    return _exists([rd, rg, h], conj(
        psi_split(rd, rg, p),
        ExistsObj(u, maps_through(u, (rd, h, rg), (h, rg))),
        ForallObj(r, Implies(And(idem_star(r), inside(r, rg)), injective_on(r, h)))))


@lru_cache(maxsize=None)
def psi2_tilde(p: int, k: int) -> Formula:
    '''Variant of psi2 used when the reduced part is bounded by p^k.'''
    rd, rg, h = 'rho_D', 'rho_G', 'h'
    r1, r2, s1, s2, u, v = 'rho1', 'rho2', "rho1'", "rho2'", 'u', 'v'
    return _exists([rd, rg], And(psi_body(rd, rg, p, k), ExistsObj(h, And(
        ExistsObj(u, maps_through(u, (rd, h, rg), (h, rg))),
        _forall([r1, r2], Implies(
            conj(idem_star(r1), idem_star(r2), inside(r1, rg), inside(r2, rg), orthogonal(r1, r2)),
            _exists([s1, s2], conj(
                idem_star(s1), idem_star(s2), inside(s1, rd), inside(s2, rd), orthogonal(s1, s2),
                ExistsObj(u, And(maps_through(u, (s1, h, r1), (h, r1)), nonzero(u))),
                ExistsObj(v, And(maps_through(v, (s2, h, r2), (h, r2)), nonzero(v)))))))))))


@lru_cache(maxsize=None)
def embeds_into(f: str, phi: str, pred: Formula | None) -> Formula:
    '''Some h sends every indecomposable summand f1 meeting phi injectively onto a summand of f.'''
    n = _Names(f, phi)
    h, f1, f2, u = n('h'), n('f1'), n('f2'), n('u')
    guard = conj(idem_star(f1), *([pred] if pred is not None else []), injective_on(f1, phi))
    return ExistsObj(h, ForallObj(f1, Implies(guard, ExistsObj(f2, conj(
        idem_star(f2), inside(f2, f),
        ExistsObj(u, conj(product_is(u, (f1, h)), product_is(u, (h, f2)), product_is(u, (f1, h, f2)),
                          nonzero(u))))))))


@lru_cache(maxsize=None)
def psi3(p: int) -> Formula:
    '''The final rank of a basic subgroup equals its rank.'''
    rd, rg, phi, r, rp, f, fp = 'rho_D', 'rho_G', 'phi_B', 'rho', "rho'", 'f', "f'"
    return _exists([rd, rg], conj(
        psi_split(rd, rg, p),
        Not(psi2(p)),
        ExistsObj(phi, And(base_endo(phi), ForallObj(r, Implies(idem_star(r), ExistsObj(rp, conj(
            idem_star(rp), ord_lt_center(r, rp),
            ExistsObj(f, conj(
                ord_rho(f, rp),
                ForallObj(fp, Implies(And(idem_star(fp), inside(fp, f)), injective_on(fp, phi))),
                embeds_into(f, phi, None)))))))))))


@lru_cache(maxsize=None)
def psi4(p: int) -> Formula:
    '''Every homogeneous summand of a basic subgroup is finite or as large as the basic subgroup.'''
    phi, r, f = 'phi_B', 'rho', 'f'
    return ExistsObj(phi, And(base_endo(phi), ForallObj(r, Implies(idem_star(r), ForallObj(f, Implies(
        ord_rho(f, r), Or(fin(f), embeds_into(f, phi, None))))))))


@lru_cache(maxsize=None)
def psi5(p: int) -> Formula:
    '''Above some order, homogeneous summands of a basic subgroup are finite or as large as the top part.'''
    phi, rb, r, f = 'phi_B', 'rho_bar', 'rho', 'f'
    f1 = _Names(f, phi)('f1')
    return _exists([phi, rb], conj(base_endo(phi), idem_star(rb), ForallObj(r, Implies(
        And(idem_star(r), ord_lt_center(rb, r)),
        ForallObj(f, Implies(ord_rho(f, r), Or(fin(f), embeds_into(f, phi, ord_lt_center(r, f1)))))))))


# ================================================================ registry

class GroupFormulaKind(str, Enum):
    GR = 'Gr'
    CYCL = 'Cycl'
    DCYCL = 'DCycl'
    GR_A = 'Gr_a'
    ORD_LEQ = 'OrdLeq'
    ORD_LT = 'OrdLt'
    ORD_EQ = 'OrdEq'
    GORD_A = 'GOrd_a'
    MULT_A = 'Mult_a'
    SERV = 'Serv'
    FD = 'FD'
    BASE = 'Base'
    D = 'D'
    EXEPT = 'Exept'
    FUNC = 'Func'
    ENDOM = 'Endom'
    HOM_B = 'Hom_B'
    ENDOM_B = 'Endom_B'
    PHI_EXT = 'PhiExt'


class RingFormulaKind(str, Enum):
    IDEM = 'Idem'
    IDEM_STAR = 'IdemStar'
    IDEM_STAR_I = 'IdemStar_i'
    COMP = 'Comp'
    CARD_L = 'Card_l'
    CARD_LE = 'CardLe'
    CARD_LT = 'CardLt'
    CARD_EQ = 'CardEq'
    FIN = 'Fin'
    INF = 'Inf'
    COUNT = 'Count'
    IDEM_OMEGA = 'IdemOmega'
    PHI_N = 'Phi_n'
    PSI_N = 'Psi_n'
    ORD_LEQ_CENTER = 'OrdLeqCenter'
    ORD_RHO = 'Ord_rho'
    MAX_ORD_RHO = 'MaxOrd_rho'
    REST_RHO = 'Rest_rho'
    MAX_REST_RHO = 'MaxRest_rho'
    BASE_BAR = 'BaseBar'
    BASE_ENDO = 'BaseEndo'
    PSI2 = 'Psi2'
    PSI2_TILDE = 'Psi2Tilde'
    PSI3 = 'Psi3'
    PSI4 = 'Psi4'
    PSI5 = 'Psi5'


# kind -> (builder, free variable parameters with defaults, numeric parameters with defaults)
_GROUP = {
    GroupFormulaKind.GR: (lambda v, n: gr(v['P']), {'P': 'P'}, {}),
    GroupFormulaKind.CYCL: (lambda v, n: cycl(v['P']), {'P': 'P'}, {}),
    GroupFormulaKind.DCYCL: (lambda v, n: dcycl(v['P'], n['p']), {'P': 'P'}, {'p': None}),
    GroupFormulaKind.GR_A: (lambda v, n: gr_generated(v['P'], v['a']), {'P': 'P', 'a': 'a'}, {}),
    GroupFormulaKind.ORD_LEQ: (lambda v, n: ord_leq(v['a1'], v['a2']), {'a1': 'a1', 'a2': 'a2'}, {}),
    GroupFormulaKind.ORD_LT: (lambda v, n: ord_lt(v['a1'], v['a2']), {'a1': 'a1', 'a2': 'a2'}, {}),
    GroupFormulaKind.ORD_EQ: (lambda v, n: ord_eq(v['a1'], v['a2']), {'a1': 'a1', 'a2': 'a2'}, {}),
    GroupFormulaKind.GORD_A: (lambda v, n: gord(v['P'], v['a']), {'P': 'P', 'a': 'a'}, {}),
    GroupFormulaKind.MULT_A: (lambda v, n: mult(v['x'], v['b'], v['a'], n['p']),
                              {'x': 'x', 'b': 'b', 'a': 'a'}, {'p': None}),
    GroupFormulaKind.SERV: (lambda v, n: serv(v['P'], n['p']), {'P': 'P'}, {'p': None}),
    GroupFormulaKind.FD: (lambda v, n: fd(v['P'], n['p']), {'P': 'P'}, {'p': None}),
    GroupFormulaKind.BASE: (lambda v, n: base(v['P'], n['p']), {'P': 'P'}, {'p': None}),
    GroupFormulaKind.D: (lambda v, n: divisible(v['P'], n['p']), {'P': 'P'}, {'p': None}),
    GroupFormulaKind.EXEPT: (lambda v, n: exept(n['p']), {}, {'p': None}),
    GroupFormulaKind.FUNC: (lambda v, n: func(v['P']), {'P': 'P'}, {}),
    GroupFormulaKind.ENDOM: (lambda v, n: endom(v['P']), {'P': 'P'}, {}),
    GroupFormulaKind.HOM_B: (lambda v, n: hom_from(v['P'], v['B']), {'P': 'P', 'B': 'B'}, {}),
    GroupFormulaKind.ENDOM_B: (lambda v, n: endom_from_base(v['Phi'], v['B'], n['p']),
                               {'Phi': 'Phi', 'B': 'B'}, {'p': None}),
    GroupFormulaKind.PHI_EXT: (lambda v, n: phi_value(v['b'], v['a'], v['Phi'], v['B'], n['p']),
                               {'b': 'b', 'a': 'a', 'Phi': 'Phi', 'B': 'B'}, {'p': None}),
}

_RING = {
    RingFormulaKind.IDEM: (lambda v, n: idem(v['rho']), {'rho': 'rho'}, {}),
    RingFormulaKind.IDEM_STAR: (lambda v, n: idem_star(v['rho']), {'rho': 'rho'}, {}),
    RingFormulaKind.IDEM_STAR_I: (lambda v, n: idem_star_i(v['rho'], n['p'], n['i']), {'rho': 'rho'},
                                  {'p': None, 'i': None}),
    RingFormulaKind.COMP: (lambda v, n: comp(tuple(v[f'rho{j}'] for j in range(1, n['k'] + 1)), n['p']),
                           None, {'p': None, 'k': None}),
    RingFormulaKind.CARD_L: (lambda v, n: card_l(tuple(v[f'rho{j}'] for j in range(1, n['k'] + 1)), n['l'], n['p']),
                             None, {'p': None, 'k': None, 'l': None}),
    RingFormulaKind.CARD_LE: (lambda v, n: card_le(v['rho1'], v['rho2']), {'rho1': 'rho1', 'rho2': 'rho2'}, {}),
    RingFormulaKind.CARD_LT: (lambda v, n: card_lt(v['rho1'], v['rho2']), {'rho1': 'rho1', 'rho2': 'rho2'}, {}),
    RingFormulaKind.CARD_EQ: (lambda v, n: card_eq(v['rho1'], v['rho2']), {'rho1': 'rho1', 'rho2': 'rho2'}, {}),
    RingFormulaKind.FIN: (lambda v, n: fin(v['rho']), {'rho': 'rho'}, {}),
    RingFormulaKind.INF: (lambda v, n: inf(v['rho']), {'rho': 'rho'}, {}),
    RingFormulaKind.COUNT: (lambda v, n: count(v['rho']), {'rho': 'rho'}, {}),
    RingFormulaKind.IDEM_OMEGA: (lambda v, n: idem_omega(v['rho'], v['layer']), {'rho': 'rho', 'layer': 'rho_l'}, {}),
    RingFormulaKind.PHI_N: (lambda v, n: phi_n(n['p'], _log_p(n['n'], n['p'])), {}, {'p': None, 'n': None}),
    RingFormulaKind.PSI_N: (lambda v, n: psi_n(n['p'], _log_p(n['n'], n['p']), n['literal']), {},
                            {'p': None, 'n': None, 'literal': False}),
    RingFormulaKind.ORD_LEQ_CENTER: (lambda v, n: ord_leq_center(v['rho1'], v['rho2']),
                                     {'rho1': 'rho1', 'rho2': 'rho2'}, {}),
    RingFormulaKind.ORD_RHO: (lambda v, n: ord_rho(v['f'], v['rho']), {'f': 'f', 'rho': 'rho'}, {}),
    RingFormulaKind.MAX_ORD_RHO: (lambda v, n: max_ord_rho(v['f'], v['rho']), {'f': 'f', 'rho': 'rho'}, {}),
    RingFormulaKind.REST_RHO: (lambda v, n: rest_rho(v['f'], v['rho']), {'f': 'f', 'rho': 'rho'}, {}),
    RingFormulaKind.MAX_REST_RHO: (lambda v, n: max_rest_rho(v['f'], v['rho']), {'f': 'f', 'rho': 'rho'}, {}),
    RingFormulaKind.BASE_BAR: (lambda v, n: base_bar(v['phi']), {'phi': 'phi'}, {}),
    RingFormulaKind.BASE_ENDO: (lambda v, n: base_endo(v['phi']), {'phi': 'phi'}, {}),
    RingFormulaKind.PSI2: (lambda v, n: psi2(n['p']), {}, {'p': None}),
    RingFormulaKind.PSI2_TILDE: (lambda v, n: psi2_tilde(n['p'], _log_p(n['n'], n['p'])), {}, {'p': None, 'n': None}),
    RingFormulaKind.PSI3: (lambda v, n: psi3(n['p']), {}, {'p': None}),
    RingFormulaKind.PSI4: (lambda v, n: psi4(n['p']), {}, {'p': None}),
    RingFormulaKind.PSI5: (lambda v, n: psi5(n['p']), {}, {'p': None}),
}


def _log_p(n: int, p: int) -> int:
    k, m = 0, 1
    while m < n:
        m *= p
        k += 1
    if m != n:
        raise EndotheoryError(f'{n} is not a power of {p}')
    return k


def _build(table, kind_enum, kind, params):
    try:
        kind = kind_enum(kind)
    except ValueError:
        raise EndotheoryError(f'unknown formula kind {kind!r}') from None
    builder, var_defaults, num_defaults = table[kind]
    params = dict(params)
    nums = {}
    for key, default in num_defaults.items():
        if key in params:
            nums[key] = params.pop(key)
        elif default is None:
            raise EndotheoryError(f'{kind.value} needs the parameter {key}')
        else:
            nums[key] = default
    if 'p' in nums:
        _check_p(nums['p'])
    if var_defaults is None:
        # variable-length parameter list rho1..rhok
        var_defaults = {f'rho{j}': f'rho{j}' for j in range(1, nums['k'] + 1)}
        if nums['k'] < 1:
            raise EndotheoryError('k must be positive')
    unknown = set(params) - set(var_defaults)
    if unknown:
        raise EndotheoryError(f'{kind.value} takes no parameter {sorted(unknown)[0]}')
    names = {key: params.get(key, default) for key, default in var_defaults.items()}
    return builder(names, nums)


def build_group_formula(kind, params: dict | None = None, **kw) -> Formula:
    '''Formula of the given kind; params rename free variables or set p.'''
    return _build(_GROUP, GroupFormulaKind, kind, {**(params or {}), **kw})


def build_ring_formula(kind, params: dict | None = None, **kw) -> Formula:
    return _build(_RING, RingFormulaKind, kind, {**(params or {}), **kw})


def declared_parameters(kind) -> tuple[list[str], list[str]]:
    '''(free-variable parameters, numeric parameters) of a catalog kind.'''
    for table, enum in ((_GROUP, GroupFormulaKind), (_RING, RingFormulaKind)):
        try:
            k = enum(kind)
        except ValueError:
            continue
        _, var_defaults, num_defaults = table[k]
        names = list(var_defaults) if var_defaults is not None else ['rho1', '...', 'rhok']
        return names, list(num_defaults)
    raise EndotheoryError(f'unknown formula kind {kind!r}')
