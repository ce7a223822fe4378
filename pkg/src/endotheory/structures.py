'''Finite structures for model checking, relations over their carriers, and
the enumerators behind predicate-quantifier hints.

Carrier elements are addressed by integer index; GroupElement and
Endomorphism values only appear at the API boundary.
'''
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Iterator, Mapping

from .endoring import DEFAULT_RING_CAP, Endomorphism, RingTable, apply
from .errors import ResourceCapError, ShapeMismatchError, UnknownGuardError
from .formulas import Hint
from .pgroup import DEFAULT_SUBGROUP_CAP, GroupElement, PGroupShape, enumerate_subgroups

DEFAULT_SO_ENUM_CAP = 16


class Relation:
    '''A finite relation on carrier indices, stored canonically.'''

    __slots__ = ('arity', 'tuples', 'members', '_hash', '_index')

    def __init__(self, arity: int, tuples: Iterable[tuple[int, ...]]):
        ts = sorted(set(tuple(t) for t in tuples))
        if any(len(t) != arity for t in ts):
            raise ValueError(f'tuple of wrong length for a relation of arity {arity}')
        self.arity = arity
        self.tuples = tuple(ts)
        self.members = frozenset(t[0] for t in ts) if arity == 1 else frozenset(ts)
        self._hash = hash((arity, self.members))
        self._index: dict = {}

    @classmethod
    def unary(cls, values: Iterable[int]) -> 'Relation':
        return cls(1, ((v,) for v in values))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, Relation) and self._hash == other._hash
                and self.arity == other.arity and self.members == other.members)

    def __len__(self):
        return len(self.tuples)

    def __contains__(self, t) -> bool:
        if self.arity == 1:
            return (t[0] if isinstance(t, tuple) else t) in self.members
        return tuple(t) in self.members

    def lookup(self, pos: int, others: tuple) -> list[int]:
        '''Values at position pos among tuples matching `others` elsewhere.'''
        idx = self._index.get(pos)
        if idx is None:
            idx = {}
            for t in self.tuples:
                idx.setdefault(t[:pos] + t[pos + 1:], []).append(t[pos])
            self._index[pos] = idx
        return idx.get(others, ())

    def __repr__(self):
        return f'Relation({self.arity}, {list(self.tuples)})'


class Structure:
    kind: str
    n: int

    def label(self, i: int) -> str:
        return str(self.elements[i])

    def index_of(self, value) -> int:
        if isinstance(value, int):
            if not 0 <= value < self.n:
                raise ValueError(f'carrier index {value} out of range')
            return value
        try:
            return self._index[value]
        except KeyError:
            raise ShapeMismatchError(f'{value} is not in the carrier') from None


class GroupStructure(Structure):
    kind = 'group'

    def __init__(self, shape: PGroupShape):
        self.shape = shape
        self.elements = list(shape.elements())
        self.n = len(self.elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        coords = {e.coords: i for i, e in enumerate(self.elements)}
        moduli = shape.moduli
        self.add_table = [[coords[tuple((x + y) % m for x, y, m in zip(a.coords, b.coords, moduli))]
                           for b in self.elements] for a in self.elements]
        self.neg_list = [coords[tuple(-x % m for x, m in zip(a.coords, moduli))] for a in self.elements]
        self.sub_table = [[row[self.neg_list[j]] for j in range(self.n)] for row in self.add_table]
        self.zero_index = coords[shape.zero.coords]
        self.mul_table = None
        self._guard_cache: dict = {}

    def add(self, i, j):
        return self.add_table[i][j]

    def sub(self, i, j):
        return self.sub_table[i][j]

    def mul(self, i, j):
        raise ShapeMismatchError('groups have no product')

    def order_of(self, i: int) -> int:
        k, x = 1, i
        while x != self.zero_index:
            x = self._times(x, self.shape.p)
            k *= self.shape.p
        return k

    def _times(self, x: int, n: int) -> int:
        acc = self.zero_index
        for _ in range(n):
            acc = self.add_table[acc][x]
        return acc

    def closure(self, gens: Iterable[int]) -> frozenset:
        members = {self.zero_index}
        frontier = [self.zero_index]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                row = self.add_table[x]
                for g in gens:
                    y = row[g]
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(members)

    def __repr__(self):
        return f'GroupStructure({self.shape})'


class RingStructure(Structure):
    kind = 'ring'

    def __init__(self, table: RingTable):
        self.table = table
        self.shape = table.shape
        self.elements = table.elements
        self.n = len(table)
        self._index = table._index
        self.add_table = table.add_table
        self.mul_table = table.mul_table
        self.neg_list = table.neg_list
        self.sub_table = ([[row[j] for j in self.neg_list] for row in self.add_table]
                          if self.add_table is not None else None)
        self.zero_index = table.zero_index
        self.add = table.add
        self.sub = table.sub
        self.mul = table.mul
        self._guard_cache: dict = {}

    def __repr__(self):
        return f'RingStructure({self.shape})'


@lru_cache(maxsize=64)
def group_structure(shape: PGroupShape) -> GroupStructure:
    return GroupStructure(shape)


@lru_cache(maxsize=32)
def _ring_table(shape: PGroupShape, cap: int) -> RingTable:
    return RingTable(shape, cap)


@lru_cache(maxsize=32)
def ring_structure(shape: PGroupShape, cap: int = DEFAULT_RING_CAP) -> RingStructure:
    return RingStructure(_ring_table(shape, cap))


# ---------------------------------------------------------------- guards

GUARDS = {'endo': 2, 'subgroup': 1, 'homfrom': 2}
GUARD_DISPLAY = {'endo': 'EndoGraph', 'subgroup': 'Subgroup', 'homfrom': 'HomGraphFromSubset'}
_GUARD_ALIASES = {'endograph': 'endo', 'endo': 'endo', 'subgroup': 'subgroup',
                  'homgraphfromsubset': 'homfrom', 'homfrom': 'homfrom'}


def guard_key(name: str) -> str:
    try:
        return _GUARD_ALIASES[name.lower()]
    except KeyError:
        raise UnknownGuardError(f'unknown guard {name!r}') from None


def _hom_graphs(G: GroupStructure, domain: frozenset) -> list[Relation]:
    '''Graphs of all additive maps from the subgroup `domain` into the group.'''
    ordered = sorted(domain, key=lambda x: (-G.order_of(x), x))
    gens: list[int] = []
    span = frozenset({G.zero_index})
    for x in ordered:
        if x not in span:
            gens.append(x)
            span = G.closure(gens)
    choices = [[y for y in range(G.n) if G.order_of(y) <= G.order_of(g)] for g in gens]
    add = G.add_table
    out = []
    for images in itertools.product(*choices):
        phi = {G.zero_index: G.zero_index}
        frontier = [G.zero_index]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                fx = phi[x]
                for g, y in zip(gens, images):
                    z, fz = add[x][g], add[fx][y]
                    old = phi.get(z)
                    if old is None:
                        phi[z] = fz
                        nxt.append(z)
                    elif old != fz:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok:
            out.append(Relation(2, phi.items()))
    out.sort(key=lambda r: r.tuples)
    return out


def guard_enumerator(structure: Structure, guard: str, arity: int, param: Relation | None = None,
                     subgroup_cap: int = DEFAULT_SUBGROUP_CAP, ring_cap: int = DEFAULT_RING_CAP) -> list[Relation]:
    '''The relations a guarded predicate quantifier ranges over.'''
    key = guard_key(guard)
    if structure.kind != 'group':
        raise UnknownGuardError(f'guard {guard} is registered for group structures only')
    if GUARDS[key] != arity:
        raise UnknownGuardError(f'guard {guard} has arity {GUARDS[key]}, not {arity}')
    cache_key = (key, param)
    hit = structure._guard_cache.get(cache_key)
    if hit is not None:
        return hit
    G: GroupStructure = structure
    if key == 'subgroup':
        out = [Relation.unary(G.index_of(e) for e in H) for H in enumerate_subgroups(G.shape, subgroup_cap)]
    elif key == 'endo':
        table = _ring_table(G.shape, ring_cap)
        out = [Relation(2, ((i, G.index_of(apply(f, a))) for i, a in enumerate(G.elements))) for f in table]
        out.sort(key=lambda r: r.tuples)
    else:
        if param is None or param.arity != 1:
            raise UnknownGuardError('homfrom needs a unary relation')
        out = _hom_graphs(G, G.closure(param.members))
    structure._guard_cache[cache_key] = out
    return out


def subset_count(universe: int, bound: int | None) -> int:
    if bound is None or bound >= universe:
        return 2 ** universe
    return sum(math.comb(universe, k) for k in range(bound + 1))


def all_tuples(n: int, arity: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(n), repeat=arity))


def iter_subsets(n: int, arity: int, bound: int | None = None) -> Iterator[Relation]:
    '''Subsets of carrier^arity, by size and then lexicographically.'''
    universe = all_tuples(n, arity)
    top = len(universe) if bound is None else min(bound, len(universe))
    for k in range(top + 1):
        for combo in itertools.combinations(universe, k):
            yield Relation(arity, combo)


def check_full_cap(n: int, arity: int, cap: int) -> None:
    if n ** arity > cap:
        raise ResourceCapError(
            f'full enumeration over {n}^{arity} tuples exceeds the cap {cap}; give a hint or a card bound')


def check_card_cap(n: int, arity: int, bound: int, cap: int) -> None:
    if subset_count(n ** arity, bound) > 2 ** cap:
        raise ResourceCapError(f'card<={bound} over {n}^{arity} tuples exceeds the cap 2^{cap} subsets')


# ---------------------------------------------------------------- bindings

@dataclass
class ModelBinding:
    '''A structure plus a valuation of free variables.

    Object variables map to carrier elements (or indices); predicate
    variables, keyed by name or (name, arity), map to iterables of tuples of
    carrier elements, or to a SubgroupSet for unary predicates.
    '''
    structure: Structure
    valuation: Mapping[Any, Any] = field(default_factory=dict)

    def resolve(self) -> tuple[dict[str, int], dict[tuple[str, int], Relation]]:
        S = self.structure
        objs: dict[str, int] = {}
        preds: dict[tuple[str, int], Relation] = {}
        for k, v in self.valuation.items():
            if isinstance(k, tuple):
                preds[k] = to_relation(S, v, k[1])
            elif isinstance(v, (GroupElement, Endomorphism, int)):
                objs[k] = S.index_of(v)
            else:
                rel = to_relation(S, v, None)
                preds[(k, rel.arity)] = rel
        return objs, preds


def to_relation(S: Structure, value, arity: int | None) -> Relation:
    if isinstance(value, Relation):
        if arity is not None and value.arity != arity:
            raise ValueError(f'relation of arity {value.arity} where {arity} was declared')
        return value
    items = list(value)
    rows = []
    for t in items:
        if isinstance(t, (GroupElement, Endomorphism, int)):
            rows.append((S.index_of(t),))
        else:
            rows.append(tuple(S.index_of(x) for x in t))
    if arity is None:
        if not rows:
            raise ValueError('cannot infer the arity of an empty relation; key it by (name, arity)')
        arity = len(rows[0])
    return Relation(arity, rows)
