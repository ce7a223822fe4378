'''Finite abelian p-groups written as direct sums of cyclic groups Z/p^e.

Elements are residue tuples.  Besides the arithmetic this module holds the
algebraic oracle predicates (purity, divisibility, subgroup enumeration)
that the definable formulas are checked against.
'''
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import ResourceCapError, ShapeMismatchError

DEFAULT_SUBGROUP_CAP = 64

INFINITE_HEIGHT = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class PGroupShape:
    p: int
    exps: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f'p must be prime, got {self.p!r}')
        exps = tuple(int(e) for e in self.exps)
        if any(e < 1 for e in exps):
            raise ValueError(f'exponents must be positive, got {exps}')
        object.__setattr__(self, 'exps', tuple(sorted(exps)))

    @classmethod
    def parse(cls, text: str) -> 'PGroupShape':
        '''Read the `p=<prime>;exps=<comma list>` format.'''
        compact = re.sub(r'\s+', '', text).lower()
        fields = {}
        for part in filter(None, compact.split(';')):
            key, sep, value = part.partition('=')
            if not sep or key not in ('p', 'exps') or key in fields:
                raise ValueError(f'bad group spec {text!r}')
            fields[key] = value
        if 'p' not in fields:
            raise ValueError(f'group spec {text!r} lacks p=')
        try:
            p = int(fields['p'])
            raw = fields.get('exps', '')
            exps = tuple(int(e) for e in raw.split(',')) if raw else ()
        except ValueError:
            raise ValueError(f'bad group spec {text!r}') from None
        return cls(p, exps)

    def __str__(self):
        return f'p={self.p};exps={",".join(map(str, self.exps))}'

    @property
    def rank(self) -> int:
        return len(self.exps)

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p ** e for e in self.exps)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exps)

    @property
    def max_exp(self) -> int:
        return max(self.exps, default=0)

    @property
    def exponent(self) -> int:
        return self.p ** self.max_exp

    @property
    def zero(self) -> 'GroupElement':
        return GroupElement(self, (0,) * self.rank)

    def element(self, *coords: int) -> 'GroupElement':
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        if len(coords) != self.rank:
            raise ShapeMismatchError(f'{len(coords)} coordinates for a rank {self.rank} group')
        return GroupElement(self, tuple(c % m for c, m in zip(coords, self.moduli)))

    def coord_tuples(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(m) for m in self.moduli))

    def elements(self) -> Iterator['GroupElement']:
        for c in self.coord_tuples():
            yield GroupElement(self, c)


@dataclass(frozen=True, order=True)
class GroupElement:
    shape: PGroupShape
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.shape.rank:
            raise ShapeMismatchError('coordinate count does not match the shape')
        if any(not 0 <= c < m for c, m in zip(self.coords, self.shape.moduli)):
            raise ShapeMismatchError(f'coordinates {self.coords} not reduced')

    def _check(self, other: 'GroupElement'):
        if other.shape != self.shape:
            raise ShapeMismatchError(f'{self.shape} vs {other.shape}')

    def __add__(self, other: 'GroupElement') -> 'GroupElement':
        return add(self, other)

    def __neg__(self) -> 'GroupElement':
        return neg(self)

    def __sub__(self, other: 'GroupElement') -> 'GroupElement':
        return add(self, neg(other))

    def __rmul__(self, n: int) -> 'GroupElement':
        return scale(n, self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return '(' + ','.join(map(str, self.coords)) + ')'


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    a._check(b)
    return GroupElement(a.shape, tuple((x + y) % m for x, y, m in zip(a.coords, b.coords, a.shape.moduli)))


def neg(a: GroupElement) -> GroupElement:
    return GroupElement(a.shape, tuple(-x % m for x, m in zip(a.coords, a.shape.moduli)))


def scale(n: int, a: GroupElement) -> GroupElement:
    return GroupElement(a.shape, tuple(n * x % m for x, m in zip(a.coords, a.shape.moduli)))


def order(a: GroupElement) -> int:
    '''Least p^m annihilating a, found by repeated multiplication.'''
    n = 1
    x = a
    while not x.is_zero():
        x = scale(a.shape.p, x)
        n *= a.shape.p
    return n


def _solvable(shape: PGroupShape, n: int, a: GroupElement) -> bool:
    return any(scale(n, x) == a for x in shape.elements())


def height(a: GroupElement) -> int | float:
    '''Largest m with p^m x = a solvable; infinite for the zero element.'''
    if a.is_zero():
        return INFINITE_HEIGHT
    shape = a.shape
    m = 0
    # a nonzero element is never divisible by the exponent, so this terminates
    while _solvable(shape, shape.p ** (m + 1), a):
        m += 1
    return m


@dataclass(frozen=True)
class SubgroupSet:
    shape: PGroupShape
    members: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, 'members', tuple(sorted(set(self.members))))

    @cached_property
    def _coords(self) -> frozenset:
        return frozenset(m.coords for m in self.members)

    def __contains__(self, a: GroupElement) -> bool:
        return a.coords in self._coords

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def sort_key(self):
        return tuple(m.coords for m in self.members)

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def is_whole(self) -> bool:
        return len(self.members) == self.shape.order

    def __str__(self):
        return '{' + ','.join(map(str, self.members)) + '}'


def _closure_coords(shape: PGroupShape, gens: Iterable[tuple[int, ...]],
                    start: frozenset | None = None) -> frozenset:
    moduli = shape.moduli
    members = set(start) if start else {(0,) * shape.rank}
    gens = [g for g in gens]
    frontier = list(members)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((u + v) % m for u, v, m in zip(x, g, moduli))
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(members)


def subgroup_closure(S: Iterable[GroupElement], shape: PGroupShape | None = None) -> SubgroupSet:
    '''Smallest subgroup containing S (in a finite group, closing under + suffices).'''
    S = list(S)
    if shape is None:
        if not S:
            raise ValueError('shape required for an empty generating set')
        shape = S[0].shape
    for s in S:
        if s.shape != shape:
            raise ShapeMismatchError('generators from different groups')
    members = _closure_coords(shape, [s.coords for s in S])
    return SubgroupSet(shape, tuple(GroupElement(shape, c) for c in members))


def enumerate_subgroups(shape: PGroupShape, cap: int = DEFAULT_SUBGROUP_CAP) -> list[SubgroupSet]:
    if shape.order > cap:
        raise ResourceCapError(f'group order {shape.order} exceeds subgroup enumeration cap {cap}')
    elements = list(shape.coord_tuples())
    trivial = frozenset({(0,) * shape.rank})
    seen = {trivial}
    queue = [trivial]
    while queue:
        nxt = []
        for H in queue:
            for g in elements:
                if g in H:
                    continue
                K = _closure_coords(shape, [g], start=H)
                if K not in seen:
                    seen.add(K)
                    nxt.append(K)
        queue = nxt
    subs = [SubgroupSet(shape, tuple(GroupElement(shape, c) for c in H)) for H in seen]
    subs.sort(key=SubgroupSet.sort_key)
    return subs


def whole_group(shape: PGroupShape) -> SubgroupSet:
    return SubgroupSet(shape, tuple(shape.elements()))


def multiple_set(n: int, H: Iterable[GroupElement]) -> frozenset:
    return frozenset(scale(n, h).coords for h in H)


def is_pure(H: SubgroupSet) -> bool:
    shape = H.shape
    A = list(shape.elements())
    for k in range(shape.max_exp + 1):
        n = shape.p ** k
        nH = multiple_set(n, H)
        nA = multiple_set(n, A)
        if nH != H._coords & nA:
            return False
    return True


def quotient_is_divisible(H: SubgroupSet) -> bool:
    '''A = pA + H, the divisibility test for A/H.'''
    shape = H.shape
    pA = multiple_set(shape.p, shape.elements())
    moduli = shape.moduli
    sums = {tuple((u + v) % m for u, v, m in zip(x, h, moduli)) for x in pA for h in H._coords}
    return len(sums) == shape.order


def is_divisible_subgroup(H: SubgroupSet) -> bool:
    return multiple_set(H.shape.p, H) == H._coords


def is_cyclic(H: SubgroupSet) -> bool:
    return any(order(h) == len(H) for h in H)


def parse_element(shape: PGroupShape, text: str) -> GroupElement:
    parts = [t for t in re.split(r'[\s,()]+', text) if t]
    return shape.element(*(int(t) for t in parts))
