'''Depth of points under a self-map, the additive extension of index maps,
and the classification of beautiful linear combinations.

On a finite set the transfinite depth collapses: the sets
D_0 = B, D_{k+1} = h(D_k) decrease until they reach the eventual image,
which is the union of the cycles of h.  A point has depth k when it lies in
D_k but not D_{k+1}, and infinite depth when it lies on a cycle.
'''
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .endoring import Endomorphism, apply, compose
from .errors import BudgetExceeded, EndotheoryError, NonCommutingError
from .pgroup import GroupElement, PGroupShape, is_prime

INFINITE = math.inf
DEFAULT_GROUP_BUDGET = 4096          # elements of the homogeneous group
DEFAULT_BEAUTY_BUDGET = 10 ** 7


@dataclass(frozen=True)
class FunctionGraph:
    '''A total map on a finite domain, stored as a dict.'''
    domain: tuple
    mapping: Mapping[Hashable, Hashable] = field(hash=False)

    def __post_init__(self):
        dom = tuple(self.domain)
        if len(set(dom)) != len(dom):
            raise EndotheoryError('domain has repeated points')
        points = set(dom)
        m = dict(self.mapping)
        missing = [x for x in dom if x not in m]
        if missing:
            raise EndotheoryError(f'map is undefined at {missing[0]!r}')
        outside = [x for x in dom if m[x] not in points]
        if outside:
            raise EndotheoryError(f'{outside[0]!r} is sent outside the domain')
        extra = set(m) - points
        if extra:
            raise EndotheoryError(f'map is defined outside the domain at {sorted(map(str, extra))[0]}')
        object.__setattr__(self, 'domain', dom)
        object.__setattr__(self, 'mapping', m)

    @classmethod
    def from_list(cls, images: Sequence[int]) -> 'FunctionGraph':
        '''Map on 1..n sending i to images[i-1].'''
        n = len(images)
        return cls(tuple(range(1, n + 1)), {i + 1: int(v) for i, v in enumerate(images)})

    @classmethod
    def parse(cls, text: str) -> 'FunctionGraph':
        '''Read `domain=1..n; map=h(1),...,h(n)`.'''
        compact = re.sub(r'\s+', '', text)
        fields = {}
        for part in filter(None, compact.split(';')):
            key, sep, value = part.partition('=')
            if not sep or key not in ('domain', 'map') or key in fields:
                raise EndotheoryError(f'bad function graph {text!r}')
            fields[key] = value
        m = re.fullmatch(r'1\.\.(\d+)', fields.get('domain', ''))
        if m is None or 'map' not in fields:
            raise EndotheoryError(f'bad function graph {text!r}')
        n = int(m.group(1))
        try:
            images = [int(v) for v in fields['map'].split(',')] if fields['map'] else []
        except ValueError:
            raise EndotheoryError(f'bad function graph {text!r}') from None
        if len(images) != n:
            raise EndotheoryError(f'map lists {len(images)} images for a domain of size {n}')
        return cls.from_list(images)

    @classmethod
    def of_endomorphism(cls, f: Endomorphism) -> 'FunctionGraph':
        els = list(f.shape.elements())
        return cls(tuple(els), {x: apply(f, x) for x in els})

    def __call__(self, x):
        return self.mapping[x]

    def __str__(self):
        if self.domain == tuple(range(1, len(self.domain) + 1)):
            return f'domain=1..{len(self.domain)}; map=' + ','.join(str(self.mapping[i]) for i in self.domain)
        return '{' + ', '.join(f'{x}->{self.mapping[x]}' for x in self.domain) + '}'

    def compose(self, other: 'FunctionGraph') -> 'FunctionGraph':
        '''self after other.'''
        if set(self.domain) != set(other.domain):
            raise EndotheoryError('maps live on different domains')
        return FunctionGraph(other.domain, {x: self.mapping[other.mapping[x]] for x in other.domain})

    def power(self, k: int) -> 'FunctionGraph':
        m = {x: x for x in self.domain}
        for _ in range(k):
            m = {x: self.mapping[m[x]] for x in self.domain}
        return FunctionGraph(self.domain, m)


def all_function_graphs(n: int) -> Iterable[FunctionGraph]:
    for images in itertools.product(range(1, n + 1), repeat=n):
        yield FunctionGraph.from_list(images)


# ---------------------------------------------------------------- depth

def depth_map(h: FunctionGraph) -> dict:
    '''Depth of every point; INFINITE on the eventual image.'''
    level = set(h.domain)
    depth = {}
    k = 0
    while True:
        nxt = {h.mapping[y] for y in level}
        if nxt == level:
            break
        for x in level - nxt:
            depth[x] = k
        level = nxt
        k += 1
    for x in level:
        depth[x] = INFINITE
    return depth


def depth(x, h: FunctionGraph) -> int | float:
    if x not in h.mapping:
        raise EndotheoryError(f'{x!r} is not in the domain')
    return depth_map(h)[x]


def on_cycle(x, h: FunctionGraph) -> bool:
    '''Independent check for infinite depth: some iterate returns to x.'''
    y = h.mapping[x]
    for _ in range(len(h.domain)):
        if y == x:
            return True
        y = h.mapping[y]
    return False


# ---------------------------------------------------------------- additive extension

def _homogeneous_shape(n: int, p: int, l: int) -> PGroupShape:
    if not is_prime(p):
        raise EndotheoryError(f'{p} is not prime')
    if n < 1 or l < 1:
        raise EndotheoryError('need at least one generator of positive exponent')
    return PGroupShape(p, (l,) * n)


def _index_positions(h: FunctionGraph) -> dict:
    return {x: i for i, x in enumerate(h.domain)}


def extend_tilde(h: FunctionGraph, p: int, l: int, budget: int = 1 << 20) -> Endomorphism:
    '''The endomorphism of the sum of |I| copies of Z(p^l) sending a_i to a_h(i).'''
    n = len(h.domain)
    if (p ** l) ** n > budget:
        raise BudgetExceeded(f'{p}^{l * n} elements exceed the budget {budget}')
    shape = _homogeneous_shape(n, p, l)
    pos = _index_positions(h)
    m = [[0] * n for _ in range(n)]
    for x in h.domain:
        m[pos[h.mapping[x]]][pos[x]] = 1
    return Endomorphism(shape, tuple(tuple(r) for r in m))


def _support(v: GroupElement) -> list[int]:
    return [i for i, c in enumerate(v.coords) if c]


@dataclass
class DepthCheckReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {'checked': self.checked, 'ok': self.ok, 'violations': [str(v) for v in self.violations]}


def is_reduced(coeffs: Sequence[int]) -> bool:
    '''Nonzero, pairwise distinct coefficients.'''
    return all(coeffs) and len(set(coeffs)) == len(coeffs)


def check_lemma31(h: FunctionGraph, p: int, l: int, budget: int = DEFAULT_GROUP_BUDGET,
                  report: DepthCheckReport | None = None) -> DepthCheckReport:
    '''Depth under the extension versus depth of the indices in the support.

    For every nonzero v: depth(v) >= the least index depth over its support,
    with equality when the coefficients of v form a reduced combination.
    The zero element is its own preimage and is skipped.
    '''
    n = len(h.domain)
    if (p ** l) ** n > budget:
        raise BudgetExceeded(f'{p}^{l * n} elements exceed the budget {budget}')
    report = report if report is not None else DepthCheckReport()
    f = extend_tilde(h, p, l, budget)
    ext_depth = depth_map(FunctionGraph.of_endomorphism(f))
    idx_depth = depth_map(h)
    names = h.domain
    for v, d in ext_depth.items():
        supp = _support(v)
        if not supp:
            continue
        report.checked += 1
        bound = min(idx_depth[names[i]] for i in supp)
        coeffs = [v.coords[i] for i in supp]
        if d < bound:
            report.violations.append(('lower bound', str(h), p, l, str(v), d, bound))
        elif is_reduced(coeffs) and d != bound:
            report.violations.append(('equality', str(h), p, l, str(v), d, bound))
    return report


def check_lemma32(h1, h2) -> DepthCheckReport:
    '''Commuting maps: depth(x, h1) <= depth(h2(x), h1) everywhere.'''
    g1 = h1 if isinstance(h1, FunctionGraph) else FunctionGraph.of_endomorphism(h1)
    g2 = h2 if isinstance(h2, FunctionGraph) else FunctionGraph.of_endomorphism(h2)
    if set(g1.domain) != set(g2.domain):
        raise EndotheoryError('maps live on different domains')
    if any(g1(g2(x)) != g2(g1(x)) for x in g1.domain):
        raise NonCommutingError('the two maps do not commute')
    d = depth_map(g1)
    report = DepthCheckReport()
    for x in g1.domain:
        report.checked += 1
        if d[x] > d[g2(x)]:
            report.violations.append((str(x), d[x], d[g2(x)]))
    return report


def extension_respects_composition(h1: FunctionGraph, h2: FunctionGraph, p: int, l: int) -> bool:
    '''The extension of h1 after h2 is the product of the extensions (h2 applied first).'''
    return extend_tilde(h1.compose(h2), p, l) == compose(extend_tilde(h2, p, l), extend_tilde(h1, p, l))


# ---------------------------------------------------------------- beautiful combinations

def _check_coefficients(k: Sequence[int], p: int, l: int) -> tuple[int, ...]:
    if not is_prime(p) or l < 1:
        raise EndotheoryError('need a prime p and l >= 1')
    if not k:
        raise EndotheoryError('a combination needs at least one coefficient')
    m = p ** l
    if any(not 0 <= c < m for c in k):
        raise EndotheoryError(f'coefficients must lie in [0, {m})')
    return tuple(int(c) for c in k)


def is_beautiful(k: Sequence[int], p: int, l: int, budget: int = DEFAULT_BEAUTY_BUDGET) -> bool:
    '''Check both defining identities on every tuple over Z(p^l).

    tau(x, ..., x) = x, and substituting tau into each argument of tau
    gives tau of the diagonal variables.
    '''
    k = _check_coefficients(k, p, l)
    n, m = len(k), p ** l
    if m ** (n * n) > budget:
        raise BudgetExceeded(f'{m}^{n * n} substitution instances exceed the budget {budget}')
    coeff = np.array(k, dtype=np.int64)
    xs = np.arange(m, dtype=np.int64)
    if not np.array_equal((coeff.sum() * xs) % m, xs):
        return False
    # every n-by-n matrix of values X: tau applied to the rows, then to the results, against tau of the diagonal
    grids = np.array(list(itertools.product(range(m), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    inner = (grids @ coeff) % m
    outer = (inner @ coeff) % m
    diag = (np.einsum('tii->ti', grids) @ coeff) % m
    return bool(np.array_equal(outer, diag))


def enumerate_beautiful(n: int, p: int, l: int, budget: int = DEFAULT_BEAUTY_BUDGET) -> list[tuple[int, ...]]:
    if n < 1:
        raise EndotheoryError('n must be positive')
    m = p ** l
    return [k for k in itertools.product(range(m), repeat=n) if is_beautiful(k, p, l, budget)]


def idempotent_coefficients(k: Sequence[int], p: int, l: int) -> bool:
    '''The algebraic consequence: sum k_i = 1 and k_i k_j = delta_ij k_i modulo p^l.'''
    m = p ** l
    if sum(k) % m != 1 % m:
        return False
    return all((a * b) % m == (a % m if i == j else 0) for i, a in enumerate(k) for j, b in enumerate(k))
