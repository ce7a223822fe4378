'''The endomorphism ring End(A) as constrained integer matrices.

Column j of a matrix is the image of the j-th cyclic generator, so entry
m[i][j] lives in Z/p^{e_i} and must be divisible by p^{max(e_i - e_j, 0)}.

Products follow the left-to-right convention: compose(f, g) applies f
first and then g.  With this reading the translation of x1 = x2*x3 into
"there is t with P_x2(y, t) and P_x3(t, z)" is truth-preserving as written.
'''
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ResourceCapError, ShapeMismatchError
from .pgroup import GroupElement, PGroupShape, SubgroupSet, subgroup_closure

DEFAULT_RING_CAP = 2 ** 16
# rings up to this size get dense add/mul lookup tables
DENSE_TABLE_LIMIT = 1024
# above DENSE_TABLE_LIMIT, products go column by column while |End| * |A| stays below this
COLUMN_VIEW_LIMIT = 1 << 22
PAIR_CACHE_LIMIT = 1 << 20


def entry_step(shape: PGroupShape, i: int, j: int) -> int:
    return shape.p ** max(shape.exps[i] - shape.exps[j], 0)


def entry_count(shape: PGroupShape, i: int, j: int) -> int:
    return shape.p ** min(shape.exps[i], shape.exps[j])


def ring_size(shape: PGroupShape) -> int:
    '''Closed-form |End(A)|.'''
    r = shape.rank
    return math.prod(entry_count(shape, i, j) for i in range(r) for j in range(r))


@dataclass(frozen=True)
class Endomorphism:
    shape: PGroupShape
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        shape = self.shape
        r = shape.rank
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(rows) != r or any(len(row) != r for row in rows):
            raise ShapeMismatchError(f'matrix is not {r}x{r}')
        reduced = tuple(tuple(x % shape.moduli[i] for x in row) for i, row in enumerate(rows))
        for i in range(r):
            for j in range(r):
                if reduced[i][j] % entry_step(shape, i, j):
                    raise ValueError(f'entry ({i},{j})={reduced[i][j]} breaks the divisibility constraint')
        object.__setattr__(self, 'matrix', reduced)

    @classmethod
    def identity(cls, shape: PGroupShape) -> 'Endomorphism':
        r = shape.rank
        return cls(shape, tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))

    @classmethod
    def zero(cls, shape: PGroupShape) -> 'Endomorphism':
        r = shape.rank
        return cls(shape, ((0,) * r,) * r)

    @classmethod
    def scalar(cls, shape: PGroupShape, n: int) -> 'Endomorphism':
        r = shape.rank
        return cls(shape, tuple(tuple(n if i == j else 0 for j in range(r)) for i in range(r)))

    def __call__(self, a: GroupElement) -> GroupElement:
        return apply(self, a)

    def __add__(self, other: 'Endomorphism') -> 'Endomorphism':
        return add(self, other)

    def __sub__(self, other: 'Endomorphism') -> 'Endomorphism':
        return add(self, neg(other))

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.matrix)

    def __str__(self):
        return '[' + ','.join('[' + ','.join(map(str, row)) + ']' for row in self.matrix) + ']'


def _check(f: Endomorphism, g) -> None:
    if f.shape != g.shape:
        raise ShapeMismatchError(f'{f.shape} vs {g.shape}')


def apply(f: Endomorphism, a: GroupElement) -> GroupElement:
    _check(f, a)
    moduli = f.shape.moduli
    return GroupElement(f.shape, tuple(
        sum(m * x for m, x in zip(row, a.coords)) % moduli[i] for i, row in enumerate(f.matrix)))


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    '''The ring product f*g: apply f, then g.'''
    _check(f, g)
    r = f.shape.rank
    F, G = f.matrix, g.matrix
    return Endomorphism(f.shape, tuple(
        tuple(sum(G[i][k] * F[k][j] for k in range(r)) for j in range(r)) for i in range(r)))


def add(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    _check(f, g)
    return Endomorphism(f.shape, tuple(tuple(x + y for x, y in zip(rf, rg)) for rf, rg in zip(f.matrix, g.matrix)))


def neg(f: Endomorphism) -> Endomorphism:
    return Endomorphism(f.shape, tuple(tuple(-x for x in row) for row in f.matrix))


def image(f: Endomorphism) -> SubgroupSet:
    shape = f.shape
    return SubgroupSet(shape, tuple({apply(f, a) for a in shape.elements()}))


def kernel(f: Endomorphism) -> SubgroupSet:
    shape = f.shape
    return SubgroupSet(shape, tuple(a for a in shape.elements() if apply(f, a).is_zero()))


def is_idempotent(e: Endomorphism) -> bool:
    return compose(e, e) == e


def _entry_choices(shape: PGroupShape) -> list[range]:
    r = shape.rank
    return [range(0, shape.moduli[i], entry_step(shape, i, j)) for i in range(r) for j in range(r)]


def iter_endo_matrices(shape: PGroupShape):
    '''Flat row-major entry tuples of every endomorphism, in index order.'''
    return itertools.product(*_entry_choices(shape))


def count_endos(shape: PGroupShape) -> int:
    '''Count End(A) by walking the enumeration without materialising it.'''
    n = 0
    for n, _ in enumerate(iter_endo_matrices(shape), 1):
        pass
    return n


class RingTable:
    '''Exhaustive list of End(A) with index arithmetic.

    Index i is the mixed-radix number whose digits are m[i][j] / step in
    row-major order, which matches the enumeration order.
    '''

    def __init__(self, shape: PGroupShape, cap: int = DEFAULT_RING_CAP):
        size = ring_size(shape)
        if size > cap:
            raise ResourceCapError(f'|End({shape})| = {size} exceeds ring cap {cap}')
        self.shape = shape
        r = shape.rank
        self._steps = np.array([entry_step(shape, i, j) for i in range(r) for j in range(r)], dtype=np.int64)
        self._counts = np.array([entry_count(shape, i, j) for i in range(r) for j in range(r)], dtype=np.int64)
        radix = np.ones(r * r, dtype=np.int64)
        for k in range(r * r - 2, -1, -1):
            radix[k] = radix[k + 1] * self._counts[k + 1]
        self._radix = radix
        self._row_mod = np.array(shape.moduli, dtype=np.int64).reshape(r, 1) if r else np.zeros((0, 1), np.int64)
        flat = np.array(list(iter_endo_matrices(shape)), dtype=np.int64).reshape(size, r * r)
        self.flat = flat
        self.mats = flat.reshape(size, r, r)
        self.elements = [Endomorphism(shape, tuple(tuple(int(x) for x in m[i * r:(i + 1) * r]) for i in range(r)))
                         for m in flat.tolist()]
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.zero_index = 0
        self.identity_index = self._index[Endomorphism.identity(shape)]
        self._add_cache: dict = {}
        self._mul_cache: dict = {}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index(self, f: Endomorphism) -> int:
        return self._index[f]

    def encode(self, mats: np.ndarray) -> np.ndarray:
        '''Indices of a batch of reduced matrices of shape (..., r, r).'''
        r = self.shape.rank
        flat = mats.reshape(-1, r * r)
        return ((flat // self._steps) * self._radix).sum(axis=1)

    def reduce(self, mats: np.ndarray) -> np.ndarray:
        return mats % self._row_mod

    def _digits(self):
        return self.flat // self._steps

    @cached_property
    def add_table(self) -> list[list[int]] | None:
        if len(self) > DENSE_TABLE_LIMIT:
            return None
        d = self._digits()
        out = []
        for i in range(len(self)):
            s = (d[i] + d) % self._counts
            out.append((s * self._radix).sum(axis=1).tolist())
        return out

    @cached_property
    def neg_list(self) -> list[int]:
        d = self._digits()
        return ((-d % self._counts) * self._radix).sum(axis=1).tolist()

    @cached_property
    def mul_table(self) -> list[list[int]] | None:
        if len(self) > DENSE_TABLE_LIMIT:
            return None
        out = []
        for i in range(len(self)):
            # row i: i*j = apply i then j, i.e. matrix M_j @ M_i
            prod = self.reduce(self.mats @ self.mats[i])
            out.append(self.encode(prod).tolist())
        return out

    @cached_property
    def _columns(self):
        """Column-wise view used when dense tables are too big.

        Each matrix is stored as the group indices of its columns.  A
        product or sum is then assembled column by column from the action
        of one operand on group elements and the index contribution of
        each resulting column.
        """
        sh, r = self.shape, self.shape.rank
        mods = np.array(sh.moduli, dtype=np.int64)
        gradix = np.ones(r, dtype=np.int64)
        for k in range(r - 2, -1, -1):
            gradix[k] = gradix[k + 1] * mods[k + 1]
        coords = np.array(list(sh.coord_tuples()), dtype=np.int64).reshape(-1, r)   # (|A|, r)
        gidx = coords @ gradix
        order = np.empty(len(coords), dtype=np.int64)
        order[gidx] = np.arange(len(coords))
        coords = coords[order]
        cols = (np.transpose(self.mats, (0, 2, 1)) @ gradix)                           # (N, r)
        act = (self.mats @ coords.T) % mods.reshape(1, r, 1)                          # (N, r, |A|)
        act = np.einsum('nrg,r->ng', act, gradix)
        # contribution of group element g placed in column k to the ring index
        steps = self._steps.reshape(r, r)
        radix = self._radix.reshape(r, r)
        contrib = [((coords // steps[:, k]) * radix[:, k]).sum(axis=1).tolist() for k in range(r)]
        gsum = ((coords[:, None, :] + coords[None, :, :]) % mods) @ gradix
        return cols.tolist(), act.tolist(), contrib, gsum.tolist()

    def _use_columns(self) -> bool:
        return len(self) * self.shape.order <= COLUMN_VIEW_LIMIT

    def add(self, i: int, j: int) -> int:
        t = self.add_table
        if t is not None:
            return t[i][j]
        key = (i, j)
        v = self._add_cache.get(key)
        if v is None:
            if self._use_columns():
                cols, _, contrib, gsum = self._columns
                ci, cj = cols[i], cols[j]
                v = sum(c[gsum[a][b]] for c, a, b in zip(contrib, ci, cj))
            else:
                d = (self.flat[i] // self._steps + self.flat[j] // self._steps) % self._counts
                v = int((d * self._radix).sum())
            if len(self._add_cache) > PAIR_CACHE_LIMIT:
                self._add_cache.clear()
            self._add_cache[key] = v
        return v

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg_list[j])

    def mul(self, i: int, j: int) -> int:
        t = self.mul_table
        if t is not None:
            return t[i][j]
        key = (i, j)
        v = self._mul_cache.get(key)
        if v is None:
            if self._use_columns():
                # i*j applies i then j: column k of the product is M_j applied to column k of M_i
                cols, act, contrib, _ = self._columns
                aj = act[j]
                v = sum(c[aj[g]] for c, g in zip(contrib, cols[i]))
            else:
                v = int(self.encode(self.reduce(self.mats[j] @ self.mats[i]))[0])
            if len(self._mul_cache) > PAIR_CACHE_LIMIT:
                self._mul_cache.clear()
            self._mul_cache[key] = v
        return v

    @cached_property
    def idempotent_indices(self) -> list[int]:
        prod = self.reduce(np.einsum('nij,njk->nik', self.mats, self.mats))
        same = (prod == self.mats).all(axis=(1, 2))
        return [int(i) for i in np.flatnonzero(same)]

    def idempotents(self) -> list[Endomorphism]:
        return [self.elements[i] for i in self.idempotent_indices]


def enumerate_endos(shape: PGroupShape, cap: int = DEFAULT_RING_CAP) -> RingTable:
    return RingTable(shape, cap)


def is_primitive_idempotent(e: Endomorphism, table: RingTable) -> bool:
    '''Exhaustive search for a splitting into two nonzero orthogonal idempotents.'''
    if e.shape != table.shape:
        raise ShapeMismatchError('endomorphism and table disagree on the group')
    if e.is_zero() or not is_idempotent(e):
        return False
    E = np.array(e.matrix, dtype=np.int64)
    T1 = table.mats[table.idempotent_indices]
    T2 = table.reduce(E - T1)
    nonzero = T1.any(axis=(1, 2)) & T2.any(axis=(1, 2))
    idem2 = (table.reduce(T2 @ T2) == T2).all(axis=(1, 2))
    orth = ~table.reduce(T2 @ T1).any(axis=(1, 2)) & ~table.reduce(T1 @ T2).any(axis=(1, 2))
    return not bool((nonzero & idem2 & orth).any())


def center(table: RingTable) -> list[Endomorphism]:
    '''Brute-force commutant of the whole ring.'''
    mats = table.mats
    alive = np.ones(len(table), dtype=bool)
    for f in range(len(table)):
        F = mats[f]
        left = table.reduce(F @ mats)    # c then f
        right = table.reduce(mats @ F)   # f then c
        alive &= (left == right).all(axis=(1, 2))
    return [table.elements[i] for i in np.flatnonzero(alive)]


def parse_endomorphism(shape: PGroupShape, text: str) -> Endomorphism:
    rows = json.loads(text)
    return Endomorphism(shape, tuple(tuple(row) for row in rows))
