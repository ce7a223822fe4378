import itertools

import numpy as np
import pytest

from endotheory.endoring import (
    Endomorphism, add, apply, center, compose, count_endos, enumerate_endos, image, is_idempotent,
    is_primitive_idempotent, kernel, parse_endomorphism, ring_size,
)
from endotheory.errors import ResourceCapError, ShapeMismatchError
from endotheory.golden import groups_up_to
from endotheory.pgroup import PGroupShape, order, whole_group
from endotheory.verify import primitive_by_image, scalars

Z2_Z4 = PGroupShape(2, (1, 2))
Z2_Z2 = PGroupShape(2, (1, 1))
Z4 = PGroupShape(2, (2,))
PROJ_FIRST = Endomorphism(Z2_Z4, ((1, 0), (0, 0)))


def _homomorphism_count(shape):
    """Generator images whose order divides the generator's order, counted without matrices."""
    els = list(shape.elements())
    return int(np.prod([sum(1 for a in els if order(a) <= m) for m in shape.moduli]))


def test_apply_examples():
    a = Z2_Z4.element(1, 1)
    assert apply(Endomorphism(Z2_Z4, ((1, 1), (2, 1))), a) == Z2_Z4.element(0, 3)
    assert apply(Endomorphism.identity(Z2_Z4), a) == a
    assert apply(Endomorphism.zero(Z2_Z4), a) == Z2_Z4.zero


def test_divisibility_constraint_enforced():
    with pytest.raises(ValueError):
        Endomorphism(Z2_Z4, ((1, 0), (1, 1)))
    with pytest.raises(ShapeMismatchError):
        Endomorphism(Z2_Z4, ((1,),))


def test_entries_are_reduced():
    assert Endomorphism(Z2_Z4, ((3, 0), (6, 5))).matrix == ((1, 0), (2, 1))


def test_compose_examples():
    f = Endomorphism(Z2_Z4, ((1, 1), (2, 3)))
    assert compose(f, Endomorphism.identity(Z2_Z4)) == f
    assert compose(Endomorphism.zero(Z2_Z4), f) == Endomorphism.zero(Z2_Z4)
    assert compose(PROJ_FIRST, PROJ_FIRST) == PROJ_FIRST


def test_compose_applies_left_factor_first():
    table = enumerate_endos(Z2_Z2)
    for f, g in itertools.product(table.elements, repeat=2):
        for a in Z2_Z2.elements():
            assert apply(compose(f, g), a) == apply(g, apply(f, a))


def test_ring_sizes():
    assert ring_size(Z2_Z4) == count_endos(Z2_Z4) == 32
    assert ring_size(Z2_Z2) == 16
    assert ring_size(Z4) == 4


@pytest.mark.parametrize('shape', groups_up_to(32, primes=(2, 3)), ids=str)
def test_ring_size_matches_homomorphism_count(shape):
    assert ring_size(shape) == count_endos(shape) == _homomorphism_count(shape)


def test_enumeration_cap():
    with pytest.raises(ResourceCapError):
        enumerate_endos(PGroupShape(2, (1, 1, 1)), cap=100)


def test_primitive_examples():
    table = enumerate_endos(Z2_Z4)
    assert is_primitive_idempotent(PROJ_FIRST, table)
    assert not is_primitive_idempotent(Endomorphism.identity(Z2_Z4), table)
    assert not is_primitive_idempotent(Endomorphism.zero(Z2_Z4), table)


@pytest.mark.parametrize('shape', groups_up_to(16), ids=str)
def test_primitive_iff_nonzero_cyclic_image(shape):
    table = enumerate_endos(shape)
    for e in table.idempotents():
        assert is_primitive_idempotent(e, table) == primitive_by_image(e)


def test_center_examples():
    c = center(enumerate_endos(Z2_Z4))
    assert set(c) == {Endomorphism.scalar(Z2_Z4, n) for n in range(4)}
    assert set(center(enumerate_endos(Z2_Z2))) == {Endomorphism.zero(Z2_Z2), Endomorphism.identity(Z2_Z2)}
    assert len(center(enumerate_endos(Z4))) == 4


@pytest.mark.parametrize('shape', [s for s in groups_up_to(64, primes=(2, 3)) if ring_size(s) <= 4096], ids=str)
def test_center_is_scalars(shape):
    c = center(enumerate_endos(shape))
    assert len(c) == shape.exponent
    assert set(c) == scalars(shape)


def test_image_kernel_examples():
    one, zero = Endomorphism.identity(Z2_Z4), Endomorphism.zero(Z2_Z4)
    assert image(one) == whole_group(Z2_Z4) and kernel(one).is_trivial()
    assert image(zero).is_trivial() and kernel(zero) == whole_group(Z2_Z4)
    assert image(PROJ_FIRST).order == 2 and kernel(PROJ_FIRST).order == 4


@pytest.mark.parametrize('shape', [s for s in groups_up_to(16) if ring_size(s) <= 64], ids=str)
def test_ring_axioms_exhaustively(shape):
    table = enumerate_endos(shape)
    els = table.elements
    n = len(els)
    # the index tables agree with matrix arithmetic on every pair
    for i, j in itertools.product(range(n), repeat=2):
        assert els[table.mul(i, j)] == compose(els[i], els[j])
        assert els[table.add(i, j)] == add(els[i], els[j])
    one = table.index(Endomorphism.identity(shape))
    zero = table.index(Endomorphism.zero(shape))
    mul, plus = table.mul, table.add
    for f, g in itertools.product(range(n), repeat=2):
        assert plus(f, g) == plus(g, f)
        assert mul(f, one) == f == mul(one, f)
        assert plus(f, zero) == f
        for h in range(n):
            assert mul(mul(f, g), h) == mul(f, mul(g, h))
            assert mul(f, plus(g, h)) == plus(mul(f, g), mul(f, h))
            assert mul(plus(f, g), h) == plus(mul(f, h), mul(g, h))


def test_table_products_agree_with_compose():
    rng = np.random.default_rng(7)
    shape = PGroupShape(2, (1, 1, 2))
    table = enumerate_endos(shape)
    for i, j in rng.integers(0, len(table), size=(300, 2)):
        f, g = table.elements[i], table.elements[j]
        assert table.elements[table.mul(int(i), int(j))] == compose(f, g)
        assert table.elements[table.add(int(i), int(j))] == add(f, g)


def test_idempotents_listed():
    table = enumerate_endos(Z2_Z4)
    assert set(table.idempotents()) == {e for e in table.elements if is_idempotent(e)}


def test_parse_endomorphism():
    assert parse_endomorphism(Z2_Z4, '[[1,1],[2,1]]') == Endomorphism(Z2_Z4, ((1, 1), (2, 1)))
    assert str(Endomorphism(Z2_Z4, ((1, 1), (2, 1)))) == '[[1,1],[2,1]]'
