"""Tests for the square-zero extension, splittings and algebra homomorphisms."""

import pytest

from infinireg.errors import NonUnitError
from infinireg.squarezero import (
    AlgebraHom,
    RingSpec,
    Splitting,
    SqZeroElement,
    apply_hom,
    apply_splitting,
    compose_homs,
    is_flat,
    scaling_endo,
    split_coordinates,
    sq_inv,
    sq_mul,
    unsplit_coordinates,
)


def _ring():
    return RingSpec(("x",), ("t1", "t2"))


class TestRingSpec:
    def test_standard_names(self):
        ring = RingSpec.standard(2, 3)
        assert ring.xvars == ("x1", "x2")
        assert ring.tvars == ("t1", "t2", "t3")
        assert RingSpec.standard(1, 1).xvars == ("x",)

    def test_rejects_empty_ideal(self):
        with pytest.raises(ValueError):
            RingSpec(("x",), ())

    def test_rejects_duplicate_names(self):
        with pytest.raises(ValueError):
            RingSpec(("x",), ("x",))


class TestSqZeroElement:
    def test_product_kills_i_squared(self):
        ring = _ring()
        x = ring.gens[0]
        a = SqZeroElement.of(ring, x, [1, 0])
        b = SqZeroElement.of(ring, x + 1, [0, x])
        prod = sq_mul(a, b)
        assert prod.u == x * (x + 1)
        assert prod.v == (x + 1, x * x)

    def test_inverse(self):
        ring = _ring()
        x = ring.gens[0]
        a = SqZeroElement.of(ring, x, [1, x])
        assert sq_mul(a, sq_inv(a)) == SqZeroElement.of(ring, 1)

    def test_inverse_of_infinitesimal(self):
        ring = _ring()
        with pytest.raises(NonUnitError):
            sq_inv(SqZeroElement.infinitesimal(ring, [1]))

    def test_flatness(self):
        ring = _ring()
        x = ring.gens[0]
        assert is_flat(SqZeroElement.of(ring, x, [1]))
        assert not is_flat(SqZeroElement.of(ring, 1, [x]))
        assert not is_flat(SqZeroElement.infinitesimal(ring, [x]))

    def test_scaling(self):
        ring = _ring()
        x = ring.gens[0]
        a = SqZeroElement.of(ring, x, [1, x])
        assert scaling_endo(3, a) == SqZeroElement.of(ring, x, [3, 3 * x])

    def test_str_omits_zero_base(self):
        ring = _ring()
        assert str(SqZeroElement.infinitesimal(ring, [0, 2])) == "(2)*t2"
        assert str(SqZeroElement.of(ring, 0)) == "(0)"


class TestSplitting:
    def test_derive_is_a_derivation(self):
        ring = _ring()
        x = ring.gens[0]
        D = Splitting.of(ring, [[1, x]])
        assert D.derive(x ** 2) == (2 * x, 2 * x ** 2)

    def test_apply_splitting(self):
        ring = _ring()
        x = ring.gens[0]
        D = Splitting.of(ring, [[1]])
        assert apply_splitting(D, x ** 3) == SqZeroElement.of(ring, x ** 3, [3 * x ** 2])

    def test_zero(self):
        ring = _ring()
        assert Splitting.zero(ring).is_zero
        assert not Splitting.of(ring, [[0, 1]]).is_zero


class TestAlgebraHom:
    def test_identity(self):
        ring = _ring()
        x = ring.gens[0]
        a = SqZeroElement.of(ring, x / (x + 1), [x, 1])
        assert apply_hom(AlgebraHom.identity(ring), a) == a

    def test_apply(self):
        ring = _ring()
        x = ring.gens[0]
        f = AlgebraHom.of(ring, ring, [x ** 2], [[1, 0]], [[0, 1], [1, 0]])
        image = apply_hom(f, SqZeroElement.of(ring, x, [x, 0]))
        # f(x) = x^2 + t1, f(x t1) = (x^2 + t1) t2 = x^2 t2
        assert image == SqZeroElement.of(ring, x ** 2, [1, x ** 2])

    def test_compose(self):
        ring = _ring()
        x = ring.gens[0]
        f = AlgebraHom.of(ring, ring, [x + 1], [[0, 1]], [[1, 0], [0, 1]])
        g = AlgebraHom.of(ring, ring, [2 * x], [[1, 0]], [[0, 1], [1, 0]])
        a = SqZeroElement.of(ring, x ** 2, [x, 1])
        assert apply_hom(compose_homs(g, f), a) == apply_hom(g, apply_hom(f, a))

    def test_split_coordinates_invert(self):
        ring = _ring()
        x = ring.gens[0]
        D = Splitting.of(ring, [[x, 1]])
        a = SqZeroElement.of(ring, 1 / x, [1, x])
        there = apply_hom(split_coordinates(D), a)
        assert apply_hom(unsplit_coordinates(D), there) == a

    def test_split_coordinates_untwist_splitting(self):
        ring = _ring()
        x = ring.gens[0]
        D = Splitting.of(ring, [[x, 1]])
        r = x ** 2 + 1
        assert apply_hom(split_coordinates(D), apply_splitting(D, r)) == SqZeroElement.of(ring, r)
