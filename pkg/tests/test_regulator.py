"""Tests for li2 in both constructions, the pushforward and the master identity."""

import pytest
from sympy import QQ

from infinireg.bloch import BlochSum, InfBlochSum, five_term_sum
from infinireg.regulator import (
    d1_pushforward,
    li2_first,
    li2_lift_perturbation_check,
    li2_second,
    log_circ_dlog,
    master_identity,
)
from infinireg.squarezero import AlgebraHom, RingSpec, Splitting, SqZeroElement
from infinireg.symalg import Sym3Class, TruncSymElement


def _ring(m=1):
    return RingSpec(("x",), tuple(f"t{i + 1}" for i in range(m)))


def _t_cubed(ring, coeff):
    return Sym3Class.cube(ring, [ring.field.one]) * coeff


class TestLi2First:
    def test_constant_generator(self):
        ring = _ring()
        s = InfBlochSum.of(ring, [(SqZeroElement.of(ring, 2, [3]), 1)])
        assert li2_first(s, Splitting.zero(ring)) == _t_cubed(ring, QQ(-27, 8))

    def test_splitting_shifts_the_lift(self):
        ring = _ring()
        x = ring.gens[0]
        s = BlochSum.of(ring, [(SqZeroElement.of(ring, x), 1)])
        D = Splitting.of(ring, [[1]])
        expected = _t_cubed(ring, QQ(1, 2) / (x ** 2 * (x - 1) ** 2))
        assert li2_first(s, D) == expected

    def test_tau_adapted_generator_vanishes(self):
        ring = _ring()
        x = ring.gens[0]
        D = Splitting.of(ring, [[x]])
        a = SqZeroElement.of(ring, x ** 2 + 1, D.derive(x ** 2 + 1))
        assert li2_first(BlochSum.of(ring, [(a, 1)]), D).is_zero

    def test_five_term_relation(self):
        ring = _ring()
        x = ring.gens[0]
        s = five_term_sum(SqZeroElement.of(ring, x, [1]), SqZeroElement.of(ring, x + 2, [x]))
        assert li2_first(s, Splitting.zero(ring)).is_zero
        assert li2_first(s, Splitting.of(ring, [[1]])).is_zero

    def test_scaling_is_cubic(self):
        ring = _ring(2)
        x = ring.gens[0]
        s = InfBlochSum.of(ring, [(SqZeroElement.of(ring, x, [1, x]), 1),
                                  (SqZeroElement.of(ring, x + 3, [2, 0]), QQ(-1, 2))])
        D = Splitting.zero(ring)
        assert li2_first(s.scaled(3), D) == li2_first(s, D) * 27


class TestLi2Second:
    def test_agrees_untwisted(self):
        ring = _ring()
        x = ring.gens[0]
        s = InfBlochSum.of(ring, [(SqZeroElement.of(ring, x, [1]), 1)])
        D = Splitting.zero(ring)
        assert li2_second(s, D) == li2_first(s, D)

    def test_agrees_twisted(self):
        ring = _ring(2)
        x = ring.gens[0]
        s = InfBlochSum.of(ring, [(SqZeroElement.of(ring, x / (x + 1), [1, x]), 2)])
        D = Splitting.of(ring, [[x, 1]])
        assert li2_second(s, D) == li2_first(s, D)

    def test_leading_form(self):
        ring = _ring()
        x = ring.gens[0]
        omega = log_circ_dlog(TruncSymElement.lift(SqZeroElement.of(ring, x, [1])))
        t = TruncSymElement.gen(ring, 0)
        assert omega.total_degree_part(3).comps[0] == t * t * (QQ(1, 2) / ((x - 1) ** 2 * x ** 2))


class TestLiftPerturbation:
    def test_perturbation_invisible(self):
        ring = _ring(2)
        x = ring.gens[0]
        t1, t2 = TruncSymElement.gen(ring, 0), TruncSymElement.gen(ring, 1)
        j = t1 * t2 * x + t2 * t2 * t2
        term = SqZeroElement.of(ring, x, [1, x])
        assert li2_lift_perturbation_check(term, j)
        assert li2_lift_perturbation_check(term, j, Splitting.of(ring, [[1, 0]]))

    def test_rejects_degree_one(self):
        ring = _ring()
        with pytest.raises(ValueError):
            li2_lift_perturbation_check(SqZeroElement.of(ring, 2, [1]), TruncSymElement.gen(ring, 0))


class TestPushforward:
    def test_linear_change_of_t(self):
        ring = _ring()
        x = ring.gens[0]
        f = AlgebraHom.of(ring, ring, [x ** 2], [[1]], [[2]])
        c = _t_cubed(ring, 1 / x)
        assert d1_pushforward(f, c) == _t_cubed(ring, 8 / x ** 2)


class TestMasterIdentity:
    def test_is_zero(self):
        assert master_identity().is_zero
