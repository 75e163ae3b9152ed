"""Tests for Bloch sums, delta, adapted wedge sums and log dlog."""

import pytest

from infinireg.bloch import (
    BlochSum,
    FWedgeSum,
    InfBlochSum,
    WedgeKind,
    WedgeTerm,
    apply_hom_bloch,
    base_part_vanishes,
    delta,
    delta_inf,
    five_term_sum,
    logdlog,
    transport_wedge,
)
from infinireg.errors import FlatnessViolation, NotInfinitesimal
from infinireg.squarezero import AlgebraHom, RingSpec, SqZeroElement
from infinireg.symalg import abs_d, exactness_test


def _ring():
    return RingSpec(("x",), ("t1",))


def _elem(ring, u, v=()):
    return SqZeroElement.of(ring, u, v)


class TestBlochSum:
    def test_rejects_non_flat(self):
        ring = _ring()
        with pytest.raises(FlatnessViolation):
            BlochSum.of(ring, [(_elem(ring, 1, [1]), 1)])

    def test_combines_like_terms(self):
        ring = _ring()
        x = ring.gens[0]
        a = _elem(ring, x, [1])
        s = BlochSum.of(ring, [(a, 2), (a, -2)])
        assert s.is_zero

    def test_arithmetic(self):
        ring = _ring()
        x = ring.gens[0]
        s = BlochSum.of(ring, [(_elem(ring, x), 1)])
        assert (s * 3 - s - s - s).is_zero

    def test_inf_bloch_drops_zero_alpha(self):
        ring = _ring()
        x = ring.gens[0]
        assert InfBlochSum.of(ring, [(_elem(ring, x), 5)]).is_zero

    def test_inf_bloch_to_bloch(self):
        ring = _ring()
        x = ring.gens[0]
        s = InfBlochSum.of(ring, [(_elem(ring, x, [1]), 1)])
        expected = BlochSum.of(ring, [(_elem(ring, x, [1]), 1), (_elem(ring, x), -1)])
        assert s.to_bloch() == expected

    def test_inf_bloch_base_must_be_flat(self):
        ring = _ring()
        with pytest.raises(FlatnessViolation):
            InfBlochSum.of(ring, [(_elem(ring, 1, [1]), 1)])

    def test_apply_hom(self):
        ring = _ring()
        x = ring.gens[0]
        f = AlgebraHom.of(ring, ring, [x ** 2], [[0]], [[1]])
        s = BlochSum.of(ring, [(_elem(ring, x + 1, [1]), 1)])
        expected = BlochSum.of(ring, [(_elem(ring, x ** 2 + 1, [1]), 1)])
        assert apply_hom_bloch(f, s) == expected


class TestFiveTerm:
    def test_five_terms(self):
        ring = _ring()
        x = ring.gens[0]
        s = five_term_sum(_elem(ring, x, [1]), _elem(ring, x + 2, [x]))
        assert len(s.terms) == 5

    def test_equal_arguments_rejected(self):
        ring = _ring()
        x = ring.gens[0]
        with pytest.raises(FlatnessViolation, match="y/x"):
            five_term_sum(_elem(ring, x, [1]), _elem(ring, x, [2]))

    def test_non_flat_argument_named(self):
        ring = _ring()
        x = ring.gens[0]
        with pytest.raises(FlatnessViolation) as info:
            five_term_sum(_elem(ring, 1, [1]), _elem(ring, x))
        assert info.value.argument == "x"


class TestWedgeTerms:
    def test_trivial_terms_dropped(self):
        ring = _ring()
        x = ring.gens[0]
        zero = SqZeroElement.infinitesimal(ring, [0])
        w = FWedgeSum.from_items(ring, [(WedgeTerm.g2(zero, x), 1),
                                        (WedgeTerm.g1(zero, SqZeroElement.infinitesimal(ring, [1])), 1)])
        assert w.is_zero

    def test_delta_inf_has_no_base(self):
        ring = _ring()
        x = ring.gens[0]
        w = delta_inf(InfBlochSum.of(ring, [(_elem(ring, x, [1]), 1)]))
        assert w.base_part().is_zero
        assert {t.kind for t in w.terms} == {WedgeKind.G1, WedgeKind.G2}

    def test_delta_base_part(self):
        ring = _ring()
        x = ring.gens[0]
        w = delta(BlochSum.of(ring, [(_elem(ring, x), 1)]))
        assert w == FWedgeSum.from_items(ring, [(WedgeTerm.base(ring, 1 - x, x), 1)])

    def test_delta_of_inf_bloch_matches(self):
        ring = _ring()
        x = ring.gens[0]
        s = InfBlochSum.of(ring, [(_elem(ring, x / (x + 1), [x]), 2)])
        assert delta(s.to_bloch()) == delta_inf(s)


class TestBaseReduction:
    def test_antisymmetric_base_vanishes(self):
        ring = _ring()
        x = ring.gens[0]
        w = FWedgeSum.from_items(ring, [(WedgeTerm.base(ring, x, x + 1), 1),
                                        (WedgeTerm.base(ring, x + 1, x), 1)])
        assert base_part_vanishes(w)

    def test_multiplicative_relations_used(self):
        ring = _ring()
        x = ring.gens[0]
        # x^2 ^ (x + 1) = 2 (x ^ (x + 1))
        w = FWedgeSum.from_items(ring, [(WedgeTerm.base(ring, x ** 2, x + 1), 1),
                                        (WedgeTerm.base(ring, x, x + 1), -2)])
        assert base_part_vanishes(w)

    def test_nonzero_base(self):
        ring = _ring()
        x = ring.gens[0]
        w = FWedgeSum.from_items(ring, [(WedgeTerm.base(ring, x, x + 1), 1)])
        assert not base_part_vanishes(w)
        with pytest.raises(NotInfinitesimal):
            logdlog(w)


class TestLogDlog:
    def test_g1(self):
        ring = _ring()
        x = ring.gens[0]
        alpha = SqZeroElement.infinitesimal(ring, [x])
        beta = SqZeroElement.infinitesimal(ring, [1])
        form = logdlog(FWedgeSum.from_items(ring, [(WedgeTerm.g1(alpha, beta), 1)]))
        # x t1 dt1 vanishes since t1^2 = 0
        assert form.is_zero

    def test_g2(self):
        ring = _ring()
        x = ring.gens[0]
        alpha = SqZeroElement.infinitesimal(ring, [1])
        form = logdlog(FWedgeSum.from_items(ring, [(WedgeTerm.g2(alpha, x), 1)]))
        assert form.xcomps[0] == SqZeroElement.of(ring, 0, [1 / x])
        assert not any(form.tcomps)

    def test_delta_inf_image_is_exact(self):
        ring = _ring()
        x = ring.gens[0]
        s = InfBlochSum.of(ring, [(_elem(ring, x, [1]), 1)])
        form = logdlog(delta_inf(s))
        primitive = exactness_test(form, cap=4)
        assert abs_d(primitive) == form


class TestTransportWedge:
    def test_identity_transport(self):
        ring = _ring()
        x = ring.gens[0]
        w = delta_inf(InfBlochSum.of(ring, [(_elem(ring, x, [x + 1]), 1)]))
        assert transport_wedge(w, AlgebraHom.identity(ring)) == w

