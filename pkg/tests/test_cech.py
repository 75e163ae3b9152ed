"""Tests for Čech assembly of gamma and the degree-one sections."""

import pytest

from infinireg.bloch import FWedgeSum, InfBlochSum, WedgeTerm, delta_inf
from infinireg.cech import (
    CechDatum,
    CoverSetup,
    DatumMode,
    assemble_gamma,
    boundary_to_boundary,
    rho1_sections,
    splitting_change_delta,
    verify_cocycle,
)
from infinireg.squarezero import RingSpec, Splitting, SqZeroElement


def _ring():
    return RingSpec(("x",), ("t1", "t2"))


def _cover(ring):
    x = ring.gens[0]
    return CoverSetup((
        Splitting.zero(ring),
        Splitting.of(ring, [[1, 0]]),
        Splitting.of(ring, [[x, x ** 2]]),
    ))


def _c(ring):
    x = ring.gens[0]
    return [
        InfBlochSum.of(ring, [(SqZeroElement.of(ring, x, [1, 0]), 1)]),
        InfBlochSum.of(ring, [(SqZeroElement.of(ring, x + 1, [0, x]), 2)]),
        InfBlochSum.of(ring, [(SqZeroElement.of(ring, x / (x - 2), [1, 1]), -1)]),
    ]


class TestCoverSetup:
    def test_needs_two_opens(self):
        ring = _ring()
        with pytest.raises(ValueError):
            CoverSetup((Splitting.zero(ring),))

    def test_pairs(self):
        cover = _cover(_ring())
        assert cover.r == 3
        assert len(cover.pairs()) == 6


class TestCechDatum:
    def test_consistent_entries(self):
        ring = _ring()
        c = _c(ring)
        data = CechDatum.consistent(c)
        assert data.mode is DatumMode.CONSISTENT
        assert data.a_ij(0, 2, ring) == c[2] - c[0]
        assert data.b_i(1) == delta_inf(c[1])

    def test_raw_antisymmetry(self):
        ring = _ring()
        c = _c(ring)
        data = CechDatum.raw({(0, 1): c[0]}, [FWedgeSum.zero(ring)] * 2)
        assert data.a_ij(1, 0, ring) == -c[0]
        assert data.a_ij(0, 1, ring) == c[0]


class TestGamma:
    def test_consistent_data_is_cocycle(self):
        ring = _ring()
        gamma = assemble_gamma(_cover(ring), CechDatum.consistent(_c(ring)))
        assert verify_cocycle(gamma)
        assert gamma.defects() == {}

    def test_size_mismatch(self):
        ring = _ring()
        with pytest.raises(ValueError):
            assemble_gamma(_cover(ring), CechDatum.consistent(_c(ring)[:2]))

    def test_boundary_to_boundary(self):
        ring = _ring()
        assert boundary_to_boundary(_cover(ring), _c(ring))

    def test_splitting_change_is_coboundary(self):
        ring = _ring()
        x = ring.gens[0]
        cover = _cover(ring)
        changed = CoverSetup((Splitting.of(ring, [[0, 1]]), cover.splittings[1],
                              Splitting.of(ring, [[1, x]])))
        change = splitting_change_delta(cover, changed, CechDatum.consistent(_c(ring)))
        assert change.is_coboundary

    def test_splitting_change_needs_consistent_data(self):
        ring = _ring()
        cover = _cover(ring)
        raw = CechDatum.raw({}, [FWedgeSum.zero(ring)] * 3)
        with pytest.raises(ValueError):
            splitting_change_delta(cover, cover, raw)


class TestRho1:
    def test_consistent_sections_glue(self):
        ring = _ring()
        report = rho1_sections(_cover(ring), CechDatum.consistent(_c(ring)), cap=6)
        assert report.ok
        assert len(report.sections) == 3
        assert set(report.primitives) == {(0, 1), (0, 2), (1, 2)}

    def test_raw_data_with_non_exact_difference(self):
        ring = _ring()
        x = ring.gens[0]
        alpha = SqZeroElement.infinitesimal(ring, [1, 0])
        b = [FWedgeSum.zero(ring),
             FWedgeSum.from_items(ring, [(WedgeTerm.g2(alpha, x), 1)])]
        cover = CoverSetup((Splitting.zero(ring), Splitting.zero(ring)))
        report = rho1_sections(cover, CechDatum.raw({}, b), cap=4)
        # t1 dx/x has no primitive
        assert not report.ok
        assert (0, 1) in report.failures
