"""Tests for seeded sample generation."""

import pytest

from infinireg.errors import GeneratorExhausted
from infinireg.generators import Rejected, SampleGenerator
from infinireg.squarezero import RingSpec, SqZeroElement, is_flat
from infinireg.symalg import TruncSymElement


def _gen(index=0, seed=42, m=2, retry_cap=100):
    ring = RingSpec.standard(1, m)
    return SampleGenerator(ring, seed, index, retry_cap=retry_cap)


class TestDeterminism:
    def test_same_seed_and_index(self):
        a, b = _gen(3), _gen(3)
        assert str(a.draw(a.inf_bloch)) == str(b.draw(b.inf_bloch))
        assert str(a.splitting()) == str(b.splitting())

    def test_samples_have_independent_streams(self):
        gens = [_gen(i) for i in range(6)]
        draws = {str(g.draw(g.flat_element)) for g in gens}
        assert len(draws) > 1


class TestDraws:
    def test_flat_element_is_flat(self):
        gen = _gen(1)
        for _ in range(10):
            a = gen.draw(gen.flat_element)
            assert is_flat(SqZeroElement.of(gen.ring, a.u))
            assert any(a.v)

    def test_correction_degree(self):
        gen = _gen(2)
        for _ in range(5):
            j = gen.correction()
            assert j.truncate(1) == TruncSymElement.zero(gen.ring)

    def test_nonzero_splitting(self):
        gen = _gen(4)
        D = gen.draw(lambda: gen.splitting(zero_ok=False))
        assert not D.is_zero

    def test_rejections_are_counted(self):
        gen = _gen()
        calls = []

        def build():
            calls.append(1)
            if len(calls) < 3:
                raise Rejected("again")
            return "done"

        assert gen.draw(build) == "done"
        assert gen.rejections == 2

    def test_retry_cap(self):
        gen = _gen(retry_cap=3)

        def build():
            raise Rejected("never")

        with pytest.raises(GeneratorExhausted):
            gen.draw(build)
        assert gen.rejections == 3
