"""Seeded random inputs for the property suites, with rejection sampling."""

from __future__ import annotations

import logging
import random
from typing import Callable, TypeVar

from sympy import QQ

from .algebra import RatFunc, Rational
from .bloch import InfBlochSum
from .errors import (
    DenominatorVanishes,
    DivisionByZeroError,
    FlatnessViolation,
    GeneratorExhausted,
    NonUnitError,
)
from .squarezero import AlgebraHom, RingSpec, Splitting, SqZeroElement, is_flat
from .symalg import MAX_DEGREE, TruncSymElement

logger = logging.getLogger(__name__)

T = TypeVar("T")

_SEED_STRIDE = 1_000_003


class Rejected(Exception):
    """A drawn configuration violates a precondition and must be regenerated."""


_REJECTIONS = (Rejected, FlatnessViolation, DenominatorVanishes, NonUnitError, DivisionByZeroError)


class SampleGenerator:
    """Random exact inputs for sample ``index`` of a suite run.

    Each sample has its own stream, so reports do not depend on evaluation order.
    """

    def __init__(self, ring: RingSpec, seed: int, index: int, degree: int = 1,
                 height: int = 3, retry_cap: int = 100):
        self.ring = ring
        self.rng = random.Random(seed * _SEED_STRIDE + index)
        self.index = index
        self.degree = degree
        self.height = height
        self.retry_cap = retry_cap
        self.rejections = 0

    def draw(self, build: Callable[[], T]) -> T:
        """Call ``build`` until it returns without a precondition failure."""
        for _ in range(self.retry_cap):
            try:
                return build()
            except _REJECTIONS as exc:
                self.rejections += 1
                logger.debug("sample %d: rejected draw (%s)", self.index, exc)
        raise GeneratorExhausted(f"sample {self.index}: retry cap {self.retry_cap} exceeded")

    # ── scalars and polynomials ──────────────────────────────────────

    def rational(self) -> Rational:
        h = self.height
        return QQ(self.rng.randint(-h, h), self.rng.randint(1, h))

    def nonzero_rational(self) -> Rational:
        q = self.rational()
        while not q:
            q = self.rational()
        return q

    def poly(self, constant_ok: bool = True) -> RatFunc:
        """Random polynomial of total degree at most ``degree`` in the base variables."""
        field = self.ring.field
        while True:
            total = field.zero
            for monom in _monomials(self.ring.n, self.degree):
                if self.rng.random() < 0.6:
                    total += field.one * self.rng.randint(-self.height, self.height) * \
                        _monomial(field, monom)
            if total and (constant_ok or _is_nonconstant(total)):
                return total

    def ratfunc(self) -> RatFunc:
        num = self.poly()
        if self.rng.random() < 0.5:
            return num
        return num / self.poly(constant_ok=False)

    def base_unit(self) -> RatFunc:
        """A nonconstant u with u, 1 - u nonzero."""
        u = self.poly(constant_ok=False) if self.rng.random() < 0.5 else self.ratfunc()
        if not is_flat(SqZeroElement.of(self.ring, u)) or not _is_nonconstant(u):
            raise Rejected("base part hits 0, 1 or a constant")
        return u

    def infinitesimal(self) -> tuple[RatFunc, ...]:
        zero = self.ring.field.zero
        v = [self.ratfunc() if self.rng.random() < 0.7 else zero for _ in range(self.ring.m)]
        if not any(v):
            v[self.rng.randrange(self.ring.m)] = self.ratfunc()
        return tuple(v)

    # ── structured inputs ────────────────────────────────────────────

    def flat_element(self) -> SqZeroElement:
        return SqZeroElement(self.ring, self.base_unit(), self.infinitesimal())

    def inf_bloch(self, max_terms: int = 2) -> InfBlochSum:
        items = [(self.flat_element(), self.nonzero_rational())
                 for _ in range(self.rng.randint(1, max_terms))]
        s = InfBlochSum.of(self.ring, items)
        if s.is_zero:
            raise Rejected("terms cancelled")
        return s

    def splitting(self, zero_ok: bool = True) -> Splitting:
        zero = self.ring.field.zero
        rows = [[self.poly() if self.rng.random() < 0.6 else zero for _ in range(self.ring.m)]
                for _ in range(self.ring.n)]
        D = Splitting.of(self.ring, rows)
        if D.is_zero and not zero_ok:
            raise Rejected("zero splitting")
        return D

    def hom(self) -> AlgebraHom:
        """An endomorphism x -> (p, phi), t -> psi with nonconstant p."""
        ring = self.ring
        px = []
        for _ in range(ring.n):
            p = self.poly(constant_ok=False)
            if not _is_nonconstant(p):
                raise Rejected("constant base image")
            px.append(p)
        phix = [self.infinitesimal() for _ in range(ring.n)]
        psit = [[self.rational() for _ in range(ring.m)] for _ in range(ring.m)]
        return AlgebraHom.of(ring, ring, px, phix, psit)

    def correction(self) -> TruncSymElement:
        """Random element of t-degree 2 or 3."""
        items = []
        for monom in _monomials(self.ring.m, MAX_DEGREE):
            if sum(monom) >= 2 and self.rng.random() < 0.4:
                items.append((monom, self.ring.ratfunc(self.rational())))
        return TruncSymElement.from_terms(self.ring, items)

    def scalar(self) -> Rational:
        return self.nonzero_rational()


def _monomials(k: int, degree: int) -> list[tuple[int, ...]]:
    if k == 0:
        return [()]
    result = []
    for e in range(degree + 1):
        result += [(e,) + rest for rest in _monomials(k - 1, degree - e)]
    return result


def _monomial(field, monom: tuple[int, ...]) -> RatFunc:
    value = field.one
    for gen, e in zip(field.gens, monom):
        value *= gen ** e
    return value


def _is_nonconstant(r: RatFunc) -> bool:
    return not (r.numer.is_ground and r.denom.is_ground)
