"""Bloch sums, the differential delta, adapted wedge sums and log dlog."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

from sympy import QQ

from .algebra import RatFunc, format_rational, format_ratfunc, gcd_free_basis, to_rational
from .errors import FlatnessViolation, NonUnitError, NotInfinitesimal
from .squarezero import (
    AlgebraHom,
    RingSpec,
    SqZeroElement,
    apply_hom,
    is_flat,
    scaling_endo,
)
from .symalg import AbsOneForm, abs_d


@dataclass(frozen=True, eq=False)
class _Combination:
    """Finite Q-linear combination of hashable generators."""

    ring: RingSpec
    terms: Mapping[Any, Any] = field(default_factory=dict)

    @classmethod
    def from_items(cls, ring: RingSpec, items: Iterable[tuple[Any, Any]]):
        acc: dict = {}
        for key, coeff in items:
            coeff = to_rational(coeff)
            acc[key] = acc.get(key, QQ.zero) + coeff
        return cls(ring, {k: c for k, c in acc.items() if c})

    @classmethod
    def zero(cls, ring: RingSpec):
        return cls(ring, {})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return self.terms.items()

    def __add__(self, other):
        return type(self).from_items(self.ring, [*self.terms.items(), *other.terms.items()])

    def __neg__(self):
        return type(self)(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = to_rational(scalar)
        return type(self).from_items(self.ring, ((k, c * scalar) for k, c in self.terms.items()))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for key, coeff in self.terms.items():
            sign = "-" if coeff < 0 else "+"
            pieces.append(f"{sign} {format_rational(abs(coeff))}*{self._format_key(key)}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else text

    def _format_key(self, key) -> str:
        return str(key)


# ── Bloch sums ───────────────────────────────────────────────────────

class BlochSum(_Combination):
    """Formal combination of generators [a] with a flat."""

    @classmethod
    def of(cls, ring: RingSpec, items: Iterable[tuple[SqZeroElement, Any]]) -> BlochSum:
        items = list(items)
        for a, _ in items:
            if not is_flat(a):
                raise FlatnessViolation(str(a))
        return cls.from_items(ring, items)

    def _format_key(self, key) -> str:
        return f"[{key}]"


class InfBlochSum(_Combination):
    """Combination of [tau0(u) + alpha] - [tau0(u)], keyed by the element (u, alpha)."""

    @classmethod
    def of(cls, ring: RingSpec, items: Iterable[tuple[SqZeroElement, Any]]) -> InfBlochSum:
        kept = []
        for a, coeff in items:
            if not is_flat(SqZeroElement.of(ring, a.u)):
                raise FlatnessViolation(str(a), "the base part must avoid 0 and 1")
            if any(a.v):
                kept.append((a, coeff))
        return cls.from_items(ring, kept)

    def to_bloch(self) -> BlochSum:
        items = []
        for a, coeff in self.terms.items():
            items.append((a, coeff))
            items.append((SqZeroElement.of(self.ring, a.u), -coeff))
        return BlochSum.from_items(self.ring, items)

    def scaled(self, lam) -> InfBlochSum:
        """Image under the scaling endomorphism t_lambda."""
        return InfBlochSum.of(self.ring, ((scaling_endo(lam, a), c) for a, c in self.terms.items()))

    def _format_key(self, key) -> str:
        alpha = SqZeroElement(key.ring, key.ring.field.zero, key.v)
        return f"[({format_ratfunc(key.u)}), {alpha}]"


def as_bloch(s: BlochSum | InfBlochSum) -> BlochSum:
    return s.to_bloch() if isinstance(s, InfBlochSum) else s


def apply_hom_bloch(f: AlgebraHom, s: BlochSum | InfBlochSum) -> BlochSum:
    """Image of a Bloch sum under an algebra homomorphism."""
    items = []
    for a, coeff in as_bloch(s).items():
        image = apply_hom(f, a)
        if not is_flat(image):
            raise FlatnessViolation(str(image), f"image of {a}")
        items.append((image, coeff))
    return BlochSum.from_items(f.target, items)


# ── Wedge terms ──────────────────────────────────────────────────────

class WedgeKind(Enum):
    G1 = "G1"
    G2 = "G2"
    BASE = "BASE"


@dataclass(frozen=True, eq=False)
class WedgeTerm:
    """G1(a, b) = (1+a)^(1+b), G2(a, u) = (1+a)^tau0(u), BASE(u, w) = tau0(u)^tau0(w)."""

    kind: WedgeKind
    left: SqZeroElement
    right: SqZeroElement

    @classmethod
    def g1(cls, alpha: SqZeroElement, beta: SqZeroElement) -> WedgeTerm:
        return cls(WedgeKind.G1, alpha, beta)

    @classmethod
    def g2(cls, alpha: SqZeroElement, u: RatFunc) -> WedgeTerm:
        return cls(WedgeKind.G2, alpha, SqZeroElement.of(alpha.ring, u))

    @classmethod
    def base(cls, ring: RingSpec, u: RatFunc, w: RatFunc) -> WedgeTerm:
        return cls(WedgeKind.BASE, SqZeroElement.of(ring, u), SqZeroElement.of(ring, w))

    @property
    def is_trivial(self) -> bool:
        if self.kind is WedgeKind.G1:
            return self.left.is_zero or self.right.is_zero
        if self.kind is WedgeKind.G2:
            return self.left.is_zero
        return False

    def __hash__(self) -> int:
        return hash((self.kind, self.left.key(), self.right.key()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WedgeTerm):
            return NotImplemented
        return self.kind is other.kind and self.left == other.left and self.right == other.right

    def __str__(self) -> str:
        if self.kind is WedgeKind.G1:
            return f"G1({self.left}, {self.right})"
        if self.kind is WedgeKind.G2:
            return f"G2({self.left}, ({format_ratfunc(self.right.u)}))"
        return f"BASE(({format_ratfunc(self.left.u)}), ({format_ratfunc(self.right.u)}))"


class FWedgeSum(_Combination):
    """Combination of wedge terms; trivial terms (a zero infinitesimal entry) are dropped."""

    @classmethod
    def from_items(cls, ring: RingSpec, items):
        return super().from_items(ring, ((t, c) for t, c in items if not t.is_trivial))

    def base_part(self) -> FWedgeSum:
        return FWedgeSum(self.ring, {t: c for t, c in self.terms.items() if t.kind is WedgeKind.BASE})

    def infinitesimal_part(self) -> FWedgeSum:
        return FWedgeSum(self.ring, {t: c for t, c in self.terms.items() if t.kind is not WedgeKind.BASE})


def _infinitesimal(ring: RingSpec, v) -> SqZeroElement:
    return SqZeroElement(ring, ring.field.zero, tuple(v))


def _delta_items(a: SqZeroElement, coeff, with_base: bool):
    """(1-a)^a for a = u(1 + v/u), 1 - a = (1-u)(1 + v/(u-1))."""
    ring, u = a.ring, a.u
    alpha = _infinitesimal(ring, (c / u for c in a.v))
    beta = _infinitesimal(ring, (c / (u - 1) for c in a.v))
    if with_base:
        yield WedgeTerm.base(ring, 1 - u, u), coeff
    yield WedgeTerm.g2(alpha, u - 1), -coeff
    yield WedgeTerm.g2(beta, u), coeff
    yield WedgeTerm.g1(beta, alpha), coeff


def delta(s: BlochSum) -> FWedgeSum:
    """[a] -> (1 - a) ^ a in adapted components."""
    items = []
    for a, coeff in s.items():
        if not is_flat(a):
            raise FlatnessViolation(str(a))
        items.extend(_delta_items(a, coeff, with_base=True))
    return FWedgeSum.from_items(s.ring, items)


def delta_inf(s: InfBlochSum) -> FWedgeSum:
    """delta on [tau0(u) + alpha] - [tau0(u)]; the base parts cancel."""
    items = []
    for a, coeff in s.items():
        items.extend(_delta_items(a, coeff, with_base=False))
    return FWedgeSum.from_items(s.ring, items)


def five_term_sum(x: SqZeroElement, y: SqZeroElement) -> BlochSum:
    """[x] - [y] + [y/x] - [(1 - 1/x)/(1 - 1/y)] + [(1 - x)/(1 - y)]."""
    ring = x.ring
    one = SqZeroElement.of(ring, 1)
    for name, arg in (("x", x), ("y", y)):
        if not is_flat(arg):
            raise FlatnessViolation(name, str(arg))
    if not (x.u - y.u):
        raise FlatnessViolation("y/x", "x and y coincide")
    args = [
        ("y/x", y / x, 1),
        ("(1-x^-1)/(1-y^-1)", (one - one / x) / (one - one / y), -1),
        ("(1-x)/(1-y)", x.one_minus() / y.one_minus(), 1),
    ]
    items = [(x, 1), (y, -1)]
    for name, arg, sign in args:
        if not is_flat(arg):
            raise FlatnessViolation(name, str(arg))
        items.append((arg, sign))
    return BlochSum.from_items(ring, items)


# ── Reduction and log dlog ───────────────────────────────────────────

def base_part_vanishes(w: FWedgeSum) -> bool:
    """Decide whether the BASE part is zero in Lambda^2 of the unit group tensored with Q."""
    base = [(t.left.u, t.right.u, c) for t, c in w.items() if t.kind is WedgeKind.BASE]
    if not base:
        return True
    polys = []
    for u, v, _ in base:
        if not u or not v:
            raise NonUnitError("BASE entries must be units")
        polys += [u.numer, u.denom, v.numer, v.denom]
    gfb = gcd_free_basis(polys)
    coords: dict[tuple[int, int], Any] = {}
    for u, v, c in base:
        eu, ev = gfb.ratfunc_vector(u), gfb.ratfunc_vector(v)
        for a in range(gfb.size):
            for b in range(a + 1, gfb.size):
                value = eu[a] * ev[b] - eu[b] * ev[a]
                if value:
                    coords[(a, b)] = coords.get((a, b), QQ.zero) + c * value
    return not any(coords.values())


def logdlog(w: FWedgeSum) -> AbsOneForm:
    """G1(a, b) -> a db, G2(a, u) -> a du/u."""
    if not base_part_vanishes(w):
        raise NotInfinitesimal(f"BASE part of {w} does not vanish")
    ring = w.ring
    total = AbsOneForm.zero(ring)
    for term, coeff in w.items():
        if term.kind is WedgeKind.G1:
            form = abs_d(term.right).times(term.left)
        elif term.kind is WedgeKind.G2:
            u = term.right.u
            form = abs_d(term.right).times(term.left * (1 / u))
        else:
            continue
        total = total + form.times(SqZeroElement.of(ring, coeff))
    return total


def transport_wedge(w: FWedgeSum, f: AlgebraHom) -> FWedgeSum:
    """Image of a wedge sum under an algebra homomorphism, rewritten in adapted components."""
    target = f.target

    def inf(alpha: SqZeroElement) -> SqZeroElement:
        return _infinitesimal(target, f.map_infinitesimal(alpha.v))

    def unit(u: RatFunc) -> tuple[RatFunc, SqZeroElement]:
        image = f.base_map(u)
        if not image:
            raise NonUnitError(f"{format_ratfunc(u)} maps to zero")
        return image, _infinitesimal(target, (c / image for c in f.theta_base(u)))

    items = []
    for term, coeff in w.items():
        if term.kind is WedgeKind.G1:
            items.append((WedgeTerm.g1(inf(term.left), inf(term.right)), coeff))
        elif term.kind is WedgeKind.G2:
            alpha = inf(term.left)
            big_u, eps = unit(term.right.u)
            items.append((WedgeTerm.g2(alpha, big_u), coeff))
            items.append((WedgeTerm.g1(alpha, eps), coeff))
        else:
            big_u, eps = unit(term.left.u)
            big_w, eta = unit(term.right.u)
            items.append((WedgeTerm.base(target, big_u, big_w), coeff))
            items.append((WedgeTerm.g2(eta, big_u), -coeff))
            items.append((WedgeTerm.g2(eps, big_w), coeff))
            items.append((WedgeTerm.g1(eps, eta), coeff))
    return FWedgeSum.from_items(target, items)
