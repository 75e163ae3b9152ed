"""Truncated symmetric algebra, its ring maps, relative and absolute differentials."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Sequence

from sympy import QQ

from .algebra import (
    RatFunc,
    evaluate_poly,
    format_monomial,
    format_poly,
    format_ratfunc,
    gcd_free_basis,
    invert,
    linear_solve_exact,
    partial_derivative,
)
from .errors import DenominatorVanishes, NonUnitError, NotExact, NotExactUpToCap
from .squarezero import RingSpec, Splitting, SqZeroElement

logger = logging.getLogger(__name__)

MAX_DEGREE = 3

_HALF = QQ(1, 2)
_THIRD = QQ(1, 3)

Monomial = tuple[int, ...]


def _shift(monom: Monomial, i: int, by: int = 1) -> Monomial:
    return monom[:i] + (monom[i] + by,) + monom[i + 1:]


def _unit(m: int, i: int) -> Monomial:
    return tuple(1 if k == i else 0 for k in range(m))


# ── Truncated symmetric algebra ──────────────────────────────────────

@dataclass(frozen=True, eq=False)
class TruncSymElement:
    """Polynomial in t1..tm with rational-function coefficients, t-degree at most 3."""

    ring: RingSpec
    terms: Mapping[Monomial, RatFunc] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, ring: RingSpec, items: Iterable[tuple[Monomial, RatFunc]],
                   max_degree: int = MAX_DEGREE) -> TruncSymElement:
        acc: dict[Monomial, RatFunc] = {}
        for monom, coeff in items:
            if sum(monom) > max_degree or not coeff:
                continue
            acc[monom] = acc[monom] + coeff if monom in acc else coeff
        return cls(ring, {k: c for k, c in acc.items() if c})

    @classmethod
    def zero(cls, ring: RingSpec) -> TruncSymElement:
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: RingSpec, r) -> TruncSymElement:
        return cls.from_terms(ring, [((0,) * ring.m, ring.ratfunc(r))])

    @classmethod
    def gen(cls, ring: RingSpec, i: int) -> TruncSymElement:
        return cls(ring, {_unit(ring.m, i): ring.field.one})

    @classmethod
    def linear(cls, ring: RingSpec, v: Sequence[RatFunc]) -> TruncSymElement:
        return cls.from_terms(ring, ((_unit(ring.m, i), c) for i, c in enumerate(v)))

    @classmethod
    def lift(cls, a: SqZeroElement) -> TruncSymElement:
        """The degree <= 1 lift u + sum v_i t_i."""
        return cls.constant(a.ring, a.u) + cls.linear(a.ring, a.v)

    # views

    @property
    def constant_term(self) -> RatFunc:
        return self.terms.get((0,) * self.ring.m, self.ring.field.zero)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_degree(self) -> int:
        return min((sum(k) for k in self.terms), default=MAX_DEGREE + 1)

    def part(self, degree: int) -> TruncSymElement:
        return TruncSymElement(self.ring, {k: c for k, c in self.terms.items() if sum(k) == degree})

    def truncate(self, max_degree: int) -> TruncSymElement:
        return TruncSymElement(self.ring, {k: c for k, c in self.terms.items() if sum(k) <= max_degree})

    def linear_coefficients(self) -> tuple[RatFunc, ...]:
        zero = self.ring.field.zero
        return tuple(self.terms.get(_unit(self.ring.m, i), zero) for i in range(self.ring.m))

    def map_coeffs(self, fn) -> TruncSymElement:
        return TruncSymElement.from_terms(self.ring, ((k, fn(c)) for k, c in self.terms.items()))

    # arithmetic

    def __add__(self, other) -> TruncSymElement:
        other = self._coerce(other)
        return TruncSymElement.from_terms(self.ring, itertools.chain(self.terms.items(), other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> TruncSymElement:
        return TruncSymElement(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> TruncSymElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> TruncSymElement:
        return self._coerce(other) - self

    def __mul__(self, other) -> TruncSymElement:
        if isinstance(other, TruncSymElement):
            return trunc_mul(self, other)
        c = self.ring.ratfunc(other)
        if not c:
            return TruncSymElement.zero(self.ring)
        return TruncSymElement(self.ring, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> TruncSymElement:
        result = TruncSymElement.constant(self.ring, 1)
        for _ in range(k):
            result = result * self
        return result

    def inverse(self) -> TruncSymElement:
        a0 = self.constant_term
        if not a0:
            raise NonUnitError(f"{self} has zero constant term")
        inv0 = invert(a0)
        eps = self * inv0 - 1
        series = 1 - eps + eps * eps - eps * eps * eps
        return series * inv0

    def t_derivative(self, i: int) -> TruncSymElement:
        items = ((_shift(k, i, -1), c * k[i]) for k, c in self.terms.items() if k[i])
        return TruncSymElement.from_terms(self.ring, items)

    def x_derivative(self, j: int) -> TruncSymElement:
        return self.map_coeffs(lambda c: partial_derivative(c, j))

    def _coerce(self, other) -> TruncSymElement:
        if isinstance(other, TruncSymElement):
            return other
        return TruncSymElement.constant(self.ring, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSymElement):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for monom in sorted(self.terms, key=lambda k: (-sum(k), tuple(-e for e in k))):
            mono = format_monomial(monom, self.ring.tvars)
            coeff = f"({format_ratfunc(self.terms[monom])})"
            pieces.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(pieces)


def trunc_mul(a: TruncSymElement, b: TruncSymElement) -> TruncSymElement:
    """Graded convolution dropping t-degrees above 3."""
    items = []
    for ka, ca in a.terms.items():
        da = sum(ka)
        for kb, cb in b.terms.items():
            if da + sum(kb) > MAX_DEGREE:
                continue
            items.append((tuple(x + y for x, y in zip(ka, kb)), ca * cb))
    return TruncSymElement.from_terms(a.ring, items)


def log1p_series(eps: TruncSymElement) -> TruncSymElement:
    """log(1 + eps) for eps without constant term."""
    if eps.constant_term:
        raise ValueError("log1p_series needs a topologically nilpotent argument")
    eps2 = eps * eps
    return eps - eps2 * _HALF + eps2 * eps * _THIRD


# ── Ring maps of the truncated completion ────────────────────────────

@dataclass(frozen=True, eq=False)
class TruncHom:
    """The ring map sending x_j to x_images[j] and t_i to t_images[i]."""

    source: RingSpec
    target: RingSpec
    x_images: tuple[TruncSymElement, ...]
    t_images: tuple[TruncSymElement, ...]

    def __post_init__(self):
        if any(t.constant_term for t in self.t_images):
            raise ValueError("images of t must lie in the augmentation ideal")

    def apply_ratfunc(self, r: RatFunc) -> TruncSymElement:
        one = TruncSymElement.constant(self.target, 1)
        den = evaluate_poly(r.denom, self.x_images, one)
        if not den.constant_term:
            raise DenominatorVanishes(format_poly(r.denom))
        num = evaluate_poly(r.numer, self.x_images, one)
        return num * den.inverse()

    def apply(self, a: TruncSymElement) -> TruncSymElement:
        total = TruncSymElement.zero(self.target)
        for monom, coeff in a.terms.items():
            term = self.apply_ratfunc(coeff)
            for i, e in enumerate(monom):
                if e:
                    term = term * self.t_images[i] ** e
            total = total + term
        return total

    def apply_form(self, w: RelOneForm) -> RelOneForm:
        """Push a relative form along the map into the standard structure."""
        total = RelOneForm.zero(self.target)
        for comp, t_image in zip(w.comps, self.t_images):
            if comp.is_zero:
                continue
            total = total + rel_d(t_image) * self.apply(comp)
        return total


def identity_trunc_hom(ring: RingSpec) -> TruncHom:
    return TruncHom(
        ring, ring,
        tuple(TruncSymElement.constant(ring, x) for x in ring.gens),
        tuple(TruncSymElement.gen(ring, i) for i in range(ring.m)),
    )


def splitting_transport(D: Splitting) -> TruncHom:
    """Psi_D: x_j -> x_j + D(x_j), t_i -> t_i; restricted to Abar it is tau_D-hat."""
    ring = D.ring
    base = identity_trunc_hom(ring)
    x_images = tuple(x + TruncSymElement.linear(ring, row) for x, row in zip(base.x_images, D.images))
    return TruncHom(ring, ring, x_images, base.t_images)


def inverse_splitting_transport(D: Splitting) -> TruncHom:
    """Psi_D^-1 by fixed-point iteration y = x - D(x)(y) t."""
    ring = D.ring
    base = identity_trunc_hom(ring)
    y = base.x_images
    for _ in range(MAX_DEGREE):
        step = TruncHom(ring, ring, y, base.t_images)
        y = tuple(
            x - sum((step.apply_ratfunc(w) * base.t_images[i] for i, w in enumerate(row) if w),
                    TruncSymElement.zero(ring))
            for x, row in zip(base.x_images, D.images)
        )
    return TruncHom(ring, ring, y, base.t_images)


def split_lift(D: Splitting, r: RatFunc) -> TruncSymElement:
    """tau_D-hat(r) = r(x + D(x))."""
    return splitting_transport(D).apply_ratfunc(r)


def trunc_log_circ(a: TruncSymElement, D: Splitting | None = None) -> TruncSymElement:
    """log(a / tau_D-hat(abar))."""
    a0 = a.constant_term
    if not a0:
        raise NonUnitError(f"{a} is not a unit")
    base = split_lift(D, a0) if D is not None and not D.is_zero else TruncSymElement.constant(a.ring, a0)
    return log1p_series(a * base.inverse() - 1)


# ── Relative one-forms ────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class RelOneForm:
    """sum_i comps[i] d_t_i with coefficients of t-degree at most 2."""

    ring: RingSpec
    comps: tuple[TruncSymElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(c.truncate(MAX_DEGREE - 1) for c in self.comps))

    @classmethod
    def zero(cls, ring: RingSpec) -> RelOneForm:
        return cls(ring, tuple(TruncSymElement.zero(ring) for _ in range(ring.m)))

    @classmethod
    def of(cls, ring: RingSpec, comps: Sequence[TruncSymElement]) -> RelOneForm:
        return cls(ring, tuple(comps))

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.comps)

    def total_degree_part(self, k: int) -> RelOneForm:
        return RelOneForm(self.ring, tuple(c.part(k - 1) for c in self.comps))

    def __add__(self, other: RelOneForm) -> RelOneForm:
        return RelOneForm(self.ring, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __neg__(self) -> RelOneForm:
        return RelOneForm(self.ring, tuple(-c for c in self.comps))

    def __sub__(self, other: RelOneForm) -> RelOneForm:
        return self + (-other)

    def __mul__(self, other) -> RelOneForm:
        return RelOneForm(self.ring, tuple(c * other for c in self.comps))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, RelOneForm):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __str__(self) -> str:
        pieces = [f"[{c}]*d{t}" for c, t in zip(self.comps, self.ring.tvars) if not c.is_zero]
        return " + ".join(pieces) or "0"


def rel_d(a: TruncSymElement, D: Splitting | None = None) -> RelOneForm:
    """Differential relative to Abar embedded through tau_D-hat.

    The relations d(x_j + D(x_j)) = 0 are used to eliminate dx_j; each round
    raises the t-degree of the dx-coefficients, so three rounds exhaust them.
    """
    ring = a.ring
    tc = [a.t_derivative(i) for i in range(ring.m)]
    if D is None or D.is_zero:
        return RelOneForm(ring, tuple(tc))

    images = [TruncSymElement.linear(ring, row) for row in D.images]
    xc = [a.x_derivative(j).truncate(MAX_DEGREE - 1) for j in range(ring.n)]
    rounds = 0
    while any(not c.is_zero for c in xc):
        rounds += 1
        new_xc = [TruncSymElement.zero(ring) for _ in range(ring.n)]
        for j, c in enumerate(xc):
            if c.is_zero:
                continue
            # dx_j = -sum_i w_ji dt_i - sum_k d_k(D(x_j)) dx_k
            for i, w in enumerate(D.images[j]):
                if w:
                    tc[i] = tc[i] - c * w
            for k in range(ring.n):
                dk = images[j].x_derivative(k)
                if not dk.is_zero:
                    new_xc[k] = new_xc[k] - c * dk
        xc = [c.truncate(MAX_DEGREE - 1) for c in new_xc]
    logger.debug("rel_d eliminated dx in %d rounds", rounds)
    return RelOneForm(ring, tuple(tc))


def euler_antiderivative(omega: RelOneForm) -> TruncSymElement:
    """g with rel_d(g) = omega, using g_k = (1/k) sum_i t_i omega_i on total degree k."""
    ring = omega.ring
    items = []
    for i, comp in enumerate(omega.comps):
        for monom, coeff in comp.terms.items():
            k = sum(monom) + 1
            items.append((_shift(monom, i), coeff * QQ(1, k)))
    g = TruncSymElement.from_terms(ring, items)
    if rel_d(g) != omega:
        raise NotExact(f"{omega} is not closed")
    return g


# ── Degree-three classes ─────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Sym3Class:
    """A class in I~^3 / I~^4 = S^3(I)."""

    ring: RingSpec
    terms: Mapping[Monomial, RatFunc] = field(default_factory=dict)

    @classmethod
    def zero(cls, ring: RingSpec) -> Sym3Class:
        return cls(ring, {})

    @classmethod
    def from_trunc(cls, a: TruncSymElement) -> Sym3Class:
        return cls(a.ring, dict(a.part(MAX_DEGREE).terms))

    @classmethod
    def cube(cls, ring: RingSpec, v: Sequence[RatFunc]) -> Sym3Class:
        alpha = TruncSymElement.linear(ring, v)
        return cls.from_trunc(alpha * alpha * alpha)

    def as_trunc(self) -> TruncSymElement:
        return TruncSymElement(self.ring, dict(self.terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Sym3Class) -> Sym3Class:
        return Sym3Class.from_trunc(self.as_trunc() + other.as_trunc())

    def __neg__(self) -> Sym3Class:
        return Sym3Class(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Sym3Class) -> Sym3Class:
        return self + (-other)

    def __mul__(self, other) -> Sym3Class:
        return Sym3Class.from_trunc(self.as_trunc() * other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sym3Class):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for monom in sorted(self.terms, reverse=True):
            factors = [t for t, e in zip(self.ring.tvars, monom) for _ in range(e)]
            pieces.append(f"({format_ratfunc(self.terms[monom])})*{'*'.join(factors)}")
        return " + ".join(pieces)


# ── Absolute one-forms on A ──────────────────────────────────────────

def _add_t_dt(mixed: dict, k: int, i: int, coeff: RatFunc) -> None:
    """Accumulate coeff * t_k dt_i in the normal form keyed (i, j) for t_j dt_i, i < j."""
    if k == i or not coeff:
        return
    key, sign = ((i, k), 1) if i < k else ((k, i), -1)
    value = mixed.get(key, coeff * 0) + coeff * sign
    if value:
        mixed[key] = value
    else:
        mixed.pop(key, None)


@dataclass(frozen=True, eq=False)
class AbsOneForm:
    """sum_j xcomps[j] dx_j + sum_i tcomps[i] dt_i + sum_{i<j} mixed[(i, j)] t_j dt_i."""

    ring: RingSpec
    xcomps: tuple[SqZeroElement, ...]
    tcomps: tuple[RatFunc, ...]
    mixed: Mapping[tuple[int, int], RatFunc] = field(default_factory=dict)

    @classmethod
    def zero(cls, ring: RingSpec) -> AbsOneForm:
        zero = ring.field.zero
        return cls(ring, tuple(SqZeroElement.of(ring, 0) for _ in range(ring.n)),
                   (zero,) * ring.m, {})

    @property
    def is_zero(self) -> bool:
        return (all(x.is_zero for x in self.xcomps) and not any(self.tcomps)
                and not any(self.mixed.values()))

    @property
    def is_infinitesimal(self) -> bool:
        return all(not x.u for x in self.xcomps)

    def __add__(self, other: AbsOneForm) -> AbsOneForm:
        mixed = dict(self.mixed)
        for (i, j), c in other.mixed.items():
            _add_t_dt(mixed, j, i, c)
        return AbsOneForm(self.ring,
                          tuple(a + b for a, b in zip(self.xcomps, other.xcomps)),
                          tuple(a + b for a, b in zip(self.tcomps, other.tcomps)),
                          mixed)

    def __neg__(self) -> AbsOneForm:
        return self.times(SqZeroElement.of(self.ring, -1))

    def __sub__(self, other: AbsOneForm) -> AbsOneForm:
        return self + (-other)

    def times(self, a: SqZeroElement) -> AbsOneForm:
        """Module action of A; products of two t's vanish."""
        mixed: dict = {}
        for (i, j), e in self.mixed.items():
            _add_t_dt(mixed, j, i, a.u * e)
        for i, c in enumerate(self.tcomps):
            if not c:
                continue
            for k, vk in enumerate(a.v):
                _add_t_dt(mixed, k, i, vk * c)
        return AbsOneForm(self.ring,
                          tuple(a * x for x in self.xcomps),
                          tuple(a.u * c for c in self.tcomps),
                          mixed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbsOneForm):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __str__(self) -> str:
        pieces = []
        for x, name in zip(self.xcomps, self.ring.xvars):
            if x.u:
                pieces.append(f"({format_ratfunc(x.u)})*d{name}")
            pieces += [f"({format_ratfunc(c)})*{t}*d{name}" for c, t in zip(x.v, self.ring.tvars) if c]
        pieces += [f"({format_ratfunc(c)})*d{t}" for c, t in zip(self.tcomps, self.ring.tvars) if c]
        for (i, j), c in sorted(self.mixed.items()):
            pieces.append(f"({format_ratfunc(c)})*{self.ring.tvars[j]}*d{self.ring.tvars[i]}")
        return " + ".join(pieces) or "0"


def abs_d(a: SqZeroElement) -> AbsOneForm:
    """du + sum_i (v_i dt_i + t_i dv_i)."""
    ring = a.ring
    xcomps = tuple(
        SqZeroElement(ring, partial_derivative(a.u, j), tuple(partial_derivative(c, j) for c in a.v))
        for j in range(ring.n)
    )
    return AbsOneForm(ring, xcomps, tuple(a.v), {})


def _monomials_up_to(n: int, cap: int) -> list[Monomial]:
    return [e for e in itertools.product(range(cap + 1), repeat=n) if sum(e) <= cap]


def _integrate_base(ring: RingSpec, base: Sequence[RatFunc], cap: int) -> RatFunc:
    """G in Abar with dG = sum_j base[j] dx_j, searched as P/Q with deg P <= cap."""
    zero = ring.field.zero
    if not any(base):
        return zero
    poly_ring = ring.field.ring
    lcm = reduce(lambda p, q: p.lcm(q), (c.denom for c in base if c))
    gfb = gcd_free_basis([lcm])
    exps = gfb.exponents[0][len(gfb.primes):]
    denominator = poly_ring.one
    for b, e in zip(gfb.elements, exps):
        if e > 1:
            denominator *= b ** (e - 1)

    basis = [poly_ring({monom: poly_ring.domain.one}) for monom in _monomials_up_to(ring.n, cap)]
    columns: list[list] = [[] for _ in basis]
    rhs: list = []
    for j, c in enumerate(base):
        x = poly_ring.gens[j]
        dq = denominator.diff(x)
        target = c.numer * denominator ** 2
        cols = [(mu.diff(x) * denominator - mu * dq) * c.denom for mu in basis]
        monoms = set(target.keys())
        for col in cols:
            monoms.update(col.keys())
        for monom in sorted(monoms):
            for k, col in enumerate(cols):
                columns[k].append(col.get(monom, poly_ring.domain.zero))
            rhs.append(target.get(monom, poly_ring.domain.zero))
    matrix = [[columns[k][r] for k in range(len(basis))] for r in range(len(rhs))]
    logger.debug("exactness ansatz: %d unknowns, %d equations", len(basis), len(rhs))
    solution = linear_solve_exact(matrix, rhs)
    if solution is None:
        raise NotExactUpToCap(cap, "no base antiderivative in the ansatz")
    numerator = sum((mu * s for mu, s in zip(basis, solution) if s), poly_ring.zero)
    return ring.field(numerator) / ring.field(denominator)


def exactness_test(omega: AbsOneForm, cap: int) -> SqZeroElement:
    """An element g with abs_d(g) = omega, or NotExactUpToCap."""
    ring = omega.ring
    g0 = _integrate_base(ring, [x.u for x in omega.xcomps], cap)
    if any(omega.mixed.values()):
        raise NotExactUpToCap(cap, "t dt components do not come from a differential")
    candidate = SqZeroElement(ring, g0, tuple(omega.tcomps))
    if abs_d(candidate) != omega:
        raise NotExactUpToCap(cap, "t dx components do not match the dt components")
    return candidate

