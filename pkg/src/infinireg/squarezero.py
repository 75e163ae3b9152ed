"""The square-zero extension A = Abar + I with I free on t1..tm."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from sympy.polys.fields import FracField

from .algebra import (
    RatFunc,
    format_ratfunc,
    invert,
    make_field,
    partial_derivative,
    ratfunc_key,
    substitute,
    to_rational,
)
from .errors import NonUnitError


@dataclass(frozen=True)
class RingSpec:
    """Base variables x and basis t of I; all elements of a computation share one."""

    xvars: tuple[str, ...]
    tvars: tuple[str, ...]

    def __post_init__(self):
        if not self.xvars:
            raise ValueError("at least one base variable is required")
        if not self.tvars:
            raise ValueError("I must have rank at least 1")
        if len(set(self.xvars + self.tvars)) != len(self.xvars) + len(self.tvars):
            raise ValueError("variable names must be distinct")

    @classmethod
    def standard(cls, n: int, m: int) -> RingSpec:
        xvars = ("x",) if n == 1 else tuple(f"x{j + 1}" for j in range(n))
        return cls(xvars, tuple(f"t{i + 1}" for i in range(m)))

    @property
    def n(self) -> int:
        return len(self.xvars)

    @property
    def m(self) -> int:
        return len(self.tvars)

    @cached_property
    def field(self) -> FracField:
        return make_field(self.xvars)

    @property
    def gens(self) -> tuple[RatFunc, ...]:
        return self.field.gens

    def ratfunc(self, value) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        return self.field.one * to_rational(value)


@dataclass(frozen=True, eq=False)
class SqZeroElement:
    """u + sum v_i t_i with u and v_i rational functions."""

    ring: RingSpec
    u: RatFunc
    v: tuple[RatFunc, ...]

    @classmethod
    def of(cls, ring: RingSpec, u, v: Sequence = ()) -> SqZeroElement:
        coeffs = [ring.ratfunc(c) for c in v]
        coeffs += [ring.field.zero] * (ring.m - len(coeffs))
        return cls(ring, ring.ratfunc(u), tuple(coeffs))

    @classmethod
    def infinitesimal(cls, ring: RingSpec, v: Sequence) -> SqZeroElement:
        return cls.of(ring, 0, v)

    @property
    def is_infinitesimal(self) -> bool:
        return not self.u

    @property
    def is_zero(self) -> bool:
        return not self.u and not any(self.v)

    def key(self) -> tuple:
        return (ratfunc_key(self.u),) + tuple(ratfunc_key(c) for c in self.v)

    def __hash__(self) -> int:
        return hash(self.key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SqZeroElement):
            return NotImplemented
        return (self - other).is_zero

    def __add__(self, other: SqZeroElement) -> SqZeroElement:
        return SqZeroElement(self.ring, self.u + other.u,
                             tuple(a + b for a, b in zip(self.v, other.v)))

    def __neg__(self) -> SqZeroElement:
        return SqZeroElement(self.ring, -self.u, tuple(-a for a in self.v))

    def __sub__(self, other: SqZeroElement) -> SqZeroElement:
        return self + (-other)

    def __mul__(self, other) -> SqZeroElement:
        if isinstance(other, SqZeroElement):
            return sq_mul(self, other)
        c = self.ring.ratfunc(other)
        return SqZeroElement(self.ring, self.u * c, tuple(a * c for a in self.v))

    __rmul__ = __mul__

    def __truediv__(self, other: SqZeroElement) -> SqZeroElement:
        return sq_mul(self, sq_inv(other))

    def one_minus(self) -> SqZeroElement:
        return SqZeroElement(self.ring, 1 - self.u, tuple(-a for a in self.v))

    def __str__(self) -> str:
        parts = [] if not self.u and any(self.v) else [f"({format_ratfunc(self.u)})"]
        parts += [f"({format_ratfunc(c)})*{t}" for c, t in zip(self.v, self.ring.tvars) if c]
        return " + ".join(parts)


def sq_mul(a: SqZeroElement, b: SqZeroElement) -> SqZeroElement:
    """(u, v)(u', v') = (uu', uv' + u'v)."""
    return SqZeroElement(a.ring, a.u * b.u,
                         tuple(a.u * vb + b.u * va for va, vb in zip(a.v, b.v)))


def sq_inv(a: SqZeroElement) -> SqZeroElement:
    if not a.u:
        raise NonUnitError(f"{a} is not a unit")
    inv = invert(a.u)
    return SqZeroElement(a.ring, inv, tuple(-inv * inv * c for c in a.v))


def is_flat(a: SqZeroElement) -> bool:
    """a and 1 - a are both units."""
    return bool(a.u) and bool(a.u - 1)


def scaling_endo(lam, a: SqZeroElement) -> SqZeroElement:
    """t_lambda: u + v -> u + lambda v."""
    lam = to_rational(lam)
    return SqZeroElement(a.ring, a.u, tuple(c * lam for c in a.v))


# ── Splittings ───────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Splitting:
    """A derivation D: Abar -> I stored by images[j] = D(x_j) as coefficients of t."""

    ring: RingSpec
    images: tuple[tuple[RatFunc, ...], ...]

    @classmethod
    def zero(cls, ring: RingSpec) -> Splitting:
        return cls.of(ring, [])

    @classmethod
    def of(cls, ring: RingSpec, images: Sequence[Sequence]) -> Splitting:
        rows = [tuple(ring.ratfunc(c) for c in row) for row in images]
        rows += [()] * (ring.n - len(rows))
        padded = tuple(row + (ring.field.zero,) * (ring.m - len(row)) for row in rows)
        return cls(ring, padded)

    @property
    def is_zero(self) -> bool:
        return not any(c for row in self.images for c in row)

    def derive(self, r: RatFunc) -> tuple[RatFunc, ...]:
        """D(r) = sum_j d_j r * D(x_j)."""
        result = [self.ring.field.zero] * self.ring.m
        for j, row in enumerate(self.images):
            if not any(row):
                continue
            dr = partial_derivative(r, j)
            if not dr:
                continue
            for i, c in enumerate(row):
                result[i] += dr * c
        return tuple(result)

    def derive_element(self, a: SqZeroElement) -> SqZeroElement:
        return SqZeroElement(self.ring, self.ring.field.zero, self.derive(a.u))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Splitting):
            return NotImplemented
        return all(not (a - b) for ra, rb in zip(self.images, other.images)
                   for a, b in zip(ra, rb))

    def __hash__(self) -> int:
        return hash(tuple(ratfunc_key(c) for row in self.images for c in row))

    def __str__(self) -> str:
        lines = []
        for x, row in zip(self.ring.xvars, self.images):
            image = SqZeroElement(self.ring, self.ring.field.zero, row)
            lines.append(f"{x} -> {image if any(row) else '0'}")
        return "; ".join(lines)


def apply_splitting(D: Splitting, r: RatFunc) -> SqZeroElement:
    """tau_D(r) = (r, D(r))."""
    return SqZeroElement(D.ring, r, D.derive(r))


# ── Algebra homomorphisms ────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class AlgebraHom:
    """f(x_j) = (px_j, phix_j), f(t_i) = psit_i, I-parts stored as coefficient vectors."""

    source: RingSpec
    target: RingSpec
    px: tuple[RatFunc, ...]
    phix: tuple[tuple[RatFunc, ...], ...]
    psit: tuple[tuple[RatFunc, ...], ...]

    @classmethod
    def identity(cls, ring: RingSpec) -> AlgebraHom:
        zero, one = ring.field.zero, ring.field.one
        return cls(
            ring, ring,
            tuple(ring.gens),
            tuple((zero,) * ring.m for _ in range(ring.n)),
            tuple(tuple(one if k == i else zero for k in range(ring.m)) for i in range(ring.m)),
        )

    @classmethod
    def of(cls, source: RingSpec, target: RingSpec, px: Sequence, phix: Sequence[Sequence],
           psit: Sequence[Sequence]) -> AlgebraHom:
        def vec(row):
            row = [target.ratfunc(c) for c in row]
            return tuple(row + [target.field.zero] * (target.m - len(row)))

        return cls(source, target, tuple(target.ratfunc(p) for p in px),
                   tuple(vec(row) for row in phix), tuple(vec(row) for row in psit))

    def base_map(self, r: RatFunc) -> RatFunc:
        """fbar(r) = r(p)."""
        return substitute(r, self.px, self.target.field)

    def theta_base(self, r: RatFunc) -> tuple[RatFunc, ...]:
        """I-part of f(r) for r in Abar: sum_j d_j r(p) * phi_j."""
        result = [self.target.field.zero] * self.target.m
        for j, row in enumerate(self.phix):
            if not any(row):
                continue
            dr = partial_derivative(r, j)
            if not dr:
                continue
            dr_p = self.base_map(dr)
            for i, c in enumerate(row):
                result[i] += dr_p * c
        return tuple(result)

    def map_infinitesimal(self, v: Sequence[RatFunc]) -> tuple[RatFunc, ...]:
        """f(sum v_i t_i) = sum v_i(p) psi_i."""
        result = [self.target.field.zero] * self.target.m
        for vi, row in zip(v, self.psit):
            if not vi:
                continue
            vi_p = self.base_map(vi)
            for k, c in enumerate(row):
                result[k] += vi_p * c
        return tuple(result)

    def __str__(self) -> str:
        zero = self.target.field.zero
        lines = [f"{x} -> {SqZeroElement(self.target, p, phi)}"
                 for x, p, phi in zip(self.source.xvars, self.px, self.phix)]
        lines += [f"{t} -> {SqZeroElement(self.target, zero, psi) if any(psi) else '0'}"
                  for t, psi in zip(self.source.tvars, self.psit)]
        return "; ".join(lines)


def apply_hom(f: AlgebraHom, a: SqZeroElement) -> SqZeroElement:
    """f(u, v) = (u(p), sum_j d_j u(p) phi_j + sum_i v_i(p) psi_i)."""
    theta = f.theta_base(a.u)
    image = f.map_infinitesimal(a.v)
    return SqZeroElement(f.target, f.base_map(a.u),
                         tuple(x + y for x, y in zip(theta, image)))


def compose_homs(g: AlgebraHom, f: AlgebraHom) -> AlgebraHom:
    """g o f."""
    px, phix = [], []
    for p, phi in zip(f.px, f.phix):
        image = apply_hom(g, SqZeroElement(f.target, p, phi))
        px.append(image.u)
        phix.append(image.v)
    psit = [g.map_infinitesimal(row) for row in f.psit]
    return AlgebraHom(f.source, g.target, tuple(px), tuple(phix), tuple(psit))


def split_coordinates(D: Splitting) -> AlgebraHom:
    """Phi_D, the automorphism with Phi_D(tau_D(r) + alpha) = (r, alpha)."""
    ring = D.ring
    base = AlgebraHom.identity(ring)
    return AlgebraHom(ring, ring, base.px,
                      tuple(tuple(-c for c in row) for row in D.images), base.psit)


def unsplit_coordinates(D: Splitting) -> AlgebraHom:
    """Inverse of split_coordinates: x_j -> tau_D(x_j)."""
    ring = D.ring
    base = AlgebraHom.identity(ring)
    return AlgebraHom(ring, ring, base.px, D.images, base.psit)
