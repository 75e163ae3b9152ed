"""The dilogarithm branch li2 in both constructions, and the pushforward on S^3(I)."""

from __future__ import annotations

import logging

from sympy import QQ

from .bloch import BlochSum, InfBlochSum, as_bloch
from .errors import FlatnessViolation
from .squarezero import AlgebraHom, RingSpec, Splitting, SqZeroElement, is_flat
from .symalg import (
    RelOneForm,
    Sym3Class,
    TruncHom,
    TruncSymElement,
    euler_antiderivative,
    inverse_splitting_transport,
    rel_d,
    split_lift,
    splitting_transport,
    trunc_log_circ,
)

logger = logging.getLogger(__name__)

_MINUS_HALF = QQ(-1, 2)


def _flat_terms(s: BlochSum | InfBlochSum):
    for a, coeff in as_bloch(s).items():
        if not is_flat(a):
            raise FlatnessViolation(str(a))
        yield a, coeff


# ── First construction ──────────────────────────────────────────────

def li2_first(s: BlochSum | InfBlochSum, D: Splitting) -> Sym3Class:
    """[a] -> -1/2 (a~ - tau_D(abar))^3 / (abar^2 (abar - 1)^2)."""
    ring = s.ring
    total = Sym3Class.zero(ring)
    for a, coeff in _flat_terms(s):
        shift = D.derive(a.u)
        w = [v - d for v, d in zip(a.v, shift)]
        if not any(w):
            continue
        denominator = a.u ** 2 * (a.u - 1) ** 2
        total = total + Sym3Class.cube(ring, w) * (ring.ratfunc(coeff) * _MINUS_HALF / denominator)
    return total


def li2_lift_perturbation_check(term: SqZeroElement, j: TruncSymElement,
                                D: Splitting | None = None) -> bool:
    """The first construction is unchanged when the lift of ``term`` moves by j in I~^2."""
    if not j.is_zero and j.min_degree < 2:
        raise ValueError("perturbations must lie in I~^2")
    D = D or Splitting.zero(term.ring)
    base = split_lift(D, term.u)
    scale = (base * base * (base - 1) * (base - 1)).inverse() * _MINUS_HALF
    lifted = TruncSymElement.lift(term)

    def value(lift: TruncSymElement) -> Sym3Class:
        diff = lift - base
        return Sym3Class.from_trunc(diff * diff * diff * scale)

    return value(lifted + j) == value(lifted)


# ── Second construction ─────────────────────────────────────────────

def _dlog(b: TruncSymElement, D: Splitting | None) -> RelOneForm:
    return rel_d(b, D) * b.inverse()


def log_circ_dlog(a: TruncSymElement, D: Splitting | None = None) -> RelOneForm:
    """(log o ^ dlog)((1 - a) ^ a) = log o(1 - a) dlog a - log o(a) dlog(1 - a)."""
    b = 1 - a
    return _dlog(a, D) * trunc_log_circ(b, D) - _dlog(b, D) * trunc_log_circ(a, D)


def _li2_second_term(a: SqZeroElement, D: Splitting) -> Sym3Class:
    lifted = TruncSymElement.lift(a)
    twisted = not D.is_zero
    omega = log_circ_dlog(lifted, D if twisted else None) * -3
    if twisted:
        omega = inverse_splitting_transport(D).apply_form(omega)
    g = euler_antiderivative(omega)
    if twisted:
        g = splitting_transport(D).apply(g)
    return Sym3Class.from_trunc(g)


def li2_second(s: BlochSum | InfBlochSum, D: Splitting) -> Sym3Class:
    """Integrate -3 (log o ^ dlog)(delta) with the Euler antiderivative."""
    ring = s.ring
    total = Sym3Class.zero(ring)
    for a, coeff in _flat_terms(s):
        total = total + _li2_second_term(a, D) * ring.ratfunc(coeff)
    logger.debug("li2_second over %d generators", len(s.terms))
    return total


# ── Pushforward ──────────────────────────────────────────────────────

def d1_pushforward(f: AlgebraHom, c: Sym3Class) -> Sym3Class:
    """S^3(I1) -> S^3(I2) induced by f; the x-parts of f only matter above degree 3."""
    target = f.target
    hom = TruncHom(
        f.source, target,
        tuple(TruncSymElement.constant(target, p) for p in f.px),
        tuple(TruncSymElement.linear(target, row) for row in f.psit),
    )
    return Sym3Class.from_trunc(hom.apply(c.as_trunc()))


# ── The rational identity behind the five-term relation ──────────────

def master_identity() -> Sym3Class:
    """The five cubes whose sum is zero over Q(a, b) with m = 2."""
    ring = RingSpec(("a", "b"), ("t1", "t2"))
    a, b = ring.gens
    terms = [
        ((1, 0), 1, (a * (a - 1)) ** 2),
        ((0, 1), -1, (b * (b - 1)) ** 2),
        ((-b, a), 1, (a * b * (a - b)) ** 2),
        ((b * (b - 1), -a * (a - 1)), -1, (a * b * (a - 1) * (b - 1) * (a - b)) ** 2),
        ((b - 1, 1 - a), 1, ((a - 1) * (b - 1) * (a - b)) ** 2),
    ]
    total = Sym3Class.zero(ring)
    for v, sign, denominator in terms:
        cube = Sym3Class.cube(ring, [ring.ratfunc(c) for c in v])
        total = total + cube * (ring.ratfunc(sign) / denominator)
    return total
