"""Lifted homomorphisms, their degree-raising part theta, and the homotopy h_f(tau1, tau2)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from sympy import QQ

from .algebra import RatFunc
from .bloch import (
    BlochSum,
    FWedgeSum,
    InfBlochSum,
    WedgeKind,
    WedgeTerm,
    apply_hom_bloch,
    base_part_vanishes,
    delta,
    delta_inf,
    transport_wedge,
)
from .errors import InvalidCorrectionDegree, NotInfinitesimal
from .regulator import d1_pushforward, li2_first
from .squarezero import (
    AlgebraHom,
    Splitting,
    SqZeroElement,
    compose_homs,
    split_coordinates,
    unsplit_coordinates,
)
from .symalg import Sym3Class, TruncHom, TruncSymElement

logger = logging.getLogger(__name__)

_MINUS_THREE_HALVES = QQ(-3, 2)


@dataclass(frozen=True, eq=False)
class LiftedHom:
    """A lift f-hat of f to the truncated completions.

    f-hat(x_j) = p_j + phi_j + x_corrections[j], f-hat(t_i) = psi_i + t_corrections[i];
    corrections live in t-degrees 2 and 3.
    """

    base: AlgebraHom
    x_corrections: tuple[TruncSymElement, ...]
    t_corrections: tuple[TruncSymElement, ...]

    @cached_property
    def hat(self) -> TruncHom:
        f, target = self.base, self.base.target
        x_images = tuple(
            TruncSymElement.constant(target, p) + TruncSymElement.linear(target, phi) + corr
            for p, phi, corr in zip(f.px, f.phix, self.x_corrections)
        )
        t_images = tuple(
            TruncSymElement.linear(target, psi) + corr
            for psi, corr in zip(f.psit, self.t_corrections)
        )
        return TruncHom(f.source, target, x_images, t_images)


def _check_corrections(corrections: Sequence[TruncSymElement], label: str) -> None:
    for k, corr in enumerate(corrections):
        if not corr.is_zero and corr.min_degree < 2:
            raise InvalidCorrectionDegree(f"{label}[{k}] = {corr} has t-degree below 2")


def lift_hom(f: AlgebraHom,
             x_corrections: Sequence[TruncSymElement] | None = None,
             t_corrections: Sequence[TruncSymElement] | None = None) -> LiftedHom:
    target = f.target
    xs = list(x_corrections or [])
    ts = list(t_corrections or [])
    xs += [TruncSymElement.zero(target)] * (f.source.n - len(xs))
    ts += [TruncSymElement.zero(target)] * (f.source.m - len(ts))
    _check_corrections(xs, "x_corrections")
    _check_corrections(ts, "t_corrections")
    lifted = LiftedHom(f, tuple(xs), tuple(ts))

    # reduction mod I~^2 must give back f on generators
    for j, (p, phi) in enumerate(zip(f.px, f.phix)):
        image = lifted.hat.x_images[j].truncate(1)
        if image != TruncSymElement.lift(SqZeroElement(target, p, phi)):
            raise InvalidCorrectionDegree(f"lift of x_{j} does not reduce to f")
    return lifted


# ── theta ────────────────────────────────────────────────────────────

def _theta_base(L: LiftedHom, r: RatFunc) -> TruncSymElement:
    return L.hat.apply_ratfunc(r).part(1)


def _lift_infinitesimal(L: LiftedHom, alpha: SqZeroElement) -> TruncSymElement:
    return L.hat.apply(TruncSymElement.linear(L.base.source, alpha.v))


def theta_eval(L: LiftedHom, a: RatFunc | SqZeroElement) -> SqZeroElement | TruncSymElement:
    """The +1-degree component of f-hat.

    On Abar it returns an I-element; on an I-element it returns the degree-2 part.
    """
    if isinstance(a, SqZeroElement):
        if not a.is_infinitesimal:
            raise NotInfinitesimal(f"{a} is not in I")
        return _lift_infinitesimal(L, a).part(2)
    return SqZeroElement(L.base.target, L.base.target.field.zero,
                         _theta_base(L, a).linear_coefficients())


def theta_leibniz_check(L: LiftedHom, a: RatFunc, b: RatFunc) -> bool:
    """theta(ab) = fbar(a) theta(b) + theta(a) fbar(b)."""
    f = L.base
    lhs = _theta_base(L, a * b)
    rhs = _theta_base(L, b) * f.base_map(a) + _theta_base(L, a) * f.base_map(b)
    return lhs == rhs


# ── h_theta and h_f ──────────────────────────────────────────────────

def _h_term(L: LiftedHom, term: WedgeTerm) -> TruncSymElement:
    if term.kind is WedgeKind.G1:
        left = _lift_infinitesimal(L, term.left)
        right = _lift_infinitesimal(L, term.right)
        return left.part(1) * right.part(2) - left.part(2) * right.part(1)
    u = term.right.u
    theta_alpha = _lift_infinitesimal(L, term.left).part(2)
    return theta_alpha * _theta_base(L, u) * (-1 / L.base.base_map(u))


def h_theta(L: LiftedHom, w: FWedgeSum) -> Sym3Class:
    """G1(a, b) -> f(a)theta(b) - theta(a)f(b), G2(a, u) -> -theta(a)theta(u)/fbar(u)."""
    if not base_part_vanishes(w):
        raise NotInfinitesimal(f"BASE part of {w} does not vanish")
    target = L.base.target
    total = TruncSymElement.zero(target)
    for term, coeff in w.infinitesimal_part().items():
        total = total + _h_term(L, term) * target.ratfunc(coeff)
    return Sym3Class.from_trunc(total)


def h_f(L: LiftedHom, w: FWedgeSum) -> Sym3Class:
    return h_theta(L, w) * _MINUS_THREE_HALVES


def homotopy_lift(f: AlgebraHom, D1: Splitting, D2: Splitting,
                  x_corrections: Sequence[TruncSymElement] | None = None,
                  t_corrections: Sequence[TruncSymElement] | None = None) -> LiftedHom:
    """Lift of f written in the split coordinates of D1 on the source and D2 on the target."""
    split = compose_homs(split_coordinates(D2), compose_homs(f, unsplit_coordinates(D1)))
    return lift_hom(split, x_corrections, t_corrections)


def homotopy(f: AlgebraHom, D1: Splitting, D2: Splitting, w: FWedgeSum,
             x_corrections: Sequence[TruncSymElement] | None = None,
             t_corrections: Sequence[TruncSymElement] | None = None) -> Sym3Class:
    """h_f(tau_D1, tau_D2)(w) for a wedge sum w in tau0-adapted components."""
    L = homotopy_lift(f, D1, D2, x_corrections, t_corrections)
    return h_f(L, transport_wedge(w, split_coordinates(D1)))


def splitting_homotopy(D1: Splitting, D2: Splitting, w: FWedgeSum) -> Sym3Class:
    """h(tau1, tau2) = h_id(tau1, tau2)."""
    return homotopy(AlgebraHom.identity(D1.ring), D1, D2, w)


def _delta_of(s: BlochSum | InfBlochSum) -> FWedgeSum:
    return delta_inf(s) if isinstance(s, InfBlochSum) else delta(s)


def eqhom_sides(f: AlgebraHom, D1: Splitting, D2: Splitting,
                s: BlochSum | InfBlochSum) -> tuple[Sym3Class, Sym3Class]:
    """Both sides of li2_D2(f s) - f_* li2_D1(s) = h_f(tau1, tau2)(delta s)."""
    lhs = li2_first(apply_hom_bloch(f, s), D2) - d1_pushforward(f, li2_first(s, D1))
    rhs = homotopy(f, D1, D2, _delta_of(s))
    return lhs, rhs


def eqhom_check(f: AlgebraHom, D1: Splitting, D2: Splitting, s: BlochSum | InfBlochSum) -> bool:
    lhs, rhs = eqhom_sides(f, D1, D2, s)
    if lhs != rhs:
        logger.debug("eqhom mismatch: %s != %s", lhs, rhs)
    return lhs == rhs


# ── Closed forms ─────────────────────────────────────────────────────

def exponential_family(alpha: SqZeroElement, a: RatFunc) -> FWedgeSum:
    """(1 + alpha) ^ (1 + a alpha)."""
    return FWedgeSum.from_items(alpha.ring, [(WedgeTerm.g1(alpha, alpha * a), 1)])


def exponential_family_value(L: LiftedHom, alpha: SqZeroElement, a: RatFunc) -> Sym3Class:
    """h_theta on the exponential family: f(alpha)^2 theta(a)."""
    f_alpha = _lift_infinitesimal(L, alpha).part(1)
    return Sym3Class.from_trunc(f_alpha * f_alpha * _theta_base(L, a))


def difference_family(beta: SqZeroElement, b: RatFunc) -> FWedgeSum:
    """(1 + beta/(b-1)) ^ tau0(b) - (1 + beta/b) ^ tau0(b - 1)."""
    return FWedgeSum.from_items(beta.ring, [
        (WedgeTerm.g2(beta * (1 / (b - 1)), b), 1),
        (WedgeTerm.g2(beta * (1 / b), b - 1), -1),
    ])


def difference_family_value(L: LiftedHom, beta: SqZeroElement, b: RatFunc) -> Sym3Class:
    """h_theta on the difference family: f(beta) theta(b)^2 / (B(B-1))^2 with B = fbar(b)."""
    big_b = L.base.base_map(b)
    f_beta = _lift_infinitesimal(L, beta).part(1)
    theta_b = _theta_base(L, b)
    return Sym3Class.from_trunc(f_beta * theta_b * theta_b * (1 / (big_b * (big_b - 1)) ** 2))
