"""Chain-level Cech assembly over a cover whose opens differ only by their splittings."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .bloch import FWedgeSum, InfBlochSum, delta_inf, logdlog
from .errors import NotExactUpToCap
from .homotopy import splitting_homotopy
from .regulator import li2_first
from .squarezero import RingSpec, Splitting, SqZeroElement
from .symalg import AbsOneForm, Sym3Class, exactness_test

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class CoverSetup:
    """r opens sharing one ring, open i carrying the splitting D_i."""

    splittings: tuple[Splitting, ...]

    def __post_init__(self):
        if len(self.splittings) < 2:
            raise ValueError("a cover needs at least two opens")
        ring = self.splittings[0].ring
        if any(D.ring != ring for D in self.splittings):
            raise ValueError("all splittings of a cover must share one ring")

    @property
    def r(self) -> int:
        return len(self.splittings)

    @property
    def ring(self) -> RingSpec:
        return self.splittings[0].ring

    def pairs(self) -> list[Pair]:
        return [(i, j) for i in range(self.r) for j in range(self.r) if i != j]


class DatumMode(Enum):
    CONSISTENT = "consistent"
    RAW = "raw"


@dataclass(frozen=True)
class CechDatum:
    """Either c_i (then a_ij = c_j - c_i, b_i = delta(c_i)) or explicit a_ij and b_i."""

    mode: DatumMode
    c: tuple[InfBlochSum, ...] = ()
    a: Mapping[Pair, InfBlochSum] = field(default_factory=dict)
    b: tuple[FWedgeSum, ...] = ()

    @classmethod
    def consistent(cls, c: Sequence[InfBlochSum]) -> CechDatum:
        return cls(DatumMode.CONSISTENT, c=tuple(c))

    @classmethod
    def raw(cls, a: Mapping[Pair, InfBlochSum], b: Sequence[FWedgeSum]) -> CechDatum:
        return cls(DatumMode.RAW, a=dict(a), b=tuple(b))

    @property
    def r(self) -> int:
        return len(self.c) if self.mode is DatumMode.CONSISTENT else len(self.b)

    def a_ij(self, i: int, j: int, ring: RingSpec) -> InfBlochSum:
        if self.mode is DatumMode.CONSISTENT:
            return self.c[j] - self.c[i]
        if (i, j) in self.a:
            return self.a[(i, j)]
        if (j, i) in self.a:
            return -self.a[(j, i)]
        return InfBlochSum.zero(ring)

    def b_i(self, i: int) -> FWedgeSum:
        if self.mode is DatumMode.CONSISTENT:
            return delta_inf(self.c[i])
        return self.b[i]


@dataclass
class GammaCocycle:
    """gamma_ij = li2_{tau_i}(a_ij) + h(tau_i, tau_j)(b_j) on ordered pairs."""

    r: int
    gamma: dict[Pair, Sym3Class]

    def defects(self) -> dict[tuple[int, int, int], Sym3Class]:
        """Nonzero gamma_jk - gamma_ik + gamma_ij over triples i < j < k."""
        found = {}
        for i, j, k in itertools.combinations(range(self.r), 3):
            value = self.gamma[(j, k)] - self.gamma[(i, k)] + self.gamma[(i, j)]
            if not value.is_zero:
                found[(i, j, k)] = value
        return found


def _check_sizes(cover: CoverSetup, data: CechDatum) -> None:
    if data.r != cover.r:
        raise ValueError(f"cover has {cover.r} opens but the datum has {data.r}")


def assemble_gamma(cover: CoverSetup, data: CechDatum) -> GammaCocycle:
    _check_sizes(cover, data)
    D = cover.splittings
    gamma = {}
    for i, j in cover.pairs():
        gamma[(i, j)] = li2_first(data.a_ij(i, j, cover.ring), D[i]) + \
            splitting_homotopy(D[i], D[j], data.b_i(j))
    logger.debug("assembled gamma on %d ordered pairs", len(gamma))
    return GammaCocycle(cover.r, gamma)


def verify_cocycle(g: GammaCocycle) -> bool:
    return not g.defects()


# ── Splitting changes and boundaries ─────────────────────────────────

@dataclass
class SplittingChange:
    """gamma' - gamma together with the witness {h(tau_i, tau_i')(b_i)}."""

    difference: dict[Pair, Sym3Class]
    witness: tuple[Sym3Class, ...]
    is_coboundary: bool


def splitting_change_delta(cover: CoverSetup, changed: CoverSetup, data: CechDatum) -> SplittingChange:
    if data.mode is not DatumMode.CONSISTENT:
        raise ValueError("splitting changes are only compared on consistent data")
    if changed.r != cover.r:
        raise ValueError("both covers must have the same number of opens")
    before = assemble_gamma(cover, data).gamma
    after = assemble_gamma(changed, data).gamma
    witness = tuple(
        splitting_homotopy(cover.splittings[i], changed.splittings[i], data.b_i(i))
        for i in range(cover.r)
    )
    difference = {pair: after[pair] - before[pair] for pair in cover.pairs()}
    is_coboundary = all(
        difference[(i, j)] == witness[j] - witness[i] for i, j in cover.pairs()
    )
    return SplittingChange(difference, witness, is_coboundary)


def boundary_to_boundary(cover: CoverSetup, a: Sequence[InfBlochSum]) -> bool:
    """gamma built from a_ij = a_j - a_i, b_i = delta(a_i) is the coboundary of li2_{tau_i}(a_i)."""
    data = CechDatum.consistent(a)
    gamma = assemble_gamma(cover, data).gamma
    local = [li2_first(a_i, D) for a_i, D in zip(a, cover.splittings)]
    return all(gamma[(i, j)] == local[j] - local[i] for i, j in cover.pairs())


# ── Sections of the degree-one part ──────────────────────────────────

@dataclass
class Rho1Report:
    sections: list[AbsOneForm]
    primitives: dict[Pair, SqZeroElement] = field(default_factory=dict)
    failures: dict[Pair, str] = field(default_factory=dict)
    cap: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def rho1_sections(cover: CoverSetup, data: CechDatum, cap: int) -> Rho1Report:
    """logdlog(b_i) per open; pairwise differences must be exact up to the degree cap."""
    _check_sizes(cover, data)
    report = Rho1Report([logdlog(data.b_i(i)) for i in range(cover.r)], cap=cap)
    for i, j in itertools.combinations(range(cover.r), 2):
        difference = report.sections[j] - report.sections[i]
        if data.mode is DatumMode.CONSISTENT:
            expected = logdlog(delta_inf(data.a_ij(i, j, cover.ring)))
            if difference != expected:
                report.failures[(i, j)] = "difference is not logdlog(delta(a_ij))"
                continue
        try:
            report.primitives[(i, j)] = exactness_test(difference, cap)
        except NotExactUpToCap as exc:
            logger.info("pair (%d, %d) not exact: %s", i + 1, j + 1, exc.message)
            report.failures[(i, j)] = exc.message
    return report
