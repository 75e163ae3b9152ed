"""Registry of property suites and the seeded suite runner."""

from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from typing import Callable

from sympy import QQ, factorint

from .algebra import format_poly, matrix_rank, multiplicative_rank
from .bloch import delta_inf, five_term_sum
from .cech import (
    CechDatum,
    CoverSetup,
    assemble_gamma,
    boundary_to_boundary,
    rho1_sections,
    splitting_change_delta,
)
from .errors import GeneratorExhausted, InfiniregError
from .generators import SampleGenerator
from .homotopy import eqhom_sides, homotopy
from .models import PropertySuiteConfig, SampleResult, SuiteReport
from .regulator import (
    li2_first,
    li2_lift_perturbation_check,
    li2_second,
    log_circ_dlog,
    master_identity,
)
from .squarezero import RingSpec, Splitting
from .symalg import TruncSymElement, euler_antiderivative, rel_d

logger = logging.getLogger(__name__)

Inputs = dict[str, str]
SampleFn = Callable[[SampleGenerator, PropertySuiteConfig, Inputs], tuple[bool, dict[str, str]]]


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    run: SampleFn
    symbolic: bool = False  # no randomness; a single sample


# ── Sample functions ─────────────────────────────────────────────────

def _five_term(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    def build():
        x, y = gen.flat_element(), gen.flat_element()
        return x, y, five_term_sum(x, y)

    x, y, s = gen.draw(build)
    D = gen.splitting()
    inputs.update(x=str(x), y=str(y), splitting=str(D))
    value = li2_first(s, D)
    return value.is_zero, {"li2": str(value)}


def _li2_equiv(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    s = gen.draw(gen.inf_bloch)
    D = gen.splitting()
    inputs.update(s=str(s), splitting=str(D))
    first, second = li2_first(s, D), li2_second(s, D)
    return first == second, {"first": str(first), "second": str(second)}


def _eqhom(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    def build():
        f, D1, D2, s = gen.hom(), gen.splitting(), gen.splitting(), gen.inf_bloch()
        return f, D1, D2, s, eqhom_sides(f, D1, D2, s)

    f, D1, D2, s, (lhs, rhs) = gen.draw(build)
    inputs.update(hom=str(f), splitting1=str(D1), splitting2=str(D2), s=str(s))
    return lhs == rhs, {"lhs": str(lhs), "rhs": str(rhs)}


def _lift_indep(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    ring = gen.ring

    def corrections():
        return [gen.correction() for _ in range(ring.n)], [gen.correction() for _ in range(ring.m)]

    def build():
        f, D1, D2, s = gen.hom(), gen.splitting(), gen.splitting(), gen.inf_bloch()
        w = delta_inf(s)
        first, second = corrections(), corrections()
        values = (homotopy(f, D1, D2, w, *first), homotopy(f, D1, D2, w, *second))
        return f, D1, D2, s, first, second, values

    f, D1, D2, s, first, second, (h1, h2) = gen.draw(build)
    inputs.update(hom=str(f), splitting1=str(D1), splitting2=str(D2), s=str(s),
                  corrections1=_format_corrections(first), corrections2=_format_corrections(second))
    return h1 == h2, {"h1": str(h1), "h2": str(h2)}


def _format_corrections(corrections) -> str:
    xs, ts = corrections
    return "x: " + ", ".join(map(str, xs)) + "; t: " + ", ".join(map(str, ts))


def _cech(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    r = 3 + gen.index % 2

    def build():
        cover = CoverSetup(tuple(gen.splitting() for _ in range(r)))
        changed = list(cover.splittings)
        changed[gen.rng.randrange(r)] = gen.splitting(zero_ok=False)
        data = CechDatum.consistent([gen.inf_bloch() for _ in range(r)])
        gamma = assemble_gamma(cover, data)
        change = splitting_change_delta(cover, CoverSetup(tuple(changed)), data)
        return cover, changed, data, gamma, change

    cover, changed, data, gamma, change = gen.draw(build)
    for i, D in enumerate(cover.splittings):
        inputs[f"splitting{i + 1}"] = str(D)
        inputs[f"c{i + 1}"] = str(data.c[i])
    inputs["changed"] = "; ".join(str(D) for D in changed)
    boundary = boundary_to_boundary(cover, data.c)
    rho1 = rho1_sections(cover, data, cfg.cap)
    defects = gamma.defects()
    sides = {
        "cocycle": "ok" if not defects else "; ".join(f"{k}: {v}" for k, v in defects.items()),
        "coboundary": str(change.is_coboundary),
        "boundary": str(boundary),
        "rho1": "ok" if rho1.ok else "; ".join(f"{k}: {v}" for k, v in rho1.failures.items()),
    }
    return not defects and change.is_coboundary and boundary and rho1.ok, sides


def _euler(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    ring = gen.ring
    items = []
    for monom in itertools.product(range(4), repeat=ring.m):
        if 1 <= sum(monom) <= 3 and gen.rng.random() < 0.5:
            items.append((monom, gen.ratfunc()))
    g = TruncSymElement.from_terms(ring, items)
    a = gen.draw(gen.flat_element)
    inputs.update(g=str(g), a=str(a))
    recovered = euler_antiderivative(rel_d(g))
    omega = log_circ_dlog(TruncSymElement.lift(a))
    closed = rel_d(euler_antiderivative(omega)) == omega
    return recovered == g and closed, {"recovered": str(recovered), "closed": str(closed)}


def _welldef(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    term = gen.draw(gen.flat_element)
    j, D = gen.correction(), gen.splitting()
    inputs.update(term=str(term), perturbation=str(j), splitting=str(D))
    ok = li2_lift_perturbation_check(term, j, D)
    return ok, {"unchanged": str(ok)}


def _scaling(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    s = gen.draw(gen.inf_bloch)
    lam = gen.scalar()
    D = Splitting.zero(gen.ring)
    inputs.update(s=str(s), scalar=str(lam))
    lhs = li2_first(s.scaled(lam), D)
    rhs = li2_first(s, D) * lam ** 3
    return lhs == rhs, {"lhs": str(lhs), "rhs": str(rhs)}


_WEDGE_RING = RingSpec(("x",), ("t1",))


def _factor_rank(polys) -> int:
    """Rank through full factorization over Q, factors taken integral and primitive."""
    columns: dict = {}
    rows = []
    for p in polys:
        row: dict = {}
        rest = p
        for f, e in p.factor_list()[1]:
            _, q = f.clear_denoms()
            _, q = q.primitive()
            q = -q if q.LC < 0 else q
            rest = rest.exquo(q ** e)
            row[("poly", str(q))] = row.get(("poly", str(q)), 0) + e
        content = rest.LC
        for prime, e in factorint(abs(int(content.numerator))).items():
            row[("prime", prime)] = row.get(("prime", prime), 0) + e
        for prime, e in factorint(int(content.denominator)).items():
            row[("prime", prime)] = row.get(("prime", prime), 0) - e
        columns.update(dict.fromkeys(row))
        rows.append(row)
    keys = list(columns)
    return matrix_rank([[row.get(k, 0) for k in keys] for row in rows])


_POINTS = (2, 3, 5, 7)  # no grid polynomial vanishes here


def _relation_search(polys, bound: int = 3) -> tuple[int, ...] | None:
    """First exponent vector in [-bound, bound]^k, up to sign, with product of powers equal to +-1."""
    one = polys[0].ring.one
    values = [[p(k) for p in polys] for k in _POINTS]
    for exps in itertools.product(range(-bound, bound + 1), repeat=len(polys)):
        if next((e for e in exps if e), 0) <= 0:
            continue
        if not all(_balanced(row, exps, QQ.one) for row in values):
            continue
        if _balanced(polys, exps, one):
            return exps
    return None


def _balanced(factors, exps, one) -> bool:
    num, den = one, one
    for f, e in zip(factors, exps):
        if e > 0:
            num *= f ** e
        elif e < 0:
            den *= f ** -e
    return num == den or num == -den


def _grid_polys(degree: int, coeffs: tuple[int, ...]) -> list:
    x = _WEDGE_RING.field.ring.gens[0]
    polys = []
    for cs in itertools.product(coeffs, repeat=degree + 1):
        p = sum((c * x ** e for e, c in enumerate(cs)), _WEDGE_RING.field.ring.zero)
        if not p.is_ground:
            polys.append(p)
    return polys


@functools.lru_cache(maxsize=1)
def wedge_grid() -> tuple[tuple, ...]:
    """Every set of one to three nonconstant polynomials of degree <= 2 with coefficients in
    {-1, 0, 1}, then every set of one to four polynomials of degree <= 3 with coefficients in
    {0, 1} that contains a cubic."""
    quadratics = _grid_polys(2, (-1, 0, 1))
    cubics = _grid_polys(3, (0, 1))
    sets = [c for size in (1, 2, 3) for c in itertools.combinations(quadratics, size)]
    sets += [c for size in (1, 2, 3, 4) for c in itertools.combinations(cubics, size)
             if any(p.degree() == 3 for p in c)]
    return tuple(sets)


def check_wedge_set(polys) -> tuple[bool, dict[str, str]]:
    """GCD-free rank equals the factorization rank, and a relation exists exactly when the rank drops."""
    rank = multiplicative_rank(polys)
    reference = _factor_rank(polys)
    # grid exponent vectors have entries <= 3; bound 3 reaches their minimal relations
    relation = _relation_search(polys)
    ok = rank == reference and (rank < len(polys)) == (relation is not None)
    return ok, {
        "polys": ", ".join(format_poly(p) for p in polys),
        "rank": str(rank), "factor_rank": str(reference), "relation": str(relation),
    }


def _wedge_basis(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    grid = wedge_grid()
    shard = grid[gen.index::cfg.samples]
    inputs.update(shard=f"{gen.index} of {cfg.samples}", sets=f"{len(shard)} of {len(grid)}")
    failures = 0
    first: dict[str, str] = {}
    for polys in shard:
        ok, sides = check_wedge_set(polys)
        if not ok:
            failures += 1
            first = first or sides
    return failures == 0, {"checked": str(len(shard)), "failed": str(failures), **first}


def _master_identity(gen: SampleGenerator, cfg: PropertySuiteConfig, inputs: Inputs):
    value = master_identity()
    return value.is_zero, {"sum": str(value)}


SUITES: dict[str, Suite] = {
    "five-term": Suite("five-term", "li2 kills the five-term relation", _five_term),
    "li2-equiv": Suite("li2-equiv", "both li2 constructions agree", _li2_equiv),
    "eqhom": Suite("eqhom", "pushforward defect equals the homotopy", _eqhom),
    "lift-indep": Suite("lift-indep", "h_f does not depend on the lift", _lift_indep),
    "cech": Suite("cech", "cocycle, coboundary, boundary and rho1 checks", _cech),
    "euler": Suite("euler", "Euler antiderivative inverts d", _euler),
    "welldef": Suite("welldef", "li2 ignores lift perturbations", _welldef),
    "scaling": Suite("scaling", "li2 scales cubically", _scaling),
    "wedge-basis": Suite("wedge-basis", "GCD-free rank matches factorization on a fixed grid",
                         _wedge_basis),
    "master-identity": Suite("master-identity", "the five-cube identity", _master_identity,
                             symbolic=True),
}


def get_suite(name: str) -> Suite:
    """Get a suite by name, raising KeyError if not found."""
    return SUITES[name]


def run_suite(cfg: PropertySuiteConfig) -> SuiteReport:
    """Run every sample in index order; generator exhaustion propagates."""
    suite = get_suite(cfg.suite)
    ring = RingSpec.standard(cfg.xvars, cfg.tvars)
    report = SuiteReport(cfg)
    count = 1 if suite.symbolic else cfg.samples
    for index in range(count):
        gen = SampleGenerator(ring, cfg.seed, index, cfg.degree, cfg.height, cfg.retry_cap)
        inputs: Inputs = {}
        try:
            passed, sides = suite.run(gen, cfg, inputs)
        except GeneratorExhausted:
            raise
        except InfiniregError as exc:
            passed, sides = False, {"error": f"{exc.code}: {exc.message}"}
        report.results.append(SampleResult(index, bool(passed), inputs, sides, gen.rejections))
        logger.debug("%s sample %d: %s", cfg.suite, index, "PASS" if passed else "FAIL")
    return report
