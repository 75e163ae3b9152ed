"""Exact arithmetic over Q: rational functions, substitution, linear solving, GCD-free bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from sympy import QQ, factorint
from sympy.polys.fields import FracElement, FracField
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement

from .errors import DenominatorVanishes, DivisionByZeroError

Poly = PolyElement
RatFunc = FracElement
Rational = Any  # a QQ domain element


def make_field(names: Sequence[str]) -> FracField:
    """Rational function field Q(names) in graded-lex order (sympy caches it per names)."""
    return FracField(tuple(names), QQ, grlex)


def to_rational(value) -> Rational:
    """Coerce ints, ``p/q`` strings and QQ elements to a QQ element."""
    if isinstance(value, str):
        num, _, den = value.strip().partition("/")
        return QQ(int(num), int(den or 1))
    return QQ.convert(value)


# ── Field operations ───────────────────────────────────────────────

_OPS: dict[str, Callable[[RatFunc, RatFunc], RatFunc]] = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
}


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Apply ``op`` in {add, sub, mul, div}; division by zero raises."""
    if op == "div":
        if not b:
            raise DivisionByZeroError(f"division of {format_ratfunc(a)} by zero")
        return a / b
    try:
        return _OPS[op](a, b)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def invert(a: RatFunc) -> RatFunc:
    if not a:
        raise DivisionByZeroError("zero is not a unit")
    return 1 / a


def partial_derivative(f: RatFunc, j: int) -> RatFunc:
    """Quotient-rule derivative with respect to the j-th generator (0-based)."""
    return f.diff(f.field.gens[j])


def evaluate_poly(poly: Poly, values: Sequence, one):
    """Evaluate ``poly`` at ``values`` in any commutative ring with unit ``one``.

    The ring elements must support ``+``, ``*`` and multiplication by QQ scalars.
    """
    powers: list[list] = [[one] for _ in values]
    total = one * 0
    for monom, coeff in poly.terms():
        term = one * coeff
        for j, e in enumerate(monom):
            if not e:
                continue
            cache = powers[j]
            while len(cache) <= e:
                cache.append(cache[-1] * values[j])
            term = term * cache[e]
        total = total + term
    return total


def substitute(r: RatFunc, values: Sequence[RatFunc], target: FracField) -> RatFunc:
    """Compose r with x_j -> values[j] in the target field."""
    num = evaluate_poly(r.numer, values, target.one)
    den = evaluate_poly(r.denom, values, target.one)
    if not den:
        raise DenominatorVanishes(format_poly(r.denom))
    return num / den


# ── Canonical text and keys ─────────────────────────────────────────

def monic_parts(r: RatFunc) -> tuple[Poly, Poly]:
    """Numerator and denominator scaled so the denominator has graded-lex leading coefficient 1."""
    lc = r.denom.LC
    return r.numer.quo_ground(lc), r.denom.quo_ground(lc)


def ratfunc_key(r: RatFunc) -> tuple:
    num, den = monic_parts(r)
    return (tuple(sorted(num.terms())), tuple(sorted(den.terms())))


def format_rational(q: Rational) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_monomial(monom: tuple[int, ...], names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, monom):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_poly(p: Poly) -> str:
    """Render as e.g. ``x1^2*x2 - 3/2*x1 + 1`` in graded-lex order."""
    if not p:
        return "0"
    names = [str(s) for s in p.ring.symbols]
    pieces = []
    for monom, coeff in p.terms():
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        mono = format_monomial(monom, names)
        if not mono:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{format_rational(magnitude)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def format_ratfunc(r: RatFunc) -> str:
    num, den = monic_parts(r)
    if den == 1:
        return format_poly(num)
    return f"({format_poly(num)})/({format_poly(den)})"


# ── Exact linear algebra ────────────────────────────────────────────

def linear_solve_exact(matrix: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Solve ``matrix @ x = rhs`` over Q; free unknowns are set to zero.

    Returns None when the system is inconsistent.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return []
    augmented = [
        [QQ.convert(entry) for entry in row] + [QQ.convert(b)]
        for row, b in zip(matrix, rhs)
    ]
    reduced, pivots = DomainMatrix(augmented, (rows, cols + 1), QQ).rref()
    if cols in pivots:
        return None
    entries = reduced.to_list()
    solution = [QQ.zero] * cols
    for row, col in enumerate(pivots):
        solution[col] = entries[row][cols]
    return solution


def matrix_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows or not rows[0]:
        return 0
    data = [[QQ.convert(e) for e in row] for row in rows]
    return DomainMatrix(data, (len(data), len(data[0])), QQ).rank()


# ── GCD-free basis ──────────────────────────────────────────────────

def _primitive(p: Poly) -> Poly:
    """Integer-coefficient primitive associate with positive leading coefficient."""
    _, q = p.clear_denoms()
    _, q = q.primitive()
    return -q if q.LC < 0 else q


def _degree(p: Poly) -> int:
    return max(sum(m) for m in p.monoms())


def _refine(basis: list[Poly], pending: list[Poly]) -> None:
    while pending:
        q = pending.pop()
        if q.is_ground:
            continue
        for i, b in enumerate(basis):
            g = b.gcd(q)
            if not g.is_ground:
                del basis[i]
                pending.extend([
                    _primitive(g),
                    _primitive(b.exquo(g)),
                    _primitive(q.exquo(g)),
                ])
                break
        else:
            basis.append(q)


def _split_constant(c: Rational) -> dict[int, int]:
    exps: dict[int, int] = {}
    for prime, e in factorint(abs(int(c.numerator))).items():
        exps[prime] = exps.get(prime, 0) + e
    for prime, e in factorint(int(c.denominator)).items():
        exps[prime] = exps.get(prime, 0) - e
    return exps


@dataclass
class GcdFreeBasis:
    """Pairwise coprime square-free polynomials plus rational primes.

    ``exponents[k]`` is the vector of ``inputs[k]`` over ``primes + elements``
    and ``signs[k]`` its sign, so that every input equals
    sign * prod(primes^e) * prod(elements^e).
    """

    elements: list[Poly]
    primes: list[int]
    inputs: list[Poly] = field(default_factory=list)
    exponents: list[tuple[int, ...]] = field(default_factory=list)
    signs: list[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.primes) + len(self.elements)

    def decompose(self, p: Poly) -> tuple[int, tuple[int, ...]]:
        """Sign and exponent vector of p; ValueError if p does not factor over the basis."""
        if not p:
            raise ValueError("zero has no factorization")
        rest = p
        poly_exps = []
        for b in self.elements:
            e = 0
            while True:
                q, r = divmod(rest, b)
                if r:
                    break
                rest, e = q, e + 1
            poly_exps.append(e)
        if not rest.is_ground:
            raise ValueError(f"{format_poly(p)} does not factor over the basis")
        constant = rest.LC
        prime_exps = _split_constant(constant)
        if any(prime not in self.primes for prime, e in prime_exps.items() if e):
            raise ValueError(f"constant {format_rational(constant)} does not factor over the primes")
        vector = tuple(prime_exps.get(prime, 0) for prime in self.primes) + tuple(poly_exps)
        return (-1 if constant < 0 else 1), vector

    def ratfunc_vector(self, r: RatFunc) -> tuple[int, ...]:
        """Exponent vector of a nonzero rational function (numerator minus denominator)."""
        _, num = self.decompose(r.numer)
        _, den = self.decompose(r.denom)
        return tuple(a - b for a, b in zip(num, den))

    def reconstruct(self, k: int) -> Poly:
        ring = self.inputs[k].ring
        vector = self.exponents[k]
        result = ring.one * self.signs[k]
        for prime, e in zip(self.primes, vector):
            result = result * QQ(prime) ** e if e >= 0 else result.quo_ground(QQ(prime) ** -e)
        for b, e in zip(self.elements, vector[len(self.primes):]):
            result = result * b ** e
        return result


def gcd_free_basis(inputs: Sequence[Poly]) -> GcdFreeBasis:
    """Coprime square-free refinement of nonzero polynomials over Q."""
    basis: list[Poly] = []
    primes: set[int] = set()
    for p in inputs:
        if not p:
            raise ValueError("gcd_free_basis inputs must be nonzero")
        _, factors = p.sqf_list()
        _refine(basis, [_primitive(f) for f, _ in factors if not f.is_ground])

    basis.sort(key=lambda b: (_degree(b), format_poly(b)))
    result = GcdFreeBasis(elements=basis, primes=[])
    # prime support of the leftover constants
    for p in inputs:
        rest = p
        for b in basis:
            while True:
                q, r = divmod(rest, b)
                if r:
                    break
                rest = q
        primes.update(prime for prime, e in _split_constant(rest.LC).items() if e)
    result.primes = sorted(primes)

    for p in inputs:
        sign, vector = result.decompose(p)
        result.inputs.append(p)
        result.exponents.append(vector)
        result.signs.append(sign)
    return result


def multiplicative_rank(polys: Sequence[Poly]) -> int:
    """Rank of the subgroup generated by ``polys`` in the unit group tensored with Q."""
    basis = gcd_free_basis(polys)
    return matrix_rank([list(v) for v in basis.exponents])
