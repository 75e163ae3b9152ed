"""Tests for exact rational-function arithmetic, linear algebra and GCD-free bases."""

import pytest
from sympy import QQ

from infinireg.algebra import (
    format_poly,
    format_ratfunc,
    gcd_free_basis,
    invert,
    linear_solve_exact,
    make_field,
    matrix_rank,
    multiplicative_rank,
    partial_derivative,
    ratfunc_arith,
    ratfunc_key,
    substitute,
    to_rational,
)
from infinireg.errors import DenominatorVanishes, DivisionByZeroError


def _field():
    return make_field(("x", "y"))


class TestRationals:
    def test_to_rational_from_string(self):
        assert to_rational("3/2") == QQ(3, 2)
        assert to_rational("-4") == QQ(-4)

    def test_to_rational_from_int(self):
        assert to_rational(7) == QQ(7)


class TestRatFuncArith:
    def test_basic_ops(self):
        F = _field()
        x, y = F.gens
        assert ratfunc_arith(x, y, "add") == x + y
        assert ratfunc_arith(x, y, "mul") == x * y
        assert ratfunc_arith(x, y, "div") == x / y

    def test_divide_by_zero(self):
        F = _field()
        with pytest.raises(DivisionByZeroError):
            ratfunc_arith(F.gens[0], F.zero, "div")

    def test_unknown_op(self):
        F = _field()
        with pytest.raises(ValueError):
            ratfunc_arith(F.one, F.one, "pow")

    def test_invert_zero(self):
        with pytest.raises(DivisionByZeroError):
            invert(_field().zero)

    def test_partial_derivative_quotient_rule(self):
        F = _field()
        x, y = F.gens
        assert partial_derivative(x / (x + y), 0) == y / (x + y) ** 2
        assert partial_derivative(x / (x + y), 1) == -x / (x + y) ** 2


class TestSubstitute:
    def test_substitute_composes(self):
        F = _field()
        x, y = F.gens
        assert substitute(x / (y - 1), [y, x ** 2], F) == y / (x ** 2 - 1)

    def test_denominator_vanishes(self):
        F = _field()
        x, y = F.gens
        with pytest.raises(DenominatorVanishes):
            substitute(1 / (x - y), [x, x], F)


class TestFormatting:
    def test_format_poly(self):
        R = make_field(("x",)).ring
        x = R.gens[0]
        assert format_poly(x ** 2 - QQ(3, 2) * x + 1) == "x^2 - 3/2*x + 1"

    def test_format_ratfunc_normalizes_denominator(self):
        F = make_field(("x",))
        x = F.gens[0]
        assert format_ratfunc(2 / (2 * x - 2)) == "(1)/(x - 1)"

    def test_key_is_canonical(self):
        F = make_field(("x",))
        x = F.gens[0]
        assert ratfunc_key((x ** 2 - 1) / (x - 1)) == ratfunc_key(x + 1)


class TestLinearAlgebra:
    def test_solve(self):
        assert linear_solve_exact([[1, 1], [1, -1]], [3, 1]) == [QQ(2), QQ(1)]

    def test_inconsistent(self):
        assert linear_solve_exact([[1, 1], [2, 2]], [1, 3]) is None

    def test_rank(self):
        assert matrix_rank([[1, 2], [2, 4]]) == 1
        assert matrix_rank([[1, 0], [0, 1]]) == 2


class TestGcdFreeBasis:
    def test_pairwise_coprime(self):
        R = make_field(("x",)).ring
        x = R.gens[0]
        basis = gcd_free_basis([x ** 2 - 1, x * (x - 1), 2 * x])
        for i, a in enumerate(basis.elements):
            for b in basis.elements[i + 1:]:
                assert a.gcd(b).is_ground
        assert 2 in basis.primes

    def test_reconstruct(self):
        R = make_field(("x",)).ring
        x = R.gens[0]
        inputs = [6 * (x ** 2 - 1), -(x - 1) ** 2, QQ(1, 3) * x]
        basis = gcd_free_basis(inputs)
        for k, p in enumerate(inputs):
            assert basis.reconstruct(k) == p

    def test_decompose_outside_basis(self):
        R = make_field(("x",)).ring
        x = R.gens[0]
        basis = gcd_free_basis([x - 1])
        with pytest.raises(ValueError):
            basis.decompose(x + 1)

    def test_multiplicative_rank(self):
        R = make_field(("x",)).ring
        x = R.gens[0]
        # (x^2 - 1) = (x - 1)(x + 1), so three inputs span rank 2
        assert multiplicative_rank([x - 1, x + 1, x ** 2 - 1]) == 2
        assert multiplicative_rank([x, x - 1]) == 2
