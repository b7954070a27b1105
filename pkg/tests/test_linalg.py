"""Tests for generic exact linear algebra."""

import random
from fractions import Fraction

from mtlab import linalg, padic
from mtlab.linalg import QQ


def test_rref_and_rank():
    rows = [[Fraction(1), Fraction(2), Fraction(3)],
            [Fraction(2), Fraction(4), Fraction(6)],
            [Fraction(0), Fraction(1), Fraction(1)]]
    red, pivots = linalg.rref(rows, QQ)
    assert pivots == [0, 1]
    assert linalg.rank(rows, QQ) == 2


def test_kernel_basis_rational():
    rows = [[Fraction(1), Fraction(2), Fraction(3)],
            [Fraction(0), Fraction(1), Fraction(1)]]
    basis = linalg.kernel_basis(rows, 3, QQ)
    assert len(basis) == 1
    for vec in basis:
        assert all(x == 0 for x in linalg.mat_vec(rows, vec))


def test_solve_and_invert():
    rows = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    x = linalg.solve(rows, [Fraction(3), Fraction(2)], QQ)
    assert x == [Fraction(1), Fraction(1)]
    inv = linalg.invert(rows, QQ)
    assert linalg.mat_mat(rows, inv) == [[1, 0], [0, 1]]
    singular = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert linalg.invert(singular, QQ) is None
    assert linalg.solve(singular, [Fraction(1), Fraction(3)], QQ) is None


def test_kernel_over_finite_field():
    F = padic.FF(3, [0, 1])
    rows = [[F.element(1), F.element(2), F.element(0)],
            [F.element(2), F.element(1), F.element(1)]]
    basis = linalg.kernel_basis(rows, 3, F)
    assert len(basis) == 1
    for vec in basis:
        assert all(x.is_zero() for x in linalg.mat_vec(rows, vec))


def test_charpoly_companion():
    # companion matrix of x^3 - 2x - 5
    rows = [[Fraction(0), Fraction(0), Fraction(5)],
            [Fraction(1), Fraction(0), Fraction(2)],
            [Fraction(0), Fraction(1), Fraction(0)]]
    cp = linalg.charpoly_rational(rows)
    assert cp == [Fraction(-5), Fraction(-2), Fraction(0), Fraction(1)]


def test_factor_rational_poly():
    # (x - 1)^2 (x^2 + 1)
    coeffs = [Fraction(c) for c in [1, -2, 2, -2, 1]]
    factors = linalg.factor_rational_poly(coeffs)
    assert factors == [([Fraction(-1), Fraction(1)], 2),
                       ([Fraction(1), Fraction(0), Fraction(1)], 1)]


def test_minpoly_of_matrix_action():
    rows = [[Fraction(0), Fraction(0), Fraction(5)],
            [Fraction(1), Fraction(0), Fraction(2)],
            [Fraction(0), Fraction(1), Fraction(0)]]
    start = [Fraction(1), Fraction(0), Fraction(0)]
    coeffs, krylov = linalg.minpoly_of_matrix_action(
        lambda v: linalg.mat_vec(rows, v), start, QQ)
    assert coeffs == [Fraction(-5), Fraction(-2), Fraction(0), Fraction(1)]
    assert len(krylov) == 3


def test_random_kernel_dimension_consistency():
    rng = random.Random(99)
    for _ in range(20):
        nrows = rng.randrange(1, 6)
        ncols = rng.randrange(1, 6)
        rows = [[Fraction(rng.randrange(-3, 4)) for _ in range(ncols)]
                for _ in range(nrows)]
        r = linalg.rank(rows, QQ)
        basis = linalg.kernel_basis(rows, ncols, QQ)
        assert r + len(basis) == ncols
        for vec in basis:
            assert all(x == 0 for x in linalg.mat_vec(rows, vec))
