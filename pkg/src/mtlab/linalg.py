"""Exact linear algebra over generic fields, plus rational charpoly tools.

Gaussian elimination routines are parameterized by a field adapter exposing
zero() and one(); elements must support +, -, *, / and an is_zero test
(either an is_zero() method or comparison with 0).  This serves Fraction
matrices, finite fields and number fields with one code path.

Characteristic polynomials and factorization over Q go through sympy.
Polynomials are coefficient lists in increasing degree, matching polyq.
"""

from fractions import Fraction

import sympy


class _RationalField:
    """Field adapter for Fraction matrices."""

    @staticmethod
    def zero():
        return Fraction(0)

    @staticmethod
    def one():
        return Fraction(1)


QQ = _RationalField()


def is_zero(x):
    method = getattr(x, "is_zero", None)
    if method is not None:
        return method()
    return x == 0


def rref(rows, field):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if not is_zero(mat[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = field.one() / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not is_zero(mat[i][c]):
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def kernel_basis(rows, ncols, field):
    """Basis of the right kernel of the matrix given by rows."""
    red, pivots = rref(rows, field)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [field.zero()] * ncols
        vec[fc] = field.one()
        for r, pc in zip(red, pivots):
            vec[pc] = -r[fc]
        basis.append(vec)
    return basis


def solve(rows, rhs, field):
    """One solution x of A x = b, or None if inconsistent."""
    if not rows:
        return [] if all(is_zero(b) for b in rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero()] * ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[ncols]
    return x


def invert(rows, field):
    """Inverse of a square matrix, or None if singular."""
    n = len(rows)
    aug = [list(r) + [field.one() if i == j else field.zero()
                      for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug, field)
    if pivots != list(range(n)):
        return None
    return [r[n:] for r in red]


def mat_vec(rows, vec):
    out = []
    for r in rows:
        acc = None
        for a, b in zip(r, vec):
            term = a * b
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def mat_mat(a, b):
    bt = list(zip(*b))
    return [[_dot(r, col) for col in bt] for r in a]


def _dot(r, col):
    acc = None
    for x, y in zip(r, col):
        term = x * y
        acc = term if acc is None else acc + term
    return acc


def rank(rows, field):
    red, pivots = rref(rows, field)
    return len(pivots)


def charpoly_rational(rows):
    """Characteristic polynomial of a Fraction matrix, lowest degree first."""
    n = len(rows)
    m = sympy.Matrix(n, n, lambda i, j: sympy.Rational(rows[i][j]))
    coeffs = m.charpoly().all_coeffs()
    return [Fraction(int(c.p), int(c.q)) for c in reversed(coeffs)]


def factor_rational_poly(coeffs):
    """Monic irreducible factors over Q with multiplicities.

    Input and output polynomials are Fraction lists in increasing degree.
    """
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c) * x ** i for i, c in enumerate(coeffs))
    _, factors = sympy.factor_list(sympy.Poly(expr, x))
    out = []
    for poly, mult in factors:
        cs = [Fraction(int(c.p), int(c.q))
              for c in reversed(sympy.Poly(poly, x).all_coeffs())]
        lead = cs[-1]
        cs = [c / lead for c in cs]
        out.append((cs, int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return out


def minpoly_of_matrix_action(apply_op, start, field):
    """Minimal polynomial of an operator on the cyclic space generated by start.

    apply_op maps a vector to a vector.  Returns (coeffs, krylov) where
    coeffs is monic in increasing degree and krylov lists the vectors
    start, A start, ..., A^(d-1) start.
    """
    krylov = [list(start)]
    while True:
        nxt = apply_op(krylov[-1])
        # try to express nxt in the span of krylov
        rows = list(zip(*krylov))
        sol = solve([list(r) for r in rows], nxt, field)
        if sol is not None:
            coeffs = [-c for c in sol] + [field.one()]
            return coeffs, krylov
        krylov.append(nxt)
