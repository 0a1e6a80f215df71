"""Exact linear algebra kernel: the foundation everything else trusts."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli import linalg


def test_mat_pow_matches_repeated_multiplication():
    m = [[2, 1], [1, 3]]
    expected = m
    for k in range(2, 8):
        expected = linalg.mat_mul(expected, m)
        assert linalg.mat_pow(m, k) == expected


def test_mat_pow_identity():
    assert linalg.mat_pow([[5, 1], [0, 2]], 0) == [[1, 0], [0, 1]]


def test_char_poly_companion_matrix():
    # companion of z^3 - 4z^2 + z - 7
    m = [[4, -1, 7], [1, 0, 0], [0, 1, 0]]
    assert linalg.char_poly(m) == [1, -4, 1, -7]


def test_char_poly_roots_annihilate():
    m = [[2, 0], [2, 3]]
    coeffs = linalg.char_poly(m)
    assert linalg.poly_eval(coeffs, 2) == 0
    assert linalg.poly_eval(coeffs, 3) == 0
    assert linalg.poly_eval(coeffs, 5) != 0


def test_kernel_basis_rank_one():
    m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    basis = linalg.kernel_basis(m)
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + 2 * v[1] == 0


def test_solve_exact_consistent_and_inconsistent():
    a = [[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]]
    assert linalg.solve_exact(a, [Fraction(3), Fraction(6)]) is not None
    assert linalg.solve_exact(a, [Fraction(3), Fraction(7)]) is None


def test_solve_square_fraction_and_float():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    x = linalg.solve_square(a, [Fraction(5), Fraction(10)])
    assert [sum(r * v for r, v in zip(row, x)) for row in a] == [5, 10]
    xf = linalg.solve_square([[2.0, 1.0], [1.0, 3.0]], [5.0, 10.0])
    assert abs(xf[0] - 1.0) < 1e-12 and abs(xf[1] - 3.0) < 1e-12


def test_positive_divisors():
    assert linalg.positive_divisors(12) == [1, 2, 3, 4, 6, 12]
    assert linalg.positive_divisors(-12) == [1, 2, 3, 4, 6, 12]


def test_lp_nonneg_solve_feasible_returns_witness():
    a = [[Fraction(2), Fraction(1)], [Fraction(0), Fraction(1)]]
    y, cert = linalg.lp_nonneg_solve(a, [Fraction(5), Fraction(1)])
    assert cert is None
    assert all(v >= 0 for v in y)
    assert [sum(r * v for r, v in zip(row, y)) for row in a] == [5, 1]


def test_lp_nonneg_solve_infeasible_returns_farkas_certificate():
    # y >= 0 cannot satisfy y1 + y2 = -1
    a = [[Fraction(1), Fraction(1)]]
    y, cert = linalg.lp_nonneg_solve(a, [Fraction(-1)])
    assert y is None
    # z with z^T A <= 0 and z^T b > 0 refutes feasibility
    assert cert is not None
    lhs = [sum(cert[i] * a[i][j] for i in range(1)) for j in range(2)]
    assert all(v <= 0 for v in lhs)
    assert cert[0] * Fraction(-1) > 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3),
                min_size=3, max_size=3),
       st.lists(st.integers(0, 9), min_size=3, max_size=3))
def test_lp_nonneg_solve_never_lies(rows, target):
    a = [[Fraction(x) for x in row] for row in rows]
    b = [Fraction(x) for x in target]
    y, cert = linalg.lp_nonneg_solve(a, b)
    if y is not None:
        assert all(v >= 0 for v in y)
        assert [sum(r * v for r, v in zip(row, y)) for row in a] == b
    else:
        lhs = [sum(cert[i] * a[i][j] for i in range(3)) for j in range(3)]
        assert all(v <= 0 for v in lhs)
        assert sum(c * t for c, t in zip(cert, b)) > 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2),
                min_size=2, max_size=2))
def test_char_poly_trace_and_determinant(rows):
    coeffs = linalg.char_poly(rows)
    tr = rows[0][0] + rows[1][1]
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    assert coeffs == [1, -tr, det]
