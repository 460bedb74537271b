import itertools
from math import gcd

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from torsionfree.exactla import (
    IntMatrix,
    NonPrimeModulus,
    check_prime,
    complete_basis,
    int_det,
    int_kernel,
    int_solve,
    invariant_factors,
    inverse,
    kernel_basis,
    rank,
    rref,
    smith_normal_form,
    solve,
)

from conftest import brute_vectors


def minor_rank(m, p):
    """Largest k with a nonzero k x k minor mod p (sympy determinants)."""
    r, c = m.shape
    for k in range(min(r, c), 0, -1):
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                if sympy.Matrix(m[np.ix_(rows, cols)].tolist()).det() % p:
                    return k
    return 0


def determinantal_factors(m):
    """Invariant factors from gcds of k x k minors."""
    r, c = len(m), len(m[0]) if m else 0
    divisors = [1]
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = gcd(g, int(sympy.Matrix([[m[i][j] for j in cols] for i in rows]).det()))
        divisors.append(g)
    out = []
    for k in range(1, len(divisors)):
        out.append(0 if divisors[k] == 0 else divisors[k] // divisors[k - 1])
    return out


fp_matrices = st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.lists(st.integers(0, t[0] - 1), min_size=t[1] * t[2],
                                                max_size=t[1] * t[2]).map(
        lambda xs, r=t[1], c=t[2]: np.array(xs, dtype=np.int64).reshape(r, c))))


def test_rref_examples():
    red, r, piv = rref(np.array([[1, 1], [1, 1]]), 2)
    assert (r, piv) == (1, [0])
    red, r, _ = rref(np.eye(3, dtype=np.int64), 3)
    assert r == 3 and np.array_equal(red, np.eye(3))
    # determinant 1 - 4 = -3 vanishes mod 3
    assert sympy.Matrix([[1, 2], [2, 1]]).det() % 3 == 0
    assert rank(np.array([[1, 2], [2, 1]]), 3) == 1


def test_kernel_and_solve_examples():
    k = kernel_basis(np.array([[1, 1], [0, 0]]), 2)
    assert k.shape == (2, 1) and np.array_equal(k[:, 0], [1, 1])
    assert kernel_basis(np.array([[1, 1], [0, 1]]), 2).shape[1] == 0
    assert kernel_basis(np.zeros((2, 3), np.int64), 2).shape[1] == 3
    assert np.array_equal(solve(np.eye(3, dtype=np.int64), np.array([2, 0, 1]), 3), [2, 0, 1])
    x = solve(np.array([[1, 1]]), np.array([1]), 2)
    assert int(x.sum()) % 2 == 1
    assert solve(np.zeros((2, 2), np.int64), np.array([1, 0]), 3) is None


def test_nonprime_rejected():
    with pytest.raises(NonPrimeModulus):
        check_prime(4)
    with pytest.raises(NonPrimeModulus):
        check_prime(65537)
    assert check_prime(65521) == 65521


@given(fp_matrices)
def test_rank_matches_minor_oracle(pm):
    p, m = pm
    assert rank(m, p) == minor_rank(m, p)


@given(fp_matrices)
def test_rank_nullity_and_kernel(pm):
    p, m = pm
    k = kernel_basis(m, p)
    assert rank(m, p) + k.shape[1] == m.shape[1]
    assert not np.any(m @ k % p)
    # brute force: kernel size is p^(cols - rank)
    vecs = brute_vectors(p, m.shape[1])
    assert sum(1 for v in vecs if not np.any(m @ v % p)) == p ** k.shape[1]


@given(fp_matrices, st.data())
def test_solve_coherent_with_kernel(pm, data):
    p, m = pm
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1], max_size=m.shape[1])))
    b = m @ x0 % p
    x = solve(m, b, p)
    assert x is not None and np.array_equal(m @ x % p, b)
    for v in kernel_basis(m, p).T:
        assert np.array_equal(m @ ((x + v) % p) % p, b)


@given(fp_matrices)
def test_rref_is_reduced(pm):
    p, m = pm
    red, r, piv = rref(m, p)
    assert len(piv) == r
    for i, c in enumerate(piv):
        col = red[:, c] % p
        assert col[i] == 1 and col.sum() % p == 1 and np.count_nonzero(col) == 1
    # row space preserved
    assert rank(np.concatenate([m, red]), p) == r


@given(fp_matrices)
def test_complete_basis_and_inverse(pm):
    p, m = pm
    from torsionfree.exactla import column_space
    u = column_space(m, p)
    b, binv = complete_basis(u, p)
    n = m.shape[0]
    assert np.array_equal(b @ binv % p, np.eye(n, dtype=np.int64))
    assert np.array_equal(b[:, : u.shape[1]], u)
    assert np.array_equal(inverse(b, p), binv % p)


def test_snf_examples():
    assert invariant_factors(IntMatrix([[2, 0], [0, 3]])) == [1, 6]
    assert invariant_factors(IntMatrix([[6]])) == [6]
    assert invariant_factors(IntMatrix.zeros(2, 3)) == [0, 0]


int_matrices = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda rc: st.lists(st.lists(st.integers(-20, 20), min_size=rc[1], max_size=rc[1]),
                        min_size=rc[0], max_size=rc[0]))


@given(int_matrices)
def test_snf_certificate_and_oracle(rows):
    m = IntMatrix(rows)
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(int_det(u)) == 1 and abs(int_det(v)) == 1
    diag = [d[i][i] for i in range(min(d.rows, d.cols))]
    assert all(d[i][j] == 0 for i in range(d.rows) for j in range(d.cols) if i != j)
    assert all(x >= 0 for x in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1) if diag[i])
    assert diag == determinantal_factors(rows)


@given(int_matrices)
def test_int_kernel_and_solve(rows):
    m = IntMatrix(rows)
    k = int_kernel(m)
    z = m @ k
    assert all(x == 0 for r in z for x in r)
    b = [sum(r) for r in rows]
    x = int_solve(m, b)
    assert x is not None and [sum(a * y for a, y in zip(r, x)) for r in rows] == b


big_int_matrices = st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(
    lambda rc: st.lists(st.lists(st.integers(-50, 50), min_size=rc[1], max_size=rc[1]),
                        min_size=rc[0], max_size=rc[0]))


@given(big_int_matrices)
def test_snf_certificate_up_to_6x6(rows):
    m = IntMatrix(rows)
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(int_det(u)) == 1 and abs(int_det(v)) == 1


def test_snf_entry_growth_regression():
    # used to blow up entries without bound in the elimination loop
    m = IntMatrix([[10, -26, -6, -1, -8, -38], [35, -12, -50, 29, -49, -26], [-12, 35, 21, 12, -3, 14],
                   [38, 41, 26, 1, -28, -36], [-13, 14, -32, 14, 33, 30]])
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert invariant_factors(m) == determinantal_factors([list(r) for r in m])
