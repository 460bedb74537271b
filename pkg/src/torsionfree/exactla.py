"""Exact dense linear algebra over prime fields and over the integers.

Matrices over F_p are plain ``numpy`` int64 arrays with entries in ``[0, p)``;
the :class:`FpMatrix` wrapper exists for callers that want the modulus carried
along with the data.  Integer matrices for the Smith normal form are nested
lists of Python ints so that intermediate values never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

MAX_PRIME = 1 << 16


class NonPrimeModulus(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not _is_prime(int(p)):
        raise NonPrimeModulus(f"modulus {p!r} is not prime")
    if p >= MAX_PRIME:
        raise NonPrimeModulus(f"modulus {p} exceeds the supported bound 2**16")
    return int(p)


def as_fp(m, p: int) -> np.ndarray:
    """Return ``m`` as an int64 array reduced mod ``p`` (always a fresh copy)."""
    a = np.array(m, dtype=np.int64)
    return np.mod(a, p)


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # entries < 2**16 and inner dims stay far below 2**31, so int64 cannot overflow
    return (a @ b) % p


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form with first-nonzero pivoting.

    Returns ``(reduced, rank, pivot_columns)``.
    """
    a = as_fp(m, p)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def rank(m: np.ndarray, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return rref(m, p)[1]


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right null space, returned as the columns of a matrix."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    red, rk, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for i, pc in enumerate(piv):
            basis[pc, j] = (-red[i, fc]) % p
    return basis


def solve(m: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """A particular solution of ``m @ x = b`` or ``None`` if inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (solved column-wise,
    returning ``None`` if any column is inconsistent).
    """
    m = np.asarray(m, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    if bb.shape[0] != m.shape[0]:
        raise ValueError(f"dimension mismatch: matrix has {m.shape[0]} rows, rhs has {bb.shape[0]}")
    cols = m.shape[1]
    if m.shape[0] == 0:
        x = np.zeros((cols, bb.shape[1]), dtype=np.int64)
        return x[:, 0] if vec else x
    aug = np.concatenate([m % p, bb % p], axis=1)
    red, rk, piv = rref(aug, p)
    if any(c >= cols for c in piv):
        return None
    x = np.zeros((cols, bb.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = red[i, cols:]
    return x[:, 0] if vec else x


def column_space(m: np.ndarray, p: int) -> np.ndarray:
    """A basis (as columns) of the column space of ``m``."""
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=np.int64)
    red, rk, _ = rref(m.T, p)
    return red[:rk].T.copy()


def complete_basis(u: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Extend the independent columns of ``u`` to a basis of F_p^n.

    Returns ``(b, b_inv)`` where the first ``u.shape[1]`` columns of ``b`` are
    ``u`` and the remaining ones are standard vectors.
    """
    n, s = u.shape
    if s == 0:
        return np.eye(n, dtype=np.int64), np.eye(n, dtype=np.int64)
    _, rk, piv = rref(u.T, p)
    if rk != s:
        raise ValueError("columns are not independent")
    taken = set(piv)
    extra = [i for i in range(n) if i not in taken]
    b = np.concatenate([u % p, np.eye(n, dtype=np.int64)[:, extra]], axis=1)
    return b, inverse(b, p)


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([as_fp(m, p), np.eye(n, dtype=np.int64)], axis=1)
    red, rk, piv = rref(aug, p)
    if piv[:n] != list(range(n)) or rk < n:
        raise ValueError("matrix is singular")
    return red[:, n:].copy()


def is_invertible(m: np.ndarray, p: int) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def det_mod(m: np.ndarray, p: int) -> int:
    """Determinant by cofactor expansion; an oracle for small matrices only."""
    m = [[int(x) for x in row] for row in np.asarray(m)]
    return _det_int(m) % p


def _det_int(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det_int(minor)
    return total


@dataclass(frozen=True)
class FpMatrix:
    p: int
    entries: np.ndarray = field(compare=False)

    def __post_init__(self):
        check_prime(self.p)
        a = as_fp(self.entries, self.p)
        if a.ndim != 2:
            a = a.reshape(0, 0) if a.size == 0 else a
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other):
        return (isinstance(other, FpMatrix) and self.p == other.p
                and self.entries.shape == other.entries.shape
                and bool(np.array_equal(self.entries, other.entries)))

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def rref(self) -> tuple["FpMatrix", int, list[int]]:
        red, rk, piv = rref(self.entries, self.p)
        return FpMatrix(self.p, red), rk, piv

    def rank(self) -> int:
        return rank(self.entries, self.p)

    def kernel_basis(self) -> list[np.ndarray]:
        k = kernel_basis(self.entries, self.p)
        return [k[:, j].copy() for j in range(k.shape[1])]

    def solve(self, b: Sequence[int]) -> Optional[np.ndarray]:
        return solve(self.entries, np.asarray(b, dtype=np.int64), self.p)


# ---------------------------------------------------------------------------
# Integer matrices


class IntMatrix(list):
    """Row-major list of lists of Python ints with a recorded column count."""

    def __init__(self, rows: Sequence[Sequence[int]] = (), cols: Optional[int] = None):
        super().__init__([int(x) for x in r] for r in rows)
        if cols is None:
            cols = len(self[0]) if self else 0
        self.cols = cols
        for r in self:
            if len(r) != cols:
                raise ValueError("ragged integer matrix")

    @property
    def rows(self) -> int:
        return len(self)

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls([[0] * c for _ in range(r)], cols=c)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    def copy(self) -> "IntMatrix":
        return IntMatrix([list(r) for r in self], cols=self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         cols=self.rows)

    T = property(transpose)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in integer matrix product")
        ot = [[other[i][j] for i in range(other.rows)] for j in range(other.cols)]
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self],
                         cols=other.cols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix([a + b for a, b in zip(self, other)], cols=self.cols + other.cols)

    def columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[r[j] for j in idx] for r in self], cols=len(idx))

    def __eq__(self, other):
        return (isinstance(other, list) and list.__eq__(self, other)
                and getattr(other, "cols", self.cols) == self.cols)

    __hash__ = None


def int_det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = m.rows
    if n != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` and U, V unimodular.

    D is diagonal with nonnegative entries d1 | d2 | ... (zeros last).
    """
    m = IntMatrix(m, cols=getattr(m, "cols", None))
    rows, cols = m.rows, m.cols
    d = m.copy()
    u = IntMatrix.identity(rows)
    v = IntMatrix.identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            d[dst] = [a + k * b for a, b in zip(d[dst], d[src])]
            u[dst] = [a + k * b for a, b in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        if k:
            for r in d:
                r[dst] += k * r[src]
            for r in v:
                r[dst] += k * r[src]

    def neg_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    def nearest_quotient(a, b):
        # symmetric remainder keeps entries from growing
        q, r = divmod(a, b)
        if 2 * abs(r) > abs(b):
            q += 1 if (r > 0) == (b > 0) else -1
        return q

    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            swap_rows(t, pi)
            swap_cols(t, pj)
            piv = d[t][t]
            for i in range(t + 1, rows):
                add_row(t, i, -nearest_quotient(d[i][t], piv))
            for j in range(t + 1, cols):
                add_col(t, j, -nearest_quotient(d[t][j], piv))
            if any(d[i][t] for i in range(t + 1, rows)) or any(d[t][j] for j in range(t + 1, cols)):
                continue
            # pivot must divide the remaining block
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % piv), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if d[t][t] < 0:
            neg_row(t)
    return u, d, v


def invariant_factors(m: IntMatrix) -> list[int]:
    """Diagonal of the Smith normal form (length min(rows, cols))."""
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(d.rows, d.cols))]


def int_solve(a: IntMatrix, b: Sequence[int]) -> Optional[list[int]]:
    """An integer solution of ``a @ x = b`` or ``None``."""
    if a.rows != len(b):
        raise ValueError("dimension mismatch in integer solve")
    u, d, v = smith_normal_form(a)
    w = [sum(u[i][k] * b[k] for k in range(a.rows)) for i in range(a.rows)]
    y = [0] * a.cols
    for i in range(a.rows):
        di = d[i][i] if i < a.cols else 0
        if di == 0:
            if w[i] != 0:
                return None
        else:
            if w[i] % di:
                return None
            y[i] = w[i] // di
    return [sum(v[j][k] * y[k] for k in range(a.cols)) for j in range(a.cols)]


def int_kernel(a: IntMatrix) -> IntMatrix:
    """A ℤ-basis of the integer kernel of ``a`` (as columns)."""
    u, d, v = smith_normal_form(a)
    r = sum(1 for i in range(min(d.rows, d.cols)) if d[i][i])
    return v.columns(list(range(r, a.cols)))


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """A ℤ-basis (as columns) of the lattice spanned by the columns of ``gens``."""
    u, d, v = smith_normal_form(gens)
    r = sum(1 for i in range(min(d.rows, d.cols)) if d[i][i])
    uinv = int_inverse(u)
    return IntMatrix([[uinv[i][k] * d[k][k] for k in range(r)] for i in range(gens.rows)], cols=r)


def int_inverse(u: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    from fractions import Fraction

    n = u.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(u)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = [[a[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return IntMatrix([[int(x) for x in row] for row in out], cols=n)
