"""Radicals and primitive idempotents of matrix algebras over F_p.

Everything here works on a :class:`MatrixAlgebra`: a subspace of d x d matrices
closed under multiplication and containing the identity.  Abstract algebras go
through their regular representation, endomorphism rings through their natural
one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import Poly, symbols

from .exactla import column_space, kernel_basis, rank, solve

_t = symbols("t")


class IdempotentSearchFailed(RuntimeError):
    pass


class RadicalCertificateFailed(RuntimeError):
    pass


@dataclass(eq=False)
class MatrixAlgebra:
    """Span of ``basis`` (k x d x d), closed under products, with unit ``one``."""

    p: int
    basis: np.ndarray
    one: np.ndarray

    @property
    def d(self) -> int:
        return self.one.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def _flat(self) -> np.ndarray:
        return self.basis.reshape(self.dim, -1).T % self.p

    def coords(self, x: np.ndarray) -> np.ndarray:
        c = solve(self._flat, x.reshape(-1) % self.p, self.p)
        if c is None:
            raise ValueError("matrix is not in the algebra")
        return c

    def element(self, c: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->jk", np.asarray(c) % self.p, self.basis) % self.p

    def corner(self, e: np.ndarray) -> "MatrixAlgebra":
        prods = np.array([e @ b @ e % self.p for b in self.basis])
        cols = column_space(prods.reshape(self.dim, -1).T, self.p)
        return MatrixAlgebra(self.p, cols.T.reshape(-1, self.d, self.d), e % self.p)


def span_matrices(mats, p: int) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    if mats.size == 0:
        return mats.reshape(0, *mats.shape[1:]) if mats.ndim == 3 else np.zeros((0, 0, 0), np.int64)
    d = mats.shape[-1]
    cols = column_space(mats.reshape(mats.shape[0], -1).T % p, p)
    return cols.T.reshape(-1, mats.shape[-2], d)


def _trace_functional(x: np.ndarray, p: int, i: int) -> int:
    """(tr(x~^(p^i)) mod p^(i+1)) / p^i for the integer lift x~ of x."""
    mod = p ** (i + 1)
    dtype = object if mod > (1 << 20) else np.int64
    y = np.asarray(x % p, dtype=dtype)
    for _ in range(i):
        z = np.eye(y.shape[0], dtype=dtype)
        for _ in range(p):
            z = (z @ y) % mod
        y = z
    tr = int(np.trace(y)) % mod
    return tr // (p ** i)


def radical(alg: MatrixAlgebra) -> np.ndarray:
    """Coordinates (columns, in ``alg.basis``) of a basis of the Jacobson radical."""
    p, n = alg.p, alg.dim
    ideal = np.eye(n, dtype=np.int64)
    level = 0
    while p ** level <= alg.d:
        level += 1
    for i in range(level):
        elems = [alg.element(ideal[:, j]) for j in range(ideal.shape[1])]
        g = np.array([[_trace_functional(a @ b % p, p, i) for b in alg.basis] for a in elems],
                     dtype=np.int64).reshape(len(elems), n)
        ker = kernel_basis(g.T % p, p) if len(elems) else np.zeros((0, 0), np.int64)
        ideal = (ideal @ ker) % p if ker.size else np.zeros((n, 0), np.int64)
        if ideal.shape[1] == 0:
            break
    _certify_radical(alg, ideal)
    return ideal


def _certify_radical(alg: MatrixAlgebra, ideal: np.ndarray):
    p = alg.p
    if ideal.shape[1] == 0:
        return
    elems = np.array([alg.element(ideal[:, j]) for j in range(ideal.shape[1])])
    flat = ideal
    for a in elems:
        for b in alg.basis:
            for prod in (a @ b % p, b @ a % p):
                v = alg.coords(prod)
                if rank(np.column_stack([flat, v]), p) != flat.shape[1]:
                    raise RadicalCertificateFailed("radical candidate is not an ideal")
    power = elems
    for _ in range(alg.dim + 1):
        if power.size == 0 or not power.any():
            return
        power = span_matrices([x @ a % p for x in power for a in elems], p)
    raise RadicalCertificateFailed("radical candidate is not nilpotent")


def minimal_polynomial(x: np.ndarray, one: np.ndarray, p: int) -> list[int]:
    """Monic coefficients, highest degree first."""
    powers = [one % p]
    while True:
        nxt = powers[-1] @ x % p
        cols = np.array([q.reshape(-1) for q in powers]).T
        c = solve(cols, nxt.reshape(-1), p)
        if c is not None:
            return [1] + [int(-v) % p for v in c[::-1]]
        powers.append(nxt)


def _poly_at(coeffs, x: np.ndarray, one: np.ndarray, p: int) -> np.ndarray:
    acc = np.zeros_like(one)
    for c in coeffs:
        acc = (acc @ x + int(c) * one) % p
    return acc


def _coeffs(poly: Poly, p: int) -> list[int]:
    return [int(c) % p for c in poly.all_coeffs()]


def _split_by_minpoly(x: np.ndarray, one: np.ndarray, p: int):
    """CRT idempotents of F_p[x] (one per primary factor), or None if x is primary."""
    mp = Poly(minimal_polynomial(x, one, p), _t, modulus=p)
    _, factors = mp.factor_list()
    if len(factors) < 2:
        return None, factors
    idems = []
    for g, m in factors:
        q = g ** m
        rest = mp.exquo(q)
        u = rest.invert(q)
        e = (u * rest).rem(mp)
        idems.append(_poly_at(_coeffs(e, p), x, one, p))
    return idems, factors


def is_local(alg: MatrixAlgebra) -> bool:
    return _local_or_split(alg, np.random.default_rng(0))[0]


def _local_or_split(alg: MatrixAlgebra, rng, tries: int = 200):
    """(True, None) when alg/rad is a field, else (False, [orthogonal idempotents])."""
    p = alg.p
    if alg.dim <= 1:
        return True, None
    rad = radical(alg)
    top = alg.dim - rad.shape[1]
    if top == 1:
        return True, None
    # basis elements first, then seeded random combinations
    candidates = [alg.basis[i] for i in range(alg.dim)]
    for attempt in range(tries + alg.dim):
        if attempt < alg.dim:
            x = candidates[attempt]
        else:
            x = alg.element(rng.integers(0, p, alg.dim))
        idems, factors = _split_by_minpoly(x, alg.one, p)
        if idems is not None:
            return False, idems
        if factors and factors[0][0].degree() == top and _commutes_mod_radical(alg, rad):
            return True, None
    raise IdempotentSearchFailed(f"no splitting element found in {tries} tries (dim {alg.dim})")


def _commutes_mod_radical(alg: MatrixAlgebra, rad: np.ndarray) -> bool:
    p = alg.p
    for a in alg.basis:
        for b in alg.basis:
            c = alg.coords((a @ b - b @ a) % p)
            if rank(np.column_stack([rad, c]), p) != rad.shape[1]:
                return False
    return True


def primitive_idempotents(alg: MatrixAlgebra, seed: int = 0) -> list[np.ndarray]:
    """Orthogonal primitive idempotents summing to the unit (deterministic for a seed)."""
    rng = np.random.default_rng(seed)
    out: list[np.ndarray] = []
    stack = [alg.one % alg.p]
    while stack:
        e = stack.pop()
        local, idems = _local_or_split(alg.corner(e), rng)
        if local:
            out.append(e)
        else:
            stack.extend(reversed(idems))
    return out


def same_class(alg: MatrixAlgebra, rad: np.ndarray, e: np.ndarray, f: np.ndarray) -> bool:
    """e A f is not inside the radical, i.e. A e and A f are isomorphic projectives."""
    p = alg.p
    for b in alg.basis:
        c = alg.coords(e @ b @ f % p)
        if rank(np.column_stack([rad, c]), p) != rad.shape[1]:
            return True
    return False


def idempotent_classes(alg: MatrixAlgebra, idems: list[np.ndarray]) -> list[int]:
    """Class label per idempotent; equal labels mean isomorphic projectives."""
    rad = radical(alg)
    labels: list[int] = []
    reps: list[int] = []
    for i, e in enumerate(idems):
        for c, j in enumerate(reps):
            if same_class(alg, rad, e, idems[j]):
                labels.append(c)
                break
        else:
            labels.append(len(reps))
            reps.append(i)
    return labels


def regular_matrix_algebra(algebra) -> MatrixAlgebra:
    return MatrixAlgebra(algebra.p, np.array(algebra.left_mult), np.eye(algebra.dim, dtype=np.int64))


def endomorphism_algebra(hom_basis: list[np.ndarray], d: int, p: int) -> MatrixAlgebra:
    if not hom_basis:
        return MatrixAlgebra(p, np.zeros((0, d, d), np.int64), np.eye(d, dtype=np.int64))
    return MatrixAlgebra(p, np.array(hom_basis), np.eye(d, dtype=np.int64))


def element_from_matrix(algebra, mat: np.ndarray) -> np.ndarray:
    """Recover a from its left-multiplication matrix: L_a applied to 1 is a."""
    return mat @ algebra.unit % algebra.p

