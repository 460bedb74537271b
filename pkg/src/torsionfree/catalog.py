"""Extensions and enumeration of modules up to isomorphism.

Every module of dimension d with a simple submodule S is the middle term of
0 -> S -> M -> M/S -> 0, so all modules of dimension <= cap arise from the
Ext^1 classes (up to scalars) of smaller modules by simples.  Indecomposables
are identified with the complete test of :func:`indecomposable_iso`; all other
modules are direct sums of them (Krull-Schmidt).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .algebra import Algebra, AlgebraMismatch, ModuleRep, direct_sum, module_to_json, zero_module
from .exactla import column_space, complete_basis, kernel_basis, rank, solve
from .homcore import algebra_structure, hom_dim
from .isomorph import decompose, indecomposable_iso

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    def __init__(self, used: int, budget: int):
        super().__init__(f"search space {used} exceeds budget {budget}")
        self.used = used
        self.budget = budget


@dataclass
class ExtensionSpace:
    """Z^1/B^1 for extensions 0 -> X -> Y -> Z -> 0 (cocycles c with c(ab) = X(a)c(b) + c(a)Z(b))."""

    X: ModuleRep
    Z: ModuleRep
    cocycles: np.ndarray  # columns, each a stack of n blocks of shape (x, z)
    coboundaries: np.ndarray
    representatives: np.ndarray  # columns: a basis of a complement of B^1 in Z^1

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]

    def middle(self, vec: np.ndarray) -> ModuleRep:
        X, Z = self.X, self.Z
        n, x, z = X.algebra.dim, X.dim, Z.dim
        c = np.asarray(vec).reshape(n, x, z) % X.p
        act = np.zeros((n, x + z, x + z), dtype=np.int64)
        act[:, :x, :x] = X.action
        act[:, :x, x:] = c
        act[:, x:, x:] = Z.action
        return ModuleRep(X.algebra, x + z, act, validate=False)

    def class_vector(self, coeffs) -> np.ndarray:
        return self.representatives @ np.asarray(coeffs, dtype=np.int64) % self.X.p


def extension_space(Z: ModuleRep, X: ModuleRep) -> ExtensionSpace:
    if Z.algebra != X.algebra:
        raise AlgebraMismatch("extensions between modules over different algebras")
    A = X.algebra
    p, n, x, z = A.p, A.dim, X.dim, Z.dim
    blk = x * z
    if blk == 0:
        empty = np.zeros((0, 0), dtype=np.int64)
        return ExtensionSpace(X, Z, empty, empty, empty)
    ix, iz = np.eye(x, dtype=np.int64), np.eye(z, dtype=np.int64)
    rows = []
    for a in range(n):
        for b in range(n):
            eq = np.zeros((blk, n * blk), dtype=np.int64)
            eq[:, b * blk:(b + 1) * blk] += np.kron(X.action[a], iz)
            eq[:, a * blk:(a + 1) * blk] += np.kron(ix, Z.action[b].T)
            for k in np.nonzero(A.sc[a, b])[0]:
                eq[:, k * blk:(k + 1) * blk] -= int(A.sc[a, b, k]) * np.eye(blk, dtype=np.int64)
            rows.append(eq % p)
    cocycles = kernel_basis(np.concatenate(rows, axis=0), p)
    # c_h(b) = X(b) h - h Z(b)
    cob = np.concatenate([np.kron(X.action[b], iz) - np.kron(ix, Z.action[b].T) for b in range(n)], axis=0) % p
    coboundaries = column_space(cob, p)
    coords_b = solve(cocycles, coboundaries, p) if coboundaries.shape[1] else np.zeros((cocycles.shape[1], 0), np.int64)
    if coords_b is None:
        raise RuntimeError("coboundaries are not cocycles")
    coords_b = column_space(coords_b, p) if coords_b.size else coords_b
    b, _ = complete_basis(coords_b, p)
    reps = cocycles @ b[:, coords_b.shape[1]:] % p
    return ExtensionSpace(X, Z, cocycles, coboundaries, reps)


def ext1_dim(Z: ModuleRep, X: ModuleRep) -> int:
    """dim Ext^1(Z, X) from derivations modulo inner ones (independent of resolutions)."""
    return extension_space(Z, X).dim


def projective_classes(e: int, p: int):
    """Nonzero vectors of F_p^e with first nonzero entry 1."""
    for lead in range(e):
        for tail in itertools.product(range(p), repeat=e - lead - 1):
            v = [0] * lead + [1] + list(tail)
            yield v


def count_projective_classes(e: int, p: int) -> int:
    return (p ** e - 1) // (p - 1)


def extension_middle_terms(Z: ModuleRep, X: ModuleRep, all_classes: bool = False) -> list:
    """Middle terms for the zero class and a basis (or every class up to scalar) of Ext^1(Z, X)."""
    es = extension_space(Z, X)
    out = [direct_sum([X, Z], X.algebra)]
    if all_classes:
        vecs = [es.class_vector(v) for v in projective_classes(es.dim, X.p)]
    else:
        vecs = [es.representatives[:, j] for j in range(es.dim)]
    out.extend(es.middle(v) for v in vecs)
    return out


# ---------------------------------------------------------------------------
# invariants and the catalog


def module_invariants(M: ModuleRep) -> tuple:
    st = algebra_structure(M.algebra)
    p = M.p
    gens = M.generator_action
    ranks = []
    if len(gens) and len(gens) <= 3:
        for coeffs in projective_classes(len(gens), p):
            ranks.append(rank(np.einsum("i,ijk->jk", np.array(coeffs), gens) % p, p))
    else:
        ranks = [rank(g, p) for g in gens]
    soc = tuple(hom_dim(S, M) for S in st.simples)
    tp = tuple(hom_dim(M, S) for S in st.simples)
    return (M.dim, tuple(ranks), soc, tp, hom_dim(M, M))


@dataclass
class Catalog:
    algebra: Algebra
    cap: int
    indecomposables: list = field(default_factory=list)
    modules: list = field(default_factory=list)  # (multiset of indecomposable indices, module)
    provenance: dict = field(default_factory=dict)
    _keys: list = field(default_factory=list)

    def identify_indecomposable(self, X: ModuleRep) -> Optional[int]:
        key = module_invariants(X)
        for i, (Y, k) in enumerate(zip(self.indecomposables, self._keys)):
            if k == key and indecomposable_iso(X, Y) is not None:
                return i
        return None

    def identify(self, M: ModuleRep) -> tuple:
        """Sorted indices of the indecomposable summands of M."""
        idx = []
        for s in decompose(M).summands:
            i = self.identify_indecomposable(s.module)
            if i is None:
                raise KeyError("summand not in catalog")
            idx.append(i)
        return tuple(sorted(idx))

    def module_for(self, multiset: tuple) -> ModuleRep:
        return direct_sum([self.indecomposables[i] for i in multiset], self.algebra)

    def modules_of_dim(self, d: int) -> list:
        return [m for ms, m in self.modules if m.dim == d]

    def indecomposables_up_to(self, d: int) -> list:
        return [m for m in self.indecomposables if m.dim <= d]

    def to_json(self) -> dict:
        return {
            "kind": "catalog",
            "cap": self.cap,
            "provenance": self.provenance,
            "indecomposables": [module_to_json(m) for m in self.indecomposables],
            "modules": [list(ms) for ms, _ in self.modules],
        }


def _multisets_of_dim(dims: list, d: int) -> list:
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(dims)):
            if dims[i] <= remaining:
                rec(i, remaining - dims[i], acc + [i])

    rec(0, d, [])
    return out


@lru_cache(maxsize=32)
def _enumerate(A: Algebra, cap: int, budget: int) -> Catalog:
    st = algebra_structure(A)
    cat = Catalog(A, cap)
    used = 0
    by_dim: dict = {0: [zero_module(A)]}
    for d in range(1, cap + 1):
        for S in st.simples:
            if S.dim == d and cat.identify_indecomposable(S) is None:
                cat.indecomposables.append(S)
                cat._keys.append(module_invariants(S))
        for S in st.simples:
            if S.dim >= d:
                continue
            for Mq in by_dim.get(d - S.dim, []):
                es = extension_space(Mq, S)
                used += count_projective_classes(es.dim, A.p)
                if used > budget:
                    raise BudgetExceeded(used, budget)
                for v in projective_classes(es.dim, A.p):
                    Y = es.middle(es.class_vector(v))
                    dec = decompose(Y)
                    if len(dec.summands) != 1:
                        continue
                    if cat.identify_indecomposable(Y) is None:
                        cat.indecomposables.append(Y)
                        cat._keys.append(module_invariants(Y))
        dims = [m.dim for m in cat.indecomposables]
        level = []
        for ms in _multisets_of_dim(dims, d):
            M = cat.module_for(ms)
            cat.modules.append((ms, M))
            level.append(M)
        by_dim[d] = level
    cat.provenance = {"method": "extensions by simples", "cap": cap, "budget": budget,
                      "candidates": used}
    return cat


def enumerate_modules_up_to(A: Algebra, cap: int, budget: int = DEFAULT_BUDGET) -> Catalog:
    if cap < 1:
        raise ValueError("cap must be at least 1")
    return _enumerate(A, cap, budget)
