"""Finite-dimensional algebras over F_p and their modules.

An :class:`Algebra` is a table of structure constants ``sc[i, j, k]`` giving
the coefficient of ``b_k`` in ``b_i * b_j``.  Modules are always left modules;
a right module over ``A`` is a :class:`ModuleRep` over ``opposite(A)``.
Bimodules carry both actions explicitly, with ``right[r]`` the matrix of
``m -> m * r``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactla import as_fp, check_prime, column_space, kernel_basis, mat_mul, rank, solve


class AssociativityViolation(ValueError):
    def __init__(self, i, j, k):
        super().__init__(f"(b{i} b{j}) b{k} != b{i} (b{j} b{k})")
        self.triple = (i, j, k)


class UnitViolation(ValueError):
    def __init__(self, i):
        super().__init__(f"unit law fails on basis element {i}")
        self.index = i


class NotAGroup(ValueError):
    pass


class NotAutomorphism(ValueError):
    pass


class NotGroupAction(ValueError):
    pass


class InfiniteDimensionalQuotient(ValueError):
    pass


class RelationViolation(ValueError):
    def __init__(self, i, j):
        super().__init__(f"action does not respect b{i} * b{j}")
        self.pair = (i, j)


class UnitNotIdentity(ValueError):
    pass


class AlgebraMismatch(ValueError):
    pass


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class Algebra:
    """Associative unital algebra over F_p given by structure constants."""

    def __init__(self, p: int, labels: Sequence[str], sc, unit, *, validate: bool = True):
        self.p = check_prime(p)
        self.labels = tuple(str(s) for s in labels)
        n = len(self.labels)
        self.sc = _freeze(as_fp(sc, p).reshape(n, n, n) if n else np.zeros((0, 0, 0), np.int64))
        self.unit = _freeze(as_fp(unit, p).reshape(n))
        if validate:
            self._validate()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def _validate(self):
        n, p = self.dim, self.p
        if n == 0:
            raise UnitViolation(-1)
        # (b_i b_j) b_k versus b_i (b_j b_k)
        left = np.einsum("ijm,mkl->ijkl", self.sc, self.sc) % p
        right = np.einsum("jkm,iml->ijkl", self.sc, self.sc) % p
        bad = np.argwhere((left != right).any(axis=3))
        if bad.size:
            raise AssociativityViolation(*map(int, bad[0]))
        eye = np.eye(n, dtype=np.int64)
        lu = np.einsum("i,ijk->jk", self.unit, self.sc) % p
        ru = np.einsum("j,ijk->ik", self.unit, self.sc) % p
        for i in range(n):
            if not (np.array_equal(lu[i], eye[i]) and np.array_equal(ru[i], eye[i])):
                raise UnitViolation(i)

    # equality is by content; labels are presentation only
    def _key(self):
        return (self.p, self.dim, self.sc.tobytes(), self.unit.tobytes())

    def __eq__(self, other):
        return isinstance(other, Algebra) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Algebra(p={self.p}, dim={self.dim}, labels={list(self.labels)})"

    def mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.sc) % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[i] = 1
        return e

    @cached_property
    def left_mult(self) -> np.ndarray:
        """``left_mult[i]`` is the matrix of ``x -> b_i x``."""
        return _freeze(np.transpose(self.sc, (0, 2, 1)).copy())

    @cached_property
    def right_mult(self) -> np.ndarray:
        """``right_mult[i]`` is the matrix of ``x -> x b_i``."""
        return _freeze(np.transpose(self.sc, (1, 2, 0)).copy())

    def left_mult_of(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("i,ikj->kj", u, self.left_mult) % self.p

    def right_mult_of(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("i,ikj->kj", u, self.right_mult) % self.p

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.sc, np.transpose(self.sc, (1, 0, 2))))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra (greedy, deterministic)."""
        n, p = self.dim, self.p
        chosen: list[int] = []
        for i in range(n):
            if self._span_closure(chosen) == n:
                break
            if not self._in_closure(chosen, i):
                chosen.append(i)
        return tuple(chosen)

    def _closure_basis(self, gens: Sequence[int]) -> np.ndarray:
        p = self.p
        span = column_space(self.unit.reshape(-1, 1), p)
        while True:
            new = [span]
            for g in gens:
                new.append(self.left_mult[g] @ span % p)
            nxt = column_space(np.concatenate(new, axis=1), p)
            if nxt.shape[1] == span.shape[1]:
                return nxt
            span = nxt

    def _span_closure(self, gens) -> int:
        return self._closure_basis(gens).shape[1]

    def _in_closure(self, gens, i) -> bool:
        span = self._closure_basis(gens)
        return rank(np.concatenate([span, self.basis_vector(i).reshape(-1, 1)], axis=1), self.p) == span.shape[1]

    @cached_property
    def digest(self) -> str:
        return _digest(algebra_to_json(self))

    def to_json(self) -> dict:
        return algebra_to_json(self)


def build_algebra(p: int, labels: Sequence[str], structure_constants, unit) -> Algebra:
    return Algebra(p, labels, structure_constants, unit)


def ground_field(p: int) -> Algebra:
    return Algebra(p, ["1"], [[[1]]], [1])


def opposite(a: Algebra) -> Algebra:
    return Algebra(a.p, a.labels, np.transpose(a.sc, (1, 0, 2)), a.unit, validate=False)


def group_algebra(p: int, cayley: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> Algebra:
    table = _check_group(cayley)
    n = len(table)
    sc = np.zeros((n, n, n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            sc[g, h, table[g][h]] = 1
    e = _identity_of(table)
    unit = np.zeros(n, dtype=np.int64)
    unit[e] = 1
    labels = labels or [f"g{i}" for i in range(n)]
    return Algebra(p, labels, sc, unit)


def _identity_of(table) -> int:
    n = len(table)
    for e in range(n):
        if all(table[e][g] == g and table[g][e] == g for g in range(n)):
            return e
    raise NotAGroup("no identity element")


def _check_group(cayley) -> list[list[int]]:
    table = [list(map(int, row)) for row in cayley]
    n = len(table)
    if n == 0 or any(len(r) != n for r in table) or any(not 0 <= x < n for r in table for x in r):
        raise NotAGroup("cayley table is not a square table on 0..n-1")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAGroup(f"associativity fails at ({a},{b},{c})")
    e = _identity_of(table)
    for g in range(n):
        if not any(table[g][h] == e for h in range(n)):
            raise NotAGroup(f"element {g} has no inverse")
    return table


def group_inverse(cayley, g: int) -> int:
    e = _identity_of(cayley)
    return next(h for h in range(len(cayley)) if cayley[g][h] == e)


def tensor_algebra(a: Algebra, b: Algebra) -> Algebra:
    """A ⊗_{F_p} B with basis pairs (i, j) ordered lexicographically."""
    if a.p != b.p:
        raise AlgebraMismatch("modulus mismatch")
    sc = np.einsum("ijk,lmn->iljmkn", a.sc, b.sc).reshape(a.dim * b.dim, a.dim * b.dim, a.dim * b.dim)
    labels = [f"{x}⊗{y}" for x in a.labels for y in b.labels]
    return Algebra(a.p, labels, sc, np.kron(a.unit, b.unit))


def product_algebra(a: Algebra, b: Algebra) -> Algebra:
    if a.p != b.p:
        raise AlgebraMismatch(f"modulus mismatch: {a.p} vs {b.p}")
    n, m = a.dim, b.dim
    sc = np.zeros((n + m,) * 3, dtype=np.int64)
    sc[:n, :n, :n] = a.sc
    sc[n:, n:, n:] = b.sc
    labels = [f"({x},0)" for x in a.labels] + [f"(0,{y})" for y in b.labels]
    return Algebra(a.p, labels, sc, np.concatenate([a.unit, b.unit]))


def monomial_quotient_algebra(p: int, variables: Sequence[str], generators: Sequence[Sequence[int]]) -> Algebra:
    """F_p[x_1..x_r] modulo a monomial ideal given by exponent vectors."""
    r = len(variables)
    gens = [tuple(int(e) for e in g) for g in generators]
    if any(len(g) != r for g in gens):
        raise ValueError("monomial exponent vectors must match the number of variables")

    def in_ideal(mono):
        return any(all(mono[i] >= g[i] for i in range(r)) for g in gens)

    bounds = []
    for i in range(r):
        pure = [g[i] for g in gens if all(g[j] == 0 for j in range(r) if j != i) and g[i] > 0]
        if not pure:
            raise InfiniteDimensionalQuotient(f"variable {variables[i]} has no pure power in the ideal")
        bounds.append(min(pure))
    monos = [m for m in itertools.product(*(range(b) for b in bounds)) if not in_ideal(m)]
    monos.sort(key=lambda m: (sum(m), tuple(-x for x in m)))
    index = {m: i for i, m in enumerate(monos)}
    n = len(monos)
    sc = np.zeros((n, n, n), dtype=np.int64)
    for (a, i), (b, j) in itertools.product(index.items(), repeat=2):
        prod = tuple(x + y for x, y in zip(a, b))
        if prod in index:
            sc[i, j, index[prod]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[index[(0,) * r]] = 1

    def label(m):
        parts = [v if e == 1 else f"{v}^{e}" for v, e in zip(variables, m) if e]
        return "".join(parts) or "1"

    return Algebra(p, [label(m) for m in monos], sc, unit)


def triangular_algebra(p: int) -> Algebra:
    """Lower-triangular 2x2 matrices over F_p; basis e11, e22, e21."""
    # e11 e11 = e11, e22 e22 = e22, e21 e11 = e21, e22 e21 = e21
    sc = np.zeros((3, 3, 3), dtype=np.int64)
    sc[0, 0, 0] = 1
    sc[1, 1, 1] = 1
    sc[2, 0, 2] = 1
    sc[1, 2, 2] = 1
    return Algebra(p, ["e11", "e22", "e21"], sc, [1, 1, 0])


def dual_numbers(a: Algebra):
    """R = A[x]/(x^2) with the projection R -> A (x -> 0) and the section A -> R."""
    from .ringext import RingHom

    n = a.dim
    sc = np.zeros((2 * n,) * 3, dtype=np.int64)
    # basis: b_i (i < n), b_i x (n + i)
    sc[:n, :n, :n] = a.sc
    sc[:n, n:, n:] = a.sc
    sc[n:, :n, n:] = a.sc
    labels = list(a.labels) + [f"{s}·x" if s != "1" else "x" for s in a.labels]
    r = Algebra(a.p, labels, sc, np.concatenate([a.unit, np.zeros(n, np.int64)]))
    proj = np.concatenate([np.eye(n, dtype=np.int64), np.zeros((n, n), np.int64)], axis=0)
    section = np.concatenate([np.eye(n, dtype=np.int64), np.zeros((n, n), np.int64)], axis=1)
    return r, RingHom(r, a, proj), RingHom(a, r, section)


def skew_group_algebra(lam: Algebra, cayley, action: Sequence):
    """Λ G with (λ1 g1)(λ2 g2) = λ1 g1(λ2) g1 g2, and the embedding Λ -> ΛG.

    ``action[g]`` is the matrix (columns = images of basis vectors) of the
    automorphism of Λ given by the group element ``g``.
    """
    from .ringext import RingHom

    table = _check_group(cayley)
    p, n, G = lam.p, lam.dim, len(table)
    mats = [as_fp(m, p).reshape(n, n) for m in action]
    if len(mats) != G:
        raise NotGroupAction("one automorphism matrix per group element is required")
    for g, m in enumerate(mats):
        if rank(m, p) != n:
            raise NotAutomorphism(f"action of g{g} is not bijective")
        if not np.array_equal(m @ lam.unit % p, lam.unit):
            raise NotAutomorphism(f"action of g{g} is not unital")
        for i, j in itertools.product(range(n), repeat=2):
            lhs = m @ lam.sc[i, j] % p
            rhs = lam.mul(m[:, i], m[:, j])
            if not np.array_equal(lhs, rhs):
                raise NotAutomorphism(f"action of g{g} is not multiplicative on ({i},{j})")
    for g, h in itertools.product(range(G), repeat=2):
        if not np.array_equal(mats[g] @ mats[h] % p, mats[table[g][h]]):
            raise NotGroupAction(f"action is not a homomorphism at ({g},{h})")
    e = _identity_of(table)
    dim = n * G
    sc = np.zeros((dim,) * 3, dtype=np.int64)
    for i, g, j, h in itertools.product(range(n), range(G), range(n), range(G)):
        lam_part = lam.mul(lam.basis_vector(i), mats[g][:, j])
        gh = table[g][h]
        for k in np.nonzero(lam_part)[0]:
            sc[i * G + g, j * G + h, int(k) * G + gh] = lam_part[k]
    unit = np.zeros(dim, dtype=np.int64)
    for i in range(n):
        unit[i * G + e] = lam.unit[i]
    labels = [f"{s}·g{g}" for s in lam.labels for g in range(G)]
    big = Algebra(p, labels, sc, unit)
    images = np.zeros((n, dim), dtype=np.int64)
    for i in range(n):
        images[i, i * G + e] = 1
    return big, RingHom(lam, big, images)


def algebra_to_json(a: Algebra) -> dict:
    return {
        "kind": "algebra",
        "p": a.p,
        "labels": list(a.labels),
        "structure_constants": a.sc.tolist(),
        "unit": a.unit.tolist(),
    }


def algebra_from_json(d: dict) -> Algebra:
    return build_algebra(int(d["p"]), d["labels"], d["structure_constants"], d["unit"])


# ---------------------------------------------------------------------------
# modules


class ModuleRep:
    """A finite-dimensional left module given by one action matrix per basis element."""

    def __init__(self, algebra: Algebra, dim: int, action, *, validate: bool = True):
        self.algebra = algebra
        self.dim = int(dim)
        p, n = algebra.p, algebra.dim
        act = as_fp(action, p) if n else np.zeros((0, dim, dim), np.int64)
        self.action = _freeze(act.reshape(n, self.dim, self.dim))
        if validate:
            self._validate()

    @property
    def p(self) -> int:
        return self.algebra.p

    def _validate(self):
        a, p, d = self.algebra, self.p, self.dim
        if d == 0:
            return
        one = np.einsum("i,ijk->jk", a.unit, self.action) % p
        if not np.array_equal(one, np.eye(d, dtype=np.int64)):
            raise UnitNotIdentity("the unit does not act as the identity")
        prod = np.einsum("iab,jbc->ijac", self.action, self.action) % p
        comb = np.einsum("ijk,kac->ijac", a.sc, self.action) % p
        bad = np.argwhere((prod != comb).any(axis=(2, 3)))
        if bad.size:
            raise RelationViolation(*map(int, bad[0]))

    def act(self, u: np.ndarray) -> np.ndarray:
        """Matrix by which the algebra element with coordinates ``u`` acts."""
        return np.einsum("i,ijk->jk", np.asarray(u) % self.p, self.action) % self.p

    @cached_property
    def generator_action(self) -> np.ndarray:
        return self.action[list(self.algebra.generators)]

    def _key(self):
        return (self.algebra._key(), self.dim, self.action.tobytes())

    def __eq__(self, other):
        return isinstance(other, ModuleRep) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"ModuleRep(dim={self.dim}, algebra={self.algebra.labels})"

    @cached_property
    def digest(self) -> str:
        return _digest(module_to_json(self))

    def to_json(self) -> dict:
        return module_to_json(self)


def build_module(a: Algebra, action, side: str = "left") -> ModuleRep:
    """Validated module; ``side='right'`` builds a left module over ``opposite(a)``."""
    action = as_fp(action, a.p)
    dim = action.shape[-1] if action.size else 0
    over = a if side == "left" else opposite(a)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    return ModuleRep(over, dim, action)


def regular_module(a: Algebra) -> ModuleRep:
    return ModuleRep(a, a.dim, a.left_mult, validate=False)


def zero_module(a: Algebra) -> ModuleRep:
    return ModuleRep(a, 0, np.zeros((a.dim, 0, 0), np.int64), validate=False)


def direct_sum(mods: Sequence[ModuleRep], algebra: Optional[Algebra] = None) -> ModuleRep:
    if not mods:
        if algebra is None:
            raise ValueError("empty direct sum needs an algebra")
        return zero_module(algebra)
    a = mods[0].algebra
    for m in mods:
        if m.algebra != a:
            raise AlgebraMismatch("direct sum of modules over different algebras")
    d = sum(m.dim for m in mods)
    act = np.zeros((a.dim, d, d), dtype=np.int64)
    o = 0
    for m in mods:
        act[:, o:o + m.dim, o:o + m.dim] = m.action
        o += m.dim
    return ModuleRep(a, d, act, validate=False)


def module_power(m: ModuleRep, k: int) -> ModuleRep:
    return direct_sum([m] * k, m.algebra)


def module_to_json(m: ModuleRep) -> dict:
    return {"kind": "module", "algebra": algebra_to_json(m.algebra), "dim": m.dim,
            "action": m.action.tolist()}


def module_from_json(d: dict) -> ModuleRep:
    a = algebra_from_json(d["algebra"])
    return ModuleRep(a, int(d["dim"]), np.array(d["action"], dtype=np.int64).reshape(a.dim, int(d["dim"]), int(d["dim"])))


class ModuleMap:
    """A module homomorphism; ``matrix`` maps source coordinates to target coordinates."""

    def __init__(self, source: ModuleRep, target: ModuleRep, matrix, *, validate: bool = True):
        self.source = source
        self.target = target
        p = source.p
        self.matrix = _freeze(as_fp(matrix, p).reshape(target.dim, source.dim))
        if validate:
            if source.algebra != target.algebra:
                raise AlgebraMismatch("map between modules over different algebras")
            lhs = np.einsum("ab,ibc->iac", self.matrix, source.action) % p
            rhs = np.einsum("iab,bc->iac", target.action, self.matrix) % p
            if not np.array_equal(lhs, rhs):
                raise ValueError("matrix does not intertwine the actions")

    @property
    def p(self):
        return self.source.p

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """``self ∘ first``."""
        return ModuleMap(first.source, self.target, self.matrix @ first.matrix % self.p, validate=False)

    def rank(self) -> int:
        return rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()


def identity_map(m: ModuleRep) -> ModuleMap:
    return ModuleMap(m, m, np.eye(m.dim, dtype=np.int64), validate=False)


class BimoduleRep:
    """An L-S bimodule: ``left[a]`` is ``m -> a m`` and ``right[s]`` is ``m -> m s``."""

    def __init__(self, left_over: Algebra, right_over: Algebra, dim: int, left, right,
                 *, validate: bool = True):
        if left_over.p != right_over.p:
            raise AlgebraMismatch("bimodule over algebras of different characteristic")
        self.left_over = left_over
        self.right_over = right_over
        self.dim = int(dim)
        p = left_over.p
        self.left = _freeze(as_fp(left, p).reshape(left_over.dim, self.dim, self.dim))
        self.right = _freeze(as_fp(right, p).reshape(right_over.dim, self.dim, self.dim))
        if validate:
            self._validate()

    @property
    def p(self):
        return self.left_over.p

    def _validate(self):
        self.left_module()._validate()
        self.right_module()._validate()
        p = self.p
        lr = np.einsum("iab,jbc->ijac", self.left, self.right) % p
        rl = np.einsum("jab,ibc->ijac", self.right, self.left) % p
        if not np.array_equal(lr, rl):
            raise ValueError("left and right actions do not commute")

    def left_module(self) -> ModuleRep:
        return ModuleRep(self.left_over, self.dim, self.left, validate=False)

    def right_module(self) -> ModuleRep:
        """The right action as a left module over the opposite algebra."""
        return ModuleRep(opposite(self.right_over), self.dim, self.right, validate=False)

    @cached_property
    def generator_actions(self) -> np.ndarray:
        parts = [self.left[list(self.left_over.generators)], self.right[list(self.right_over.generators)]]
        return np.concatenate(parts, axis=0)

    def _key(self):
        return (self.left_over._key(), self.right_over._key(), self.dim,
                self.left.tobytes(), self.right.tobytes())

    def __eq__(self, other):
        return isinstance(other, BimoduleRep) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @cached_property
    def digest(self) -> str:
        return _digest(bimodule_to_json(self))

    def to_json(self) -> dict:
        return bimodule_to_json(self)


def build_bimodule(left_over: Algebra, right_over: Algebra, left, right) -> BimoduleRep:
    left = as_fp(left, left_over.p)
    dim = left.shape[-1]
    return BimoduleRep(left_over, right_over, dim, left, right)


def as_left_bimodule(m: ModuleRep) -> BimoduleRep:
    """A left A-module as an A-F_p bimodule."""
    k = ground_field(m.p)
    return BimoduleRep(m.algebra, k, m.dim, m.action, np.eye(m.dim, dtype=np.int64)[None], validate=False)


def as_right_bimodule(m: ModuleRep) -> BimoduleRep:
    """A left module over opposite(A) as an F_p-A bimodule."""
    k = ground_field(m.p)
    return BimoduleRep(k, opposite(m.algebra), m.dim, np.eye(m.dim, dtype=np.int64)[None], m.action,
                       validate=False)


def regular_bimodule(a: Algebra) -> BimoduleRep:
    return BimoduleRep(a, a, a.dim, a.left_mult, a.right_mult, validate=False)


def bimodule_to_json(b: BimoduleRep) -> dict:
    return {"kind": "bimodule", "left_algebra": algebra_to_json(b.left_over),
            "right_algebra": algebra_to_json(b.right_over), "dim": b.dim,
            "left": b.left.tolist(), "right": b.right.tolist()}


def bimodule_from_json(d: dict) -> BimoduleRep:
    la, ra = algebra_from_json(d["left_algebra"]), algebra_from_json(d["right_algebra"])
    return BimoduleRep(la, ra, int(d["dim"]), d["left"], d["right"])


def enveloping_algebra(left_over: Algebra, right_over: Algebra) -> Algebra:
    """L ⊗ S^op, whose left modules are the L-S bimodules."""
    return tensor_algebra(left_over, opposite(right_over))


def bimodule_as_module(b: BimoduleRep) -> ModuleRep:
    env = enveloping_algebra(b.left_over, b.right_over)
    p = b.p
    act = np.einsum("iab,jbc->ijac", b.left, b.right).reshape(env.dim, b.dim, b.dim) % p
    return ModuleRep(env, b.dim, act, validate=False)


def power_action(m: ModuleRep, u: np.ndarray, k: int) -> np.ndarray:
    x = np.eye(m.dim, dtype=np.int64)
    a = m.act(u)
    for _ in range(k):
        x = mat_mul(x, a, m.p)
    return x
