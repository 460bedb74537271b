"""Finitely generated abelian groups, modules over Z/m, and the map Z -> Z/m.

A :class:`ZModule` is the cokernel of an integer relation matrix
``Rel: Z^r -> Z^g`` (g x r).  All homological algebra is done on such
presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

from .exactla import IntMatrix, int_solve, invariant_factors, lattice_basis, smith_normal_form
from .homcore import TorsionfreeReport

# Z is regular, so all localizations are Gorenstein and (G~_n) holds for every n
Z_IS_REGULAR = True
Z_GLOBAL_DIMENSION = 1


def _rank(m: IntMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return sum(1 for d in invariant_factors(m) if d)


@dataclass(frozen=True)
class ZModule:
    presentation: IntMatrix
    free_rank: int
    invariant_factors: tuple

    @property
    def generators(self) -> int:
        return self.presentation.rows

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_free(self) -> bool:
        return not self.invariant_factors

    @property
    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def signature(self) -> tuple:
        return (self.free_rank, self.invariant_factors)

    def to_json(self) -> dict:
        return {"kind": "zmodule", "rows": self.presentation.rows, "cols": self.presentation.cols,
                "presentation": [[str(x) for x in r] for r in self.presentation],
                "free_rank": self.free_rank, "invariant_factors": [str(d) for d in self.invariant_factors]}


def z_from_presentation(rel) -> ZModule:
    rel = rel if isinstance(rel, IntMatrix) else IntMatrix(rel)
    g = rel.rows
    if rel.cols == 0 or g == 0:
        return ZModule(rel, g, ())
    diag = invariant_factors(rel)
    nonzero = [d for d in diag if d]
    return ZModule(rel, g - len(nonzero), tuple(d for d in nonzero if d != 1))


def z_from_invariants(free_rank: int, factors: Sequence[int]) -> ZModule:
    factors = [int(d) for d in factors if int(d) != 1]
    g = free_rank + len(factors)
    rel = IntMatrix.zeros(g, len(factors))
    for j, d in enumerate(factors):
        rel[j][j] = d
    return z_from_presentation(rel)


def z_reduced_presentation(M: ZModule) -> IntMatrix:
    """Injective relation matrix diag(d_i) with free generators last."""
    return z_from_invariants(M.free_rank, M.invariant_factors).presentation


def z_cokernel(m: IntMatrix) -> ZModule:
    return z_from_presentation(m)


def z_transpose(M: ZModule) -> ZModule:
    """Coker of the dual of the reduced presentation."""
    rel = z_reduced_presentation(M)
    return z_cokernel(rel.T if rel.rows else IntMatrix.zeros(rel.cols, 0))


def z_ext(M: ZModule, i: int) -> ZModule:
    """Ext^i_Z(M, Z) from the reduced (injective) presentation."""
    rel = z_reduced_presentation(M)
    g, r = rel.rows, rel.cols
    if i == 0:
        # kernel of Rel^T is free; its rank is g - rank
        return z_from_invariants(g - _rank(rel), ())
    if i == 1:
        return z_cokernel(rel.T if g else IntMatrix.zeros(r, 0))
    return z_from_invariants(0, ())


def z_syzygy(M: ZModule) -> ZModule:
    """Kernel of Z^g -> M, a free module of rank rank(Rel)."""
    return z_from_invariants(_rank(M.presentation), ())


def z_torsion(M: ZModule) -> ZModule:
    return z_from_invariants(0, M.invariant_factors)


def z_is_k_torsionfree(M: ZModule, k: int) -> TorsionfreeReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    T = z_transpose(M)
    dims = []
    for i in range(1, k + 1):
        e = z_ext(T, i)
        dims.append(0 if e.is_zero else (e.order or -1))
    first = next((i + 1 for i, d in enumerate(dims) if d), None)
    return TorsionfreeReport(k, first is None, first, dims)


def z_tensor(M: ZModule, N: ZModule) -> ZModule:
    """M ⊗_Z N = Z^(g h) / (Rel_M ⊗ I + I ⊗ Rel_N)."""
    a, b = z_reduced_presentation(M), z_reduced_presentation(N)
    g, h = a.rows, b.rows
    cols = []
    for j in range(a.cols):
        for y in range(h):
            cols.append([a[x][j] if yy == y else 0 for x in range(g) for yy in range(h)])
    for j in range(b.cols):
        for x in range(g):
            cols.append([b[yy][j] if xx == x else 0 for xx in range(g) for yy in range(h)])
    rel = IntMatrix([list(r) for r in zip(*cols)], cols=len(cols)) if cols else IntMatrix.zeros(g * h, 0)
    return z_cokernel(rel)


# ---------------------------------------------------------------------------
# modules over Z/m


class ModulusMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ZmModule:
    m: int
    summands: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("modulus must be at least 2")
        for d in self.summands:
            if d < 1 or self.m % d:
                raise ValueError(f"summand order {d} does not divide {self.m}")
        object.__setattr__(self, "summands", tuple(sorted((int(d) for d in self.summands if d != 1),
                                                          reverse=True)))

    def as_z(self) -> ZModule:
        return z_from_invariants(0, self.summands)

    def to_json(self) -> dict:
        return {"kind": "zm_module", "m": self.m, "summands": list(self.summands)}


def zm_regular(m: int) -> ZmModule:
    return ZmModule(m, (m,))


def zm_from_invariants(m: int, factors) -> ZmModule:
    return ZmModule(m, tuple(d for d in factors if d != 1))


def zm_cokernel(m: int, mat: IntMatrix) -> ZmModule:
    """Coker of an integer matrix A^c -> A^r over A = Z/m."""
    r = mat.rows
    full = mat.hstack(IntMatrix([[m if i == j else 0 for j in range(r)] for i in range(r)], cols=r)) \
        if r else mat
    z = z_cokernel(full)
    return zm_from_invariants(m, z.invariant_factors)


def zm_minimal_presentation(M: ZmModule) -> IntMatrix:
    """A^t -> A^s with t the non-projective summands; d = 1 and d = m need no relation."""
    s = len(M.summands)
    rel_cols = [j for j, d in enumerate(M.summands) if d != M.m]
    mat = IntMatrix.zeros(s, len(rel_cols))
    for c, j in enumerate(rel_cols):
        mat[j][c] = M.summands[j]
    return mat


def zm_transpose(M: ZmModule) -> ZmModule:
    mat = zm_minimal_presentation(M)
    return zm_cokernel(M.m, mat.T if mat.rows else IntMatrix.zeros(0, 0))


def _cyclic_ext_order(m: int, d: int, e: int, i: int) -> int:
    """|Ext^i_{Z/m}(Z/d, Z/e)| from the periodic resolution ... -> A -(m/d)-> A -d-> A."""
    if i == 0:
        return gcd(d, e)
    a, b = (m // d, d) if i % 2 else (d, m // d)
    # ker(a on Z/e) / im(b on Z/e)
    return gcd(a, e) * gcd(b, e) // e


def zm_ext(M: ZmModule, N: ZmModule, i: int) -> ZmModule:
    if M.m != N.m:
        raise ModulusMismatch(f"{M.m} vs {N.m}")
    factors = []
    for d in M.summands:
        for e in N.summands:
            o = _cyclic_ext_order(M.m, d, e, i)
            if o > 1:
                factors.append(o)
    z = z_from_invariants(0, factors)
    return zm_from_invariants(M.m, z.invariant_factors)


def zm_is_k_torsionfree(M: ZmModule, k: int) -> TorsionfreeReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    T = zm_transpose(M)
    R = zm_regular(M.m)
    dims = []
    for i in range(1, k + 1):
        e = zm_ext(T, R, i)
        o = 1
        for d in e.summands:
            o *= d
        dims.append(0 if o == 1 else o)
    first = next((i + 1 for i, d in enumerate(dims) if d), None)
    return TorsionfreeReport(k, first is None, first, dims)


def zm_modules(m: int, max_summands: int) -> list:
    divs = [d for d in range(2, m + 1) if m % d == 0]
    out = [ZmModule(m, ())]

    def rec(start, acc):
        if acc:
            out.append(ZmModule(m, tuple(acc)))
        if len(acc) == max_summands:
            return
        for i in range(start, len(divs)):
            rec(i, acc + [divs[i]])

    rec(0, [])
    return out


# ---------------------------------------------------------------------------
# the n = 1 construction over Z -> Z/m


def _lattice_kernel_mod(E: IntMatrix, m: int) -> IntMatrix:
    """Basis (columns) of {v in Z^c : E v = 0 mod m}."""
    r, c = E.rows, E.cols
    if c == 0:
        return IntMatrix.zeros(0, 0)
    big = E.hstack(IntMatrix([[m if i == j else 0 for j in range(r)] for i in range(r)], cols=r)) if r else E
    u, d, v = smith_normal_form(big)
    rk = sum(1 for i in range(min(d.rows, d.cols)) if d[i][i])
    ker = v.columns(list(range(rk, big.cols)))
    top = IntMatrix([ker[i] for i in range(c)], cols=ker.cols)
    return lattice_basis(top)


def _in_lattice(gens: IntMatrix, vecs: IntMatrix) -> bool:
    for j in range(vecs.cols):
        col = [vecs[i][j] for i in range(vecs.rows)]
        if not any(col):
            continue
        if gens.cols == 0 or int_solve(gens, col) is None:
            return False
    return True


def _solve_columns(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    cols = []
    for j in range(b.cols):
        x = int_solve(a, [b[i][j] for i in range(b.rows)])
        if x is None:
            raise ArithmeticError("lift does not exist")
        cols.append(x)
    return IntMatrix([list(r) for r in zip(*cols)], cols=b.cols) if cols else IntMatrix.zeros(a.cols, 0)


@dataclass
class SesCertificate:
    Q: ZModule
    middle: ZModule
    right: ZModule
    expected_right: ZModule
    checks: dict
    matrices: dict

    @property
    def passes(self) -> bool:
        return all(self.checks.values())


def ext_base_profile_z(m: int) -> dict:
    A = z_from_invariants(0, [m])
    e0, e1 = z_ext(A, 0), z_ext(A, 1)
    return {"ext0_zero": e0.is_zero, "ext1": e1.signature(),
            "ext1_is_A": e1.signature() == (0, (m,)), "concentration": 1 if e0.is_zero else None,
            "pd_A": 1, "gpd_equals_pd": Z_IS_REGULAR}


def theorem36_n1_check(m: int, M: ZmModule) -> SesCertificate:
    """Horseshoe over Z for 0 -> Ω²_A M -> P¹ -> P⁰ -> M -> 0 and the sequence 0 -> Q -> Coker g -> Coker h -> 0."""
    if M.m != m:
        raise ModulusMismatch(f"{M.m} vs {m}")
    s = len(M.summands)
    rel_idx = [j for j, d in enumerate(M.summands) if d != m]
    t = len(rel_idx)
    # P⁰_0 = Z^t (cover of Ω¹_A M) ⊕ Z^s (cover of M), mapped into P⁰ = A^s
    E0 = IntMatrix.zeros(s, t + s)
    for c, j in enumerate(rel_idx):
        E0[j][c] = M.summands[j]
    for j in range(s):
        E0[j][t + j] = 1
    # P¹_0 = Z^t (cover of Ω²_A M) ⊕ Z^t (lift of the cover of Ω¹_A M), mapped into P¹ = A^t
    E1 = IntMatrix.zeros(t, 2 * t)
    for c, j in enumerate(rel_idx):
        E1[c][c] = m // M.summands[j]
        E1[c][t + c] = 1
    # chain map P¹_0 -> P⁰_0: identity on the Ω¹_A M block
    C = IntMatrix.zeros(t + s, 2 * t)
    for c in range(t):
        C[c][t + c] = 1
    B0 = _lattice_kernel_mod(E0, m)
    B1 = _lattice_kernel_mod(E1, m)
    k0, k1 = B0.cols, B1.cols
    Gamma = _solve_columns(B0, C @ B1) if k1 else IntMatrix.zeros(k0, 0)
    g = Gamma.T if Gamma.rows or Gamma.cols else IntMatrix.zeros(k1, k0)
    g = IntMatrix(g, cols=k0) if g.rows else IntMatrix.zeros(k1, k0)
    X = z_cokernel(g)
    CT = C.T if C.rows or C.cols else IntMatrix.zeros(2 * t, t + s)
    Q = z_cokernel(IntMatrix(CT, cols=t + s) if CT.rows else IntMatrix.zeros(2 * t, t + s))
    B1T = B1.T if k1 else IntMatrix.zeros(0, 2 * t)
    J = B1T.columns(list(range(t))) if k1 else IntMatrix.zeros(0, t)
    y_rel = B1T.hstack(g) if k1 else IntMatrix.zeros(0, 0)
    Y = z_cokernel(y_rel)
    trA = zm_transpose(M).as_z()
    expected = z_tensor(trA, z_ext(z_from_invariants(0, [m]), 1))
    checks = {
        "chain_map_commutes": _chain_commutes(E0, E1, C, M, rel_idx, m),
        "q_free": Q.is_free,
        "j_injective": _rank(J.hstack(g)) == _rank(g) + t if k1 else t == 0,
        "image_j_is_kernel": _in_lattice(J.hstack(g), B1T) if k1 else True,
        "right_term_matches": Y.signature() == expected.signature(),
        "q_rank_matches_cover": Q.free_rank == t,
    }
    mats = {"E0": E0, "E1": E1, "C": C, "B0": B0, "B1": B1, "Gamma": Gamma, "J": J}
    return SesCertificate(Q, X, Y, expected, checks, {k: [list(r) for r in v] for k, v in mats.items()})


def _chain_commutes(E0, E1, C, M, rel_idx, m) -> bool:
    s, t = len(M.summands), len(rel_idx)
    D = IntMatrix.zeros(s, t)
    for c, j in enumerate(rel_idx):
        D[j][c] = M.summands[j]
    if t == 0:
        return True
    lhs, rhs = E0 @ C, D @ E1
    return all((lhs[i][j] - rhs[i][j]) % m == 0 for i in range(s) for j in range(2 * t))


@dataclass
class Cor482Report:
    m: int
    module: ZmModule
    k: int
    over_A: bool
    over_Z: bool

    @property
    def passes(self) -> bool:
        return self.over_A == self.over_Z


def cor48_2_check(m: int, M: ZmModule, k: int) -> Cor482Report:
    """M k-torsionfree over Z/m iff Ω¹_Z(M) is (k+1)-torsionfree over Z; both sides computed."""
    if k < 1:
        raise ValueError("k must be at least 1")
    lhs = zm_is_k_torsionfree(M, k).verdict
    rhs = z_is_k_torsionfree(z_syzygy(M.as_z()), k + 1).verdict
    return Cor482Report(m, M, k, lhs, rhs)
