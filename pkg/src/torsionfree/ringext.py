"""Finite ring homomorphisms R -> A and the functors and detectors along them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .algebra import (
    Algebra,
    BimoduleRep,
    ModuleRep,
    as_left_bimodule,
    as_right_bimodule,
    opposite,
    regular_bimodule,
    regular_module,
)
from .exactla import as_fp, column_space, solve
from .homcore import (
    GpVerdict,
    algebra_structure,
    bimodule_hom_basis,
    dual_map,
    dual_star,
    ext_dims,
    hom_bimodule,
    is_projective,
    is_totally_reflexive_up_to,
    minimal_projective_resolution,
    projective_cover,
    quotient,
    tensor_over,
    transpose,
    vector_dual,
)
from .isomorph import is_bimodule_isomorphic, is_isomorphic


class NotMultiplicative(ValueError):
    def __init__(self, i, j):
        super().__init__(f"phi(b{i} b{j}) != phi(b{i}) phi(b{j})")
        self.pair = (i, j)


class NotUnital(ValueError):
    pass


class HypothesisNotMet(RuntimeError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class RingHom:
    """phi: source -> target; ``images[i]`` is phi(b_i) in target coordinates."""

    def __init__(self, source: Algebra, target: Algebra, images, *, validate: bool = True):
        if source.p != target.p:
            raise ValueError("ring homomorphism between different characteristics")
        self.source = source
        self.target = target
        self.images = as_fp(images, source.p).reshape(source.dim, target.dim)
        self.images.setflags(write=False)
        if validate:
            self._validate()

    @property
    def p(self) -> int:
        return self.source.p

    def _validate(self):
        R, A, p = self.source, self.target, self.p
        if not np.array_equal(self.images.T @ R.unit % p, A.unit):
            raise NotUnital("phi(1) != 1")
        for i in range(R.dim):
            for j in range(R.dim):
                lhs = self.images.T @ R.sc[i, j] % p
                rhs = A.mul(self.images[i], self.images[j])
                if not np.array_equal(lhs, rhs):
                    raise NotMultiplicative(i, j)

    def apply(self, r: np.ndarray) -> np.ndarray:
        return self.images.T @ np.asarray(r) % self.p

    def _key(self):
        return (self.source._key(), self.target._key(), self.images.tobytes())

    def __eq__(self, other):
        return isinstance(other, RingHom) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def to_json(self) -> dict:
        return {"kind": "ring_hom", "source": self.source.digest, "target": self.target.digest,
                "images": self.images.tolist()}

    # target viewed over the source on various sides
    @cached_property
    def target_as_A_R(self) -> BimoduleRep:
        A = self.target
        right = np.array([A.right_mult_of(v) for v in self.images])
        return BimoduleRep(A, self.source, A.dim, A.left_mult, right, validate=False)

    @cached_property
    def target_as_R_A(self) -> BimoduleRep:
        A = self.target
        left = np.array([A.left_mult_of(v) for v in self.images])
        return BimoduleRep(self.source, A, A.dim, left, A.right_mult, validate=False)

    @cached_property
    def target_as_R_R(self) -> BimoduleRep:
        A = self.target
        left = np.array([A.left_mult_of(v) for v in self.images])
        right = np.array([A.right_mult_of(v) for v in self.images])
        return BimoduleRep(self.source, self.source, A.dim, left, right, validate=False)

    @cached_property
    def hom_R_A_R(self) -> BimoduleRep:
        """Hom_R(A, R) with (a.f)(b) = f(ba) and (f.r)(b) = f(b) r."""
        return hom_bimodule(self.target_as_R_A, regular_bimodule(self.source)).bimodule


def build_ring_hom(source: Algebra, target: Algebra, images) -> RingHom:
    return RingHom(source, target, images)


def identity_hom(A: Algebra) -> RingHom:
    return RingHom(A, A, np.eye(A.dim, dtype=np.int64))


def opposite_hom(phi: RingHom) -> RingHom:
    return RingHom(opposite(phi.source), opposite(phi.target), phi.images, validate=False)


def restrict(phi: RingHom, M: ModuleRep) -> ModuleRep:
    act = np.einsum("ik,kab->iab", phi.images, M.action) % phi.p
    return ModuleRep(phi.source, M.dim, act, validate=False)


def restrict_bimodule_right(phi: RingHom, B: BimoduleRep) -> BimoduleRep:
    """An L-A bimodule viewed as an L-R bimodule."""
    right = np.einsum("ik,kab->iab", phi.images, B.right) % phi.p
    return BimoduleRep(B.left_over, phi.source, B.dim, B.left, right, validate=False)


def induce(phi: RingHom, M: ModuleRep) -> ModuleRep:
    """A ⊗_R M."""
    return tensor_over(phi.target_as_A_R, as_left_bimodule(M)).bimodule.left_module()


def coinduce(phi: RingHom, M: ModuleRep) -> ModuleRep:
    """Hom_R(A, M) with (a.f)(b) = f(ba)."""
    return hom_bimodule(phi.target_as_R_A, as_left_bimodule(M)).bimodule.left_module()


def hom_R_A_R(phi: RingHom) -> BimoduleRep:
    return phi.hom_R_A_R


@dataclass
class ExtProfile:
    dims: list
    concentration: Optional[int]
    ext_module: Optional[BimoduleRep]
    projective_over_A: bool


def ext_base_profile(phi: RingHom, cutoff: int) -> ExtProfile:
    """dim Ext^i_R(A, R) for i <= cutoff, with the degree-0 bimodule when concentrated there."""
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    AR = restrict(phi, regular_module(phi.target))
    dims = ext_dims(AR, regular_module(phi.source), cutoff)
    nonzero = [i for i, d in enumerate(dims) if d]
    n = nonzero[0] if len(nonzero) == 1 else None
    module, proj = None, False
    if n == 0:
        module = phi.hom_R_A_R
        proj = is_projective(module.left_module())
    return ExtProfile(dims, n, module, proj)


def gproj_over_base_up_to(phi: RingHom, cutoff: int) -> GpVerdict:
    return is_totally_reflexive_up_to(restrict(phi, regular_module(phi.target)), cutoff)


@dataclass
class GorensteinTranspose:
    module: ModuleRep
    trace: dict


def tr_gorenstein_via_syzygy(phi: RingHom, M: ModuleRep, n: int = 0, cutoff: int = 6) -> GorensteinTranspose:
    """Restrict a minimal A-presentation of M to R, dualize over R, take the cokernel."""
    if n != 0:
        raise HypothesisNotMet("over F_p algebras only n = 0 is certified; use the integer engine for n = 1")
    prof = ext_base_profile(phi, cutoff)
    if prof.concentration != 0:
        raise HypothesisNotMet(f"Ext_R(A, R) is not concentrated in degree 0: {prof.dims}")
    gp = gproj_over_base_up_to(phi, cutoff)
    if not gp.positive:
        raise HypothesisNotMet(f"A is not Gorenstein projective over R: {gp.witness}")
    data = restricted_dual_cokernel(phi, M)
    trace = {"p1": data.p1.dim, "p0": data.p0.dim, "d1_star": data.d1_star.tolist(), "gp_status": gp.status}
    return GorensteinTranspose(data.cokernel, trace)


@dataclass
class RestrictedDual:
    """Hom_R(P0, R) -> Hom_R(P1, R) -> Coker for a minimal A-presentation P1 -> P0 -> M restricted to R."""

    p1: ModuleRep
    p0: ModuleRep
    d1_star: np.ndarray
    cokernel: ModuleRep
    projection: np.ndarray


def restricted_dual_cokernel(phi: RingHom, M: ModuleRep) -> RestrictedDual:
    p = phi.p
    res = minimal_projective_resolution(M, 1)
    P1, P0 = restrict(phi, res.term(1)), restrict(phi, res.term(0))
    d1_star = dual_map(res.differential(1), P1, P0)
    p1s = dual_star(P1)
    img = column_space(d1_star, p) if d1_star.size else np.zeros((p1s.module.dim, 0), np.int64)
    q = quotient(p1s.module, img)
    return RestrictedDual(P1, P0, d1_star, q.module, q.projection)


def tensor_with_hom_R_A_R(phi: RingHom, N: ModuleRep) -> ModuleRep:
    """N ⊗_A Hom_R(A, R) for a right A-module N (a module over opposite(A)); a right R-module."""
    return tensor_over(as_right_bimodule(N), phi.hom_R_A_R).bimodule.right_module()


# ---------------------------------------------------------------------------
# detectors


@dataclass
class FrobeniusCertificate:
    verdict: bool
    projective_over_R: bool
    iso: Optional[np.ndarray]
    strategy: str = ""


def is_frobenius(phi: RingHom) -> FrobeniusCertificate:
    proj = is_projective(restrict(phi, regular_module(phi.target)))
    if not proj:
        return FrobeniusCertificate(False, False, None, "not projective")
    res = is_bimodule_isomorphic(regular_bimodule_A_R(phi), phi.hom_R_A_R)
    return FrobeniusCertificate(res.matrix is not None, True, res.matrix, res.strategy)


def regular_bimodule_A_R(phi: RingHom) -> BimoduleRep:
    return phi.target_as_A_R


@dataclass
class SeparabilityCertificate:
    verdict: bool
    element: Optional[np.ndarray]  # in A ⊗_F A coordinates (row-major pairs)


def _multiplication_full(A: Algebra) -> np.ndarray:
    return A.sc.reshape(A.dim * A.dim, A.dim).T.copy()


def is_separable(phi: RingHom) -> SeparabilityCertificate:
    """Solve a.e = e.a for all a and mu(e) = 1 in A ⊗_R A."""
    A, p = phi.target, phi.p
    t = tensor_over(phi.target_as_A_R, phi.target_as_R_A)
    T = t.bimodule
    mu = _multiplication_full(A) @ t.lift % p
    rows = [(T.left[g] - T.right[g]) % p for g in A.generators] + [mu]
    rhs = np.concatenate([np.zeros(T.dim * len(A.generators), np.int64), A.unit])
    e = solve(np.concatenate(rows, axis=0), rhs, p)
    if e is None:
        return SeparabilityCertificate(False, None)
    return SeparabilityCertificate(True, t.lift @ e % p)


@dataclass
class SplitCertificate:
    verdict: bool
    retraction: Optional[np.ndarray]  # R.dim x A.dim


def is_split(phi: RingHom) -> SplitCertificate:
    """An R-R bimodule map rho: A -> R with rho(phi(r)) = r."""
    R, p = phi.source, phi.p
    H = bimodule_hom_basis(phi.target_as_R_R, regular_bimodule(R))
    if H.shape[0] == 0:
        return SplitCertificate(False, None)
    phi_mat = phi.images.T
    lhs = np.stack([(h @ phi_mat % p).reshape(-1) for h in H], axis=1)
    c = solve(lhs, np.eye(R.dim, dtype=np.int64).reshape(-1), p)
    if c is None:
        return SplitCertificate(False, None)
    return SplitCertificate(True, np.einsum("i,ijk->jk", c, H) % p)


# ---------------------------------------------------------------------------
# quasi-faithfully flat witnesses


@dataclass
class QffWitness:
    T: BimoduleRep
    projective_over_A: bool
    faithfully_flat_over_R_op: bool
    hom_flat_over_R: bool
    details: dict = field(default_factory=dict)

    @property
    def passes(self) -> bool:
        return self.projective_over_A and self.faithfully_flat_over_R_op and self.hom_flat_over_R


def is_projective_generator(M: ModuleRep) -> tuple:
    cover = projective_cover(M)
    st = algebra_structure(M.algebra)
    labels = set(cover.term.labels)
    proj = cover.term.dim == M.dim
    return proj and labels == set(range(len(st.projectives))), {"projective": proj,
                                                                 "classes": sorted(labels)}


def quasi_ff_check(phi: RingHom, T: BimoduleRep) -> QffWitness:
    if T.left_over != phi.target or T.right_over != phi.source:
        raise ValueError("T must be an A-R bimodule")
    proj_A = T.dim > 0 and is_projective(T.left_module())
    gen, info = is_projective_generator(T.right_module()) if T.dim else (False, {"projective": True, "classes": []})
    hom = hom_bimodule(T, regular_bimodule(phi.target)).bimodule  # R-A bimodule
    flat = is_projective(hom.left_module())
    details = {"dim_T": T.dim, "right_cover": info, "dim_hom": hom.dim}
    return QffWitness(T, bool(proj_A), bool(gen), bool(flat), details)


def is_frobenius_algebra(R: Algebra) -> bool:
    """D(R_R) is isomorphic to R as left modules."""
    return is_isomorphic(vector_dual(regular_module(opposite(R))), regular_module(R)).matrix is not None


def canonical_qff_witness(phi: RingHom) -> QffWitness:
    """T = A ⊗_F R, valid when the source is a Frobenius algebra over F_p."""
    R, A, p = phi.source, phi.target, phi.p
    if not is_frobenius_algebra(R):
        raise HypothesisNotMet("source is not a Frobenius algebra over the prime field")
    ia, ir = np.eye(A.dim, dtype=np.int64), np.eye(R.dim, dtype=np.int64)
    left = np.array([np.kron(A.left_mult[a], ir) for a in range(A.dim)])
    right = np.array([np.kron(ia, R.right_mult[r]) for r in range(R.dim)])
    T = BimoduleRep(A, R, A.dim * R.dim, left % p, right % p, validate=False)
    return quasi_ff_check(phi, T)


def section_witness(phi: RingHom, section: RingHom) -> BimoduleRep:
    """T = R as an A-R bimodule through a ring section A -> R of phi."""
    R = phi.source
    left = np.array([R.left_mult_of(v) for v in section.images])
    return BimoduleRep(phi.target, R, R.dim, left, R.right_mult, validate=False)


def tensor_T(T: BimoduleRep, X: ModuleRep) -> ModuleRep:
    """T ⊗_R X as a left A-module."""
    return tensor_over(T, as_left_bimodule(X)).bimodule.left_module()


def hom_T_A(T: BimoduleRep) -> BimoduleRep:
    """Hom_A(T, A) as an R-A bimodule."""
    return hom_bimodule(T, regular_bimodule(T.left_over)).bimodule


def transpose_of(M: ModuleRep) -> ModuleRep:
    return transpose(M).transpose
