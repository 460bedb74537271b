import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from torsionfree import algebra as alg
from torsionfree.catalog import enumerate_modules_up_to
from torsionfree.cases import named_ring
from torsionfree.homcore import (
    InvalidPresentation,
    evaluation_map,
    ext_dims,
    hom_dim,
    is_k_torsionfree,
    is_projective,
    is_self_injective,
    is_totally_reflexive_up_to,
    minimal_injective_resolution,
    minimal_projective_resolution,
    padded_projective_resolution,
    projective_cover,
    projective_dimension_at_most,
    simple_modules,
    syzygy,
    tensor_over,
    tr,
    transpose,
)
from torsionfree.isomorph import is_isomorphic, is_stably_isomorphic

POOL_RINGS = ("f2_dual_numbers", "f3_x3", "f3_triangular", "f2_rad_square_zero", "f2_x2_y2")


def _pool():
    out = []
    for name in POOL_RINGS:
        out.extend(m for _, m in enumerate_modules_up_to(named_ring(name), 3).modules if m.dim)
    return out


POOL = _pool()
modules = st.sampled_from(POOL)


def brute_hom_dim(M, N):
    """Count all linear maps commuting with the action, by enumeration."""
    p = M.p
    count = 0
    for flat in itertools.product(range(p), repeat=M.dim * N.dim):
        f = np.array(flat, dtype=np.int64).reshape(N.dim, M.dim)
        if all(not np.any((f @ a - b @ f) % p) for a, b in zip(M.action, N.action)):
            count += 1
    return round(np.log(count) / np.log(p))


def test_dual_numbers_examples():
    A = named_ring("f2_dual_numbers")
    k = simple_modules(A)[0]
    R = alg.regular_module(A)
    assert (hom_dim(k, k), hom_dim(k, R), hom_dim(R, k)) == (1, 1, 1)
    # k ⊗_A k: right k as an (F_2, A)-bimodule against left k as an (A, F_2)-bimodule
    F = alg.ground_field(2)
    right_k = alg.build_bimodule(F, A, [[[1]]], k.action)
    left_k = alg.build_bimodule(A, F, k.action, [[[1]]])
    assert tensor_over(right_k, left_k).bimodule.dim == 1
    res = minimal_projective_resolution(k, 5)
    assert res.validate() and all(res.term(i).dim == 2 for i in range(6))
    assert all(syzygy(k, i).dim == 1 for i in range(1, 5))
    assert is_isomorphic(tr(k), k)
    assert ext_dims(k, k, 6) == [1] * 7
    assert not any(projective_dimension_at_most(k, t) for t in range(11))
    assert is_self_injective(A)
    # A is injective over itself: nothing past degree 0
    inj = minimal_injective_resolution(R, 3)
    assert inj[0].dim == 2 and all(m.dim == 0 for m in inj[1:])


@given(modules, modules)
def test_hom_dim_matches_brute_force(M, N):
    if M.algebra != N.algebra or M.dim * N.dim > 9:
        return
    assert hom_dim(M, N) == brute_hom_dim(M, N)


@given(modules)
def test_four_term_exactness(M):
    assert transpose(M).four_term_exact()


@given(modules)
def test_double_transpose_is_stably_original(M):
    sm, sn, res = is_stably_isomorphic(tr(tr(M)), M)
    assert res


@given(modules)
def test_evaluation_sequence_matches_ext_of_transpose(M):
    T = tr(M)
    e = ext_dims(T, alg.regular_module(T.algebra), 2)
    ev = evaluation_map(M)
    assert (ev.kernel_dim(), ev.cokernel_dim()) == (e[1], e[2])


@given(modules, modules)
def test_ext_independent_of_resolution(M, N):
    if M.algebra != N.algebra:
        return
    a = ext_dims(M, N, 3)
    b = ext_dims(M, N, 3, padded_projective_resolution(M, 4))
    assert a == b


@given(modules, modules)
def test_ext1_from_hom_long_exact_sequence(M, N):
    if M.algebra != N.algebra:
        return
    # 0 -> Hom(M,N) -> Hom(P0,N) -> Hom(ΩM,N) -> Ext^1(M,N) -> 0
    P0 = projective_cover(M).module
    om = syzygy(M, 1)
    assert ext_dims(M, N, 1)[1] == hom_dim(om, N) - hom_dim(P0, N) + hom_dim(M, N)


@given(st.sampled_from([m for m in POOL if m.dim <= 2]))
def test_schanuel_padded_vs_minimal(M):
    # padded syzygies grow fast; the stable comparison is kept to small ones
    a = padded_projective_resolution(M, 1)
    b = minimal_projective_resolution(M, 1)
    assert a.validate() and b.validate()
    assert is_stably_isomorphic(a.syzygy(1), b.syzygy(1))[2]


def test_schanuel_second_syzygy_dual_numbers():
    k = simple_modules(named_ring("f2_dual_numbers"))[0]
    a = padded_projective_resolution(k, 2)
    sm, sn, res = is_stably_isomorphic(a.syzygy(2), k)
    assert res and sm.dim == sn.dim == 1


@given(modules, st.integers(1, 3))
def test_torsionfree_report_consistent(M, k):
    rep = is_k_torsionfree(M, k)
    T = tr(M)
    dims = ext_dims(T, alg.regular_module(T.algebra), k)[1:]
    assert rep.ext_dims == dims and rep.verdict == (not any(dims))
    if is_projective(M):
        assert rep.verdict


def test_torsionfree_examples():
    A = named_ring("f2_rad_square_zero")
    k = simple_modules(A)[0]
    # k sits in soc A, so it is torsionless; k* = soc A is 2-dimensional,
    # so k** has dimension 4 and k is not reflexive
    assert is_k_torsionfree(k, 1).verdict
    rep = is_k_torsionfree(k, 2)
    assert rep.verdict is False and rep.first_failure == 2
    assert evaluation_map(k).double_dual.dim == 4
    assert is_k_torsionfree(alg.regular_module(A), 4).verdict
    D = named_ring("f2_dual_numbers")
    kd = simple_modules(D)[0]
    assert is_k_torsionfree(kd, 5).verdict  # self-injective algebra


def test_gp_verdicts():
    D = named_ring("f2_dual_numbers")
    assert is_totally_reflexive_up_to(simple_modules(D)[0], 4).status == "confirmed_exact"
    A = named_ring("f2_rad_square_zero")
    v = is_totally_reflexive_up_to(simple_modules(A)[0], 4)
    assert v.status == "no" and not v.positive


def test_invalid_presentation_rejected():
    D = named_ring("f2_dual_numbers")
    k = simple_modules(D)[0]
    R = alg.regular_module(D)
    with pytest.raises(InvalidPresentation):
        transpose(k, (R, R, np.eye(2, dtype=np.int64), np.array([[1, 0]])))


def test_transpose_with_nonminimal_presentation_is_stably_same():
    D = named_ring("f2_dual_numbers")
    k = simple_modules(D)[0]
    res = padded_projective_resolution(k, 1)
    data = transpose(k, (res.term(1), res.term(0), res.differential(1), res.augmentation))
    assert data.four_term_exact()
    assert is_stably_isomorphic(data.transpose, tr(k))[2]


def test_triangular_simple_injective():
    from torsionfree.homcore import vector_dual

    A = named_ring("f3_triangular")
    S = next(s for s in simple_modules(A) if not is_projective(s))
    assert is_projective(vector_dual(S))  # D(S) projective over A^op: S is injective
    assert is_k_torsionfree(S, 1).verdict is False
    # hereditary base, simple non-projective: not Gorenstein projective
    assert is_totally_reflexive_up_to(S, 4).status == "no"


def test_torsionless_brute_force_triangular():
    # S torsionless iff some map into a free module of rank <= 2 is injective
    A = named_ring("f3_triangular")
    for S in simple_modules(A):
        F = alg.module_power(alg.regular_module(A), 2)
        from torsionfree.homcore import hom_basis
        H = hom_basis(S, F)
        maps = [sum(int(c) * h for c, h in zip(cs, H)) % 3
                for cs in itertools.product(range(3), repeat=len(H))] if len(H) else []
        embeds = any(np.any(f) for f in maps)
        assert embeds == is_k_torsionfree(S, 1).verdict
