import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from torsionfree import algebra as alg
from torsionfree.cases import _skew_parts, named_ring
from torsionfree.catalog import enumerate_modules_up_to
from torsionfree.exactla import rank
from torsionfree.homcore import hom_dim, is_projective, simple_modules
from torsionfree.ringext import (
    HypothesisNotMet,
    NotMultiplicative,
    NotUnital,
    RingHom,
    canonical_qff_witness,
    coinduce,
    ext_base_profile,
    gproj_over_base_up_to,
    hom_R_A_R,
    identity_hom,
    induce,
    is_frobenius,
    is_frobenius_algebra,
    is_separable,
    is_split,
    quasi_ff_check,
    regular_bimodule_A_R,
    restrict,
    section_witness,
    tr_gorenstein_via_syzygy,
)

F2 = alg.ground_field(2)
R2, PI2, SEC2 = alg.dual_numbers(F2)
C2 = [[0, 1], [1, 0]]


def skew_inclusion():
    lam, table, action = _skew_parts()
    return alg.skew_group_algebra(lam, table, action)[1]


def example_projection():
    E = named_ring("f3_example_ring")
    return RingHom(E, alg.ground_field(3), [[1], [0], [0], [0], [0]])


R_MODULES = [m for _, m in enumerate_modules_up_to(R2, 4).modules if m.dim]


def test_ring_hom_validation():
    with pytest.raises(NotUnital):
        RingHom(F2, R2, [[0, 1]])
    D3 = alg.dual_numbers(alg.ground_field(3))[0]
    # x -> 1 is not multiplicative since x^2 = 0
    with pytest.raises(NotMultiplicative):
        RingHom(D3, alg.ground_field(3), [[1], [1]])


@given(st.sampled_from(R_MODULES))
def test_induce_and_coinduce_over_dual_numbers(M):
    x = M.action[1]
    # A ⊗_R M = M / xM and Hom_R(A, M) = ker x
    assert induce(PI2, M).dim == M.dim - rank(x, 2)
    assert coinduce(PI2, M).dim == M.dim - rank(x, 2)
    assert restrict(SEC2, M).dim == M.dim


@given(st.sampled_from(R_MODULES), st.integers(1, 3))
def test_adjunctions(M, n):
    k = alg.module_power(simple_modules(F2)[0], n)
    assert hom_dim(induce(PI2, M), k) == hom_dim(M, restrict(PI2, k))
    assert hom_dim(restrict(PI2, k), M) == hom_dim(k, coinduce(PI2, M))


def test_restrict_examples():
    R = alg.regular_module(R2)
    assert restrict(SEC2, R).dim == 2 and is_projective(restrict(SEC2, R))
    assert not is_projective(restrict(PI2, simple_modules(F2)[0]))


def test_ext_base_profile_dual_numbers():
    prof = ext_base_profile(PI2, 4)
    # R self-injective: Ext^i_R(k, R) = 0 for i > 0 and Hom_R(k, R) = soc R
    assert prof.dims == [1, 0, 0, 0, 0] and prof.concentration == 0
    assert hom_R_A_R(PI2).dim == 1
    assert gproj_over_base_up_to(PI2, 4).status == "confirmed_exact"


def test_tr_gorenstein_dual_numbers():
    k = simple_modules(F2)[0]
    g = tr_gorenstein_via_syzygy(PI2, k)
    assert g.module.dim == 0  # k is projective over the field
    with pytest.raises(HypothesisNotMet):
        tr_gorenstein_via_syzygy(PI2, k, n=1)


def test_detectors_identity_and_inclusions():
    ident = identity_hom(R2)
    assert is_frobenius(ident).verdict and is_separable(ident).verdict and is_split(ident).verdict
    inc = RingHom(F2, alg.group_algebra(2, C2), [[1, 0]])
    # char 2 divides |C_2|: Frobenius but not separable
    assert is_frobenius(inc).verdict and not is_separable(inc).verdict
    assert is_split(inc).verdict


def test_detectors_skew_inclusion():
    phi = skew_inclusion()
    assert is_frobenius(phi).verdict
    assert is_separable(phi).verdict  # |G| = 2 is a unit in F_3
    assert is_split(phi).verdict


def test_detectors_example_projection():
    phi = example_projection()
    assert is_separable(phi).verdict
    assert not is_split(phi).verdict
    assert is_frobenius(phi).verdict


def test_detectors_dual_numbers_projection():
    assert not is_frobenius(PI2).verdict  # k is not projective over R
    assert not is_split(PI2).verdict


def test_separability_element_is_certificate():
    phi = skew_inclusion()
    cert = is_separable(phi)
    A = phi.target
    # mu(e) = 1 in A ⊗_F A coordinates
    e = cert.element.reshape(A.dim, A.dim)
    mu = sum(int(e[i, j]) * A.sc[i, j] for i in range(A.dim) for j in range(A.dim)) % 3
    assert np.array_equal(mu, A.unit)


def test_qff_witnesses():
    ident = identity_hom(R2)
    assert quasi_ff_check(ident, regular_bimodule_A_R(ident)).passes
    zero = alg.BimoduleRep(R2, R2, 0, np.zeros((2, 0, 0)), np.zeros((2, 0, 0)), validate=False)
    assert not quasi_ff_check(ident, zero).passes
    assert quasi_ff_check(PI2, section_witness(PI2, SEC2)).passes
    assert canonical_qff_witness(PI2).passes
    assert is_frobenius_algebra(R2)
    with pytest.raises(HypothesisNotMet):
        canonical_qff_witness(identity_hom(named_ring("f3_triangular")))


def test_skew_over_dual_numbers_separable_and_split():
    lam = alg.monomial_quotient_algebra(3, ["x"], [[2]])
    big, inc = alg.skew_group_algebra(lam, C2, [np.eye(2), np.diag([1, 2])])
    assert big.dim == 4 and not big.is_commutative()
    cert = is_separable(inc)
    assert cert.verdict and is_split(inc).verdict and is_frobenius(inc).verdict
