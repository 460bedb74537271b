import itertools
import re

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from torsionfree import algebra as alg
from torsionfree.algebra import ModuleRep, RelationViolation, UnitNotIdentity
from torsionfree.cases import named_ring
from torsionfree.catalog import (
    BudgetExceeded,
    count_projective_classes,
    enumerate_modules_up_to,
    ext1_dim,
    extension_middle_terms,
    projective_classes,
)
from torsionfree.exactla import inverse, rank
from torsionfree.homcore import ext_dims, simple_modules
from torsionfree.isomorph import decompose, is_indecomposable, is_isomorphic, is_iso_witness

MONOMIAL_RINGS = ("f2_dual_numbers", "f3_x3", "f2_x2_y2", "f2_rad_square_zero")


def _exponents(label, variables):
    e = dict.fromkeys(variables, 0)
    for v, _, k in re.findall(r"([a-z])(\^(\d+))?", label):
        e[v] = int(k) if k else 1
    return [e[v] for v in variables]


def brute_class_count(A, d):
    """Isomorphism classes of d-dimensional modules over a monomial algebra.

    Every assignment of matrices to the variables is tried; valid ones are
    grouped into orbits under conjugation by GL_d(F_p).
    """
    p = A.p
    variables = sorted({c for lab in A.labels for c in lab if c.isalpha()})
    exps = [_exponents(lab, variables) for lab in A.labels]
    mats = [np.array(v, dtype=np.int64).reshape(d, d) for v in itertools.product(range(p), repeat=d * d)]
    gl = [(g, inverse(g, p)) for g in mats if rank(g, p) == d]
    seen, classes = set(), 0
    for gens in itertools.product(mats, repeat=len(variables)):
        action = []
        for e in exps:
            m = np.eye(d, dtype=np.int64)
            for g, k in zip(gens, e):
                m = m @ np.linalg.matrix_power(g, k) % p
            action.append(m)
        try:
            ModuleRep(A, d, action)
        except (RelationViolation, UnitNotIdentity):
            continue
        key = tuple(g.tobytes() for g in gens)
        if key in seen:
            continue
        classes += 1
        for g, gi in gl:
            seen.add(tuple((g @ x @ gi % p).tobytes() for x in gens))
    return classes


@pytest.mark.parametrize("name", MONOMIAL_RINGS)
def test_catalog_counts_match_brute_force(name):
    A = named_ring(name)
    cat = enumerate_modules_up_to(A, 2)
    for d in (1, 2):
        assert len(cat.modules_of_dim(d)) == brute_class_count(A, d)


def test_catalog_examples():
    D = named_ring("f2_dual_numbers")
    assert len(enumerate_modules_up_to(D, 2).modules) == 3
    # indecomposables k and A; classes of dim 1..4 are partitions into parts 1, 2
    assert len(enumerate_modules_up_to(D, 4).modules) == 1 + 2 + 2 + 3
    assert sorted(m.dim for m in enumerate_modules_up_to(named_ring("f3_x3"), 4).indecomposables) == [1, 2, 3]
    assert len(enumerate_modules_up_to(named_ring("f3_triangular"), 3).indecomposables) == 3
    with pytest.raises(BudgetExceeded):
        enumerate_modules_up_to(named_ring("f2_x2_y2"), 4, budget=10)
    with pytest.raises(ValueError):
        enumerate_modules_up_to(D, 0)


def test_catalog_identify_roundtrip():
    cat = enumerate_modules_up_to(named_ring("f3_triangular"), 3)
    for ms, M in cat.modules:
        assert cat.identify(M) == tuple(sorted(ms))


def test_projective_classes_count():
    for e, p in ((1, 2), (2, 2), (3, 3), (2, 5)):
        assert len(list(projective_classes(e, p))) == count_projective_classes(e, p)


POOL = [m for name in ("f2_dual_numbers", "f3_x3", "f3_triangular", "f2_rad_square_zero")
        for _, m in enumerate_modules_up_to(named_ring(name), 3).modules if m.dim]


@given(st.sampled_from(POOL), st.sampled_from(POOL))
def test_derivation_ext_matches_resolution_ext(Z, X):
    if Z.algebra != X.algebra:
        return
    assert ext1_dim(Z, X) == ext_dims(Z, X, 1)[1]


@given(st.sampled_from(POOL), st.data())
def test_iso_search_finds_basis_change(M, data):
    p, d = M.p, M.dim
    g = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=d * d, max_size=d * d))).reshape(d, d)
    assume(rank(g, p) == d)
    gi = inverse(g, p)
    N = ModuleRep(M.algebra, d, np.array([g @ a @ gi % p for a in M.action]))
    res = is_isomorphic(M, N)
    assert res and is_iso_witness(M, N, res.matrix)


@given(st.sampled_from(POOL))
def test_decomposition_certified(M):
    dec = decompose(M)
    assert dec.certify()
    assert all(is_indecomposable(s.module) for s in dec.summands)
    assert sum(s.module.dim for s in dec.summands) == M.dim


def test_non_isomorphic_same_dimension():
    A = named_ring("f3_triangular")
    s = simple_modules(A)
    assert s[0].dim == s[1].dim == 1 and not is_isomorphic(s[0], s[1])


def test_extension_middle_terms_dual_numbers():
    k = simple_modules(named_ring("f2_dual_numbers"))[0]
    mids = extension_middle_terms(k, k)
    # split extension k ⊕ k and the non-split one, which is A
    assert len(mids) == 2
    R = alg.regular_module(named_ring("f2_dual_numbers"))
    assert not is_isomorphic(mids[0], R) and is_isomorphic(mids[1], R)
