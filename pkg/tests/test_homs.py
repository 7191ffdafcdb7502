import numpy as np
import pytest

from preproj.algebras import from_presentation
from preproj.homs import (
    algebra_dual,
    ext_into_algebra_table,
    ext_module_table,
    hom_dim_table,
    hom_space,
    is_cohen_macaulay,
)
from preproj.isomorphism import (
    decompose,
    graded_dim_table,
    is_isomorphic,
    stable_hom_dim,
    stable_hom_table,
    strip_projectives,
)
from preproj.linalg import Field, is_invertible
from preproj.modules import direct_sum, dual, projective, regular, simple, syzygy
from preproj.presentations import Arrow, QuiverPresentation

F = Field(32003)


@pytest.fixture(scope="module")
def a2():
    return from_presentation(QuiverPresentation(["1", "2"], [Arrow("a", "1", "2")]), F)


@pytest.fixture(scope="module")
def a3rad2():
    pres = QuiverPresentation(
        ["1", "2", "3"],
        [Arrow("a", "1", "2"), Arrow("b", "2", "3")],
        relations=[[(1, ["a", "b"])]],
    )
    return from_presentation(pres, F)


def test_endo_of_projective_is_one_dimensional(a2):
    p1 = projective(a2, 0)
    assert hom_space(p1, p1, 0).dim == 1


def test_hom_between_distinct_simples_vanishes(a2):
    assert hom_space(simple(a2, 0), simple(a2, 1), 0).dim == 0


def test_identity_in_endos(a2):
    p1 = projective(a2, 0)
    hb = hom_space(p1, p1, 0)
    w = hb.matrix(0)
    assert is_invertible(w, 32003)


def test_hom_p1_to_p2(a2):
    # Hom(e_1 A, e_2 A) = e_2 A e_1 = 0;  Hom(e_2 A, e_1 A) = e_1 A e_2 = <a>
    assert hom_space(projective(a2, 0), projective(a2, 1), 0).dim == 0
    assert hom_space(projective(a2, 1), projective(a2, 0), 0).dim == 1


def test_ext1_simples_a2(a2):
    # Ext^1(S_1, S_2) = k (one arrow 1 -> 2)
    t = ext_module_table(simple(a2, 0), simple(a2, 1), 1)
    assert t == {0: 1}
    assert ext_module_table(simple(a2, 1), simple(a2, 0), 1) == {}


def test_ext_vanishes_on_projectives(a2):
    p1 = projective(a2, 0)
    for j in (1, 2):
        assert ext_module_table(p1, simple(a2, 0), j) == {}


def test_ext0_equals_hom(a2):
    m = projective(a2, 0)
    n = simple(a2, 0)
    assert ext_module_table(m, n, 0) == hom_dim_table(m, n)


def test_ext_into_algebra_cm(a2):
    # over a hereditary algebra: Ext^1(S_1, A) = 0 iff S_1 CM; S_1 is not CM
    # over kA2 since pd S_1 = 1 while inj dim of regular is finite:
    t = ext_into_algebra_table(simple(a2, 0), 2)
    assert any(j == 1 for (j, i) in t)
    # a projective module is always CM
    assert is_cohen_macaulay(projective(a2, 0), 1)


def test_algebra_dual_of_projective(a2):
    # (e_1 A)^vee = A e_1 over the opposite: dimension 1 (only e_1)
    d, amb, _ = algebra_dual(projective(a2, 0))
    assert d.dim == 1
    d2, _, _ = algebra_dual(projective(a2, 1))
    assert d2.dim == 2


def test_is_isomorphic_self_and_shift(a2):
    p1 = projective(a2, 0)
    ok, delta, w = is_isomorphic(p1, p1)
    assert ok and delta == 0 and is_invertible(w, 32003)
    shifted = p1.shifted(3)
    ok, delta, _ = is_isomorphic(shifted, p1, allow_shift=True)
    assert ok and delta == 3
    ok, _, _ = is_isomorphic(shifted, p1)
    assert not ok


def test_not_isomorphic_dimension(a2):
    assert is_isomorphic(projective(a2, 0), simple(a2, 0))[0] is False


def test_decompose_regular(a2, a3rad2):
    pieces = decompose(regular(a2))
    assert sorted(p.dim for p in pieces) == [1, 2]
    pieces3 = decompose(regular(a3rad2))
    assert sorted(p.dim for p in pieces3) == [1, 2, 2]


def test_decompose_sum_with_multiplicity(a2):
    p1 = projective(a2, 0)
    m = direct_sum(a2, [p1, p1, simple(a2, 0)])
    pieces = decompose(m)
    assert sorted(p.dim for p in pieces) == [1, 2, 2]


def test_krull_schmidt_across_seeds(a3rad2):
    m = direct_sum(a3rad2, [regular(a3rad2), simple(a3rad2, 1)])
    t1 = sorted(tuple(sorted(graded_dim_table(x).items())) for x in decompose(m, np.random.default_rng(7)))
    t2 = sorted(tuple(sorted(graded_dim_table(x).items())) for x in decompose(m, np.random.default_rng(99)))
    assert t1 == t2


def test_strip_projectives(a2):
    p1 = projective(a2, 0)
    s1 = simple(a2, 0)
    m = direct_sum(a2, [p1, s1])
    stripped, projs = strip_projectives(m)
    assert stripped.dim == 1
    assert projs == [(0, 0)]
    # stripping a projective gives zero
    z, pr = strip_projectives(p1)
    assert z.dim == 0 and pr == [(0, 0)]


def test_dual_double_dual(a2):
    m = direct_sum(a2, [projective(a2, 0), simple(a2, 0)])
    dd = dual(dual(m))
    ok, delta, _ = is_isomorphic(dd, m)
    assert ok and delta == 0


def test_stable_hom_projective_vanishes(a2):
    p1 = projective(a2, 0)
    assert stable_hom_table(p1, simple(a2, 1), 0) == {}


def test_stable_hom_identity_survives(a2):
    s1 = simple(a2, 0)
    t = stable_hom_table(s1, s1, 0)
    assert t.get(0, 0) >= 1
