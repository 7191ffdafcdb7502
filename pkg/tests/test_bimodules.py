import numpy as np
import pytest

from preproj.algebras import from_presentation
from preproj.bimodules import (
    as_bimodule,
    check_lemma25,
    cm_replacement,
    left_projective_approximation,
    truncate_complex,
)
from preproj.homs import is_cohen_macaulay
from preproj.isomorphism import is_isomorphic
from preproj.linalg import Field, rank
from preproj.modules import (
    ProjectiveSum,
    direct_sum,
    min_resolution,
    projective,
    projective_cover,
    proj_dim,
    simple,
)
from preproj.presentations import Arrow, QuiverPresentation

F = Field(32003)
P = 32003


@pytest.fixture(scope="module")
def a2():
    return from_presentation(QuiverPresentation(["1", "2"], [Arrow("a", "1", "2")]), F)


@pytest.fixture(scope="module")
def a2ctx(a2):
    return as_bimodule(a2)


def test_point_bimodule():
    k = from_presentation(QuiverPresentation(["1"], []), F)
    ctx = as_bimodule(k)
    reg = ctx.regular_bimodule()
    assert reg.dim == 1 and ctx.env.dim == 1
    reg.verify()


def test_regular_bimodule_dims(a2ctx):
    reg = a2ctx.regular_bimodule()
    assert reg.dim == 3 and a2ctx.env.dim == 9
    reg.verify()


def test_cover_of_regular_bimodule_is_diagonal(a2ctx):
    # projective cover of the algebra over its envelope: one summand
    # (e_i ox e_i) env per vertex, generated in degree 0
    reg = a2ctx.regular_bimodule()
    P0, pmap = projective_cover(reg)
    n = a2ctx.algebra.n_vertices
    assert sorted(P0.terms) == sorted((a2ctx.pair_vertex(i, i), 0) for i in range(n))
    assert rank(pmap, P) == reg.dim


def test_bimodule_dual_of_projective(a2ctx):
    # dual of (e_i ox e_j) env (shifted) is (e_j ox e_i) env (shift negated)
    env = a2ctx.env
    for (i, j, s) in [(0, 0, 0), (0, 1, 2), (1, 0, -1)]:
        pv = a2ctx.pair_vertex(i, j)
        mod = ProjectiveSum(env, [(pv, -s)])  # generator degree -s
        d, amb, _ = a2ctx.bimodule_dual(mod)
        expect = ProjectiveSum(env, [(a2ctx.pair_vertex(j, i), s)])
        ok, delta, _ = is_isomorphic(d, expect)
        assert ok and delta == 0


def test_bimodule_dual_zero(a2ctx):
    from preproj.modules import zero_module

    d, _, _ = a2ctx.bimodule_dual(zero_module(a2ctx.env))
    assert d.dim == 0


def test_hereditary_bimodule_resolution(a2ctx):
    # kA2 has projective dimension 1 as a bimodule
    reg = a2ctx.regular_bimodule()
    assert proj_dim(reg, 5) == 1


def test_truncate_complex_splits(a2ctx):
    env = a2ctx.env
    reg = a2ctx.regular_bimodule()
    res = min_resolution(reg, 2)
    terms = {-n: res.term(n) for n in range(res.length_computed())}
    diffs = {-n: res.differential(n) for n in range(1, res.length_computed())}
    (lows, ld), (highs, hd) = truncate_complex(terms, diffs)
    # everything generated in degree 0 here: the high part is empty
    assert all(h is None for h in highs.values())
    assert sum(l.dim for l in lows.values() if l is not None) == sum(
        t.dim for t in terms.values()
    )


def test_truncate_complex_all_high(a2ctx):
    env = a2ctx.env
    pv = a2ctx.pair_vertex(0, 0)
    X = ProjectiveSum(env, [(pv, 1)])
    (lows, _), (highs, _) = truncate_complex({0: X}, {})
    assert lows[0] is None and highs[0].dim == X.dim


def test_left_projective_approximation_of_projective(a2):
    p1 = projective(a2, 0)
    Pbar, amap = left_projective_approximation(a2, p1)
    assert Pbar.dim == p1.dim
    assert rank(amap, P) == p1.dim  # injective


def test_left_projective_approximation_hom_surjectivity(a2):
    # x = S_2 = P_2 is CM over kA2 (g = 1); approximation must be injective
    # with Cohen-Macaulay cokernel
    s2 = projective(a2, 1)
    Pbar, amap = left_projective_approximation(a2, s2)
    assert rank(amap, P) == s2.dim


def test_cm_replacement_trivial_for_cm(a2):
    p = projective(a2, 0)
    K, mcm, pi, rep = cm_replacement(p, 1)
    assert K.dim == 0 and mcm.dim == p.dim


def test_cm_replacement_of_noncm_module(a2):
    # S_1 over kA2: g = 1 (kA2 is Gorenstein of dimension 1: pd D(kA2) = 1)
    s1 = simple(a2, 0)
    K, mcm, pi, rep = cm_replacement(s1, 1)
    assert rank(pi, P) == s1.dim  # surjective onto m
    assert is_cohen_macaulay(mcm, 1)
    assert proj_dim(K, 6) is not None  # finite projective dimension
    # exactness: dim K + dim m = dim M_cm
    assert K.dim + s1.dim == mcm.dim


def test_check_lemma25_projective(a2):
    c1, c2 = check_lemma25(projective(a2, 0), 1)
    assert c1 and c2


def test_check_lemma25_negative_case(a2):
    # a simple concentrated in negative degree has Ext into A(i), i < 0
    s = simple(a2, 0, degree=1)
    # Ext^1(S_1(shifted), A(i)): the resolution of S_1 sits in degree 1 now;
    # the lemma equivalence must come out (False, False) or (True, True)
    c1, c2 = check_lemma25(s, 1)
    assert c1 == c2
