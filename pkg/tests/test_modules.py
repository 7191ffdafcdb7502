import numpy as np
import pytest

from preproj.algebras import from_presentation
from preproj.errors import InputError
from preproj.linalg import Field, rank
from preproj.modules import (
    direct_sum,
    dual,
    generator_expressions,
    inj_dim,
    min_resolution,
    proj_dim,
    projective,
    projective_cover,
    quotient,
    regular,
    simple,
    syzygy,
    top_generators,
    zero_module,
)
from preproj.presentations import Arrow, QuiverPresentation

F = Field(32003)
P = 32003


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


def test_projective_dims(a2):
    p1 = projective(a2, 0)
    p2 = projective(a2, 1)
    assert p1.dim == 2 and p2.dim == 1
    p1.verify()
    assert sorted(p1.degrees.tolist()) == [0, 0]


def test_point_projective():
    k = from_presentation(QuiverPresentation(["1"], []), F)
    p = projective(k, 0)
    assert p.dim == 1 and p.degrees.tolist() == [0]


def test_shift_inverse(a2):
    p = projective(a2, 0, shift=3)
    q = p.shifted(-3)
    base = projective(a2, 0)
    assert np.array_equal(q.degrees, base.degrees)


def test_regular_verifies(a2, a3rad2):
    regular(a2).verify()
    regular(a3rad2).verify()


def test_top_of_projective(a2):
    p1 = projective(a2, 0)
    gens = top_generators(p1)
    assert len(gens) == 1
    assert p1.vertex[gens[0]] == 0


def test_cover_of_simple(a2):
    s1 = simple(a2, 0)
    Pc, pmap = projective_cover(s1)
    assert Pc.terms == [(0, 0)]
    assert rank(pmap, P) == 1


def test_sink_simple_projective(a2):
    # vertex "2" is the sink: S_2 = P_2, first syzygy vanishes
    s2 = simple(a2, 1)
    assert syzygy(s2, 1).dim == 0
    assert proj_dim(s2, 5) == 0


def test_syzygy_of_source_simple(a2):
    s1 = simple(a2, 0)
    o1 = syzygy(s1, 1)
    assert o1.dim == 1
    assert o1.vertex.tolist() == [1]
    assert proj_dim(s1, 5) == 1


def test_gldim_a3rad2(a3rad2):
    pds = [proj_dim(simple(a3rad2, v), 8) for v in range(3)]
    assert max(pds) == 2


def test_resolution_exactness_minimality(a3rad2):
    s = simple(a3rad2, 0)
    res = min_resolution(s, 4)
    # exactness: rank d_{n+1} = dim P_n - rank d_n, with d_0 the augmentation
    prev_rank = rank(res.aug, P)
    assert prev_rank == s.dim
    n = 1
    while res.differential(n) is not None:
        d = res.differential(n)
        assert not (res.field.matmul(res.differential(n - 1) if n > 1 else res.aug, d)).any()
        assert rank(d, P) == res.term(n - 1).dim - prev_rank
        assert res.is_minimal_at(n)
        prev_rank = rank(d, P)
        n += 1


def test_dual_dims(a2):
    p1 = projective(a2, 0)
    d = dual(p1)
    assert d.dim == 2
    assert d.algebra is a2.opposite()
    d.verify()
    dd = dual(d)
    assert dd.algebra is a2
    assert sorted(dd.degrees.tolist()) == sorted(p1.degrees.tolist())


def test_inj_dim(a2):
    # over a hereditary algebra the simple injective has injective dimension 0
    s1 = simple(a2, 0)
    assert inj_dim(s1, 5) == 0


def test_quotient_and_sum(a2):
    p1 = projective(a2, 0)
    m = direct_sum(a2, [p1, simple(a2, 0)])
    assert m.dim == 3
    m.verify()
    radm_cols = np.zeros((3, 1), dtype=np.int64)
    radm_cols[1, 0] = 1  # the radical vector of p1 inside the sum
    q, proj_m, keep = quotient(m, radm_cols)
    assert q.dim == 2
    q.verify()


def test_generator_expressions(a3rad2):
    p = projective(a3rad2, 0)
    K, records = generator_expressions(p)
    assert K.shape == (2, 2)
    assert records[0][1] == ()


def test_zero_module(a2):
    z = zero_module(a2)
    assert z.dim == 0
    assert proj_dim(z, 3) == 0
