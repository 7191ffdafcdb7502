import numpy as np
import pytest

from preproj.algebras import enveloping, from_presentation, tensor_op
from preproj.errors import DimensionBoundExceeded, InhomogeneousRelation
from preproj.linalg import Field
from preproj.presentations import Arrow, QuiverPresentation

from oracles import count_paths, quotient_dims_by_length

F = Field(32003)


def point_algebra():
    return from_presentation(QuiverPresentation(["1"], []), F)


def kA2():
    return from_presentation(
        QuiverPresentation(["1", "2"], [Arrow("a", "1", "2")]), F
    )


def kA3_beta_alpha():
    pres = QuiverPresentation(
        ["1", "2", "3"],
        [Arrow("a", "1", "2"), Arrow("b", "2", "3")],
        relations=[[(1, ["a", "b"])]],
    )
    return from_presentation(pres, F)


def test_point():
    k = point_algebra()
    assert k.dim == 1
    assert k.idempotents == [0]
    k.validate()


def test_kA2_dim3():
    a = kA2()
    assert a.dim == 3
    assert len(a.idempotents) == 2
    a.validate()
    # oracle: paths of A2
    assert count_paths(["1", "2"], [(0, 1)]) == 3


def test_linear_A3_rad_square():
    # relation "traverse a then b" = 0 kills the unique length-2 path
    a = kA3_beta_alpha()
    assert a.dim == 5
    a.validate()
    dims = quotient_dims_by_length(["1", "2", "3"], [(0, 1), (1, 2)], [[(1, (0, 1))]], 32003)
    assert sum(dims) == 5


def test_non_parallel_relation_rejected():
    pres = QuiverPresentation(
        ["1", "2", "3"],
        [Arrow("a", "1", "2"), Arrow("b", "2", "3"), Arrow("c", "1", "2")],
        relations=[[(1, ["a", "b"]), (1, ["c"])]],
    )
    with pytest.raises(InhomogeneousRelation):
        from_presentation(pres, F)


def test_loop_not_finite_dimensional():
    pres = QuiverPresentation(["1"], [Arrow("x", "1", "1")])
    with pytest.raises(DimensionBoundExceeded):
        from_presentation(pres, F, max_len=8)


def test_opposite_involution():
    a = kA3_beta_alpha()
    opop = a.opposite().opposite()
    for i in range(a.dim):
        for j in range(a.dim):
            assert a.mult(i, j) == opop.mult(i, j)
    a.opposite().validate()


def test_opposite_of_kA2_is_reversed_quiver():
    op = kA2().opposite()
    rev = from_presentation(QuiverPresentation(["1", "2"], [Arrow("a", "2", "1")]), F)
    assert op.dim == rev.dim
    for i in range(op.dim):
        assert op.left_vertex[i] == rev.left_vertex[i]
        assert op.right_vertex[i] == rev.right_vertex[i]
        for j in range(op.dim):
            assert op.mult(i, j) == rev.mult(i, j)


def test_tensor_point():
    k = point_algebra()
    kk = tensor_op(k, k)
    assert kk.dim == 1
    kk.validate()


def test_tensor_dim_and_validate():
    a = kA2()
    e = enveloping(a)
    assert e.dim == 9
    e.validate(exhaustive=True)


def test_degree_zero_part_of_ungraded_is_identity():
    a = kA3_beta_alpha()
    z = a.degree_zero_part()
    assert z.dim == a.dim
    for i in range(a.dim):
        for j in range(a.dim):
            assert z.mult(i, j) == a.mult(i, j)


def test_graded_arrow_degree_zero_part():
    pres = QuiverPresentation(["1", "2"], [Arrow("a", "1", "2", degree=1)])
    a = from_presentation(pres, F)
    assert a.dim == 3
    assert sorted(a.degrees.tolist()) == [0, 0, 1]
    z = a.degree_zero_part()
    assert z.dim == 2
    z.validate()


def test_relations_with_coefficients():
    # commutativity square: d * c = b * a  (traverse order), gldim 2 algebra
    pres = QuiverPresentation(
        ["1", "2", "3", "4"],
        [
            Arrow("a", "1", "2"),
            Arrow("b", "2", "4"),
            Arrow("c", "1", "3"),
            Arrow("d", "3", "4"),
        ],
        relations=[[(1, ["a", "b"]), (-1, ["c", "d"])]],
    )
    alg = from_presentation(pres, F)
    # paths: 4 vertices, 4 arrows, two length-2 paths identified -> 9
    assert alg.dim == 9
    alg.validate()
    dims = quotient_dims_by_length(
        ["1", "2", "3", "4"],
        [(0, 1), (1, 3), (0, 2), (2, 3)],
        [[(1, (0, 1)), (-1, (2, 3))]],
        32003,
    )
    assert sum(dims) == 9


def test_tensor_words_and_action_consistency():
    e = enveloping(kA3_beta_alpha())
    e.validate(exhaustive=False, samples=500)
