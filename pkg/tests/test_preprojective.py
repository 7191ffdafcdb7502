import numpy as np
import pytest

from preproj.algebras import from_presentation
from preproj.errors import InputError
from preproj.linalg import Field, rank
from preproj.modules import proj_dim, simple
from preproj.preprojective import (
    QuiverWithPotential,
    cyclic_derivative,
    double_quiver_pi2,
    ext_bimodule,
    jacobian,
    keller_qp,
    preprojective_bimodule_complex,
    second_derivative_terms,
    tensor_pi_d,
)
from preproj.presentations import Arrow, QuiverPresentation

from oracles import quotient_dims_by_length

F = Field(32003)
P = 32003


def linear_quiver(n):
    vs = [str(i + 1) for i in range(n)]
    arrows = [Arrow(f"a{i+1}", vs[i], vs[i + 1]) for i in range(n - 1)]
    return QuiverPresentation(vs, arrows)


def a3_rad_square():
    return QuiverPresentation(
        ["1", "2", "3"],
        [Arrow("a", "1", "2"), Arrow("b", "2", "3")],
        relations=[[(1, ["a", "b"])]],
    )


def graded_total_dims(alg):
    out = {}
    for i in range(alg.dim):
        out[int(alg.degrees[i])] = out.get(int(alg.degrees[i]), 0) + 1
    return out


def preprojective_oracle_dims(n):
    """Total dimension of the double-quiver quotient for linear A_n, computed
    by brute-force path enumeration modulo the preprojective relations."""
    vs = list(range(n))
    arrows = [(i, i + 1) for i in range(n - 1)] + [(i + 1, i) for i in range(n - 1)]
    half = n - 1
    rels = []
    for i in range(n):
        terms = []
        for a in range(half):
            if arrows[a][0] == i:
                terms.append((1, (a, half + a)))
            if arrows[a][1] == i:
                terms.append((-1, (half + a, a)))
        if terms:
            rels.append(terms)
    return sum(quotient_dims_by_length([str(v) for v in vs], arrows, rels, P, max_len=14))


def test_pi2_point():
    pres = double_quiver_pi2(QuiverPresentation(["1"], []))
    alg = from_presentation(pres, F)
    assert alg.dim == 1


@pytest.mark.parametrize("n,expected", [(2, 4), (3, 10), (4, 20)])
def test_pi2_linear_dims(n, expected):
    assert preprojective_oracle_dims(n) == expected  # independent oracle
    alg = from_presentation(double_quiver_pi2(linear_quiver(n)), F)
    assert alg.dim == expected


def test_pi2_a2_graded_dims():
    alg = from_presentation(double_quiver_pi2(linear_quiver(2)), F)
    assert graded_total_dims(alg) == {0: 3, 1: 1}
    alg.validate()


def test_double_quiver_rejects_cycles():
    pres = QuiverPresentation(["1", "2"], [Arrow("a", "1", "2"), Arrow("b", "2", "1")])
    with pytest.raises(InputError):
        double_quiver_pi2(pres)


def cycle3_qp(deg_c=1):
    # traversal cycle c: 1->2, b: 2->3, a: 3->1; potential c*b*a
    pres = QuiverPresentation(
        ["1", "2", "3"],
        [Arrow("c", "1", "2", deg_c), Arrow("b", "2", "3", 0), Arrow("a", "3", "1", 0)],
    )
    ci = pres.arrow_index("c")
    bi = pres.arrow_index("b")
    ai = pres.arrow_index("a")
    return QuiverWithPotential(pres, [(1, (ci, bi, ai))])


def test_cyclic_derivative_loop():
    pres = QuiverPresentation(["1"], [Arrow("x", "1", "1")])
    qp = QuiverWithPotential(pres, [(1, (0,))])
    assert cyclic_derivative(qp, "x") == [(1, ())]


def test_cyclic_derivative_3cycle():
    qp = cycle3_qp()
    terms = cyclic_derivative(qp, "c")
    # d_c(cba) = ba
    assert len(terms) == 1
    c, w = terms[0]
    names = [qp.presentation.arrows[i].name for i in w]
    assert c == 1 and names == ["b", "a"]


def test_cyclic_derivative_rotation_invariant():
    qp = cycle3_qp()
    ci = qp.presentation.arrow_index("c")
    bi = qp.presentation.arrow_index("b")
    ai = qp.presentation.arrow_index("a")
    rotated = QuiverWithPotential(qp.presentation, [(1, (bi, ai, ci))])
    for name in ("a", "b", "c"):
        assert cyclic_derivative(qp, name) == cyclic_derivative(rotated, name)


def test_second_derivative_terms():
    qp = cycle3_qp()
    # pair (b = c, c = b): cycle cba: x interval and y interval around the marks
    terms = second_derivative_terms(qp, "c", "b")
    assert len(terms) == 1
    coeff, x, y = terms[0]
    names = lambda w: [qp.presentation.arrows[i].name for i in w]
    assert names(x) == ["a"] and names(y) == []
    terms_self = second_derivative_terms(qp, "c", "c")
    assert terms_self == []


def test_jacobian_3cycle():
    alg = jacobian(cycle3_qp(), F)
    assert alg.dim == 6
    assert graded_total_dims(alg) == {0: 5, 1: 1}
    alg.validate()
    # degree zero part is kA3 mod rad^2 (dim 5)
    z = alg.degree_zero_part()
    assert z.dim == 5


def test_jacobian_with_zero_potential_is_path_algebra():
    pres = QuiverPresentation(["1", "2"], [Arrow("a", "1", "2")])
    qp = QuiverWithPotential(pres, [])
    alg = jacobian(qp, F)
    assert alg.dim == 3


def test_keller_qp_hereditary():
    qp = keller_qp(linear_quiver(3), F)
    assert qp.potential == []
    assert len(qp.presentation.arrows) == 2
    assert jacobian(qp, F).dim == from_presentation(linear_quiver(3), F).dim


def test_keller_qp_a3rad2():
    qp = keller_qp(a3_rad_square(), F)
    # one relation 1 -> 3: one new arrow 3 -> 1 of degree 1
    assert len(qp.presentation.arrows) == 3
    new = qp.presentation.arrows[2]
    assert (new.source, new.target, new.degree) == ("3", "1", 1)
    alg = jacobian(qp, F)
    assert alg.dim == 6
    assert graded_total_dims(alg) == {0: 5, 1: 1}


def test_keller_qp_rejects_redundant_relations():
    pres = QuiverPresentation(
        ["1", "2", "3"],
        [Arrow("a", "1", "2"), Arrow("b", "2", "3")],
        relations=[[(1, ["a", "b"])], [(2, ["a", "b"])]],
    )
    with pytest.raises(InputError):
        keller_qp(pres, F)


def test_ext_bimodule_dims():
    # gldim <= d-2: E = 0
    lam = from_presentation(linear_quiver(2), F)
    E, ctx = ext_bimodule(lam, 3)
    assert E.dim == 0
    # kA2, d = 2: dim E = 1
    E2, _ = ext_bimodule(lam, 2)
    assert E2.dim == 1
    # kA3/rad^2, d = 3: dim E = 1
    lam3 = from_presentation(a3_rad_square(), F)
    E3, _ = ext_bimodule(lam3, 3)
    assert E3.dim == 1


def test_tensor_pi_d_semisimple():
    lam = from_presentation(QuiverPresentation(["1", "2"], []), F)
    pi = tensor_pi_d(lam, 2)
    assert pi.dim == lam.dim
    assert set(pi.degrees.tolist()) == {0}


def test_tensor_pi_d_a2():
    lam = from_presentation(linear_quiver(2), F)
    pi = tensor_pi_d(lam, 2)
    assert graded_total_dims(pi) == {0: 3, 1: 1}
    pi.validate()


def test_tensor_pi_d_a3rad2():
    lam = from_presentation(a3_rad_square(), F)
    pi = tensor_pi_d(lam, 3)
    assert graded_total_dims(pi) == {0: 5, 1: 1}
    pi.validate()


def test_tensor_pi_d_degenerate_case():
    # gldim <= d-2 gives back the algebra itself, concentrated in degree 0
    lam = from_presentation(linear_quiver(2), F)
    pi = tensor_pi_d(lam, 3)
    assert pi.dim == lam.dim
    for i in range(lam.dim):
        for j in range(lam.dim):
            assert pi.mult(i, j) == lam.mult(i, j)


def test_tensor_pi_d_a3():
    lam = from_presentation(linear_quiver(3), F)
    pi = tensor_pi_d(lam, 2)
    assert pi.dim == 10
    pi.validate()


def _check_three_term_complex(data, expect_min=True):
    f = Field(P)
    d1, d2, aug = data["d1"], data["d2"], data["aug"]
    assert not f.matmul(aug, d1).any()
    assert not f.matmul(d1, d2).any()
    # exact at P0: rank d1 = dim P0 - dim Pi (aug onto)
    P0 = data["P0"]
    reg_dim = aug.shape[0]
    assert rank(aug, P) == reg_dim
    assert rank(d1, P) == P0.dim - reg_dim
    # exact at P1: rank d2 = dim ker d1
    P1 = data["P1"]
    assert rank(d2, P) == P1.dim - rank(d1, P)


def test_pi2_explicit_complex_exact():
    alg = from_presentation(double_quiver_pi2(linear_quiver(2)), F)
    data = preprojective_bimodule_complex(alg, "pi2")
    _check_three_term_complex(data)


def test_pi2_explicit_complex_exact_a3():
    alg = from_presentation(double_quiver_pi2(linear_quiver(3)), F)
    data = preprojective_bimodule_complex(alg, "pi2")
    _check_three_term_complex(data)


def test_qp_explicit_complex_exact():
    alg = jacobian(cycle3_qp(), F)
    data = preprojective_bimodule_complex(alg, "qp")
    _check_three_term_complex(data)


def test_qp_complex_selfdual():
    # Hom-dual of d2 equals d2 with the internal shift by 1: entry by entry
    # through the swap table
    alg = jacobian(cycle3_qp(), F)
    data = preprojective_bimodule_complex(alg, "qp")
    ctx = data["ctx"]
    P1, P2, d2 = data["P1"], data["P2"], data["d2"]
    z = P2.algebra_entries(P1, d2)
    srcd, tgtd, dual_mat = ctx.dual_projective_sum_map(P2, P1, z)
    # the dual map runs P1^vee -> P2^vee; with the grading shifted by one it
    # must coincide with d2 again: compare the z-entries through the swap
    zdual = tgtd.algebra_entries(srcd, dual_mat)
    n = len(P1.terms)
    for b in range(len(P2.terms)):
        for c in range(n):
            orig = z[c][b]  # entry P2_b -> P1_c
            swapped = {ctx.swap_basis(k): v for k, v in zdual[b][c].items()}
            assert orig == swapped, (b, c, orig, swapped)
    # and the graded shift: dual terms swap vertices and negate generator degrees
    for (v, d), (vd, dd) in zip(P2.terms, srcd.terms):
        assert vd == ctx.swap_vertex(v) and dd == -d


def test_pi2_dual_of_d2_is_d1_shifted():
    # Hom(d2, env) ~ d1(1) for the double quiver complex
    alg = from_presentation(double_quiver_pi2(linear_quiver(2)), F)
    data = preprojective_bimodule_complex(alg, "pi2")
    ctx = data["ctx"]
    P0, P1, P2 = data["P0"], data["P1"], data["P2"]
    z2 = P2.algebra_entries(P1, data["d2"])
    srcd, tgtd, dual_mat = ctx.dual_projective_sum_map(P2, P1, z2)
    # tgtd = P1^vee, srcd = P2^vee; P2 = +_i (e_i ox e_i)(gendeg 1) so
    # P2^vee = +_i (e_i ox e_i)(gendeg -1) = P0 shifted by 1
    assert [(v, d + 1) for (v, d) in srcd.terms] == [(v, d) for (v, d) in P0.terms]
    zdual = tgtd.algebra_entries(srcd, dual_mat)
    z1 = P1.algebra_entries(P0, data["d1"])
    for k in range(len(P0.terms)):
        for l in range(len(P1.terms)):
            orig = z1[k][l]
            swapped = {ctx.swap_basis(kk): v for kk, v in zdual[k][l].items()}
            # the dual of d2 is d1 up to relabeling bars; compare supports
            assert (not orig) == (not swapped)
