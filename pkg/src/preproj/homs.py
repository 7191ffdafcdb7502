"""Hom spaces, Ext tables and algebra duals, all via projective presentations.

A degree-0 graded map out of M is determined by its values on the projective
cover generators of M, constrained by the first differential of the minimal
resolution.  This keeps every solve at the size of a few idempotent slices
instead of dim(M) * dim(N).
"""

from __future__ import annotations

import numpy as np

from .linalg import invert, kernel_basis, rank
from .modules import (
    GradedModule,
    ProjectiveSum,
    Resolution,
    generator_expressions,
    kernel_of_map,
    min_resolution,
    projective_cover,
    submodule,
    zero_module,
)


class HomBasis:
    """Basis of Hom_gr(M, N(p)) in generator-value coordinates."""

    def __init__(self, M, N, p, gen_terms, slices, vectors):
        self.M = M
        self.N = N
        self.p = p
        self.gen_terms = gen_terms  # P0 terms of M's cover: (vertex, gen degree)
        self.slices = slices  # per generator: N basis indices receiving its value
        self.vectors = vectors  # (total_value_dim, num_homs)
        self.offsets = np.cumsum([0] + [len(s) for s in slices])

    @property
    def dim(self):
        return self.vectors.shape[1]

    def value(self, coeffs, k):
        """f(gen_k) in N coordinates for f = sum coeffs * basis."""
        f = self.M.field
        v = f.matmul(self.vectors, np.asarray(coeffs).reshape(-1, 1))[:, 0]
        out = f.zeros(self.N.dim, 1)[:, 0]
        out[self.slices[k]] = v[self.offsets[k] : self.offsets[k + 1]]
        return out

    def realize(self, coeffs):
        """Full matrix (N.dim x M.dim) of the morphism with the given
        coordinates in this basis."""
        f = self.M.field
        K, records = generator_expressions(self.M)
        vals = [self.value(coeffs, k) for k in range(len(self.slices))]
        cols = []
        for (k, word) in records:
            cols.append(self.N.act_word(word, vals[k].reshape(-1, 1))[:, 0])
        F = np.stack(cols, axis=1) if cols else f.zeros(self.N.dim, 0)
        return f.matmul(F, invert(K, f.p))

    def matrix(self, j):
        e = self.M.field.zeros(self.dim, 1)[:, 0]
        e[j] = self.M.field.one_scalar()
        return self.realize(e)


def _value_slices(N, terms, p):
    out = []
    for (v, d) in terms:
        idx = np.nonzero((N.vertex == v) & (N.degrees == d + p))[0]
        out.append(idx)
    return out


def hom_space(M: GradedModule, N: GradedModule, p=0) -> HomBasis:
    """Basis of Hom_gr(M, N(p)): degree-0 maps M -> N(p)."""
    if M.algebra is not N.algebra:
        raise ValueError("algebra mismatch in hom_space")
    key = ("hom", id(N), p)
    if key in M._cache:
        return M._cache[key]
    f = M.field
    if M.dim == 0:
        hb = HomBasis(M, N, p, [], [], f.zeros(0, 0))
        M._cache[key] = hb
        return hb
    res = min_resolution(M, 1)
    P0 = res.term(0)
    slices = _value_slices(N, P0.terms, p)
    total = sum(len(s) for s in slices)
    if total == 0:
        hb = HomBasis(M, N, p, P0.terms, slices, f.zeros(0, 0))
        M._cache[key] = hb
        return hb
    P1 = res.term(1)
    if P1 is None or P1.dim == 0:
        vectors = f.eye(total)
    else:
        z = res.z_entries(1)  # z[k][l], map gen_l -> sum_k gen_k z_{kl}
        rows = []
        for l in range(len(P1.terms)):
            block_cols = []
            for k in range(len(P0.terms)):
                idx = slices[k]
                if len(idx) == 0:
                    block_cols.append(f.zeros(N.dim, 0))
                    continue
                cols = f.zeros(N.dim, len(idx))
                zkl = z[k][l]
                if zkl:
                    base = f.eye(N.dim)[:, idx]
                    cols = N.act_element(zkl, base)
                block_cols.append(cols)
            rows.append(np.concatenate(block_cols, axis=1))
        big = np.concatenate(rows, axis=0)
        vectors = kernel_basis(big, f.p)
    hb = HomBasis(M, N, p, P0.terms, slices, vectors)
    M._cache[key] = hb
    return hb


def hom_dim_table(M, N, shifts=None):
    """dict p -> dim Hom_gr(M, N(p)) over all shifts where it can be nonzero."""
    if M.dim == 0 or N.dim == 0:
        return {}
    gen_degs = [int(M.degrees[i]) for i in range(M.dim)]
    lo = int(N.degrees.min()) - max(gen_degs)
    hi = int(N.degrees.max()) - min(gen_degs)
    out = {}
    for p in range(lo, hi + 1) if shifts is None else shifts:
        d = hom_space(M, N, p).dim
        if d:
            out[p] = d
    return out


# -- duals into the algebra -----------------------------------------------------


def algebra_dual(M: GradedModule):
    """M^vee = Hom_A(M, A) as a graded module over the opposite algebra,
    computed as ker(P0^vee -> P1^vee) from the minimal presentation.

    Returns (dual_module, ambient, inclusion) where ambient is the dual of P0.
    """
    A = M.algebra
    op = A.opposite()
    f = M.field
    if M.dim == 0:
        z = zero_module(op)
        return z, z, f.zeros(0, 0)
    res = min_resolution(M, 1)
    P0, P1 = res.term(0), res.term(1)
    P0d = ProjectiveSum(op, [(v, -d) for (v, d) in P0.terms])
    if P1 is None or P1.dim == 0:
        incl = f.eye(P0d.dim)
        sub, C = submodule(P0d, incl)
        return sub, P0d, C
    P1d = ProjectiveSum(op, [(v, -d) for (v, d) in P1.terms])
    z = res.z_entries(1)
    images = f.zeros(P1d.dim, len(P0d.terms))
    for k in range(len(P0.terms)):
        acc = f.zeros(P1d.dim, 1)
        for l in range(len(P1.terms)):
            zkl = z[k][l]
            if not zkl:
                continue
            gv = f.zeros(P1d.dim, 1)
            gv[P1d.gen_positions[l], 0] = f.one_scalar()
            acc = f.reduce(acc + P1d.act_element(zkl, gv))
        images[:, k] = acc[:, 0]
    dmat = P0d.map_from_generator_images(P1d, images)
    kercols = kernel_of_map(P0d, dmat, f.p)
    if kercols.shape[1] == 0:
        return zero_module(op), P0d, f.zeros(P0d.dim, 0)
    sub, C = submodule(P0d, kercols)
    return sub, P0d, C


# -- Ext ------------------------------------------------------------------------


def _hom_into_algebra_dims(A, terms, i):
    """Per-summand slices of Hom_gr(P, A(i)) for P with the given terms:
    basis indices of (A e_v)_{i + d}."""
    out = []
    for (v, d) in terms:
        sup = A.ae_support(v)
        idx = [int(b) for b in sup if A.degrees[b] == i + d]
        out.append(idx)
    return out


def _ext_stage_matrix(A, terms0, terms1, z, i):
    """Matrix of Hom(P0, A(i)) -> Hom(P1, A(i)), f |-> f o d."""
    f = A.field
    sl0 = _hom_into_algebra_dims(A, terms0, i)
    sl1 = _hom_into_algebra_dims(A, terms1, i)
    n0 = sum(len(s) for s in sl0)
    n1 = sum(len(s) for s in sl1)
    mat = f.zeros(n1, n0)
    if n0 == 0 or n1 == 0:
        return mat, n0, n1
    col = 0
    pos1 = {}
    row = 0
    for l, idx in enumerate(sl1):
        for b in idx:
            pos1[(l, b)] = row
            row += 1
    for k, idx in enumerate(sl0):
        for b in idx:
            # the hom sending gen_k -> b; composed with d: gen_l -> b * z_{kl}
            for l in range(len(terms1)):
                zkl = z[k][l]
                if not zkl:
                    continue
                prod = A.mult_vec({b: f.one_scalar()}, zkl)
                for c, coeff in prod.items():
                    r = pos1.get((l, c))
                    if r is not None:
                        mat[r, col] = f.normalize_scalar(mat[r, col] + coeff)
            col += 1
    return mat, n0, n1


def ext_into_algebra_table(M: GradedModule, j_max, shifts=None):
    """dims of Ext^j_gr(M, A(i)) for j = 0..j_max, as dict (j, i) -> dim.

    Shifts default to every i where some Hom(P_j, A(i)) is nonzero."""
    A = M.algebra
    if M.dim == 0:
        return {}
    res = min_resolution(M, j_max + 1)
    terms = []
    zs = []
    for n in range(j_max + 2):
        t = res.term(n)
        terms.append(t.terms if t is not None else [])
        if n >= 1:
            zs.append(res.z_entries(n) if t is not None and t.dim else
                      [[{} for _ in range(len(terms[n]))] for _ in range(len(terms[n - 1]))])
    if shifts is None:
        degs = set()
        for tl in terms:
            for (v, d) in tl:
                for b in A.ae_support(v):
                    degs.add(int(A.degrees[b]) - d)
        shifts = sorted(degs)
    out = {}
    for i in shifts:
        prev_rank = 0
        for j in range(j_max + 1):
            mat, n0, n1 = _ext_stage_matrix(A, terms[j], terms[j + 1], zs[j], i)
            ker = n0 - rank(mat, A.field.p) if n0 else 0
            dim = ker - prev_rank
            if dim:
                out[(j, i)] = dim
            prev_rank = rank(mat, A.field.p)
    return out


def is_cohen_macaulay(M: GradedModule, g: int) -> bool:
    """Ext^j(M, A) = 0 for j = 1..g (sufficient: inj dim of A equals g)."""
    if g < 0:
        raise ValueError("Gorenstein dimension must be >= 0")
    if M.dim == 0 or g == 0:
        return True
    table = ext_into_algebra_table(M, g)
    return not any(j >= 1 for (j, i) in table)


def ext_module_table(M: GradedModule, N: GradedModule, j, shifts=None):
    """dims of Ext^j_gr(M, N(i)) per shift i: cohomology of Hom(P_*, N(i))."""
    if M.dim == 0 or N.dim == 0:
        return {}
    res = min_resolution(M, j + 1)
    f = M.field

    def stage_matrix(n, i):
        Pn = res.term(n)
        Pn1 = res.term(n + 1)
        sl0 = _value_slices(N, Pn.terms, i) if Pn is not None else []
        n0 = sum(len(s) for s in sl0)
        if Pn1 is None or Pn1.dim == 0:
            return f.zeros(0, n0), n0
        sl1 = _value_slices(N, Pn1.terms, i)
        n1 = sum(len(s) for s in sl1)
        mat = f.zeros(n1, n0)
        if n0 == 0 or n1 == 0:
            return mat, n0
        z = res.z_entries(n + 1)
        col = 0
        off1 = np.cumsum([0] + [len(s) for s in sl1])
        for k in range(len(Pn.terms)):
            for b in sl0[k]:
                vec = f.zeros(N.dim, 1)
                vec[b, 0] = f.one_scalar()
                for l in range(len(Pn1.terms)):
                    zkl = z[k][l]
                    if not zkl or len(sl1[l]) == 0:
                        continue
                    img = N.act_element(zkl, vec)[:, 0]
                    mat[off1[l] : off1[l + 1], col] = img[sl1[l]]
                col += 1
        return mat, n0

    if shifts is None:
        lo = int(N.degrees.min()) - 40
        hi = int(N.degrees.max()) + 40
        shifts = range(lo, hi + 1)
    out = {}
    for i in shifts:
        if res.term(j) is None:
            break
        matj, n0 = stage_matrix(j, i)
        ker = n0 - rank(matj, f.p)
        if j == 0:
            im = 0
        else:
            matp, _ = stage_matrix(j - 1, i)
            im = rank(matp, f.p)
        if ker - im:
            out[i] = ker - im
    return out
