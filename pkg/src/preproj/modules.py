"""Graded right modules over an FDAlgebra.

A module carries an idempotent-adapted homogeneous basis: per basis vector a
degree and a vertex (the unique idempotent acting as identity on it).  The
action is stored only for the algebra's non-idempotent generators; idempotents
act as coordinate selectors.  Column convention: v |-> act[g] @ v represents
v * g, so v * (g h) = act[h] @ act[g] @ v.

Kernels, tops and spans are computed blockwise over (degree, vertex), which
keeps every elimination small and keeps all produced bases adapted.
"""

from __future__ import annotations

import numpy as np

from .algebras import FDAlgebra
from .errors import InputError
from .linalg import (
    Field,
    SpanTracker,
    column_space_basis,
    complete_to_basis,
    invert,
    kernel_basis,
    solve,
)


class GradedModule:
    def __init__(self, algebra: FDAlgebra, degrees, vertex, action):
        self.algebra = algebra
        self.degrees = np.asarray(degrees, dtype=np.int64)
        self.vertex = np.asarray(vertex, dtype=np.int64)
        self.action = action  # generator basis index -> ndarray
        self.dim = len(self.degrees)
        self._cache = {}

    # -- basic structure ------------------------------------------------------

    @property
    def field(self) -> Field:
        return self.algebra.field

    def gen_matrix(self, g):
        """Action matrix of the generator with basis index g."""
        if g in self.action:
            return self.action[g]
        A = self.algebra
        if g in A.idempotents:
            v = A.idempotents.index(g)
            sel = self.field.zeros(self.dim, self.dim)
            for i in np.nonzero(self.vertex == v)[0]:
                sel[i, i] = self.field.one_scalar()
            return sel
        raise KeyError(f"no action stored for generator {g}")

    def act_word(self, word, vecs):
        """Apply v -> v * (product of generators along word) columnwise."""
        out = vecs
        for g in word:
            out = self.field.matmul(self.gen_matrix(g), out)
        return out

    def act_basis_columns(self, start_cols, basis_indices):
        """For each algebra basis element b in basis_indices, the column
        start * b.  start_cols: (dim, m); returns (dim, len(indices)*m) blocks
        in order.  Word prefixes are memoized, so shared prefixes cost once."""
        A = self.algebra
        memo = {(): start_cols}

        def col(word):
            hit = memo.get(word)
            if hit is None:
                hit = self.field.matmul(self.gen_matrix(word[-1]), col(word[:-1]))
                memo[word] = hit
            return hit

        return [col(tuple(A.words[b])) for b in basis_indices]

    def act_element(self, coeffs: dict, vecth):
        """v * (sum_b coeffs[b] * b) for a sparse algebra element."""
        out = self.field.zeros(self.dim, vecth.shape[1] if vecth.ndim == 2 else 1)
        v = vecth if vecth.ndim == 2 else vecth.reshape(-1, 1)
        for b, c in coeffs.items():
            out = self.field.reduce(out + c * self.act_word(self.algebra.words[b], v))
        return out if vecth.ndim == 2 else out[:, 0]

    def blocks(self):
        """Sorted list of (degree, vertex) blocks with their index arrays."""
        key = "blocks"
        if key not in self._cache:
            out = {}
            for i in range(self.dim):
                out.setdefault((int(self.degrees[i]), int(self.vertex[i])), []).append(i)
            self._cache[key] = {k: np.array(v) for k, v in sorted(out.items())}
        return self._cache[key]

    def graded_dims(self):
        return {k: len(v) for k, v in self.blocks().items()}

    def degree_dims(self):
        out = {}
        for (d, _), idx in self.blocks().items():
            out[d] = out.get(d, 0) + len(idx)
        return out

    def shifted(self, p):
        """M(p): the degree-n part of M(p) is M_{p+n}."""
        return GradedModule(self.algebra, self.degrees - p, self.vertex, self.action)

    def verify(self, exhaustive=True):
        """Action respects generator block structure, grading, and the
        multiplication table (checked on all basis pairs via words)."""
        A = self.algebra
        f = self.field
        for g, m in self.action.items():
            for j in range(self.dim):
                colv = m[:, j]
                nz = np.nonzero(colv)[0] if f.p else [i for i in range(self.dim) if colv[i] != 0]
                if self.vertex[j] != A.left_vertex[g] and len(nz):
                    raise InputError("action nonzero outside the generator's left vertex block")
                for i in nz:
                    if self.vertex[i] != A.right_vertex[g]:
                        raise InputError("action lands outside the generator's right vertex block")
                    if self.degrees[i] != self.degrees[j] + A.degrees[g]:
                        raise InputError("action does not respect the grading")
        if exhaustive:
            eye = f.eye(self.dim)
            rho = {b: self.act_word(A.words[b], eye) for b in range(A.dim)}
            for i in range(A.dim):
                for j in range(A.dim):
                    expect = f.zeros(self.dim, self.dim)
                    for k, c in A.mult(i, j).items():
                        expect = f.reduce(expect + c * rho[k])
                    got = f.matmul(rho[j], rho[i])
                    if not np.array_equal(got, expect):
                        raise InputError(f"action is not multiplicative at pair {(i, j)}")
        return True


# -- constructions ------------------------------------------------------------


def zero_module(algebra) -> GradedModule:
    return GradedModule(algebra, [], [], {g: algebra.field.zeros(0, 0) for g in algebra.nonidem_generators()})


def projective(algebra: FDAlgebra, v, shift=0) -> GradedModule:
    """Indecomposable projective e_v A (shift): generator in degree -shift."""
    if not 0 <= v < algebra.n_vertices:
        raise InputError(f"vertex index {v} out of range")
    sup = algebra.e_support(v)
    pos = {int(b): i for i, b in enumerate(sup)}
    f = algebra.field
    action = {}
    for g in algebra.nonidem_generators():
        m = f.zeros(len(sup), len(sup))
        for i, b in enumerate(sup):
            for k, c in algebra.mult(int(b), g).items():
                m[pos[k], i] = c
        action[g] = m
    mod = GradedModule(
        algebra,
        algebra.degrees[sup] - shift,
        algebra.right_vertex[sup],
        action,
    )
    mod._cache["proj_gen_index"] = pos[algebra.idempotents[v]]
    mod._cache["proj_vertex_shift"] = (v, shift)
    return mod


def simple(algebra, v, degree=0) -> GradedModule:
    f = algebra.field
    return GradedModule(
        algebra, [degree], [v], {g: f.zeros(1, 1) for g in algebra.nonidem_generators()}
    )


def regular(algebra) -> GradedModule:
    """The algebra as a right module over itself."""
    action = {g: np.array(algebra.right_mult_matrix(g)) for g in algebra.nonidem_generators()}
    return GradedModule(algebra, algebra.degrees, algebra.right_vertex, action)


def direct_sum(algebra, mods) -> GradedModule:
    f = algebra.field
    dims = [m.dim for m in mods]
    total = sum(dims)
    degrees = np.concatenate([m.degrees for m in mods]) if mods else np.zeros(0, dtype=np.int64)
    vertex = np.concatenate([m.vertex for m in mods]) if mods else np.zeros(0, dtype=np.int64)
    action = {}
    for g in algebra.nonidem_generators():
        big = f.zeros(total, total)
        off = 0
        for m in mods:
            big[off : off + m.dim, off : off + m.dim] = m.gen_matrix(g)
            off += m.dim
        action[g] = big
    return GradedModule(algebra, degrees, vertex, action)


def dual(m: GradedModule) -> GradedModule:
    """k-dual over the opposite algebra: transposed actions, negated degrees."""
    op = m.algebra.opposite()
    action = {}
    for g in op.nonidem_generators():
        action[g] = m.gen_matrix(g).T.copy()
    return GradedModule(op, -m.degrees, m.vertex, action)


class ProjectiveSum(GradedModule):
    """Finite direct sum of shifted indecomposable projectives, with the
    summand bookkeeping (vertex, generator degree) every resolution needs."""

    def __init__(self, algebra, terms):
        self.terms = list(terms)  # (vertex, generator_degree)
        mods = [projective(algebra, v, -d) for v, d in self.terms]
        base = direct_sum(algebra, mods)
        super().__init__(algebra, base.degrees, base.vertex, base.action)
        self.offsets = []
        self.gen_positions = []
        off = 0
        for mod, (v, d) in zip(mods, self.terms):
            self.offsets.append(off)
            self.gen_positions.append(off + mod._cache["proj_gen_index"])
            off += mod.dim
        self.offsets.append(off)

    def summand_support(self, k):
        return np.arange(self.offsets[k], self.offsets[k + 1])

    def map_from_generator_images(self, target: GradedModule, images):
        """The module map sending the k-th summand generator to images[:, k];
        returns the full matrix (target.dim x self.dim)."""
        A = self.algebra
        f = self.field
        out = f.zeros(target.dim, self.dim)
        for k, (v, d) in enumerate(self.terms):
            sup = A.e_support(v)
            cols = target.act_basis_columns(images[:, k : k + 1], [int(b) for b in sup])
            sl = self.summand_support(k)
            for j, c in zip(sl, cols):
                out[:, j] = c[:, 0]
        return out

    def algebra_entries(self, other: "ProjectiveSum", matrix):
        """Algebra-valued entries of a degree-0 map self -> other.

        Given its full matrix (other.dim x self.dim), return z[k][l] as sparse
        coefficient dicts with map(gen_l) = sum_k gen_k * z_{k,l}, indexed by
        [k over other.terms][l over self.terms].
        """
        A = self.algebra
        out = [[{} for _ in self.terms] for _ in other.terms]
        for l in range(len(self.terms)):
            col = matrix[:, self.gen_positions[l]]
            for k in range(len(other.terms)):
                vk, dk = other.terms[k]
                sup = A.e_support(vk)
                sl = other.summand_support(k)
                entry = {}
                for local, j in enumerate(sl):
                    c = col[j]
                    if c != 0:
                        entry[int(sup[local])] = c
                if entry:
                    out[k][l] = entry
        return out


# -- blockwise linear algebra on modules ---------------------------------------


def kernel_of_map(source: GradedModule, matrix, p) -> np.ndarray:
    """Adapted basis (columns) of ker(matrix) where matrix is a degree-0
    vertex-compatible map out of `source`.  Kernel computed per block."""
    cols = []
    f = source.field
    for (d, v), idx in source.blocks().items():
        k = kernel_basis(matrix[:, idx], p)
        for j in range(k.shape[1]):
            col = f.zeros(source.dim, 1)[:, 0]
            col[idx] = k[:, j]
            cols.append(col)
    if not cols:
        return f.zeros(source.dim, 0)
    return np.stack(cols, axis=1)


def submodule(parent: GradedModule, basis_cols) -> tuple[GradedModule, np.ndarray]:
    """Submodule on the given adapted independent columns; returns (S, C) with
    C the inclusion matrix (parent.dim x S.dim).  Caller guarantees the span
    is action-invariant (kernels of module maps always are)."""
    f = parent.field
    C = np.array(basis_cols)
    p = f.p
    degrees, vertex = [], []
    for j in range(C.shape[1]):
        nz = np.nonzero(C[:, j])[0]
        if len(nz) == 0:
            raise InputError("zero column in submodule basis")
        d0 = parent.degrees[nz[0]]
        v0 = parent.vertex[nz[0]]
        if not all(parent.degrees[i] == d0 and parent.vertex[i] == v0 for i in nz):
            raise InputError("submodule basis column not homogeneous/adapted")
        degrees.append(d0)
        vertex.append(v0)
    action = {}
    for g in parent.algebra.nonidem_generators():
        img = f.matmul(parent.gen_matrix(g), C)
        x = solve(C, img, p)
        if x is None:
            raise InputError("span is not action-invariant")
        action[g] = x
    sub = GradedModule(parent.algebra, degrees, vertex, action)
    return sub, C


def quotient(parent: GradedModule, sub_cols) -> tuple[GradedModule, np.ndarray, np.ndarray]:
    """Quotient by the span of sub_cols (action-invariant).  Returns
    (Q, proj, section_indices): proj is Q.dim x parent.dim, and Q's basis is
    the image of parent basis vectors section_indices."""
    f = parent.field
    p = f.p
    sub = np.array(sub_cols)
    keep = complete_to_basis(sub, p, parent.dim) if sub.shape[1] else list(range(parent.dim))
    t = np.concatenate([sub, f.eye(parent.dim)[:, keep]], axis=1)
    tinv = invert(t, p)
    proj = tinv[sub.shape[1] :, :]
    action = {}
    for g in parent.algebra.nonidem_generators():
        action[g] = f.matmul(proj, parent.gen_matrix(g)[:, keep])
    q = GradedModule(parent.algebra, parent.degrees[keep], parent.vertex[keep], action)
    return q, proj, np.array(keep)


def radical_span(m: GradedModule) -> np.ndarray:
    """Adapted basis of m * rad(A) = sum over generator images."""
    f = m.field
    cols = []
    for (d, v), idx in m.blocks().items():
        pieces = []
        for g in m.algebra.nonidem_generators():
            if m.algebra.left_vertex[g] != v:
                continue
            pieces.append(m.gen_matrix(g)[:, idx])
        if not pieces:
            continue
        stacked = np.concatenate(pieces, axis=1)
        basis, _ = column_space_basis(stacked, f.p)
        cols.extend(basis[:, j] for j in range(basis.shape[1]))
    if not cols:
        return f.zeros(m.dim, 0)
    return np.stack(cols, axis=1)


def top_generators(m: GradedModule):
    """Homogeneous basis-vector indices of a lift of m / rad m."""
    f = m.field
    radm = radical_span(m)
    gens = []
    for (d, v), idx in m.blocks().items():
        local_rad = radm[idx, :] if radm.shape[1] else f.zeros(len(idx), 0)
        keep = complete_to_basis(local_rad, f.p, len(idx))
        gens.extend(int(idx[i]) for i in keep)
    return sorted(gens)


def projective_cover(m: GradedModule):
    """(P, pmap) with P -> m the projective cover; kernel lies in P * rad."""
    if m.dim == 0:
        raise InputError("projective cover of the zero module")
    gens = top_generators(m)
    terms = [(int(m.vertex[i]), int(m.degrees[i])) for i in gens]
    P = ProjectiveSum(m.algebra, terms)
    images = m.field.zeros(m.dim, len(gens))
    for k, i in enumerate(gens):
        images[i, k] = m.field.one_scalar()
    pmap = P.map_from_generator_images(m, images)
    return P, pmap


class Resolution:
    """Minimal graded projective resolution, grown on demand.

    P[0] --aug--> M;  diff[n]: P[n] -> P[n-1];  syzygy(n) = ker at stage n-1,
    with inclusion into P[n-1]."""

    def __init__(self, m: GradedModule):
        self.module = m
        self.P = []
        self.diffs = []  # diffs[n]: P[n] -> P[n-1] for n >= 1
        self.covers = []  # covers[n]: P[n] ->> syzygy(n)
        self.aug = None
        self._syzygies = [m]  # syzygy(0) = m
        self._incls = [None]
        self._done = False  # resolution reached the zero syzygy

    def extend_to(self, length):
        while len(self.P) <= length and not self._done:
            cur = self._syzygies[-1]
            if cur.dim == 0:
                self._done = True
                break
            P, pmap = projective_cover(cur)
            if not self.P:
                self.aug = pmap
            else:
                self.diffs.append(self.field.matmul(self._incls[-1], pmap))
            self.covers.append(pmap)
            self.P.append(P)
            kercols = kernel_of_map(P, pmap, self.field.p)
            if kercols.shape[1] == 0:
                syz = zero_module(self.module.algebra)
                incl = self.field.zeros(P.dim, 0)
            else:
                syz, incl = submodule(P, kercols)
            self._syzygies.append(syz)
            self._incls.append(incl)
        return self

    @property
    def field(self):
        return self.module.field

    def length_computed(self):
        return len(self.P)

    def finished(self):
        return self._done

    def term(self, n):
        if n >= len(self.P):
            if self._done:
                return None
            raise InputError("resolution not extended that far")
        return self.P[n]

    def syzygy(self, n):
        """Omega^n of the module (minimal)."""
        self.extend_to(n)
        if n < len(self._syzygies):
            return self._syzygies[n]
        return zero_module(self.module.algebra)

    def syzygy_inclusion(self, n):
        self.extend_to(n)
        if n < len(self._incls):
            return self._incls[n]
        return None

    def differential(self, n):
        """d_n: P[n] -> P[n-1] (n >= 1) as a matrix; aug for n == 0."""
        self.extend_to(n)
        if n == 0:
            return self.aug
        if n - 1 < len(self.diffs):
            return self.diffs[n - 1]
        return None  # beyond the finished end

    def z_entries(self, n):
        """Algebra-valued entries of d_n (n >= 1)."""
        self.extend_to(n)
        src, tgt = self.P[n], self.P[n - 1]
        return src.algebra_entries(tgt, self.differential(n))

    def is_minimal_at(self, n):
        """Entries of d_n lie in the radical: no idempotent coefficients."""
        if n == 0:
            return True
        z = self.z_entries(n)
        idems = set(self.module.algebra.idempotents)
        return all(not (set(e) & idems) for row in z for e in row)


def min_resolution(m: GradedModule, length) -> Resolution:
    if "resolution" not in m._cache:
        m._cache["resolution"] = Resolution(m)
    return m._cache["resolution"].extend_to(length)


def syzygy(m: GradedModule, n) -> GradedModule:
    return min_resolution(m, n).syzygy(n)


def proj_dim(m: GradedModule, bound):
    """Length of the minimal resolution, or None if it exceeds the bound."""
    if m.dim == 0:
        return 0
    res = min_resolution(m, bound + 1)
    for n in range(bound + 2):
        if res.syzygy(n).dim == 0:
            return max(n - 1, 0)
    return None


def inj_dim(m: GradedModule, bound):
    """Injective dimension, as the projective dimension of the dual over the
    opposite algebra."""
    return proj_dim(dual(m), bound)


def generator_expressions(m: GradedModule):
    """(K, records): K an invertible matrix of vectors spanning m, records[j]
    = (gen_index, word) with K[:, j] = gen_vector * word.  Generators are the
    projective-cover tops."""
    key = "gen_expressions"
    if key in m._cache:
        return m._cache[key]
    f = m.field
    gens = top_generators(m)
    tracker = SpanTracker(m.dim, f.p)
    cols, records, frontier = [], [], []
    for k, i in enumerate(gens):
        v = f.zeros(m.dim, 1)[:, 0]
        v[i] = f.one_scalar()
        tracker.offer(v)
        cols.append(v)
        records.append((k, ()))
        frontier.append((v, k, ()))
    while frontier and tracker.rank < m.dim:
        new_frontier = []
        for (v, k, word) in frontier:
            for g in m.algebra.nonidem_generators():
                w = f.matmul(m.gen_matrix(g), v.reshape(-1, 1))[:, 0]
                if not w.any():
                    continue
                if tracker.offer(w):
                    cols.append(w)
                    records.append((k, word + (g,)))
                    new_frontier.append((w, k, word + (g,)))
        frontier = new_frontier
    if tracker.rank < m.dim:
        raise InputError("module not generated by its top lifts")
    m._cache[key] = (np.stack(cols, axis=1), records)
    return m._cache[key]
