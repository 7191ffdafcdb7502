"""Finite-dimensional graded algebras with a distinguished idempotent-adapted basis.

Every algebra here is elementary: the primitive orthogonal idempotents are
basis elements, every other basis element lies in the radical, and each basis
element b has unique vertices l(b), r(b) with e_l * b = b = b * e_r.  All the
constructions below (path algebra quotients, opposites, tensor products,
degree-zero parts, tensor algebras) preserve this shape, which is what lets
one module engine run uniformly over algebras, opposites and envelopes.

Multiplication tables are lazy: mult(i, j) is computed on demand and cached,
so enveloping algebras of a few hundred basis elements never materialize a
dim^3 table.
"""

from __future__ import annotations

import hashlib
import itertools

import numpy as np

from .errors import InputError
from .linalg import Field
from . import presentations as pr

ASSOC_EXHAUSTIVE_LIMIT = 40


class FDAlgebra:
    def __init__(
        self,
        field: Field,
        labels,
        degrees,
        idempotents,
        left_vertex,
        right_vertex,
        mult_fn,
        generators,
        words,
        content_key,
        presentation=None,
        path_basis=None,
        path_ctx=None,
    ):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.degrees = np.asarray(degrees, dtype=np.int64)
        self.idempotents = list(idempotents)
        self.left_vertex = np.asarray(left_vertex, dtype=np.int64)
        self.right_vertex = np.asarray(right_vertex, dtype=np.int64)
        self._mult_fn = mult_fn
        self.generators = list(generators)
        self.words = list(words)
        self.content_key = content_key
        self.presentation = presentation
        self.path_basis = path_basis
        self.path_ctx = path_ctx
        self._mult_cache = {}
        self._right_mat = {}
        self._left_mat = {}
        self._e_support = {}
        self._ae_support = {}
        self._op = None
        if self.degrees.min(initial=0) < 0:
            raise InputError("negative degree basis element in a positively graded algebra")

    # -- structure access ----------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.idempotents)

    def mult(self, i, j):
        """Structure constants of b_i * b_j as a dict basis_index -> coeff."""
        key = (i, j)
        hit = self._mult_cache.get(key)
        if hit is None:
            if self.right_vertex[i] != self.left_vertex[j]:
                hit = {}
            else:
                hit = self._mult_fn(i, j)
            self._mult_cache[key] = hit
        return hit

    def mult_vec(self, u: dict, v: dict) -> dict:
        """Product of two algebra elements given as sparse coefficient dicts."""
        f = self.field
        out = {}
        for i, ci in u.items():
            for j, cj in v.items():
                for k, c in self.mult(i, j).items():
                    val = f.normalize_scalar(out.get(k, 0) + ci * cj * c)
                    if val == 0:
                        out.pop(k, None)
                    else:
                        out[k] = val
        return out

    def unit(self) -> dict:
        return {e: self.field.one_scalar() for e in self.idempotents}

    def e_support(self, v):
        """Basis indices of the right projective e_v A."""
        if v not in self._e_support:
            self._e_support[v] = np.nonzero(self.left_vertex == v)[0]
        return self._e_support[v]

    def ae_support(self, v):
        """Basis indices of A e_v."""
        if v not in self._ae_support:
            self._ae_support[v] = np.nonzero(self.right_vertex == v)[0]
        return self._ae_support[v]

    def right_mult_matrix(self, j):
        """R_j with (R_j)[k, i] = coeff of b_k in b_i b_j (columns = inputs)."""
        if j not in self._right_mat:
            m = self.field.zeros(self.dim, self.dim)
            for i in range(self.dim):
                for k, c in self.mult(i, j).items():
                    m[k, i] = c
            self._right_mat[j] = m
        return self._right_mat[j]

    def left_mult_matrix(self, i):
        if i not in self._left_mat:
            m = self.field.zeros(self.dim, self.dim)
            for j in range(self.dim):
                for k, c in self.mult(i, j).items():
                    m[k, j] = c
            self._left_mat[i] = m
        return self._left_mat[i]

    def radical_indices(self):
        return [i for i in range(self.dim) if i not in self.idempotents]

    def nonidem_generators(self):
        return [g for g in self.generators if g not in self.idempotents]

    def hash(self):
        return hashlib.sha256(repr(self.content_key).encode()).hexdigest()[:24]

    def __repr__(self):
        return f"FDAlgebra(dim={self.dim}, vertices={self.n_vertices}, p={self.field.p})"

    # -- validation ----------------------------------------------------------

    def validate(self, exhaustive=None, rng=None, samples=2000):
        """Check the algebra invariants.

        Associativity is verified on all basis triples when the dimension is
        small (or exhaustive=True), on random triples otherwise.  Also checks
        idempotent orthogonality/completeness, degree additivity and that the
        non-idempotent span is a nilpotent ideal (equals the radical).
        """
        f = self.field
        one = f.one_scalar()
        for a, e in enumerate(self.idempotents):
            for b, e2 in enumerate(self.idempotents):
                expect = {e: one} if a == b else {}
                if self.mult(e, e2) != expect:
                    raise InputError("idempotents not orthogonal/idempotent")
        for b in range(self.dim):
            lv, rv = self.left_vertex[b], self.right_vertex[b]
            if self.mult(self.idempotents[lv], b) != {b: one}:
                raise InputError("left vertex inconsistent with multiplication")
            if self.mult(b, self.idempotents[rv]) != {b: one}:
                raise InputError("right vertex inconsistent with multiplication")
            for u in range(self.n_vertices):
                if u != lv and self.mult(self.idempotents[u], b):
                    raise InputError("unit decomposition violated")
        if exhaustive is None:
            exhaustive = self.dim <= ASSOC_EXHAUSTIVE_LIMIT
        if exhaustive:
            triples = itertools.product(range(self.dim), repeat=3)
        else:
            rng = rng or np.random.default_rng(0)
            triples = rng.integers(0, self.dim, size=(samples, 3)).tolist()
        for i, j, k in triples:
            left = {}
            for m, c in self.mult(i, j).items():
                for n, c2 in self.mult(m, k).items():
                    left[n] = f.normalize_scalar(left.get(n, 0) + c * c2)
            right = {}
            for m, c in self.mult(j, k).items():
                for n, c2 in self.mult(i, m).items():
                    right[n] = f.normalize_scalar(right.get(n, 0) + c * c2)
            if {k2: v for k2, v in left.items() if v != 0} != {k2: v for k2, v in right.items() if v != 0}:
                raise InputError(f"multiplication not associative at triple {(i, j, k)}")
        self._validate_grading_and_radical(exhaustive, rng, samples)
        self._validate_words()
        return True

    def _validate_grading_and_radical(self, exhaustive, rng, samples):
        idem_set = set(self.idempotents)
        pairs = (
            itertools.product(range(self.dim), repeat=2)
            if exhaustive
            else (rng or np.random.default_rng(1)).integers(0, self.dim, size=(samples, 2)).tolist()
        )
        for i, j in pairs:
            d = self.degrees[i] + self.degrees[j]
            for k, _ in self.mult(i, j).items():
                if self.degrees[k] != d:
                    raise InputError("multiplication does not respect the grading")
                if (i not in idem_set or j not in idem_set) and k in idem_set:
                    raise InputError("radical span is not an ideal (idempotent in a radical product)")

    def _validate_words(self):
        one = self.field.one_scalar()
        for b in range(self.dim):
            w = self.words[b]
            acc = {w[0]: one}
            for g in w[1:]:
                acc = self.mult_vec(acc, {g: one})
            if acc != {b: one}:
                raise InputError(f"factorization word of basis element {b} does not reproduce it")

    # -- derived algebras ------------------------------------------------------

    def opposite(self):
        if self._op is not None:
            return self._op
        base = self

        def mult_fn(i, j):
            return base.mult(j, i)

        out = FDAlgebra(
            field=self.field,
            labels=[f"{l}~op" for l in self.labels],
            degrees=self.degrees,
            idempotents=self.idempotents,
            left_vertex=self.right_vertex,
            right_vertex=self.left_vertex,
            mult_fn=mult_fn,
            generators=self.generators,
            words=[tuple(reversed(w)) for w in self.words],
            content_key=("op", self.content_key),
        )
        out._op = self
        self._op = out
        return out

    def degree_zero_part(self):
        keep = [i for i in range(self.dim) if self.degrees[i] == 0]
        remap = {b: n for n, b in enumerate(keep)}
        table = {}
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                prod = self.mult(i, j)
                if prod:
                    table[(a, b)] = {remap[k]: c for k, c in prod.items()}
        return table_algebra(
            field=self.field,
            labels=[self.labels[i] for i in keep],
            degrees=[0] * len(keep),
            idempotents=[remap[e] for e in self.idempotents],
            left_vertex=[self.left_vertex[i] for i in keep],
            right_vertex=[self.right_vertex[i] for i in keep],
            table=table,
            generators=[remap[g] for g in self.generators if self.degrees[g] == 0],
            words=[tuple(remap[g] for g in self.words[i]) for i in keep],
            content_key=("deg0", self.content_key),
        )


def table_algebra(field, labels, degrees, idempotents, left_vertex, right_vertex, table, generators, words, content_key=None):
    """Algebra from an explicit sparse multiplication table."""
    if content_key is None:
        content_key = (
            "table",
            field.p,
            tuple(labels),
            tuple(int(d) for d in degrees),
            tuple(sorted((k, tuple(sorted(v.items()))) for k, v in table.items())),
        )

    def mult_fn(i, j):
        return table.get((i, j), {})

    return FDAlgebra(
        field=field,
        labels=labels,
        degrees=degrees,
        idempotents=idempotents,
        left_vertex=left_vertex,
        right_vertex=right_vertex,
        mult_fn=mult_fn,
        generators=generators,
        words=words,
        content_key=content_key,
    )


def from_presentation(pres: pr.QuiverPresentation, field: Field, max_len=pr.MAX_PATH_LEN, max_dim=pr.MAX_DIM) -> FDAlgebra:
    """Admissible path algebra quotient via the Groebner engine.

    Basis = irreducible paths; multiplication = concatenate then reduce;
    degree of a path = sum of its arrow degrees.  Fails cleanly when the
    quotient does not stabilize within the configured bounds.
    """
    ctx = pr.PathContext(pres)
    rel_polys = pr.validate_relations(ctx, field, pres.relations)
    gb = pr.complete(ctx, field, rel_polys, max_len)
    paths = pr.irreducible_paths(ctx, gb, max_len, max_dim)
    paths.sort(key=lambda p: (len(p[1]), p[1], p[0]))
    index = {p: i for i, p in enumerate(paths)}
    arrow_path = {}
    for p in paths:
        if len(p[1]) == 1:
            arrow_path[p[1][0]] = index[p]

    def nf_word(arrow_word):
        """Reduce an arrow word to a dict basis_index -> coeff (empty if the
        word is not a path or dies in the quotient)."""
        if not arrow_word:
            raise InputError("nf_word needs a nonempty word; idempotents are basis elements")
        for a, b in zip(arrow_word, arrow_word[1:]):
            if ctx.tgt[a] != ctx.src[b]:
                return {}
        p = (ctx.src[arrow_word[0]], tuple(arrow_word))
        nf = pr.normal_form(ctx, field, pr.PathPoly.build(field, [(field.one_scalar(), p)]), gb, max_len)
        return {index[q]: c for q, c in nf.items()}

    def mult_fn(i, j):
        pi, pj = paths[i], paths[j]
        cat = ctx.concat(pi, pj)
        if cat is None:
            return {}
        nf = pr.normal_form(ctx, field, pr.PathPoly.build(field, [(field.one_scalar(), cat)]), gb, max_len)
        return {index[p]: c for p, c in nf.items()}

    idempotents = [index[(v, ())] for v in range(ctx.n_vertices)]
    words = []
    for i, p in enumerate(paths):
        if not p[1]:
            words.append((i,))
        else:
            words.append(tuple(arrow_path[a] for a in p[1]))
    alg = FDAlgebra(
        field=field,
        labels=[ctx.label(p) for p in paths],
        degrees=[ctx.degree(p) for p in paths],
        idempotents=idempotents,
        left_vertex=[p[0] for p in paths],
        right_vertex=[ctx.target(p) for p in paths],
        mult_fn=mult_fn,
        generators=idempotents + sorted(arrow_path.values()),
        words=words,
        content_key=(
            "pres",
            field.p,
            tuple(pres.vertices),
            tuple((a.name, a.source, a.target, a.degree) for a in pres.arrows),
            tuple(tuple((str(c), tuple(names)) for c, names in r) for r in pres.relations),
        ),
        presentation=pres,
        path_basis=paths,
        path_ctx=ctx,
    )
    alg.nf_word = nf_word
    return alg


_TENSOR_CACHE = {}


def tensor_op(a: FDAlgebra, b: FDAlgebra) -> FDAlgebra:
    """A tensor B^op: basis pairs, (x ox y)(x' ox y') = xx' ox y'y.

    With a == b this is the enveloping algebra; right modules over it are
    (A, B)-bimodules via m * (x ox y) = y m x.
    """
    if a.field.p != b.field.p:
        raise InputError("field mismatch in tensor product")
    cache_key = (id(a), id(b))
    hit = _TENSOR_CACHE.get(cache_key)
    if hit is not None and hit[0] is a and hit[1] is b:
        return hit[2]
    nb = b.dim
    nvb = b.n_vertices

    def pair(i, j):
        return i * nb + j

    labels = [f"{la}(x){lb}" for la in a.labels for lb in b.labels]
    degrees = np.add.outer(a.degrees, b.degrees).reshape(-1)
    left_vertex = (a.left_vertex[:, None] * nvb + b.right_vertex[None, :]).reshape(-1)
    right_vertex = (a.right_vertex[:, None] * nvb + b.left_vertex[None, :]).reshape(-1)
    idempotents = [pair(a.idempotents[u], b.idempotents[v]) for u in range(a.n_vertices) for v in range(nvb)]

    f = a.field

    def mult_fn(ij, kl):
        i, j = divmod(ij, nb)
        k, l = divmod(kl, nb)
        da = a.mult(i, k)
        if not da:
            return {}
        db = b.mult(l, j)
        if not db:
            return {}
        out = {}
        for x, cx in da.items():
            for y, cy in db.items():
                out[pair(x, y)] = f.normalize_scalar(cx * cy)
        return out

    generators = list(idempotents)
    for g in a.nonidem_generators():
        for e in b.idempotents:
            generators.append(pair(g, e))
    for e in a.idempotents:
        for h in b.nonidem_generators():
            generators.append(pair(e, h))

    words = []
    for i in range(a.dim):
        for j in range(b.dim):
            if i in a.idempotents and j in b.idempotents:
                words.append((pair(i, j),))
                continue
            fb = b.idempotents[b.right_vertex[j]]
            ea = a.idempotents[a.right_vertex[i]]
            w = [pair(g, fb) for g in a.words[i]] if i not in a.idempotents else [pair(i, fb)]
            wb = [pair(ea, h) for h in reversed(b.words[j])] if j not in b.idempotents else [pair(ea, j)]
            words.append(tuple(w + wb))

    out = FDAlgebra(
        field=f,
        labels=labels,
        degrees=degrees,
        idempotents=idempotents,
        left_vertex=left_vertex,
        right_vertex=right_vertex,
        mult_fn=mult_fn,
        generators=generators,
        words=words,
        content_key=("tensor_op", a.content_key, b.content_key),
    )
    _TENSOR_CACHE[cache_key] = (a, b, out)
    return out


def enveloping(a: FDAlgebra) -> FDAlgebra:
    return tensor_op(a, a)
