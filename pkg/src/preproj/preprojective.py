"""The preprojective constructions: double quiver, quivers with potential and
their Jacobian algebras, the relation-arrow presentation for global dimension
2, the extension bimodule, and the tensor-algebra construction.

All path formulas are transcribed once into the package's traversal-order
convention (p*q = traverse p, then q).  The bimodule Leibniz lift used for
the explicit three-term complexes:

    Delta(c_1...c_m) = sum_i (c_{i+1}..c_m  ox_{c_i}  c_1..c_{i-1})

telescopes under d_1, which is what makes d_1 compose to zero with d_2 and
pins the transcription; the test suite checks exactness and self-duality on
every fixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebras import FDAlgebra, from_presentation, tensor_op
from .bimodules import BimoduleContext, as_bimodule
from .errors import BoundExceeded, DimensionBoundExceeded, InputError
from .homs import ext_module_table
from .linalg import Field
from .modules import (
    GradedModule,
    ProjectiveSum,
    min_resolution,
    proj_dim,
    quotient,
    simple,
    submodule,
    kernel_of_map,
    zero_module,
)
from .presentations import Arrow, QuiverPresentation

MAX_TENSOR_DEGREE = 64


# -- double quiver (d = 2) ---------------------------------------------------------


def _is_acyclic(pres: QuiverPresentation):
    n = len(pres.vertices)
    adj = {v: [] for v in range(n)}
    for a in pres.arrows:
        adj[pres.vertex_index(a.source)].append(pres.vertex_index(a.target))
    seen, stack = set(), set()

    def visit(v):
        if v in stack:
            return False
        if v in seen:
            return True
        seen.add(v)
        stack.add(v)
        ok = all(visit(w) for w in adj[v])
        stack.discard(v)
        return ok

    return all(visit(v) for v in range(n))


def double_quiver_pi2(pres: QuiverPresentation) -> QuiverPresentation:
    """Double quiver with the preprojective relations: original arrows in
    degree 0, reversed arrows in degree 1, one relation per vertex."""
    if pres.relations:
        raise InputError("double quiver construction expects a path algebra (no relations)")
    if not _is_acyclic(pres):
        raise InputError("double quiver construction needs an acyclic quiver")
    arrows = [Arrow(a.name, a.source, a.target, 0) for a in pres.arrows]
    arrows += [Arrow(a.name + "_bar", a.target, a.source, 1) for a in pres.arrows]
    relations = []
    for i, v in enumerate(pres.vertices):
        terms = []
        for a in pres.arrows:
            if a.source == v:
                terms.append((1, [a.name, a.name + "_bar"]))
            if a.target == v:
                terms.append((-1, [a.name + "_bar", a.name]))
        if terms:
            relations.append(terms)
    return QuiverPresentation(list(pres.vertices), arrows, relations)


# -- potentials -------------------------------------------------------------------


@dataclass
class QuiverWithPotential:
    """Quiver plus a potential: a linear combination of cycles, stored with
    each cycle rotated to its lexicographically smallest arrow word."""

    presentation: QuiverPresentation  # no relations; degree map on the arrows
    potential: list = dc_field(default_factory=list)  # (coeff, tuple of arrow indices)

    def __post_init__(self):
        if self.presentation.relations:
            raise InputError("potential lives on a quiver without relations")
        ctx = self.context()
        canon = {}
        for c, word in self.potential:
            word = tuple(word)
            if not word:
                raise InputError("empty cycle in potential")
            for x, y in zip(word, word[1:]):
                if ctx.tgt[x] != ctx.src[y]:
                    raise InputError("potential term is not a path")
            if ctx.tgt[word[-1]] != ctx.src[word[0]]:
                raise InputError("potential term is not a cycle")
            rot = min(word[k:] + word[:k] for k in range(len(word)))
            canon[rot] = canon.get(rot, 0) + c
        self.potential = [(c, w) for w, c in sorted(canon.items()) if c != 0]
        degs = {sum(ctx.deg[a] for a in w) for _, w in self.potential}
        if len(degs) > 1:
            raise InputError("potential is not degree homogeneous")

    def context(self):
        from .presentations import PathContext

        return PathContext(self.presentation)


def cyclic_derivative(qp: QuiverWithPotential, arrow_name: str):
    """The derivative along one arrow: for each cycle p and occurrence
    p = u a v, the term v*u.  Returns [(coeff, arrow word)] terms."""
    a = qp.presentation.arrow_index(arrow_name)
    out = []
    for c, word in qp.potential:
        for i, x in enumerate(word):
            if x == a:
                out.append((c, word[i + 1 :] + word[:i]))
    return out


def second_derivative_terms(qp: QuiverWithPotential, b_name: str, c_name: str):
    """The (b, c) component of the bimodule lift of the potential relations:
    for each cycle and each pair of occurrences (b at position i, c at
    position j != i), a term (x, y) with x the cyclic interval (j, i) and y
    the cyclic interval (i, j), both exclusive.  Returns
    [(coeff, x_word, y_word)]."""
    b = qp.presentation.arrow_index(b_name)
    c = qp.presentation.arrow_index(c_name)
    out = []
    for coeff, word in qp.potential:
        m = len(word)
        for i in range(m):
            if word[i] != b:
                continue
            for j in range(m):
                if j == i or word[j] != c:
                    continue
                x = tuple(word[(j + k) % m] for k in range(1, (i - j) % m))
                y = tuple(word[(i + k) % m] for k in range(1, (j - i) % m))
                out.append((coeff, x, y))
    return out


def jacobian(qp: QuiverWithPotential, field: Field, max_len=30, max_dim=20000) -> FDAlgebra:
    """Jacobian algebra: path algebra modulo all cyclic derivatives."""
    pres = qp.presentation
    relations = []
    for a in pres.arrows:
        terms = cyclic_derivative(qp, a.name)
        named = [(c, [pres.arrows[x].name for x in w]) for c, w in terms]
        named = [t for t in named if t[1] or t[0] == 0]
        if any(not w for _, w in named):
            raise InputError("potential has a loop-degree term: Jacobian not admissible")
        if named:
            relations.append(named)
    out = QuiverPresentation(list(pres.vertices), list(pres.arrows), relations)
    alg = from_presentation(out, field, max_len, max_dim)
    alg._qp = qp
    return alg


def keller_qp(pres: QuiverPresentation, field: Field, max_len=30) -> QuiverWithPotential:
    """Relation arrows and potential for an algebra of global dimension <= 2.

    The given relations must represent a basis of Ext^2 between each pair of
    simples (checked); one degree-1 arrow a_r: t(r) -> s(r) is added per
    relation r and the potential is sum a_r * r.
    """
    algebra = from_presentation(pres, field, max_len)
    pds = [proj_dim(simple(algebra, v), 4) for v in range(algebra.n_vertices)]
    if any(x is None for x in pds) or max(pds) > 2:
        raise InputError(f"global dimension {max(pds, key=lambda x: 99 if x is None else x)} > 2")
    counts = {}
    rel_sig = []
    for rel in pres.relations:
        first_path = rel[0][1]
        src = pres.arrows[[a.name for a in pres.arrows].index(first_path[0])].source
        tgt = pres.arrows[[a.name for a in pres.arrows].index(first_path[-1])].target
        i, j = pres.vertex_index(src), pres.vertex_index(tgt)
        counts[(i, j)] = counts.get((i, j), 0) + 1
        rel_sig.append((i, j))
    for i in range(algebra.n_vertices):
        for j in range(algebra.n_vertices):
            table = ext_module_table(simple(algebra, i), simple(algebra, j), 2)
            want = sum(table.values())
            have = counts.get((i, j), 0)
            if want != have:
                raise InputError(
                    f"relations are not a minimal Ext^2 basis: {have} given between "
                    f"vertices {i}->{j}, dim Ext^2 = {want}"
                )
    arrows = [Arrow(a.name, a.source, a.target, 0) for a in pres.arrows]
    new_names = []
    for r_index, (i, j) in enumerate(rel_sig):
        nm = f"r{r_index}"
        new_names.append(nm)
        arrows.append(Arrow(nm, pres.vertices[j], pres.vertices[i], 1))
    qpres = QuiverPresentation(list(pres.vertices), arrows)
    pot = []
    for r_index, rel in enumerate(pres.relations):
        a_r = qpres.arrow_index(new_names[r_index])
        for c, names in rel:
            word = (a_r,) + tuple(qpres.arrow_index(n) for n in names)
            pot.append((c, word))
    return QuiverWithPotential(qpres, pot)


# -- explicit three-term bimodule complexes -----------------------------------------


def _embed_pair(ctx: BimoduleContext, P: ProjectiveSum, summand, x_coeffs, y_coeffs, coeff, acc):
    """Add coeff * (x ox y) to acc (vector in P coordinates), where x, y are
    coefficient dicts over the base algebra and the pair sits in the given
    summand."""
    A = ctx.algebra
    env = ctx.env
    sl = P.summand_support(summand)
    sup = env.e_support(P.terms[summand][0])
    pos = {int(b): idx for idx, b in zip(sl, sup)}
    f = A.field
    for xb, cx in x_coeffs.items():
        for yb, cy in y_coeffs.items():
            key = xb * A.dim + yb
            if key in pos:
                acc[pos[key]] = f.normalize_scalar(acc[pos[key]] + coeff * cx * cy)
            elif f.normalize_scalar(coeff * cx * cy) != 0:
                raise InputError("pair embedding outside the summand support")


def _word_nf(algebra, word):
    f = algebra.field
    if len(word) == 0:
        raise InputError("trivial word needs a vertex")
    return algebra.nf_word(list(word))


def _trivial_or_nf(algebra, word, vertex):
    if len(word) == 0:
        return {algebra.idempotents[vertex]: algebra.field.one_scalar()}
    return _word_nf(algebra, word)


def preprojective_bimodule_complex(alg: FDAlgebra, kind: str):
    """The explicit start of the minimal bimodule resolution.

    kind = 'pi2': alg from double_quiver_pi2 (preprojective relations);
    kind = 'qp':  alg a Jacobian algebra (second derivatives of the potential,
                  passed through alg._qp).

    Returns dict with ctx, P0, P1, P2, d1, d2, aug.
    """
    pres = alg.presentation
    if pres is None:
        raise InputError("explicit complex needs a presented algebra")
    ctx = as_bimodule(alg)
    env = ctx.env
    A = alg
    f = A.field
    pctx = alg.path_ctx
    n_arrows = len(pres.arrows)
    arr_src = pctx.src
    arr_tgt = pctx.tgt
    arr_deg = pctx.deg

    P0 = ProjectiveSum(env, [(ctx.pair_vertex(i, i), 0) for i in range(A.n_vertices)])
    P1 = ProjectiveSum(
        env, [(ctx.pair_vertex(arr_tgt[a], arr_src[a]), arr_deg[a]) for a in range(n_arrows)]
    )

    reg = ctx.regular_bimodule()
    images0 = f.zeros(reg.dim, A.n_vertices)
    for i in range(A.n_vertices):
        images0[A.idempotents[i], i] = f.one_scalar()
    aug = P0.map_from_generator_images(reg, images0)

    # d1: gen_a -> (a ox e_{s(a)})|_{s(a)}  -  (e_{t(a)} ox a)|_{t(a)}
    images1 = f.zeros(P0.dim, n_arrows)
    for a in range(n_arrows):
        acc = images1[:, a]
        a_nf = _word_nf(A, (a,))
        e_s = {A.idempotents[arr_src[a]]: f.one_scalar()}
        e_t = {A.idempotents[arr_tgt[a]]: f.one_scalar()}
        _embed_pair(ctx, P0, arr_src[a], a_nf, e_s, f.one_scalar(), acc)
        _embed_pair(ctx, P0, arr_tgt[a], e_t, a_nf, -f.one_scalar(), acc)
    d1 = P1.map_from_generator_images(P0, images1)

    # Leibniz lift Delta into P1, from a list of (coeff, word) path terms
    def delta_into_p1(terms):
        acc = f.zeros(P1.dim, 1)[:, 0]
        for coeff, word in terms:
            for i, c in enumerate(word):
                xw, yw = word[i + 1 :], word[:i]
                x = _trivial_or_nf(A, xw, arr_tgt[c])
                y = _trivial_or_nf(A, yw, pctx.src[word[0]] if word else None)
                if not x or not y:
                    continue
                _embed_pair(ctx, P1, c, x, y, coeff, acc)
        return acc

    if kind == "pi2":
        # one relation per vertex: sum_{s(a)=i} a abar - sum_{t(a)=i} abar a
        half = n_arrows // 2
        P2 = ProjectiveSum(env, [(ctx.pair_vertex(i, i), 1) for i in range(A.n_vertices)])
        images2 = f.zeros(P1.dim, A.n_vertices)
        for i in range(A.n_vertices):
            terms = []
            for a in range(half):
                bar = half + a
                if arr_src[a] == i:
                    terms.append((f.one_scalar(), (a, bar)))
                if arr_tgt[a] == i:
                    terms.append((-f.one_scalar(), (bar, a)))
            images2[:, i] = delta_into_p1(terms)
        d2 = P2.map_from_generator_images(P1, images2)
    elif kind == "qp":
        qp = getattr(alg, "_qp", None)
        if qp is None:
            raise InputError("Jacobian algebra lost its potential")
        wdeg = sum(arr_deg[x] for x in qp.potential[0][1]) if qp.potential else 1
        P2 = ProjectiveSum(
            env,
            [(ctx.pair_vertex(arr_src[b], arr_tgt[b]), wdeg - arr_deg[b]) for b in range(n_arrows)],
        )
        images2 = f.zeros(P1.dim, n_arrows)
        for b in range(n_arrows):
            acc = images2[:, b]
            for coeff, word in qp.potential:
                m = len(word)
                for i in range(m):
                    if word[i] != b:
                        continue
                    # Delta applied to the rotated word starting after b
                    rotated = tuple(word[(i + k) % m] for k in range(1, m))
                    for jloc, c in enumerate(rotated):
                        xw = rotated[jloc + 1 :]
                        yw = rotated[:jloc]
                        x = _trivial_or_nf(A, xw, arr_tgt[c])
                        y = _trivial_or_nf(A, yw, arr_tgt[b])
                        if not x or not y:
                            continue
                        _embed_pair(ctx, P1, c, x, y, coeff, acc)
        d2 = P2.map_from_generator_images(P1, images2)
    else:
        raise InputError(f"unknown complex kind {kind!r}")
    return {"ctx": ctx, "P0": P0, "P1": P1, "P2": P2, "d1": d1, "d2": d2, "aug": aug}


# -- extension bimodule and the tensor construction -----------------------------------


def bimodule_dual_complex(ctx: BimoduleContext, length):
    """The termwise swapped dual of the minimal bimodule resolution of the
    algebra: terms W^0..W^length with maps W^n -> W^{n+1}; computes
    RHom_env(A, env).  Returns (terms, maps, finished)."""
    reg = ctx.regular_bimodule()
    res = min_resolution(reg, length + 1)
    terms, maps = [], []
    n = 0
    while n <= length:
        t = res.term(n)
        if t is None:
            break
        terms.append(t)
        n += 1
    duals = []
    dmaps = []
    for i, t in enumerate(terms):
        if i + 1 < len(terms):
            z = res.z_entries(i + 1)
            srcd, tgtd, dmat = ctx.dual_projective_sum_map(terms[i + 1], terms[i], z)
            duals.append(tgtd)  # dual of terms[i]
            dmaps.append(dmat)
            if i + 2 == len(terms) and res.finished() and res.term(i + 1) is not None:
                duals.append(srcd)
        else:
            if not duals:
                duals.append(ProjectiveSum(ctx.env, ctx.dual_terms(t.terms)))
    finished = res.finished()
    return duals, dmaps, finished


def ext_bimodule(lam: FDAlgebra, d: int, bound_extra=2):
    """E = Ext^{d-1} of the algebra into its envelope, as a right module over
    the envelope (a bimodule through the swap).  Zero iff gldim <= d-2."""
    ctx = as_bimodule(lam)
    reg = ctx.regular_bimodule()
    pd = proj_dim(reg, d + bound_extra)
    if pd is None:
        raise BoundExceeded(f"bimodule projective dimension exceeds {d + bound_extra}: gldim too large")
    if pd > d - 1:
        raise InputError(f"global dimension {pd} exceeds d-1 = {d - 1}")
    if pd < d - 1:
        return zero_module(ctx.env), ctx
    duals, dmaps, _ = bimodule_dual_complex(ctx, d - 1)
    # E = H^{d-1} of the dual complex = coker(W^{d-2} -> W^{d-1})
    f = lam.field
    top = duals[d - 1]
    if d - 2 >= 0 and len(dmaps) >= d - 1:
        img = dmaps[d - 2]
        from .bimodules import _independent_columns

        sub_cols = _independent_columns(top, img)
        E, _, _ = quotient(top, sub_cols)
    else:
        E = top
    return E, ctx


def sum_env_action(ctx: BimoduleContext, m: GradedModule, pairs):
    A = ctx.algebra
    f = A.field
    out = f.zeros(m.dim, m.dim)
    for (x, y) in pairs:
        g = x * A.dim + y
        try:
            out = f.reduce(out + m.gen_matrix(g))
        except KeyError:
            continue
    return out


def tensor_over_base(ctx: BimoduleContext, u: GradedModule, v: GradedModule):
    """u ox_Lambda v for two env-modules (bimodules): quotient of the k-tensor
    by (u*lambda) ox w - u ox (lambda*w).  Returns (module, projection,
    section_indices, pair_index) with pair_index(i, j) giving the column of
    u_i ox v_j in the unreduced tensor."""
    A = ctx.algebra
    env = ctx.env
    f = A.field
    nu, nv = u.dim, v.dim
    if nu == 0 or nv == 0:
        z = zero_module(env)
        return z, f.zeros(0, nu * nv), np.array([], dtype=int)
    # env vertex of u_i ox v_j is (r of the v part, l of the u part)
    nvert = A.n_vertices
    u_r, u_l = np.divmod(u.vertex, nvert)
    v_r, v_l = np.divmod(v.vertex, nvert)
    degrees = (u.degrees[:, None] + v.degrees[None, :]).reshape(-1)
    vertex = (v_r[None, :].repeat(nu, axis=0) * nvert + u_l[:, None].repeat(nv, axis=1)).reshape(-1)
    # actions: left acts on u slot, right acts on v slot
    UL = {g: sum_env_action(ctx, u, [(e, g) for e in A.idempotents]) for g in A.nonidem_generators()}
    UR = {g: sum_env_action(ctx, u, [(g, e) for e in A.idempotents]) for g in A.nonidem_generators()}
    VL = {g: sum_env_action(ctx, v, [(e, g) for e in A.idempotents]) for g in A.nonidem_generators()}
    VR = {g: sum_env_action(ctx, v, [(g, e) for e in A.idempotents]) for g in A.nonidem_generators()}
    action = {}
    eye_u, eye_v = f.eye(nu), f.eye(nv)
    for g in env.nonidem_generators():
        x, y = divmod(g, A.dim)
        # m*(x ox y) = y m x: right slot gets x, left slot gets y
        mu = eye_u
        mv = eye_v
        if y in A.idempotents:
            sel = f.zeros(nu, nu)
            vy = A.idempotents.index(y)
            for i in range(nu):
                if u_l[i] == vy:
                    sel[i, i] = f.one_scalar()
            mu = sel
        else:
            mu = UL[y]
        if x in A.idempotents:
            sel = f.zeros(nv, nv)
            vx = A.idempotents.index(x)
            for j in range(nv):
                if v_r[j] == vx:
                    sel[j, j] = f.one_scalar()
            mv = sel
        else:
            mv = VR[x]
        action[g] = np.kron(mu, mv) % f.p if f.p else np.kron(mu, mv)
    big = GradedModule(env, degrees, vertex, action)
    # relations: (u * lambda) ox w - u ox (lambda * w), lambda over generators
    # and idempotents
    rel_cols = []
    lam_gens = [(gidx, UR[gidx], VL[gidx]) for gidx in A.nonidem_generators()]
    for e in A.idempotents:
        ve = A.idempotents.index(e)
        sel_u = f.zeros(nu, nu)
        for i in range(nu):
            if u_r[i] == ve:
                sel_u[i, i] = f.one_scalar()
        sel_v = f.zeros(nv, nv)
        for j in range(nv):
            if v_l[j] == ve:
                sel_v[j, j] = f.one_scalar()
        lam_gens.append((None, sel_u, sel_v))
    for (_, ru, lv) in lam_gens:
        left = np.kron(ru, eye_v)
        right = np.kron(eye_u, lv)
        diff = f.reduce(left - right)
        for col in range(nu * nv):
            c = diff[:, col]
            if c.any():
                rel_cols.append(c)
    if rel_cols:
        from .bimodules import _independent_columns

        rel = _independent_columns(big, np.stack(rel_cols, axis=1))
    else:
        rel = f.zeros(big.dim, 0)
    q, proj, keep = quotient(big, rel)
    return q, proj, keep


def tensor_pi_d(lam: FDAlgebra, d: int, max_degree=MAX_TENSOR_DEGREE):
    """The graded tensor algebra on the extension bimodule: degree-p part は
    the p-th tensor power over the base; terminates when a power vanishes.

    Returns an FDAlgebra whose degree-zero part is the input algebra."""
    if int(lam.degrees.max(initial=0)) != 0:
        raise InputError("tensor construction expects the base concentrated in degree 0")
    E, ctx = ext_bimodule(lam, d)
    f = lam.field
    A = lam
    layers = [ctx.regular_bimodule()]
    # per layer p >= 1: parent pairs (index into layer p-1, index into E) and
    # projection matrices for multiplication
    parents = [None]
    projs = [None]
    if E.dim:
        cur = E
        layers.append(E)
        parents.append([("E", j) for j in range(E.dim)])
        projs.append(None)
        p = 1
        while True:
            p += 1
            if p > max_degree:
                raise BoundExceeded(f"tensor algebra still alive at degree {max_degree}")
            nxt, proj, keep = tensor_over_base(ctx, layers[-1], E)
            if nxt.dim == 0:
                break
            layers.append(nxt)
            parents.append([divmod(int(k), E.dim) for k in keep])
            projs.append(proj)
    return _assemble_tensor_algebra(lam, ctx, layers, parents, projs, d)


def _assemble_tensor_algebra(lam, ctx, layers, parents, projs, d):
    f = lam.field
    A = lam
    offsets = np.cumsum([0] + [l.dim for l in layers])
    labels = []
    degrees = []
    left_v, right_v = [], []
    nvert = A.n_vertices
    for p, layer in enumerate(layers):
        r, l = np.divmod(layer.vertex, nvert)
        for j in range(layer.dim):
            labels.append(f"t{p}_{j}" if p else A.labels[j])
            degrees.append(p)
            left_v.append(int(l[j]))
            right_v.append(int(r[j]))
    idempotents = [int(e) for e in A.idempotents]

    left_mats = {}  # (p, algebra generator) -> left action matrix on layer p
    right_mats = {}

    def left_apply(p, g, vec):
        key = (p, g)
        if key not in left_mats:
            left_mats[key] = sum_env_action(ctx, layers[p], [(e, g) for e in A.idempotents])
        return f.matmul(left_mats[key], vec.reshape(-1, 1))[:, 0]

    def right_apply(p, g, vec):
        key = (p, g)
        if key not in right_mats:
            right_mats[key] = sum_env_action(ctx, layers[p], [(g, e) for e in A.idempotents])
        return f.matmul(right_mats[key], vec.reshape(-1, 1))[:, 0]

    def times_lambda(p, xvec, lidx):
        """x * (basis element lidx of the base) inside layer p (right action)."""
        out = xvec
        layer = layers[p]
        r, _ = np.divmod(layer.vertex, nvert)
        for g in A.words[lidx]:
            if g in A.idempotents:
                ve = A.idempotents.index(g)
                out = out * (r == ve).astype(np.int64)
            else:
                out = right_apply(p, g, out)
        return out

    def lambda_times_e(xvec, eidx):
        """(element of the base with coordinates xvec) * (E basis eidx):
        left action of the base on layer 1."""
        out = f.zeros(layers[1].dim, 1)[:, 0]
        _, l1 = np.divmod(layers[1].vertex, nvert)
        for b in np.nonzero(xvec)[0]:
            word = A.words[int(b)]
            vec = f.zeros(layers[1].dim, 1)[:, 0]
            vec[eidx] = f.one_scalar()
            for g in reversed(word):
                if g in A.idempotents:
                    ve = A.idempotents.index(g)
                    vec = vec * (l1 == ve).astype(np.int64)
                else:
                    vec = left_apply(1, g, vec)
            out = f.reduce(out + xvec[b] * vec)
        return out

    def times_e(p, xvec, eidx):
        """(vector in layer p >= 1) * (E basis eidx) via the projection of the
        pure tensor; None means the product lands beyond the top (zero)."""
        if p + 1 >= len(layers):
            return None
        nE = layers[1].dim
        col = f.zeros(layers[p].dim * nE, 1)[:, 0]
        col[np.arange(layers[p].dim) * nE + eidx] = xvec
        return f.matmul(projs[p + 1], col.reshape(-1, 1))[:, 0]

    def _prod_vec(p, xvec, q, j_local):
        if q == 0:
            return p, times_lambda(p, xvec, j_local)
        if q == 1:
            if p == 0:
                return 1, lambda_times_e(xvec, j_local)
            if p + 1 >= len(layers):
                return p + 1, None
            return p + 1, times_e(p, xvec, j_local)
        parent_j, e_j = parents[q][j_local]
        pp, v = _prod_vec(p, xvec, q - 1, parent_j)
        if v is None:
            return pp + 1, None
        return _prod_vec(pp, v, 1, e_j)

    def product(p, i_local, q, j_local):
        xvec = f.zeros(layers[p].dim, 1)[:, 0]
        xvec[i_local] = f.one_scalar()
        return _prod_vec(p, xvec, q, j_local)

    table = {}
    for p in range(len(layers)):
        for q in range(len(layers)):
            for i in range(layers[p].dim):
                for j in range(layers[q].dim):
                    tp, vec = product(p, i, q, j)
                    if vec is None or not vec.any():
                        continue
                    entry = {}
                    for k in np.nonzero(vec)[0]:
                        entry[int(offsets[tp] + k)] = int(vec[k]) if f.p else vec[k]
                    table[(int(offsets[p] + i), int(offsets[q] + j))] = entry

    generators = [int(offsets[0] + g) for g in A.generators]
    if len(layers) > 1:
        generators += [int(offsets[1] + j) for j in range(layers[1].dim)]
    words = []
    for p in range(len(layers)):
        for j in range(layers[p].dim):
            if p == 0:
                words.append(tuple(int(g) for g in A.words[j]))
            elif p == 1:
                words.append((int(offsets[1] + j),))
            else:
                parent_j, e_j = parents[p][j]
                words.append(None)  # filled below
    # fill tensor words by recursion on the parent structure
    idx_of = lambda p, j: int(offsets[p] + j)
    for p in range(2, len(layers)):
        for j in range(layers[p].dim):
            parent_j, e_j = parents[p][j]
            words[idx_of(p, j)] = words[idx_of(p - 1, parent_j)] + (idx_of(1, e_j),)

    from .algebras import table_algebra

    alg = table_algebra(
        field=f,
        labels=labels,
        degrees=degrees,
        idempotents=idempotents,
        left_vertex=left_v,
        right_vertex=right_v,
        table=table,
        generators=generators,
        words=[tuple(w) for w in words],
        content_key=("tensor_pi_d", lam.content_key, d, tuple(l.dim for l in layers)),
    )
    alg._tensor_layers = [l.dim for l in layers]
    return alg
