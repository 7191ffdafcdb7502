"""Indecomposable decomposition, isomorphism testing, projective stripping
and stable Hom dimensions.

Decomposition lifts idempotents of End(M)/rad: take a random endomorphism,
compute the minimal polynomial of its image modulo the radical, split it into
coprime halves, evaluate the CRT idempotent and Newton-lift it along the
nilpotent radical.  When no random element ever splits, the semisimple
quotient is a field: the module is indecomposable (a quotient bigger than F_p
is flagged, since the ground field is not algebraically closed).

Isomorphism testing is sound: a True verdict always carries a verified
invertible degree-0 morphism.  A False verdict after s random trials is wrong
with probability ~ p^-s; the decompose-and-match fallback removes this on
accepted fixtures.
"""

from __future__ import annotations

import numpy as np

from . import fppoly
from .errors import DecompositionFailed
from .linalg import column_space_basis, is_invertible, rank, solve
from .homs import hom_space
from .modules import (
    GradedModule,
    direct_sum,
    projective,
    projective_cover,
    submodule,
    top_generators,
    zero_module,
)

ISO_TRIALS = 20
DECOMPOSE_TRIES = 64


def graded_dim_table(m: GradedModule):
    out = {}
    for i in range(m.dim):
        k = (int(m.degrees[i]), int(m.vertex[i]))
        out[k] = out.get(k, 0) + 1
    return out


def _endo_algebra(m: GradedModule):
    """Matrices of a basis of End_gr(m) (degree-0 graded endomorphisms)."""
    hb = hom_space(m, m, 0)
    return [hb.matrix(j) for j in range(hb.dim)]


def _radical_coords(mats, p):
    """Coordinates (in the given basis of End) spanning the radical: kernel of
    the trace form, valid since p > dim of the underlying space."""
    e = len(mats)
    gram = np.zeros((e, e), dtype=np.int64)
    for i in range(e):
        for j in range(e):
            gram[i, j] = int(np.trace((mats[i] @ mats[j]) % p) % p)
    from .linalg import kernel_basis

    return kernel_basis(gram, p)


def _coords_of(mats_flat, mat, p):
    return solve(mats_flat, mat.reshape(-1) % p, p)


def _min_poly_in_quotient(s_mat, mats, mats_flat, rad, p, max_deg):
    """Minimal polynomial of the image of s in End/rad.

    Powers of s are expressed in End coordinates and reduced modulo the
    radical subspace; the first linear dependency gives the polynomial."""
    e = len(mats)
    n = s_mat.shape[0]
    reducer = rad  # (e, r)
    rows = []
    power = np.eye(n, dtype=np.int64)
    coords_list = []
    for t in range(max_deg + 1):
        coords = _coords_of(mats_flat, power, p)
        if coords is None:
            raise DecompositionFailed("endomorphism power escaped End(M)")
        coords_list.append(coords)
        stacked = np.stack(coords_list, axis=1)
        aug = np.concatenate([reducer, stacked[:, :-1]], axis=1) if reducer.shape[1] else stacked[:, :-1]
        sol = solve(aug, coords, p) if aug.shape[1] else None
        if sol is not None:
            r = reducer.shape[1]
            mu = [int(-sol[r + i]) % p for i in range(t)] + [1]
            return fppoly.trim(mu)
        power = (power @ s_mat) % p
    raise DecompositionFailed("no minimal polynomial found (bound hit)")


def _image_submodule(m, mat):
    cols = []
    f = m.field
    for (d, v), idx in m.blocks().items():
        basis, _ = column_space_basis(mat[:, idx], f.p)
        cols.extend(basis[:, j] for j in range(basis.shape[1]))
    if not cols:
        return None
    return submodule(m, np.stack(cols, axis=1))


def decompose_with_inclusions(m: GradedModule, rng=None, tries=DECOMPOSE_TRIES):
    """[(piece, inclusion)] with m the direct sum of the pieces along the
    inclusion matrices; every piece has local endomorphism ring.

    When End/rad is a field strictly larger than F_p the piece is flagged
    with _cache['division_ring_flag'] = True (the ground field is not
    algebraically closed; reports surface this)."""
    rng = rng if rng is not None else np.random.default_rng(0)
    if m.dim == 0:
        return []
    f = m.field
    p = f.p
    mats = _endo_algebra(m)
    e = len(mats)
    if e == 1:
        return [(m, f.eye(m.dim))]
    mats_flat = np.stack([mt.reshape(-1) for mt in mats], axis=1) % p
    rad = _radical_coords(mats, p)
    s_dim = e - rad.shape[1]
    if s_dim == 1:
        return [(m, f.eye(m.dim))]
    for _ in range(tries):
        coeffs = rng.integers(0, p, size=e)
        s = np.zeros_like(mats[0])
        for c, mt in zip(coeffs, mats):
            s = (s + int(c) * mt) % p
        mu = _min_poly_in_quotient(s, mats, mats_flat, rad, p, s_dim + 1)
        if fppoly.degree(mu) < 1:
            continue
        split = fppoly.coprime_split(mu, p, rng)
        if split is None:
            if fppoly.degree(mu) == s_dim:
                # s generates End/rad and its minimal polynomial is a prime
                # power; irreducible means End/rad is a field
                u = fppoly.divmod_poly(mu, fppoly.gcd(mu, fppoly.derivative(mu, p), p), p)[0]
                if fppoly.degree(u) == fppoly.degree(mu):
                    m._cache["division_ring_flag"] = s_dim > 1
                    return [(m, f.eye(m.dim))]
            continue
        F, G = split
        q = fppoly.crt_idempotent(F, G, p)
        em = fppoly.evaluate_matrix(q, s, p)
        em = _newton_idempotent(em, p)
        if em is None:
            continue
        if not em.any() or not ((em - np.eye(m.dim, dtype=np.int64)) % p).any():
            continue
        part1 = _image_submodule(m, em)
        part2 = _image_submodule(m, (np.eye(m.dim, dtype=np.int64) - em) % p)
        if part1 is None or part2 is None:
            continue
        out = []
        for sub, C in (part1, part2):
            for piece, inc in decompose_with_inclusions(sub, rng, tries):
                out.append((piece, f.matmul(C, inc)))
        return out
    raise DecompositionFailed(
        f"no splitting idempotent found in {tries} tries (End/rad dim {s_dim})"
    )


def decompose(m: GradedModule, rng=None, tries=DECOMPOSE_TRIES):
    """Indecomposable direct summands of m (graded Krull-Schmidt pieces)."""
    return [piece for piece, _ in decompose_with_inclusions(m, rng, tries)]


def _newton_idempotent(x, p, iters=40):
    """Lift x with x^2 = x mod rad to an exact idempotent: x <- 3x^2 - 2x^3."""
    for _ in range(iters):
        sq = (x @ x) % p
        if np.array_equal(sq, x):
            return x
        x = (3 * sq - 2 * ((sq @ x) % p)) % p
    return None


def is_isomorphic(m: GradedModule, n: GradedModule, allow_shift=False, rng=None, trials=ISO_TRIALS, deep=True):
    """(verdict, shift, witness): verdict True iff an invertible degree-0
    graded map m -> n(shift) was found and verified (shift = 0 unless
    allow_shift)."""
    if m.algebra is not n.algebra:
        raise ValueError("algebra mismatch in is_isomorphic")
    rng = rng if rng is not None else np.random.default_rng(0)
    if m.dim != n.dim:
        return False, None, None
    if m.dim == 0:
        return True, 0, np.zeros((0, 0), dtype=np.int64)
    tm, tn = graded_dim_table(m), graded_dim_table(n)
    if allow_shift:
        deltas = sorted({dn - dm for (dm, vm) in tm for (dn, vn) in tn if vm == vn})
        candidates = [d for d in deltas if _table_shift_match(tm, tn, d)]
    else:
        candidates = [0] if tm == tn else []
    for delta in candidates:
        ok, wit = _iso_at_shift(m, n, delta, rng, trials, deep)
        if ok:
            return True, delta, wit
    return False, None, None


def _table_shift_match(tm, tn, delta):
    if len(tm) != len(tn):
        return False
    return all(tn.get((d + delta, v)) == c for (d, v), c in tm.items())


def _iso_at_shift(m, n, delta, rng, trials, deep):
    hb = hom_space(m, n, delta)
    if hb.dim == 0:
        return False, None
    p = m.field.p
    for _ in range(trials):
        coeffs = rng.integers(0, p, size=hb.dim)
        w = hb.realize(coeffs)
        if is_invertible(w, p):
            return True, w
    if not deep:
        return False, None
    # deterministic fallback: match indecomposable summands
    dm = decompose(m, rng)
    dn = decompose(n.shifted(delta) if delta else n, rng)
    if len(dm) != len(dn):
        return False, None
    used = [False] * len(dn)
    for piece in dm:
        hit = None
        for j, other in enumerate(dn):
            if used[j]:
                continue
            ok, _, _ = is_isomorphic(piece, other, rng=rng, trials=trials, deep=False)
            if ok:
                hit = j
                break
        if hit is None:
            return False, None
        used[hit] = True
    # matched everywhere: rebuild a witness by one more randomized round
    for _ in range(trials * 4):
        coeffs = rng.integers(0, p, size=hb.dim)
        w = hb.realize(coeffs)
        if is_invertible(w, p):
            return True, w
    return False, None


def is_projective_module(m: GradedModule, rng=None):
    """Is m isomorphic to a (shifted) indecomposable projective?  m must be
    indecomposable."""
    gens = top_generators(m)
    if len(gens) != 1:
        return False
    v = int(m.vertex[gens[0]])
    d = int(m.degrees[gens[0]])
    cand = projective(m.algebra, v, -d)
    if cand.dim != m.dim:
        return False
    ok, _, _ = is_isomorphic(m, cand, rng=rng)
    return ok


def strip_projectives(m: GradedModule, rng=None):
    """(stripped, projective_terms): m = stripped + projectives, stripped has
    no projective summand (certified through decompose)."""
    rng = rng if rng is not None else np.random.default_rng(0)
    if m.dim == 0:
        return m, []
    pieces = decompose(m, rng)
    keep, proj_terms = [], []
    for piece in pieces:
        gens = top_generators(piece)
        if len(gens) == 1 and is_projective_module(piece, rng):
            proj_terms.append((int(piece.vertex[gens[0]]), int(piece.degrees[gens[0]])))
        else:
            keep.append(piece)
    if not keep:
        return zero_module(m.algebra), proj_terms
    return direct_sum(m.algebra, keep), proj_terms


# -- stable homomorphisms --------------------------------------------------------


def stable_hom_dim(m: GradedModule, n: GradedModule, shift):
    """dim of Hom_gr(m, n(shift)) modulo maps factoring through projectives."""
    hb = hom_space(m, n, shift)
    if hb.dim == 0:
        return 0
    f = m.field
    Pn, pmap = projective_cover(n)
    hp = hom_space(m, Pn, shift)
    if hp.dim == 0:
        return hb.dim
    # coordinates of pi o h inside hb's value space
    imgs = []
    for j in range(hp.dim):
        vals = []
        for k in range(len(hb.slices)):
            vec = f.matmul(pmap, hp.value(f.eye(hp.dim)[:, j], k).reshape(-1, 1))[:, 0]
            vals.append(vec[hb.slices[k]])
        imgs.append(np.concatenate(vals))
    imgs = np.stack(imgs, axis=1)
    return hb.dim - rank(imgs, f.p)


def stable_hom_table(m, n, i, res_bound=40):
    """dict q -> dim of stable Hom(Omega-shifted m, n) at internal degree q:
    stable Ext^i for i >= 0 via syzygies, negative i via the Cohen-Macaulay
    cosyzygy (dual, syzygy, dual back)."""
    from .homs import algebra_dual
    from .modules import syzygy as syz

    x = m
    if i > 0:
        x = syz(m, i)
    elif i < 0:
        for _ in range(-i):
            xd, _, _ = algebra_dual(x)
            od = syz(xd, 1)
            x, _, _ = algebra_dual(od)
    if x.dim == 0 or n.dim == 0:
        return {}
    lo = int(n.degrees.min() - x.degrees.max())
    hi = int(n.degrees.max() - x.degrees.min())
    out = {}
    for q in range(lo, hi + 1):
        d = stable_hom_dim(x, n, q)
        if d:
            out[q] = d
    return out
