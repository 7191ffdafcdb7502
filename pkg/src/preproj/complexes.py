"""Bounded cochain complexes of graded modules.

Differentials raise the cohomological index by one.  Homology is returned as
an honest GradedModule (subquotient); Hom-spaces in the homotopy category are
computed from the Hom double complex with the usual sign.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .homs import hom_space
from .linalg import kernel_basis, rank, solve
from .modules import GradedModule, ProjectiveSum, kernel_of_map, quotient, submodule, zero_module


class PComplex:
    def __init__(self, algebra, terms: dict, diffs: dict):
        self.algebra = algebra
        self.terms = {i: t for i, t in terms.items() if t is not None and t.dim > 0}
        self.diffs = {
            i: d
            for i, d in diffs.items()
            if i in self.terms and (i + 1) in self.terms
        }

    @property
    def field(self):
        return self.algebra.field

    def support(self):
        return sorted(self.terms)

    def term(self, i):
        return self.terms.get(i)

    def dim(self, i):
        t = self.terms.get(i)
        return t.dim if t is not None else 0

    def diff(self, i):
        """d^i: term(i) -> term(i+1); zero matrix when either side is absent."""
        if i in self.diffs:
            return self.diffs[i]
        return self.field.zeros(self.dim(i + 1), self.dim(i))

    def shifted(self, n):
        """X[n]: X[n]^i = X^{n+i} (differentials reindexed; sign dropped,
        which changes nothing about kernels, images or homology)."""
        return PComplex(
            self.algebra,
            {i - n: t for i, t in self.terms.items()},
            {i - n: d for i, d in self.diffs.items()},
        )

    def verify(self):
        for i in self.support():
            a, b = self.diff(i), self.diff(i + 1)
            if self.field.matmul(b, a).any():
                raise InputError(f"d^2 != 0 at degree {i}")
        return True

    def homology_module(self, i):
        t = self.term(i)
        if t is None:
            return zero_module(self.algebra)
        f = self.field
        ker = kernel_of_map(t, self.diff(i), f.p)
        if ker.shape[1] == 0:
            return zero_module(self.algebra)
        S, C = submodule(t, ker)
        prev = self.diff(i - 1)
        if not prev.any():
            return S
        incoming = solve(C, prev, f.p)
        if incoming is None:
            raise InputError("image not contained in kernel")
        from .bimodules import _independent_columns

        cols = _independent_columns(S, incoming)
        if cols.shape[1] == 0:
            return S
        q, _, _ = quotient(S, cols)
        return q

    def homology_dims(self):
        out = {}
        lo = min(self.support(), default=0)
        hi = max(self.support(), default=-1)
        for i in range(lo, hi + 1):
            h = self.homology_module(i)
            if h.dim:
                out[i] = h.dim
        return out

    def top_homology_degree(self):
        dims = self.homology_dims()
        return max(dims) if dims else None

    def total_dim(self):
        return sum(t.dim for t in self.terms.values())


def stalk_complex(module, degree=0) -> PComplex:
    return PComplex(module.algebra, {degree: module}, {})


def minimize_complex(X: PComplex) -> PComplex:
    """Homotopy-minimal representative of a complex of ProjectiveSums.

    Gaussian elimination: whenever a differential has an invertible block
    between a source summand and a target summand of the same vertex and
    generator degree (unit coefficient on the generator), that contractible
    pair is split off; only the middle differential receives the correction
    delta - gamma alpha^{-1} beta.  Terminates when every entry lies in the
    radical, i.e. the complex is minimal."""
    from .linalg import invert

    f = X.field
    terms = dict(X.terms)
    diffs = dict(X.diffs)
    changed = True
    while changed:
        changed = False
        for i in sorted(diffs):
            src, tgt = terms.get(i), terms.get(i + 1)
            if src is None or tgt is None:
                continue
            d = diffs[i]
            hit = None
            for l, (vl, dl) in enumerate(src.terms):
                for k, (vk, dk) in enumerate(tgt.terms):
                    if vl != vk or dl != dk:
                        continue
                    if d[tgt.gen_positions[k], src.gen_positions[l]] != 0:
                        hit = (k, l)
                        break
                if hit:
                    break
            if hit is None:
                continue
            k, l = hit
            sl = src.summand_support(l)
            sk = tgt.summand_support(k)
            rest_src = np.setdiff1d(np.arange(src.dim), sl)
            rest_tgt = np.setdiff1d(np.arange(tgt.dim), sk)
            alpha = d[np.ix_(sk, sl)]
            beta = d[np.ix_(sk, rest_src)]
            gamma = d[np.ix_(rest_tgt, sl)]
            delta = d[np.ix_(rest_tgt, rest_src)]
            corrected = f.reduce(delta - f.matmul(gamma, f.matmul(invert(alpha, f.p), beta)))
            new_src = ProjectiveSum(X.algebra, [t for j, t in enumerate(src.terms) if j != l])
            new_tgt = ProjectiveSum(X.algebra, [t for j, t in enumerate(tgt.terms) if j != k])
            if new_src.dim:
                terms[i] = new_src
            else:
                terms.pop(i)
            if new_tgt.dim:
                terms[i + 1] = new_tgt
            else:
                terms.pop(i + 1)
            if new_src.dim and new_tgt.dim:
                diffs[i] = corrected
            else:
                diffs.pop(i, None)
            if (i - 1) in diffs:
                if new_src.dim:
                    diffs[i - 1] = diffs[i - 1][rest_src, :]
                else:
                    diffs.pop(i - 1)
            if (i + 1) in diffs:
                if new_tgt.dim:
                    diffs[i + 1] = diffs[i + 1][:, rest_tgt]
                else:
                    diffs.pop(i + 1)
            changed = True
            break
    return PComplex(X.algebra, terms, diffs)


def resolution_complex(m, length) -> tuple[PComplex, bool]:
    """Projective resolution as a complex in degrees -length..0 (term P_n at
    degree -n); second value: whether the resolution finished."""
    from .modules import min_resolution

    res = min_resolution(m, length)
    terms, diffs = {}, {}
    for n in range(length + 1):
        t = res.term(n)
        if t is None:
            break
        terms[-n] = t
        if n >= 1:
            diffs[-n] = res.differential(n)
    return PComplex(m.algebra, terms, diffs), res.finished()


def hom_chain_dims(X: PComplex, Y: PComplex, n, shift_p=0):
    """dim Hom_{K}(X, Y[n]) for complexes of projectives: H^n of the Hom
    double complex (graded maps of internal degree shift_p)."""
    f = X.field

    def cspace(k):
        # C^k = prod_j Hom(X^j, Y^{j+k}); returns (bases dict j -> HomBasis,
        # offsets, total)
        bases = {}
        total = 0
        offs = {}
        for j in X.support():
            t = Y.term(j + k)
            if t is None:
                continue
            hb = hom_space(X.term(j), t, shift_p)
            if hb.dim:
                offs[j] = total
                bases[j] = hb
                total += hb.dim
        return bases, offs, total

    def dmatrix(k, src, soffs, stot, tgt, toffs, ttot):
        """D: C^k -> C^{k+1}: f |-> d_Y o f - (-1)^k f o d_X."""
        mat = f.zeros(ttot, stot)
        sign = -f.one_scalar() if k % 2 else f.one_scalar()
        for j, hb in src.items():
            for a in range(hb.dim):
                fm = hb.matrix(a)
                col = soffs[j] + a
                # d_Y component lands in Hom(X^j, Y^{j+k+1})
                if j in tgt:
                    dy = Y.diff(j + k)
                    comp = f.matmul(dy, fm)
                    coords = _coords_in_hombasis(tgt[j], comp)
                    mat[toffs[j] : toffs[j] + tgt[j].dim, col] = f.reduce(
                        mat[toffs[j] : toffs[j] + tgt[j].dim, col] + coords
                    )
                # f o d_X component lands in Hom(X^{j-1}, Y^{j+k})
                if (j - 1) in tgt:
                    dx = X.diff(j - 1)
                    comp = f.matmul(fm, dx)
                    coords = _coords_in_hombasis(tgt[j - 1], comp)
                    mat[toffs[j - 1] : toffs[j - 1] + tgt[j - 1].dim, col] = f.reduce(
                        mat[toffs[j - 1] : toffs[j - 1] + tgt[j - 1].dim, col] - sign * coords
                    )
        return mat

    b0, o0, t0 = cspace(n)
    if t0 == 0:
        return 0
    bm, om, tm = cspace(n - 1)
    bp, op_, tp = cspace(n + 1)
    d0 = dmatrix(n, b0, o0, t0, bp, op_, tp)
    ker = t0 - rank(d0, f.p)
    if tm == 0:
        return ker
    dm = dmatrix(n - 1, bm, om, tm, b0, o0, t0)
    return ker - rank(dm, f.p)


def _coords_in_hombasis(hb, matrix):
    """Coordinates of a morphism (given as a full matrix) in a HomBasis."""
    f = hb.M.field
    vals = []
    from .modules import top_generators

    gens = top_generators(hb.M)
    for k, i in enumerate(gens):
        col = matrix[:, _gen_position(hb.M, i)]
        vals.append(col[hb.slices[k]])
    vec = np.concatenate(vals) if vals else f.zeros(0, 1)[:, 0]
    sol = solve(hb.vectors, vec, f.p)
    if sol is None:
        raise InputError("morphism not in the Hom space")
    return sol


def _gen_position(m, i):
    return i
