"""Quiver presentations and the noncommutative Groebner engine.

Paths are stored in traversal order: a path key is (source_vertex,
(arrow_0, arrow_1, ...)) and the product p*q means "traverse p, then q",
defined when target(p) == source(q).  This single pinned convention is
used for every formula in the package.

The monomial order is length-then-lexicographic on arrow index tuples.
Relations of an admissible ideal rewrite strictly downwards in this order,
so normal forms terminate; completion resolves all overlap ambiguities
(diamond lemma), with configurable bounds turning a non-terminating input
into a clean error.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import DimensionBoundExceeded, InhomogeneousRelation, InputError
from .linalg import Field

MAX_PATH_LEN = 30
MAX_DIM = 20000


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 0


@dataclass
class QuiverPresentation:
    """Quiver with scalar relations; the textual source of every algebra.

    relations: each is a list of (coeff, [arrow names]) terms; all paths in
    one relation must be parallel and of homogeneous arrow-degree, with
    length >= 2 (admissibility).
    """

    vertices: list
    arrows: list
    relations: list = dc_field(default_factory=list)

    def __post_init__(self):
        names = set()
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise InputError(f"arrow {a.name}: endpoint not a declared vertex")
            if a.name in names:
                raise InputError(f"duplicate arrow name {a.name}")
            if a.degree < 0:
                raise InputError(f"arrow {a.name}: negative degree")
            names.add(a.name)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex names")

    def arrow_index(self, name):
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise InputError(f"unknown arrow {name!r}")

    def vertex_index(self, name):
        return self.vertices.index(name)


class PathContext:
    """Resolved arrays for one quiver: arrow sources/targets/degrees by index."""

    def __init__(self, pres: QuiverPresentation):
        self.pres = pres
        self.n_vertices = len(pres.vertices)
        self.src = [pres.vertex_index(a.source) for a in pres.arrows]
        self.tgt = [pres.vertex_index(a.target) for a in pres.arrows]
        self.deg = [a.degree for a in pres.arrows]

    def path(self, source, arrows=()):
        arrows = tuple(arrows)
        v = source
        for a in arrows:
            if self.src[a] != v:
                raise InputError("arrows do not compose into a path")
            v = self.tgt[a]
        return (source, arrows)

    def path_from_names(self, names):
        idx = [self.pres.arrow_index(n) for n in names]
        if not idx:
            raise InputError("empty path needs an explicit vertex")
        return self.path(self.src[idx[0]], idx)

    def target(self, p):
        return self.tgt[p[1][-1]] if p[1] else p[0]

    def source(self, p):
        return p[0]

    def degree(self, p):
        return sum(self.deg[a] for a in p[1])

    def concat(self, p, q):
        if self.target(p) != self.source(q):
            return None
        return (p[0], p[1] + q[1])

    def trivial(self, v):
        return (v, ())

    def label(self, p):
        if not p[1]:
            return f"e_{self.pres.vertices[p[0]]}"
        return "*".join(self.pres.arrows[a].name for a in p[1])


def order_key(p):
    return (len(p[1]), p[1], p[0])


class PathPoly(dict):
    """Linear combination of paths: dict path -> nonzero coefficient."""

    @staticmethod
    def build(field: Field, terms):
        out = PathPoly()
        for c, p in terms:
            c = field.normalize_scalar(field.normalize_scalar(c) + out.get(p, 0))
            if c == 0:
                out.pop(p, None)
            else:
                out[p] = c
        return out

    def lead(self):
        return max(self, key=order_key)

    def scaled(self, c, field):
        return PathPoly.build(field, [(field.normalize_scalar(v * c), p) for p, v in self.items()])

    def minus(self, other, field):
        terms = [(c, p) for p, c in self.items()]
        terms += [(field.normalize_scalar(-c), p) for p, c in other.items()]
        return PathPoly.build(field, terms)


def compose(ctx, field, u, poly, v):
    """u * poly * v for paths u, v (either may be trivial)."""
    out = []
    for p, c in poly.items():
        up = ctx.concat(u, p)
        if up is None:
            continue
        upv = ctx.concat(up, v)
        if upv is None:
            continue
        out.append((c, upv))
    return PathPoly.build(field, out)


def _subword_positions(word, sub):
    n, k = len(word), len(sub)
    return [s for s in range(n - k + 1) if word[s : s + k] == sub]


def _split_at(ctx, mono, s, k):
    """mono = u * (subword at position s of length k) * v; return (u, v)."""
    src, arrows = mono
    u = (src, arrows[:s])
    pos = src
    for a in arrows[: s + k]:
        pos = ctx.tgt[a]
    v = (pos, arrows[s + k :])
    return u, v


def normal_form(ctx, field, poly, gb, max_len=MAX_PATH_LEN):
    """Fully reduce poly modulo the (monic) rewriting system gb."""
    leads = [(g.lead(), g) for g in gb]
    work = PathPoly(poly)
    while True:
        hit = None
        for mono in sorted(work, key=order_key, reverse=True):
            for (lp, g) in leads:
                pos = _subword_positions(mono[1], lp[1])
                if pos:
                    hit = (mono, g, pos[0], len(lp[1]))
                    break
            if hit:
                break
        if hit is None:
            return work
        mono, g, s, k = hit
        u, v = _split_at(ctx, mono, s, k)
        c = work[mono]
        work = work.minus(compose(ctx, field, u, g, v).scaled(c, field), field)
        if any(len(p[1]) > max_len for p in work):
            raise DimensionBoundExceeded("normal form exceeded max path length")


def _monic(poly, field):
    return poly.scaled(field.inv_scalar(poly[poly.lead()]), field)


def _spolys(ctx, field, g, h, same):
    """All overlap/containment S-polynomials of the pair (g, h)."""
    lg, lh = g.lead(), h.lead()
    wg, wh = lg[1], lh[1]
    out = []
    top = min(len(wg), len(wh))
    for olen in range(1, top + 1):
        if same and olen == len(wg) == len(wh):
            continue
        if wg[len(wg) - olen :] != wh[:olen]:
            continue
        v = (ctx.tgt[wh[olen - 1]], wh[olen:])
        u = (lg[0], wg[: len(wg) - olen])
        gv = compose(ctx, field, ctx.trivial(lg[0]), g, v)
        uh = compose(ctx, field, u, h, ctx.trivial(ctx.target((lh[0], wh))))
        s = gv.minus(uh, field)
        if s:
            out.append(s)
    if len(wh) < len(wg):
        for s0 in _subword_positions(wg, wh):
            u, v = _split_at(ctx, (lg[0], wg), s0, len(wh))
            s = g.minus(compose(ctx, field, u, h, v), field)
            if s:
                out.append(s)
    return out


def complete(ctx, field, relations, max_len=MAX_PATH_LEN, max_passes=200):
    """Complete the rewriting system until all ambiguities resolve.

    Fixed-point iteration: every pass resolves every overlap of the current
    basis; a nonzero normal form joins the basis.  Desk-scale inputs finish
    in a handful of passes; the pass bound converts divergence into an error.
    """
    gb = []
    for r in relations:
        nf = normal_form(ctx, field, r, gb, max_len)
        if nf:
            gb.append(_monic(nf, field))
    for _ in range(max_passes):
        added = False
        for i in range(len(gb)):
            for j in range(len(gb)):
                for s in _spolys(ctx, field, gb[i], gb[j], i == j):
                    nf = normal_form(ctx, field, s, gb, max_len)
                    if nf:
                        if len(nf.lead()[1]) > max_len:
                            raise DimensionBoundExceeded("Groebner lead word exceeded max path length")
                        gb.append(_monic(nf, field))
                        added = True
        if not added:
            return _interreduce(ctx, field, gb, max_len)
    raise DimensionBoundExceeded("Groebner completion did not stabilize")


def _interreduce(ctx, field, gb, max_len):
    changed = True
    gb = list(gb)
    while changed:
        changed = False
        for i in range(len(gb)):
            others = gb[:i] + gb[i + 1 :]
            if not others:
                continue
            nf = normal_form(ctx, field, gb[i], others, max_len)
            if dict(nf) != dict(gb[i]):
                changed = True
                if nf:
                    gb[i] = _monic(nf, field)
                else:
                    gb.pop(i)
                break
    return gb


def irreducible_paths(ctx, gb, max_len=MAX_PATH_LEN, max_dim=MAX_DIM):
    """All paths with no Groebner lead word as a subword, by BFS on length.

    Irreducible words are closed under subwords, so the BFS frontier only
    extends irreducible words; an alive frontier at max_len means the
    quotient cannot be certified finite dimensional.
    """
    lead_words = {g.lead()[1] for g in gb}
    lead_lens = {len(w) for w in lead_words}
    paths = [(v, ()) for v in range(ctx.n_vertices)]
    frontier = list(paths)
    while frontier:
        new = []
        for p in frontier:
            end = ctx.target(p)
            for a in range(len(ctx.src)):
                if ctx.src[a] != end:
                    continue
                w = p[1] + (a,)
                if any(k <= len(w) and w[len(w) - k :] in lead_words for k in lead_lens):
                    continue
                new.append((p[0], w))
        if new and len(new[0][1]) > max_len:
            raise DimensionBoundExceeded(
                f"irreducible paths persist beyond max length {max_len}: "
                "quotient not finite dimensional within bound"
            )
        paths.extend(new)
        if len(paths) > max_dim:
            raise DimensionBoundExceeded(f"dimension bound {max_dim} exceeded")
        frontier = new
    return paths


def validate_relations(ctx, field, relation_terms):
    """Parse [(coeff, [arrow names])] lists into PathPolys and enforce the
    presentation invariants: parallel paths, length >= 2, homogeneous degree."""
    polys = []
    for rel in relation_terms:
        terms = [(c, ctx.path_from_names(names)) for c, names in rel]
        poly = PathPoly.build(field, terms)
        if not poly:
            continue
        sig = {(ctx.source(p), ctx.target(p)) for p in poly}
        if len(sig) != 1:
            raise InhomogeneousRelation("paths in one relation are not parallel")
        if len({ctx.degree(p) for p in poly}) != 1:
            raise InhomogeneousRelation("paths in one relation have different degrees")
        if min(len(p[1]) for p in poly) < 2:
            raise InhomogeneousRelation("relation involves a path of length < 2 (not admissible)")
        polys.append(poly)
    return polys
