"""Independent brute-force oracles used to freeze expected values.

These deliberately avoid the Groebner engine: quotient dimensions are
computed by enumerating all paths of each length and row-reducing the span
of u * r * v inside the free path space.  Only valid for length-homogeneous
relations (all test fixtures are), and for quotients that die within the
length bound.
"""

import numpy as np

from preproj.linalg import rank


def _paths_by_length(vertices, arrows, max_len):
    """arrows: list of (source_index, target_index). Returns list (by length)
    of lists of (source, tuple_of_arrow_indices)."""
    layers = [[(v, ()) for v in range(len(vertices))]]
    for _ in range(max_len):
        new = []
        for (s, word) in layers[-1]:
            end = arrows[word[-1]][1] if word else s
            for ai, (asrc, _) in enumerate(arrows):
                if asrc == end:
                    new.append((s, word + (ai,)))
        layers.append(new)
    return layers


def quotient_dims_by_length(vertices, arrows, relations, p, max_len=12):
    """relations: list of lists of (coeff, tuple_of_arrow_indices), all terms
    of one relation of equal length.  Returns list of quotient dims by path
    length, or raises if the quotient does not die within max_len."""
    layers = _paths_by_length(vertices, arrows, max_len)
    dims = []
    for ell in range(max_len + 1):
        paths = layers[ell]
        idx = {pth: i for i, pth in enumerate(paths)}
        if not paths:
            dims.append(0)
            continue
        rows = []
        for rel in relations:
            rlen = len(rel[0][1])
            if rlen > ell:
                continue
            # u * r * v for all paths u, v with |u| + rlen + |v| = ell
            for ulen in range(ell - rlen + 1):
                vlen = ell - rlen - ulen
                for (us, uw) in layers[ulen]:
                    uend = arrows[uw[-1]][1] if uw else us
                    first = rel[0][1]
                    rsrc = arrows[first[0]][0]
                    if uend != rsrc:
                        continue
                    for (vs, vw) in layers[vlen]:
                        row = np.zeros(len(paths), dtype=np.int64)
                        ok = False
                        for (c, rw) in rel:
                            rend = arrows[rw[-1]][1]
                            if vs != rend:
                                row = None
                                break
                            key = (us, uw + rw + vw)
                            if key in idx:
                                row[idx[key]] = (row[idx[key]] + c) % p
                                ok = True
                        if row is not None and ok:
                            rows.append(row)
        if rows:
            dims.append(len(paths) - rank(np.array(rows), p))
        else:
            dims.append(len(paths))
    if dims[-1] != 0:
        raise AssertionError("oracle: quotient did not die within the length bound")
    while dims and dims[-1] == 0:
        dims.pop()
    return dims


def count_paths(vertices, arrows, max_len=20):
    layers = _paths_by_length(vertices, arrows, max_len)
    assert not layers[-1], "oracle: quiver has long paths (cyclic?)"
    return sum(len(l) for l in layers)
