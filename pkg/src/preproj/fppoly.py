"""Univariate polynomial arithmetic over F_p (dense coefficient lists,
lowest degree first).  Just enough to find coprime splits of minimal
polynomials for idempotent lifting."""

from __future__ import annotations


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a):
    return len(a) - 1


def add(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def sub(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def divmod_poly(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and trim(list(a)):
        if len(a) < len(b):
            break
        c = a[-1] * inv % p
        d = len(a) - len(b)
        if c:
            q[d] = c
            for i in range(len(b)):
                a[d + i] = (a[d + i] - c * b[i]) % p
        a.pop()
        trim(a)
    return trim(q), trim(a)


def gcd(a, b, p):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, divmod_poly(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def powmod(a, e, mod, p):
    result = [1]
    base = divmod_poly(a, mod, p)[1]
    while e:
        if e & 1:
            result = divmod_poly(mul(result, base, p), mod, p)[1]
        base = divmod_poly(mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def derivative(a, p):
    return trim([(i * a[i]) % p for i in range(1, len(a))])


def monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def coprime_split(mu, p, rng=None, tries=8):
    """A nontrivial factorization mu = F * G with gcd(F, G) = 1, or None when
    mu is a prime power (in particular irreducible).

    Strategy: split off the x-power part; otherwise find a proper factor of
    the squarefree part by distinct-degree separation (with a Cantor-
    Zassenhaus attempt inside equal-degree blocks), then saturate it to a
    coprime divisor of mu.
    """
    mu = monic(trim(list(mu)), p)
    d = degree(mu)
    if d <= 1:
        return None
    if mu[0] == 0:
        k = next(i for i, c in enumerate(mu) if c != 0)
        if k == len(mu) - 1:
            return None  # mu = x^d: prime power
        F = [0] * k + [1]
        G = divmod_poly(mu, F, p)[0]
        return F, G
    sf = divmod_poly(mu, gcd(mu, derivative(mu, p), p), p)[0]
    factor = _proper_factor_squarefree(monic(sf, p), p, rng, tries)
    if factor is None:
        return None
    F = _saturate(mu, factor, p)
    if degree(F) <= 0 or degree(F) >= d:
        return None
    G = divmod_poly(mu, F, p)[0]
    if degree(gcd(F, G, p)) != 0:
        return None
    return F, G


def _proper_factor_squarefree(u, p, rng, tries):
    d = degree(u)
    if d <= 1:
        return None
    x = [0, 1]
    w = list(x)
    for deg_block in range(1, d // 2 + 1):
        w = powmod(w, p, u, p)
        g = gcd(sub(w, x, p), u, p)
        if 0 < degree(g) < d:
            return g
        if degree(g) == d:
            # u is a product of >= 2 irreducibles all of degree deg_block
            return _cz_split(u, deg_block, p, rng, tries)
    return None  # u irreducible


def _cz_split(u, deg_block, p, rng, tries):
    import numpy as np

    rng = rng or np.random.default_rng(0)
    d = degree(u)
    e = (p**deg_block - 1) // 2
    for _ in range(tries):
        r = [int(c) for c in rng.integers(0, p, size=d)]
        r = trim(r)
        if degree(r) < 1:
            continue
        g = gcd(sub(powmod(r, e, u, p), [1], p), u, p)
        if 0 < degree(g) < d:
            return g
    return None


def _saturate(mu, f, p):
    """The part of mu supported on the irreducible factors of f."""
    F = gcd(mu, f, p)
    while True:
        G = divmod_poly(mu, F, p)[0]
        h = gcd(F, G, p)
        if degree(h) == 0:
            return F
        F = mul(F, h, p)
        F = gcd(mu, F, p) if degree(F) > degree(mu) else F


def crt_idempotent(F, G, p):
    """q with q = 1 mod F, q = 0 mod G (gcd(F,G) = 1): q = G * (G^{-1} mod F)."""
    # extended euclid for G^{-1} mod F
    r0, r1 = trim(list(F)), divmod_poly(G, F, p)[1]
    s0, s1 = [], [1]
    while r1:
        q, r = divmod_poly(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
    if degree(r0) != 0:
        raise ValueError("not coprime")
    inv_lead = pow(r0[0], p - 2, p)
    ginv = [c * inv_lead % p for c in s0]
    q = mul(G, ginv, p)
    return divmod_poly(q, mul(F, G, p), p)[1]


def evaluate_matrix(poly, mat, p):
    import numpy as np

    n = mat.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    power = np.eye(n, dtype=np.int64)
    for c in poly:
        if c:
            out = (out + c * power) % p
        power = (power @ mat) % p
    return out
