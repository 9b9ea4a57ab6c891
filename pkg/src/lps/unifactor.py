"""Univariate factorization over the integers.

Dense coefficient lists (index = degree, integer entries) throughout.
The entry point is zassenhaus(), which expects a primitive squarefree
polynomial and returns its irreducible factors, also primitive, with
positive leading coefficients.  The classical pipeline: factor modulo a
small prime with few modular factors, Hensel-lift the factorization past
the Mignotte coefficient bound, then recombine modular factors by subset
search with exact trial division.
"""

import math
import random
from itertools import combinations

from .errors import InternalError
from .intarith import ext_gcd, is_probable_prime


def _deg(a: list[int]) -> int:
    return len(a) - 1


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod(a: list[int], p: int) -> list[int]:
    return _trim([c % p for c in a])


def _add_mod(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _sub_mod(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c % p
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _mul_mod(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] = (out[i + j] + ca * cb) % p
    return _trim(out)


def _scale_mod(a, c, p):
    c %= p
    return _trim([x * c % p for x in a])


def _divmod_mod(a, b, p):
    """Division with remainder mod p; b need not be monic (its leading
    coefficient is inverted mod p)."""
    a = _mod(a, p)
    b = _mod(b, p)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        k = len(a) - len(b)
        if c:
            q[k] = c
            for i, cb in enumerate(b):
                a[i + k] = (a[i + k] - c * cb) % p
        a.pop()
        _trim(a)
        if not a:
            break
    return _trim(q), a


def _gcd_mod(a, b, p):
    a, b = _mod(a, p), _mod(b, p)
    while b:
        a, b = b, _divmod_mod(a, b, p)[1]
    if a:
        a = _scale_mod(a, pow(a[-1], -1, p), p)
    return a


def _powmod(a, e, f, p):
    """a^e modulo (f, p)."""
    result = [1]
    a = _divmod_mod(a, f, p)[1]
    while e:
        if e & 1:
            result = _divmod_mod(_mul_mod(result, a, p), f, p)[1]
        a = _divmod_mod(_mul_mod(a, a, p), f, p)[1]
        e >>= 1
    return result


def _deriv(a):
    return _trim([i * c for i, c in enumerate(a)][1:])


def _distinct_degree(f, p):
    """Split monic squarefree f mod p into products of irreducibles of a
    common degree.  Returns [(product, degree)]."""
    out = []
    h = [0, 1]
    d = 0
    f = list(f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, f, p)
        g = _gcd_mod(_sub_mod(h, [0, 1], p), f, p)
        if _deg(g) > 0:
            out.append((g, d))
            f = _divmod_mod(f, g, p)[0]
            h = _divmod_mod(h, f, p)[1]
    if _deg(f) > 0:
        out.append((f, _deg(f)))
    return out


def _equal_degree(f, d, p, rng):
    """Cantor-Zassenhaus splitting of f (product of irreducibles of degree
    d, monic, mod odd p) into the irreducibles themselves."""
    n = _deg(f)
    if n == d:
        return [f]
    half = (p**d - 1) // 2
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        _trim(a)
        if _deg(a) < 1:
            continue
        b = _powmod(a, half, f, p)
        g = _gcd_mod(_sub_mod(b, [1], p), f, p)
        if 0 < _deg(g) < n:
            left = _equal_degree(g, d, p, rng)
            right = _equal_degree(_divmod_mod(f, g, p)[0], d, p, rng)
            return left + right


def factor_mod_p(f: list[int], p: int) -> list[list[int]]:
    """Monic irreducible factors of squarefree f mod odd prime p,
    deterministic (splitting randomness is seeded from p and the
    degree)."""
    f = _scale_mod(f, pow(f[-1] % p, -1, p), p)
    out = []
    for g, d in _distinct_degree(f, p):
        rng = random.Random(p * 1000003 + d)
        out.extend(_equal_degree(g, d, p, rng))
    out.sort()
    return out


def _symmetric(a: list[int], m: int) -> list[int]:
    return _trim([c - m if c > m // 2 else c for c in _mod(a, m)])


def _hensel_step(f, g, h, s, t, m):
    """One quadratic lift: from f = g*h, s*g + t*h = 1 (mod m) to the same
    identities mod m^2.  h monic; g's leading coefficient is preserved."""
    m2 = m * m
    e = _sub_mod(f, _mul_mod(g, h, m2), m2)
    q, r = _divmod_mod(_mul_mod(s, e, m2), h, m2)
    g1 = _add_mod(g, _add_mod(_mul_mod(t, e, m2), _mul_mod(q, g, m2), m2), m2)
    h1 = _add_mod(h, r, m2)
    b = _sub_mod(_add_mod(_mul_mod(s, g1, m2), _mul_mod(t, h1, m2), m2), [1], m2)
    c, d = _divmod_mod(_mul_mod(s, b, m2), h1, m2)
    s1 = _sub_mod(s, d, m2)
    t1 = _sub_mod(t, _add_mod(_mul_mod(t, b, m2), _mul_mod(c, g1, m2), m2), m2)
    return g1, h1, s1, t1


def _hensel_rec(f, gs, p, steps):
    """Lift f = (product of gs) from mod p to mod p^(2^steps).  The first
    element of gs carries f's leading coefficient; the rest are monic."""
    if len(gs) == 1:
        return [f]
    mid = len(gs) // 2 if len(gs) > 2 else 1
    g = gs[0]
    for extra in gs[1:mid]:
        g = _mul_mod(g, extra, p)
    h = gs[mid]
    for extra in gs[mid + 1 :]:
        h = _mul_mod(h, extra, p)
    gg, ss, tt = _ext_gcd_mod(g, h, p)
    if _deg(gg) != 0:
        raise InternalError("modular factors not coprime")
    inv = pow(gg[0], -1, p)
    s, t = _scale_mod(ss, inv, p), _scale_mod(tt, inv, p)
    m = p
    for _ in range(steps):
        g, h, s, t = _hensel_step(_mod(f, m * m), g, h, s, t, m)
        m *= m
    left = _hensel_rec(g, gs[:mid], p, steps)
    right = _hensel_rec(h, gs[mid:], p, steps)
    return left + right


def _ext_gcd_mod(a, b, p):
    """Extended Euclid for polynomials mod p: g, s, t with s*a + t*b = g."""
    r0, r1 = _mod(a, p), _mod(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmod_mod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub_mod(s0, _mul_mod(q, s1, p), p)
        t0, t1 = t1, _sub_mod(t0, _mul_mod(q, t1, p), p)
    return r0, s0, t0


def _content(a: list[int]) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _primitive(a: list[int]) -> list[int]:
    g = _content(a)
    if a and a[-1] < 0:
        g = -g
    if g not in (0, 1):
        a = [c // g for c in a]
    return a


def _divides_exact(a: list[int], b: list[int]) -> list[int] | None:
    """Quotient a/b over the integers, or None."""
    if not b:
        return None
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    if not q and a:
        return None
    while a:
        if len(a) < len(b):
            return None
        c, rem = divmod(a[-1], b[-1])
        if rem != 0:
            return None
        k = len(a) - len(b)
        q[k] = c
        for i, cb in enumerate(b):
            a[i + k] -= c * cb
        _trim(a)
    return q


def _mignotte_bound(f: list[int]) -> int:
    n = _deg(f)
    norm = math.isqrt(sum(c * c for c in f)) + 1
    return (math.isqrt(n + 1) + 1) * (1 << n) * norm * abs(f[-1])


def _pick_prime(f: list[int]) -> tuple[int, list[list[int]]]:
    """Choose an odd prime keeping f squarefree with unit leading
    coefficient; among the first six such primes, take the one whose
    modular factorization is shortest."""
    best = None
    valid = 0
    rejected = 0
    p = 1
    while valid < 6:
        p = 3 if p == 1 else _next_prime_after(p)
        if f[-1] % p == 0 or not _squarefree_mod(f, p):
            rejected += 1
            if rejected > 50 and best is None and valid == 0:
                raise InternalError("input to zassenhaus is not squarefree")
            continue
        valid += 1
        fac = factor_mod_p(f, p)
        if len(fac) == 1:
            return p, fac
        if best is None or len(fac) < len(best[1]):
            best = (p, fac)
    return best


def _next_prime_after(p: int) -> int:
    p += 2
    while not is_probable_prime(p):
        p += 2
    return p


def _squarefree_mod(f, p):
    fp = _mod(f, p)
    if _deg(fp) != _deg(f):
        return False
    return _deg(_gcd_mod(fp, _deriv(fp), p)) == 0


def zassenhaus(f: list[int]) -> list[list[int]]:
    """Irreducible factors over Z of a primitive squarefree polynomial
    with positive leading coefficient, degree >= 1."""
    if _deg(f) == 1:
        return [f]
    p, modfacs = _pick_prime(f)
    if len(modfacs) == 1:
        return [f]
    bound = _mignotte_bound(f)
    steps = 0
    m = p
    while m <= 2 * bound:
        m *= m
        steps += 1
    lead_leaf = _scale_mod(modfacs[0], f[-1], p)
    lifted = _hensel_rec(_mod(f, p ** (2**steps)), [lead_leaf] + modfacs[1:], p, steps)
    big = p ** (2**steps)
    # normalize every lifted factor to monic mod p^(2^steps)
    lifted = [_scale_mod(g, pow(g[-1], -1, big), big) for g in lifted]

    found = []
    remaining = list(range(len(lifted)))
    current = list(f)
    size = 1
    while 2 * size <= len(remaining):
        restart = False
        for subset in combinations(remaining, size):
            prod = [current[-1]]
            for i in subset:
                prod = _mul_mod(prod, lifted[i], big)
            cand = _primitive(_symmetric(prod, big))
            # cheap pruning: candidate's constant term must divide
            # lc(current) * current(0)
            if current[0] != 0 and cand and cand[0] != 0:
                if (current[0] * current[-1]) % cand[0] != 0:
                    continue
            q = _divides_exact(current, cand)
            if q is not None:
                found.append(cand)
                current = _primitive(q)
                remaining = [i for i in remaining if i not in subset]
                restart = True
                break
        if not restart:
            size += 1
    if _deg(current) > 0:
        found.append(_primitive(current))
    found.sort(key=lambda g: (len(g), g))
    return found
