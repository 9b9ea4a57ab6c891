"""Irreducible factorization over the rationals and Darboux-polynomial
extraction.

Univariate polynomials go through rational-root stripping and then the
Zassenhaus routine; multivariate ones are reduced to a single variable by
a Kronecker substitution with per-variable degree weights, factored
there, and reassembled by validated subset recombination.  Both paths
factor the squarefree parts separately, which keeps the Kronecker images
small for the inputs this library produces.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DomainError
from .intarith import divisors
from .poly import MPoly, Rat, grlex_key, mpoly_gcd, squarefree_decompose
from .solver import VectorField
from .unifactor import _divides_exact, zassenhaus

_DIVISOR_GUARD = 10**12


@dataclass(frozen=True)
class Factorization:
    """unit * product(factor^multiplicity) == the factored polynomial,
    exactly; factors are normalized, irreducible over the rationals, and
    pairwise non-associate."""

    unit: Rat
    factors: tuple[tuple[MPoly, int], ...]

    def expand(self) -> MPoly:
        out = MPoly.constant(self.unit)
        for f, m in self.factors:
            out = out * f**m
        return out

    def to_json_dict(self) -> dict:
        return {
            "unit": str(self.unit),
            "factors": [[f.to_text(), m] for f, m in self.factors],
        }


@dataclass(frozen=True)
class DarbouxFactor:
    """Eigenpolynomial of a vector field: X(p) = q * p exactly."""

    p: MPoly
    q: MPoly
    multiplicity: int = 1

    def to_json_dict(self) -> dict:
        return {"p": self.p.to_text(), "q": self.q.to_text(), "mult": self.multiplicity}


def _factor_key(p: MPoly):
    return (p.total_degree(), p.num_terms(), grlex_key(p.leading_term()[0]), p.to_text())


def _dense_int_coeffs(p: MPoly, var: str) -> list[int]:
    """Dense integer coefficient list of a univariate integer polynomial."""
    idx = p.ring.index(var)
    out = [0] * (p.degree_in(var) + 1)
    for expo, c in p.terms.items():
        out[expo[idx]] = int(c)
    return out


def _poly_from_dense(coeffs: list[int], var: str) -> MPoly:
    return MPoly.from_dict((var,), {(i,): Fraction(c) for i, c in enumerate(coeffs) if c})


def _strip_rational_roots(coeffs: list[int]) -> tuple[list[list[int]], list[int]]:
    """Peel linear factors q*v - p off a primitive squarefree polynomial
    by the classical divisor test on the end coefficients.  Purely an
    optimization: skipped when those ends are too big to factor quickly,
    in which case recombination finds the linear factors anyway."""
    found = []
    if len(coeffs) <= 2 or coeffs[0] == 0:
        return found, coeffs
    if abs(coeffs[0]) > _DIVISOR_GUARD or abs(coeffs[-1]) > _DIVISOR_GUARD:
        return found, coeffs
    ps = divisors(coeffs[0], 4000)
    qs = divisors(coeffs[-1], 4000)
    if ps is None or qs is None:
        return found, coeffs
    for p in ps:
        for q in qs:
            for s in (1, -1):
                if len(coeffs) <= 2:
                    return found, coeffs
                # evaluate at s*p/q by Horner
                acc = Fraction(0)
                r = Fraction(s * p, q)
                for c in reversed(coeffs):
                    acc = acc * r + c
                if acc == 0:
                    lin = [-s * p, q]
                    quot = _divides_exact(coeffs, lin)
                    if quot is not None:
                        found.append(lin)
                        coeffs = quot
    return found, coeffs


def _factor_dense(coeffs: list[int], var: str) -> list[MPoly]:
    """Irreducible factors of a primitive squarefree integer polynomial
    with positive leading coefficient."""
    if len(coeffs) <= 1:
        return []
    linear, rest = _strip_rational_roots(coeffs)
    out = [_poly_from_dense(c, var) for c in linear]
    if len(rest) > 1:
        out.extend(_poly_from_dense(c, var) for c in zassenhaus(rest))
    return out


def _strip_monomial(p: MPoly) -> tuple[list[tuple[MPoly, int]], MPoly]:
    mins = None
    for expo in p.terms:
        mins = expo if mins is None else tuple(map(min, mins, expo))
    if mins is None or not any(mins):
        return [], p
    monos = []
    for var, e in zip(p.ring, mins):
        if e:
            monos.append((MPoly.variable(var), e))
    shifted = {
        tuple(a - b for a, b in zip(expo, mins)): c for expo, c in p.terms.items()
    }
    return monos, MPoly.from_dict(p.ring, shifted)


def _kronecker_weights(p: MPoly) -> tuple[tuple[str, ...], list[int]]:
    vs = p.vars_used()
    weights = []
    d = 1
    for v in vs:
        weights.append(d)
        d *= p.degree_in(v) + 1
    return vs, weights


def _kronecker_encode(p: MPoly, vs, weights) -> list[int]:
    out = [0] * (
        1 + sum(w * p.degree_in(v) for v, w in zip(vs, weights))
    )
    pos = [p.ring.index(v) for v in vs]
    for expo, c in p.terms.items():
        out[sum(expo[i] * w for i, w in zip(pos, weights))] = int(c)
    return out


def _kronecker_decode(coeffs: list[int], vs, weights, bounds) -> MPoly | None:
    terms = {}
    for e, c in enumerate(coeffs):
        if c == 0:
            continue
        digits = []
        rem = e
        for w, b in zip(reversed(weights), reversed(bounds)):
            d, rem = divmod(rem, w)
            if d > b:
                return None
            digits.append(d)
        digits.reverse()
        terms[tuple(digits)] = Fraction(c)
    return MPoly.from_dict(vs, terms)


def _factor_squarefree_part(part: MPoly) -> list[MPoly]:
    """Irreducible factors of a primitive squarefree part (normalized,
    more than one variable allowed)."""
    vs = part.vars_used()
    if len(vs) == 0:
        return []
    if len(vs) == 1:
        return _factor_dense(_dense_int_coeffs(part.project_ring(), vs[0]), vs[0])

    part = part.project_ring()
    vs, weights = _kronecker_weights(part)
    bounds = [part.degree_in(v) for v in vs]
    image = _kronecker_encode(part, vs, weights)
    while image and image[-1] == 0:
        image.pop()
    if image[-1] < 0:
        image = [-c for c in image]
    # the image of a squarefree polynomial need not be squarefree
    # (x^2 + y^7 maps to x^2 * (x^19 + 1)), so decompose before splitting
    uni: list[list[int]] = []
    for ipart, imult in squarefree_decompose(_poly_from_dense(image, "x")).parts:
        ic = _dense_int_coeffs(ipart, "x")
        if len(ic) == 1:
            continue
        uni.extend([list(f) for f in zassenhaus(ic)] * imult)

    found = []
    remaining = list(range(len(uni)))
    current = part
    size = 1
    while 2 * size <= len(remaining):
        restart = False
        for subset in combinations(remaining, size):
            prod = [1]
            for i in subset:
                nxt = [0] * (len(prod) + len(uni[i]) - 1)
                for a, ca in enumerate(prod):
                    if ca:
                        for b, cb in enumerate(uni[i]):
                            nxt[a + b] += ca * cb
                prod = nxt
            cand = _kronecker_decode(prod, vs, weights, bounds)
            if cand is None:
                continue
            cand = cand.normalized()
            if cand.is_constant():
                continue
            quot = current.exact_divide(cand)
            if quot is not None:
                found.append(cand)
                current = quot.normalized()
                remaining = [i for i in remaining if i not in subset]
                restart = True
                break
        if not restart:
            size += 1
    if not current.is_constant():
        found.append(current.normalized())
    return found


def _factor_normalized(p: MPoly) -> Factorization:
    unit = p.rat_content()
    prim = p * (Fraction(1) / unit)
    monos, prim = _strip_monomial(prim)
    pieces = list(monos)
    sqf = squarefree_decompose(prim)
    unit = unit * sqf.content
    for part, mult in sqf.parts:
        part, u = part.normalized_with_unit()
        unit = unit * u**mult
        for f in _factor_squarefree_part(part):
            f, fu = f.normalized_with_unit()
            unit = unit * fu**mult
            pieces.append((f, mult))
    pieces.sort(key=lambda fm: _factor_key(fm[0]))
    result = Factorization(unit, tuple(pieces))
    if __debug__:
        ring = p.ring
        assert result.expand().extend_ring(ring) == p, "factorization round-trip"
    return result


def factor_univariate(p: MPoly) -> Factorization:
    """Irreducible factorization over the rationals of a polynomial in at
    most one variable."""
    if p.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    if len(p.vars_used()) > 1:
        raise DomainError("factor_univariate needs a univariate input")
    return _factor_normalized(p)


def factor_multivariate(p: MPoly) -> Factorization:
    """Irreducible factorization over the rationals, any number of
    variables."""
    if p.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    return _factor_normalized(p)


def _darboux_apply(field: VectorField, p: MPoly) -> MPoly:
    """The cleared Darboux operator: N p_x + M p_y for order 1 and
    N p_x + z N p_y + M p_z for order 2."""
    if field.order == 1:
        return field.n * p.derivative("x") + field.m * p.derivative("y")
    z = MPoly.variable("z")
    return (
        field.n * p.derivative("x")
        + z * field.n * p.derivative("y")
        + field.m * p.derivative("z")
    )


def darboux_check(field: VectorField, p: MPoly, multiplicity: int = 1) -> DarbouxFactor | None:
    """Test whether p is an eigenpolynomial of the field and return it
    with its cofactor, or None."""
    if p.is_constant():
        raise DomainError("Darboux test needs a non-constant polynomial")
    image = _darboux_apply(field, p.extend_ring(field.ring))
    if image.is_zero():
        return DarbouxFactor(p, MPoly.zero(field.ring), multiplicity)
    q = image.exact_divide(p.extend_ring(image.ring))
    if q is None:
        return None
    return DarbouxFactor(p, q, multiplicity)


class LinearFactorList(list):
    """Verified degree-1 Darboux polynomials.  When the field admits a
    one-parameter continuum of invariant lines, `family` is True and the
    list holds finitely many representatives."""

    def __init__(self, items=(), family: bool = False):
        super().__init__(items)
        self.family = family


def _coeffs_in(p: MPoly, var: str) -> list[MPoly]:
    """Coefficients of powers of `var`, each projected off `var`."""
    idx = p.ring.index(var)
    buckets: dict[int, dict] = {}
    for expo, c in p.terms.items():
        rest = expo[:idx] + (0,) + expo[idx + 1 :]
        buckets.setdefault(expo[idx], {})[rest] = c
    out = []
    for e in range(max(buckets) + 1 if buckets else 0):
        out.append(MPoly.from_dict(p.ring, buckets.get(e, {})).project_ring())
    return out


def _dense_frac(p: MPoly, var: str) -> list[Fraction]:
    if p.is_zero():
        return []
    q = p.extend_ring((var,)) if var not in p.ring else p
    idx = q.ring.index(var)
    out = [Fraction(0)] * (q.degree_in(var) + 1)
    for expo, c in q.terms.items():
        out[expo[idx]] = c
    return out


def _res_frac(a: list[Fraction], b: list[Fraction]) -> Fraction:
    """Resultant of two univariate polynomials over the rationals."""
    def deg(u):
        return len(u) - 1

    def rem(u, v):
        u = list(u)
        while len(u) >= len(v):
            c = u[-1] / v[-1]
            k = len(u) - len(v)
            for i, cv in enumerate(v):
                u[i + k] -= c * cv
            u.pop()
            while u and u[-1] == 0:
                u.pop()
        return u

    if not a or not b:
        return Fraction(0)
    if deg(a) == 0 and deg(b) == 0:
        return Fraction(1)
    acc = Fraction(1)
    if deg(a) < deg(b):
        if deg(a) % 2 and deg(b) % 2:
            acc = -acc
        a, b = b, a
    while deg(b) > 0:
        r = rem(a, b)
        if not r:
            return Fraction(0)
        acc *= b[-1] ** (deg(a) - deg(r))
        if deg(b) % 2 and deg(a) % 2:
            acc = -acc
        a, b = b, r
    return acc * b[0] ** deg(a)


def _resultant_wrt(f: MPoly, g: MPoly, var: str, keep: str) -> MPoly:
    """Res_var(f, g) as a polynomial in `keep`, by evaluation of `keep`
    at rational points and Lagrange interpolation."""
    dfv, dgv = f.degree_in(var), g.degree_in(var)
    if dfv == 0 and dgv == 0:
        return MPoly.constant(1)
    bound = f.degree_in(keep) * dgv + g.degree_in(keep) * dfv
    fc = _coeffs_in(f.extend_ring((var, keep)), var)
    gc = _coeffs_in(g.extend_ring((var, keep)), var)
    lcf, lcg = fc[-1], gc[-1]
    points: list[tuple[Fraction, Fraction]] = []
    t = 0
    while len(points) < bound + 1:
        for x0 in (Fraction(t), Fraction(-t)) if t else (Fraction(0),):
            if lcf.eval_at({keep: x0}) == 0 or lcg.eval_at({keep: x0}) == 0:
                continue
            av = [c.eval_at({keep: x0}) for c in fc]
            bv = [c.eval_at({keep: x0}) for c in gc]
            while av and av[-1] == 0:
                av.pop()
            while bv and bv[-1] == 0:
                bv.pop()
            points.append((x0, _res_frac(av, bv)))
            if len(points) == bound + 1:
                break
        t += 1
    # Lagrange interpolation on the collected samples
    terms: dict[tuple[int, ...], Fraction] = {}
    result = MPoly.from_dict((keep,), terms)
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        numer = MPoly.constant(1, (keep,))
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            numer = numer * (MPoly.variable(keep) - MPoly.constant(xj, (keep,)))
            denom *= xi - xj
        result = result + numer * (yi / denom)
    return result


def _rational_roots(p: MPoly) -> list[Fraction]:
    """All rational roots of a univariate polynomial."""
    if p.is_constant():
        return []
    roots = []
    monos, stripped = _strip_monomial(p)
    if monos:
        roots.append(Fraction(0))
        p = stripped
        if p.is_constant():
            return roots
    fac = factor_univariate(p)
    for f, _ in fac.factors:
        if f.total_degree() == 1:
            fl = _dense_frac(f.project_ring(), f.vars_used()[0])
            roots.append(-fl[0] / fl[1])
    roots.sort()
    return roots


def _curve_points(g: MPoly, limit: int = 8) -> list[tuple[Fraction, Fraction]]:
    """A few rational points on g(z, w) = 0, by sampling z and solving
    for w (and symmetrically when g ignores w)."""
    g = g.extend_ring(("z", "w"))
    pts = []
    samples = [Fraction(v) for v in (0, 1, -1, 2, -2, 3, -3)] + [
        Fraction(1, 2), Fraction(-1, 2)
    ]
    if g.degree_in("w") == 0:
        for z0 in _rational_roots(_coeffs_in(g, "w")[0]):
            for w0 in samples[:3]:
                pts.append((z0, w0))
        return pts[:limit]
    for z0 in samples:
        section = g.substitute({"z": MPoly.constant(z0, g.ring)}).project_ring()
        if section.is_zero():
            for w0 in samples[:3]:
                pts.append((z0, w0))
        elif not section.is_constant():
            for w0 in _rational_roots(section):
                pts.append((z0, w0))
        if len(pts) >= limit:
            break
    return pts[:limit]


def degree1_dp_search(field: VectorField) -> LinearFactorList:
    """All degree-1 Darboux polynomials of an order-1 field up to
    scaling, via two charts: y - s*x - t (parameters eliminated by
    resultants) and x - c.  A curve of admissible (s, t) is reported as a
    family with representatives."""
    if field.order != 1:
        raise DomainError("degree-1 search is defined for order-1 fields")
    out = []
    family = False

    # chart 1: p = y - s*x - t, with s, t carried by the symbols z, w
    ring = ("x", "y", "z", "w")
    m4 = field.m.extend_ring(ring)
    n4 = field.n.extend_ring(ring)
    w_poly = m4 - MPoly.variable("z").extend_ring(ring) * n4
    x_, z_, w_ = (MPoly.variable(v).extend_ring(ring) for v in ("x", "z", "w"))
    remainder = w_poly.substitute({"y": z_ * x_ + w_})
    system = [
        r.extend_ring(("z", "w"))
        for r in _coeffs_in(remainder, "x")
        if not r.is_zero()
    ]
    candidates: set[tuple[Fraction, Fraction]] = set()
    if system:
        g = system[0]
        for r in system[1:]:
            g = mpoly_gcd(g, r)
        if not g.is_constant():
            family = True
            candidates.update(_curve_points(g))
        reduced = [r.exact_divide(g) for r in system]
        nonconst = [r for r in reduced if not r.is_constant()]
        if len(nonconst) == len(reduced) and len(nonconst) >= 2:
            candidates.update(_isolated_points(nonconst))

    for s0, t0 in candidates:
        p = (
            MPoly.variable("y")
            - MPoly.constant(s0) * MPoly.variable("x")
            - MPoly.constant(t0)
        ).extend_ring(("x", "y"))
        hit = darboux_check(field, p.normalized())
        if hit is not None:
            out.append(hit.p)

    # chart 2: p = x - c; X(p) = N, so N(c, y) must vanish identically
    ncoef = [c for c in _coeffs_in(field.n, "y") if not c.is_zero()]
    g = ncoef[0]
    for c in ncoef[1:]:
        g = mpoly_gcd(g, c)
    if not g.is_constant():
        for c0 in _rational_roots(g.extend_ring(("x",))):
            p = (MPoly.variable("x") - MPoly.constant(c0)).extend_ring(("x", "y"))
            hit = darboux_check(field, p.normalized())
            if hit is not None:
                out.append(hit.p)

    seen = []
    for p in sorted(out, key=_factor_key):
        if p not in seen:
            seen.append(p)
    return LinearFactorList(seen, family)


def _isolated_points(system: list[MPoly]) -> list[tuple[Fraction, Fraction]]:
    """Common rational zeros of a gcd-free bivariate system in (z, w),
    located by resultant elimination and verified by exact evaluation."""
    sys2 = [r.extend_ring(("z", "w")) for r in system]
    pts = []
    for elim, keep in (("w", "z"), ("z", "w")):
        elims = []
        for i in range(len(sys2)):
            for j in range(i + 1, len(sys2)):
                r = _resultant_wrt(sys2[i], sys2[j], elim, keep)
                if not r.is_zero():
                    elims.append(r)
        if not elims:
            continue
        g = elims[0]
        for r in elims[1:]:
            g = mpoly_gcd(g, r)
        if g.is_zero() or g.is_constant():
            continue
        for r0 in _rational_roots(g):
            # substitute the found coordinate, solve the other one
            sections = []
            for s in sys2:
                sec = s.substitute({keep: MPoly.constant(r0, s.ring)}).project_ring()
                sections.append(sec)
            if any(sec.is_constant() and not sec.is_zero() for sec in sections):
                continue
            live = [sec for sec in sections if not sec.is_zero()]
            if not live:
                continue
            g2 = live[0]
            for sec in live[1:]:
                g2 = mpoly_gcd(g2, sec)
            if g2.is_constant():
                continue
            for other in _rational_roots(g2):
                pt = (r0, other) if keep == "z" else (other, r0)
                if all(
                    s.eval_at({"z": pt[0], "w": pt[1]}) == 0 for s in sys2
                ):
                    pts.append(pt)
        if pts:
            break
    return pts
