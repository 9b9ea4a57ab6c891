"""Exact sparse multivariate polynomial arithmetic over the rationals.

Polynomials live in an ordered subring of Q[x, y, z, w].  Terms are stored
as a dict mapping exponent tuples to nonzero Fraction coefficients; the
monomial order everywhere is graded lexicographic with x < y < z < w.
Binary operations transparently unify operands into the union ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

Rat = Fraction

VARS = ("x", "y", "z", "w")
_VAR_POS = {v: i for i, v in enumerate(VARS)}


def grlex_key(exponents: tuple[int, ...]):
    """Sort key realizing graded lex order with x < y < z < w ascending."""
    return (sum(exponents), tuple(reversed(exponents)))


def _rat_gcd(a: Rat, b: Rat) -> Rat:
    """gcd of two rationals: gcd of numerators over lcm of denominators."""
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = math.gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(num, den)


def _merge_rings(r1: tuple[str, ...], r2: tuple[str, ...]) -> tuple[str, ...]:
    if r1 == r2:
        return r1
    return tuple(v for v in VARS if v in r1 or v in r2)


class MPoly:
    """Immutable sparse polynomial with Fraction coefficients.

    The raw constructor trusts its arguments; use from_dict / constant /
    variable when the term dict has not been cleaned of zeros.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: tuple[str, ...], terms: dict):
        self.ring = ring
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_dict(cls, ring: tuple[str, ...], terms: dict) -> "MPoly":
        clean = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = c
        return cls(tuple(ring), clean)

    @classmethod
    def constant(cls, value, ring: tuple[str, ...] = ()) -> "MPoly":
        value = Fraction(value)
        if not value:
            return cls(tuple(ring), {})
        return cls(tuple(ring), {(0,) * len(ring): value})

    @classmethod
    def zero(cls, ring: tuple[str, ...] = ()) -> "MPoly":
        return cls(tuple(ring), {})

    @classmethod
    def variable(cls, name: str) -> "MPoly":
        if name not in _VAR_POS:
            raise DomainError(f"unknown variable {name!r}")
        return cls((name,), {(1,): Fraction(1)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Rat:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, var: str) -> int:
        if var not in self.ring:
            return 0 if self.terms else -1
        i = self.ring.index(var)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def vars_used(self) -> tuple[str, ...]:
        """Variables with a nonzero exponent somewhere in the support."""
        used = [False] * len(self.ring)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.ring, used) if u)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Rat]]:
        """Terms in ascending grlex order."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def leading_term(self) -> tuple[tuple[int, ...], Rat]:
        """Grlex-greatest (monomial, coefficient) pair."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self.terms, key=grlex_key)
        return mono, self.terms[mono]

    def num_terms(self) -> int:
        return len(self.terms)

    # -- ring management ---------------------------------------------------

    def extend_ring(self, ring: tuple[str, ...]) -> "MPoly":
        """Reinterpret in a larger (or reordered superset) ring."""
        if ring == self.ring:
            return self
        pos = []
        for v in self.ring:
            if v not in ring:
                raise ValueError(f"target ring drops variable {v}")
            pos.append(ring.index(v))
        n = len(ring)
        terms = {}
        for m, c in self.terms.items():
            mm = [0] * n
            for p, e in zip(pos, m):
                mm[p] = e
            terms[tuple(mm)] = c
        return MPoly(tuple(ring), terms)

    def project_ring(self) -> "MPoly":
        """Shrink the ring to the variables actually used."""
        used = self.vars_used()
        if used == self.ring:
            return self
        keep = [self.ring.index(v) for v in used]
        terms = {}
        for m, c in self.terms.items():
            terms[tuple(m[i] for i in keep)] = c
        return MPoly(used, terms)

    def _unify(self, other: "MPoly") -> tuple["MPoly", "MPoly"]:
        if self.ring == other.ring:
            return self, other
        ring = _merge_rings(self.ring, other.ring)
        return self.extend_ring(ring), other.extend_ring(ring)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "MPoly | None":
        if isinstance(value, MPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return MPoly.constant(value)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unify(other)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return MPoly(a.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MPoly(self.ring, {})
            return MPoly(self.ring, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._unify(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: dict = {}
        for mb, cb in b.terms.items():
            for ma, ca in a.terms.items():
                m = tuple(i + j for i, j in zip(ma, mb))
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MPoly(a.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MPoly.constant(1, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __truediv__(self, other):
        """Division by a nonzero scalar only."""
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("scalar division by zero")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def shift_scale(self, shift: tuple[int, ...], coeff: Rat) -> "MPoly":
        """self * coeff * monomial(shift); shift must match the ring arity."""
        if not coeff:
            return MPoly(self.ring, {})
        return MPoly(
            self.ring,
            {tuple(i + j for i, j in zip(m, shift)): c * coeff for m, c in self.terms.items()},
        )

    # -- calculus and evaluation -------------------------------------------

    def derivative(self, var: str) -> "MPoly":
        if var not in self.ring:
            return MPoly(self.ring, {})
        i = self.ring.index(var)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1 :]
                out[mm] = out.get(mm, 0) + c * e
        return MPoly(self.ring, {m: c for m, c in out.items() if c})

    def substitute(self, bindings: dict) -> "MPoly":
        """Substitute polynomials or rationals for variables.  Unbound
        variables pass through unchanged."""
        subs = {}
        for v, val in bindings.items():
            if v in self.ring:
                p = self._coerce(val)
                if p is None:
                    raise TypeError(f"cannot substitute {type(val)} for {v}")
                subs[v] = p
        if not subs:
            return self
        caches: dict[str, list[MPoly]] = {v: [MPoly.constant(1)] for v in subs}
        result = MPoly.zero()
        for m, c in self.sorted_terms():
            factor = MPoly.constant(c)
            residual = {}
            for i, e in enumerate(m):
                if not e:
                    continue
                v = self.ring[i]
                if v in subs:
                    cache = caches[v]
                    while len(cache) <= e:
                        cache.append(cache[-1] * subs[v])
                    factor = factor * cache[e]
                else:
                    residual[v] = e
            if residual:
                ring = tuple(v for v in VARS if v in residual)
                mono = tuple(residual.get(v, 0) for v in ring)
                factor = factor * MPoly(ring, {mono: Fraction(1)})
            result = result + factor
        return result

    def eval_at(self, point: dict) -> Rat:
        """Evaluate at a rational point binding every used variable."""
        total = Fraction(0)
        vals = [Fraction(point[v]) if v in point else None for v in self.ring]
        pows: list[dict[int, Fraction]] = [dict() for _ in self.ring]
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(m):
                if not e:
                    continue
                if vals[i] is None:
                    raise ValueError(f"no value for {self.ring[i]}")
                cache = pows[i]
                if e not in cache:
                    cache[e] = vals[i] ** e
                term *= cache[e]
            total += term
        return total

    # -- division and content ----------------------------------------------

    def exact_divide(self, divisor: "MPoly") -> "MPoly | None":
        """Return q with self == q * divisor, or None when no such
        polynomial exists.  Raises ZeroDivisionError for divisor == 0."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return MPoly(self.ring, {})
        a, b = self._unify(divisor)
        if b.is_constant():
            return a * (Fraction(1) / b.constant_value())
        lm_b, lc_b = b.leading_term()
        rem = dict(a.terms)
        quot: dict = {}
        # Grlex leading-term division: if the division is exact, every
        # intermediate leading term must be divisible by lt(b).
        while rem:
            mono = max(rem, key=grlex_key)
            shift = tuple(i - j for i, j in zip(mono, lm_b))
            if any(s < 0 for s in shift):
                return None
            qc = rem[mono] / lc_b
            quot[shift] = qc
            for mb, cb in b.terms.items():
                m = tuple(i + j for i, j in zip(mb, shift))
                s = rem.get(m, 0) - cb * qc
                if s:
                    rem[m] = s
                else:
                    rem.pop(m, None)
        return MPoly(a.ring, quot)

    def divides(self, other: "MPoly") -> bool:
        return other.exact_divide(self) is not None

    def rat_content(self) -> Rat:
        """Positive rational c with self/c integer-primitive (0 for 0)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def normalized_with_unit(self) -> tuple["MPoly", Rat]:
        """Split self = unit * canonical where canonical is integer-primitive
        with positive leading (grlex-greatest) coefficient."""
        if not self.terms:
            return self, Fraction(1)
        unit = self.rat_content()
        _, lc = self.leading_term()
        if lc < 0:
            unit = -unit
        inv = Fraction(1) / unit
        return MPoly(self.ring, {m: c * inv for m, c in self.terms.items()}), unit

    def normalized(self) -> "MPoly":
        return self.normalized_with_unit()[0]

    # -- canonical text ----------------------------------------------------

    def to_text(self) -> str:
        """Canonical rendering: ascending grlex, explicit * and ^."""
        if not self.terms:
            return "0"
        chunks = []
        for mono, coeff in self.sorted_terms():
            parts = []
            for v, e in zip(self.ring, mono):
                if e == 1:
                    parts.append(v)
                elif e > 1:
                    parts.append(f"{v}^{e}")
            mag = abs(coeff)
            if not parts:
                body = str(mag)
            elif mag == 1:
                body = "*".join(parts)
            else:
                body = str(mag) + "*" + "*".join(parts)
            chunks.append(("-" if coeff < 0 else "+", body))
        sign, body = chunks[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in chunks[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"MPoly({self.to_text()!r})"

    # -- equality ----------------------------------------------------------

    def _signature(self):
        p = self.project_ring()
        return (p.ring, tuple(sorted(p.terms.items(), key=lambda kv: grlex_key(kv[0]))))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        return hash(self._signature())


def candidate_monomials(ring: tuple[str, ...], degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree <= degree, ascending grlex."""
    if degree < 0:
        return []
    n = len(ring)
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, i: int):
        if i == n:
            out.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            prefix.append(e)
            rec(prefix, remaining - e, i + 1)
            prefix.pop()

    rec([], degree, 0)
    out.sort(key=grlex_key)
    return out


# ---------------------------------------------------------------------------
# GCD via content/primitive-part recursion with a subresultant PRS core.
# ---------------------------------------------------------------------------


def _as_univar(p: MPoly, var: str) -> list[MPoly]:
    """Dense coefficient list of p viewed as univariate in var; coefficients
    are polynomials over the remaining ring variables."""
    i = p.ring.index(var)
    rest = p.ring[:i] + p.ring[i + 1 :]
    deg = p.degree_in(var)
    coeffs: list[dict] = [dict() for _ in range(deg + 1)]
    for m, c in p.terms.items():
        coeffs[m[i]][m[:i] + m[i + 1 :]] = c
    return [MPoly(rest, d) for d in coeffs]


def _from_univar(coeffs: list[MPoly], var: str) -> MPoly:
    out = MPoly.zero((var,))
    for e, c in enumerate(coeffs):
        if c.is_zero():
            continue
        ring = _merge_rings(c.ring, (var,))
        i = ring.index(var)
        lifted = c.extend_ring(ring)
        shift = tuple(1 if j == i else 0 for j in range(len(ring)))
        out = out + MPoly(ring, {tuple(a + b * e for a, b in zip(m, shift)): v for m, v in lifted.terms.items()})
    return out


def _trim(coeffs: list[MPoly]) -> list[MPoly]:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _pseudo_rem(A: list[MPoly], B: list[MPoly]) -> list[MPoly]:
    """prem(A, B): remainder of lc(B)^(degA-degB+1) * A under division by B.
    Dense lists indexed by exponent, B nonzero, degA >= degB."""
    dA, dB = len(A) - 1, len(B) - 1
    lb = B[dB]
    R = list(A)
    e = dA - dB + 1
    while True:
        R = _trim(R)
        dR = len(R) - 1
        if dR < dB:
            break
        top = R[dR]
        R = [c * lb for c in R]
        for i, bc in enumerate(B):
            R[i + dR - dB] = R[i + dR - dB] - top * bc
        e -= 1
    if e > 0:
        scale = lb**e if e > 1 else lb
        R = [c * scale for c in R]
    return _trim(R)


def _exact_div_list(coeffs: list[MPoly], d: MPoly) -> list[MPoly]:
    out = []
    for c in coeffs:
        q = c.exact_divide(d)
        if q is None:
            raise ArithmeticError("inexact division in PRS")  # pragma: no cover
        out.append(q)
    return out


def _gcd_list(polys: list[MPoly]) -> MPoly:
    g = MPoly.zero()
    for p in polys:
        g = _gcd_rec(g, p)
        if g.is_constant() and not g.is_zero() and g.constant_value() == 1:
            break
    return g


def _content_pp(p: MPoly, var: str) -> tuple[MPoly, list[MPoly]]:
    coeffs = _as_univar(p, var)
    cont = _gcd_list([c for c in coeffs if not c.is_zero()])
    return cont, _exact_div_list(coeffs, cont)


def _prs_gcd(A: list[MPoly], B: list[MPoly]) -> list[MPoly]:
    """Subresultant PRS on primitive dense lists, deg A >= deg B >= 1.
    Returns the final remainder (a gcd up to content in the main var)."""
    g = MPoly.constant(1)
    h = MPoly.constant(1)
    while True:
        delta = (len(A) - 1) - (len(B) - 1)
        R = _pseudo_rem(A, B)
        if not R:
            return B
        if len(R) - 1 == 0:
            return [MPoly.constant(1)]
        divisor = g * h**delta
        A, B = B, _exact_div_list(R, divisor)
        g = A[-1]
        if delta == 0:
            continue
        if delta == 1:
            h = g
        else:
            q = (g**delta).exact_divide(h ** (delta - 1))
            if q is None:
                raise ArithmeticError("subresultant update failed")  # pragma: no cover
            h = q


def _gcd_rec(a: MPoly, b: MPoly) -> MPoly:
    """gcd including rational content; divides both inputs exactly."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.is_constant() or b.is_constant():
        return MPoly.constant(_rat_gcd(a.rat_content(), b.rat_content()))
    shared = [v for v in a.ring if v in set(a.vars_used()) & set(b.vars_used())]
    if not shared:
        return MPoly.constant(_rat_gcd(a.rat_content(), b.rat_content()))
    # short PRS chains matter far more than anything else here, so use
    # the shared variable of smallest degree as the main one
    var = min(shared, key=lambda v: (min(a.degree_in(v), b.degree_in(v)), VARS.index(v)))
    cont_a, pa = _content_pp(a, var)
    cont_b, pb = _content_pp(b, var)
    cont_g = _gcd_rec(cont_a, cont_b)
    if len(pa) < len(pb):
        pa, pb = pb, pa
    if len(pb) - 1 == 0:
        prim = MPoly.constant(1)
    else:
        raw = _prs_gcd(pa, pb)
        if len(raw) == 1:
            prim = MPoly.constant(1)
        else:
            cont_r = _gcd_list([c for c in raw if not c.is_zero()])
            prim = _from_univar(_exact_div_list(raw, cont_r), var)
    out = cont_g * prim
    return out


def mpoly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Normalized gcd: integer-primitive with positive leading coefficient.
    mpoly_gcd(0, 0) == 0."""
    g = _gcd_rec(a, b)
    if g.is_zero():
        return g
    return g.normalized()


def mpoly_lcm(a: MPoly, b: MPoly) -> MPoly:
    if a.is_zero() or b.is_zero():
        return MPoly.zero()
    g = mpoly_gcd(a, b)
    q = (a * b).exact_divide(g)
    return q.normalized()


# ---------------------------------------------------------------------------
# Squarefree decomposition (Yun's algorithm with content recursion).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquareFreeDecomposition:
    """p == content * prod(factor**mult); factors pairwise coprime,
    squarefree, normalized; multiplicities strictly increasing."""

    content: Rat
    parts: tuple[tuple[MPoly, int], ...]

    def expand(self) -> MPoly:
        out = MPoly.constant(self.content)
        for f, m in self.parts:
            out = out * f**m
        return out


def _yun(f: MPoly, var: str) -> list[tuple[MPoly, int]]:
    """Squarefree split of f along var; f nonconstant and primitive in var.
    Returned factors are normalized; rational scale is dropped (the caller
    reconstructs it by division)."""
    df = f.derivative(var)
    g = mpoly_gcd(f, df)
    if g.is_constant():
        return [(f.normalized(), 1)]
    w = f.exact_divide(g)
    y = df.exact_divide(g)
    z = y - w.derivative(var)
    parts = []
    i = 1
    while not w.is_constant():
        h = mpoly_gcd(w, z)
        if not h.is_constant():
            parts.append((h, i))
        w = w.exact_divide(h)
        y = z.exact_divide(h)
        z = y - w.derivative(var)
        i += 1
    return parts


def _sqfree_rec(p: MPoly) -> list[tuple[MPoly, int]]:
    if p.is_constant():
        return []
    used = p.vars_used()
    var = max(used, key=lambda v: (p.degree_in(v), -VARS.index(v)))
    if len(used) == 1:
        return _yun(p, var)
    cont, pp_coeffs = _content_pp(p, var)
    pp = _from_univar(pp_coeffs, var)
    parts = _yun(pp, var)
    inner = _sqfree_rec(cont)
    merged: dict[int, MPoly] = {}
    for f, m in parts + inner:
        merged[m] = merged[m] * f if m in merged else f
    return sorted(((f, m) for m, f in merged.items()), key=lambda t: t[1])


def squarefree_decompose(p: MPoly) -> SquareFreeDecomposition:
    """Yun decomposition p = content * prod(S_i ** m_i); exact by
    construction (the content is recovered by exact division)."""
    if p.is_zero():
        raise ValueError("cannot decompose the zero polynomial")
    if p.is_constant():
        return SquareFreeDecomposition(p.constant_value(), ())
    parts = [(f.normalized(), m) for f, m in _sqfree_rec(p)]
    prod = MPoly.constant(1)
    for f, m in parts:
        prod = prod * f**m
    scale = p.exact_divide(prod)
    if scale is None or not scale.is_constant():
        raise ArithmeticError("squarefree reconstruction failed")  # pragma: no cover
    return SquareFreeDecomposition(scale.constant_value(), tuple(parts))


# ---------------------------------------------------------------------------
# Rational functions.
# ---------------------------------------------------------------------------


class RatFunc:
    """Quotient of two MPoly values, kept in lowest terms with a
    normalized (integer-primitive, positive leading coefficient)
    denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        num = MPoly._coerce(num)
        if den is None:
            den = MPoly.constant(1)
        den = MPoly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = MPoly.zero(num.ring)
            self.den = MPoly.constant(1, num.ring)
            return
        g = _gcd_rec(num, den)
        if not (g.is_constant() and g.constant_value() == 1):
            num = num.exact_divide(g)
            den = den.exact_divide(g)
        den_n, unit = den.normalized_with_unit()
        if unit != 1:
            num = num * (Fraction(1) / unit)
        self.num = num
        self.den = den_n

    @classmethod
    def from_scalar(cls, c) -> "RatFunc":
        return cls(MPoly.constant(c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __add__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other / self

    def derivative(self, var: str) -> "RatFunc":
        return RatFunc(
            self.num.derivative(var) * self.den - self.num * self.den.derivative(var),
            self.den * self.den,
        )

    def __eq__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def to_text(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return self.num.to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"

    def __repr__(self):
        return f"RatFunc({self.to_text()!r})"


def _as_ratfunc(value) -> RatFunc | None:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, MPoly):
        return RatFunc(value)
    if isinstance(value, (int, Fraction)):
        return RatFunc.from_scalar(value)
    return None
