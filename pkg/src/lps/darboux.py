"""Darboux structure of solved inverse integrating factors.

A polynomial inverse integrating factor of a rational first-order
equation generically has the shape V = B^2 prod p_j with Darboux
polynomials p_j, and the equation then carries the elementary first
integral I = exp(A/B) prod p_j^(n_j).  This module recovers A and the
exponents through a joint linear solve, checks the result against the
exact logarithmic-derivative identity, and turns the integral back into
the coprime polynomial pair (Pol_x, Pol_y) with M/N = -Pol_x/Pol_y.

Second-order multipliers do not lead to a quadrature here; they are
decomposed into their verified Darboux factors instead.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from math import gcd, lcm

from .errors import DomainError, InternalError
from .factor import DarbouxFactor, darboux_check, factor_multivariate
from .linalg import AffineSolutionSet, RatMatrix, nullspace, solve_affine
from .poly import (
    MPoly,
    RatFunc,
    candidate_monomials,
    grlex_key,
    mpoly_gcd,
    squarefree_decompose,
)
from .solver import InverseIntegratingFactor, JacobiMultiplier, VectorField


@dataclass(frozen=True)
class CofactorRelation:
    """Exponent solutions of sum(n_i q_i) = target for known cofactors.

    Every vector in `solutions` (the particular one and any kernel
    shift) satisfies the relation exactly.
    """

    cofactors: tuple
    target: MPoly
    solutions: AffineSolutionSet

    def canonical_exponents(self) -> tuple:
        """Representative solution: fewest nonzero exponents, ties broken
        by the smallest common denominator, then componentwise.  Kernel
        directions are explored over small integer multiples, which
        covers the low-dimensional kernels these relations produce."""
        part = tuple(Fraction(c) for c in self.solutions.particular)
        basis = self.solutions.nullspace_basis
        dim = len(basis)
        if dim == 0 or dim > 3:
            return part
        best = None
        for combo in cartesian(range(-3, 4), repeat=dim):
            vec = list(part)
            for c, direction in zip(combo, basis):
                if c:
                    vec = [v + c * d for v, d in zip(vec, direction)]
            key = (
                sum(1 for v in vec if v),
                lcm(*(v.denominator for v in vec)),
                tuple(vec),
            )
            if best is None or key < best:
                best = key
        return best[2]


@dataclass(frozen=True)
class DarbouxFirstIntegral:
    """I = exp(a/b) * prod(p ** n for p, n in factors).

    gcd(a, b) is constant, b is nonzero, and every p is a non-constant
    normalized irreducible polynomial with an exact rational exponent.
    """

    a: MPoly
    b: MPoly
    factors: tuple

    def to_json_dict(self) -> dict:
        return {
            "A": self.a.to_text(),
            "B": self.b.to_text(),
            "factors": [
                [p.to_text(), int(n) if n.denominator == 1 else str(n)]
                for p, n in self.factors
            ],
        }


def _common_ring(polys: list) -> tuple:
    acc = polys[0]
    for p in polys[1:]:
        acc, _ = acc._unify(p)
    return acc.ring


def solve_cofactor_relation(cofactors: list, target: MPoly) -> CofactorRelation | None:
    """Solve sum(n_i q_i) = target linearly over the exponents n_i.

    Returns the full affine solution set, or None when no exponent
    assignment exists.  Callers hunting an integrating factor of the
    plain product form prod p_i^(n_i) pass target = -div(X).
    """
    cofs = [MPoly._coerce(q) for q in cofactors]
    target = MPoly._coerce(target)
    ring = _common_ring(cofs + [target])
    cofs = [q.extend_ring(ring) for q in cofs]
    target = target.extend_ring(ring)

    monomials = set(target.terms)
    for q in cofs:
        monomials.update(q.terms)
    rows = sorted(monomials, key=grlex_key)
    index = {m: i for i, m in enumerate(rows)}
    entries = {}
    for j, q in enumerate(cofs):
        for m, c in q.terms.items():
            entries[(index[m], j)] = c
    rhs = [Fraction(0)] * len(rows)
    for m, c in target.terms.items():
        rhs[index[m]] = c
    sols = solve_affine(RatMatrix(len(rows), len(cofs), entries), rhs)
    if sols is None:
        return None

    if __debug__:
        acc = MPoly.zero(ring)
        for nj, q in zip(sols.particular, cofs):
            acc = acc + q * nj
        assert acc == target
        for vec in sols.nullspace_basis:
            acc = MPoly.zero(ring)
            for nj, q in zip(vec, cofs):
                acc = acc + q * nj
            assert acc.is_zero()
    return CofactorRelation(tuple(cofs), target, sols)


def _image(field: VectorField, p: MPoly) -> RatFunc:
    out = field.apply(p.extend_ring(field.ring))
    return out if isinstance(out, RatFunc) else RatFunc(out)


def verify_first_integral(field: VectorField, integral: DarbouxFirstIntegral) -> bool:
    """Exact truth of X(a/b) + sum n_j X(p_j)/p_j = 0 as a rational
    function; never probabilistic.  Works for either order."""
    a = integral.a.extend_ring(field.ring)
    b = integral.b.extend_ring(field.ring)
    total = (_image(field, a) * b - _image(field, b) * a) / RatFunc(b * b)
    for p, nj in integral.factors:
        p = p.extend_ring(field.ring)
        total = total + _image(field, p) * RatFunc(MPoly.constant(nj), p)
    return total.is_zero()


def _seed_structure(field: VectorField, v: InverseIntegratingFactor):
    """Split v into the B part and the candidate Darboux factor list.

    Repeated square-free parts of the numerator contribute half their
    multiplicity to B; odd parts contribute one copy to the factor list.
    Denominator factors and k-th-root numerator factors also join the
    list, their exponents left entirely to the solve.
    """
    ring = field.ring
    v_num = v.v_num.extend_ring(ring)
    v_den = v.v_den.extend_ring(ring)
    b = MPoly.constant(1, ring)
    odd = MPoly.constant(1, ring)
    if v.k == 1:
        for part, mult in squarefree_decompose(v_num).parts:
            if mult // 2:
                b = b * part ** (mult // 2)
            if mult % 2:
                odd = odd * part
    else:
        odd = v_num
    factors = [f for f, _ in factor_multivariate(odd).factors] if not odd.is_constant() else []
    if not v_den.is_constant():
        for f, _ in factor_multivariate(v_den).factors:
            if f not in factors:
                factors.append(f)
    return b, factors


def _joint_solve(field: VectorField, b: MPoly, cofactors: list, d_a: int):
    """Kernel of X(A) b - A X(b) + b^2 sum(n_j q_j) = 0 over the
    coefficients of A (deg A <= d_a) and the exponents n_j; returns the
    first solution that is not a multiple of the trivial (A = b, n = 0)."""
    ring = field.ring
    monos = candidate_monomials(ring, d_a)
    xb = field.apply(b)
    b2 = b * b
    columns = []
    for m in monos:
        ma = MPoly(ring, {m: Fraction(1)})
        columns.append(field.apply(ma) * b - ma * xb)
    for q in cofactors:
        columns.append(b2 * q)

    row_set = set()
    for p in columns:
        row_set.update(p.terms)
    rows = sorted(row_set, key=grlex_key)
    index = {m: i for i, m in enumerate(rows)}
    entries = {}
    for j, p in enumerate(columns):
        for m, c in p.terms.items():
            entries[(index[m], j)] = c
    basis = nullspace(RatMatrix(len(rows), len(columns), entries))

    trivial = [Fraction(0)] * len(columns)
    for i, m in enumerate(monos):
        if m in b.terms:
            trivial[i] = b.terms[m]
    i0 = next(i for i, c in enumerate(trivial) if c)

    n_off = len(monos)
    chosen = None
    for vec in basis:
        if all(vec[i] * trivial[i0] == trivial[i] * vec[i0] for i in range(len(vec))):
            continue
        if chosen is None:
            chosen = vec
        if any(vec[n_off + j] != 0 for j in range(len(cofactors))):
            chosen = vec
            break
    if chosen is None:
        return None
    a = MPoly(ring, {m: chosen[i] for i, m in enumerate(monos) if chosen[i]})
    return a, [Fraction(chosen[n_off + j]) for j in range(len(cofactors))]


def reconstruct_first_integral(
    field: VectorField, v: InverseIntegratingFactor
) -> DarbouxFirstIntegral | None:
    """Recover I = exp(A/B) prod p_j^(n_j) from a verified inverse
    integrating factor of a first-order field.

    Returns None when some candidate factor is not Darboux or the joint
    system only has the trivial solution (A proportional to B with all
    exponents zero); the caller still holds the verified v.  The degree
    bound for A starts at deg B + max(deg M, deg N) and is raised once
    by max(deg M, deg N) before giving up.
    """
    if field.order != 1:
        raise DomainError("first-integral reconstruction needs a first-order field")
    b, candidates = _seed_structure(field, v)
    checked = []
    for p in candidates:
        fac = darboux_check(field, p)
        if fac is None:
            return None
        checked.append(fac)
    cofactors = [fac.q for fac in checked]

    spread = max(1, field.m.total_degree(), field.n.total_degree())
    d_first = max(1, b.total_degree() + spread)
    solution = None
    for d_a in (d_first, d_first + spread):
        solution = _joint_solve(field, b, cofactors, d_a)
        if solution is not None:
            break
    if solution is None:
        return None
    a, exponents = solution

    nonzero = [e for e in exponents if e]
    if nonzero:
        scale = Fraction(lcm(*(e.denominator for e in nonzero)))
        scale /= gcd(*(int(e * scale) for e in nonzero))
        if nonzero[0] * scale < 0:
            scale = -scale
        a = a * scale
        exponents = [e * scale for e in exponents]
    elif not a.is_zero():
        a = a.normalized()
    factors = tuple((fac.p, e) for fac, e in zip(checked, exponents) if e)

    g = mpoly_gcd(a, b)
    if g.total_degree() > 0:
        a = a.exact_divide(g)
        b = b.exact_divide(g)

    integral = DarbouxFirstIntegral(a=a, b=b, factors=factors)
    if not verify_first_integral(field, integral):
        raise InternalError("reconstructed first integral failed verification")
    return integral


def compute_pol_pair(integral: DarbouxFirstIntegral) -> tuple:
    """The polynomial pair (Pol_x, Pol_y) obtained by clearing the
    exponents of I to integers and multiplying dI/dx and dI/dy by
    B^2 prod p_j / I; the third element flags gcd(Pol_x, Pol_y) constant."""
    ps = [p for p, _ in integral.factors]
    scale = lcm(*(n.denominator for _, n in integral.factors)) if integral.factors else 1
    a = integral.a * scale
    b = integral.b
    ns = [n * scale for _, n in integral.factors]

    pair = []
    for var in ("x", "y"):
        lead = a.derivative(var) * b - b.derivative(var) * a
        for p in ps:
            lead = lead * p
        acc = MPoly.zero(b.ring)
        for k, p in enumerate(ps):
            term = p.derivative(var) * ns[k]
            for l, other in enumerate(ps):
                if l != k:
                    term = term * other
            acc = acc + term
        pair.append(lead + b * b * acc)
    g = mpoly_gcd(pair[0], pair[1])
    coprime = not g.is_zero() and g.total_degree() == 0
    return pair[0], pair[1], coprime


class DarbouxFactorList(list):
    """Verified Darboux factors of a Jacobi multiplier.  Factors that
    fail the cofactor division land in `failed` as (p, multiplicity)
    pairs so callers can warn about the degenerate case."""

    def __init__(self, items=(), failed=()):
        super().__init__(items)
        self.failed = list(failed)


def lps2_postprocess(
    field: VectorField, multiplier: JacobiMultiplier, factorization=None
) -> DarbouxFactorList:
    """Factor a polynomial Jacobi multiplier and verify every irreducible
    factor as a Darboux polynomial of the cleared second-order field.

    Pass a precomputed Factorization of multiplier.p_j to skip the
    (possibly expensive) refactoring."""
    if field.order != 2:
        raise DomainError("multiplier postprocessing needs a second-order field")
    p = multiplier.p_j.extend_ring(field.ring)
    if p.is_constant():
        return DarbouxFactorList()
    if factorization is None:
        factorization = factor_multivariate(p)
    good: list[DarbouxFactor] = []
    bad = []
    for f, mult in factorization.factors:
        fac = darboux_check(field, f.extend_ring(field.ring), mult)
        if fac is None:
            bad.append((f, mult))
        else:
            good.append(fac)
    return DarbouxFactorList(good, bad)
