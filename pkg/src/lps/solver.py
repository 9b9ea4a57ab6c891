"""Linear search for inverse integrating factors and Jacobi multipliers.

The classical obstacle is that Darboux polynomials p (with X(p) = q p)
satisfy a bilinear equation in the unknown coefficients of p and q.  The
search here goes around it: extend the field with an auxiliary variable
standing for the inverse integrating factor itself, so that candidates
z^k V_c / pbar are first integrals of the extended field.  The condition
on V_c is linear, and the full product B^2 prod(p_j) (or the Jacobi
multiplier, for second order equations) appears directly in the kernel.

All systems are assembled over the cleared polynomial identity

    order 1:  pbar X(V) - V X(pbar) = k (N_x + M_y) V pbar,
    order 2:  pbar Xc(P) - P Xc(pbar) = k (M_z N - M N_z) P pbar,

with X = N dx + M dy and Xc = N^2 dx + z N^2 dy + N M dz.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalError
from .linalg import RatMatrix, nullspace
from .parser import RationalODE
from .poly import MPoly, RatFunc, candidate_monomials, grlex_key


@dataclass(frozen=True)
class VectorField:
    """Polynomial vector field attached to a rational ODE.

    Order 1: X = N dx + M dy, polynomial divergence N_x + M_y.
    Order 2: the Cartan field dx + z dy + (M/N) dz; its divergence is the
    rational function (M_z N - M N_z) / N^2.
    """

    order: int
    m: MPoly
    n: MPoly

    @property
    def ring(self) -> tuple[str, ...]:
        return ("x", "y") if self.order == 1 else ("x", "y", "z")

    def apply(self, p: MPoly) -> "MPoly | RatFunc":
        """X(p).  Polynomial for order 1, rational for order 2."""
        if self.order == 1:
            return self.n * p.derivative("x") + self.m * p.derivative("y")
        z = MPoly.variable("z")
        num = (
            self.n * p.derivative("x")
            + z * self.n * p.derivative("y")
            + self.m * p.derivative("z")
        )
        return RatFunc(num, self.n)

    def apply_cleared(self, p: MPoly) -> MPoly:
        """The polynomial field appearing in the cleared search identity:
        X itself for order 1, N^2 dx + z N^2 dy + N M dz for order 2."""
        if self.order == 1:
            return self.n * p.derivative("x") + self.m * p.derivative("y")
        z = MPoly.variable("z")
        nn = self.n * self.n
        return nn * p.derivative("x") + z * nn * p.derivative("y") + self.n * self.m * p.derivative("z")

    def divergence_cleared(self) -> MPoly:
        """Divergence of the cleared identity: N_x + M_y for order 1,
        M_z N - M N_z for order 2."""
        if self.order == 1:
            return self.n.derivative("x") + self.m.derivative("y")
        return self.m.derivative("z") * self.n - self.m * self.n.derivative("z")

    def rhs(self) -> RatFunc:
        return RatFunc(self.m, self.n)


def build_field(ode: RationalODE) -> VectorField:
    return VectorField(ode.order, ode.m, ode.n)


@dataclass(frozen=True)
class ExtendedField:
    """X extended by the auxiliary variable standing for the inverse
    integrating factor (z for order 1, w for order 2):
    Xt = X - aux * div(X) * d/d(aux).  Candidates aux^k V_c / pbar are
    first integrals of Xt."""

    base: VectorField
    aux: str
    power: int = 1

    def apply(self, p: MPoly) -> RatFunc:
        base = self.base
        if base.order == 1:
            poly = (
                base.n * p.derivative("x")
                + base.m * p.derivative("y")
                - MPoly.variable(self.aux) * base.divergence_cleared() * p.derivative(self.aux)
            )
            return RatFunc(poly)
        z = MPoly.variable("z")
        num = (
            base.n * base.n * p.derivative("x")
            + z * base.n * base.n * p.derivative("y")
            + base.n * base.m * p.derivative("z")
            - MPoly.variable(self.aux) * base.divergence_cleared() * p.derivative(self.aux)
        )
        return RatFunc(num, base.n * base.n)


def extend_field(field: VectorField, k: int = 1) -> ExtendedField:
    return ExtendedField(field, "z" if field.order == 1 else "w", k)


@dataclass(frozen=True)
class InverseIntegratingFactor:
    """V = (v_num / v_den)^(1/k), found as a kernel element.  v_num is
    normalized; the defining identity (cleared of denominators) is

        v_den X(v_num) - v_num X(v_den) = k div(X) v_num v_den.
    """

    kind: str  # "polynomial" | "rational" | "kth_root"
    v_num: MPoly
    v_den: MPoly
    k: int
    degree_found: int
    nullspace_dim: int
    basis: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "v_num": self.v_num.to_text(),
            "v_den": self.v_den.to_text(),
            "k": self.k,
            "degree_found": self.degree_found,
            "nullspace_dim": self.nullspace_dim,
        }


@dataclass(frozen=True)
class JacobiMultiplier:
    """Polynomial inverse Jacobi multiplier of a rational 2ODE:
    Xc(p_j) = (M_z N - M N_z) p_j for the cleared Cartan field."""

    p_j: MPoly
    degree_found: int
    nullspace_dim: int
    basis: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "p_j": self.p_j.to_text(),
            "degree_found": self.degree_found,
            "nullspace_dim": self.nullspace_dim,
        }


class _SystemBuilder:
    """Assembles the linear systems for one (field, k, denominator) choice,
    caching per-monomial images across degrees."""

    def __init__(self, field: VectorField, k: int, denominator: MPoly):
        self.field = field
        self.ring = field.ring
        den = denominator.extend_ring(field.ring)
        self.den = den
        if field.order == 1:
            gx = den * field.n
            gy = den * field.m
            self.partial_polys = {"x": gx, "y": gy}
        else:
            z = MPoly.variable("z").extend_ring(field.ring)
            nn = field.n * field.n
            self.partial_polys = {
                "x": den * nn,
                "y": den * z * nn,
                "z": den * field.n * field.m,
            }
        self.cterm = field.apply_cleared(den) + k * field.divergence_cleared() * den
        self._images: dict[tuple[int, ...], MPoly] = {}

    def image(self, mono: tuple[int, ...]) -> MPoly:
        """E(m) = pbar Xc(m) - m Xc(pbar) - k div m pbar for one monomial."""
        cached = self._images.get(mono)
        if cached is not None:
            return cached
        total = self.cterm.shift_scale(mono, Fraction(-1))
        for axis, gp in self.partial_polys.items():
            i = self.ring.index(axis)
            e = mono[i]
            if e:
                shifted = mono[:i] + (e - 1,) + mono[i + 1 :]
                total = total + gp.shift_scale(shifted, Fraction(e))
        self._images[mono] = total
        return total

    def build(self, degree: int) -> tuple[RatMatrix, list[tuple[int, ...]]]:
        cols = candidate_monomials(self.ring, degree)
        images = [self.image(m) for m in cols]
        row_monos = set()
        for img in images:
            row_monos.update(img.terms)
        row_order = sorted(row_monos, key=grlex_key)
        row_index = {m: i for i, m in enumerate(row_order)}
        entries = {}
        for j, img in enumerate(images):
            for m, c in img.terms.items():
                entries[(row_index[m], j)] = c
        return RatMatrix(len(row_order), len(cols), entries), cols


def _select_kernel_poly(basis_vectors: list, cols: list, ring: tuple[str, ...]) -> tuple[MPoly, list[MPoly]]:
    """Interpret kernel vectors as polynomials; return (choice, all).
    Canonical choice: minimal total degree, then fewest terms, then
    grlex-least leading monomial."""
    polys = []
    for vec in basis_vectors:
        terms = {cols[j]: v for j, v in enumerate(vec) if v}
        polys.append(MPoly(ring, terms))
    best = min(polys, key=lambda p: (p.total_degree(), p.num_terms(), grlex_key(p.leading_term()[0])))
    return best, polys


def verify_iif_identity(field: VectorField, v_num: MPoly, v_den: MPoly, k: int) -> bool:
    """Exact check of the cleared defining identity."""
    lhs = v_den * field.apply_cleared(v_num) - v_num * field.apply_cleared(v_den)
    rhs = k * field.divergence_cleared() * v_num * v_den
    return (lhs - rhs).is_zero()


def _normalize_denominator(field: VectorField, denominator) -> MPoly:
    if denominator is None:
        return MPoly.constant(1, field.ring)
    if not isinstance(denominator, MPoly):
        raise DomainError("denominator must be a polynomial")
    if denominator.is_zero():
        raise DomainError("denominator must be nonzero")
    for v in denominator.vars_used():
        if v not in field.ring:
            raise DomainError(f"denominator variable {v} is outside the ODE ring")
    return denominator.extend_ring(field.ring).normalized()


def lps_search(
    ode: RationalODE,
    max_degree: int = 20,
    k: int = 1,
    denominator: MPoly | None = None,
    engine: str = "auto",
) -> InverseIntegratingFactor | None:
    """Find a polynomial (or rational / k-th root, per arguments) inverse
    integrating factor by degree-increasing kernel search.  Returns None
    when every degree up to max_degree has an empty kernel."""
    if ode.order != 1:
        raise DomainError("lps_search handles first order equations; use lps2_search")
    if max_degree < 0:
        raise DomainError("max_degree must be nonnegative")
    if k < 1:
        raise DomainError("power k must be a positive integer")
    field = build_field(ode)
    den = _normalize_denominator(field, denominator)
    builder = _SystemBuilder(field, k, den)
    den_trivial = den.is_constant()
    for degree in range(max_degree + 1):
        mat, cols = builder.build(degree)
        basis = nullspace(mat, engine=engine)
        if not basis:
            continue
        choice, polys = _select_kernel_poly(basis, cols, field.ring)
        v_num = choice.normalized()
        if not verify_iif_identity(field, v_num, den, k):
            raise InternalError("kernel element fails the defining identity")
        if k > 1:
            kind = "kth_root"
        elif den_trivial:
            kind = "polynomial"
        else:
            kind = "rational"
        return InverseIntegratingFactor(
            kind=kind,
            v_num=v_num,
            v_den=den,
            k=k,
            degree_found=degree,
            nullspace_dim=len(basis),
            basis=tuple(p.normalized() for p in polys),
        )
    return None


def lps2_search(
    ode: RationalODE,
    max_degree: int = 20,
    engine: str = "auto",
) -> JacobiMultiplier | None:
    """Find a polynomial inverse Jacobi multiplier of a rational 2ODE by
    the same degree-increasing kernel search."""
    if ode.order != 2:
        raise DomainError("lps2_search handles second order equations")
    if max_degree < 0:
        raise DomainError("max_degree must be nonnegative")
    field = build_field(ode)
    builder = _SystemBuilder(field, 1, MPoly.constant(1, field.ring))
    for degree in range(max_degree + 1):
        mat, cols = builder.build(degree)
        basis = nullspace(mat, engine=engine)
        if not basis:
            continue
        choice, polys = _select_kernel_poly(basis, cols, field.ring)
        p_j = choice.normalized()
        if not verify_iif_identity(field, p_j, MPoly.constant(1, field.ring), 1):
            raise InternalError("kernel element fails the defining identity")
        return JacobiMultiplier(
            p_j=p_j,
            degree_found=degree,
            nullspace_dim=len(basis),
            basis=tuple(p.normalized() for p in polys),
        )
    return None


def assemble_lps_system(
    field: VectorField,
    degree: int,
    k: int = 1,
    denominator: MPoly | None = None,
) -> RatMatrix:
    """The raw linear system whose kernel holds degree <= `degree`
    candidates.  Columns follow candidate_monomials order; rows are the
    grlex-sorted support of the identity."""
    den = _normalize_denominator(field, denominator)
    mat, _ = _SystemBuilder(field, k, den).build(degree)
    return mat
