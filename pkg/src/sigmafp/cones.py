"""Rational convex polyhedral cones in V-representation, and finite unions.

A cone is the set of nonnegative rational combinations of its generator
rays (so it always contains 0).  There is deliberately no facet
(H-representation) machinery: every decision here reduces to exact LP
feasibility over the generators.

Nonzero-intersection questions are normalised per coordinate: a cone meets a
set in a nonzero point iff for some coordinate i and sign s the intersection
contains a point with s*x_i >= 1.  A simplex-slice normalisation would miss
nonzero points of non-pointed cones, where 0 is a convex combination of
generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from . import lp
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    constraint_rows,
    is_zero_vector,
    rank,
    subspaces_intersect_trivially,
    vector,
    zero_vector,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def canonical_ray(v) -> Vector:
    """The unique positive rescaling of v with coprime integer coordinates.

    Only positive scalings are applied, so a ray and its negative stay
    distinct.  Zero vectors are rejected (rays are nonzero by definition).
    """
    w = vector(v)
    if is_zero_vector(w):
        raise ValueError("zero vector is not a ray")
    denom = lcm(*(a.denominator for a in w))
    ints = [int(a * denom) for a in w]
    g = gcd(*ints)
    return tuple(Fraction(a, g) for a in ints)


@dataclass(frozen=True)
class ConvexCone:
    """Cone of all nonnegative combinations of the stored generator rays.

    Generators are canonical, deduplicated, and sorted, so equal cones given
    by rescaled or reordered generators compare equal.  An empty generator
    tuple denotes the zero cone {0}.
    """

    ambient_dim: int
    generators: tuple[Vector, ...]


def cone(generators: Iterable, ambient_dim: int | None = None) -> ConvexCone:
    rays = [canonical_ray(g) for g in generators]
    if rays:
        n = len(rays[0])
        if any(len(r) != n for r in rays):
            raise ValueError("generators of mixed dimension")
        if ambient_dim is not None and ambient_dim != n:
            raise ValueError("ambient dimension mismatch")
        ambient_dim = n
    elif ambient_dim is None:
        raise ValueError("ambient dimension required for the zero cone")
    return ConvexCone(ambient_dim, tuple(sorted(set(rays))))


@dataclass(frozen=True)
class ConeUnion:
    """Finite union of convex cones; no pieces means the set {0}."""

    ambient_dim: int
    pieces: tuple[ConvexCone, ...]


def cone_union(pieces: Sequence[ConvexCone], ambient_dim: int | None = None) -> ConeUnion:
    kept = tuple(p for p in pieces if p.generators)
    if kept:
        if ambient_dim is None:
            ambient_dim = kept[0].ambient_dim
        if any(p.ambient_dim != ambient_dim for p in kept):
            raise ValueError("pieces of mixed ambient dimension")
    elif ambient_dim is None:
        raise ValueError("ambient dimension required for an empty union")
    return ConeUnion(ambient_dim, kept)


@dataclass(frozen=True)
class IntersectionWitness:
    """A nonzero ray proving an intersection is nontrivial.

    ray == generators(piece) . coefficients exactly, with coefficients >= 0;
    the ray is stored in canonical form.
    """

    ray: Vector
    piece_index: int
    coefficients: Vector


def _generator_matrix(c: ConvexCone) -> Matrix:
    # Columns are generators: (G lam)_i = sum_j lam_j g_j[i].
    return Matrix.from_rows(
        [[g[i] for g in c.generators] for i in range(c.ambient_dim)],
        cols=len(c.generators),
    )


@lru_cache(maxsize=None)
def _cone_span(c: ConvexCone) -> Subspace:
    return Subspace.span(list(c.generators), ambient_dim=c.ambient_dim)


def cone_contains(c: ConvexCone, x) -> bool:
    """Membership test: does some lam >= 0 solve (generators) lam = x?"""
    v = vector(x)
    if len(v) != c.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if is_zero_vector(v):
        return True
    if not c.generators:
        return False
    g = _generator_matrix(c)
    problem = lp.feasibility(
        num_vars=len(c.generators),
        constraints=[lp.constraint(g.row(i), lp.EQ, v[i]) for i in range(c.ambient_dim)],
        nonneg_vars=range(len(c.generators)),
    )
    return lp.solve(problem).status == "feasible"


def cone_dim(c: ConvexCone) -> int:
    if not c.generators:
        return 0
    return rank(Matrix.from_rows(list(c.generators)))


def cone_contains_line(c: ConvexCone) -> bool:
    """True iff the cone is non-pointed: 0 is a convex combination of
    generators with coefficients summing to 1."""
    k = len(c.generators)
    if k == 0:
        return False
    g = _generator_matrix(c)
    constraints = [lp.constraint([ONE] * k, lp.EQ, ONE)]
    constraints += [lp.constraint(g.row(i), lp.EQ, ZERO) for i in range(c.ambient_dim)]
    problem = lp.feasibility(num_vars=k, constraints=constraints, nonneg_vars=range(k))
    return lp.solve(problem).status == "feasible"


def cone_sum(a: ConvexCone, b: ConvexCone) -> ConvexCone:
    """Minkowski sum; since both cones contain 0 this is the union of
    generator sets."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return cone(a.generators + b.generators, ambient_dim=a.ambient_dim)


def cone_neg(c: ConvexCone) -> ConvexCone:
    return cone([tuple(-a for a in g) for g in c.generators], ambient_dim=c.ambient_dim)


def _scaled_witness(
    raw_ray: Vector, coefficients: Sequence[Fraction], piece_index: int
) -> IntersectionWitness:
    ray = canonical_ray(raw_ray)
    nz = next(i for i, a in enumerate(raw_ray) if a != 0)
    factor = ray[nz] / raw_ray[nz]
    return IntersectionWitness(
        ray=ray,
        piece_index=piece_index,
        coefficients=tuple(factor * a for a in coefficients),
    )


def cones_meet_nontrivially(a: ConvexCone, b: ConvexCone) -> Optional[IntersectionWitness]:
    """A nonzero common point of a and b, or None.

    Runs the 2N coordinate-normalised feasibility problems
    {lam, mu >= 0, G_a lam = G_b mu, s (G_a lam)_i >= 1} scanning coordinates
    in increasing order, + before -.  The witness is expressed in a's
    generators (piece_index 0).
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not a.generators or not b.generators:
        return None
    # The cones live inside their linear spans; disjoint spans settle it.
    if subspaces_intersect_trivially(_cone_span(a), _cone_span(b)):
        return None
    n = a.ambient_dim
    ka, kb = len(a.generators), len(b.generators)
    ga, gb = _generator_matrix(a), _generator_matrix(b)
    eq_rows = [
        lp.constraint(ga.row(i) + tuple(-x for x in gb.row(i)), lp.EQ, ZERO) for i in range(n)
    ]
    for i in range(n):
        for s in (ONE, -ONE):
            norm = lp.constraint(
                tuple(s * x for x in ga.row(i)) + zero_vector(kb), lp.GE, ONE
            )
            problem = lp.feasibility(
                num_vars=ka + kb,
                constraints=eq_rows + [norm],
                nonneg_vars=range(ka + kb),
            )
            outcome = lp.solve(problem)
            if outcome.status == "feasible":
                lam = outcome.point[:ka]
                return _scaled_witness(ga.mul_vec(lam), lam, 0)
    return None


def piece_subspace_lps(piece: ConvexCone, w: Subspace) -> list[lp.LinearProgram]:
    """The 2N coordinate-normalised LPs deciding piece-meets-subspace.

    Exposed so the infeasibility <=> valid-Farkas equivalence can be checked
    directly; `union_meets_subspace` answers the same question.
    """
    k = len(piece.generators)
    g = _generator_matrix(piece)
    kg = constraint_rows(w).mul(g)
    eq_rows = [lp.constraint(kg.row(i), lp.EQ, ZERO) for i in range(kg.rows)]
    problems = []
    for i in range(piece.ambient_dim):
        for s in (ONE, -ONE):
            norm = lp.constraint(tuple(s * x for x in g.row(i)), lp.GE, ONE)
            problems.append(
                lp.feasibility(
                    num_vars=k, constraints=eq_rows + [norm], nonneg_vars=range(k)
                )
            )
    return problems


def union_meets_subspace(u: ConeUnion, w: Subspace) -> Optional[IntersectionWitness]:
    """First nonzero point of (union pieces) intersected with the subspace w.

    Membership in w is encoded through its kernel equations K x = 0.  The scan
    order (piece index, then coordinate, then + before -) fixes the witness
    deterministically.
    """
    if u.ambient_dim != w.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    for piece_index, piece in enumerate(u.pieces):
        if not piece.generators:
            continue
        if subspaces_intersect_trivially(_cone_span(piece), w):
            continue
        ka = len(piece.generators)
        g = _generator_matrix(piece)
        for problem in piece_subspace_lps(piece, w):
            outcome = lp.solve(problem)
            if outcome.status == "feasible":
                lam = outcome.point[:ka]
                return _scaled_witness(g.mul_vec(lam), lam, piece_index)
    return None


def union_is_tame(u: ConeUnion) -> bool:
    """No antipodal pair: x and -x nonzero in the union never both occur.

    Checks every pair of pieces (a, b) for a nonzero point of a cap -b; the
    a == b case catches single pieces containing a line.  Ordered pairs are
    redundant since x in a cap -b iff -x in b cap -a.
    """
    for i, a in enumerate(u.pieces):
        for b in u.pieces[i:]:
            if cones_meet_nontrivially(a, cone_neg(b)) is not None:
                return False
    return True


def union_dim(u: ConeUnion) -> int:
    return max((cone_dim(p) for p in u.pieces), default=0)


def union_neg(u: ConeUnion) -> ConeUnion:
    return ConeUnion(u.ambient_dim, tuple(cone_neg(p) for p in u.pieces))
