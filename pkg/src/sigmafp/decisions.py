"""Executable decision procedures on Grassmannian points.

The core decision: a virtual subdirect product point is finitely presented
iff Gamma (the pairwise sum of the cone-complement union with itself) meets
its subspace only in 0.  Around that sit constructive companions: a rational
openness certificate for FP points, a rank <= 2 construction of an FP point
for two-factor products, an explicit non-FP point, an open box of non-FP
points when the generic-openness condition fails, and a seeded sampling
experiment over the Grassmannian.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .cones import (
    ConeUnion,
    ConvexCone,
    IntersectionWitness,
    canonical_ray,
    cone,
    cone_contains,
    cone_contains_line,
    cone_dim,
    cone_union,
    cones_meet_nontrivially,
    union_dim,
    union_is_tame,
    union_meets_subspace,
)
from .errors import (
    ConstructionFailed,
    NonPointedPiece,
    NoSuitableFactors,
    NotFinitelyPresented,
    NotVirtualSubdirect,
    TheoremAApplies,
    UnsupportedRank,
)
from .formats import MeasureReport
from .grassmann import (
    Chart,
    SubspacePoint,
    chart,
    chart_to_point,
    is_virtual_subdirect,
    sample_point,
    subspace_point,
)
from . import lp
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    cofactor,
    det,
    inverse,
    linf_norm,
    rank,
    rref,
    submatrix_columns,
    subspaces_intersect_trivially,
    vec_add,
    vec_neg,
    vec_scale,
    vector,
)
from .product import (
    ProductSpace,
    assemble_sigma,
    block_subspace,
    build_gamma,
    embed_factor,
    theorem_a_applicable,
)
from .randstream import CounterStream

ZERO = Fraction(0)
ONE = Fraction(1)

_BOX_STREAM = 0x424F58  # substream label for box sampling
_SAMPLE_DENOM = 1 << 16


@dataclass(frozen=True)
class FpDecision:
    """Finitely presented, or not with a re-verifiable witness ray."""

    finitely_presented: bool
    witness: Optional[IntersectionWitness]


def is_finitely_presented(pt: SubspacePoint, gamma: ConeUnion, p: ProductSpace) -> FpDecision:
    """Decide finite presentability of the point: is Gamma cap S = {0}?

    The point must be a virtual subdirect product (the decision criterion's
    hypothesis); otherwise NotVirtualSubdirect is raised.
    """
    if not is_virtual_subdirect(pt, p):
        raise NotVirtualSubdirect(
            "the subspace meets a factor block nontrivially; the finite "
            "presentability criterion does not apply"
        )
    witness = union_meets_subspace(gamma, pt.subspace)
    return FpDecision(finitely_presented=witness is None, witness=witness)


@dataclass(frozen=True)
class OpennessCertificate:
    """A rational radius delta of FP-preserving chart perturbations.

    Any point whose RREF basis has the same pivot columns and differs
    entry-wise by at most delta stays a virtual subdirect product and stays
    finitely presented.
    """

    delta: Fraction
    chart_pivots: tuple[int, ...]
    per_piece_distance: tuple[tuple[int, Fraction], ...]
    vsp_margin: Optional[Fraction]


def _slice_distance(piece: ConvexCone, w: Subspace) -> Fraction:
    """Exact L-infinity distance from conv(generators) to the subspace w.

    LP over (lam, s, t): lam on the generator simplex, w-point B^T s, and
    |G lam - B^T s|_inf <= t minimised.
    """
    g = len(piece.generators)
    l = w.dim
    n = piece.ambient_dim
    t_col = g + l
    constraints = [lp.constraint([ONE] * g + [ZERO] * (l + 1), lp.EQ, ONE)]
    for c in range(n):
        row = [gen[c] for gen in piece.generators]
        row += [-w.basis.entries[r][c] for r in range(l)]
        constraints.append(lp.constraint(row + [-ONE], lp.LE, ZERO))
        constraints.append(lp.constraint(row + [ONE], lp.GE, ZERO))
    objective = tuple(ZERO for _ in range(t_col)) + (ONE,)
    problem = lp.LinearProgram(
        num_vars=t_col + 1,
        constraints=tuple(constraints),
        objective=objective,
        sense="min",
        nonneg_vars=frozenset(range(g)),
    )
    outcome = lp.solve(problem)
    assert outcome.status == "optimal"
    return outcome.value


def _vsp_margin_for_block(w: Subspace, block: Subspace) -> Optional[Fraction]:
    """Perturbation bound keeping w independent from one factor block.

    Picks a nonvanishing maximal minor D of the stacked basis and bounds the
    first-order determinant drift by the cofactors of the perturbable
    entries (the non-pivot columns of w's RREF basis).  Returns None when no
    perturbable entry touches the minor, i.e. the minor cannot drift.
    """
    stacked = w.basis.stack(block.basis)
    _, cols = rref(stacked)
    square = submatrix_columns(stacked, cols)
    d = det(square)
    assert d != 0
    pivot_set = set(w.pivot_columns)
    total = ZERO
    for r in range(w.dim):
        for j, c in enumerate(cols):
            if c not in pivot_set:
                total += abs(cofactor(square, r, j))
    if total == 0:
        return None
    return abs(d) / (2 * total)


def openness_certificate(
    pt: SubspacePoint, gamma: ConeUnion, p: ProductSpace
) -> OpennessCertificate:
    """Certify an FP verdict as stable under small chart perturbations.

    Per pointed piece, the compact slice conv(generators) sits at a positive
    exact distance d from the subspace; since RREF coefficients are read off
    pivot coordinates, an intersection after a delta-perturbation would force
    that distance below l * R0 * delta, so d / (2 l R0) is a sound bound.
    The virtual-subdirect margin bounds the drift of a nonvanishing stacked
    minor.  Pieces containing a line admit no slice argument and are refused;
    the FP decision itself stays exact either way.
    """
    decision = is_finitely_presented(pt, gamma, p)
    if not decision.finitely_presented:
        raise NotFinitelyPresented("certificates exist only for FP points")
    for piece in gamma.pieces:
        if cone_contains_line(piece):
            raise NonPointedPiece(
                "a piece of Gamma contains a line; no perturbation certificate "
                "is available (the decision itself remains exact)"
            )
    l = pt.subspace.dim
    per_piece: list[tuple[int, Fraction]] = []
    bounds: list[Fraction] = []
    if l > 0:
        for idx, piece in enumerate(gamma.pieces):
            dist = _slice_distance(piece, pt.subspace)
            assert dist > 0
            per_piece.append((idx, dist))
            r0 = max(linf_norm(gen) for gen in piece.generators)
            bounds.append(dist / (2 * l * r0))
    vsp_margin: Optional[Fraction] = None
    if l > 0:
        for i in range(len(p.factors)):
            b = _vsp_margin_for_block(pt.subspace, block_subspace(p, i))
            if b is not None:
                vsp_margin = b if vsp_margin is None else min(vsp_margin, b)
    candidates = bounds + ([vsp_margin] if vsp_margin is not None else [])
    delta = min(candidates) if candidates else ONE
    return OpennessCertificate(
        delta=delta,
        chart_pivots=pt.subspace.pivot_columns,
        per_piece_distance=tuple(per_piece),
        vsp_margin=vsp_margin,
    )


# --- construction of an FP point for two factors of equal rank ------------


def _half(v: Vector) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _cross(u: Vector, v: Vector) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _rot90(v: Vector) -> Vector:
    return (-v[1], v[0])


def _angular_sort(dirs: set[Vector]) -> list[Vector]:
    # Counterclockwise from the positive x-axis; exact, no floats.
    import functools

    def cmp(u: Vector, v: Vector) -> int:
        hu, hv = _half(u), _half(v)
        if hu != hv:
            return -1 if hu < hv else 1
        c = _cross(u, v)
        return 0 if c == 0 else (-1 if c > 0 else 1)

    return sorted(dirs, key=functools.cmp_to_key(cmp))


def _avoiding_directions(sigma: ConeUnion) -> Iterator[Vector]:
    """Verified directions v with span{v} meeting the union only in 0.

    The bad directions form finitely many closed angular sectors bounded by
    generator rays and their negatives, so every open gap between adjacent
    boundary directions is entirely good or entirely bad; each gap yields two
    non-parallel interior candidates which are then verified exactly.
    Tameness guarantees at least one good gap exists.
    """

    def good(v: Vector) -> bool:
        nv = vec_neg(v)
        return not any(
            cone_contains(piece, v) or cone_contains(piece, nv) for piece in sigma.pieces
        )

    dirs: set[Vector] = set()
    for piece in sigma.pieces:
        for g in piece.generators:
            dirs.add(g)
            dirs.add(canonical_ray(vec_neg(g)))
    if not dirs:
        yield vector((1, 0))
        yield vector((0, 1))
        return
    ordered = _angular_sort(dirs)
    n = len(ordered)
    for idx in range(n):
        d1, d2 = ordered[idx], ordered[(idx + 1) % n]
        c = _cross(d1, d2)
        if c > 0:
            candidates = (
                canonical_ray(vec_add(d1, d2)),
                canonical_ray(vec_add(d1, vec_scale(Fraction(2), d2))),
            )
        elif c == 0:
            # Adjacent antipodal directions: the gap is exactly a half-turn.
            candidates = (
                canonical_ray(_rot90(d1)),
                canonical_ray(vec_add(d1, _rot90(d1))),
            )
        else:
            continue
        for v in candidates:
            if good(v):
                yield v


def _sq_cos_bound(sigma: ConeUnion, p_inv: Matrix, axis: int) -> Fraction:
    """Max squared cosine between the union and the given orthonormal axis.

    Valid in dimension 2 because over an angular sector avoiding the axis and
    its negative, the squared cosine is maximised at a boundary ray, hence at
    a generator.  A zero maximum falls back to 1/2 (any upper bound < 1 works).
    """
    best = ZERO
    for piece in sigma.pieces:
        for g in piece.generators:
            gh = p_inv.mul_vec(g)
            val = gh[axis] ** 2 / (gh[0] ** 2 + gh[1] ** 2)
            if val > best:
                best = val
    return best if best > 0 else Fraction(1, 2)


@dataclass(frozen=True)
class RhoConstruction:
    """An invertible map rho with sigma_1 meeting rho(sigma_2) only in 0.

    The graph point {rho(w) + w : w in the second block} is then finitely
    presented.  For rank 2 the map scales the avoided directions: rho v1 =
    lam v1 and rho v2 = (1/lam) v2, where lam is the smallest power of two
    with lam^4 (1-eps1)(1-eps2) > eps1 eps2; that inequality makes the exact
    post-check provably pass.  verified is set only after the post-check.
    """

    rho: Matrix
    verified: bool
    point: SubspacePoint
    method: str
    v1: Optional[Vector] = None
    v2: Optional[Vector] = None
    eps1: Optional[Fraction] = None
    eps2: Optional[Fraction] = None
    lam: Optional[Fraction] = None


def _apply_to_union(m: Matrix, u: ConeUnion) -> ConeUnion:
    return cone_union(
        [
            cone([m.mul_vec(g) for g in piece.generators], ambient_dim=u.ambient_dim)
            for piece in u.pieces
        ],
        ambient_dim=u.ambient_dim,
    )


def _unions_meet_only_at_zero(u1: ConeUnion, u2: ConeUnion) -> bool:
    return all(
        cones_meet_nontrivially(a, b) is None for a in u1.pieces for b in u2.pieces
    )


def _rho_point(p: ProductSpace, rho: Matrix) -> SubspacePoint:
    m = p.factors[0].rank
    rows = []
    for j in range(m):
        e_j = tuple(ONE if c == j else ZERO for c in range(m))
        rows.append(
            vec_add(embed_factor(p, 0, rho.column(j)), embed_factor(p, 1, e_j))
        )
    return subspace_point(Subspace.span(rows, ambient_dim=p.total_dim), k=m)


def construct_rho(p: ProductSpace) -> RhoConstruction:
    """Build rho with sigma_1 cap rho(sigma_2) = {0}, verified exactly.

    Rank 1 is a sign scan (-1, then +1); rank 2 runs the gap scan above;
    higher ranks are handled only for identical cone data (rho = -identity,
    where the post-check is exactly tameness) and refused otherwise.
    """
    if len(p.factors) != 2:
        raise ValueError("exactly two factors are required")
    f1, f2 = p.factors
    if f1.rank != f2.rank:
        raise UnsupportedRank("factors of unequal rank are not handled")
    m = f1.rank
    for f in (f1, f2):
        if not union_is_tame(f.sigma_c):
            raise ValueError(f"factor {f.name!r}: cone data is not tame")
    s1, s2 = f1.sigma_c, f2.sigma_c

    def finish(rho: Matrix, method: str, **extras) -> RhoConstruction:
        if not _unions_meet_only_at_zero(s1, _apply_to_union(rho, s2)):
            raise ConstructionFailed(
                "post-check failed: sigma_1 meets rho(sigma_2) nontrivially"
            )
        return RhoConstruction(
            rho=rho, verified=True, point=_rho_point(p, rho), method=method, **extras
        )

    if m == 1:
        for c in (-ONE, ONE):
            rho = Matrix.from_rows([[c]])
            if _unions_meet_only_at_zero(s1, _apply_to_union(rho, s2)):
                return finish(rho, "sign-scan")
        raise ConstructionFailed("no orientation works; tame rank-1 data cannot do this")
    if m == 2:
        try:
            v1 = next(_avoiding_directions(s1))
            v2 = next(v for v in _avoiding_directions(s2) if _cross(v1, v) != 0)
        except StopIteration:  # tame data always has a good gap
            raise ConstructionFailed("no line-avoiding direction found") from None
        basis = Matrix.from_rows([[v1[0], v2[0]], [v1[1], v2[1]]])
        basis_inv = inverse(basis)
        eps1 = _sq_cos_bound(s1, basis_inv, 0)
        eps2 = _sq_cos_bound(s2, basis_inv, 1)
        rhs = (eps1 * eps2) / ((1 - eps1) * (1 - eps2))
        t = 0
        while Fraction(16) ** t <= rhs:
            t += 1
        while Fraction(16) ** (t - 1) > rhs:
            t -= 1
        lam = Fraction(2) ** t
        scale = Matrix.from_rows([[lam, ZERO], [ZERO, 1 / lam]])
        rho = basis.mul(scale).mul(basis_inv)
        return finish(rho, "gap-scan", v1=v1, v2=v2, eps1=eps1, eps2=eps2, lam=lam)
    if s1 == s2:
        neg_identity = Matrix.from_rows(
            [[-ONE if i == j else ZERO for j in range(m)] for i in range(m)]
        )
        return finish(neg_identity, "negated-identity")
    raise UnsupportedRank(
        f"rank {m} with distinct cone data: existence of an FP point is open"
    )


# --- explicit non-FP point -------------------------------------------------


def _extension_candidates(n: int, cap: int) -> Iterator[Vector]:
    # Standard basis vectors first, then moment-curve vectors (1, t, t^2, ...);
    # any proper subspace contains at most n - 1 moment points, so the greedy
    # scan below always completes within the cap.
    for c in range(n):
        yield tuple(ONE if i == c else ZERO for i in range(n))
    for t in range(1, cap + 1):
        yield tuple(Fraction(t) ** i for i in range(n))


def construct_nonfp_witness(p: ProductSpace, k: int) -> SubspacePoint:
    """A verified virtual subdirect product point that is not FP.

    Sums one ray from each of the two lowest-index factors with nonzero cone
    data (the sum lies in Gamma and in no factor block) and greedily extends
    it to an (N-k)-dimensional subspace avoiding every block, re-checking
    each step exactly.
    """
    nonzero = [i for i, f in enumerate(p.factors) if f.sigma_c.pieces]
    if len(nonzero) < 2:
        raise NoSuitableFactors(
            "need at least two factors with nonzero cone data (non-polycyclic)"
        )
    if not p.max_rank <= k < p.total_dim:
        raise ValueError(
            f"k must satisfy {p.max_rank} <= k < {p.total_dim}, got {k}"
        )
    i, j = nonzero[0], nonzero[1]
    chi = embed_factor(p, i, p.factors[i].sigma_c.pieces[0].generators[0])
    psi = embed_factor(p, j, p.factors[j].sigma_c.pieces[0].generators[0])
    rows = [vec_add(chi, psi)]
    target = p.total_dim - k

    def extended(candidate_rows: list[Vector]) -> Optional[Subspace]:
        space = Subspace.span(candidate_rows, ambient_dim=p.total_dim)
        if space.dim != len(candidate_rows):
            return None
        for b in range(len(p.factors)):
            if not subspaces_intersect_trivially(space, block_subspace(p, b)):
                return None
        return space

    space = extended(rows)
    assert space is not None  # the seed ray spans two blocks
    cap = p.total_dim * p.total_dim * (len(p.factors) + 2)
    for candidate in _extension_candidates(p.total_dim, cap):
        if len(rows) == target:
            break
        grown = extended(rows + [candidate])
        if grown is not None:
            rows.append(candidate)
            space = grown
    if len(rows) != target:
        raise RuntimeError("internal error: basis extension did not complete")
    pt = subspace_point(space, k)
    gamma = build_gamma(assemble_sigma(p))
    decision = is_finitely_presented(pt, gamma, p)  # also re-checks vsp
    if decision.finitely_presented:
        raise RuntimeError("internal error: constructed point decided FP")
    return pt


# --- open box of non-FP points --------------------------------------------


@dataclass(frozen=True)
class NonFpBox:
    """A chart box in which every virtual subdirect product point is non-FP."""

    chart: Chart
    description: str
    sample_points: tuple[SubspacePoint, ...]


def _greedy_independent(vectors: list[Vector], count: int, ambient: int) -> list[Vector]:
    chosen: list[Vector] = []
    for v in vectors:
        if len(chosen) == count:
            break
        if rank(Matrix.from_rows(chosen + [v], cols=ambient)) == len(chosen) + 1:
            chosen.append(v)
    return chosen


def box_point(box: NonFpBox, a_entries: Matrix) -> SubspacePoint:
    """The point of the box with the given chart matrix A (entries in (0, 1])."""
    if any(not 0 < e <= 1 for row in a_entries.entries for e in row):
        raise ValueError("box entries must lie in (0, 1]")
    return chart_to_point(chart(box.chart.complement_basis, a_entries))


def construct_nonfp_box(p: ProductSpace, gamma: ConeUnion, k: int) -> NonFpBox:
    """An open chart box of non-FP points, available iff dim(Gamma) > k.

    Takes d > k independent generators B of a high-dimensional piece, splits
    off k of them to be complemented, and parametrises with strictly positive
    chart entries: the first chart row is then a positive combination of B,
    hence a nonzero Gamma point inside the subspace.  Ten deterministic
    samples are drawn from the box, resampled if not virtual subdirect, and
    each verified non-FP.
    """
    if not p.max_rank <= k <= p.total_dim:
        raise ValueError(
            f"k must satisfy {p.max_rank} <= k <= {p.total_dim}, got {k}"
        )
    if union_dim(gamma) <= k:
        raise TheoremAApplies(
            "dim(Gamma) <= k: non-FP points form no open set (they lie in a "
            "proper subvariety)"
        )
    n = p.total_dim
    piece = next(pc for pc in gamma.pieces if cone_dim(pc) > k)
    d = cone_dim(piece)
    b = _greedy_independent(list(piece.generators), d, n)
    assert len(b) == d
    b1, b2 = b[:k], b[k:]
    completion = []
    for c in range(n):
        if len(b2) + len(completion) + len(b1) == n:
            break
        e_c = tuple(ONE if i == c else ZERO for i in range(n))
        trial = b2 + completion + [e_c] + b1
        if rank(Matrix.from_rows(trial, cols=n)) == len(trial):
            completion.append(e_c)
    basis_rows = b2 + completion + b1
    assert len(basis_rows) == n
    basis = Matrix.from_rows(basis_rows)
    l = n - k
    ones = Matrix.from_rows([[ONE] * k for _ in range(l)], cols=k)
    box_chart = chart(basis, ones)
    samples: list[SubspacePoint] = []
    for sample_index in range(10):
        pt = None
        for attempt in range(64):
            stream = CounterStream(0, _BOX_STREAM, sample_index, attempt)
            entries = [
                [
                    Fraction(stream.uniform_int(1, _SAMPLE_DENOM), _SAMPLE_DENOM)
                    for _ in range(k)
                ]
                for _ in range(l)
            ]
            candidate = chart_to_point(chart(basis, Matrix.from_rows(entries, cols=k)))
            if is_virtual_subdirect(candidate, p):
                pt = candidate
                break
        if pt is None:
            raise RuntimeError("internal error: box sampling kept hitting blocks")
        decision = is_finitely_presented(pt, gamma, p)
        if decision.finitely_presented:
            raise RuntimeError("internal error: box sample decided FP")
        samples.append(pt)
    return NonFpBox(
        chart=box_chart,
        description="all entries of A strictly positive within (0, 1] per entry",
        sample_points=tuple(samples),
    )


# --- seeded measure experiment ---------------------------------------------


def _measure_chunk(args) -> tuple[int, int]:
    p, gamma, k, seed, start, stop = args
    vsp_failures = 0
    nonfp = 0
    for index in range(start, stop):
        pt = sample_point(p, k, seed, index)
        if not is_virtual_subdirect(pt, p):
            vsp_failures += 1
        elif union_meets_subspace(gamma, pt.subspace) is not None:
            nonfp += 1
    return vsp_failures, nonfp


def run_measure_experiment(
    p: ProductSpace, k: int, samples: int, seed: int, jobs: int = 1
) -> MeasureReport:
    """Sample `samples` points and count vsp failures and non-FP verdicts.

    Deterministic given (seed, samples): each sample is a pure function of
    (seed, index), so the report is identical for any job count.
    """
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    started = time.perf_counter()
    gamma = build_gamma(assemble_sigma(p))
    applicable = theorem_a_applicable(p, gamma, k)  # validates the k range
    jobs = max(1, jobs)
    if jobs == 1 or samples < 2 * jobs:
        counts = [_measure_chunk((p, gamma, k, seed, 0, samples))]
    else:
        step = -(-samples // jobs)
        chunks = [
            (p, gamma, k, seed, lo, min(lo + step, samples))
            for lo in range(0, samples, step)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            counts = list(pool.map(_measure_chunk, chunks))
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    return MeasureReport(
        k=k,
        samples=samples,
        seed=seed,
        vsp_failures=sum(c[0] for c in counts),
        nonfp_count=sum(c[1] for c in counts),
        theorem_a_applicable=applicable,
        gamma_dim=union_dim(gamma),
        elapsed_ms=elapsed_ms,
    )
