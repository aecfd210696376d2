from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmafp import lp
from sigmafp.cones import (
    canonical_ray,
    cone,
    cone_contains,
    cone_contains_line,
    cone_dim,
    cone_neg,
    cone_sum,
    cone_union,
    cones_meet_nontrivially,
    piece_subspace_lps,
    union_dim,
    union_is_tame,
    union_meets_subspace,
    union_neg,
)
from sigmafp.linalg import Subspace, constraint_rows

F = Fraction


def test_canonical_ray():
    assert canonical_ray([F(2, 3), F(-4, 3)]) == (F(1), F(-2))
    assert canonical_ray([-2, 0, -4]) == (F(-1), F(0), F(-2))
    with pytest.raises(ValueError):
        canonical_ray([0, 0])


def test_cone_generators_canonicalised():
    c = cone([(2, 0), (1, 0), (0, 3)])
    assert c.generators == ((F(0), F(1)), (F(1), F(0)))


def test_cone_contains_quadrant():
    c = cone([(1, 0), (0, 1)])
    assert cone_contains(c, (2, 3))
    assert not cone_contains(c, (-1, 0))


def test_cone_contains_derived():
    # (2, 3) = 1*(1, 1) + 1*(1, 2)
    assert cone_contains(cone([(1, 1), (1, 2)]), (2, 3))
    assert not cone_contains(cone([(1, 1), (1, 2)]), (3, 1))


def test_cone_contains_zero_and_generators():
    c = cone([(1, 2), (-3, 5)])
    assert cone_contains(c, (0, 0))
    for g in c.generators:
        assert cone_contains(c, g)
    zero = cone([], ambient_dim=2)
    assert cone_contains(zero, (0, 0))
    assert not cone_contains(zero, (1, 0))


def test_cone_dim():
    assert cone_dim(cone([(1, 0)])) == 1
    assert cone_dim(cone([(1, 0), (0, 1)])) == 2
    assert cone_dim(cone([(1, 1), (2, 2)])) == 1
    assert cone_dim(cone([], ambient_dim=2)) == 0


def test_cone_contains_line():
    assert cone_contains_line(cone([(1, 0), (-1, 0)]))
    assert not cone_contains_line(cone([(1, 0), (0, 1)]))
    # 0 = (1,1) + (-1,0) + (0,-1), normalised to coefficients summing to 1
    assert cone_contains_line(cone([(1, 1), (-1, 0), (0, -1)]))


def test_cone_sum():
    assert cone_sum(cone([(1, 0)]), cone([(0, 1)])) == cone([(1, 0), (0, 1)])
    c = cone([(1, 2), (3, -1)])
    assert cone_sum(c, c) == c
    assert cone_sum(cone([(1, 0)]), cone([], ambient_dim=2)) == cone([(1, 0)])


def test_cone_neg():
    assert cone_neg(cone([(1, 0)])) == cone([(-1, 0)])
    assert cone_neg(cone([], ambient_dim=3)) == cone([], ambient_dim=3)
    c = cone([(1, 2), (-3, 4)])
    assert cone_neg(cone_neg(c)) == c


def test_cones_meet_trivial_cases():
    w = cones_meet_nontrivially(cone([(1, 0), (0, 1)]), cone([(1, 1)]))
    assert w is not None and w.ray == (F(1), F(1))
    assert cones_meet_nontrivially(cone([(1, 0)]), cone([(0, 1)])) is None


def test_cones_meet_derived():
    # (1, 1) = (1/3)(1, 2) + (1/3)(2, 1)
    w = cones_meet_nontrivially(cone([(1, 2), (2, 1)]), cone([(1, 1)]))
    assert w is not None
    assert w.ray == (F(1), F(1))
    gens = cone([(1, 2), (2, 1)]).generators
    combo = [sum(w.coefficients[j] * gens[j][i] for j in range(len(gens))) for i in range(2)]
    assert tuple(combo) == w.ray


def test_union_meets_subspace_quadrant():
    gamma = cone_union([cone([(1, 0), (0, 1)])])
    assert union_meets_subspace(gamma, Subspace.span([[1, -1]])) is None
    w = union_meets_subspace(gamma, Subspace.span([[1, 1]]))
    assert w is not None and w.ray == (F(1), F(1))


def test_union_meets_subspace_derived():
    u = cone_union([cone([(1, 0, 0)]), cone([(0, 1, 1)])])
    w = union_meets_subspace(u, Subspace.span([[0, 1, 1], [1, 0, 5]]))
    assert w is not None
    assert w.piece_index == 1
    assert w.ray == (F(0), F(1), F(1))
    # kernel equations really vanish on the witness
    k = constraint_rows(Subspace.span([[0, 1, 1], [1, 0, 5]]))
    assert all(sum(row[i] * w.ray[i] for i in range(3)) == 0 for row in k.entries)


def test_union_meets_zero_and_full_subspace():
    u = cone_union([cone([(1, 0), (0, 1)])])
    assert union_meets_subspace(u, Subspace.zero(2)) is None
    w = union_meets_subspace(u, Subspace.full(2))
    assert w is not None


def test_union_is_tame():
    assert union_is_tame(cone_union([cone([(1, 0)]), cone([(0, 1)])]))
    assert not union_is_tame(cone_union([cone([(1, 0)]), cone([(-1, 0)])]))
    # sector of angle pi/4 contains no antipodal pair
    assert union_is_tame(cone_union([cone([(1, 0), (1, 1)])]))
    assert union_is_tame(cone_union([], ambient_dim=2))


def test_union_dim():
    assert union_dim(cone_union([cone([(1, 0)]), cone([(0, 1)])])) == 1
    assert union_dim(cone_union([cone([(1, 0), (0, 1)])])) == 2
    assert union_dim(cone_union([], ambient_dim=2)) == 0


def test_piece_with_line_makes_union_non_tame():
    u = cone_union([cone([(1, 1), (-1, -1)]), cone([(1, 0)])])
    assert cone_contains_line(u.pieces[0])
    assert not union_is_tame(u)


def test_tame_invariant_under_negation():
    for u in (
        cone_union([cone([(1, 0), (1, 1)]), cone([(-1, 2)])]),
        cone_union([cone([(1, 0)]), cone([(-1, 0)])]),
    ):
        assert union_is_tame(u) == union_is_tame(union_neg(u))


def test_meets_none_iff_all_lps_infeasible_with_farkas():
    u = cone_union([cone([(1, 0), (0, 1)]), cone([(2, 1)])])
    w = Subspace.span([[1, -1]])
    assert union_meets_subspace(u, w) is None
    for piece in u.pieces:
        for problem in piece_subspace_lps(piece, w):
            out = lp.solve(problem)
            assert out.status == "infeasible"
            assert lp.verify_farkas(problem, out.farkas)


def test_dim_mismatch_errors():
    with pytest.raises(ValueError):
        cone_contains(cone([(1, 0)]), (1, 0, 0))
    with pytest.raises(ValueError):
        cone_sum(cone([(1, 0)]), cone([(1, 0, 0)]))
    with pytest.raises(ValueError):
        cones_meet_nontrivially(cone([(1, 0)]), cone([(1, 0, 0)]))
    with pytest.raises(ValueError):
        union_meets_subspace(cone_union([cone([(1, 0)])]), Subspace.span([[1, 0, 0]]))


small_fracs = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def rays(draw, dim):
    v = draw(
        st.lists(small_fracs, min_size=dim, max_size=dim).filter(
            lambda w: any(e != 0 for e in w)
        )
    )
    return tuple(v)


@st.composite
def cones_strategy(draw, dim):
    k = draw(st.integers(1, 3))
    return cone([draw(rays(dim)) for _ in range(k)], ambient_dim=dim)


@given(st.integers(2, 3).flatmap(lambda d: cones_strategy(d)))
@settings(max_examples=40, deadline=None)
def test_ray_scaling_does_not_change_cone(c):
    rescaled = cone(
        [tuple(F(3, 2) * e for e in g) for g in c.generators], ambient_dim=c.ambient_dim
    )
    assert rescaled == c


@given(st.integers(2, 3).flatmap(lambda d: st.tuples(cones_strategy(d), cones_strategy(d))))
@settings(max_examples=30, deadline=None)
def test_cone_sum_contains_pairwise_sums(pair):
    a, b = pair
    s = cone_sum(a, b)
    for x in a.generators[:2]:
        for y in b.generators[:2]:
            assert cone_contains(s, tuple(p + q for p, q in zip(x, y)))
