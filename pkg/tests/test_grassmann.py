from fractions import Fraction

import pytest

from sigmafp.cones import cone, cone_union
from sigmafp.grassmann import (
    chart,
    chart_to_point,
    is_virtual_subdirect,
    sample_point,
    sample_rows,
    subspace_point,
)
from sigmafp.linalg import Matrix, Subspace
from sigmafp.product import factor_spec, product_space

F = Fraction


def ray_factor(name, rank, *rays):
    pieces = [cone([r], ambient_dim=rank) for r in rays]
    return factor_spec(name, rank, cone_union(pieces, ambient_dim=rank))


def two_line_factors():
    return product_space([ray_factor("a", 1, (1,)), ray_factor("b", 1, (1,))])


def test_chart_standard_basis_a_zero():
    c = chart(Matrix.identity(2), Matrix.from_rows([[0]]))
    assert chart_to_point(c).subspace == Subspace.span([[1, 0]])


def test_chart_swapped_basis():
    # basis ((0,1),(1,0)): the row is e2-slot + a * e1-slot = (a, 1)
    a = F(3, 7)
    c = chart(Matrix.from_rows([[0, 1], [1, 0]]), Matrix.from_rows([[a]]))
    assert chart_to_point(c).subspace == Subspace.span([[a, 1]])


def test_chart_three_dims():
    c = chart(Matrix.identity(3), Matrix.from_rows([[2], [3]]))
    pt = chart_to_point(c)
    assert pt.k == 1
    assert pt.subspace == Subspace.span([[1, 0, 2], [0, 1, 3]])


def test_chart_a_zero_spans_leading_basis_vectors():
    basis = Matrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 0]])
    c = chart(basis, Matrix.from_rows([[0], [0]]))
    assert chart_to_point(c).subspace == Subspace.span([[1, 1, 0], [0, 1, 1]])


def test_chart_injective_in_a():
    basis = Matrix.from_rows([[1, 2], [1, 3]])
    points = set()
    for num in range(-3, 4):
        a = Matrix.from_rows([[F(num, 2)]])
        points.add(chart_to_point(chart(basis, a)).subspace)
    assert len(points) == 7


def test_chart_rejects_singular_basis():
    with pytest.raises(ValueError):
        chart(Matrix.from_rows([[1, 1], [2, 2]]), Matrix.from_rows([[0]]))


def test_subspace_point_dimension_checked():
    with pytest.raises(ValueError):
        subspace_point(Subspace.span([[1, 0]]), k=2)


def test_is_virtual_subdirect():
    p = two_line_factors()
    assert is_virtual_subdirect(subspace_point(Subspace.span([[1, -1]]), 1), p)
    assert not is_virtual_subdirect(subspace_point(Subspace.span([[1, 0]]), 1), p)
    q = product_space([ray_factor("a", 2, (1, 0)), ray_factor("b", 2, (0, 1))])
    pt = subspace_point(Subspace.span([[1, 0, 1, 0], [0, 1, 0, 1]]), 2)
    assert is_virtual_subdirect(pt, q)


def test_is_virtual_subdirect_invariant_under_factor_swap():
    p = product_space([ray_factor("a", 1, (1,)), ray_factor("b", 2, (0, 1))])
    swapped = product_space([ray_factor("b", 2, (0, 1)), ray_factor("a", 1, (1,))])
    pt = subspace_point(Subspace.span([[1, 1, 0]]), 2)
    # permute coordinates along with the factors: (x; y1, y2) -> (y1, y2; x)
    pt_swapped = subspace_point(Subspace.span([[1, 0, 1]]), 2)
    assert is_virtual_subdirect(pt, p) == is_virtual_subdirect(pt_swapped, swapped)
    bad = subspace_point(Subspace.span([[0, 1, 0]]), 2)
    bad_swapped = subspace_point(Subspace.span([[1, 0, 0]]), 2)
    assert is_virtual_subdirect(bad, p) == is_virtual_subdirect(bad_swapped, swapped)


def test_is_virtual_subdirect_requires_k_at_least_max_rank():
    p = product_space([ray_factor("a", 2, (1, 0)), ray_factor("b", 1, (1,))])
    pt = subspace_point(Subspace.span([[1, 0, 1], [0, 1, 1]]), 1)
    with pytest.raises(ValueError):
        is_virtual_subdirect(pt, p)


def test_sample_point_deterministic():
    p = two_line_factors()
    assert sample_point(p, 1, seed=1, index=0) == sample_point(p, 1, seed=1, index=0)
    assert sample_point(p, 1, seed=1, index=0) != sample_point(p, 1, seed=1, index=1)
    assert sample_point(p, 1, seed=2, index=0) != sample_point(p, 1, seed=1, index=0)


def test_sample_point_has_exact_dimension():
    q = product_space([ray_factor("a", 2, (1, 0)), ray_factor("b", 2, (0, 1))])
    for index in range(5):
        for k in (2, 3, 4):
            pt = sample_point(q, k, seed=9, index=index)
            assert pt.subspace.dim == 4 - k
            assert pt.k == k


def test_sample_point_never_hits_axes():
    # hitting a fixed line with denominator 2**16 grid entries has
    # probability well under 2**-30 per draw
    p = two_line_factors()
    axes = {Subspace.span([[1, 0]]), Subspace.span([[0, 1]])}
    for index in range(1000):
        assert sample_point(p, 1, seed=3, index=index).subspace not in axes


def test_sample_point_k_range_checked():
    p = two_line_factors()
    with pytest.raises(ValueError):
        sample_point(p, 0, seed=1, index=0)
    with pytest.raises(ValueError):
        sample_point(p, 3, seed=1, index=0)


def test_sample_coordinate_means_near_zero():
    # float cross-check only; the decision paths never see floats.  Entries
    # are scaled to [-1, 1] so the 0.05 bound sits far out in the tail.
    n = 10_000
    totals = [0.0, 0.0]
    for index in range(n):
        (row,) = sample_rows(1, 2, seed=11, index=index)
        totals[0] += float(row[0]) / 16.0
        totals[1] += float(row[1]) / 16.0
    assert all(abs(t / n) < 0.05 for t in totals)
