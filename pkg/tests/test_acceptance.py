"""Acceptance suite: one test per criterion, printing a pass/fail line each.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
All tolerances are exact (rational arithmetic); the time budgets are part of
the criteria and asserted.
"""

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from oracles import (
    check_lp_outcome,
    cone_contains_oracle,
    cones_meet_oracle,
    union_is_tame_oracle,
    union_meets_subspace_oracle,
)
from sigmafp import lp
from sigmafp.cli import main
from sigmafp.cones import (
    cone,
    cone_contains,
    cone_union,
    cones_meet_nontrivially,
    union_is_tame,
    union_meets_subspace,
)
from sigmafp.decisions import (
    box_point,
    construct_nonfp_box,
    construct_nonfp_witness,
    construct_rho,
    is_finitely_presented,
    openness_certificate,
    run_measure_experiment,
)
from sigmafp.formats import fixture_text, load_fixture, serialize_report
from sigmafp.grassmann import is_virtual_subdirect, sample_point, subspace_point
from sigmafp.linalg import Matrix, Subspace
from sigmafp.product import assemble_sigma, build_gamma, factor_spec, product_space

F = Fraction


@contextmanager
def criterion(number, description, budget_s, carried_s=0.0):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {number} ({description}): FAIL")
        raise
    elapsed = time.monotonic() - start + carried_s
    assert elapsed < budget_s, f"criterion {number} took {elapsed:.1f}s, budget {budget_s}s"
    print(f"\nACCEPTANCE {number} ({description}): PASS [{elapsed:.1f}s < {budget_s}s]")


def _write_fixture(tmp_path, name):
    path = tmp_path / f"{name}.json"
    path.write_text(fixture_text(name))
    return str(path)


def _write_subspace(tmp_path, rows, name):
    path = tmp_path / name
    path.write_text(json.dumps({"basis": [[str(e) for e in r] for r in rows]}))
    return str(path)


def _random_fraction(rnd):
    return F(rnd.randint(-4, 4), rnd.randint(1, 4))


def _random_ray(rnd, dim):
    while True:
        v = tuple(_random_fraction(rnd) for _ in range(dim))
        if any(e != 0 for e in v):
            return v


def _random_cone(rnd, dim, max_gens=3):
    return cone([_random_ray(rnd, dim) for _ in range(rnd.randint(1, max_gens))], ambient_dim=dim)


def _random_union(rnd, dim):
    pieces = [_random_cone(rnd, dim, max_gens=2) for _ in range(rnd.randint(1, 3))]
    return cone_union(pieces, ambient_dim=dim)


def test_criterion_1_f1_end_to_end(tmp_path, capsys):
    with criterion(1, "F1 end-to-end FP criterion", 1.0):
        f1 = _write_fixture(tmp_path, "f1")
        fp_file = _write_subspace(tmp_path, [[1, -1]], "fp.json")
        nonfp_file = _write_subspace(tmp_path, [[1, 1]], "nonfp.json")
        block_file = _write_subspace(tmp_path, [[1, 0]], "block.json")

        assert main(["check-fp", f1, "--subspace", fp_file]) == 0
        out = capsys.readouterr().out
        assert "→ finitely presented" in out

        assert main(["check-fp", f1, "--subspace", nonfp_file]) == 0
        out = capsys.readouterr().out
        assert "NOT finitely presented" in out and "witness ray = (1, 1)" in out

        assert main(["check-vsp", f1, "--subspace", block_file]) == 0
        out = capsys.readouterr().out
        assert "NOT a virtual subdirect product" in out


def test_criterion_2_oracle_equivalence():
    with criterion(2, "cone ops agree with brute-force oracle on 200+ instances", 120.0):
        rnd = random.Random(20260811)
        checked = 0
        for _ in range(220):
            dim = rnd.randint(1, 3)
            a = _random_cone(rnd, dim)
            b = _random_cone(rnd, dim)
            u = _random_union(rnd, dim)
            w_rows = [_random_ray(rnd, dim) for _ in range(rnd.randint(0, dim))]
            w = Subspace.span(w_rows, ambient_dim=dim)

            if rnd.random() < 0.5:
                x = tuple(
                    sum(rnd.randint(0, 2) * g[i] for g in a.generators)
                    for i in range(dim)
                )
            else:
                x = tuple(_random_fraction(rnd) for _ in range(dim))
            assert cone_contains(a, x) == cone_contains_oracle(a, x)

            meet = cones_meet_nontrivially(a, b)
            assert (meet is not None) == cones_meet_oracle(a, b)
            if meet is not None:
                assert cone_contains(a, meet.ray) and cone_contains(b, meet.ray)

            hit = union_meets_subspace(u, w)
            assert (hit is not None) == union_meets_subspace_oracle(u, w_rows)
            if hit is not None:
                assert w.contains(hit.ray)
                assert cone_contains(u.pieces[hit.piece_index], hit.ray)

            assert union_is_tame(u) == union_is_tame_oracle(u)
            checked += 1
        assert checked >= 200


def test_criterion_3_lp_against_vertex_oracle():
    with criterion(3, "simplex agrees with vertex enumeration on 100 LPs", 60.0):
        rnd = random.Random(31337)
        statuses = {"optimal": 0, "infeasible": 0, "unbounded": 0}
        for _ in range(100):
            n = rnd.randint(1, 5)
            m = rnd.randint(1, 8)
            constraints = []
            for _ in range(m):
                coeffs = [F(rnd.randint(-4, 4)) for _ in range(n)]
                relation = rnd.choice([lp.LE, lp.GE, lp.EQ])
                constraints.append(lp.constraint(coeffs, relation, F(rnd.randint(-4, 4))))
            problem = lp.LinearProgram(
                num_vars=n,
                constraints=tuple(constraints),
                objective=tuple(F(rnd.randint(-4, 4)) for _ in range(n)),
                sense=rnd.choice(["max", "min"]),
                nonneg_vars=frozenset(range(n)),
            )
            outcome = lp.solve(problem)
            check_lp_outcome(problem, outcome)
            statuses[outcome.status] += 1
        # the sample must exercise every outcome kind
        assert all(v > 0 for v in statuses.values()), statuses


def _fp_instances(count):
    """Deterministically collect FP sample points across the fixtures."""
    plan = [
        ("f1", 1, 5),
        ("f3", 1, 3),
        ("f3", 2, 2),
        ("f4", 2, 3),
        ("f4", 3, 2),
        ("f2", 4, 3),
        ("f2", 5, 2),
    ]
    instances = []
    for fixture, k, want in plan:
        p = load_fixture(fixture)
        gamma = build_gamma(assemble_sigma(p))
        found = 0
        index = 0
        while found < want:
            pt = sample_point(p, k, seed=606, index=index)
            index += 1
            if not is_virtual_subdirect(pt, p):
                continue
            if is_finitely_presented(pt, gamma, p).finitely_presented:
                instances.append((p, gamma, pt))
                found += 1
            assert index < 500, "could not find enough FP sample points"
    assert len(instances) >= count
    return instances[:count]


def _perturbed(pt, delta, rnd):
    basis = [list(row) for row in pt.subspace.basis.entries]
    pivots = pt.subspace.pivot_columns
    pivot_set = set(pivots)
    for r, row in enumerate(basis):
        for c in range(len(row)):
            # only entries an RREF basis with the same pivots can vary
            if c in pivot_set or c < pivots[r]:
                continue
            row[c] += delta * F(rnd.randint(-(1 << 16), 1 << 16), 1 << 16)
    matrix = Matrix.from_rows(basis)
    perturbed_subspace = Subspace(pt.subspace.ambient_dim, matrix, pivots)
    return subspace_point(perturbed_subspace, pt.k)


def test_criterion_4_certificate_soundness():
    with criterion(4, "openness certificates survive 100 perturbations x 20 points", 120.0):
        rnd = random.Random(404)
        for p, gamma, pt in _fp_instances(20):
            cert = openness_certificate(pt, gamma, p)
            assert cert.delta > 0
            for _ in range(100):
                q = _perturbed(pt, cert.delta, rnd)
                assert is_virtual_subdirect(q, p)
                assert is_finitely_presented(q, gamma, p).finitely_presented


def _random_tame_union(rnd):
    while True:
        u = _random_union(rnd, 2)
        if union_is_tame(u):
            return u


def test_criterion_5_rho_construction():
    with criterion(5, "rho construction verifies on 50 random tame pairs", 60.0):
        rnd = random.Random(505)
        for _ in range(50):
            p = product_space(
                [
                    factor_spec("a", 2, _random_tame_union(rnd)),
                    factor_spec("b", 2, _random_tame_union(rnd)),
                ]
            )
            result = construct_rho(p)
            assert result.verified
            if result.method == "gap-scan":
                l4 = result.lam ** 4
                assert l4 * (1 - result.eps1) * (1 - result.eps2) > result.eps1 * result.eps2
        # the identical-factors case takes rho = -identity (rank 3 data)
        sigma = cone_union([cone([(1, 0, 0), (0, 1, 1)], ambient_dim=3)], ambient_dim=3)
        p = product_space([factor_spec("a", 3, sigma), factor_spec("b", 3, sigma)])
        result = construct_rho(p)
        assert result.verified
        assert result.rho == Matrix.from_rows(
            [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]
        )


@pytest.fixture(scope="module")
def f2_report():
    p = load_fixture("f2")
    started = time.monotonic()
    report = run_measure_experiment(p, k=4, samples=10_000, seed=42)
    return report, time.monotonic() - started


@pytest.fixture(scope="module")
def f1_report():
    p = load_fixture("f1")
    started = time.monotonic()
    report = run_measure_experiment(p, k=1, samples=10_000, seed=42)
    return report, time.monotonic() - started


def test_criterion_6_measure_generic_case(f2_report):
    report, elapsed = f2_report
    with criterion(6, "F2 k=4: 10^4 samples, no vsp failures, no non-FP", 300.0, elapsed):
        assert report.theorem_a_applicable
        assert report.gamma_dim == 2
        assert report.vsp_failures == 0
        assert report.nonfp_count == 0


def test_criterion_7_witness_and_box(tmp_path):
    with criterion(7, "non-FP witness and box on F1", 60.0):
        p = load_fixture("f1")
        gamma = build_gamma(assemble_sigma(p))

        pt = construct_nonfp_witness(p, 1)
        assert is_virtual_subdirect(pt, p)
        assert not is_finitely_presented(pt, gamma, p).finitely_presented

        box = construct_nonfp_box(p, gamma, 1)
        assert len(box.sample_points) == 10
        for sample in box.sample_points:
            assert is_virtual_subdirect(sample, p)
            assert not is_finitely_presented(sample, gamma, p).finitely_presented

        rnd = random.Random(707)
        l, k = 1, 1
        for _ in range(100):
            entries = [
                [F(rnd.randint(1, 1 << 16), 1 << 16) for _ in range(k)] for _ in range(l)
            ]
            extra = box_point(box, Matrix.from_rows(entries))
            assert is_virtual_subdirect(extra, p)
            assert not is_finitely_presented(extra, gamma, p).finitely_presented


def test_criterion_8_contrast_run(f1_report):
    report, elapsed = f1_report
    with criterion(8, "F1 k=1: 10^4 samples, both verdicts in bulk", 300.0, elapsed):
        assert not report.theorem_a_applicable
        assert 3000 <= report.nonfp_count <= 7000
        assert report.vsp_failures + report.nonfp_count <= report.samples


def _stripped(report):
    return "\n".join(
        line for line in serialize_report(report).splitlines() if "elapsed_ms" not in line
    )


def test_criterion_9_determinism(f2_report, f1_report):
    with criterion(9, "repeat runs byte-identical, including --jobs 4", 600.0):
        p2 = load_fixture("f2")
        repeat = run_measure_experiment(p2, k=4, samples=10_000, seed=42, jobs=4)
        assert _stripped(repeat) == _stripped(f2_report[0])

        p1 = load_fixture("f1")
        repeat_serial = run_measure_experiment(p1, k=1, samples=10_000, seed=42)
        repeat_jobs = run_measure_experiment(p1, k=1, samples=10_000, seed=42, jobs=4)
        assert _stripped(repeat_serial) == _stripped(f1_report[0])
        assert _stripped(repeat_jobs) == _stripped(f1_report[0])

        # the witness and box constructions repeat byte-for-byte as well
        gamma = build_gamma(assemble_sigma(p1))
        first = construct_nonfp_box(p1, gamma, 1)
        second = construct_nonfp_box(p1, gamma, 1)
        assert first == second
        assert construct_nonfp_witness(p1, 1) == construct_nonfp_witness(p1, 1)