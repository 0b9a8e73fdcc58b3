import math
from itertools import product

import numpy as np
import pytest

from app.config import SolverConfig
from app.schemas import GeneratorSpec
from conftest import make_k3, random_hypergraph
from core.services.hypergraph_ops import check_packing, enumerate_conflicts
from core.services.instance_compiler import build_hypergraph
from core.services.instance_generator import generate_instance
from core.services.lp_relaxation import build_and_solve_lp, make_fractional
from core.services.ordering import (
    build_ordering, conflict_potential, estimate_violation_probability, resistance,
)
from core.services.random_streams import STREAM_TRIAL, derive_seed
from core.services.rounding import (
    alteration_outcome, choose_scale, gamma_for_class, pack_hypergraph, pack_regions,
    round_with_alteration,
)
from domain.entities import Conflict, Hyperedge, Hypergraph, Ordering, OrderingMode
from domain.exceptions import InvalidInstanceError
from domain.regions import ClassTag

def test_conflict_potential(half_x) -> None:
    c = Conflict((0, 1), witness_edge=0, order=1)
    assert conflict_potential(c, half_x) == 0.25
    assert conflict_potential(c, half_x, rho=2) == 0.0625
    zero = make_fractional(make_k3(), [0.0, 0.5, 0.5])
    assert conflict_potential(c, zero) == 0.0
    with pytest.raises(InvalidInstanceError):
        conflict_potential(c, half_x, rho=0.5)

def test_resistance_examples(k3, half_x) -> None:
    assert resistance(k3, 0, range(3), half_x, rho=1) == pytest.approx(1.0)
    assert resistance(k3, 0, range(3), half_x, rho=2) == pytest.approx(0.5)
    assert resistance(k3, 0, {0, 1}, half_x) == pytest.approx(0.5)
    assert resistance(k3, 0, {0}, half_x) == 0.0
    with pytest.raises(InvalidInstanceError):
        resistance(k3, 2, {0, 1}, half_x)

def test_resistance_of_unsupported_vertex_is_zero(k3) -> None:
    x = make_fractional(k3, [0.0, 0.5, 0.5])
    assert resistance(k3, 0, range(3), x) == 0.0

def test_violation_estimate_degenerate_cases(k3) -> None:
    ones = make_fractional(k3, [1.0, 1.0, 1.0])
    assert estimate_violation_probability(k3, 0, range(3), ones, 1.0, 200, seed=1) == 1.0
    lonely = Hypergraph((1.0, 1.0), (Hyperedge((0,), 1),))
    x = make_fractional(lonely, [1.0, 1.0])
    assert estimate_violation_probability(lonely, 1, range(2), x, 1.0, 50, seed=1) == 0.0
    with pytest.raises(InvalidInstanceError):
        estimate_violation_probability(k3, 0, range(3), ones, 1.0, 0, seed=1)

def test_violation_estimate_converges(k3, half_x) -> None:
    at_one = estimate_violation_probability(k3, 0, range(3), half_x, 1.0, 10 ** 4, seed=7)
    assert at_one == pytest.approx(0.75, abs=0.02)
    at_two = estimate_violation_probability(k3, 0, range(3), half_x, 2.0, 10 ** 4, seed=7)
    assert at_two == pytest.approx(7 / 16, abs=0.02)

def test_violation_estimate_is_deterministic(k3, half_x) -> None:
    first = estimate_violation_probability(k3, 0, range(3), half_x, 2.0, 500, seed=11)
    again = estimate_violation_probability(k3, 0, range(3), half_x, 2.0, 500, seed=11)
    assert first == again

def test_ordering_tie_break_on_k3(k3, half_x) -> None:
    ordering = build_ordering(k3, half_x, 1.0, SolverConfig())
    assert ordering.permutation == (2, 1, 0)
    assert ordering.diagnostics == pytest.approx((0.0, 0.5, 1.0))
    assert ordering.max_diagnostic == pytest.approx(1.0)

def test_ordering_places_zero_resistance_last() -> None:
    H = Hypergraph((1.0, 1.0, 1.0), (Hyperedge((0, 1), 1),))
    x = make_fractional(H, [0.5, 0.5, 1.0])
    ordering = build_ordering(H, x, 1.0, SolverConfig())
    assert ordering.permutation[-1] == 2

def test_single_vertex_ordering() -> None:
    H = Hypergraph((3.0,))
    ordering = build_ordering(H, make_fractional(H, [1.0]), 1.0, SolverConfig())
    assert ordering.permutation == (0,)

def test_sampled_ordering_is_a_permutation(k3, half_x) -> None:
    config = SolverConfig(ordering_mode=OrderingMode.SAMPLED_VIOLATION, sample_count=200, seed=3)
    ordering = build_ordering(k3, half_x, 2.0, config)
    assert sorted(ordering.permutation) == [0, 1, 2]
    assert ordering.mode == OrderingMode.SAMPLED_VIOLATION
    assert ordering == build_ordering(k3, half_x, 2.0, config)

def test_alteration_single_vertex() -> None:
    H = Hypergraph((2.5,))
    x = make_fractional(H, [1.0])
    solution = round_with_alteration(H, x, Ordering((0,), (0.0,)), 1.0, seed=0)
    assert solution.chosen == (0,)
    assert solution.weight == 2.5

def test_alteration_zero_fraction_is_empty(k3) -> None:
    x = make_fractional(k3, [0.0, 0.0, 0.0])
    solution = round_with_alteration(k3, x, Ordering((0, 1, 2), (0.0, 0.0, 0.0)), 1.0, seed=0)
    assert solution.chosen == ()

@pytest.mark.parametrize("permutation", [(0, 1, 2), (1, 2, 0), (2, 0, 1)])
def test_alteration_accepts_first_scanned_on_k3(k3, permutation) -> None:
    ones = make_fractional(k3, [1.0, 1.0, 1.0])
    selected, accepted = alteration_outcome(k3, ones, Ordering(permutation, (0.0,) * 3), 1.0, seed=5)
    assert selected == (0, 1, 2)
    assert accepted == (permutation[0],)

def test_choose_scale_formula(k3, half_x) -> None:
    config = SolverConfig(calibrate=False)
    assert choose_scale(k3, half_x, config) == 4.0
    triple = Hypergraph((1.0,) * 3, (Hyperedge((0, 1, 2), 2),))
    x = make_fractional(triple, [2 / 3] * 3)
    assert choose_scale(triple, x, config.with_updates(gamma_value=16.0)) == pytest.approx(16.0)
    assert choose_scale(k3, half_x, SolverConfig(scale_override=2.5)) == 2.5

def test_choose_scale_without_conflicts() -> None:
    H = Hypergraph((1.0, 1.0), (Hyperedge((0, 1), 2),))
    assert choose_scale(H, make_fractional(H, [1.0, 1.0]), SolverConfig()) == 1.0
    bare = Hypergraph((1.0,))
    assert choose_scale(bare, make_fractional(bare, [1.0]), SolverConfig()) == 1.0

def test_calibration_keeps_or_raises_scale(k3, half_x) -> None:
    # ρ=4 에서 정점 0 의 위반 확률은 1 − (7/8)² ≈ 0.234
    config = SolverConfig(sample_count=20000, seed=2)
    assert choose_scale(k3, half_x, config) == 4.0
    assert choose_scale(k3, half_x, config.with_updates(alpha=0.25)) == 4.0

def test_pack_hypergraph_examples(k3) -> None:
    no_edges = Hypergraph((1.0, 2.0, 3.0))
    solution = pack_hypergraph(no_edges, SolverConfig())
    assert solution.chosen == (0, 1, 2)
    assert solution.weight == 6.0

    packed = pack_hypergraph(k3, SolverConfig(trials=64))
    assert packed.weight == 1.0
    assert packed.feasible
    assert packed.lp_objective == pytest.approx(1.5, abs=1e-6)

def test_pack_empty_hypergraph() -> None:
    solution = pack_hypergraph(Hypergraph(()), SolverConfig())
    assert solution.chosen == ()
    assert solution.weight == 0.0

def test_pack_regions_on_flower(flower) -> None:
    solution = pack_regions(flower, SolverConfig())
    assert solution.chosen == (0, 1)
    assert solution.weight == 2.0

def test_pack_regions_with_relaxed_capacity(flower) -> None:
    solution = pack_regions(flower, SolverConfig(), phi=3)
    assert solution.bicriteria_bound == 3
    assert solution.feasible

def test_gamma_for_class() -> None:
    assert gamma_for_class(ClassTag.DISK, 100.0) == 1.0
    assert gamma_for_class(ClassTag.RECT, 100.0) == 1.0
    assert gamma_for_class(ClassTag.FAT_TRIANGLE, 1.0) == 1.0
    assert gamma_for_class(ClassTag.FAT_TRIANGLE, 10.0) == 4.0
    assert gamma_for_class(ClassTag.FAT_TRIANGLE, 10 ** 6) == 5.0
    assert gamma_for_class(ClassTag.GENERIC, 12.5) == 12.5
    assert gamma_for_class(ClassTag.GENERIC, 0.5) == 1.0

def _exhaustive_expected_conflicts(H, v, A, x, rho) -> float:
    """v 를 넣고 A\\{v} 를 x/ρ 로 뽑을 때 v 를 포함해 모두 뽑힌 충돌 수의 기댓값"""
    others = sorted(set(A) - {v})
    conflicts = {frozenset(c.vertices) for c in enumerate_conflicts(H, A)}
    incident = [c for c in conflicts if v in c]
    total = 0.0
    for picks in product((False, True), repeat=len(others)):
        probability = 1.0
        sample = {v}
        for u, picked in zip(others, picks):
            rate = x.values[u] / rho
            probability *= rate if picked else 1 - rate
            if picked:
                sample.add(u)
        total += probability * sum(1 for c in incident if c <= sample)
    return total

@pytest.mark.parametrize("seed", range(12))
def test_resistance_equals_conditional_expectation(seed) -> None:
    H = random_hypergraph(seed, n=6, m=5, max_size=4)
    x = build_and_solve_lp(H)
    rng = np.random.default_rng(seed)
    rho = float(rng.choice([1.0, 2.0, 4.0]))
    A = [v for v in range(H.num_vertices) if rng.random() < 0.8] or [0]
    for v in A:
        if x.values[v] <= 0:
            continue
        exact = resistance(H, v, A, x, rho)
        brute = _exhaustive_expected_conflicts(H, v, A, x, rho)
        assert exact == pytest.approx(brute, rel=1e-10, abs=1e-12)

@pytest.mark.slow
def test_rounding_output_always_feasible() -> None:
    for seed in range(60):
        H = random_hypergraph(seed, n=9, m=8, max_size=5, max_cap=3)
        x = build_and_solve_lp(H)
        config = SolverConfig(seed=seed, calibrate=False)
        rho = choose_scale(H, x, config)
        ordering = build_ordering(H, x, rho, config)
        for trial in range(20):
            solution = round_with_alteration(H, x, ordering, rho, derive_seed(seed, STREAM_TRIAL, trial))
            assert check_packing(H, solution.chosen).feasible

@pytest.mark.slow
def test_selected_vertices_are_accepted_often_on_k3() -> None:
    H = make_k3()
    x = make_fractional(H, [0.5, 0.5, 0.5])
    ordering = build_ordering(H, x, 4.0, SolverConfig())
    assert ordering.max_diagnostic <= 0.25
    selected_total = accepted_total = 0
    for seed in range(4000):
        selected, accepted = alteration_outcome(H, x, ordering, 4.0, seed)
        selected_total += len(selected)
        accepted_total += len(accepted)
    rate = accepted_total / selected_total
    sigma = math.sqrt(0.75 * 0.25 / selected_total)
    assert rate >= 0.75 - 3 * sigma

def _fuzz_spec(index: int) -> GeneratorSpec:
    rng = np.random.default_rng(index)
    shape = {"n_regions": 8, "n_points": 14, "cap_range": (1, 3), "weight_range": (0.5, 2.0)}
    specs = [
        GeneratorSpec(kind="random_disks", seed=index, **shape),
        GeneratorSpec(kind="random_rects", seed=index, **shape),
        GeneratorSpec(kind="random_rects", seed=index, direction="pack_points", **shape),
        GeneratorSpec(kind="random_boxes", seed=index, **shape),
        GeneratorSpec(kind="random_fat_triangles", seed=index, direction="pack_points",
                      extent_range=(0.2, 0.5), **shape),
        GeneratorSpec(kind="flower", seed=index),
        GeneratorSpec(kind="k3_segments", seed=index, n_regions=6),
        GeneratorSpec(kind="tri_matching_hard", seed=index, triples=sorted({
            tuple(int(c) for c in rng.integers(0, 3, 3)) for _ in range(6)
        })),
        GeneratorSpec(kind="graph_is_hard", seed=index, graph_vertices=7, graph_edges=[
            (u, v) for u in range(7) for v in range(u + 1, 7) if rng.random() < 0.35
        ]),
    ]
    return specs[index % len(specs)]

@pytest.mark.slow
def test_rounding_is_feasible_across_generators() -> None:
    for index in range(100):
        H, _ = build_hypergraph(generate_instance(_fuzz_spec(index)))
        x = build_and_solve_lp(H)
        config = SolverConfig(seed=index, calibrate=False)
        rho = choose_scale(H, x, config)
        ordering = build_ordering(H, x, rho, config)
        for trial in range(100):
            solution = round_with_alteration(H, x, ordering, rho, derive_seed(index, STREAM_TRIAL, trial))
            assert check_packing(H, solution.chosen).feasible

@pytest.mark.slow
def test_selected_disks_are_accepted_often() -> None:
    eligible = []
    for seed in range(20):
        spec = GeneratorSpec(kind="random_disks", seed=seed, n_regions=30, n_points=60, cap_range=(1, 3))
        H, _ = build_hypergraph(generate_instance(spec))
        x = build_and_solve_lp(H)
        config = SolverConfig(seed=seed)
        rho = choose_scale(H, x, config)
        ordering = build_ordering(H, x, rho, config)
        if ordering.max_diagnostic <= 0.25:
            eligible.append((H, x, ordering, rho, seed))
    assert eligible
    trials = math.ceil(2000 / len(eligible))
    selected_total = accepted_total = 0
    for H, x, ordering, rho, seed in eligible:
        for trial in range(trials):
            selected, accepted = alteration_outcome(H, x, ordering, rho, derive_seed(seed, STREAM_TRIAL, trial))
            selected_total += len(selected)
            accepted_total += len(accepted)
    assert selected_total > 0
    rate = accepted_total / selected_total
    sigma = math.sqrt(0.75 * 0.25 / selected_total)
    assert rate >= 0.75 - 3 * sigma

@pytest.mark.slow
def test_resistance_identity_on_ten_vertex_corpus() -> None:
    for seed in range(50):
        H = random_hypergraph(1000 + seed, n=10, m=8, max_size=5, max_cap=3)
        x = build_and_solve_lp(H)
        rho = (1.0, 2.0, 4.0)[seed % 3]
        A = list(range(H.num_vertices))
        for v in A:
            if x.values[v] <= 0:
                continue
            exact = resistance(H, v, A, x, rho)
            brute = _exhaustive_expected_conflicts(H, v, A, x, rho)
            assert exact == pytest.approx(brute, rel=1e-10, abs=1e-12)
