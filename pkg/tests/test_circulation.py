import random
from itertools import combinations, product

import pytest

from app.models import CirculationInstance
from app.services.circulation import (
    ResidualNetwork,
    build_circulation,
    is_feasible_flow,
    solve_circulation,
    unbounded_stand_in,
    violating_cut_check,
)
from app.services.errors import MalformedInstance, VertexOutOfRange


def brute_feasible(inst: CirculationInstance) -> bool:
    ranges = [range(arc.lower, arc.upper + 1) for arc in inst.arcs]
    return any(is_feasible_flow(inst, flow) for flow in product(*ranges))


def hoffman_feasible(inst: CirculationInstance) -> bool:
    """Feasible iff no vertex set U has d(in(U)) > c(out(U)); all bounds finite."""
    for size in range(inst.n_vertices + 1):
        for u in combinations(range(inst.n_vertices), size):
            lower_in, upper_out = violating_cut_check(inst, u)
            if lower_in > upper_out:
                return False
    return True


def random_circulation(rng: random.Random, n_vertices: int, max_arcs: int, max_bound: int) -> CirculationInstance:
    arcs = []
    for _ in range(rng.randint(1, max_arcs)):
        tail, head = rng.randrange(n_vertices), rng.randrange(n_vertices)
        lower = rng.randint(0, max_bound)
        upper = rng.randint(lower, max_bound)
        arcs.append((tail, head, lower, upper))
    return build_circulation(n_vertices, arcs)


class TestResidualNetwork:
    def test_max_flow_two_paths(self):
        network = ResidualNetwork(4)
        first = network.add_arc(0, 1, 2)
        network.add_arc(1, 3, 1)
        network.add_arc(0, 2, 1)
        network.add_arc(2, 3, 5)
        assert network.max_flow(0, 3) == 2
        assert network.pushed(first) == 1
        assert network.reachable(0) == {0, 1}


class TestSolveCirculation:
    def test_forced_two_cycle(self):
        inst = build_circulation(2, [(0, 1, 1, 1), (1, 0, 1, 1)])
        result = solve_circulation(inst)
        assert result.feasible
        assert result.flow == (1, 1)

    def test_single_forced_arc_is_infeasible(self):
        inst = build_circulation(2, [(0, 1, 1, 1)])
        result = solve_circulation(inst)
        assert not result.feasible
        assert result.cut == (1,)
        assert violating_cut_check(inst, result.cut) == (1, 0)

    def test_unbounded_arc(self):
        inst = build_circulation(2, [(0, 1, 2, None), (1, 0, 0, 3)])
        result = solve_circulation(inst)
        assert result.feasible
        assert is_feasible_flow(inst, result.flow)
        assert result.flow[0] in (2, 3)

    def test_empty_instance(self):
        result = solve_circulation(CirculationInstance(n_vertices=3, arcs=()))
        assert result.flow == ()

    def test_malformed_bounds(self):
        with pytest.raises(MalformedInstance):
            build_circulation(2, [(0, 1, 2, 1)])
        with pytest.raises(MalformedInstance):
            build_circulation(2, [(0, 2, 0, 1)])

    def test_stand_in_exceeds_every_finite_bound(self):
        inst = build_circulation(3, [(0, 1, 2, 4), (1, 2, 0, None), (2, 0, 1, 3)])
        assert unbounded_stand_in(inst) == 1 + 2 + 4 + 0 + 1 + 3

    def test_matches_enumeration(self):
        rng = random.Random(2024)
        for _ in range(400):
            inst = random_circulation(rng, rng.randint(1, 4), 6, 2)
            result = solve_circulation(inst)
            assert result.feasible == brute_feasible(inst)
            if result.feasible:
                assert is_feasible_flow(inst, result.flow)
            else:
                lower_in, upper_out = violating_cut_check(inst, result.cut)
                assert upper_out is not None and lower_in > upper_out


    def test_deterministic(self):
        rng = random.Random(99)
        for _ in range(200):
            n_vertices = rng.randint(1, 5)
            inst = random_circulation(rng, n_vertices, 7, 2)
            twin = build_circulation(n_vertices, [(a.tail, a.head, a.lower, a.upper) for a in inst.arcs])
            assert solve_circulation(inst) == solve_circulation(inst)
            assert solve_circulation(twin) == solve_circulation(inst)


class TestViolatingCutCheck:
    def test_two_cycle(self):
        inst = build_circulation(2, [(0, 1, 1, 1), (1, 0, 1, 1)])
        assert violating_cut_check(inst, {0}) == (1, 1)

    def test_empty_set(self):
        inst = build_circulation(2, [(0, 1, 1, 1), (1, 0, 1, 1)])
        assert violating_cut_check(inst, set()) == (0, 0)

    def test_unbounded_out_arc(self):
        inst = build_circulation(2, [(0, 1, 0, None)])
        assert violating_cut_check(inst, {0}) == (0, None)

    def test_vertex_out_of_range(self):
        inst = build_circulation(2, [(0, 1, 0, 1)])
        with pytest.raises(VertexOutOfRange):
            violating_cut_check(inst, {5})


@pytest.mark.slow
def test_circulation_sweep():
    rng = random.Random(7)
    for _ in range(10_000):
        n = rng.randint(1, 5)
        inst = random_circulation(rng, n, 8, 2)
        result = solve_circulation(inst)
        assert result.feasible == hoffman_feasible(inst)
        if not result.feasible:
            lower_in, upper_out = violating_cut_check(inst, result.cut)
            assert upper_out is not None and lower_in > upper_out
