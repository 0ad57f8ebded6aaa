import random
from itertools import combinations

import pytest

from app.config import settings
from app.models import Coloring, GeneratorParams, ViolationKind
from app.services.chromatic import optimal_coloring
from app.services.errors import ElementOutOfRange, IncompleteColoring, InvalidPartial, MalformedInstance
from app.services.matroid import build_gpm, build_pair, is_independent
from app.services.kernel import (
    canonical_orders,
    dominates,
    find_kernel,
    is_kernel,
    ordered_context_from_labels,
    verify_kernel,
)
from app.services.oracle import brute_kernel, random_instance


E1_CLASSES = Coloring(classes=((0, 4, 5), (1, 3), (2,)))


def generic_dominates(ctx, side, d, v) -> bool:
    """v ∈ d, or some independent subset of d lying below v spans v."""
    if v in d:
        return True
    m = ctx.pair.side(side)
    below = [u for u in d if ctx.less(side, u, v)]
    for size in range(len(below) + 1):
        for subset in combinations(below, size):
            if is_independent(m, subset) and not is_independent(m, subset + (v,)):
                return True
    return False


@pytest.fixture
def e1_ctx(e1):
    return canonical_orders(e1, E1_CLASSES)


@pytest.fixture
def pair_ctx(same_part_pair):
    # element 0 is below element 1 in the first order
    return ordered_context_from_labels(same_part_pair, [1, 2])


class TestCanonicalOrders:
    def test_labels_follow_classes(self, e1_ctx):
        # 0->1, 4->2, 5->3, 1->4, 3->5, 2->6
        assert e1_ctx.labels == (1, 4, 6, 5, 2, 3)

    def test_single_class(self):
        pair = build_pair(build_gpm(2, [[0], [1]], [1, 1]), build_gpm(2, [[0, 1]], [2]))
        ctx = canonical_orders(pair, Coloring(classes=((0, 1),)))
        assert ctx.labels == (1, 2)

    def test_second_order_reverses_labels(self, e1_ctx):
        assert all(e1_ctx.less(2, 2, v) for v in range(6) if v != 2)
        assert e1_ctx.less(1, 0, 2) and not e1_ctx.less(2, 0, 2)

    def test_incomplete_coloring(self, e1):
        with pytest.raises(IncompleteColoring):
            canonical_orders(e1, Coloring(classes=((0, 4, 5), (1, 3))))

    def test_duplicate_element(self, e1):
        with pytest.raises(IncompleteColoring):
            canonical_orders(e1, Coloring(classes=((0, 4, 5), (1, 3), (2, 5))))

    def test_dependent_class(self, e1):
        with pytest.raises(InvalidPartial):
            canonical_orders(e1, Coloring(classes=((0, 1), (2, 3), (4, 5))))

    def test_labels_must_be_a_permutation(self, e1):
        with pytest.raises(MalformedInstance):
            ordered_context_from_labels(e1, [1, 2, 3, 4, 5, 5])


class TestDominates:
    def test_member(self, e1_ctx):
        assert dominates(e1_ctx, 1, {3}, 3, range(6))

    def test_cap_one_blocker_below(self, e1_ctx):
        # part {0,1,2} has cap 1 and 0 is below 1 in the first order
        assert dominates(e1_ctx, 1, {0}, 1, range(6))
        assert not dominates(e1_ctx, 1, {1}, 0, range(6))

    def test_cap_two_needs_two_blockers(self, e1_ctx):
        # part {3,4,5} has cap 2; labels 4->2, 5->3, 3->5
        assert not dominates(e1_ctx, 1, {4}, 3, range(6))
        assert dominates(e1_ctx, 1, {4, 5}, 3, range(6))

    def test_matches_generic_definition(self):
        rng = random.Random(8)
        for seed in range(60):
            pair = random_instance(GeneratorParams(n_elements=7, max_parts=3, max_cap=3, seed=seed))
            ctx = canonical_orders(pair, optimal_coloring(pair))
            for _ in range(40):
                ground = [v for v in range(7) if rng.random() < 0.8] or [0]
                d = {u for u in ground if rng.random() < 0.5}
                v = rng.choice(ground)
                for side in (1, 2):
                    assert dominates(ctx, side, d, v, ground) == generic_dominates(ctx, side, d, v)

    def test_outside_ground(self, e1_ctx):
        with pytest.raises(ElementOutOfRange):
            dominates(e1_ctx, 1, {0}, 1, {1, 2})


class TestKernel:
    def test_singleton(self, pair_ctx):
        assert is_kernel(pair_ctx, {0}, {0})
        assert find_kernel(pair_ctx, {0}).kernel == (0,)

    def test_two_elements_same_part(self, pair_ctx):
        assert is_kernel(pair_ctx, {0}, {0, 1})
        assert not is_kernel(pair_ctx, {1}, {0, 1})
        assert find_kernel(pair_ctx, {0, 1}).kernel == (0,)
        assert brute_kernel(pair_ctx, {0, 1}) == [(0,)]

    def test_empty_ground(self, e1_ctx):
        result = find_kernel(e1_ctx, set())
        assert result.kernel == ()
        assert result.rounds == 1

    def test_e1_full_ground(self, e1_ctx):
        result = find_kernel(e1_ctx, range(6))
        assert is_kernel(e1_ctx, result.kernel, range(6))
        assert tuple(result.kernel) in brute_kernel(e1_ctx, range(6))

    @pytest.mark.parametrize("side", [1, 2])
    def test_both_proposing_sides_give_kernels(self, e1_ctx, side):
        result = find_kernel(e1_ctx, range(6), proposing_side=side)
        assert is_kernel(e1_ctx, result.kernel, range(6))

    def test_rounds_bounded(self, e1_ctx):
        result = find_kernel(e1_ctx, range(6))
        assert result.rounds <= 7
        assert len(result.rejected) == len(set(result.rejected))

    def test_random_instances_match_brute_force(self):
        for seed in range(40):
            pair = random_instance(GeneratorParams(n_elements=8, max_parts=3, max_cap=2, seed=seed))
            ctx = canonical_orders(pair, optimal_coloring(pair))
            kernels = brute_kernel(ctx, range(pair.n_elements))
            assert kernels
            assert find_kernel(ctx, range(pair.n_elements)).kernel in kernels

    def test_unchecked_mode(self, e1_ctx, monkeypatch):
        monkeypatch.setattr(settings, "CHECK_INVARIANTS", False)
        assert is_kernel(e1_ctx, find_kernel(e1_ctx, range(6)).kernel, range(6))


class TestVerifyKernel:
    def test_valid(self, e1_ctx):
        kernel = find_kernel(e1_ctx, range(6)).kernel
        assert verify_kernel(e1_ctx, kernel, range(6)).valid

    def test_undominated_elements_are_listed(self, pair_ctx):
        report = verify_kernel(pair_ctx, {1}, {0, 1})
        assert not report.valid
        assert [v.elements for v in report.violations if v.kind == ViolationKind.UNDOMINATED] == [(0,)]

    def test_overfull_kernel(self, pair_ctx):
        report = verify_kernel(pair_ctx, {0, 1}, {0, 1})
        assert ViolationKind.OVERFULL_PART in {v.kind for v in report.violations}
