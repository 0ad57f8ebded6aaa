import random

import pytest

from app.config import settings
from app.models import (
    Coloring,
    GeneratorParams,
    ListAssignment,
    ListColoringOutput,
    ListColorState,
    ViolationKind,
)
from app.services.chromatic import chi_of_pair, optimal_coloring
from app.services.errors import (
    ElementOutOfRange,
    InternalInvariantViolated,
    ListTooShort,
    MalformedInstance,
)
from app.services.kernel import canonical_orders
from app.services.listcolor import (
    check_ledger,
    gamma_sets,
    list_color,
    list_edge_color,
    verify_list_coloring,
)
from app.services.matroid import is_simple_b_matching
from app.services.oracle import random_instance, random_lists


def uniform_lists(n: int, tokens: list[str]) -> ListAssignment:
    return ListAssignment(lists=tuple(tuple(tokens) for _ in range(n)))


def fibers(out: ListColoringOutput) -> dict[str, list[int]]:
    grouped: dict[str, list[int]] = {}
    for v, token in enumerate(out.assignment):
        grouped.setdefault(token, []).append(v)
    return grouped


class TestGammaSets:
    @pytest.fixture
    def ctx(self, e1):
        return canonical_orders(e1, Coloring(classes=((0, 4, 5), (1, 3), (2,))))

    def test_last_label(self, ctx):
        # element 2 carries label 6
        assert gamma_sets(ctx, range(6), 2) == ({0, 1}, set())

    def test_first_label(self, ctx):
        gamma1, _ = gamma_sets(ctx, range(6), 0)
        assert gamma1 == set()

    def test_restricted_ground(self, ctx):
        assert gamma_sets(ctx, {1, 2, 5}, 2) == ({1}, set())

    def test_not_in_ground(self, ctx):
        with pytest.raises(ElementOutOfRange):
            gamma_sets(ctx, {0, 1}, 2)


class TestListColor:
    def test_e1_ordinary_lists(self, e1):
        lists = uniform_lists(6, ["c1", "c2", "c3"])
        out = list_color(e1, lists)
        assert verify_list_coloring(e1, lists, out).valid
        assert len(fibers(out)) <= 3

    def test_dinitz_gives_latin_square(self, dinitz):
        lists = uniform_lists(4, ["a", "b"])
        out = list_color(dinitz, lists)
        assert verify_list_coloring(dinitz, lists, out).valid
        # rows {0,1}, {2,3} and columns {0,2}, {1,3} each use both colors
        for u, v in [(0, 1), (2, 3), (0, 2), (1, 3)]:
            assert out.assignment[u] != out.assignment[v]

    def test_dinitz_with_different_lists(self, dinitz):
        lists = ListAssignment(lists=(("a", "b"), ("b", "c"), ("a", "c"), ("a", "b")))
        out = list_color(dinitz, lists)
        assert verify_list_coloring(dinitz, lists, out).valid

    def test_random_lists_on_e1(self, e1):
        for seed in range(100):
            lists = random_lists(6, 3, 9, seed=seed)
            assert verify_list_coloring(e1, lists, list_color(e1, lists)).valid

    def test_random_instances(self):
        for seed in range(40):
            pair = random_instance(GeneratorParams(n_elements=20, max_parts=5, max_cap=3, seed=seed))
            size = chi_of_pair(pair)
            lists = random_lists(pair.n_elements, size, 3 * size, seed=seed)
            assert verify_list_coloring(pair, lists, list_color(pair, lists)).valid

    def test_longer_lists_are_accepted(self, e1):
        lists = uniform_lists(6, ["z", "y", "x", "w", "v"])
        out = list_color(e1, lists)
        assert verify_list_coloring(e1, lists, out).valid
        # only the three smallest tokens are used
        assert set(out.assignment) <= {"v", "w", "x"}

    def test_short_lists(self, e1):
        lists = ListAssignment(lists=(("a", "b", "c"),) * 5 + (("a", "b"),))
        with pytest.raises(ListTooShort) as info:
            list_color(e1, lists)
        assert info.value.elements == (5,)

    def test_wrong_number_of_lists(self, e1):
        with pytest.raises(MalformedInstance):
            list_color(e1, uniform_lists(5, ["a", "b", "c"]))

    def test_ledger_checks_can_be_disabled(self, e1, monkeypatch):
        monkeypatch.setattr(settings, "CHECK_INVARIANTS", False)
        lists = uniform_lists(6, ["a", "b", "c"])
        assert verify_list_coloring(e1, lists, list_color(e1, lists)).valid


class TestCheckLedger:
    def test_initial_state_passes(self, e1):
        coloring = optimal_coloring(e1)
        ctx = canonical_orders(e1, coloring)
        t = {v: k + 1 for k, members in enumerate(coloring.classes) for v in members}
        state = ListColorState(
            remaining=set(range(6)),
            lists={v: ["a", "b", "c"] for v in range(6)},
            t=t,
            T={v: 3 for v in range(6)},
        )
        check_ledger(ctx, state)

    def test_counter_mismatch_fires(self, e1):
        ctx = canonical_orders(e1, Coloring(classes=((0, 4, 5), (1, 3), (2,))))
        state = ListColorState(
            remaining={0},
            lists={0: ["a", "b"]},
            t={0: 1},
            T={0: 3},
        )
        with pytest.raises(InternalInvariantViolated):
            check_ledger(ctx, state)

    def test_gamma_bound_fires(self, e1):
        # element 2 has two elements of its cap-1 part below it but t=1 allows none
        ctx = canonical_orders(e1, Coloring(classes=((0, 4, 5), (1, 3), (2,))))
        state = ListColorState(
            remaining={0, 1, 2},
            lists={0: ["a"], 1: ["a", "b"], 2: ["a", "b", "c"]},
            t={0: 1, 1: 2, 2: 1},
            T={0: 1, 1: 2, 2: 3},
        )
        with pytest.raises(InternalInvariantViolated):
            check_ledger(ctx, state)


class TestVerifyListColoring:
    def test_same_color_in_cap_one_part(self, e1):
        lists = uniform_lists(6, ["a", "b", "c"])
        out = ListColoringOutput(assignment=("a", "a", "b", "c", "b", "c"))
        report = verify_list_coloring(e1, lists, out)
        assert not report.valid
        overfull = [v for v in report.violations if v.kind == ViolationKind.OVERFULL_PART]
        assert overfull[0].side == 1 and overfull[0].part == 0 and overfull[0].color == "a"

    def test_unlisted_token(self, e1):
        lists = uniform_lists(6, ["a", "b", "c"])
        out = ListColoringOutput(assignment=("a", "b", "c", "b", "a", "z"))
        report = verify_list_coloring(e1, lists, out)
        assert [v.elements for v in report.violations if v.kind == ViolationKind.UNLISTED_COLOR] == [(5,)]

    def test_missing_assignment(self, e1):
        lists = uniform_lists(6, ["a", "b", "c"])
        report = verify_list_coloring(e1, lists, ListColoringOutput(assignment=("a", "b")))
        assert report.violations[0].kind == ViolationKind.MISSING_ELEMENT


class TestListEdgeColor:
    def test_k33_with_random_lists(self, k33):
        rng = random.Random(3)
        palette = ["r", "g", "b", "y", "k"]
        for _ in range(20):
            lists = ListAssignment(lists=tuple(tuple(rng.sample(palette, 3)) for _ in range(9)))
            out = list_edge_color(k33, lists)
            for v, token in enumerate(out.assignment):
                assert token in lists.lists[v]
            for token, edges in fibers(out).items():
                assert is_simple_b_matching(k33, edges)
