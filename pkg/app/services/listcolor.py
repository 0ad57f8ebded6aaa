"""
List coloring of the intersection of two generalized partition matroids.

Starting from an optimal coloring N_1..N_C, elements are labeled class by
class and ordered ascending (side 1) and descending (side 2) by label. Then,
repeatedly, an element v with the largest remaining list budget T(v) picks
its smallest color c; the elements still listing c form F_c, a kernel K of
F_c receives c, and c is struck from the lists of F_c minus K.

The per-element counters t(v) <= T(v) are bookkeeping only: they never steer a
choice, but after each step the two Γ bounds

    |Γ1(v)| <= t(v) * p_i(v) - 1
    |Γ2(v)| <= (T(v) - t(v) + 1) * q_j(v) - 1

are asserted for every remaining element, which is what guarantees that lists
of size χ never run dry.
"""

import logging
from collections import defaultdict
from typing import Iterable

from app.config import settings
from app.models import (
    BipartiteInstance,
    ListAssignment,
    ListColoringOutput,
    ListColorState,
    MatroidPair,
    OrderedContext,
    VerificationReport,
    Violation,
    ViolationKind,
)
from app.services.chromatic import chi_of_pair, drop_isolated, optimal_coloring
from app.services.errors import (
    ElementOutOfRange,
    InternalInvariantViolated,
    ListTooShort,
    MalformedInstance,
)
from app.services.kernel import canonical_orders, dominates, find_kernel
from app.services.matroid import from_bipartite, part_counts


logger = logging.getLogger(__name__)


def gamma_sets(ctx: OrderedContext, ground: Iterable[int], v: int) -> tuple[set[int], set[int]]:
    """
    (Γ1, Γ2) of v within ground: elements of v's P-part below v in <_1 and
    elements of v's Q-part below v in <_2.

    Raises:
        ElementOutOfRange: If v is not in ground.
    """
    ground_set = set(ground)
    if v not in ground_set or not 0 <= v < ctx.pair.n_elements:
        raise ElementOutOfRange(f"element {v} is not in the ground set")
    m1, m2 = ctx.pair.m1, ctx.pair.m2
    i, j = m1.part_index(v), m2.part_index(v)
    gamma1 = {z for z in ground_set if m1.part_index(z) == i and ctx.less(1, z, v)}
    gamma2 = {z for z in ground_set if m2.part_index(z) == j and ctx.less(2, z, v)}
    return gamma1, gamma2


def check_ledger(ctx: OrderedContext, state: ListColorState) -> None:
    """
    Assert the counters and Γ bounds for every remaining element.

    Raises:
        InternalInvariantViolated: On the first element breaking a bound.
    """
    m1, m2 = ctx.pair.m1, ctx.pair.m2
    for v in sorted(state.remaining):
        t, T = state.t[v], state.T[v]
        if not 1 <= t <= T:
            raise InternalInvariantViolated(f"element {v}: counters t={t}, T={T} out of order")
        if T != len(state.lists[v]):
            raise InternalInvariantViolated(
                f"element {v}: T={T} but {len(state.lists[v])} colors remain"
            )
        if not settings.CHECK_INVARIANTS:
            continue
        gamma1, gamma2 = gamma_sets(ctx, state.remaining, v)
        p = m1.caps[m1.part_index(v)]
        q = m2.caps[m2.part_index(v)]
        if len(gamma1) > (t - 1) * p + p - 1:
            raise InternalInvariantViolated(
                f"element {v}: |Γ1|={len(gamma1)} exceeds {(t - 1) * p + p - 1} (t={t}, p={p})"
            )
        if len(gamma2) > (T - t) * q + q - 1:
            raise InternalInvariantViolated(
                f"element {v}: |Γ2|={len(gamma2)} exceeds {(T - t) * q + q - 1} (t={t}, T={T}, q={q})"
            )


def list_color(p: MatroidPair, la: ListAssignment) -> ListColoringOutput:
    """
    Choose a color from each element's list so that every color class is
    common independent.

    Lists longer than χ are cut down to their χ lexicographically smallest
    tokens before the run.

    Args:
        p: The matroid pair.
        la: One list per element, each of size at least χ(M1 ∩ M2).

    Returns:
        ListColoringOutput with one token per element.

    Raises:
        MalformedInstance: If the number of lists differs from the ground set size.
        ListTooShort: If some list has fewer than χ tokens.
        InternalInvariantViolated: If a ledger assertion fails.
    """
    n = p.n_elements
    if len(la.lists) != n:
        raise MalformedInstance(f"{len(la.lists)} lists for {n} elements")
    target = chi_of_pair(p)
    short = tuple(v for v, tokens in enumerate(la.lists) if len(tokens) < target)
    if short:
        raise ListTooShort(
            f"{len(short)} list(s) have fewer than {target} colors: elements {list(short)}",
            elements=short,
        )
    if n == 0:
        return ListColoringOutput(assignment=())

    coloring = optimal_coloring(p)
    ctx = canonical_orders(p, coloring)
    class_of = {v: k + 1 for k, members in enumerate(coloring.classes) for v in members}

    state = ListColorState(
        remaining=set(range(n)),
        lists={v: sorted(tokens)[:target] for v, tokens in enumerate(la.lists)},
        t=dict(class_of),
        T={v: target for v in range(n)},
    )
    check_ledger(ctx, state)

    assignment: list[str] = [""] * n
    iterations = 0
    while state.remaining:
        iterations += 1
        if iterations > n * target:
            raise InternalInvariantViolated(f"list coloring did not finish within {n * target} steps")

        top = max(state.T[u] for u in state.remaining)
        v = min(u for u in state.remaining if state.T[u] == top)
        color = state.lists[v][0]
        eligible = {u for u in state.remaining if color in state.lists[u]}
        kernel = set(find_kernel(ctx, eligible).kernel)
        if not kernel:
            raise InternalInvariantViolated(f"empty kernel for color {color!r}")

        for u in kernel:
            assignment[u] = color
            del state.lists[u], state.t[u], state.T[u]
        state.remaining -= kernel

        for u in sorted(eligible - kernel):
            state.lists[u].remove(color)
            if dominates(ctx, 1, kernel, u, eligible):
                state.t[u] -= 1
                state.T[u] -= 1
            elif dominates(ctx, 2, kernel, u, eligible):
                state.T[u] -= 1
            else:
                raise InternalInvariantViolated(f"element {u} is not dominated by the kernel")

        logger.debug(
            f"list_color step {iterations}: v={v}, color={color!r}, |F|={len(eligible)}, "
            f"|K|={len(kernel)}, {len(state.remaining)} left"
        )
        check_ledger(ctx, state)

    logger.info(f"List coloring: {n} elements, lists of size {target}, {iterations} kernel steps")
    return ListColoringOutput(assignment=tuple(assignment))


def verify_list_coloring(
    p: MatroidPair,
    la: ListAssignment,
    out: ListColoringOutput
) -> VerificationReport:
    """
    Check that every element got a color from its own list and every color
    class is common independent.
    """
    n = p.n_elements
    violations: list[Violation] = []

    if len(out.assignment) != n:
        kind = ViolationKind.MISSING_ELEMENT if len(out.assignment) < n else ViolationKind.UNKNOWN_ELEMENT
        violations.append(Violation(
            kind=kind,
            message=f"assignment has {len(out.assignment)} entries for {n} elements",
            elements=tuple(range(min(n, len(out.assignment)), max(n, len(out.assignment)))),
        ))

    fibers: dict[str, list[int]] = defaultdict(list)
    for v, token in enumerate(out.assignment[:n]):
        fibers[token].append(v)
        if v >= len(la.lists) or token not in la.lists[v]:
            violations.append(Violation(
                kind=ViolationKind.UNLISTED_COLOR,
                message=f"element {v} is colored {token!r}, which is not in its list",
                elements=(v,), color=token,
            ))

    for token in sorted(fibers):
        for side in (1, 2):
            m = p.side(side)
            for part, count in sorted(part_counts(m, fibers[token]).items()):
                if count > m.caps[part]:
                    violations.append(Violation(
                        kind=ViolationKind.OVERFULL_PART,
                        message=(
                            f"color {token!r} is used {count} times in part {part} on side {side} "
                            f"(cap {m.caps[part]})"
                        ),
                        elements=tuple(sorted(set(fibers[token]) & set(m.parts[part]))),
                        side=side, part=part, color=token,
                    ))

    return VerificationReport.from_violations(violations)


def list_edge_color(g: BipartiteInstance, la: ListAssignment) -> ListColoringOutput:
    """
    Choose a color per edge from its list so that every color class is a
    simple b-matching. Lists must have at least ⌈max deg(v)/b(v)⌉ tokens.
    """
    if not g.edges:
        return ListColoringOutput(assignment=())
    pair, element_to_edge = from_bipartite(drop_isolated(g))
    out = list_color(pair, la)
    assignment = [""] * len(g.edges)
    for element, token in enumerate(out.assignment):
        assignment[element_to_edge[element]] = token
    return ListColoringOutput(assignment=tuple(assignment))
