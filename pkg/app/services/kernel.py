"""
Ordered matroid pairs, domination and kernels.

A kernel of two ordered generalized partition matroids on a ground set is a
common independent set K such that every element is in K or is blocked on one
side by cap-many elements of K from its part that all sit below it in that
side's order. Kernels are found by deferred acceptance: parts on the proposing
side offer their best unrejected elements, parts on the other side hold their
best offers up to their cap and reject the rest for good.
"""

import logging
from collections import defaultdict
from typing import Iterable, Sequence

from app.config import settings
from app.models import (
    Coloring,
    KernelResult,
    MatroidPair,
    OrderedContext,
    VerificationReport,
    Violation,
    ViolationKind,
)
from app.services.errors import (
    ElementOutOfRange,
    IncompleteColoring,
    InvalidPartial,
    MalformedInstance,
    NoKernelFound,
)
from app.services.matroid import is_common_independent, part_counts


logger = logging.getLogger(__name__)


def canonical_orders(p: MatroidPair, coloring: Coloring) -> OrderedContext:
    """
    Label elements class by class: N_1 gets 1..|N_1|, N_2 the next block, and
    so on, ascending element id inside a block.

    Raises:
        IncompleteColoring: If the classes overlap or miss an element.
        InvalidPartial: If a class is not common independent.
    """
    labels = [0] * p.n_elements
    label = 1
    for k, members in enumerate(coloring.classes):
        if not is_common_independent(p, members):
            raise InvalidPartial(f"class {k} is not common independent")
        for element in sorted(members):
            if labels[element]:
                raise IncompleteColoring(f"element {element} appears in more than one class")
            labels[element] = label
            label += 1
    if label != p.n_elements + 1:
        missing = [v for v, value in enumerate(labels) if not value]
        raise IncompleteColoring(f"coloring leaves elements {missing} uncolored")
    return OrderedContext(pair=p, labels=tuple(labels))


def ordered_context_from_labels(p: MatroidPair, labels: Sequence[int]) -> OrderedContext:
    """
    Ordered context from an explicit label permutation (labels[v] in 1..n).

    Raises:
        MalformedInstance: If labels is not a permutation of 1..n.
    """
    n = p.n_elements
    if len(labels) != n or sorted(labels) != list(range(1, n + 1)):
        raise MalformedInstance(f"labels must be a permutation of 1..{n}")
    return OrderedContext(pair=p, labels=tuple(labels))


def _ground_set(ctx: OrderedContext, ground: Iterable[int]) -> set[int]:
    elements = set(ground)
    for element in elements:
        if not 0 <= element < ctx.pair.n_elements:
            raise ElementOutOfRange(f"element {element} is outside 0..{ctx.pair.n_elements - 1}")
    return elements


def dominates(
    ctx: OrderedContext,
    side: int,
    d: Iterable[int],
    v: int,
    ground: Iterable[int]
) -> bool:
    """
    True iff d dominates v on `side` within `ground`.

    For a generalized partition matroid this means v ∈ d, or d holds at least
    cap-many elements of v's part that are all below v in the side's order.

    Raises:
        ElementOutOfRange: If d or v lie outside ground.
    """
    ground_set = _ground_set(ctx, ground)
    blockers = set(d)
    if v not in ground_set or not blockers <= ground_set:
        raise ElementOutOfRange(f"element {v} or the dominating set lies outside the ground set")
    if v in blockers:
        return True
    m = ctx.pair.side(side)
    part = m.part_index(v)
    below = sum(1 for u in blockers if m.part_index(u) == part and ctx.less(side, u, v))
    return below >= m.caps[part]


def _dominated_sides(ctx: OrderedContext, k: set[int], v: int) -> tuple[bool, bool]:
    if v in k:
        return True, True
    result = []
    for side in (1, 2):
        m = ctx.pair.side(side)
        part = m.part_index(v)
        below = sum(1 for u in k if m.part_index(u) == part and ctx.less(side, u, v))
        result.append(below >= m.caps[part])
    return result[0], result[1]


def is_kernel(ctx: OrderedContext, k: Iterable[int], ground: Iterable[int]) -> bool:
    """
    True iff k ⊆ ground is common independent and dominates every element of
    ground on side 1 or side 2.
    """
    ground_set = _ground_set(ctx, ground)
    kernel = _ground_set(ctx, k)
    if not kernel <= ground_set or not is_common_independent(ctx.pair, kernel):
        return False
    return all(any(_dominated_sides(ctx, kernel, v)) for v in ground_set)


def verify_kernel(ctx: OrderedContext, k: Iterable[int], ground: Iterable[int]) -> VerificationReport:
    """Like is_kernel, but lists every overfull part and undominated element."""
    ground_set = _ground_set(ctx, ground)
    kernel = set(k)
    violations: list[Violation] = []

    outside = sorted(kernel - ground_set)
    if outside:
        violations.append(Violation(
            kind=ViolationKind.UNKNOWN_ELEMENT,
            message=f"kernel elements {outside} are not in the ground set",
            elements=tuple(outside),
        ))
    kernel &= ground_set

    for side in (1, 2):
        m = ctx.pair.side(side)
        for part, count in sorted(part_counts(m, kernel).items()):
            if count > m.caps[part]:
                violations.append(Violation(
                    kind=ViolationKind.OVERFULL_PART,
                    message=f"kernel holds {count} elements of part {part} on side {side} (cap {m.caps[part]})",
                    elements=tuple(sorted(kernel & set(m.parts[part]))),
                    side=side, part=part,
                ))

    for v in sorted(ground_set):
        if not any(_dominated_sides(ctx, kernel, v)):
            violations.append(Violation(
                kind=ViolationKind.UNDOMINATED,
                message=f"element {v} is dominated on neither side",
                elements=(v,),
            ))
    return VerificationReport.from_violations(violations)


def find_kernel(
    ctx: OrderedContext,
    ground: Iterable[int],
    proposing_side: int = 1
) -> KernelResult:
    """
    Kernel of the two ordered matroids restricted to ground, by deferred acceptance.

    Each part of the proposing side offers its cap-many lowest unrejected
    elements; each part of the other side keeps its cap-many lowest offers in
    its own order and permanently rejects the rest. The loop stops in the
    first round without rejections and returns the offered set.

    Args:
        ctx: Pair plus orders.
        ground: Elements to restrict to.
        proposing_side: 1 (default) or 2.

    Returns:
        KernelResult with the kernel, round count and rejection order.

    Raises:
        NoKernelFound: If the loop overruns its bound or the result is not a kernel.
    """
    ground_set = _ground_set(ctx, ground)
    receiving_side = 3 - proposing_side
    proposer = ctx.pair.side(proposing_side)
    receiver = ctx.pair.side(receiving_side)

    queues: dict[int, list[int]] = defaultdict(list)
    for element in ground_set:
        queues[proposer.part_index(element)].append(element)
    for part in queues:
        queues[part].sort(key=ctx.sort_key(proposing_side))

    rejected: set[int] = set()
    trace: list[int] = []
    rounds = 0
    while True:
        rounds += 1
        if rounds > len(ground_set) + 1:
            raise NoKernelFound(f"deferred acceptance exceeded {len(ground_set) + 1} rounds")

        offers: dict[int, list[int]] = defaultdict(list)
        for part in sorted(queues):
            open_elements = [u for u in queues[part] if u not in rejected]
            for u in open_elements[:proposer.caps[part]]:
                offers[receiver.part_index(u)].append(u)

        new_rejects: list[int] = []
        for part in sorted(offers):
            held = sorted(offers[part], key=ctx.sort_key(receiving_side))
            new_rejects.extend(held[receiver.caps[part]:])

        if not new_rejects:
            kernel = sorted(u for held in offers.values() for u in held)
            break
        rejected.update(new_rejects)
        trace.extend(new_rejects)
        logger.debug(f"find_kernel round {rounds}: rejected {new_rejects}")

    if settings.CHECK_INVARIANTS and not is_kernel(ctx, kernel, ground_set):
        raise NoKernelFound(f"deferred acceptance returned a non-kernel {kernel}")

    logger.debug(f"find_kernel: |ground|={len(ground_set)}, |K|={len(kernel)}, rounds={rounds}")
    return KernelResult(kernel=tuple(kernel), rounds=rounds, rejected=tuple(trace))
