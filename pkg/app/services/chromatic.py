"""
Chromatic number and optimal coloring of the intersection of two matroids.

χ(M1 ∩ M2) = max(⌈Δ(M1)⌉, ⌈Δ(M2)⌉) where Δ(M) = max |P_i| / p_i. The
coloring is built by greedy packing into χ classes followed by one
augmentation per uncovered element: when no class can take v directly, two
classes with slack at v's P-part and Q-part are re-split through an integral
circulation so that together they also cover v.
"""

import logging
import math
from fractions import Fraction
from typing import Optional

from app.models import (
    AugmentingNetwork,
    BipartiteInstance,
    CirculationArc,
    CirculationInstance,
    Coloring,
    GeneralizedPartitionMatroid,
    MatroidPair,
    VerificationReport,
    Violation,
    ViolationKind,
)
from app.services.circulation import solve_circulation
from app.services.errors import (
    AlreadyCovered,
    ElementOutOfRange,
    InternalInfeasible,
    InvalidPartial,
)
from app.services.matroid import from_bipartite, is_common_independent, part_counts


logger = logging.getLogger(__name__)


def expansion_number(m: GeneralizedPartitionMatroid) -> Fraction:
    """Δ(m) = max |P_i| / p_i as an exact rational (0 for an empty ground set)."""
    if not m.parts:
        return Fraction(0)
    return max(Fraction(len(part), cap) for part, cap in zip(m.parts, m.caps))


def delta_witness(m: GeneralizedPartitionMatroid) -> Optional[int]:
    """
    Smallest index of a part attaining Δ(m), or None for an empty ground set.

    Any coloring puts at most p_i elements of that part in each class, so it
    needs at least ⌈|P_i| / p_i⌉ classes.
    """
    if not m.parts:
        return None
    ratios = [Fraction(len(part), cap) for part, cap in zip(m.parts, m.caps)]
    return ratios.index(max(ratios))



def chi_of_gpm(m: GeneralizedPartitionMatroid) -> int:
    """χ(m) = ⌈Δ(m)⌉."""
    return math.ceil(expansion_number(m))


def chi_of_pair(p: MatroidPair) -> int:
    """χ(M1 ∩ M2) = max(χ(M1), χ(M2))."""
    return max(chi_of_gpm(p.m1), chi_of_gpm(p.m2))


def format_fraction(value: Fraction) -> str:
    """Render a rational as 'numerator/denominator', keeping '/1'."""
    return f"{value.numerator}/{value.denominator}"


class _ClassLoads:
    """Per-class part counts on both sides of a pair."""

    def __init__(self, p: MatroidPair, classes: list[list[int]]):
        self.p = p
        self.side1 = [part_counts(p.m1, k) for k in classes]
        self.side2 = [part_counts(p.m2, k) for k in classes]

    def has_room(self, side: int, k: int, element: int) -> bool:
        m = self.p.side(side)
        loads = self.side1 if side == 1 else self.side2
        part = m.part_index(element)
        return loads[k][part] < m.caps[part]

    def add(self, k: int, element: int) -> None:
        self.side1[k][self.p.m1.part_index(element)] += 1
        self.side2[k][self.p.m2.part_index(element)] += 1


def _check_partial(p: MatroidPair, partial: Coloring) -> set[int]:
    covered: dict[int, int] = {}
    for k, members in enumerate(partial.classes):
        for element in members:
            if not 0 <= element < p.n_elements:
                raise InvalidPartial(f"class {k} names element {element} outside the ground set")
            if element in covered:
                raise InvalidPartial(f"element {element} is in class {covered[element]} and class {k}")
            covered[element] = k
        if not is_common_independent(p, members):
            raise InvalidPartial(f"class {k} is not common independent")
    return set(covered)


def build_augmenting_network(
    p: MatroidPair,
    partial: Coloring,
    v: int,
    alpha: int,
    beta: int,
    include_new: bool = True
) -> AugmentingNetwork:
    """
    Digraph whose integral circulations re-split N_alpha ∪ N_beta (∪ {v}).

    Vertices are s (0), t (1), the P-parts meeting N_alpha ∪ N_beta ∪ {v} and
    the Q-parts meeting it. Each element u of N_alpha ∪ N_beta gives an arc
    P_i(u) -> Q_j(u) with bounds [0, 1]; s -> P_l has bounds
    [deg_alpha + deg_beta - p_l, p_l], Q_r -> t likewise with q_r, and t -> s
    is unbounded. With include_new the arc for v is added and the two star
    arcs at v's parts have their lower bound raised by one.

    Negative lower bounds are clamped at 0: conservation at a part vertex
    already forces a nonnegative value on its star arc.
    """
    n_alpha = set(partial.classes[alpha])
    n_beta = set(partial.classes[beta])
    members = sorted(n_alpha | n_beta)
    touched = members + [v]

    left_parts = sorted({p.m1.part_index(u) for u in touched})
    right_parts = sorted({p.m2.part_index(u) for u in touched})
    left_vertex = {part: 2 + index for index, part in enumerate(left_parts)}
    right_vertex = {part: 2 + len(left_parts) + index for index, part in enumerate(right_parts)}

    deg_alpha_1 = part_counts(p.m1, n_alpha)
    deg_beta_1 = part_counts(p.m1, n_beta)
    deg_alpha_2 = part_counts(p.m2, n_alpha)
    deg_beta_2 = part_counts(p.m2, n_beta)
    i, j = p.m1.part_index(v), p.m2.part_index(v)

    arcs: list[CirculationArc] = []
    flow: list[int] = []
    arc_elements: dict[int, int] = {}

    def add(tail: int, head: int, lower: int, upper: Optional[int], induced: int) -> int:
        arcs.append(CirculationArc(tail=tail, head=head, lower=max(0, lower), upper=upper))
        flow.append(induced)
        return len(arcs) - 1

    for u in members:
        index = add(
            left_vertex[p.m1.part_index(u)], right_vertex[p.m2.part_index(u)],
            0, 1, 1 if u in n_alpha else 0
        )
        arc_elements[index] = u
    if include_new:
        arc_elements[add(left_vertex[i], right_vertex[j], 0, 1, 0)] = v

    for part in left_parts:
        bump = 1 if include_new and part == i else 0
        cap = p.m1.caps[part]
        add(0, left_vertex[part], deg_alpha_1[part] + deg_beta_1[part] + bump - cap, cap,
            deg_alpha_1[part])
    for part in right_parts:
        bump = 1 if include_new and part == j else 0
        cap = p.m2.caps[part]
        add(right_vertex[part], 1, deg_alpha_2[part] + deg_beta_2[part] + bump - cap, cap,
            deg_alpha_2[part])
    add(1, 0, 0, None, len(n_alpha))

    instance = CirculationInstance(n_vertices=2 + len(left_parts) + len(right_parts), arcs=tuple(arcs))
    return AugmentingNetwork(instance=instance, arc_elements=arc_elements, induced_flow=tuple(flow))


def augment_once(p: MatroidPair, partial: Coloring, v: int) -> Coloring:
    """
    Extend a partial coloring to cover one more element without adding classes.

    Args:
        p: The matroid pair.
        partial: Disjoint common independent classes.
        v: An uncovered element.

    Returns:
        A coloring with the same number of classes covering the old elements and v.

    Raises:
        InvalidPartial: If classes overlap, are not common independent, or no
            class has slack at v's parts (fewer than χ classes).
        AlreadyCovered: If v is already colored.
        InternalInfeasible: If the re-split circulation does not exist.
    """
    covered = _check_partial(p, partial)
    if not 0 <= v < p.n_elements:
        raise ElementOutOfRange(f"element {v} is outside 0..{p.n_elements - 1}")
    if v in covered:
        raise AlreadyCovered(f"element {v} is already colored")

    classes = [list(k) for k in partial.classes]
    loads = _ClassLoads(p, classes)

    for k in range(len(classes)):
        if loads.has_room(1, k, v) and loads.has_room(2, k, v):
            classes[k].append(v)
            logger.debug(f"augment_once: element {v} inserted directly into class {k}")
            return Coloring(classes=tuple(tuple(c) for c in classes))

    alpha = next((k for k in range(len(classes)) if loads.has_room(1, k, v)), None)
    beta = next((k for k in range(len(classes)) if loads.has_room(2, k, v)), None)
    if alpha is None or beta is None:
        side = 1 if alpha is None else 2
        raise InvalidPartial(
            f"no class has room for element {v} in its side-{side} part; "
            f"the coloring has fewer classes than the chromatic number"
        )

    network = build_augmenting_network(p, partial, v, alpha, beta)
    result = solve_circulation(network.instance)
    if not result.feasible:
        raise InternalInfeasible(
            f"no circulation re-splits classes {alpha} and {beta} with element {v}; cut={result.cut}"
        )

    kept = sorted(u for arc, u in network.arc_elements.items() if result.flow[arc] == 1)
    moved = sorted(u for arc, u in network.arc_elements.items() if result.flow[arc] == 0)
    if not (is_common_independent(p, kept) and is_common_independent(p, moved)):
        raise InternalInfeasible(f"re-split of classes {alpha} and {beta} is not common independent")

    classes[alpha] = kept
    classes[beta] = moved
    logger.debug(
        f"augment_once: element {v} placed by re-splitting classes {alpha} and {beta} "
        f"({len(kept)} + {len(moved)} elements)"
    )
    return Coloring(classes=tuple(tuple(c) for c in classes))


def greedy_packing(p: MatroidPair, n_classes: int) -> Coloring:
    """Insert elements in id order into the first class that accepts them."""
    classes: list[list[int]] = [[] for _ in range(n_classes)]
    loads = _ClassLoads(p, classes)
    for element in range(p.n_elements):
        for k in range(n_classes):
            if loads.has_room(1, k, element) and loads.has_room(2, k, element):
                classes[k].append(element)
                loads.add(k, element)
                break
    return Coloring(classes=tuple(tuple(c) for c in classes))


def optimal_coloring(p: MatroidPair) -> Coloring:
    """
    Color the ground set with exactly χ(M1 ∩ M2) common independent classes.

    Returns:
        A complete coloring; every element lies in exactly one class.
    """
    target = chi_of_pair(p)
    coloring = greedy_packing(p, target)
    uncovered = sorted(set(range(p.n_elements)) - coloring.covered())
    logger.debug(
        f"optimal_coloring: greedy packing covered {p.n_elements - len(uncovered)}/"
        f"{p.n_elements} elements in {target} classes"
    )
    for v in uncovered:
        coloring = augment_once(p, coloring, v)

    if len(coloring.covered()) != p.n_elements:
        raise InternalInfeasible("augmentation finished with uncovered elements")
    logger.info(
        f"Optimal coloring: {p.n_elements} elements in {target} classes "
        f"({len(uncovered)} augmentations)"
    )
    return coloring


def verify_coloring(
    p: MatroidPair,
    coloring: Coloring,
    require_optimal: bool = True
) -> VerificationReport:
    """
    Check a coloring against a pair.

    Reports elements outside the ground set, elements in several classes,
    uncovered elements, overfull parts per class and, when require_optimal,
    a class count different from χ.
    """
    violations: list[Violation] = []
    seen: dict[int, int] = {}

    for k, members in enumerate(coloring.classes):
        valid_members = []
        for element in members:
            if not 0 <= element < p.n_elements:
                violations.append(Violation(
                    kind=ViolationKind.UNKNOWN_ELEMENT,
                    message=f"class {k} names element {element} outside the ground set",
                    elements=(element,), color=str(k),
                ))
                continue
            if element in seen:
                violations.append(Violation(
                    kind=ViolationKind.DUPLICATE_ELEMENT,
                    message=f"element {element} appears in class {seen[element]} and class {k}",
                    elements=(element,), color=str(k),
                ))
            else:
                seen[element] = k
            valid_members.append(element)

        for side in (1, 2):
            m = p.side(side)
            for part, count in sorted(part_counts(m, valid_members).items()):
                if count > m.caps[part]:
                    violations.append(Violation(
                        kind=ViolationKind.OVERFULL_PART,
                        message=(
                            f"class {k} holds {count} elements of part {part} on side {side} "
                            f"(cap {m.caps[part]})"
                        ),
                        elements=tuple(sorted(set(valid_members) & set(m.parts[part]))),
                        side=side, part=part, color=str(k),
                    ))

    missing = sorted(set(range(p.n_elements)) - seen.keys())
    if missing:
        violations.append(Violation(
            kind=ViolationKind.MISSING_ELEMENT,
            message=f"{len(missing)} element(s) are not colored: {missing}",
            elements=tuple(missing),
        ))

    if require_optimal:
        target = chi_of_pair(p)
        if coloring.n_classes != target:
            side = 1 if chi_of_gpm(p.m1) == target else 2
            witness = delta_witness(p.side(side))
            message = f"coloring uses {coloring.n_classes} classes, the chromatic number is {target}"
            if witness is not None:
                message += f" (part {witness} on side {side} alone needs {target})"
            violations.append(Violation(
                kind=ViolationKind.CLASS_COUNT,
                message=message,
                side=side if witness is not None else None,
                part=witness,
            ))

    return VerificationReport.from_violations(violations)


def drop_isolated(g: BipartiteInstance) -> BipartiteInstance:
    """Remove vertices without edges, keeping edge order (and so edge indices)."""
    left_used = sorted({left for left, _ in g.edges})
    right_used = sorted({right for _, right in g.edges})
    left_index = {vertex: index for index, vertex in enumerate(left_used)}
    right_index = {vertex: index for index, vertex in enumerate(right_used)}
    return BipartiteInstance(
        left_caps=tuple(g.left_caps[vertex] for vertex in left_used),
        right_caps=tuple(g.right_caps[vertex] for vertex in right_used),
        edges=tuple((left_index[left], right_index[right]) for left, right in g.edges),
    )


def b_matching_chromatic_index(g: BipartiteInstance) -> int:
    """Minimum number of simple b-matchings covering E(G): ⌈max deg(v)/b(v)⌉."""
    if not g.edges:
        return 0
    pair, _ = from_bipartite(drop_isolated(g))
    return chi_of_pair(pair)


def b_matching_decomposition(g: BipartiteInstance) -> list[list[int]]:
    """
    Split the edges of g into the minimum number of simple b-matchings.

    Returns:
        One sorted list of edge indices per matching.
    """
    if not g.edges:
        return []
    pair, element_to_edge = from_bipartite(drop_isolated(g))
    coloring = optimal_coloring(pair)
    return [sorted(element_to_edge[u] for u in k) for k in coloring.classes]
