"""
Brute-force ground truth and seeded instance generators.

Every oracle refuses inputs above the configured size limits instead of
sampling: an answer from here is exact or it is an InstanceTooLarge error.
"""

import logging
import math
import random
from collections import Counter, defaultdict
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from app.config import settings
from app.models import (
    BipartiteInstance,
    Coloring,
    GeneralizedPartitionMatroid,
    GeneratorParams,
    ListAssignment,
    ListColoringOutput,
    MatroidPair,
    OrderedContext,
)
from app.services.errors import InstanceTooLarge, MalformedInstance
from app.services.kernel import is_kernel
from app.services.matroid import build_gpm, span


logger = logging.getLogger(__name__)


def _guard_elements(count: int, what: str) -> None:
    if count > settings.BRUTE_MAX_ELEMENTS:
        raise InstanceTooLarge(
            f"{what} has {count} elements; the exhaustive oracle accepts at most "
            f"{settings.BRUTE_MAX_ELEMENTS}"
        )


def brute_coloring(p: MatroidPair, n_classes: int) -> Optional[Coloring]:
    """
    Exhaustively search for a coloring with n_classes common independent classes.

    Elements are placed in id order; element 0 always opens class 0 and a
    class is only opened once every earlier class is nonempty.
    """
    n = p.n_elements
    _guard_elements(n, "instance")
    if n == 0:
        return Coloring(classes=tuple(() for _ in range(n_classes)))
    if n_classes < 1:
        return None

    m1, m2 = p.m1, p.m2
    loads1 = [Counter() for _ in range(n_classes)]
    loads2 = [Counter() for _ in range(n_classes)]
    placed = [0] * n

    def place(element: int, opened: int) -> bool:
        if element == n:
            return True
        i, j = m1.part_index(element), m2.part_index(element)
        for k in range(min(opened + 1, n_classes)):
            if loads1[k][i] < m1.caps[i] and loads2[k][j] < m2.caps[j]:
                loads1[k][i] += 1
                loads2[k][j] += 1
                placed[element] = k
                if place(element + 1, max(opened, k + 1)):
                    return True
                loads1[k][i] -= 1
                loads2[k][j] -= 1
        return False

    if not place(0, 0):
        return None
    classes = [[] for _ in range(n_classes)]
    for element, k in enumerate(placed):
        classes[k].append(element)
    return Coloring(classes=tuple(tuple(k) for k in classes))


def brute_chi(p: MatroidPair) -> int:
    """
    Exact chromatic number of M1 ∩ M2 by exhaustive search.

    Tries k = max(⌈|P_i|/p_i⌉, ⌈|Q_j|/q_j⌉) upwards; no smaller k can work
    because each class holds at most p_i elements of P_i.

    Raises:
        InstanceTooLarge: Above BRUTE_MAX_ELEMENTS elements.
    """
    n = p.n_elements
    _guard_elements(n, "instance")
    if n == 0:
        return 0
    lower = max(
        max(math.ceil(Fraction(len(part), cap)) for part, cap in zip(m.parts, m.caps))
        for m in (p.m1, p.m2)
    )
    for k in range(lower, n + 1):
        if brute_coloring(p, k) is not None:
            logger.debug(f"brute_chi: {k} (search started at {lower})")
            return k
    raise MalformedInstance("no coloring found with one class per element")


def brute_expansion(m: GeneralizedPartitionMatroid) -> Fraction:
    """Δ(m) by its definition: max |span(S)| / |S| over nonempty S."""
    _guard_elements(m.n_elements, "matroid")
    best = Fraction(0)
    for size in range(1, m.n_elements + 1):
        for subset in combinations(range(m.n_elements), size):
            best = max(best, Fraction(len(span(m, subset)), size))
    return best


def brute_kernel(ctx: OrderedContext, ground: Iterable[int]) -> list[tuple[int, ...]]:
    """
    Every kernel of the ordered pair restricted to ground, by enumeration.

    Returns:
        Kernels as sorted tuples, smallest first then lexicographic.

    Raises:
        InstanceTooLarge: If ground exceeds BRUTE_MAX_ELEMENTS.
    """
    elements = sorted(set(ground))
    _guard_elements(len(elements), "ground set")
    kernels = []
    for size in range(len(elements) + 1):
        for subset in combinations(elements, size):
            if is_kernel(ctx, subset, elements):
                kernels.append(subset)
    return kernels


def brute_list_color(p: MatroidPair, la: ListAssignment) -> Optional[ListColoringOutput]:
    """
    Some respecting list coloring found by backtracking, or None if none exists.

    Elements are colored in id order trying tokens in lexicographic order, so
    the first assignment in that order wins.

    Raises:
        InstanceTooLarge: If the product of list sizes exceeds BRUTE_MAX_LIST_PRODUCT.
        MalformedInstance: If the number of lists differs from the ground set size.
    """
    n = p.n_elements
    if len(la.lists) != n:
        raise MalformedInstance(f"{len(la.lists)} lists for {n} elements")
    if math.prod(len(tokens) for tokens in la.lists) > settings.BRUTE_MAX_LIST_PRODUCT:
        raise InstanceTooLarge(
            f"list product exceeds {settings.BRUTE_MAX_LIST_PRODUCT} assignments"
        )

    m1, m2 = p.m1, p.m2
    loads: dict[str, tuple[Counter, Counter]] = defaultdict(lambda: (Counter(), Counter()))
    chosen = [""] * n
    options = [sorted(tokens) for tokens in la.lists]

    def assign(element: int) -> bool:
        if element == n:
            return True
        i, j = m1.part_index(element), m2.part_index(element)
        for token in options[element]:
            load1, load2 = loads[token]
            if load1[i] < m1.caps[i] and load2[j] < m2.caps[j]:
                load1[i] += 1
                load2[j] += 1
                chosen[element] = token
                if assign(element + 1):
                    return True
                load1[i] -= 1
                load2[j] -= 1
        return False

    if not assign(0):
        return None
    return ListColoringOutput(assignment=tuple(chosen))


def _random_partition(rng: random.Random, n: int, max_parts: int, max_cap: int) -> tuple[list[list[int]], list[int]]:
    count = rng.randint(1, min(max_parts, n))
    elements = list(range(n))
    rng.shuffle(elements)
    parts = [[element] for element in elements[:count]]
    for element in elements[count:]:
        parts[rng.randrange(count)].append(element)
    caps = [rng.randint(1, max_cap) for _ in range(count)]
    return parts, caps


def random_instance(gp: GeneratorParams) -> MatroidPair:
    """
    Seeded random matroid pair.

    Each side gets between 1 and max_parts nonempty parts (a random partition
    of the shuffled elements) with caps uniform in [1, max_cap].
    """
    rng = random.Random(gp.seed)
    parts1, caps1 = _random_partition(rng, gp.n_elements, gp.max_parts, gp.max_cap)
    parts2, caps2 = _random_partition(rng, gp.n_elements, gp.max_parts, gp.max_cap)
    return MatroidPair(
        m1=build_gpm(gp.n_elements, parts1, caps1),
        m2=build_gpm(gp.n_elements, parts2, caps2),
    )


def random_bipartite(
    n_left: int,
    n_right: int,
    n_edges: int,
    max_cap: int = 1,
    seed: int = 0
) -> BipartiteInstance:
    """Seeded random bipartite multigraph; isolated vertices are possible."""
    rng = random.Random(seed)
    edges = tuple((rng.randrange(n_left), rng.randrange(n_right)) for _ in range(n_edges))
    return BipartiteInstance(
        left_caps=tuple(rng.randint(1, max_cap) for _ in range(n_left)),
        right_caps=tuple(rng.randint(1, max_cap) for _ in range(n_right)),
        edges=edges,
    )


def random_lists(n_elements: int, size: int, palette_size: int, seed: int = 0) -> ListAssignment:
    """Seeded lists of `size` distinct tokens c0..c{palette_size-1} per element."""
    if size > palette_size:
        raise MalformedInstance(f"list size {size} exceeds palette size {palette_size}")
    rng = random.Random(seed)
    palette = [f"c{index}" for index in range(palette_size)]
    return ListAssignment(lists=tuple(tuple(rng.sample(palette, size)) for _ in range(n_elements)))
