"""
Generalized partition matroids and their bipartite-multigraph form.

Independence, span and the correspondence between a matroid pair and a
bipartite multigraph with vertex capacities b, where common independent sets
are exactly the simple b-matchings.
"""

import logging
from collections import Counter
from typing import Iterable, Sequence

from app.models import (
    BipartiteInstance,
    GeneralizedPartitionMatroid,
    MatroidPair,
    check_bipartite,
    check_partition,
)
from app.services.errors import (
    EdgeIndexOutOfRange,
    ElementOutOfRange,
    IsolatedVertex,
    LengthMismatch,
)


logger = logging.getLogger(__name__)


def build_gpm(
    n_elements: int,
    parts: Sequence[Iterable[int]],
    caps: Sequence[int]
) -> GeneralizedPartitionMatroid:
    """
    Validate and build a generalized partition matroid.

    Args:
        n_elements: Ground set size; elements are 0..n_elements-1.
        parts: Disjoint nonempty parts covering the ground set.
        caps: Positive constraint per part.

    Returns:
        The matroid.

    Raises:
        OverlappingParts, UncoveredElement, NonPositiveCap, LengthMismatch, EmptyPart.
    """
    parts = [list(part) for part in parts]
    caps = list(caps)
    check_partition(n_elements, parts, caps)
    return GeneralizedPartitionMatroid(
        n_elements=n_elements,
        parts=tuple(tuple(sorted(part)) for part in parts),
        caps=tuple(caps),
    )


def build_pair(m1: GeneralizedPartitionMatroid, m2: GeneralizedPartitionMatroid) -> MatroidPair:
    """Pair two matroids, raising LengthMismatch if their ground sets differ."""
    if m1.n_elements != m2.n_elements:
        raise LengthMismatch(
            f"matroids disagree on the ground set: {m1.n_elements} vs {m2.n_elements}"
        )
    return MatroidPair(m1=m1, m2=m2)


def _check_elements(n_elements: int, s: Iterable[int]) -> set[int]:
    elements = set(s)
    for element in elements:
        if not 0 <= element < n_elements:
            raise ElementOutOfRange(f"element {element} is outside 0..{n_elements - 1}")
    return elements


def part_counts(m: GeneralizedPartitionMatroid, s: Iterable[int]) -> Counter:
    """
    Count the elements of s in each part.

    Returns:
        Counter mapping part index -> |s ∩ parts[i]|.

    Raises:
        ElementOutOfRange: If s names an element outside the ground set.
    """
    elements = _check_elements(m.n_elements, s)
    return Counter(m.part_index(element) for element in elements)


def is_independent(m: GeneralizedPartitionMatroid, s: Iterable[int]) -> bool:
    """True iff |s ∩ P_i| <= p_i for every part."""
    counts = part_counts(m, s)
    return all(count <= m.caps[index] for index, count in counts.items())


def is_common_independent(p: MatroidPair, s: Iterable[int]) -> bool:
    """True iff s is independent in both matroids of the pair."""
    elements = set(s)
    return is_independent(p.m1, elements) and is_independent(p.m2, elements)


def is_partition_matroid(m: GeneralizedPartitionMatroid) -> bool:
    """True iff every cap is 1."""
    return all(cap == 1 for cap in m.caps)


def span(m: GeneralizedPartitionMatroid, a: Iterable[int]) -> set[int]:
    """
    Set spanned by a.

    Per part: a ∩ P_i itself while it holds fewer than p_i elements, the whole
    of P_i once it reaches p_i.

    Raises:
        ElementOutOfRange: If a names an element outside the ground set.
    """
    elements = _check_elements(m.n_elements, a)
    counts = Counter(m.part_index(element) for element in elements)
    spanned = set(elements)
    for index, count in counts.items():
        if count >= m.caps[index]:
            spanned.update(m.parts[index])
    return spanned


def to_bipartite(p: MatroidPair) -> tuple[BipartiteInstance, tuple[int, ...]]:
    """
    Bipartite multigraph of a matroid pair.

    One left vertex per part of m1 (cap p_i), one right vertex per part of m2
    (cap q_j) and one edge per element joining its two parts.

    Returns:
        (graph, edge_to_element) where edge_to_element[e] is the element of edge e.
    """
    edges = tuple(
        (p.m1.part_index(element), p.m2.part_index(element))
        for element in range(p.n_elements)
    )
    graph = BipartiteInstance(left_caps=p.m1.caps, right_caps=p.m2.caps, edges=edges)
    logger.debug(
        f"to_bipartite: {len(graph.left_caps)} left, {len(graph.right_caps)} right, "
        f"{len(edges)} edges"
    )
    return graph, tuple(range(p.n_elements))


def build_bipartite(
    left_caps: Sequence[int],
    right_caps: Sequence[int],
    edges: Sequence[Sequence[int]]
) -> BipartiteInstance:
    """
    Validate and build a bipartite multigraph.

    Raises:
        NonPositiveCap, VertexOutOfRange.
    """
    edge_pairs = [(int(edge[0]), int(edge[1])) for edge in edges]
    check_bipartite(list(left_caps), list(right_caps), edge_pairs)
    return BipartiteInstance(
        left_caps=tuple(left_caps),
        right_caps=tuple(right_caps),
        edges=tuple(edge_pairs),
    )


def from_bipartite(g: BipartiteInstance) -> tuple[MatroidPair, tuple[int, ...]]:
    """
    Matroid pair on the edge set of g.

    The parts of m1 are the edge stars of left vertices with caps b(x), the
    parts of m2 the stars of right vertices with caps b(y).

    Returns:
        (pair, element_to_edge) where element_to_edge[u] is the edge of element u.

    Raises:
        IsolatedVertex: If some vertex has no incident edge.
    """
    left_stars: list[list[int]] = [[] for _ in g.left_caps]
    right_stars: list[list[int]] = [[] for _ in g.right_caps]
    for index, (left, right) in enumerate(g.edges):
        left_stars[left].append(index)
        right_stars[right].append(index)

    for side, stars in (("left", left_stars), ("right", right_stars)):
        for vertex, star in enumerate(stars):
            if not star:
                raise IsolatedVertex(f"{side} vertex {vertex} has no incident edge")

    n = len(g.edges)
    pair = MatroidPair(
        m1=build_gpm(n, left_stars, g.left_caps),
        m2=build_gpm(n, right_stars, g.right_caps),
    )
    return pair, tuple(range(n))


def is_simple_b_matching(g: BipartiteInstance, f: Iterable[int]) -> bool:
    """
    True iff every vertex meets at most b(v) edges of f.

    Raises:
        EdgeIndexOutOfRange: If f names an edge index outside g.
    """
    left_degree: Counter = Counter()
    right_degree: Counter = Counter()
    for edge in set(f):
        if not 0 <= edge < len(g.edges):
            raise EdgeIndexOutOfRange(f"edge index {edge} is outside 0..{len(g.edges) - 1}")
        left, right = g.edges[edge]
        left_degree[left] += 1
        right_degree[right] += 1
    return all(
        count <= g.left_caps[vertex] for vertex, count in left_degree.items()
    ) and all(
        count <= g.right_caps[vertex] for vertex, count in right_degree.items()
    )
