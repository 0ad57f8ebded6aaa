"""
Integral circulations with lower and upper arc bounds.

A lower-bounded circulation problem is reduced to a plain max-flow: each arc
keeps capacity upper - lower, and the forced lower flow becomes an excess at
its head and a deficit at its tail, served from a super source and drained to
a super sink. The circulation exists iff the max-flow saturates every source
arc. Otherwise the vertices reachable from the super source in the final
residual network form a set U with d(δ^in(U)) > c(δ^out(U)).
"""

import logging
from collections import deque
from typing import Iterable, Optional, Sequence

from app.models import CirculationArc, CirculationInstance, CirculationResult, check_arcs
from app.services.errors import InternalInfeasible, VertexOutOfRange


logger = logging.getLogger(__name__)


class ResidualNetwork:
    """
    Residual network for shortest-augmenting-path max-flow.

    Arcs are stored in pairs: arc 2k is the forward arc, 2k+1 its reverse, so
    `arc ^ 1` is always the partner.
    """

    def __init__(self, n_vertices: int):
        self.n_vertices = n_vertices
        self.head: list[int] = []
        self.residual: list[int] = []
        self.adjacency: list[list[int]] = [[] for _ in range(n_vertices)]

    def add_arc(self, tail: int, head: int, capacity: int) -> int:
        """Add tail->head with the given capacity; returns the forward arc id."""
        arc = len(self.head)
        self.head.append(head)
        self.residual.append(capacity)
        self.adjacency[tail].append(arc)
        self.head.append(tail)
        self.residual.append(0)
        self.adjacency[head].append(arc + 1)
        return arc

    def pushed(self, arc: int) -> int:
        """Flow currently routed along forward arc `arc`."""
        return self.residual[arc ^ 1]

    def _shortest_path(self, source: int, sink: int) -> Optional[list[int]]:
        via: list[Optional[int]] = [None] * self.n_vertices
        seen = [False] * self.n_vertices
        seen[source] = True
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for arc in self.adjacency[u]:
                v = self.head[arc]
                if self.residual[arc] > 0 and not seen[v]:
                    seen[v] = True
                    via[v] = arc
                    if v == sink:
                        path = []
                        while v != source:
                            path.append(via[v])
                            v = self.head[via[v] ^ 1]
                        return path
                    queue.append(v)
        return None

    def max_flow(self, source: int, sink: int) -> int:
        """Augment along breadth-first shortest paths until none is left."""
        total = 0
        augmentations = 0
        while True:
            path = self._shortest_path(source, sink)
            if path is None:
                break
            bottleneck = min(self.residual[arc] for arc in path)
            for arc in path:
                self.residual[arc] -= bottleneck
                self.residual[arc ^ 1] += bottleneck
            total += bottleneck
            augmentations += 1
        logger.debug(f"max_flow: value={total} after {augmentations} augmentations")
        return total

    def reachable(self, source: int) -> set[int]:
        """Vertices reachable from source through arcs with residual capacity."""
        seen = {source}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for arc in self.adjacency[u]:
                v = self.head[arc]
                if self.residual[arc] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen


def build_circulation(
    n_vertices: int,
    arcs: Iterable[Sequence[Optional[int]]]
) -> CirculationInstance:
    """
    Validate and build a circulation instance from (tail, head, lower, upper) tuples.

    Raises:
        MalformedInstance: On a bad endpoint or lower > upper.
    """
    arc_models = tuple(
        CirculationArc.model_construct(tail=tail, head=head, lower=lower, upper=upper)
        for tail, head, lower, upper in arcs
    )
    check_arcs(n_vertices, arc_models)
    return CirculationInstance(n_vertices=n_vertices, arcs=arc_models)


def unbounded_stand_in(inst: CirculationInstance) -> int:
    """Capacity used in place of an unbounded upper: 1 + every finite bound."""
    return 1 + sum(arc.lower + (arc.upper or 0) for arc in inst.arcs)


def violating_cut_check(inst: CirculationInstance, u: Iterable[int]) -> tuple[int, Optional[int]]:
    """
    Evaluate both sides of the Hoffman inequality for the vertex set u.

    Returns:
        (d(δ^in(U)), c(δ^out(U))); the second value is None when an unbounded
        arc leaves U.

    Raises:
        VertexOutOfRange: If u names a vertex outside the instance.
    """
    inside = set(u)
    for vertex in inside:
        if not 0 <= vertex < inst.n_vertices:
            raise VertexOutOfRange(f"vertex {vertex} is outside 0..{inst.n_vertices - 1}")

    lower_in = 0
    upper_out: Optional[int] = 0
    for arc in inst.arcs:
        if arc.tail not in inside and arc.head in inside:
            lower_in += arc.lower
        elif arc.tail in inside and arc.head not in inside:
            if arc.upper is None:
                upper_out = None
            elif upper_out is not None:
                upper_out += arc.upper
    return lower_in, upper_out


def is_feasible_flow(inst: CirculationInstance, flow: Sequence[int]) -> bool:
    """True iff flow respects every arc's bounds and is conserved at every vertex."""
    if len(flow) != len(inst.arcs):
        return False
    balance = [0] * inst.n_vertices
    for arc, value in zip(inst.arcs, flow):
        if value < arc.lower or (arc.upper is not None and value > arc.upper):
            return False
        balance[arc.tail] -= value
        balance[arc.head] += value
    return all(b == 0 for b in balance)


def solve_circulation(inst: CirculationInstance) -> CirculationResult:
    """
    Find an integral circulation with lower <= flow <= upper on every arc.

    Args:
        inst: The instance; upper=None marks an unbounded arc.

    Returns:
        CirculationResult with the per-arc flow, or with a vertex set U
        satisfying d(δ^in(U)) > c(δ^out(U)) when no circulation exists.

    Raises:
        MalformedInstance: If the instance bounds or endpoints are invalid.
    """
    check_arcs(inst.n_vertices, inst.arcs)

    n = inst.n_vertices
    source, sink = n, n + 1
    stand_in = unbounded_stand_in(inst)
    network = ResidualNetwork(n + 2)
    excess = [0] * n

    arc_ids = []
    for arc in inst.arcs:
        upper = stand_in if arc.upper is None else arc.upper
        arc_ids.append(network.add_arc(arc.tail, arc.head, upper - arc.lower))
        excess[arc.head] += arc.lower
        excess[arc.tail] -= arc.lower

    demand = 0
    for vertex, amount in enumerate(excess):
        if amount > 0:
            network.add_arc(source, vertex, amount)
            demand += amount
        elif amount < 0:
            network.add_arc(vertex, sink, -amount)

    value = network.max_flow(source, sink)

    if value == demand:
        flow = tuple(
            arc.lower + network.pushed(arc_id)
            for arc, arc_id in zip(inst.arcs, arc_ids)
        )
        logger.debug(f"Circulation feasible on {n} vertices, {len(flow)} arcs")
        return CirculationResult(flow=flow)

    cut = tuple(sorted(v for v in network.reachable(source) if v < n))
    lower_in, upper_out = violating_cut_check(inst, cut)
    if upper_out is None or lower_in <= upper_out:
        raise InternalInfeasible(
            f"residual cut {cut} does not violate the Hoffman condition "
            f"({lower_in} <= {upper_out})"
        )
    logger.debug(
        f"Circulation infeasible: max-flow {value} < demand {demand}, "
        f"cut U={cut} with d(in)={lower_in} > c(out)={upper_out}"
    )
    return CirculationResult(cut=cut)
