"""
Pydantic models for instances, colorings, kernels and reports.

All data structures for GPMColor are defined here with strict typing. Element
sets are stored as sorted tuples so that serialized output is deterministic.
"""

from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Iterable
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from app.services.errors import (
    OverlappingParts,
    UncoveredElement,
    NonPositiveCap,
    LengthMismatch,
    EmptyPart,
    VertexOutOfRange,
    MalformedInstance,
)


def check_partition(n_elements: int, parts: Sequence[Iterable[int]], caps: Sequence[int]) -> None:
    """
    Check that `parts` partitions 0..n_elements-1 and every cap is positive.

    Raises:
        LengthMismatch, EmptyPart, NonPositiveCap, OverlappingParts, UncoveredElement.
    """
    if n_elements < 0:
        raise MalformedInstance(f"element count must be nonnegative, got {n_elements}")
    if len(parts) != len(caps):
        raise LengthMismatch(f"{len(parts)} parts but {len(caps)} caps")

    owner: dict[int, int] = {}
    for index, (part, cap) in enumerate(zip(parts, caps)):
        members = list(part)
        if not members:
            raise EmptyPart(f"part {index} is empty")
        if cap < 1:
            raise NonPositiveCap(f"part {index} has cap {cap}; caps must be positive integers")
        for element in members:
            if not 0 <= element < n_elements:
                raise UncoveredElement(
                    f"part {index} names element {element} outside 0..{n_elements - 1}"
                )
            if element in owner:
                raise OverlappingParts(
                    f"element {element} appears in part {owner[element]} and part {index}"
                )
            owner[element] = index

    if len(owner) != n_elements:
        missing = min(set(range(n_elements)) - owner.keys())
        raise UncoveredElement(f"element {missing} belongs to no part")


def check_bipartite(
    left_caps: Sequence[int],
    right_caps: Sequence[int],
    edges: Sequence[tuple[int, int]]
) -> None:
    """
    Check caps are positive and every edge joins a left vertex to a right vertex.

    Raises:
        NonPositiveCap, VertexOutOfRange.
    """
    for side, caps in (("left", left_caps), ("right", right_caps)):
        for index, cap in enumerate(caps):
            if cap < 1:
                raise NonPositiveCap(f"{side} vertex {index} has cap {cap}")
    for index, (left, right) in enumerate(edges):
        if not 0 <= left < len(left_caps):
            raise VertexOutOfRange(f"edge {index} has left endpoint {left} out of range")
        if not 0 <= right < len(right_caps):
            raise VertexOutOfRange(f"edge {index} has right endpoint {right} out of range")


def check_arcs(n_vertices: int, arcs: Sequence["CirculationArc"]) -> None:
    """
    Check arc endpoints and bounds of a circulation instance.

    Raises:
        MalformedInstance: On a bad endpoint, negative bound or lower > upper.
    """
    if n_vertices < 0:
        raise MalformedInstance(f"vertex count must be nonnegative, got {n_vertices}")
    for index, arc in enumerate(arcs):
        if not (0 <= arc.tail < n_vertices and 0 <= arc.head < n_vertices):
            raise MalformedInstance(
                f"arc {index} ({arc.tail}->{arc.head}) has an endpoint outside 0..{n_vertices - 1}"
            )
        if arc.lower < 0 or (arc.upper is not None and arc.upper < 0):
            raise MalformedInstance(f"arc {index} has a negative bound")
        if arc.upper is not None and arc.lower > arc.upper:
            raise MalformedInstance(f"arc {index} has lower {arc.lower} > upper {arc.upper}")


class GeneralizedPartitionMatroid(BaseModel):
    """
    Generalized partition matroid on elements 0..n_elements-1.

    A set is independent iff it holds at most caps[i] elements of parts[i] for
    every i.

    Attributes:
        n_elements: Size of the ground set.
        parts: Disjoint nonempty parts covering the ground set (sorted tuples).
        caps: Positive integer constraint per part.
    """
    model_config = ConfigDict(frozen=True)

    n_elements: int = Field(..., ge=0, description="Number of ground-set elements")
    parts: tuple[tuple[int, ...], ...] = Field(..., description="Partition of the element ids")
    caps: tuple[int, ...] = Field(..., description="Constraint of each part")

    _part_of: tuple[int, ...] = PrivateAttr(default=())

    @field_validator("parts")
    @classmethod
    def sort_parts(cls, v: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        """Store every part as a sorted tuple."""
        return tuple(tuple(sorted(part)) for part in v)

    @model_validator(mode="after")
    def parts_form_partition(self) -> "GeneralizedPartitionMatroid":
        check_partition(self.n_elements, self.parts, self.caps)
        return self

    def model_post_init(self, __context) -> None:
        part_of = [0] * self.n_elements
        for index, part in enumerate(self.parts):
            for element in part:
                part_of[element] = index
        self._part_of = tuple(part_of)

    def part_index(self, element: int) -> int:
        """Index of the part containing `element`."""
        return self._part_of[element]

    @property
    def n_parts(self) -> int:
        return len(self.parts)


class MatroidPair(BaseModel):
    """
    Two generalized partition matroids on the same ground set.

    Attributes:
        m1: The P-side matroid (parts P_i, caps p_i).
        m2: The Q-side matroid (parts Q_j, caps q_j).
    """
    model_config = ConfigDict(frozen=True)

    m1: GeneralizedPartitionMatroid = Field(..., description="First matroid")
    m2: GeneralizedPartitionMatroid = Field(..., description="Second matroid")

    @model_validator(mode="after")
    def same_ground_set(self) -> "MatroidPair":
        if self.m1.n_elements != self.m2.n_elements:
            raise LengthMismatch(
                f"matroids disagree on the ground set: {self.m1.n_elements} vs {self.m2.n_elements}"
            )
        return self

    @property
    def n_elements(self) -> int:
        return self.m1.n_elements

    def side(self, side: int) -> GeneralizedPartitionMatroid:
        """Return m1 for side 1 and m2 for side 2."""
        if side not in (1, 2):
            raise ValueError(f"side must be 1 or 2, got {side}")
        return self.m1 if side == 1 else self.m2


class BipartiteInstance(BaseModel):
    """
    Bipartite multigraph with vertex capacities b.

    Attributes:
        left_caps: b(x) for each left vertex.
        right_caps: b(y) for each right vertex.
        edges: (left, right) pairs; parallel edges are told apart by index.
    """
    model_config = ConfigDict(frozen=True)

    left_caps: tuple[int, ...] = Field(..., description="Capacities of the left vertices")
    right_caps: tuple[int, ...] = Field(..., description="Capacities of the right vertices")
    edges: tuple[tuple[int, int], ...] = Field(default=(), description="Edge list (multigraph)")

    @model_validator(mode="after")
    def endpoints_in_range(self) -> "BipartiteInstance":
        check_bipartite(self.left_caps, self.right_caps, self.edges)
        return self


class Coloring(BaseModel):
    """
    Ordered list of disjoint color classes N_1..N_C.

    Attributes:
        classes: One sorted tuple of element ids per color.
    """
    model_config = ConfigDict(frozen=True)

    classes: tuple[tuple[int, ...], ...] = Field(..., description="Color classes")

    @field_validator("classes")
    @classmethod
    def sort_classes(cls, v: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(k)) for k in v)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def covered(self) -> set[int]:
        """Union of all classes."""
        return {element for k in self.classes for element in k}


class CirculationArc(BaseModel):
    """Arc tail->head with integral bounds; upper=None means unbounded."""
    model_config = ConfigDict(frozen=True)

    tail: int
    head: int
    lower: int = 0
    upper: Optional[int] = None


class CirculationInstance(BaseModel):
    """
    Digraph with per-arc lower and upper bounds.

    Attributes:
        n_vertices: Vertices are 0..n_vertices-1.
        arcs: Arcs in order; duplicates allowed.
    """
    model_config = ConfigDict(frozen=True)

    n_vertices: int = Field(..., ge=0)
    arcs: tuple[CirculationArc, ...] = Field(default=())

    @model_validator(mode="after")
    def bounds_consistent(self) -> "CirculationInstance":
        check_arcs(self.n_vertices, self.arcs)
        return self


class CirculationResult(BaseModel):
    """
    Either a feasible integral flow (one value per arc) or a violating cut U.

    Attributes:
        flow: Per-arc flow when feasible.
        cut: Vertex set U with d(δ^in(U)) > c(δ^out(U)) when infeasible.
    """
    model_config = ConfigDict(frozen=True)

    flow: Optional[tuple[int, ...]] = None
    cut: Optional[tuple[int, ...]] = None

    @model_validator(mode="after")
    def exactly_one(self) -> "CirculationResult":
        if (self.flow is None) == (self.cut is None):
            raise ValueError("a circulation result carries exactly one of flow or cut")
        return self

    @property
    def feasible(self) -> bool:
        return self.flow is not None


class AugmentingNetwork(BaseModel):
    """
    Circulation instance used to merge two color classes with an uncovered element.

    Attributes:
        instance: The digraph with bounds. Vertex 0 is s, vertex 1 is t.
        arc_elements: Arc index -> element represented, for every part-to-part arc.
        induced_flow: Flow induced by the current classes (class alpha on value 1).
    """
    model_config = ConfigDict(frozen=True)

    instance: CirculationInstance
    arc_elements: dict[int, int]
    induced_flow: tuple[int, ...]


class OrderedContext(BaseModel):
    """
    A matroid pair with the two linear orders derived from a labeling.

    u <_1 v iff label(u) < label(v); u <_2 v iff label(u) > label(v).

    Attributes:
        pair: The matroid pair.
        labels: labels[v] is the label of element v, a permutation of 1..n.
    """
    model_config = ConfigDict(frozen=True)

    pair: MatroidPair
    labels: tuple[int, ...]

    @model_validator(mode="after")
    def labels_are_bijection(self) -> "OrderedContext":
        n = self.pair.n_elements
        if len(self.labels) != n or sorted(self.labels) != list(range(1, n + 1)):
            raise MalformedInstance(f"labels must be a permutation of 1..{n}")
        return self

    def less(self, side: int, u: int, v: int) -> bool:
        """True iff u is strictly below v in the order of `side`."""
        if side == 1:
            return self.labels[u] < self.labels[v]
        return self.labels[u] > self.labels[v]

    def sort_key(self, side: int):
        """Key function listing elements from the bottom of the side's order up."""
        if side == 1:
            return lambda v: self.labels[v]
        return lambda v: -self.labels[v]


class KernelResult(BaseModel):
    """
    Kernel found by deferred acceptance.

    Attributes:
        kernel: The kernel (sorted).
        rounds: Number of proposal rounds.
        rejected: Elements in the order they were permanently rejected.
    """
    model_config = ConfigDict(frozen=True)

    kernel: tuple[int, ...]
    rounds: int = Field(..., ge=0)
    rejected: tuple[int, ...] = ()


class ListAssignment(BaseModel):
    """
    Permissible colors per element, indexed by element id.

    Attributes:
        lists: lists[v] is the list L_v of opaque color tokens.
    """
    model_config = ConfigDict(frozen=True)

    lists: tuple[tuple[str, ...], ...] = Field(..., description="Color list per element")

    @field_validator("lists")
    @classmethod
    def no_duplicate_tokens(cls, v: tuple[tuple[str, ...], ...]) -> tuple[tuple[str, ...], ...]:
        for element, tokens in enumerate(v):
            if len(set(tokens)) != len(tokens):
                raise MalformedInstance(f"list of element {element} repeats a color")
        return v


class ListColorState(BaseModel):
    """
    Working state of the list-coloring recursion.

    Attributes:
        remaining: Elements still uncolored (U).
        lists: Remaining lists L'.
        t: Per-element counter t(v).
        T: Per-element counter T(v), always equal to len(lists[v]).
    """
    remaining: set[int]
    lists: dict[int, list[str]]
    t: dict[int, int]
    T: dict[int, int]


class ListColoringOutput(BaseModel):
    """
    Chosen color per element.

    Attributes:
        assignment: assignment[v] is the token given to v.
    """
    model_config = ConfigDict(frozen=True)

    assignment: tuple[str, ...] = Field(..., description="Color token per element")


class GeneratorParams(BaseModel):
    """Parameters of the seeded random instance generator."""
    model_config = ConfigDict(frozen=True)

    n_elements: int = Field(..., ge=1)
    max_parts: int = Field(..., ge=1)
    max_cap: int = Field(..., ge=1)
    seed: int = Field(default=0, ge=-(2**63), lt=2**64)


class ViolationKind(str, Enum):
    """Kind of problem found by a verifier."""
    DUPLICATE_ELEMENT = "DUPLICATE_ELEMENT"
    MISSING_ELEMENT = "MISSING_ELEMENT"
    UNKNOWN_ELEMENT = "UNKNOWN_ELEMENT"
    OVERFULL_PART = "OVERFULL_PART"
    CLASS_COUNT = "CLASS_COUNT"
    UNLISTED_COLOR = "UNLISTED_COLOR"
    UNDOMINATED = "UNDOMINATED"
    SHORT_LIST = "SHORT_LIST"


class Violation(BaseModel):
    """
    A single problem found while verifying an artifact.

    Attributes:
        kind: Category of the problem.
        message: Human-readable explanation.
        elements: Elements involved.
        side: Matroid side (1 or 2) for part violations.
        part: Part index for part violations.
        color: Color token or class index involved, if any.
    """
    kind: ViolationKind
    message: str = Field(..., min_length=1)
    elements: tuple[int, ...] = ()
    side: Optional[int] = None
    part: Optional[int] = None
    color: Optional[str] = None


class VerificationReport(BaseModel):
    """Outcome of a verifier: valid iff there are no violations."""
    valid: bool
    violations: list[Violation] = Field(default_factory=list)

    @classmethod
    def from_violations(cls, violations: list[Violation]) -> "VerificationReport":
        return cls(valid=not violations, violations=violations)


class ChiReport(BaseModel):
    """Expansion numbers (as exact 'p/q' strings) and the chromatic number."""
    delta1: str
    delta2: str
    chi: int


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"


class RunConfig(BaseModel):
    """
    One CLI invocation.

    Attributes:
        command: Top-level command (chi, color, list-color, ...).
        subcommand: Artifact kind for verify/oracle.
        inputs: Named input paths (instance, coloring, lists, kernel, labels).
        output: Output path, stdout when omitted.
        seed: Seed for gen/bench.
        trials: Trial count for bench.
        verbosity: -q = -1, default 0, each -v adds 1.
        format: Report format.
    """
    command: str
    subcommand: Optional[str] = None
    inputs: dict[str, Path] = Field(default_factory=dict)
    output: Optional[Path] = None
    seed: int = 0
    trials: int = Field(default=1, ge=1)
    verbosity: int = 0
    format: OutputFormat = OutputFormat.TEXT

    @field_validator("inputs")
    @classmethod
    def inputs_exist(cls, v: dict[str, Path]) -> dict[str, Path]:
        for name, path in v.items():
            if not path.exists():
                raise ValueError(f"{name} file {path} does not exist")
        return v
