"""
JSON interchange for instances, colorings, lists, labels and kernels.

Every artifact is one JSON object. File shapes are described by small pydantic
models so that a wrong type surfaces as a ValidationError, while structural
problems (overlapping parts, vertices out of range) surface as the solver's
own InstanceError subclasses.
"""

import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel, Field

from app.models import (
    BipartiteInstance,
    Coloring,
    ListAssignment,
    ListColoringOutput,
    MatroidPair,
)
from app.services.chromatic import drop_isolated
from app.services.errors import MalformedInstance
from app.services.matroid import build_bipartite, build_gpm, build_pair, from_bipartite


logger = logging.getLogger(__name__)


class MatroidFile(BaseModel):
    parts: list[list[int]]
    caps: list[int]


class PairFile(BaseModel):
    """{"elements": n, "matroid1": {...}, "matroid2": {...}}"""
    elements: int = Field(..., ge=0)
    matroid1: MatroidFile
    matroid2: MatroidFile


class BipartiteFile(BaseModel):
    """{"left_caps": [...], "right_caps": [...], "edges": [[l, r], ...]}"""
    left_caps: list[int]
    right_caps: list[int]
    edges: list[tuple[int, int]] = Field(default_factory=list)


class KernelFile(BaseModel):
    kernel: list[int]
    ground: Optional[list[int]] = None


class InstanceLoader:
    """
    Reads and writes the interchange format.

    Instances come in two shapes, told apart by their keys: the matroid form
    has "elements", the bipartite form has "left_caps". Bipartite input is
    converted to the matroid pair on its edges (element u is edge u) after
    dropping vertices that no edge touches.
    """

    @staticmethod
    def read_object(path: Union[str, Path]) -> dict[str, Any]:
        """
        Parse a JSON file that must hold an object.

        Raises:
            MalformedInstance: If the text is not JSON or not an object.
        """
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedInstance(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e
        if not isinstance(data, dict):
            raise MalformedInstance(f"{path}: expected a JSON object, got {type(data).__name__}")
        return data

    @staticmethod
    def parse_instance(data: dict[str, Any]) -> tuple[MatroidPair, Optional[BipartiteInstance]]:
        """
        Build a pair from a decoded instance object.

        Returns:
            (pair, graph) where graph is the validated bipartite input, or None
            for matroid-form input.
        """
        if "elements" in data:
            raw = PairFile.model_validate(data)
            m1 = build_gpm(raw.elements, raw.matroid1.parts, raw.matroid1.caps)
            m2 = build_gpm(raw.elements, raw.matroid2.parts, raw.matroid2.caps)
            return build_pair(m1, m2), None
        if "left_caps" in data:
            raw = BipartiteFile.model_validate(data)
            graph = build_bipartite(raw.left_caps, raw.right_caps, raw.edges)
            trimmed = drop_isolated(graph)
            dropped = len(graph.left_caps) + len(graph.right_caps) - len(trimmed.left_caps) - len(trimmed.right_caps)
            if dropped:
                logger.info(f"Dropped {dropped} isolated vertices from bipartite input")
            if not trimmed.edges:
                return build_pair(build_gpm(0, [], []), build_gpm(0, [], [])), graph
            pair, _ = from_bipartite(trimmed)
            return pair, graph
        raise MalformedInstance('instance needs an "elements" or a "left_caps" key')

    @staticmethod
    def dumps(payload: Any) -> str:
        """Deterministic JSON text: sorted keys, 2-space indent, trailing newline."""
        if isinstance(payload, BaseModel):
            payload = payload.model_dump(mode="json")
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# Convenience functions for direct use
def load_instance(path: Union[str, Path]) -> MatroidPair:
    """Load a matroid-form or bipartite-form instance as a matroid pair."""
    pair, _ = InstanceLoader.parse_instance(InstanceLoader.read_object(path))
    logger.debug(f"Loaded instance {path}: {pair.n_elements} elements")
    return pair


def load_coloring(path: Union[str, Path]) -> Coloring:
    """{"classes": [[ids], ...]}"""
    return Coloring.model_validate(InstanceLoader.read_object(path))


def load_lists(path: Union[str, Path]) -> ListAssignment:
    """{"lists": [["a", "b"], ...]} indexed by element id."""
    return ListAssignment.model_validate(InstanceLoader.read_object(path))


def load_assignment(path: Union[str, Path]) -> ListColoringOutput:
    """{"assignment": ["a", "c", ...]}"""
    return ListColoringOutput.model_validate(InstanceLoader.read_object(path))


def load_labels(path: Union[str, Path]) -> list[int]:
    """
    {"labels": [l_0, ..., l_{n-1}]} with labels[v] the rank of element v.

    Raises:
        MalformedInstance: If the "labels" key is missing or not a list of ints.
    """
    data = InstanceLoader.read_object(path)
    labels = data.get("labels")
    if not isinstance(labels, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in labels):
        raise MalformedInstance(f'{path}: "labels" must be a list of integers')
    return labels


def load_kernel(path: Union[str, Path]) -> KernelFile:
    """{"kernel": [ids], "ground": [ids]} where "ground" defaults to every element."""
    return KernelFile.model_validate(InstanceLoader.read_object(path))


def pair_to_json(p: MatroidPair) -> dict[str, Any]:
    """Matroid-form interchange object of a pair."""
    return {
        "elements": p.n_elements,
        "matroid1": {"parts": [list(part) for part in p.m1.parts], "caps": list(p.m1.caps)},
        "matroid2": {"parts": [list(part) for part in p.m2.parts], "caps": list(p.m2.caps)},
    }


def dump_json(payload: Any, path: Optional[Union[str, Path]] = None) -> str:
    """
    Serialize payload deterministically and write it to path when given.

    Returns:
        The JSON text.
    """
    text = InstanceLoader.dumps(payload)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
