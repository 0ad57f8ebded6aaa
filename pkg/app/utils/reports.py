"""
Plain-text rendering of solver results and verification reports.

JSON output goes through app.utils.io.dump_json; these helpers produce the
`--format text` counterpart.
"""

from typing import Dict, Sequence

from app.models import (
    ChiReport,
    Coloring,
    KernelResult,
    ListColoringOutput,
    VerificationReport,
    ViolationKind,
)


# Short headings per violation kind, shown in text reports
VIOLATION_DESCRIPTIONS: Dict[ViolationKind, str] = {
    ViolationKind.DUPLICATE_ELEMENT: "element colored more than once",
    ViolationKind.MISSING_ELEMENT: "element left uncolored",
    ViolationKind.UNKNOWN_ELEMENT: "element outside the ground set",
    ViolationKind.OVERFULL_PART: "part over its cap",
    ViolationKind.CLASS_COUNT: "class count differs from χ",
    ViolationKind.UNLISTED_COLOR: "color not in the element's list",
    ViolationKind.UNDOMINATED: "element dominated on neither side",
    ViolationKind.SHORT_LIST: "list shorter than χ",
}


def render_chi(report: ChiReport) -> str:
    """One line: Δ₁=3/1, Δ₂=2/1, χ=3"""
    return f"Δ₁={report.delta1}, Δ₂={report.delta2}, χ={report.chi}\n"


def render_coloring(coloring: Coloring) -> str:
    lines = [f"{coloring.n_classes} classes"]
    for k, members in enumerate(coloring.classes, start=1):
        lines.append(f"  N_{k}: {' '.join(str(u) for u in members)}")
    return "\n".join(lines) + "\n"


def render_assignment(out: ListColoringOutput) -> str:
    return "".join(f"{v}: {token}\n" for v, token in enumerate(out.assignment))


def render_kernel(result: KernelResult) -> str:
    members = " ".join(str(u) for u in result.kernel)
    return f"kernel ({len(result.kernel)} elements, {result.rounds} rounds): {members}\n"


def render_verification(report: VerificationReport) -> str:
    """
    OK, or one line per violation grouped under its heading.

    Example:
        INVALID: 1 violation(s)
          [DUPLICATE_ELEMENT] element colored more than once: element 3 appears in class 0 and class 1
    """
    if report.valid:
        return "OK\n"
    lines = [f"INVALID: {len(report.violations)} violation(s)"]
    for violation in report.violations:
        heading = VIOLATION_DESCRIPTIONS[violation.kind]
        lines.append(f"  [{violation.kind.value}] {heading}: {violation.message}")
    return "\n".join(lines) + "\n"


def render_table(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """Left-aligned fixed-width table."""
    cells = [[str(c) for c in header]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"
