"""
GPMColor command line.

Optimal and list colorings of the intersection of two generalized partition
matroids, plus kernels, verifiers, brute-force oracles, a seeded generator and
a small benchmark. Instances and artifacts are JSON files; see app/utils/io.py.

    python main.py chi instance.json
    python main.py color instance.json -o coloring.json
    python main.py verify coloring instance.json coloring.json
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from pydantic import ValidationError

from app.config import settings
from app.models import (
    ChiReport,
    GeneratorParams,
    ListAssignment,
    MatroidPair,
    OrderedContext,
    OutputFormat,
    RunConfig,
    VerificationReport,
    Violation,
    ViolationKind,
)
from app.monitoring import add_breadcrumb, capture_exception, init_sentry
from app.services.chromatic import (
    chi_of_pair,
    expansion_number,
    format_fraction,
    optimal_coloring,
    verify_coloring,
)
from app.services.errors import InstanceError, InvariantViolation, ListTooShort, MalformedInstance
from app.services.kernel import (
    canonical_orders,
    find_kernel,
    ordered_context_from_labels,
    verify_kernel,
)
from app.services.listcolor import list_color, verify_list_coloring
from app.services.oracle import (
    brute_chi,
    brute_coloring,
    brute_kernel,
    brute_list_color,
    random_instance,
    random_lists,
)
from app.utils.io import (
    dump_json,
    load_assignment,
    load_coloring,
    load_instance,
    load_kernel,
    load_labels,
    load_lists,
    pair_to_json,
)
from app.utils.reports import (
    render_assignment,
    render_chi,
    render_coloring,
    render_kernel,
    render_table,
    render_verification,
)


logger = logging.getLogger("gpmcolor")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_INTERNAL = 3

# Commands whose main product is a JSON artifact default to --format json
ARTIFACT_COMMANDS = {"color", "list-color", "kernel", "gen"}


def configure_logging(verbosity: int) -> None:
    """Log to stderr so stdout stays clean for JSON output."""
    if verbosity > 0:
        level = logging.DEBUG
    elif verbosity < 0:
        level = logging.WARNING
    else:
        level = getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _parse_ground(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError as e:
        raise MalformedInstance(f"--ground must be comma-separated integers, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None,
                        help="Report format (artifact commands default to json, others to text)")
    common.add_argument("-o", "--output", type=Path, default=None, help="Output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")

    orders = argparse.ArgumentParser(add_help=False)
    source = orders.add_mutually_exclusive_group()
    source.add_argument("--coloring", type=Path, help="Coloring whose classes define the orders")
    source.add_argument("--labels", type=Path, help='Explicit label permutation {"labels": [...]}')
    orders.add_argument("--ground", default=None, help="Comma-separated ground set (default: all elements)")
    orders.add_argument("--proposing-side", type=int, choices=[1, 2], default=1,
                        help="Matroid whose parts propose in deferred acceptance")

    parser = argparse.ArgumentParser(prog="gpmcolor", description=settings.APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"{settings.APP_TITLE} {settings.APP_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    chi = commands.add_parser("chi", parents=[common], help="Print Δ₁, Δ₂ and χ")
    chi.add_argument("instance", type=Path)

    color = commands.add_parser("color", parents=[common], help="Write an optimal coloring")
    color.add_argument("instance", type=Path)

    lc = commands.add_parser("list-color", parents=[common], help="Choose a color from every list")
    lc.add_argument("instance", type=Path)
    lc.add_argument("--lists", type=Path, required=True)

    kernel = commands.add_parser("kernel", parents=[common, orders], help="Write a kernel")
    kernel.add_argument("instance", type=Path)

    verify = commands.add_parser("verify", help="Check an artifact against an instance")
    kinds = verify.add_subparsers(dest="subcommand", required=True)
    vc = kinds.add_parser("coloring", parents=[common])
    vc.add_argument("instance", type=Path)
    vc.add_argument("artifact", type=Path)
    vc.add_argument("--any-size", action="store_true", help="Do not require exactly χ classes")
    vl = kinds.add_parser("list", parents=[common])
    vl.add_argument("instance", type=Path)
    vl.add_argument("artifact", type=Path)
    vl.add_argument("--lists", type=Path, required=True)
    vk = kinds.add_parser("kernel", parents=[common, orders])
    vk.add_argument("instance", type=Path)
    vk.add_argument("artifact", type=Path)

    gen = commands.add_parser("gen", parents=[common], help="Emit a seeded random instance")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--elements", type=int, default=8)
    gen.add_argument("--max-parts", type=int, default=3)
    gen.add_argument("--max-cap", type=int, default=3)
    gen.add_argument("--lists-output", type=Path, default=None,
                     help="Also write seeded lists of size χ here")
    gen.add_argument("--palette", type=int, default=None, help="Palette size for --lists-output (default 2χ)")

    oracle = commands.add_parser("oracle", help="Brute-force ground truth for small instances")
    brute = oracle.add_subparsers(dest="subcommand", required=True)
    oc = brute.add_parser("chi", parents=[common])
    oc.add_argument("instance", type=Path)
    ol = brute.add_parser("list", parents=[common])
    ol.add_argument("instance", type=Path)
    ol.add_argument("--lists", type=Path, required=True)
    ok = brute.add_parser("kernel", parents=[common, orders])
    ok.add_argument("instance", type=Path)

    bench = commands.add_parser("bench", parents=[common], help="Time color and list-color on seeded batches")
    bench.add_argument("--trials", type=int, default=10)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--elements", type=int, default=40)
    bench.add_argument("--max-parts", type=int, default=6)
    bench.add_argument("--max-cap", type=int, default=3)

    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    names = ("instance", "artifact", "coloring", "labels", "lists")
    inputs = {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}
    fmt = args.format or ("json" if args.command in ARTIFACT_COMMANDS else "text")
    return RunConfig(
        command=args.command,
        subcommand=getattr(args, "subcommand", None),
        inputs=inputs,
        output=args.output,
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", 1),
        verbosity=-1 if args.quiet else args.verbose,
        format=fmt,
    )


def emit(config: RunConfig, payload: Any, text: str) -> None:
    """Write payload as JSON or text to the output file or stdout."""
    body = dump_json(payload) if config.format == OutputFormat.JSON else text
    if config.output is not None:
        config.output.write_text(body, encoding="utf-8")
        logger.info(f"Wrote {config.output}")
    else:
        sys.stdout.write(body)


def _orders(pair: MatroidPair, config: RunConfig) -> OrderedContext:
    if "labels" in config.inputs:
        return ordered_context_from_labels(pair, load_labels(config.inputs["labels"]))
    coloring = load_coloring(config.inputs["coloring"]) if "coloring" in config.inputs else optimal_coloring(pair)
    return canonical_orders(pair, coloring)


def _ground(pair: MatroidPair, args: argparse.Namespace) -> list[int]:
    ground = _parse_ground(args.ground)
    return list(range(pair.n_elements)) if ground is None else ground


def cmd_chi(config: RunConfig, args: argparse.Namespace) -> int:
    pair = load_instance(config.inputs["instance"])
    report = ChiReport(
        delta1=format_fraction(expansion_number(pair.m1)),
        delta2=format_fraction(expansion_number(pair.m2)),
        chi=chi_of_pair(pair),
    )
    emit(config, report, render_chi(report))
    return EXIT_OK


def cmd_color(config: RunConfig, args: argparse.Namespace) -> int:
    pair = load_instance(config.inputs["instance"])
    coloring = optimal_coloring(pair)
    emit(config, coloring, render_coloring(coloring))
    return EXIT_OK


def short_list_report(pair: MatroidPair, lists: ListAssignment, elements: Sequence[int]) -> VerificationReport:
    target = chi_of_pair(pair)
    return VerificationReport.from_violations([
        Violation(
            kind=ViolationKind.SHORT_LIST,
            message=f"element {v} has {len(lists.lists[v])} color(s), needs {target}",
            elements=(v,),
        )
        for v in elements
    ])


def cmd_list_color(config: RunConfig, args: argparse.Namespace) -> int:
    pair = load_instance(config.inputs["instance"])
    lists = load_lists(config.inputs["lists"])
    try:
        out = list_color(pair, lists)
    except ListTooShort as e:
        logger.warning(f"No assignment written: {e}")
        report = short_list_report(pair, lists, e.elements)
        emit(config, report, render_verification(report))
        return EXIT_FAILED
    emit(config, out, render_assignment(out))
    return EXIT_OK


def cmd_kernel(config: RunConfig, args: argparse.Namespace) -> int:
    pair = load_instance(config.inputs["instance"])
    ctx = _orders(pair, config)
    ground = _ground(pair, args)
    result = find_kernel(ctx, ground, proposing_side=args.proposing_side)
    payload = {**result.model_dump(mode="json"), "ground": sorted(set(ground))}
    emit(config, payload, render_kernel(result))
    return EXIT_OK


def cmd_verify(config: RunConfig, args: argparse.Namespace) -> int:
    pair = load_instance(config.inputs["instance"])
    artifact = config.inputs["artifact"]
    if config.subcommand == "coloring":
        report = verify_coloring(pair, load_coloring(artifact), require_optimal=not args.any_size)
    elif config.subcommand == "list":
        report = verify_list_coloring(pair, load_lists(config.inputs["lists"]), load_assignment(artifact))
    else:
        kernel_file = load_kernel(artifact)
        ground = kernel_file.ground if kernel_file.ground is not None else _ground(pair, args)
        report = verify_kernel(_orders(pair, config), kernel_file.kernel, ground)
    emit(config, report, render_verification(report))
    if not report.valid:
        logger.warning(f"verify {config.subcommand}: {len(report.violations)} violation(s)")
        return EXIT_FAILED
    return EXIT_OK


def cmd_gen(config: RunConfig, args: argparse.Namespace) -> int:
    pair = random_instance(GeneratorParams(
        n_elements=args.elements, max_parts=args.max_parts, max_cap=args.max_cap, seed=config.seed,
    ))
    payload = pair_to_json(pair)
    emit(config, payload, dump_json(payload))
    if args.lists_output is not None:
        size = chi_of_pair(pair)
        lists = random_lists(pair.n_elements, size, args.palette or 2 * size, seed=config.seed)
        dump_json(lists, args.lists_output)
        logger.info(f"Wrote {args.lists_output} (lists of size {size})")
    return EXIT_OK


def cmd_oracle(config: RunConfig, args: argparse.Namespace) -> int:
    pair = load_instance(config.inputs["instance"])
    if config.subcommand == "chi":
        chi = brute_chi(pair)
        coloring = brute_coloring(pair, chi)
        payload = {"chi": chi, "classes": [list(k) for k in coloring.classes]}
        emit(config, payload, f"χ={chi}\n" + render_coloring(coloring))
        return EXIT_OK
    if config.subcommand == "list":
        out = brute_list_color(pair, load_lists(config.inputs["lists"]))
        if out is None:
            emit(config, {"assignment": None}, "no respecting assignment exists\n")
            return EXIT_FAILED
        emit(config, out, render_assignment(out))
        return EXIT_OK
    ground = _ground(pair, args)
    kernels = brute_kernel(_orders(pair, config), ground)
    payload = {"ground": sorted(set(ground)), "kernels": [list(k) for k in kernels]}
    text = f"{len(kernels)} kernel(s)\n" + "".join(f"  {' '.join(map(str, k))}\n" for k in kernels)
    emit(config, payload, text)
    return EXIT_OK


def cmd_bench(config: RunConfig, args: argparse.Namespace) -> int:
    rows = []
    failures = 0
    for trial in range(config.trials):
        seed = config.seed + trial
        pair = random_instance(GeneratorParams(
            n_elements=args.elements, max_parts=args.max_parts, max_cap=args.max_cap, seed=seed,
        ))
        chi = chi_of_pair(pair)
        lists = random_lists(pair.n_elements, chi, 2 * chi, seed=seed)

        started = time.perf_counter()
        coloring = optimal_coloring(pair)
        color_ms = (time.perf_counter() - started) * 1000
        started = time.perf_counter()
        out = list_color(pair, lists)
        list_ms = (time.perf_counter() - started) * 1000

        ok = verify_coloring(pair, coloring).valid and verify_list_coloring(pair, lists, out).valid
        failures += not ok
        rows.append({
            "seed": seed, "elements": pair.n_elements, "chi": chi,
            "color_ms": round(color_ms, 3), "list_ms": round(list_ms, 3), "ok": ok,
        })
        logger.debug(f"bench trial {trial}: seed={seed}, χ={chi}, ok={ok}")

    header = ["seed", "elements", "chi", "color_ms", "list_ms", "ok"]
    text = render_table(header, [[row[key] for key in header] for row in rows])
    total = sum(row["color_ms"] + row["list_ms"] for row in rows)
    text += f"{config.trials} trials, {failures} failure(s), {total:.1f} ms total\n"
    emit(config, {"trials": rows, "failures": failures}, text)
    return EXIT_FAILED if failures else EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "chi": cmd_chi,
    "color": cmd_color,
    "list-color": cmd_list_color,
    "kernel": cmd_kernel,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
}


def run(config: RunConfig, args: argparse.Namespace) -> int:
    """Execute one command and map solver errors to exit codes."""
    label = " ".join(filter(None, [config.command, config.subcommand]))
    add_breadcrumb(f"gpmcolor {label}", data={"inputs": {k: str(v) for k, v in config.inputs.items()}})
    started = time.perf_counter()
    try:
        status = COMMANDS[config.command](config, args)
    except (InstanceError, ValidationError) as e:
        logger.error(f"{label}: invalid input: {e}")
        return EXIT_BAD_INPUT
    except InvariantViolation as e:
        logger.error(f"{label}: internal invariant violated: {e}", exc_info=True)
        capture_exception(e, {"run": {"command": label, "seed": config.seed}})
        return EXIT_INTERNAL
    except OSError as e:
        logger.error(f"{label}: {e}")
        return EXIT_BAD_INPUT
    logger.info(f"{label} finished with status {status} in {time.perf_counter() - started:.3f}s")
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(-1 if args.quiet else args.verbose)

    try:
        settings.validate_settings()
    except ValueError as e:
        logger.error(f"Configuration validation failed: {e}")
        return EXIT_BAD_INPUT
    init_sentry()

    try:
        config = run_config_from_args(args)
    except ValidationError as e:
        logger.error(f"{args.command}: {e.errors()[0]['msg']}")
        return EXIT_BAD_INPUT
    return run(config, args)


if __name__ == "__main__":
    sys.exit(main())
