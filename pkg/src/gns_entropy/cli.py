"""
Command-line entry point
Runs scenario files and built-in examples; reports go to stdout or --out, logs to stderr
"""

import argparse
import io
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd
import structlog

from .config import get_settings
from .exceptions import GnsEntropyError, SchemaError
from .logging_config import configure_logging
from .models import BlockEntry, Projection, load_scenario
from .scenarios import (
    ScenarioRun, bose3_surface_pipeline, build_example, count_zero_points, emit_surface,
    execute_scenario, list_examples, surface_grid, write_surface_csv,
)

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERICAL = 3


def parse_params(pairs: Sequence[str]) -> Dict[str, str]:
    """k=v strings into a mapping; values stay strings until the example reads them"""
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise SchemaError(f"expected k=v, got {pair!r}", field_path="params")
        params[key.strip()] = value.strip()
    return params


def blocks_frame(blocks: List[BlockEntry]) -> pd.DataFrame:
    return pd.DataFrame([b.model_dump() for b in blocks], columns=["block", "d", "m", "weight"])


def render(run: ScenarioRun, fmt: str) -> str:
    if fmt == "csv":
        if run.surface is not None:
            return write_surface_csv(run.surface)
        return blocks_frame(run.report.blocks).to_csv(index=False)
    return run.report.model_dump_json(indent=2) + "\n"


def emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
        logger.info("output_written", path=out, bytes=len(text))
    else:
        sys.stdout.write(text)


def _fail(code: int, err: Exception) -> int:
    payload = {"error": type(err).__name__, "message": str(err)}
    if isinstance(err, SchemaError) and err.field_path:
        payload["field_path"] = err.field_path
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def cmd_run(args) -> int:
    try:
        text = Path(args.scenario).read_text()
    except OSError as err:
        raise SchemaError(f"cannot read scenario file: {err}", field_path="scenario") from err
    run = execute_scenario(load_scenario(text))
    emit(render(run, args.format), args.out)
    return EXIT_OK


def cmd_example(args) -> int:
    scenario = build_example(args.name, parse_params(args.param))
    run = execute_scenario(scenario)
    emit(render(run, args.format), args.out)
    return EXIT_OK


def cmd_list(args) -> int:
    width = max(len(name) for name, _ in list_examples())
    lines = [f"{name.ljust(width)}  {description}" for name, description in list_examples()]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_surface(args) -> int:
    if args.grid < 2:
        raise SchemaError("grid must be at least 2", field_path="grid")
    frame = emit_surface(surface_grid(args.grid), Projection(args.projection), bose3_surface_pipeline())
    logger.info("surface_emitted", rows=len(frame), zero_points=count_zero_points(frame))
    buffer = io.StringIO()
    write_surface_csv(frame, buffer)
    emit(buffer.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gns-entropy",
        description="Entanglement entropy of restricted states via the GNS construction",
    )
    parser.add_argument("--log-level", default=None,
                        help="Logging level (default from GNS_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a JSON scenario file")
    run.add_argument("--scenario", required=True, help="Scenario file")
    run.add_argument("--out", help="Write the report here instead of stdout")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.set_defaults(handler=cmd_run)

    example = sub.add_parser("example", help="Run a built-in example")
    example.add_argument("name", help="Example name (see `list`)")
    example.add_argument("--param", action="append", default=[], metavar="K=V",
                         help="Override an example parameter; repeatable")
    example.add_argument("--out", help="Write the report here instead of stdout")
    example.add_argument("--format", choices=("json", "csv"), default="json")
    example.set_defaults(handler=cmd_example)

    listing = sub.add_parser("list", help="List built-in examples")
    listing.set_defaults(handler=cmd_list)

    surface = sub.add_parser("surface", help="Two-boson entropy surface as CSV")
    surface.add_argument("--grid", type=int, default=64, help="Samples per axis")
    surface.add_argument("--projection", choices=[p.value for p in Projection],
                         default=Projection.STEREOGRAPHIC.value)
    surface.add_argument("--out", help="Write the CSV here instead of stdout")
    surface.set_defaults(handler=cmd_surface)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        level = args.log_level or get_settings().log_level
    except SchemaError as err:
        configure_logging(args.log_level or "INFO")
        logger.error("invalid_environment", variable=err.field_path, error=str(err))
        return _fail(EXIT_SCHEMA, err)
    configure_logging(level)
    try:
        return args.handler(args)
    except SchemaError as err:
        logger.error("schema_error", error=str(err))
        return _fail(EXIT_SCHEMA, err)
    except GnsEntropyError as err:
        logger.error("numerical_failure", error=type(err).__name__, message=str(err))
        return _fail(EXIT_NUMERICAL, err)
