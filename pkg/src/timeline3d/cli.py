"""Command-line interface.

Subcommands: gen, layout, validate, score, serve.  Exit codes: 0 on
success, 1 on validation failure (hard design errors, inconsistent
datasets, unanswerable scoring), 2 on I/O or parse errors.  Diagnostics
go to standard error; `score` writes its result JSON to standard out.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from typing import Optional, Sequence

from . import bench, io
from .design import PRESET_NAMES, preset, validate_design
from .errors import (
    DatasetError,
    FormatError,
    InvalidDesign,
    NoAnswer,
    TimelineError,
    UnknownCentral,
    UnknownPreset,
    UnplaceablePattern,
)
from .session import initial_state, render_state

PORT_ENV_VAR = "TIMELINE3D_PORT"
DEFAULT_PORT = 8000

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise FormatError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _load_design(path: str):
    """Design JSON file, or one of the preset names used directly."""
    if path in PRESET_NAMES:
        return preset(path)
    return io.design_from_json(_read(path))


def _parse_central(text: Optional[str]) -> Optional[tuple[str, int]]:
    if text is None:
        return None
    branch, sep, index = text.rpartition(":")
    if not sep or not branch:
        raise FormatError(f"central must look like BRANCH:INDEX, got {text!r}")
    try:
        return branch, int(index)
    except ValueError:
        raise FormatError(f"central index must be an integer, got {index!r}") from None


def _cmd_gen(args: argparse.Namespace) -> int:
    config = io.gen_config_from_json(_read(args.config))
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    dataset, truth = bench.generate(config)
    _write(args.out, io.dataset_to_json(dataset))
    if args.truth is not None:
        _write(args.truth, io.truth_to_json(truth))
    return EXIT_OK


def _cmd_layout(args: argparse.Namespace) -> int:
    dataset = io.dataset_from_json(_read(args.dataset))
    design = _load_design(args.design)
    central = _parse_central(args.central)
    state = initial_state(dataset, design, central=central)
    render = render_state(state)
    _write(args.out, io.scene_to_json(render, state))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    design = _load_design(args.design)
    report = validate_design(design)
    for violation in report.violations:
        print(f"{violation.severity} {violation.code}: {violation.message}")
    if report.hard_errors:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def _cmd_score(args: argparse.Namespace) -> int:
    trace = io.trace_from_json(_read(args.trace))
    task = io.task_from_json(_read(args.task))
    truth = io.truth_from_json(_read(args.truth))
    expected = _expected_answer(truth, task)
    result = bench.score(trace, task, expected)
    print(io.result_to_json(result))
    return EXIT_OK


def _expected_answer(truth: bench.GroundTruth, task: bench.TaskSpec):
    """Oracle answer resolved from recorded ground truth alone."""
    kind = task.kind
    if isinstance(kind, bench.Locate):
        return kind.target
    if isinstance(kind, bench.Count):
        if kind.group not in truth.group_counts:
            raise FormatError(f"group {kind.group!r} not present in ground truth")
        return truth.group_counts[kind.group]
    if isinstance(kind, bench.Pattern):
        if tuple(kind.triple) != tuple(truth.pattern):
            raise FormatError(
                "task pattern does not match the ground truth pattern; "
                "re-derive against the dataset instead"
            )
        return list(truth.occurrences)
    return truth.value_argmax


def _cmd_serve(args: argparse.Namespace) -> int:
    dataset = io.dataset_from_json(_read(args.dataset))
    import uvicorn

    from .service import create_app

    app = create_app(dataset)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _default_port() -> int:
    raw = os.environ.get(PORT_ENV_VAR)
    if raw is None:
        return DEFAULT_PORT
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_PORT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timeline3d", description="3D timeline toolkit for time-varying spatial data"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic benchmark dataset")
    gen.add_argument("--config", required=True, help="generator config JSON")
    gen.add_argument("--seed", type=int, default=None, help="override the config seed")
    gen.add_argument("--out", required=True, help="dataset JSON to write")
    gen.add_argument("--truth", default=None, help="ground truth JSON to write")
    gen.set_defaults(func=_cmd_gen)

    layout = sub.add_parser("layout", help="solve a layout and write the scene")
    layout.add_argument("--dataset", required=True, help="dataset JSON")
    layout.add_argument("--design", required=True, help="design JSON or preset name")
    layout.add_argument("--central", default=None, help="central slot as BRANCH:INDEX")
    layout.add_argument("--out", required=True, help="scene JSON to write")
    layout.set_defaults(func=_cmd_layout)

    validate = sub.add_parser("validate", help="check a design against the combination rules")
    validate.add_argument("--design", required=True, help="design JSON or preset name")
    validate.set_defaults(func=_cmd_validate)

    score = sub.add_parser("score", help="score an exploration trace against ground truth")
    score.add_argument("--trace", required=True, help="trace JSON")
    score.add_argument("--task", required=True, help="task JSON")
    score.add_argument("--truth", required=True, help="ground truth JSON")
    score.set_defaults(func=_cmd_score)

    serve = sub.add_parser("serve", help="serve sessions over HTTP")
    serve.add_argument("--dataset", required=True, help="dataset JSON")
    serve.add_argument("--port", type=int, default=_default_port())
    serve.add_argument("--host", default="127.0.0.1")
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (
        InvalidDesign,
        DatasetError,
        UnknownCentral,
        UnknownPreset,
        UnplaceablePattern,
        NoAnswer,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TimelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
