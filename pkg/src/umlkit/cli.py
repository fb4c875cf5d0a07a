"""Command line entry points: batch grading, solution validation, serving.

Exit codes follow one convention across subcommands: 0 success, 1 I/O
failure, 2 parse failure in any graded input, 3 validation issues.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from umlkit.authoring import load_exercise
from umlkit.evaluator import evaluate_exercise
from umlkit.model import ExerciseSpec
from umlkit.parser import ParseError, parse_document

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3


def _load_exercise_file(path: str) -> ExerciseSpec | int:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    loaded = load_exercise(text)
    if isinstance(loaded, ExerciseSpec):
        return loaded
    for issue in loaded:
        subject = f" [{issue.refId}]" if issue.refId else ""
        print(f"{issue.code}{subject}: {issue.detail}", file=sys.stderr)
    return EXIT_VALIDATION


def _input_files(path: str) -> list[Path] | int:
    target = Path(path)
    if target.is_dir():
        return sorted(p for p in target.glob("*.json") if p.is_file())
    if target.is_file():
        return [target]
    print(f"error: no such file or directory: {path}", file=sys.stderr)
    return EXIT_IO


def cmd_grade(args: argparse.Namespace) -> int:
    exercise = _load_exercise_file(args.solution)
    if isinstance(exercise, int):
        return exercise
    files = _input_files(args.input)
    if isinstance(files, int):
        return files

    status = EXIT_OK
    rows: list[dict] = []
    for path in files:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_IO
        parsed = parse_document(text)
        if isinstance(parsed, ParseError):
            print(f"parse error in {path}: {parsed.code}: {parsed.detail}", file=sys.stderr)
            status = EXIT_PARSE
            continue
        report = evaluate_exercise(exercise, parsed)
        rows.append({"file": str(path), "report": report})

    if args.format == "ndjson":
        for row in rows:
            print(json.dumps({"file": row["file"], "report": row["report"].to_dict()}))
    elif args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(
            ["file", "solutionIndex", "completeness", "syntacticErrors", "semanticErrors"]
        )
        for row in rows:
            report = row["report"]
            writer.writerow(
                [
                    row["file"],
                    report.solutionIndex,
                    f"{report.completeness.overall:.4f}",
                    len(report.syntactic),
                    len(report.semantic),
                ]
            )
        sys.stdout.write(out.getvalue())
    else:
        for row in rows:
            report = row["report"]
            errors = len(report.syntactic) + len(report.semantic)
            print(
                f"{row['file']}: completeness {report.completeness.overall:.2%}, "
                f"{errors} error(s), {len(report.matchedList)} match(es)"
            )
            for diag in (*report.syntactic, *report.semantic):
                print(f"  [{diag.rule}] {diag.message}")
    return status


def cmd_validate(args: argparse.Namespace) -> int:
    loaded = _load_exercise_file(args.solution)
    if isinstance(loaded, int):
        return loaded
    solutions = len(loaded.solutions)
    print(f"{args.solution}: ok ({solutions} solution(s))")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from umlkit.service import create_app
    from umlkit.store import CourseStore

    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: bind address must be host:port, got {args.bind!r}", file=sys.stderr)
        return EXIT_IO
    try:
        store = CourseStore(args.data)
    except OSError as exc:
        print(f"error: cannot open data directory {args.data}: {exc}", file=sys.stderr)
        return EXIT_IO
    app = create_app(store, ui_dir=args.ui)
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"error: server failed to start on {args.bind}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="umlkit", description="Grade and serve UML use case diagram exercises."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    grade = sub.add_parser("grade", help="grade one diagram file or a directory of them")
    grade.add_argument("--solution", required=True, help="exercise solution file")
    grade.add_argument("--input", required=True, help="diagram file or directory")
    grade.add_argument(
        "--format", choices=("text", "csv", "ndjson"), default="text", help="output format"
    )
    grade.set_defaults(func=cmd_grade)

    validate = sub.add_parser("validate", help="validate an exercise solution file")
    validate.add_argument("solution", help="exercise solution file")
    validate.set_defaults(func=cmd_validate)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument(
        "--data",
        default=os.environ.get("UMLK_DATA_DIR", "./course-data"),
        help="data directory (env UMLK_DATA_DIR)",
    )
    serve.add_argument(
        "--bind",
        default=os.environ.get("UMLK_BIND", "127.0.0.1:8000"),
        help="listen address host:port (env UMLK_BIND)",
    )
    serve.add_argument(
        "--ui",
        default=os.environ.get("UMLK_UI_DIR"),
        help="directory with the built web UI to serve at / (env UMLK_UI_DIR)",
    )
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
