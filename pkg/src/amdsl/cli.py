"""Command line driver for the toolchain pipeline.

Exit codes: 0 success, 1 when any error diagnostic was reported, 2 for
usage or I/O problems.  Artifacts and reports go to stdout (or the file
named by ``-o``), diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import cca as cca_mod
from . import codegen, compare as compare_mod, graphgen, semantics
from .diagnostics import Diagnostic, sort_key
from .parser import parse_system
from .printer import print_system


def _use_color() -> bool:
    mode = os.environ.get("AMDSL_COLOR", "auto")
    if mode == "never":
        return False
    return sys.stderr.isatty()


def _report(diags: list[Diagnostic]) -> None:
    color = _use_color()
    for diag in sorted(diags, key=sort_key):
        print(diag.render(color=color), file=sys.stderr)


def _read(path: str) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"amdsl: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
        return None
    except UnicodeDecodeError as exc:
        print(f"amdsl: {path} is not valid UTF-8: {exc}", file=sys.stderr)
        return None


def _write(path: str, text: str) -> bool:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"amdsl: cannot write {path}: {exc.strerror or exc}", file=sys.stderr)
        return False
    return True


def _load_checked(path: str):
    """Parse and fully check a system file.

    Returns ``(resolved, diagnostics)``; ``resolved`` is None on any error.
    """
    text = _read(path)
    if text is None:
        return None, None
    model, diags = parse_system(text, file=path)
    if model is None:
        return None, diags
    resolved, sem_diags = semantics.analyze(model)
    return resolved, diags + sem_diags


def _cmd_check(args) -> int:
    resolved, diags = _load_checked(args.file)
    if diags is None:
        return 2
    _report(diags)
    return 0 if resolved is not None else 1


def _cmd_fmt(args) -> int:
    text = _read(args.file)
    if text is None:
        return 2
    model, diags = parse_system(text, file=args.file)
    _report(diags)
    if model is None:
        return 1
    sys.stdout.write(print_system(model))
    return 0


def _cmd_lower(args) -> int:
    resolved, diags = _load_checked(args.file)
    if diags is None:
        return 2
    _report(diags)
    if resolved is None:
        return 1
    ir = cca_mod.lower_to_cca(resolved)
    if args.update:
        edited_text = _read(args.update)
        if edited_text is None:
            return 2
        edited, cca_diags = cca_mod.parse_cca(edited_text, file=args.update)
        _report(cca_diags)
        if edited is None:
            return 1
        ir, merge_diags = cca_mod.merge_refinement(ir, edited)
        _report(merge_diags)
    text = cca_mod.print_cca(ir)
    if args.output:
        return 0 if _write(args.output, text) else 2
    sys.stdout.write(text)
    return 0


def _cmd_graph(args) -> int:
    resolved, diags = _load_checked(args.file)
    if diags is None:
        return 2
    _report(diags)
    if resolved is None:
        return 1
    if args.via and Path(args.via).exists():
        via_text = _read(args.via)
        if via_text is None:
            return 2
        graph, g_diags = graphgen.parse_graph_dsl(via_text, file=args.via)
        _report(g_diags)
        if graph is None:
            return 1
    else:
        graph = graphgen.lower_to_graph(resolved)
        if args.via and not _write(args.via, graphgen.print_graph_dsl(graph)):
            return 2
    text = graphgen.emit_graphml(graph, flat=args.flat)
    if args.output:
        return 0 if _write(args.output, text) else 2
    sys.stdout.write(text)
    return 0


def _cmd_codegen(args) -> int:
    if args.file.endswith(".cca"):
        text = _read(args.file)
        if text is None:
            return 2
        ir, diags = cca_mod.parse_cca(text, file=args.file)
        _report(diags)
        if ir is None:
            return 1
    else:
        resolved, diags = _load_checked(args.file)
        if diags is None:
            return 2
        _report(diags)
        if resolved is None:
            return 1
        ir = cca_mod.lower_to_cca(resolved)

    out_dir = Path(args.output)
    try:
        existing = {p.name for p in out_dir.iterdir()} if out_dir.exists() else set()
    except OSError as exc:
        print(f"amdsl: cannot scan {out_dir}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    files = codegen.emit_all(ir, existing)
    if args.dry_run:
        for name in sorted(files):
            print(name)
        return 0
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"amdsl: cannot create {out_dir}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    for name in sorted(files):
        if not _write(str(out_dir / name), files[name]):
            return 2
    return 0


def _cmd_compare(args) -> int:
    resolved_a, diags_a = _load_checked(args.file_a)
    if diags_a is None:
        return 2
    resolved_b, diags_b = _load_checked(args.file_b)
    if diags_b is None:
        return 2
    _report(diags_a + diags_b)
    if resolved_a is None or resolved_b is None:
        return 1
    report = compare_mod.compare(resolved_a.model, resolved_b.model)
    if args.json:
        sys.stdout.write(compare_mod.render_json(report))
    else:
        sys.stdout.write(compare_mod.render_text(report))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amdsl",
        description="Batch compiler for textual motor-skill architecture models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate a system file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("fmt", help="reprint a system file in canonical form")
    p.add_argument("file")
    p.set_defaults(func=_cmd_fmt)

    p = sub.add_parser("lower", help="lower a system to the component format")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="output .cca path (default: stdout)")
    p.add_argument("--update", metavar="EXISTING", help="merge deployment refinements from an existing .cca")
    p.set_defaults(func=_cmd_lower)

    p = sub.add_parser("graph", help="emit a GraphML visualization")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="output .graphml path (default: stdout)")
    p.add_argument("--via", metavar="GRAPH", help="read (or seed) an editable .graph file")
    p.add_argument("--flat", action="store_true", help="render groups as plain nodes")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("codegen", help="generate C++ hulls and bootstrap")
    p.add_argument("file", help="a .am system file or an expert-refined .cca file")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--dry-run", action="store_true", help="list files without writing")
    p.set_defaults(func=_cmd_codegen)

    p = sub.add_parser("compare", help="structural comparison of two systems")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.set_defaults(func=_cmd_compare)

    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    return args.func(args)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
