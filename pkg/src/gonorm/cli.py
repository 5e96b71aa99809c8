"""Command line front end.

Verbs: ``check`` (do the dependencies hold), ``mincover`` (minimal covers
per scope), ``metrics`` (redundancy report), ``nf`` (normal-form check),
``normalize`` (apply the transformations and write the results), and
``convert`` (re-emit a graph or schema file in canonical form).

Exit codes: 0 when the requested check passes or the work is done, 1 when a
check fails (violated dependency, normal-form violation), 2 for unusable
input or arguments.  All JSON output is byte-stable across runs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Iterable

from .errors import GonormError, UnsatisfiedDependency
from .gofd import GoFd, applicable_deps, minimal_cover, satisfies
from .graph import dump_graph, load_graph, save_graph
from .metrics import build_report
from .normalform import DEFAULT_MAX_ATTRS, NormalForm, check_gn_nf
from .normalize import full_normalize, scoped_normalize
from .parser import format_schema, load_schema, parse_pattern_text, save_schema
from .pattern import Variable, render_pattern, render_var


def _print_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2, ensure_ascii=False))


def _warn(lines: Iterable[str]) -> None:
    for line in lines:
        print(f"warning: {line}", file=sys.stderr)


def _render_row(variables: tuple[Variable, ...], row: tuple) -> str:
    return ", ".join(f"{render_var(v)}={value!r}" for v, value in zip(variables, row))


def _scope_filter(deps: Iterable[GoFd], scope_text: str | None) -> list[GoFd]:
    deps = list(deps)
    if scope_text is None:
        return deps
    return list(applicable_deps(deps, parse_pattern_text(scope_text)))


def cmd_check(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    doc = load_schema(args.schema)
    _warn(doc.warnings)
    deps = _scope_filter(doc.schema, args.scope)
    results = [(dep, satisfies(graph, dep, max_witnesses=args.max_witnesses))
               for dep in deps]
    holds = all(outcome.holds for _, outcome in results)
    if args.format == "json":
        _print_json({
            "holds": holds,
            "results": [
                {
                    "gofd": dep.render(),
                    "holds": outcome.holds,
                    "variables": [render_var(v) for v in outcome.variables],
                    "witnesses": [[list(a), list(b)] for a, b in outcome.witnesses],
                }
                for dep, outcome in results
            ],
        })
    else:
        for dep, outcome in results:
            print(f"{'ok       ' if outcome.holds else 'VIOLATED '}{dep.render()}")
            for first, second in outcome.witnesses:
                print(f"  between ({_render_row(outcome.variables, first)})")
                print(f"      and ({_render_row(outcome.variables, second)})")
    return 0 if holds else 1


def cmd_mincover(args: argparse.Namespace) -> int:
    doc = load_schema(args.schema)
    _warn(doc.warnings)
    if args.scope is not None:
        scopes = [parse_pattern_text(args.scope)]
    else:
        scopes = doc.schema.scopes()
    covers = [(scope, minimal_cover(applicable_deps(doc.schema, scope)))
              for scope in scopes]
    flattened = [dep for _, cover in covers for dep in cover]
    if args.out:
        save_schema(flattened, args.out)
    if args.format == "json":
        _print_json({
            "scopes": [
                {"scope": render_pattern(scope),
                 "cover": [dep.render() for dep in cover]}
                for scope, cover in covers
            ],
        })
    else:
        print(format_schema(flattened), end="")
    return 0


def cmd_metrics(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    doc = load_schema(args.schema)
    _warn(doc.warnings)
    report = build_report(graph, doc.schema)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    if args.format == "json":
        _print_json(report)
    else:
        g = report["graph"]
        s = report["schema"]
        print(f"graph: {g['nodeCount']} nodes, {g['edgeCount']} edges, "
              f"avg props {g['avgNodePropCount']:.2f} per node, "
              f"{g['avgEdgePropCount']:.2f} per edge")
        print(f"schema: {s['total']} dependencies ({s['withinNode']} within-node, "
              f"{s['withinEdge']} within-edge, {s['between']} between)")
        for entry in report["perDependency"]:
            tag = "  (no matches)" if entry.get("empty") else ""
            print(f"minimality {entry['minimality']:.2f}  max {entry['max']}  "
                  f"avg {entry['avg']:.2f}  {entry['gofd']}{tag}")
    return 0


def cmd_nf(args: argparse.Namespace) -> int:
    doc = load_schema(args.schema)
    _warn(doc.warnings)
    graph = load_graph(args.graph) if args.graph else None
    form = NormalForm(args.form)
    if form is NormalForm.GN1NF and graph is None:
        print("error: checking 1nf needs --graph", file=sys.stderr)
        return 2
    report = check_gn_nf(form, doc.schema, graph=graph, max_attrs=args.max_attrs)
    if args.format == "json":
        _print_json({
            "form": report.form.value,
            "holds": report.holds,
            "violations": [
                {"scope": v.scope, "dependency": v.dependency, "reason": v.reason.value}
                for v in report.violations
            ],
        })
    else:
        state = "holds" if report.holds else f"violated ({len(report.violations)})"
        print(f"{report.form.value}: {state}")
        for violation in report.violations:
            print(f"  {violation.dependency}  [{violation.reason.value}]")
    return 0 if report.holds else 1


def cmd_normalize(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    doc = load_schema(args.schema)
    _warn(doc.warnings)
    if args.scope is not None:
        result = scoped_normalize(graph, doc.schema, parse_pattern_text(args.scope),
                                  max_witnesses=args.max_witnesses)
    else:
        result = full_normalize(graph, doc.schema, max_witnesses=args.max_witnesses)
    graph_path = f"{args.out}.graph.json"
    schema_path = f"{args.out}.schema.gofd"
    save_graph(result.graph, graph_path)
    save_schema(result.schema, schema_path)
    written = [graph_path, schema_path]
    if args.explain:
        log_path = f"{args.out}.log.json"
        log_doc = {"passes": [log.to_dict(explain=True) for log in result.logs]}
        with open(log_path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(log_doc, indent=2, ensure_ascii=False) + "\n")
        written.append(log_path)
    if args.format == "json":
        _print_json({
            "passes": [log.to_dict(explain=args.explain) for log in result.logs],
            "written": written,
        })
    else:
        for log in result.logs:
            print(f"pass {log.scope}: {len(log.transformations)} transformations, "
                  f"{len(log.kept)} kept, {len(log.key_dependencies)} key dependencies")
            for warning in log.warnings:
                print(f"  warning: {warning}")
        for path in written:
            print(f"wrote {path}")
    return 0


def cmd_convert(args: argparse.Namespace) -> int:
    if bool(args.graph) == bool(args.schema):
        print("error: convert needs exactly one of --graph or --schema",
              file=sys.stderr)
        return 2
    if args.graph:
        text = dump_graph(load_graph(args.graph))
    else:
        doc = load_schema(args.schema)
        _warn(doc.warnings)
        text = format_schema(doc.schema)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def _add_format(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("human", "json"), default="human",
                     help="output style (default: human)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gonorm",
        description="Dependency-guided normalization of labeled property graphs.")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="test whether the graph satisfies the schema")
    check.add_argument("--graph", required=True)
    check.add_argument("--schema", required=True)
    check.add_argument("--scope", help="restrict to dependencies applicable to this pattern")
    check.add_argument("--max-witnesses", type=int, default=5)
    _add_format(check)
    check.set_defaults(func=cmd_check)

    mincover = commands.add_parser("mincover", help="minimal cover per scope")
    mincover.add_argument("--schema", required=True)
    mincover.add_argument("--scope")
    mincover.add_argument("--out", help="write the cover as a schema file")
    _add_format(mincover)
    mincover.set_defaults(func=cmd_mincover)

    metrics = commands.add_parser("metrics", help="redundancy report for graph and schema")
    metrics.add_argument("--graph", required=True)
    metrics.add_argument("--schema", required=True)
    metrics.add_argument("--out", help="also write the JSON report here")
    _add_format(metrics)
    metrics.set_defaults(func=cmd_metrics)

    nf = commands.add_parser("nf", help="normal-form check")
    nf.add_argument("--schema", required=True)
    nf.add_argument("--graph", help="needed only for --form 1nf")
    nf.add_argument("--form", choices=("1nf", "2nf", "3nf", "bcnf"), default="bcnf")
    nf.add_argument("--max-attrs", type=int, default=DEFAULT_MAX_ATTRS,
                    help="refuse scopes with more attributes than this")
    _add_format(nf)
    nf.set_defaults(func=cmd_nf)

    normalize = commands.add_parser("normalize", help="apply the transformations")
    normalize.add_argument("--graph", required=True)
    normalize.add_argument("--schema", required=True)
    normalize.add_argument("--scope", help="normalize only this scope")
    normalize.add_argument("--out", required=True,
                           help="basename for <out>.graph.json and <out>.schema.gofd")
    normalize.add_argument("--explain", action="store_true",
                           help="also write <out>.log.json with full action plans")
    normalize.add_argument("--max-witnesses", type=int, default=5)
    _add_format(normalize)
    normalize.set_defaults(func=cmd_normalize)

    convert = commands.add_parser("convert", help="canonicalize a graph or schema file")
    convert.add_argument("--graph")
    convert.add_argument("--schema")
    convert.add_argument("--out")
    convert.set_defaults(func=cmd_convert)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    os.environ.get("GONORM_SEED")  # reserved; all output is deterministic
    try:
        return args.func(args)
    except UnsatisfiedDependency as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (GonormError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
