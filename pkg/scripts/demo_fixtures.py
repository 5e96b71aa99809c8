#!/usr/bin/env python3
"""Walk the bundled fixture scenarios end to end.

For each scenario: show the redundancy report, normalize, show what each
pass did, and show the report of the result.  With ``--out DIR`` the
normalized graph and schema files are written next to each other in DIR.
"""
from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from gonorm import (
    build_report,
    full_normalize,
    load_graph,
    load_schema,
    save_graph,
    save_schema,
)

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


@dataclass(frozen=True)
class Scenario:
    name: str
    graph: str
    schema: str


SCENARIOS = (
    Scenario("university", "university.graph.json", "university.schema.gofd"),
    Scenario("students", "students.graph.json", "students.schema.gofd"),
    Scenario("metrics-example", "metrics_example.graph.json",
             "metrics_example.schema.gofd"),
)


def show_report(tag: str, report: dict) -> None:
    g = report["graph"]
    print(f"  {tag}: {g['nodeCount']} nodes / {g['edgeCount']} edges, "
          f"avg props {g['avgNodePropCount']:.2f} per node, "
          f"{g['avgEdgePropCount']:.2f} per edge")
    for entry in report["perDependency"]:
        note = "  (no matches)" if entry.get("empty") else ""
        print(f"    minimality {entry['minimality']:.2f}  M={entry['M']}  "
              f"{entry['gofd']}{note}")


def run_scenario(scenario: Scenario, out_dir: Path | None) -> None:
    print(f"== {scenario.name} ==")
    graph = load_graph(str(FIXTURES / scenario.graph))
    doc = load_schema(str(FIXTURES / scenario.schema))
    for warning in doc.warnings:
        print(f"  warning: {warning}")
    show_report("before", build_report(graph, doc.schema))

    result = full_normalize(graph, doc.schema)
    for log in result.logs:
        print(f"  pass {log.scope}")
        for plan in log.transformations:
            print(f"    transformed [{plan.kind.value}] "
                  f"{plan.dependency.render()}  ({plan.match_count} matches)")
        for text in log.key_dependencies:
            print(f"    emitted key dependency {text}")
        for text in log.kept:
            print(f"    kept {text}")
        for text in log.warnings:
            print(f"    warning: {text}")

    show_report("after", build_report(result.graph, result.schema))
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        graph_path = out_dir / f"{scenario.name}.graph.json"
        schema_path = out_dir / f"{scenario.name}.schema.gofd"
        log_path = out_dir / f"{scenario.name}.log.json"
        save_graph(result.graph, str(graph_path))
        save_schema(result.schema, str(schema_path))
        log_path.write_text(json.dumps(
            {"passes": [log.to_dict(explain=True) for log in result.logs]},
            indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"  wrote {graph_path}, {schema_path}, {log_path}")
    print()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=None,
                        help="directory for the normalized outputs")
    parser.add_argument("--only", choices=[s.name for s in SCENARIOS],
                        help="run a single scenario")
    args = parser.parse_args(argv)
    for scenario in SCENARIOS:
        if args.only is None or scenario.name == args.only:
            run_scenario(scenario, args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
