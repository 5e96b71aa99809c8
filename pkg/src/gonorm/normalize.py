"""Dependency-guided normalization of a graph.

One scope is normalized in four phases: gather every schema dependency that
applies to the scope, validate that the graph satisfies them, reduce them to
a minimal cover, then plan and execute the redundancy-removing
transformations.  The resulting schema keeps the untouched dependencies,
keeps the cover members that had nothing to transform, and gains one key
dependency per value-node family the transformations created.

Normalizing a whole schema runs the scopes from most specific to most
general, threading graph and schema through, so a general dependency is
first applied on the specialized scopes it restricts to and only then on
its own.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import NonStrict, UnsatisfiedDependency
from .gofd import GnSchema, GoFd, applicable_deps, gofd, minimal_cover, satisfies
from .graph import Graph
from .pattern import Pattern, more_general_than, render_pattern, scope_key, var_sort_key
from .transform import (
    Transformation,
    TransformationKind,
    build_plans,
    execute_plans,
    match_redundancy_pattern,
)


@dataclass
class PhaseLog:
    """What one scope's normalization pass did, for reporting."""

    scope: str
    collected: list[str] = field(default_factory=list)
    cover: list[str] = field(default_factory=list)
    transformations: list[Transformation] = field(default_factory=list)
    kept: list[str] = field(default_factory=list)
    key_dependencies: list[str] = field(default_factory=list)
    zero_match: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self, explain: bool = False) -> dict:
        doc = {
            "scope": self.scope,
            "collected": list(self.collected),
            "cover": list(self.cover),
            "transformations": [
                plan.to_dict() if explain else
                {"dependency": plan.dependency.render(), "kind": plan.kind.value,
                 "matches": plan.match_count}
                for plan in self.transformations
            ],
            "kept": list(self.kept),
            "keyDependencies": list(self.key_dependencies),
            "zeroMatch": list(self.zero_match),
            "warnings": list(self.warnings),
        }
        return doc


@dataclass
class NormalizationResult:
    graph: Graph
    schema: GnSchema
    logs: list[PhaseLog]


def scoped_normalize(graph: Graph, schema: Iterable[GoFd], scope: Pattern,
                     max_witnesses: int = 5) -> NormalizationResult:
    """Remove the redundancy one scope's dependencies describe.

    Raises ``UnsatisfiedDependency`` if the graph violates any dependency
    applicable to the scope; nothing is changed in that case.  Cover members
    are split to one determined variable each before planning, so a combined
    right side never blocks its transformable parts; a part whose left side
    mixes the node and edge family cannot be transformed and is kept with a
    warning.
    """
    schema = list(schema)
    log = PhaseLog(render_pattern(scope))

    # phase 1: every dependency that restricts to this scope
    sigma = applicable_deps(schema, scope)
    log.collected = [dep.render() for dep in sigma]

    # phase 2: the graph must satisfy them all before restructuring
    for dep in sigma:
        outcome = satisfies(graph, dep, max_witnesses=max_witnesses)
        if not outcome.holds:
            raise UnsatisfiedDependency(dep.render(), outcome.witnesses)
    cover = minimal_cover(sigma)
    log.cover = [dep.render() for dep in cover]

    # phase 3: plan one transformation per determined variable and execute
    parts: list[GoFd] = []
    part_owner: dict[int, int] = {}
    kept_parts: dict[int, list[GoFd]] = {}
    untouched: list[GoFd] = []
    for pos, dep in enumerate(cover):
        for var in sorted(dep.rhs - dep.lhs, key=var_sort_key):
            part = gofd(dep.scope, dep.lhs, [var])
            try:
                match_redundancy_pattern(part)
            except NonStrict as reason:
                log.warnings.append(
                    f"not transformable, kept as is: {part.render()} ({reason})")
                kept_parts.setdefault(pos, []).append(part)
                continue
            part_owner[len(parts)] = pos
            parts.append(part)
    plans, leftovers = build_plans(graph, parts)
    log.transformations = plans
    for dep, kind in leftovers:
        pos = part_owner[parts.index(dep)]
        kept_parts.setdefault(pos, []).append(dep)
        if kind is not TransformationKind.NO_REDUNDANCY:
            log.zero_match.append(dep.render())
    for pos in sorted(kept_parts):
        merged = kept_parts[pos]
        untouched.append(gofd(merged[0].scope, merged[0].lhs,
                              frozenset().union(*(d.rhs for d in merged))))
    result_graph = execute_plans(graph, plans)

    # phase 4: assemble the surviving schema
    result = GnSchema()
    key = scope_key(scope)
    for dep in schema:
        if scope_key(dep.scope) != key:
            result.add(dep)
    for dep in untouched:
        result.add(dep)
    log.kept = [dep.render() for dep in untouched]
    for plan in plans:
        if plan.key_dependency is not None and result.add(plan.key_dependency):
            log.key_dependencies.append(plan.key_dependency.render())
    return NormalizationResult(result_graph, result, [log])


def sort_scopes(scopes: Iterable[Pattern]) -> list[Pattern]:
    """Most specific scope first; ties broken by canonical scope text.

    When one scope generalizes another, the specialized one is normalized
    first, so shared dependencies act on the narrow matches before the wide
    ones.
    """
    unique: dict[str, Pattern] = {}
    for scope in scopes:
        unique.setdefault(scope_key(scope), scope)
    keys = sorted(unique)
    blockers: dict[str, set[str]] = {k: set() for k in keys}
    for a in keys:
        for b in keys:
            if a != b and more_general_than(unique[a], unique[b]):
                blockers[a].add(b)  # a is general: every specialization goes first
    ordered: list[Pattern] = []
    done: set[str] = set()
    while len(done) < len(keys):
        ready = next(k for k in keys if k not in done and blockers[k] <= done)
        done.add(ready)
        ordered.append(unique[ready])
    return ordered


def full_normalize(graph: Graph, schema: Iterable[GoFd],
                   max_witnesses: int = 5) -> NormalizationResult:
    """Normalize every scope of the schema, most specific first.

    The scope list is fixed up front; scopes of key dependencies created
    along the way describe already-normalized value nodes and are not
    processed again.
    """
    current = GnSchema(schema)
    order = sort_scopes(current.scopes())
    logs: list[PhaseLog] = []
    out = graph
    for scope in order:
        step = scoped_normalize(out, current, scope, max_witnesses=max_witnesses)
        out, current = step.graph, step.schema
        logs.extend(step.logs)
    return NormalizationResult(out, current, logs)
