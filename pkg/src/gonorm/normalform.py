"""Normal-form checks for a graph schema.

Keys and normal forms are judged per scope, over the scope's attribute set
and the dependencies that restrict to it (plus the structural axioms that
hold in every graph).  The first normal form concerns the data itself and is
guaranteed by the atomic-value rule of the graph store; the second is vacuous
because patterns only expose whole objects, never partial keys; the third and
Boyce-Codd forms are the interesting checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from .errors import SizeLimit
from .gofd import GoFd, applicable_deps, gofd, scope_closure
from .graph import Graph, check_atomic
from .pattern import Pattern, Variable, attrs, render_pattern, scope_key, var_sort_key


class NormalForm(Enum):
    GN1NF = "1nf"
    GN2NF = "2nf"
    GN3NF = "3nf"
    GNBCNF = "bcnf"


class ViolationReason(Enum):
    NOT_SUPERKEY = "lhs-not-superkey"
    NOT_PRIME = "rhs-not-prime"


@dataclass(frozen=True)
class Violation:
    scope: str
    dependency: str
    reason: ViolationReason


@dataclass(frozen=True)
class NormalFormReport:
    form: NormalForm
    holds: bool
    violations: tuple[Violation, ...] = ()


DEFAULT_MAX_ATTRS = 12


def is_superkey(candidate: Iterable[Variable], scope: Pattern, deps: Iterable[GoFd]) -> bool:
    return scope_closure(candidate, deps, scope) == attrs(scope)


def candidate_keys(scope: Pattern, deps: Iterable[GoFd],
                   max_attrs: int = DEFAULT_MAX_ATTRS) -> tuple[frozenset[Variable], ...]:
    """All subset-minimal superkeys of the scope's attribute set.

    Enumerates subsets by size, skipping supersets of keys already found;
    scopes with more than ``max_attrs`` attributes are refused.
    """
    universe = sorted(attrs(scope), key=var_sort_key)
    if len(universe) > max_attrs:
        raise SizeLimit(f"scope has {len(universe)} attributes, limit is {max_attrs}")
    deps = list(deps)
    keys: list[frozenset[Variable]] = []
    for size in range(1, len(universe) + 1):
        for combo in combinations(universe, size):
            candidate = frozenset(combo)
            if any(key <= candidate for key in keys):
                continue
            if is_superkey(candidate, scope, deps):
                keys.append(candidate)
    return tuple(sorted(keys, key=lambda key: tuple(sorted(map(var_sort_key, key)))))


def check_gn1nf(graph: Graph) -> NormalFormReport:
    """Atomic property values; holds by construction, verified defensively."""
    for obj_id in graph.iter_objects():
        for value in graph.props(obj_id).values():
            check_atomic(value)
    return NormalFormReport(NormalForm.GN1NF, True)


def _lhs_candidates(scope: Pattern, deps: list[GoFd]) -> list[frozenset[Variable]]:
    """Left sides worth testing: unions of schema left sides plus single variables."""
    unions: set[frozenset[Variable]] = set()
    for dep in deps:
        extended = {dep.lhs} | {u | dep.lhs for u in unions}
        unions |= extended
    singles = {frozenset([v]) for v in attrs(scope)}
    out = unions | singles
    return sorted(out, key=lambda s: (len(s), tuple(sorted(map(var_sort_key, s)))))


def check_scoped(form: NormalForm, scope: Pattern, schema: Iterable[GoFd],
                 max_attrs: int = DEFAULT_MAX_ATTRS) -> NormalFormReport:
    """Third or Boyce-Codd normal form of one scope.

    Every non-trivial dependency entailed for the scope must have a superkey
    left side; the third normal form also accepts a right side that is part
    of some candidate key.  Entailed dependencies are enumerated with left
    sides drawn from unions of schema left sides plus single variables, and
    single-variable right sides.
    """
    if form is NormalForm.GN2NF:
        return NormalFormReport(NormalForm.GN2NF, True)
    if form not in (NormalForm.GN3NF, NormalForm.GNBCNF):
        raise ValueError(f"per-scope check expects 3nf or bcnf, got {form.value}")
    deps = list(applicable_deps(schema, scope))
    universe = attrs(scope)
    prime: set[Variable] = set()
    if form is NormalForm.GN3NF:
        for key in candidate_keys(scope, deps, max_attrs=max_attrs):
            prime |= key
    violations: list[Violation] = []
    for lhs in _lhs_candidates(scope, deps):
        implied = scope_closure(lhs, deps, scope)
        if implied == universe:
            continue  # superkey left side cannot violate
        for rhs in sorted(implied - lhs, key=var_sort_key):
            if form is NormalForm.GN3NF and rhs in prime:
                continue
            reason = (ViolationReason.NOT_SUPERKEY if form is NormalForm.GNBCNF
                      else ViolationReason.NOT_PRIME)
            violations.append(Violation(render_pattern(scope),
                                        gofd(scope, lhs, [rhs]).render(), reason))
    unique = tuple(dict.fromkeys(violations))
    return NormalFormReport(form, not unique, unique)


def check_gn_nf(form: NormalForm, schema: Iterable[GoFd], graph: Graph | None = None,
                max_attrs: int = DEFAULT_MAX_ATTRS) -> NormalFormReport:
    """Whole-schema check: the conjunction of the per-scope checks."""
    if form is NormalForm.GN1NF:
        if graph is None:
            raise ValueError("the first normal form is a property of the graph; pass one")
        return check_gn1nf(graph)
    if form is NormalForm.GN2NF:
        return NormalFormReport(NormalForm.GN2NF, True)
    deps = list(schema)
    seen: set[str] = set()
    violations: list[Violation] = []
    for dep in deps:
        key = scope_key(dep.scope)
        if key in seen:
            continue
        seen.add(key)
        report = check_scoped(form, dep.scope, deps, max_attrs=max_attrs)
        violations.extend(report.violations)
    unique = tuple(dict.fromkeys(violations))
    return NormalFormReport(form, not unique, unique)
