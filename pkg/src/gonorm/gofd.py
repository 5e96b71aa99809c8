"""Functional dependencies over graph patterns.

A dependency couples a scope pattern with a descriptor ``X => Y`` over the
pattern's attributes: whenever two matches agree on the variables in X they
must agree on the variables in Y.  Dependencies written against a more
general scope carry over to more specific scopes by positional variable
renaming ("restriction"), which is what makes schema-wide reasoning and
minimal covers work.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import ScopeMismatch, UnboundVariable
from .graph import Atomic, Graph
from .pattern import (
    NodeEdgePattern,
    ObjectVar,
    Pattern,
    PropVar,
    Variable,
    attrs,
    canonicalize,
    evaluate,
    more_general_than,
    render_pattern,
    render_vars,
    rename_map,
    rename_variable,
    row_sort_key,
    scope_key,
    var_sort_key,
    variable_roles,
)


@dataclass(frozen=True)
class Descriptor:
    lhs: frozenset[Variable]
    rhs: frozenset[Variable]


@dataclass(frozen=True)
class GoFd:
    scope: Pattern
    descriptor: Descriptor

    @property
    def lhs(self) -> frozenset[Variable]:
        return self.descriptor.lhs

    @property
    def rhs(self) -> frozenset[Variable]:
        return self.descriptor.rhs

    def is_trivial(self) -> bool:
        return self.rhs <= self.lhs

    def render(self) -> str:
        return (f"{render_pattern(self.scope)}::"
                f"{render_vars(self.lhs)}=>{render_vars(self.rhs)}")

    def canonical(self) -> str:
        """Render with canonical variable names; identity for dedup and ordering."""
        mapping = rename_map(self.scope, canonicalize(self.scope))
        return restrict(self, canonicalize(self.scope), mapping).render()


def gofd(scope: Pattern, lhs: Iterable[Variable], rhs: Iterable[Variable]) -> GoFd:
    return GoFd(scope, Descriptor(frozenset(lhs), frozenset(rhs)))


def restrict(dep: GoFd, scope: Pattern, mapping: dict[str, str] | None = None) -> GoFd:
    """Carry the descriptor over to another scope by positional renaming."""
    if mapping is None:
        mapping = rename_map(dep.scope, scope)
    return gofd(scope,
                (rename_variable(v, mapping) for v in dep.lhs),
                (rename_variable(v, mapping) for v in dep.rhs))


class GnSchema:
    """An ordered collection of dependencies, deduplicated by canonical form."""

    def __init__(self, deps: Iterable[GoFd] = ()):
        self.deps: list[GoFd] = []
        self._seen: set[str] = set()
        for dep in deps:
            self.add(dep)

    def add(self, dep: GoFd) -> bool:
        """Add a dependency; returns False when it is already present."""
        key = dep.canonical()
        if key in self._seen:
            return False
        self._seen.add(key)
        self.deps.append(dep)
        return True

    def __iter__(self) -> Iterator[GoFd]:
        return iter(self.deps)

    def __len__(self) -> int:
        return len(self.deps)

    def __contains__(self, dep: GoFd) -> bool:
        return dep.canonical() in self._seen

    def scopes(self) -> list[Pattern]:
        """The distinct scopes, one representative each, in first-seen order."""
        seen: set[str] = set()
        out: list[Pattern] = []
        for dep in self.deps:
            key = scope_key(dep.scope)
            if key not in seen:
                seen.add(key)
                out.append(dep.scope)
        return out


class DepClass(Enum):
    WITHIN_NODE = "within-node"
    WITHIN_EDGE = "within-edge"
    BETWEEN = "between"


def check_bound(dep: GoFd) -> None:
    universe = attrs(dep.scope)
    for var in sorted(dep.lhs | dep.rhs, key=var_sort_key):
        if var not in universe:
            from .pattern import render_var
            raise UnboundVariable(
                f"variable {render_var(var)} does not occur in scope {render_pattern(dep.scope)}")


def classify(dep: GoFd) -> DepClass:
    """Within-node / within-edge / between, by the object families used."""
    check_bound(dep)
    roles = variable_roles(dep.scope)
    families = {var.name for var in dep.lhs | dep.rhs}
    if len(families) > 1:
        return DepClass.BETWEEN
    family = next(iter(families))
    return DepClass.WITHIN_NODE if roles[family] == "node" else DepClass.WITHIN_EDGE


@dataclass(frozen=True)
class Satisfaction:
    holds: bool
    witnesses: tuple[tuple[tuple[Atomic, ...], tuple[Atomic, ...]], ...]
    variables: tuple[Variable, ...]


def satisfies(graph: Graph, dep: GoFd, max_witnesses: int = 5) -> Satisfaction:
    """Check the dependency on the graph; collects up to ``max_witnesses`` violating pairs."""
    check_bound(dep)
    relation = evaluate(dep.scope, graph)
    index = {v: i for i, v in enumerate(relation.variables)}
    lhs_cols = [index[v] for v in sorted(dep.lhs, key=var_sort_key)]
    rhs_cols = [index[v] for v in sorted(dep.rhs, key=var_sort_key)]
    holds = True
    groups: dict[tuple, tuple] = {}
    witnesses: list[tuple[tuple, tuple]] = []
    for row in sorted(relation.rows, key=row_sort_key):
        left = tuple(row[i] for i in lhs_cols)
        right = tuple(row[i] for i in rhs_cols)
        if left in groups:
            prev_right, prev_row = groups[left]
            if prev_right != right:
                holds = False
                if len(witnesses) < max_witnesses:
                    witnesses.append((prev_row, row))
        else:
            groups[left] = (right, row)
    return Satisfaction(holds, tuple(witnesses), relation.variables)


def structurally_implied(scope: Pattern) -> tuple[GoFd, ...]:
    """Dependencies every graph satisfies on this scope.

    Each object identity determines the object's own required properties, and
    an edge identity determines the endpoint exposed by the pattern.
    """
    out: list[GoFd] = []
    for var in sorted(attrs(scope), key=var_sort_key):
        if isinstance(var, PropVar):
            out.append(gofd(scope, [ObjectVar(var.name)], [var]))
    if isinstance(scope, NodeEdgePattern):
        out.append(gofd(scope, [ObjectVar(scope.edge_var)], [ObjectVar(scope.node_var)]))
    return tuple(out)


def closure(seed: Iterable[Variable], deps: Iterable[GoFd]) -> frozenset[Variable]:
    """Fixpoint of the seed set under the descriptors of ``deps``."""
    result = set(seed)
    pending = list(deps)
    changed = True
    while changed:
        changed = False
        for dep in pending:
            if dep.lhs <= result and not dep.rhs <= result:
                result |= dep.rhs
                changed = True
    return frozenset(result)


def scope_closure(seed: Iterable[Variable], deps: Iterable[GoFd], scope: Pattern) -> frozenset[Variable]:
    return closure(seed, list(deps) + list(structurally_implied(scope)))


def applicable_deps(schema: Iterable[GoFd], scope: Pattern) -> tuple[GoFd, ...]:
    """All schema dependencies whose scope generalizes ``scope``, restricted to it.

    Includes the scope's own dependencies (a pattern generalizes itself).
    The result is deduplicated and ordered by canonical text.
    """
    collected: dict[str, GoFd] = {}
    for dep in schema:
        if more_general_than(dep.scope, scope):
            restricted = restrict(dep, scope)
            collected.setdefault(restricted.canonical(), restricted)
    return tuple(collected[k] for k in sorted(collected))


def implies(schema: Iterable[GoFd], dep: GoFd) -> bool:
    """True when the schema (with the structural axioms) entails the dependency."""
    check_bound(dep)
    given = applicable_deps(schema, dep.scope)
    return dep.rhs <= scope_closure(dep.lhs, given, dep.scope)


def _same_scope(deps: list[GoFd]) -> Pattern:
    scopes = {scope_key(dep.scope) for dep in deps}
    if len(scopes) > 1:
        raise ScopeMismatch(f"dependencies span {len(scopes)} scopes, expected one")
    return deps[0].scope


def minimal_cover(deps: Iterable[GoFd]) -> tuple[GoFd, ...]:
    """Equivalent cover with minimal left sides and no redundant member.

    All dependencies must share one scope (restrict them first).  Right sides
    are split to single variables while minimizing and recombined per left
    side at the end; candidate removals are tried in lexicographic order so
    the result is deterministic.
    """
    pool = [d for d in deps]
    if not pool:
        return ()
    scope = _same_scope(pool)
    # align variable names across alpha-equivalent scopes
    pool = [restrict(dep, scope) for dep in pool]
    for dep in pool:
        check_bound(dep)
    structural = list(structurally_implied(scope))

    # split right sides, drop trivial parts
    split: list[GoFd] = []
    seen: set[str] = set()
    for dep in sorted(pool, key=lambda d: d.render()):
        for var in sorted(dep.rhs - dep.lhs, key=var_sort_key):
            candidate = gofd(dep.scope, dep.lhs, [var])
            if candidate.render() not in seen:
                seen.add(candidate.render())
                split.append(candidate)

    # minimize left sides against the full current set
    minimized: list[GoFd] = []
    current = list(split)
    for i, dep in enumerate(current):
        lhs = set(dep.lhs)
        for var in sorted(dep.lhs, key=var_sort_key):
            if len(lhs) == 1:
                break
            trial = lhs - {var}
            if dep.rhs <= closure(trial, current + structural):
                lhs = trial
        reduced = gofd(dep.scope, lhs, dep.rhs)
        current[i] = reduced
        minimized.append(reduced)

    # drop members implied by the rest
    kept = list(dict.fromkeys(minimized))
    for dep in sorted(list(kept), key=lambda d: d.render()):
        rest = [d for d in kept if d is not dep]
        if dep.rhs <= closure(dep.lhs, rest + structural):
            kept = rest

    # recombine right sides per left side
    grouped: dict[tuple, set[Variable]] = {}
    for dep in kept:
        key = tuple(sorted(dep.lhs, key=var_sort_key))
        grouped.setdefault(key, set()).update(dep.rhs)
    combined = [gofd(scope, set(key), rhs) for key, rhs in grouped.items()]
    return tuple(sorted(combined, key=lambda d: d.render()))
