"""Basic graph patterns and their evaluation to relations.

A pattern is one of three shapes: a single node, a single edge with both
endpoints left open, or a node with one incident edge.  Label and key sets
are requirements: an object matches when it carries at least the listed
labels and at least the listed property keys.

Pattern variables are positional.  Two patterns of the same shape correspond
component by component (node variable to node variable, edge variable to edge
variable), no matter how the variables are named.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Union

from .graph import Atomic, Graph

# reserved name given to an edge variable that was written anonymously
ANON_EDGE_VAR = "_e"


@dataclass(frozen=True)
class ObjectVar:
    """Stands for the identity of a matched node or edge."""

    name: str


@dataclass(frozen=True)
class PropVar:
    """Stands for the value of one property of a matched object."""

    name: str
    key: str


Variable = Union[ObjectVar, PropVar]


def render_var(var: Variable) -> str:
    if isinstance(var, ObjectVar):
        return var.name
    return f"{var.name}.{var.key}"


def var_sort_key(var: Variable) -> tuple[str, str]:
    # an object variable sorts before its own property variables
    return (var.name, "" if isinstance(var, ObjectVar) else var.key)


def value_sort_key(value: Atomic) -> tuple[str, str | float]:
    """Total order over atomic values; tags keep mixed types comparable."""
    if isinstance(value, bool):
        return ("b", str(value))
    if isinstance(value, (int, float)):
        return ("n", float(value))
    return ("s", value)


def row_sort_key(row: tuple[Atomic, ...]) -> tuple[tuple[str, str | float], ...]:
    return tuple(value_sort_key(v) for v in row)


def render_vars(variables: Iterable[Variable]) -> str:
    return ",".join(render_var(v) for v in sorted(variables, key=var_sort_key))


class Direction(Enum):
    """Which endpoint of the edge the named node of a node-edge pattern is."""

    OUT = "out"   # node is the source:  (x)-[y]->()
    IN = "in"     # node is the target:  ()-[y]->(x)


@dataclass(frozen=True)
class NodePattern:
    var: str
    labels: frozenset[str] = frozenset()
    keys: frozenset[str] = frozenset()


@dataclass(frozen=True)
class EdgeOnlyPattern:
    """Matches each edge once, regardless of its endpoints or orientation."""

    var: str
    labels: frozenset[str] = frozenset()
    keys: frozenset[str] = frozenset()


@dataclass(frozen=True)
class NodeEdgePattern:
    node_var: str
    node_labels: frozenset[str]
    node_keys: frozenset[str]
    edge_var: str
    edge_labels: frozenset[str]
    edge_keys: frozenset[str]
    direction: Direction


Pattern = Union[NodePattern, EdgeOnlyPattern, NodeEdgePattern]


def node_pattern(var: str, labels: Iterable[str] = (), keys: Iterable[str] = ()) -> NodePattern:
    return NodePattern(var, frozenset(labels), frozenset(keys))


def edge_pattern(var: str, labels: Iterable[str] = (), keys: Iterable[str] = ()) -> EdgeOnlyPattern:
    return EdgeOnlyPattern(var or ANON_EDGE_VAR, frozenset(labels), frozenset(keys))


def node_edge_pattern(node_var: str, node_labels: Iterable[str], node_keys: Iterable[str],
                      edge_var: str, edge_labels: Iterable[str], edge_keys: Iterable[str],
                      direction: Direction) -> NodeEdgePattern:
    return NodeEdgePattern(node_var, frozenset(node_labels), frozenset(node_keys),
                           edge_var or ANON_EDGE_VAR, frozenset(edge_labels),
                           frozenset(edge_keys), direction)


def attrs(pattern: Pattern) -> frozenset[Variable]:
    """All variables a match binds: object identities plus one per required key."""
    if isinstance(pattern, NodePattern):
        out: set[Variable] = {ObjectVar(pattern.var)}
        out.update(PropVar(pattern.var, k) for k in pattern.keys)
        return frozenset(out)
    if isinstance(pattern, EdgeOnlyPattern):
        out = {ObjectVar(pattern.var)}
        out.update(PropVar(pattern.var, k) for k in pattern.keys)
        return frozenset(out)
    out = {ObjectVar(pattern.node_var), ObjectVar(pattern.edge_var)}
    out.update(PropVar(pattern.node_var, k) for k in pattern.node_keys)
    out.update(PropVar(pattern.edge_var, k) for k in pattern.edge_keys)
    return frozenset(out)


def variable_roles(pattern: Pattern) -> dict[str, str]:
    """Map each object variable name to its role, ``"node"`` or ``"edge"``."""
    if isinstance(pattern, NodePattern):
        return {pattern.var: "node"}
    if isinstance(pattern, EdgeOnlyPattern):
        return {pattern.var: "edge"}
    return {pattern.node_var: "node", pattern.edge_var: "edge"}


# -- evaluation -----------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """A set of rows over a fixed tuple of variables (sorted canonically)."""

    variables: tuple[Variable, ...]
    rows: frozenset[tuple[Atomic, ...]]

    @property
    def schema(self) -> frozenset[Variable]:
        return frozenset(self.variables)

    def __len__(self) -> int:
        return len(self.rows)

    def project(self, onto: Iterable[Variable]) -> Relation:
        wanted = sorted(onto, key=var_sort_key)
        index = {v: i for i, v in enumerate(self.variables)}
        missing = [v for v in wanted if v not in index]
        if missing:
            raise KeyError(f"variables not in relation: {[render_var(v) for v in missing]}")
        cols = [index[v] for v in wanted]
        return Relation(tuple(wanted), frozenset(tuple(row[i] for i in cols) for row in self.rows))

    def as_maps(self) -> list[dict[Variable, Atomic]]:
        return [dict(zip(self.variables, row)) for row in self.rows]


def relation_from_maps(variables: Iterable[Variable],
                       assignments: Iterable[dict[Variable, Atomic]]) -> Relation:
    ordered = tuple(sorted(variables, key=var_sort_key))
    rows = frozenset(tuple(m[v] for v in ordered) for m in assignments)
    return Relation(ordered, rows)


def _node_matches(graph: Graph, nid: str, labels: frozenset[str], keys: frozenset[str]) -> bool:
    record = graph.nodes[nid]
    return labels <= record.labels and keys <= record.props.keys()


def _edge_matches(graph: Graph, eid: str, labels: frozenset[str], keys: frozenset[str]) -> bool:
    record = graph.edges[eid]
    return labels <= record.labels and keys <= record.props.keys()


def evaluate(pattern: Pattern, graph: Graph) -> Relation:
    """All matches of the pattern as a relation over ``attrs(pattern)``."""
    assignments: list[dict[Variable, Atomic]] = []
    if isinstance(pattern, NodePattern):
        for nid, record in graph.nodes.items():
            if _node_matches(graph, nid, pattern.labels, pattern.keys):
                row: dict[Variable, Atomic] = {ObjectVar(pattern.var): nid}
                row.update({PropVar(pattern.var, k): record.props[k] for k in pattern.keys})
                assignments.append(row)
    elif isinstance(pattern, EdgeOnlyPattern):
        for eid, record in graph.edges.items():
            if _edge_matches(graph, eid, pattern.labels, pattern.keys):
                row = {ObjectVar(pattern.var): eid}
                row.update({PropVar(pattern.var, k): record.props[k] for k in pattern.keys})
                assignments.append(row)
    else:
        for nid, node in graph.nodes.items():
            if not _node_matches(graph, nid, pattern.node_labels, pattern.node_keys):
                continue
            base: dict[Variable, Atomic] = {ObjectVar(pattern.node_var): nid}
            base.update({PropVar(pattern.node_var, k): node.props[k] for k in pattern.node_keys})
            for eid, edge in graph.edges.items():
                anchored = edge.src == nid if pattern.direction is Direction.OUT else edge.tgt == nid
                if not anchored or not _edge_matches(graph, eid, pattern.edge_labels, pattern.edge_keys):
                    continue
                row = dict(base)
                row[ObjectVar(pattern.edge_var)] = eid
                row.update({PropVar(pattern.edge_var, k): edge.props[k] for k in pattern.edge_keys})
                assignments.append(row)
    return relation_from_maps(attrs(pattern), assignments)


# -- generality and renaming ---------------------------------------------

def more_general_than(general: Pattern, specific: Pattern) -> bool:
    """True when every match of ``specific`` projects to a match of ``general``.

    Componentwise containment of label and key sets, with the shapes compared
    positionally: a node pattern generalizes a node or node-edge pattern; a
    pattern that requires an edge never generalizes one without it.  Edge-only
    patterns compare only with each other (orientation does not constrain them).
    """
    if isinstance(general, NodePattern):
        if isinstance(specific, NodePattern):
            return general.labels <= specific.labels and general.keys <= specific.keys
        if isinstance(specific, NodeEdgePattern):
            return general.labels <= specific.node_labels and general.keys <= specific.node_keys
        return False
    if isinstance(general, EdgeOnlyPattern):
        return (isinstance(specific, EdgeOnlyPattern)
                and general.labels <= specific.labels
                and general.keys <= specific.keys)
    if isinstance(general, NodeEdgePattern) and isinstance(specific, NodeEdgePattern):
        return (general.direction is specific.direction
                and general.node_labels <= specific.node_labels
                and general.node_keys <= specific.node_keys
                and general.edge_labels <= specific.edge_labels
                and general.edge_keys <= specific.edge_keys)
    return False


def rename_map(source: Pattern, target: Pattern) -> dict[str, str]:
    """Positional variable renaming from ``source`` names to ``target`` names."""
    mapping: dict[str, str] = {}
    src_roles = variable_roles(source)
    tgt_by_role: dict[str, str] = {}
    for name, role in variable_roles(target).items():
        tgt_by_role[role] = name
    for name, role in src_roles.items():
        if role in tgt_by_role:
            mapping[name] = tgt_by_role[role]
    return mapping


def rename_variable(var: Variable, mapping: dict[str, str]) -> Variable:
    name = mapping.get(var.name, var.name)
    if isinstance(var, ObjectVar):
        return ObjectVar(name)
    return PropVar(name, var.key)


def canonicalize(pattern: Pattern) -> Pattern:
    """The same pattern with its variables renamed to the fixed names x and y."""
    if isinstance(pattern, NodePattern):
        return replace(pattern, var="x")
    if isinstance(pattern, EdgeOnlyPattern):
        return replace(pattern, var="y")
    return replace(pattern, node_var="x", edge_var="y")


def render_pattern(pattern: Pattern) -> str:
    """Canonical text; label and key sets are printed sorted."""
    def sets(labels: frozenset[str], keys: frozenset[str]) -> str:
        return "{%s}:{%s}" % (",".join(sorted(labels)), ",".join(sorted(keys)))

    if isinstance(pattern, NodePattern):
        return f"({pattern.var}:{sets(pattern.labels, pattern.keys)})"
    if isinstance(pattern, EdgeOnlyPattern):
        var = "" if pattern.var == ANON_EDGE_VAR else pattern.var
        return f"()-[{var}:{sets(pattern.labels, pattern.keys)}]->()"
    var = "" if pattern.edge_var == ANON_EDGE_VAR else pattern.edge_var
    node = f"({pattern.node_var}:{sets(pattern.node_labels, pattern.node_keys)})"
    edge = f"-[{var}:{sets(pattern.edge_labels, pattern.edge_keys)}]->"
    if pattern.direction is Direction.OUT:
        return f"{node}{edge}()"
    return f"(){edge}{node}"


def scope_key(pattern: Pattern) -> str:
    """Identity of a scope: its canonical text with canonical variable names."""
    return render_pattern(canonicalize(pattern))
