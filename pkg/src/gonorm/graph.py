"""In-memory labeled property graph with a JSON file format.

Nodes and edges are objects drawn from one id space (the two sets stay
disjoint), each carrying a label set and a property map.  Property values are
atomic: strings, numbers, or booleans.  Nested values are rejected so that
every graph is first-normal-form by construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, IO, Iterable, Iterator, Union

from .errors import (
    EndpointError,
    FormatError,
    InvariantError,
    NotFoundError,
    ParseError,
)

Atomic = Union[str, int, float, bool]


def check_atomic(value: Any) -> Atomic:
    """Return the value if it is an allowed property value, else raise FormatError."""
    if isinstance(value, (str, int, float, bool)):
        return value
    raise FormatError(f"property values must be string/number/boolean, got {type(value).__name__}")


@dataclass
class NodeRecord:
    labels: set[str] = field(default_factory=set)
    props: dict[str, Atomic] = field(default_factory=dict)


@dataclass
class EdgeRecord:
    src: str
    tgt: str
    labels: set[str] = field(default_factory=set)
    props: dict[str, Atomic] = field(default_factory=dict)


class Graph:
    """Mutable property graph store.

    ``nodes`` and ``edges`` map object ids to records; treat them as
    read-only and mutate through the methods, which maintain the invariants
    (disjoint id spaces, total endpoints, atomic values).  No locking is done;
    a graph instance is not safe for concurrent mutation.
    """

    def __init__(self) -> None:
        self.nodes: dict[str, NodeRecord] = {}
        self.edges: dict[str, EdgeRecord] = {}
        self._node_counter = 0
        self._edge_counter = 0

    # -- object management ------------------------------------------------

    def _fresh_id(self, prefix: str) -> str:
        counter = self._node_counter if prefix == "n" else self._edge_counter
        while True:
            counter += 1
            candidate = f"{prefix}{counter}"
            if candidate not in self.nodes and candidate not in self.edges:
                break
        if prefix == "n":
            self._node_counter = counter
        else:
            self._edge_counter = counter
        return candidate

    def add_node(self, labels: Iterable[str] = (), props: dict[str, Atomic] | None = None,
                 node_id: str | None = None) -> str:
        if node_id is None:
            node_id = self._fresh_id("n")
        elif node_id in self.nodes or node_id in self.edges:
            raise InvariantError(f"duplicate id: object {node_id!r} already exists")
        record = NodeRecord(labels=set(labels))
        for key, value in (props or {}).items():
            record.props[key] = check_atomic(value)
        self.nodes[node_id] = record
        return node_id

    def add_edge(self, src: str, tgt: str, labels: Iterable[str] = (),
                 props: dict[str, Atomic] | None = None, edge_id: str | None = None) -> str:
        for endpoint in (src, tgt):
            if endpoint not in self.nodes:
                raise EndpointError(f"endpoint {endpoint!r} is not a node of the graph")
        if edge_id is None:
            edge_id = self._fresh_id("e")
        elif edge_id in self.nodes or edge_id in self.edges:
            raise InvariantError(f"duplicate id: object {edge_id!r} already exists")
        record = EdgeRecord(src=src, tgt=tgt, labels=set(labels))
        for key, value in (props or {}).items():
            record.props[key] = check_atomic(value)
        self.edges[edge_id] = record
        return edge_id

    def remove_object(self, obj_id: str) -> None:
        """Remove a node (cascading to its incident edges) or an edge."""
        if obj_id in self.edges:
            del self.edges[obj_id]
            return
        if obj_id in self.nodes:
            incident = [eid for eid, e in self.edges.items() if obj_id in (e.src, e.tgt)]
            for eid in incident:
                del self.edges[eid]
            del self.nodes[obj_id]
            return
        raise NotFoundError(f"no object with id {obj_id!r}")

    # -- properties and labels -------------------------------------------

    def _record(self, obj_id: str) -> NodeRecord | EdgeRecord:
        record = self.nodes.get(obj_id) or self.edges.get(obj_id)
        if record is None:
            raise NotFoundError(f"no object with id {obj_id!r}")
        return record

    def set_prop(self, obj_id: str, key: str, value: Atomic) -> None:
        self._record(obj_id).props[key] = check_atomic(value)

    def remove_prop(self, obj_id: str, key: str) -> None:
        """Delete a property; removing an absent key is a no-op."""
        self._record(obj_id).props.pop(key, None)

    def labels(self, obj_id: str) -> frozenset[str]:
        return frozenset(self._record(obj_id).labels)

    def props(self, obj_id: str) -> dict[str, Atomic]:
        return dict(self._record(obj_id).props)

    def is_node(self, obj_id: str) -> bool:
        return obj_id in self.nodes

    def is_edge(self, obj_id: str) -> bool:
        return obj_id in self.edges

    def copy(self) -> Graph:
        dup = Graph()
        dup._node_counter = self._node_counter
        dup._edge_counter = self._edge_counter
        for nid, n in self.nodes.items():
            dup.nodes[nid] = NodeRecord(labels=set(n.labels), props=dict(n.props))
        for eid, e in self.edges.items():
            dup.edges[eid] = EdgeRecord(src=e.src, tgt=e.tgt, labels=set(e.labels), props=dict(e.props))
        return dup

    def __len__(self) -> int:
        return len(self.nodes) + len(self.edges)

    def iter_objects(self) -> Iterator[str]:
        yield from self.nodes
        yield from self.edges


# -- serialization --------------------------------------------------------

def graph_to_dict(graph: Graph) -> dict[str, Any]:
    """JSON-ready representation; object, label, and key order is sorted."""
    return {
        "nodes": [
            {
                "id": nid,
                "labels": sorted(graph.nodes[nid].labels),
                "properties": {k: graph.nodes[nid].props[k] for k in sorted(graph.nodes[nid].props)},
            }
            for nid in sorted(graph.nodes)
        ],
        "edges": [
            {
                "id": eid,
                "src": graph.edges[eid].src,
                "tgt": graph.edges[eid].tgt,
                "labels": sorted(graph.edges[eid].labels),
                "properties": {k: graph.edges[eid].props[k] for k in sorted(graph.edges[eid].props)},
            }
            for eid in sorted(graph.edges)
        ],
    }


def _require(condition: bool, rule: str) -> None:
    if not condition:
        raise InvariantError(rule)


def graph_from_dict(doc: Any) -> Graph:
    _require(isinstance(doc, dict), "document root must be an object")
    _require(isinstance(doc.get("nodes"), list), '"nodes" must be a list')
    _require(isinstance(doc.get("edges"), list), '"edges" must be a list')
    graph = Graph()
    seen: set[str] = set()
    for entry in doc["nodes"]:
        _require(isinstance(entry, dict), "node entries must be objects")
        nid = entry.get("id")
        _require(isinstance(nid, str), "node ids must be strings")
        _require(nid not in seen, f"duplicate id: {nid!r}")
        seen.add(nid)
        labels = entry.get("labels", [])
        _require(isinstance(labels, list) and all(isinstance(l, str) for l in labels),
                 f"labels of {nid!r} must be a list of strings")
        props = entry.get("properties", {})
        _require(isinstance(props, dict), f"properties of {nid!r} must be an object")
        for key, value in props.items():
            _require(isinstance(value, (str, int, float, bool)) and value is not None,
                     f"property {key!r} of {nid!r} must be an atomic string/number/boolean")
        graph.add_node(labels, props, node_id=nid)
    for entry in doc["edges"]:
        _require(isinstance(entry, dict), "edge entries must be objects")
        eid = entry.get("id")
        _require(isinstance(eid, str), "edge ids must be strings")
        _require(eid not in seen, f"duplicate id: {eid!r}")
        seen.add(eid)
        src, tgt = entry.get("src"), entry.get("tgt")
        _require(isinstance(src, str) and isinstance(tgt, str),
                 f"edge {eid!r} must name src and tgt node ids")
        _require(src in graph.nodes, f"dangling endpoint: edge {eid!r} src {src!r} is not a node")
        _require(tgt in graph.nodes, f"dangling endpoint: edge {eid!r} tgt {tgt!r} is not a node")
        labels = entry.get("labels", [])
        _require(isinstance(labels, list) and all(isinstance(l, str) for l in labels),
                 f"labels of {eid!r} must be a list of strings")
        props = entry.get("properties", {})
        _require(isinstance(props, dict), f"properties of {eid!r} must be an object")
        for key, value in props.items():
            _require(isinstance(value, (str, int, float, bool)) and value is not None,
                     f"property {key!r} of {eid!r} must be an atomic string/number/boolean")
        graph.add_edge(src, tgt, labels, props, edge_id=eid)
    return graph


def dump_graph(graph: Graph) -> str:
    return json.dumps(graph_to_dict(graph), indent=2, ensure_ascii=False) + "\n"


def save_graph(graph: Graph, target: str | IO[str]) -> None:
    text = dump_graph(graph)
    if hasattr(target, "write"):
        target.write(text)  # type: ignore[union-attr]
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_graph(source: str | IO[str]) -> Graph:
    if hasattr(source, "read"):
        text = source.read()  # type: ignore[union-attr]
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return graph_from_dict(doc)
