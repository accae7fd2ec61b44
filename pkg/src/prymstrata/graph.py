"""
Genus-weighted graphs in half-edge form.

A graph is a list of vertex genera, an anchor map sending each half-edge to
its vertex, and an involution on half-edges.  Fixed points of the involution
are legs and carry a string label; the 2-element orbits are edges.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .canon import canonical_labeling
from .errors import GraphError

MAX_GENUS = 2**31 - 1
RAM_PREFIX = "ram:"


class ValidationReport(list):
    """List of human-readable violations; empty means valid."""

    @property
    def ok(self) -> bool:
        return not self

    def __str__(self):
        if not self:
            return "valid"
        return "\n".join(self)


class Stability(str, Enum):
    UNSTABLE = "unstable"
    STRICTLY_SEMISTABLE = "strictly_semistable"
    STABLE = "stable"


@dataclass(frozen=True)
class WeightedGraph:
    genera: tuple[int, ...]
    anchors: tuple[int, ...]
    involution: tuple[int, ...]
    leg_labels: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "genera", tuple(self.genera))
        object.__setattr__(self, "anchors", tuple(self.anchors))
        object.__setattr__(self, "involution", tuple(self.involution))
        if isinstance(self.leg_labels, Mapping):
            legs = self.leg_labels.items()
        else:
            legs = self.leg_labels
        object.__setattr__(self, "leg_labels", tuple(sorted((int(h), str(l)) for h, l in legs)))

    @classmethod
    def build(cls, genera: Sequence[int], edges: Iterable[tuple[int, int]] = (),
              legs: Iterable[tuple[int, str]] = ()) -> "WeightedGraph":
        """Assemble a graph from ``(u, v)`` edge pairs and ``(v, label)`` legs.

        Edge ``k`` gets half-edges ``2k`` (at ``u``) and ``2k+1`` (at ``v``);
        legs follow in the given order.
        """
        anchors, inv, labels = [], [], []
        for u, v in edges:
            h = len(anchors)
            anchors += [u, v]
            inv += [h + 1, h]
        for v, label in legs:
            h = len(anchors)
            anchors.append(v)
            inv.append(h)
            labels.append((h, label))
        return cls(tuple(genera), tuple(anchors), tuple(inv), tuple(labels))

    # -- basic accessors -------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_half_edges(self) -> int:
        return len(self.anchors)

    @property
    def legs(self) -> dict[int, str]:
        return dict(self.leg_labels)

    def is_leg(self, h: int) -> bool:
        return self.involution[h] == h

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(h, iota(h))`` with ``h < iota(h)``, sorted."""
        return [(h, k) for h, k in enumerate(self.involution) if h < k]

    @property
    def n_edges(self) -> int:
        return sum(1 for h, k in enumerate(self.involution) if h < k)

    def half_edges_at(self, v: int) -> list[int]:
        return [h for h, a in enumerate(self.anchors) if a == v]

    def leg_label(self, h: int) -> str:
        return self.legs[h]

    def neighbors(self, v: int) -> list[int]:
        return [self.anchors[self.involution[h]] for h in self.half_edges_at(v) if not self.is_leg(h)]

    def total_genus(self) -> int:
        return graph_genus(self)

    def to_dict(self) -> dict:
        return {
            "vertices": [{"genus": g} for g in self.genera],
            "half_edges": [{"vertex": a} for a in self.anchors],
            "involution": list(self.involution),
            "legs": {str(h): l for h, l in self.leg_labels},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "WeightedGraph":
        try:
            genera = [int(v["genus"]) for v in data["vertices"]]
            anchors = [int(h["vertex"]) for h in data["half_edges"]]
            inv = [int(i) for i in data["involution"]]
            legs = {int(h): str(l) for h, l in data.get("legs", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph record: {exc!r}") from exc
        return cls(tuple(genera), tuple(anchors), tuple(inv), legs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "WeightedGraph":
        return cls.from_dict(json.loads(text))


# -- predicates and invariants ---------------------------------------------


def validate_graph(G: WeightedGraph, connected: bool = True) -> ValidationReport:
    report = ValidationReport()
    nv, nh = G.n_vertices, G.n_half_edges
    for v, g in enumerate(G.genera):
        if not isinstance(g, int) or g < 0 or g > MAX_GENUS:
            report.append(f"vertex {v}: genus {g!r} outside [0, {MAX_GENUS}]")
    if len(G.involution) != nh:
        report.append(f"involution has length {len(G.involution)}, expected {nh}")
        return report
    for h, a in enumerate(G.anchors):
        if not 0 <= a < nv:
            report.append(f"half-edge {h}: anchor {a} is not a vertex")
    inv = G.involution
    if any(not 0 <= k < nh for k in inv):
        report.append("involution has out-of-range entries")
        return report
    if any(inv[inv[h]] != h for h in range(nh)):
        report.append("involution not self-inverse")
    fixed = {h for h in range(nh) if inv[h] == h}
    labelled = set(G.legs)
    for h in sorted(fixed - labelled):
        report.append(f"leg {h} has no label")
    for h in sorted(labelled - fixed):
        report.append(f"half-edge {h} is labelled but not a leg")
    labels = [l for _, l in G.leg_labels]
    if len(set(labels)) != len(labels):
        report.append("leg labels not distinct")
    if connected and nv and report.ok and not is_connected(G):
        report.append("disconnected")
    return report


def _require_vertex(G: WeightedGraph, v: int):
    if not 0 <= v < G.n_vertices:
        raise GraphError(f"invalid vertex index {v}")


def is_connected(G: WeightedGraph) -> bool:
    if G.n_vertices == 0:
        return True
    adj: list[list[int]] = [[] for _ in range(G.n_vertices)]
    for h, k in G.edges():
        adj[G.anchors[h]].append(G.anchors[k])
        adj[G.anchors[k]].append(G.anchors[h])
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == G.n_vertices


def valence(G: WeightedGraph, v: int) -> int:
    _require_vertex(G, v)
    return sum(1 for a in G.anchors if a == v)


def stability_value(G: WeightedGraph, v: int) -> int:
    """``2g(v) - 2 + n(v)``."""
    return 2 * G.genera[v] - 2 + valence(G, v)


def stability_class(G: WeightedGraph, v: int) -> Stability:
    s = stability_value(G, v)
    if s < 0:
        return Stability.UNSTABLE
    if s == 0:
        return Stability.STRICTLY_SEMISTABLE
    return Stability.STABLE


def is_semistable(G: WeightedGraph) -> bool:
    return is_connected(G) and all(stability_value(G, v) >= 0 for v in range(G.n_vertices))


def is_stable(G: WeightedGraph) -> bool:
    return is_connected(G) and all(stability_value(G, v) > 0 for v in range(G.n_vertices))


def graph_genus(G: WeightedGraph) -> int:
    if not is_connected(G):
        raise GraphError("graph_genus needs a connected graph")
    return sum(G.genera) + G.n_edges - G.n_vertices + 1


# -- relabelling and canonical form ------------------------------------------


def relabel(G: WeightedGraph, vertex_map: Sequence[int], half_edge_map: Sequence[int]) -> WeightedGraph:
    """Rename old vertex ``i`` to ``vertex_map[i]`` and half-edge ``h`` to ``half_edge_map[h]``."""
    nv, nh = G.n_vertices, G.n_half_edges
    genera = [0] * nv
    for v, g in enumerate(G.genera):
        genera[vertex_map[v]] = g
    anchors = [0] * nh
    inv = [0] * nh
    for h in range(nh):
        anchors[half_edge_map[h]] = vertex_map[G.anchors[h]]
        inv[half_edge_map[h]] = half_edge_map[G.involution[h]]
    legs = {half_edge_map[h]: l for h, l in G.leg_labels}
    return WeightedGraph(tuple(genera), tuple(anchors), tuple(inv), legs)


@dataclass(frozen=True)
class CanonicalGraph:
    canonical_code: bytes
    vertex_map: tuple[int, ...]
    half_edge_map: tuple[int, ...]
    graph: WeightedGraph


def _graph_colouring(G: WeightedGraph):
    legs = G.legs
    colors = []
    for v in range(G.n_vertices):
        labels = tuple(sorted(legs[h] for h in G.half_edges_at(v) if h in legs))
        colors.append((G.genera[v], labels))
    adj: list[dict[int, int]] = [dict() for _ in range(G.n_vertices)]
    for h, k in G.edges():
        u, w = G.anchors[h], G.anchors[k]
        adj[u][w] = adj[u].get(w, 0) + 1
        if u != w:
            adj[w][u] = adj[w].get(u, 0) + 1
    return colors, adj


def standard_half_edge_order(G: WeightedGraph, pos: Sequence[int]) -> list[int]:
    """Half-edges ordered edge by edge (by endpoint positions), then legs by (position, label)."""
    keyed = []
    for h, k in G.edges():
        a, b = pos[G.anchors[h]], pos[G.anchors[k]]
        if a > b:
            h, k, a, b = k, h, b, a
        keyed.append(((a, b), h, k))
    keyed.sort()
    order = []
    for _, h, k in keyed:
        order += [h, k]
    legs = sorted(((pos[G.anchors[h]], l), h) for h, l in G.leg_labels)
    order += [h for _, h in legs]
    return order


def canonical_form(G: WeightedGraph) -> CanonicalGraph:
    report = validate_graph(G, connected=False)
    if not report.ok:
        raise GraphError(f"malformed graph: {report}")
    colors, adj = _graph_colouring(G)
    order, _ = canonical_labeling(colors, adj)
    pos = [0] * G.n_vertices
    for i, v in enumerate(order):
        pos[v] = i
    hord = standard_half_edge_order(G, pos)
    hmap = [0] * G.n_half_edges
    for i, h in enumerate(hord):
        hmap[h] = i
    H = relabel(G, pos, hmap)
    return CanonicalGraph(H.to_json().encode(), tuple(pos), tuple(hmap), H)


def isomorphic(G1: WeightedGraph, G2: WeightedGraph) -> bool:
    return canonical_form(G1).canonical_code == canonical_form(G2).canonical_code


# -- graph surgery and enumeration -------------------------------------------


def contract_edges(G: WeightedGraph, edge_halves: Iterable[int]) -> tuple[WeightedGraph, list[int], list[int]]:
    """Contract the edges containing the given half-edges.

    Returns the contracted graph, the old-to-new vertex map and a map from
    surviving old half-edges to new indices (``-1`` for removed ones).
    Each merged vertex receives ``sum g + #contracted edges - #vertices + 1``.
    """
    removed = set()
    for h in edge_halves:
        removed.add(h)
        removed.add(G.involution[h])
    parent = list(range(G.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in removed:
        a, b = find(G.anchors[h]), find(G.anchors[G.involution[h]])
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(v) for v in range(G.n_vertices)})
    new_index = {r: i for i, r in enumerate(roots)}
    vmap = [new_index[find(v)] for v in range(G.n_vertices)]
    genera = [0] * len(roots)
    nverts = [0] * len(roots)
    for v, g in enumerate(G.genera):
        genera[vmap[v]] += g
        nverts[vmap[v]] += 1
    for h in removed:
        if h < G.involution[h]:
            genera[vmap[G.anchors[h]]] += 1
    for i in range(len(roots)):
        genera[i] -= nverts[i] - 1
    hmap = [-1] * G.n_half_edges
    kept = [h for h in range(G.n_half_edges) if h not in removed]
    for i, h in enumerate(kept):
        hmap[h] = i
    anchors = [vmap[G.anchors[h]] for h in kept]
    inv = [hmap[G.involution[h]] for h in kept]
    legs = {hmap[h]: l for h, l in G.leg_labels}
    return WeightedGraph(tuple(genera), tuple(anchors), tuple(inv), legs), vmap, hmap


def _split_vertex(G: WeightedGraph, v: int) -> Iterator[WeightedGraph]:
    """All one-edge degenerations of ``G`` at ``v`` whose new vertices are stable."""
    hs = G.half_edges_at(v)
    g = G.genera[v]
    nh = G.n_half_edges
    # self-node: genus drops by one, loop added
    if g >= 1:
        yield WeightedGraph(G.genera[:v] + (g - 1,) + G.genera[v + 1:],
                            G.anchors + (v, v), G.involution + (nh + 1, nh), G.leg_labels)
    new = G.n_vertices
    for k in range(len(hs) + 1):
        for side in combinations(hs, k):
            side = set(side)
            n1, n2 = len(hs) - len(side) + 1, len(side) + 1
            for g1 in range(g + 1):
                g2 = g - g1
                if 2 * g1 - 2 + n1 <= 0 or 2 * g2 - 2 + n2 <= 0:
                    continue
                anchors = tuple(new if h in side else a for h, a in enumerate(G.anchors))
                yield WeightedGraph(G.genera[:v] + (g1,) + G.genera[v + 1:] + (g2,),
                                    anchors + (v, new), G.involution + (nh + 1, nh), G.leg_labels)


_STABLE_CACHE: dict = {}


def stable_graphs(genus: int, labels: Sequence[str], n_edges: int) -> list[WeightedGraph]:
    """Stable graphs of the given genus and leg labels with exactly ``n_edges`` edges, up to isomorphism.

    Built by splitting vertices one edge at a time, since contracting any edge
    of a stable graph yields a stable graph.  Output is sorted by canonical code.
    """
    labels = tuple(labels)
    if 2 * genus - 2 + len(labels) <= 0:
        raise GraphError(f"no stable graphs of genus {genus} with {len(labels)} legs")
    key = (genus, labels, n_edges)
    if key in _STABLE_CACHE:
        return _STABLE_CACHE[key]
    if n_edges == 0:
        out = [WeightedGraph.build([genus], [], [(0, l) for l in labels])]
    else:
        seen: dict[bytes, WeightedGraph] = {}
        for G in stable_graphs(genus, labels, n_edges - 1):
            for v in range(G.n_vertices):
                for H in _split_vertex(G, v):
                    c = canonical_form(H)
                    seen.setdefault(c.canonical_code, c.graph)
        out = [seen[k] for k in sorted(seen)]
    _STABLE_CACHE[key] = out
    return out


def subdivide_edges(G: WeightedGraph, edge_halves: Iterable[int]) -> WeightedGraph:
    """Insert a genus-0 vertex in the middle of each selected edge."""
    genera = list(G.genera)
    anchors = list(G.anchors)
    inv = list(G.involution)
    for h in edge_halves:
        k = inv[h]
        w = len(genera)
        genera.append(0)
        a, b = len(anchors), len(anchors) + 1
        anchors += [w, w]
        inv += [h, k]
        inv[h], inv[k] = a, b
    return WeightedGraph(tuple(genera), tuple(anchors), tuple(inv), G.leg_labels)
