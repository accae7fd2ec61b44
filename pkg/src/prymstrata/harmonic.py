"""
Finite harmonic morphisms between weighted graphs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import MorphismError
from .graph import RAM_PREFIX, ValidationReport, WeightedGraph, is_connected, validate_graph


@dataclass(frozen=True)
class HarmonicMorphism:
    """A map ``source -> target`` on vertices and half-edges with local degrees.

    ``local_degrees[h']`` is the local degree of source half-edge ``h'``;
    ``degree`` is the declared global degree, needed only when the target has
    no half-edges at all (then it cannot be read off edges or legs).
    """

    source: WeightedGraph
    target: WeightedGraph
    vertex_map: tuple[int, ...]
    half_edge_map: tuple[int, ...]
    local_degrees: tuple[int, ...]
    declared_degree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(self.vertex_map))
        object.__setattr__(self, "half_edge_map", tuple(self.half_edge_map))
        object.__setattr__(self, "local_degrees", tuple(self.local_degrees))

    def vertex_preimages(self, v: int) -> list[int]:
        return [w for w, x in enumerate(self.vertex_map) if x == v]

    def half_edge_preimages(self, h: int) -> list[int]:
        return [k for k, x in enumerate(self.half_edge_map) if x == h]

    def to_dict(self) -> dict:
        d = {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "vertex_map": list(self.vertex_map),
            "half_edge_map": list(self.half_edge_map),
            "local_degrees": list(self.local_degrees),
        }
        if self.declared_degree is not None:
            d["degree"] = self.declared_degree
        return d

    @classmethod
    def from_dict(cls, data: Mapping) -> "HarmonicMorphism":
        try:
            return cls(
                WeightedGraph.from_dict(data["source"]),
                WeightedGraph.from_dict(data["target"]),
                tuple(int(x) for x in data["vertex_map"]),
                tuple(int(x) for x in data["half_edge_map"]),
                tuple(int(x) for x in data["local_degrees"]),
                int(data["degree"]) if data.get("degree") is not None else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MorphismError(f"malformed morphism record: {exc!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def identity_morphism(G: WeightedGraph) -> HarmonicMorphism:
    return HarmonicMorphism(G, G, tuple(range(G.n_vertices)), tuple(range(G.n_half_edges)),
                            (1,) * G.n_half_edges, 1)


def is_ram_label(label: str) -> bool:
    return label.startswith(RAM_PREFIX)


def structural_report(phi: HarmonicMorphism) -> ValidationReport:
    """Well-formedness of both graphs and of the maps, plus conditions i and ii."""
    report = ValidationReport()
    for name, G in (("source", phi.source), ("target", phi.target)):
        for issue in validate_graph(G, connected=False):
            report.append(f"{name}: {issue}")
    if not report.ok:
        return report
    S, T = phi.source, phi.target
    if len(phi.vertex_map) != S.n_vertices:
        report.append("vertex_map length differs from source vertex count")
    if len(phi.half_edge_map) != S.n_half_edges:
        report.append("half_edge_map length differs from source half-edge count")
    if len(phi.local_degrees) != S.n_half_edges:
        report.append("local_degrees length differs from source half-edge count")
    if not report.ok:
        return report
    if any(not 0 <= v < T.n_vertices for v in phi.vertex_map):
        report.append("vertex_map has out-of-range entries")
    if any(not 0 <= h < T.n_half_edges for h in phi.half_edge_map):
        report.append("half_edge_map has out-of-range entries")
    if not report.ok:
        return report
    if set(phi.vertex_map) != set(range(T.n_vertices)):
        missing = sorted(set(range(T.n_vertices)) - set(phi.vertex_map))
        report.append(f"condition i: vertex map not surjective (missing {missing})")
    if set(phi.half_edge_map) != set(range(T.n_half_edges)):
        missing = sorted(set(range(T.n_half_edges)) - set(phi.half_edge_map))
        report.append(f"condition ii: half-edge map not surjective (missing {missing})")
    for h in range(S.n_half_edges):
        image = phi.half_edge_map[h]
        if phi.half_edge_map[S.involution[h]] != T.involution[image]:
            report.append(f"condition ii: half-edge {h} does not commute with the involutions")
        if phi.vertex_map[S.anchors[h]] != T.anchors[image]:
            report.append(f"condition ii: half-edge {h} does not commute with the anchor maps")
        n = phi.local_degrees[h]
        if not isinstance(n, int) or n < 1:
            report.append(f"half-edge {h}: local degree {n!r} is not a positive integer")
        elif n != phi.local_degrees[S.involution[h]]:
            report.append(f"half-edge {h}: local degree not constant on its edge")
    return report


def _degree_scan(phi: HarmonicMorphism):
    """Yield ``(kind, target item, value)`` for each target edge and leg."""
    S, T = phi.source, phi.target
    legs = T.legs
    pre: dict[int, list[int]] = {}
    for k, h in enumerate(phi.half_edge_map):
        pre.setdefault(h, []).append(k)
    for h, k in T.edges():
        total = sum(phi.local_degrees[x] for x in pre.get(h, []))
        yield "edge", (h, k), total
    for h, label in sorted(legs.items()):
        ks = pre.get(h, [])
        if is_ram_label(label):
            yield "leg", label, sum(phi.local_degrees[x] for x in ks)
        else:
            yield "leg", label, len(ks)


def degree(phi: HarmonicMorphism) -> int:
    """Global degree, checked for consistency over every target edge and leg.

    Raises ``MorphismError`` naming the first edge or leg whose preimage
    count disagrees with the others.
    """
    report = structural_report(phi)
    if not report.ok:
        raise MorphismError(f"structural invariant violated: {report[0]}")
    d = phi.declared_degree
    for kind, item, value in _degree_scan(phi):
        if d is None:
            d = value
        elif value != d:
            raise MorphismError(f"{kind} {item}: preimage degree {value} differs from {d}")
    if d is None:
        raise MorphismError("target has no edges or legs and no declared degree")
    return d


def vertex_local_degree(phi: HarmonicMorphism, v_src: int, d: int) -> dict[int, int]:
    """Sum of local degrees at ``v_src`` over each target half-edge at its image."""
    S, T = phi.source, phi.target
    v = phi.vertex_map[v_src]
    sums = {h: 0 for h in T.half_edges_at(v)}
    for k in S.half_edges_at(v_src):
        sums[phi.half_edge_map[k]] += phi.local_degrees[k]
    return sums


def validate_harmonic(phi: HarmonicMorphism, expected_degree: int | None = None) -> ValidationReport:
    """Check conditions i-v plus per-vertex local-degree balance.

    Balance: each source vertex ``v'`` has a local degree ``m(v')`` such that,
    for every half-edge ``h`` at its image, the local degrees of the half-edges
    at ``v'`` over ``h`` sum to ``m(v')``.  Legs whose label starts with
    ``ram:`` must have a single preimage of local degree equal to the degree.
    """
    report = structural_report(phi)
    if not report.ok:
        return report
    S, T = phi.source, phi.target
    d = expected_degree if expected_degree is not None else phi.declared_degree
    for kind, item, value in _degree_scan(phi):
        if d is None:
            d = value
        if value != d:
            cond = "iii" if kind == "edge" else "iv"
            report.append(f"condition {cond}: {kind} {item} has preimage degree {value}, expected {d}")
    if d is None:
        report.append("degree undetermined: target has no edges or legs")
        return report
    legs = T.legs
    for h, label in legs.items():
        ks = phi.half_edge_preimages(h)
        if is_ram_label(label):
            if len(ks) != 1:
                report.append(f"condition iv: ramified leg {label} has {len(ks)} preimages, expected 1")
        elif any(phi.local_degrees[k] != 1 for k in ks):
            report.append(f"condition iv: leg {label} has a preimage of local degree > 1")
    local_m: dict[int, int] = {}
    for v in range(T.n_vertices):
        pre = phi.vertex_preimages(v)
        for vs in pre:
            sums = vertex_local_degree(phi, vs, d)
            values = set(sums.values())
            if len(values) > 1:
                report.append(f"balance: source vertex {vs} has unequal local degrees {sorted(values)} "
                              f"over the half-edges at target vertex {v}")
                continue
            if values:
                local_m[vs] = values.pop()
            elif pre and d % len(pre) == 0:
                local_m[vs] = d // len(pre)
        if pre and all(vs in local_m for vs in pre) and sum(local_m[vs] for vs in pre) != d:
            report.append(f"balance: local degrees over target vertex {v} sum to "
                          f"{sum(local_m[vs] for vs in pre)}, expected {d}")
        lhs = sum(2 * S.genera[vs] - 2 for vs in pre)
        ram = sum(phi.local_degrees[k] - 1 for vs in pre for k in S.half_edges_at(vs))
        rhs = d * (2 * T.genera[v] - 2) + ram
        if lhs != rhs:
            report.append(f"condition v: at target vertex {v}, sum(2g'-2) = {lhs} but "
                          f"deg*(2g-2) + ramification = {rhs}")
        for vs in pre:
            if vs not in local_m:
                continue
            own = sum(phi.local_degrees[k] - 1 for k in S.half_edges_at(vs))
            if 2 * S.genera[vs] - 2 != local_m[vs] * (2 * T.genera[v] - 2) + own:
                report.append(f"condition v: Riemann-Hurwitz fails at source vertex {vs}")
    return report


def is_etale(phi: HarmonicMorphism) -> bool:
    report = validate_harmonic(phi)
    if not report.ok:
        raise MorphismError(f"not a harmonic morphism: {report[0]}")
    return all(n == 1 for n in phi.local_degrees)
