"""
Prym structures: degree-2 harmonic morphisms of semistable graphs subject to
the three admissibility conditions, together with their classification,
enumeration over a base graph, specialisations and generic pairs.

Isomorphism conventions
-----------------------
Full isomorphism is decided on a single coloured graph whose nodes are the
vertices and half-edges of both source and target.  Target leg labels are
always part of the colour.  Source leg labels are ignored unless
``ordered_fibers`` is set, so the ``+``/``-`` naming of the two points over a
marking is quotiented away by default.

Isomorphism *over* the base pins every target vertex and half-edge, so the
only freedom left is to permute each fibre of the vertex map.  Fibres have at
most two elements, and the code is simply the least source description over
all fibre permutations.  This is much cheaper than the coloured graph and is
what enumeration over a fixed base uses.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, partial
from collections import Counter
from itertools import combinations, product
from typing import Iterable, Sequence

from .canon import canonical_labeling, count_automorphisms
from .errors import GraphError, MorphismError, ParameterError
from .graph import (
    ValidationReport,
    WeightedGraph,
    contract_edges,
    graph_genus,
    is_connected,
    stability_value,
    stable_graphs,
    subdivide_edges,
    valence,
    validate_graph,
)
from .harmonic import HarmonicMorphism, is_ram_label, structural_report, validate_harmonic

# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _semistable_report(G: WeightedGraph, name: str) -> list[str]:
    out = []
    if not is_connected(G):
        out.append(f"{name} graph is disconnected")
    for v in range(G.n_vertices):
        if stability_value(G, v) < 0:
            out.append(f"{name} vertex {v} is unstable (2g-2+n < 0)")
    return out


def validate_prym(phi: HarmonicMorphism, ramified_variant: bool | None = None) -> ValidationReport:
    """Report every way in which ``phi`` fails to be a Prym structure.

    With ``ramified_variant=None`` the variant is switched on exactly when the
    target carries a ``ram:`` leg.
    """
    report = structural_report(phi)
    if not report.ok:
        return report
    S, T = phi.source, phi.target
    legs = T.legs
    ram_legs = {h for h, l in legs.items() if is_ram_label(l)}
    if ramified_variant is None:
        ramified_variant = bool(ram_legs)
    if ram_legs and not ramified_variant:
        report.append("ramified legs present but the ramified variant is off")
    report.extend(validate_harmonic(phi, 2))
    report.extend(_semistable_report(S, "source"))
    report.extend(_semistable_report(T, "target"))
    if not report.ok:
        return report

    stab = [stability_value(T, v) for v in range(T.n_vertices)]
    other_end = [T.anchors[T.involution[h]] for h in range(T.n_half_edges)]
    for v in range(T.n_vertices):
        hs = T.half_edges_at(v)
        if stab[v] == 0:
            for h in hs:
                if stab[other_end[h]] <= 0:
                    what = "a leg" if T.is_leg(h) else f"vertex {other_end[h]}"
                    report.append(f"condition i: strictly semistable vertex {v} meets {what} via half-edge {h}")
        else:
            count = sum(1 for h in hs if not T.is_leg(h) and stab[other_end[h]] == 0)
            if ramified_variant:
                count += sum(1 for h in hs if h in ram_legs)
            if count % 2:
                report.append(f"condition ii: stable vertex {v} has {count} exceptional contacts (odd)")
    for k in range(S.n_half_edges):
        h = phi.half_edge_map[k]
        n = phi.local_degrees[k]
        if T.is_leg(h):
            want = 2 if h in ram_legs else 1
        else:
            want = 2 if (stab[T.anchors[h]] == 0 or stab[other_end[h]] == 0) else 1
        if n != want:
            report.append(f"condition iii: source half-edge {k} has local degree {n}, expected {want}")
    return report


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    exc: tuple[int, ...]
    ram: tuple[int, ...]
    tr: tuple[int, ...]
    ntr: tuple[int, ...]
    exc_contacts: dict   # vertex -> number of half-edges toward exceptional vertices
    ram_legs: dict       # vertex -> number of "ram:" legs
    r: dict              # vertex -> (exc_contacts + ram_legs) / 2, non-exceptional vertices only
    m: dict              # vertex -> valence - 2 r

    def to_dict(self) -> dict:
        return {
            "exc": list(self.exc), "ram": list(self.ram), "tr": list(self.tr), "ntr": list(self.ntr),
            "exc_contacts": {str(k): v for k, v in sorted(self.exc_contacts.items())},
            "ram_legs": {str(k): v for k, v in sorted(self.ram_legs.items())},
            "r": {str(k): v for k, v in sorted(self.r.items())},
            "m": {str(k): v for k, v in sorted(self.m.items())},
        }


def _classify(phi: HarmonicMorphism) -> Classification:
    T = phi.target
    stab = [stability_value(T, v) for v in range(T.n_vertices)]
    npre = [0] * T.n_vertices
    for v in phi.vertex_map:
        npre[v] += 1
    legs = T.legs
    exc = tuple(v for v in range(T.n_vertices) if stab[v] == 0)
    excset = set(exc)
    contacts, ramlegs, r, m = {}, {}, {}, {}
    for v in range(T.n_vertices):
        if v in excset:
            continue
        hs = T.half_edges_at(v)
        contacts[v] = sum(1 for h in hs if not T.is_leg(h) and T.anchors[T.involution[h]] in excset)
        ramlegs[v] = sum(1 for h in hs if h in legs and is_ram_label(legs[h]))
        r[v] = (contacts[v] + ramlegs[v]) // 2
        m[v] = valence(T, v) - 2 * r[v]
    ram = tuple(v for v in contacts if contacts[v] > 0)
    tr = tuple(v for v in range(T.n_vertices) if npre[v] == 2)
    ntr = tuple(v for v in range(T.n_vertices) if npre[v] == 1 and v not in excset)
    return Classification(exc, ram, tr, ntr, contacts, ramlegs, r, m)


# ---------------------------------------------------------------------------
# canonical codes
# ---------------------------------------------------------------------------

_ANCHOR, _INVOLUTION, _PROJECTION = 1, 2, 3


def _combined_graph(phi: HarmonicMorphism, over_base: bool, ordered_fibers: bool,
                    half_edge_tags: Sequence[int] | None = None):
    S, T = phi.source, phi.target
    tl, sl = T.legs, S.legs
    nTv, nTh, nSv = T.n_vertices, T.n_half_edges, S.n_vertices
    tv = lambda v: v
    th = lambda h: nTv + h
    sv = lambda v: nTv + nTh + v
    sh = lambda k: nTv + nTh + nSv + k
    colors = []
    for v in range(nTv):
        colors.append(("a", T.genera[v], v if over_base else -1, "", 0))
    for h in range(nTh):
        tag = half_edge_tags[h] if half_edge_tags is not None else 0
        colors.append(("b", int(h in tl), h if over_base else -1, tl.get(h, ""), tag))
    for v in range(nSv):
        colors.append(("c", S.genera[v], -1, "", 0))
    for k in range(S.n_half_edges):
        label = sl.get(k, "") if ordered_fibers else ""
        colors.append(("d", int(k in sl), phi.local_degrees[k], label, 0))
    adj: list[dict] = [dict() for _ in colors]

    def link(a, b, lab):
        adj[a][b] = lab
        adj[b][a] = lab

    for h in range(nTh):
        link(th(h), tv(T.anchors[h]), _ANCHOR)
        if T.involution[h] != h:
            link(th(h), th(T.involution[h]), _INVOLUTION)
    for k in range(S.n_half_edges):
        link(sh(k), sv(S.anchors[k]), _ANCHOR)
        if S.involution[k] != k:
            link(sh(k), sh(S.involution[k]), _INVOLUTION)
        link(sh(k), th(phi.half_edge_map[k]), _PROJECTION)
    for v in range(nSv):
        link(sv(v), tv(phi.vertex_map[v]), _PROJECTION)
    return colors, adj


def _apply_order(phi: HarmonicMorphism, order: list[int], keep_target: bool,
                 ordered_fibers: bool) -> HarmonicMorphism:
    S, T = phi.source, phi.target
    nTv, nTh, nSv = T.n_vertices, T.n_half_edges, S.n_vertices
    pos = {node: i for i, node in enumerate(order)}
    if keep_target:
        tvp, thp = list(range(nTv)), list(range(nTh))
    else:
        tvp = _ranks([pos[v] for v in range(nTv)])
        thp = _ranks([pos[nTv + h] for h in range(nTh)])
    svp = _ranks([pos[nTv + nTh + v] for v in range(nSv)])
    shp = _ranks([pos[nTv + nTh + nSv + k] for k in range(S.n_half_edges)])

    Tn = _relabel_graph(T, tvp, thp, T.legs)
    if ordered_fibers:
        slabels = S.legs
    else:
        slabels = {}
        by_target: dict[int, list[int]] = {}
        for k in sorted(S.legs, key=lambda k: shp[k]):
            by_target.setdefault(phi.half_edge_map[k], []).append(k)
        for h, ks in by_target.items():
            slabels.update(_fibre_labels(T.legs[h], ks))
    Sn = _relabel_graph(S, svp, shp, slabels)
    vmap = [0] * nSv
    for v in range(nSv):
        vmap[svp[v]] = tvp[phi.vertex_map[v]]
    hmap = [0] * S.n_half_edges
    ldeg = [0] * S.n_half_edges
    for k in range(S.n_half_edges):
        hmap[shp[k]] = thp[phi.half_edge_map[k]]
        ldeg[shp[k]] = phi.local_degrees[k]
    return HarmonicMorphism(Sn, Tn, tuple(vmap), tuple(hmap), tuple(ldeg), phi.declared_degree)


def _ranks(values: list[int]) -> list[int]:
    order = sorted(range(len(values)), key=values.__getitem__)
    out = [0] * len(values)
    for r, i in enumerate(order):
        out[i] = r
    return out


def _relabel_graph(G: WeightedGraph, vp, hp, labels: dict) -> WeightedGraph:
    genera = [0] * G.n_vertices
    for v, g in enumerate(G.genera):
        genera[vp[v]] = g
    anchors = [0] * G.n_half_edges
    inv = [0] * G.n_half_edges
    for h in range(G.n_half_edges):
        anchors[hp[h]] = vp[G.anchors[h]]
        inv[hp[h]] = hp[G.involution[h]]
    return WeightedGraph(tuple(genera), tuple(anchors), tuple(inv), {hp[h]: l for h, l in labels.items()})


def _fibre_canonical(phi: HarmonicMorphism, ordered_fibers: bool) -> tuple[bytes, HarmonicMorphism]:
    """Canonical form over a pinned target.

    An isomorphism over the target can only permute each fibre of the vertex
    map, so the lexicographically least description over all fibre
    permutations is a complete invariant.  Fibres of size two only.
    """
    S, T = phi.source, phi.target
    fibres: list[list[int]] = [[] for _ in range(T.n_vertices)]
    for s, v in enumerate(phi.vertex_map):
        fibres[v].append(s)
    if any(len(f) > 2 for f in fibres):
        raise MorphismError("fibre canonical form needs fibres of size at most 2")
    hmap, ldeg = phi.half_edge_map, phi.local_degrees
    base_slot = [0] * S.n_vertices
    for f in fibres:
        for j, s in enumerate(f):
            base_slot[s] = j
    erecs = []
    for a, b in S.edges():
        if hmap[a] > hmap[b]:
            a, b = b, a
        erecs.append((hmap[a], S.anchors[a], hmap[b], S.anchors[b], ldeg[a]))
    lrecs = [(hmap[k], S.anchors[k], ldeg[k], l if ordered_fibers else "") for k, l in S.leg_labels]
    pairs = [f for f in fibres if len(f) == 2]
    best = None
    for flips in product((0, 1), repeat=len(pairs)):
        slot = list(base_slot)
        for f, x in zip(pairs, flips):
            if x:
                slot[f[0]], slot[f[1]] = 1, 0
        genera = tuple(tuple(S.genera[s] for s in f) if len(f) < 2 or not slot[f[0]]
                       else (S.genera[f[1]], S.genera[f[0]]) for f in fibres)
        desc = (genera,
                tuple(sorted([(h, slot[u], k, slot[w], n) for h, u, k, w, n in erecs])),
                tuple(sorted([(h, slot[u], n, l) for h, u, n, l in lrecs])))
        if best is None or desc < best:
            best = desc
    genera, elist, llist = best
    new_vertex = {}
    sgen, vmap = [], []
    for v, gs in enumerate(genera):
        for j, g in enumerate(gs):
            new_vertex[(v, j)] = len(sgen)
            sgen.append(g)
            vmap.append(v)
    anchors, inv, hmap, ldeg, labels = [], [], [], [], {}
    for h, i, k, j, n in elist:
        a = len(anchors)
        anchors += [new_vertex[(T.anchors[h], i)], new_vertex[(T.anchors[k], j)]]
        inv += [a + 1, a]
        hmap += [h, k]
        ldeg += [n, n]
    tl = T.legs
    groups: dict[int, list[int]] = {}
    for h, i, n, label in llist:
        a = len(anchors)
        anchors.append(new_vertex[(T.anchors[h], i)])
        inv.append(a)
        hmap.append(h)
        ldeg.append(n)
        groups.setdefault(h, []).append(a)
        if ordered_fibers:
            labels[a] = label
    if not ordered_fibers:
        for h, ks in groups.items():
            labels.update(_fibre_labels(tl[h], ks))
    Sn = WeightedGraph(tuple(sgen), tuple(anchors), tuple(inv), labels)
    rep = HarmonicMorphism(Sn, T, tuple(vmap), tuple(hmap), tuple(ldeg), phi.declared_degree)
    target_key = (T.genera, T.anchors, T.involution, T.leg_labels)
    return repr((target_key, best)).encode(), rep


def _fibre_labels(base: str, ks: list[int]) -> dict[int, str]:
    if len(ks) == 1:
        return {ks[0]: base}
    if len(ks) == 2:
        return {ks[0]: base + "+", ks[1]: base + "-"}
    return {k: f"{base}#{j}" for j, k in enumerate(ks)}


def combined_graph_code(phi: HarmonicMorphism, over_base: bool = False, ordered_fibers: bool = False,
                        half_edge_tags: Sequence[int] | None = None) -> tuple[bytes, HarmonicMorphism]:
    """Canonical form via individualisation-refinement on the combined vertex/half-edge graph."""
    colors, adj = _combined_graph(phi, over_base, ordered_fibers, half_edge_tags)
    order, _ = canonical_labeling(colors, adj)
    rep = _apply_order(phi, order, over_base, ordered_fibers)
    payload = rep.to_dict()
    payload.pop("degree", None)
    if half_edge_tags is not None:
        if over_base:
            tags = list(half_edge_tags)
        else:
            tags = [0] * phi.target.n_half_edges
            pos = {node: i for i, node in enumerate(order)}
            thp = _ranks([pos[phi.target.n_vertices + h] for h in range(phi.target.n_half_edges)])
            for h, t in enumerate(half_edge_tags):
                tags[thp[h]] = t
        payload["tags"] = tags
    code = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return code, rep


def canonical_morphism(phi: HarmonicMorphism, over_base: bool = False, ordered_fibers: bool = False,
                       half_edge_tags: Sequence[int] | None = None) -> tuple[bytes, HarmonicMorphism]:
    """Return ``(code, representative)``; equal codes mean isomorphic morphisms.

    ``half_edge_tags`` optionally colours target half-edges (used to carry
    edge colourings of generic pairs).  With ``over_base`` the representative
    keeps the original target graph untouched.
    """
    if over_base and half_edge_tags is None and len(phi.vertex_map) <= 2 * phi.target.n_vertices \
            and max(Counter(phi.vertex_map).values(), default=0) <= 2:
        return _fibre_canonical(phi, ordered_fibers)
    return combined_graph_code(phi, over_base, ordered_fibers, half_edge_tags)


def morphism_automorphisms(phi: HarmonicMorphism, ordered_fibers: bool = False,
                           half_edge_tags: Sequence[int] | None = None) -> int:
    """Order of the automorphism group of the pair (source, target) fixing leg labels."""
    colors, adj = _combined_graph(phi, False, ordered_fibers, half_edge_tags)
    return count_automorphisms(colors, adj)


# ---------------------------------------------------------------------------
# the structure type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    """A node of the stable model: a plain edge, or a two-edge exceptional chain."""

    halves: tuple[int, int]           # psi pair, taken at the stable-side half-edges
    edge_halves: tuple[int, ...]      # one half-edge per target edge in the node
    exceptional: bool
    exc_vertex: int | None = None


@dataclass(frozen=True, eq=False)
class PrymStructure:
    morphism: HarmonicMorphism
    ramified_variant: bool = False
    ordered_fibers: bool = False

    @classmethod
    def from_morphism(cls, phi: HarmonicMorphism, ramified_variant: bool | None = None,
                      ordered_fibers: bool = False) -> "PrymStructure":
        if ramified_variant is None:
            ramified_variant = any(is_ram_label(l) for _, l in phi.target.leg_labels)
        report = validate_prym(phi, ramified_variant)
        if not report.ok:
            raise MorphismError(f"not a Prym structure: {report[0]}")
        return cls(phi, ramified_variant, ordered_fibers)

    @property
    def source(self) -> WeightedGraph:
        return self.morphism.source

    @property
    def target(self) -> WeightedGraph:
        return self.morphism.target

    @cached_property
    def classification(self) -> Classification:
        return _classify(self.morphism)

    @cached_property
    def code(self) -> bytes:
        return canonical_morphism(self.morphism, False, self.ordered_fibers)[0]

    @cached_property
    def base_code(self) -> bytes:
        return canonical_morphism(self.morphism, True, self.ordered_fibers)[0]

    @cached_property
    def nodes(self) -> tuple[Node, ...]:
        return _nodes(self.target)

    @property
    def codim(self) -> int:
        return len(self.nodes)

    @property
    def genus(self) -> int:
        return graph_genus(self.target)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(l for _, l in self.target.leg_labels))

    def __eq__(self, other):
        if not isinstance(other, PrymStructure):
            return NotImplemented
        return self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def to_dict(self) -> dict:
        d = self.morphism.to_dict()
        d["classification"] = self.classification.to_dict()
        d["codim"] = self.codim
        d["ramified_variant"] = self.ramified_variant
        return d


def classify(phi) -> Classification:
    """Vertex classification of a Prym structure (or of a morphism that is one)."""
    if isinstance(phi, PrymStructure):
        return phi.classification
    report = validate_prym(phi)
    if not report.ok:
        raise MorphismError(f"not a Prym structure: {report[0]}")
    return _classify(phi)


def _nodes(T: WeightedGraph) -> tuple[Node, ...]:
    stab = [stability_value(T, v) for v in range(T.n_vertices)]
    out = []
    for h, k in T.edges():
        if stab[T.anchors[h]] != 0 and stab[T.anchors[k]] != 0:
            out.append(Node((h, k), (h,), False))
    for w in range(T.n_vertices):
        if stab[w] == 0:
            hs = T.half_edges_at(w)
            if len(hs) != 2:
                continue
            a, b = hs
            out.append(Node((T.involution[a], T.involution[b]), (a, b), True, w))
    return tuple(out)


def contract_nodes(phi: PrymStructure, node_indices: Iterable[int]) -> PrymStructure:
    """Smooth the given nodes of the stable model, on target and source alike."""
    T, S, f = phi.target, phi.source, phi.morphism
    halves = set()
    for i in node_indices:
        for h in phi.nodes[i].edge_halves:
            halves.update((h, T.involution[h]))
    T2, tvmap, thmap = contract_edges(T, halves)
    shalves = [k for k in range(S.n_half_edges) if f.half_edge_map[k] in halves]
    S2, svmap, shmap = contract_edges(S, shalves)
    vmap = [0] * S2.n_vertices
    for v in range(S.n_vertices):
        vmap[svmap[v]] = tvmap[f.vertex_map[v]]
    hmap = [0] * S2.n_half_edges
    ldeg = [0] * S2.n_half_edges
    for k in range(S.n_half_edges):
        if shmap[k] >= 0:
            hmap[shmap[k]] = thmap[f.half_edge_map[k]]
            ldeg[shmap[k]] = f.local_degrees[k]
    psi = HarmonicMorphism(S2, T2, tuple(vmap), tuple(hmap), tuple(ldeg), 2)
    return PrymStructure(psi, phi.ramified_variant, phi.ordered_fibers)


# ---------------------------------------------------------------------------
# enumeration over a fixed base
# ---------------------------------------------------------------------------


def _base_admissible(G: WeightedGraph, ramified_variant: bool) -> bool:
    legs = G.legs
    if any(is_ram_label(l) for l in legs.values()) and not ramified_variant:
        return False
    stab = [stability_value(G, v) for v in range(G.n_vertices)]
    for v in range(G.n_vertices):
        hs = G.half_edges_at(v)
        ends = [G.anchors[G.involution[h]] for h in hs]
        if stab[v] == 0:
            if any(G.is_leg(h) or stab[e] == 0 for h, e in zip(hs, ends)):
                return False
        else:
            c = sum(1 for h, e in zip(hs, ends) if not G.is_leg(h) and stab[e] == 0)
            c += sum(1 for h in hs if h in legs and is_ram_label(legs[h]))
            if c % 2:
                return False
    return True


def enumerate_prym_structures(G: WeightedGraph, ramified_variant: bool = False,
                              ordered_fibers: bool = False) -> list[PrymStructure]:
    """All Prym structures with target ``G``, up to isomorphism over ``G``.

    Preimage counts are 1 or 2 per vertex (1 is forced wherever a half-edge
    must ramify); edges between two doubled vertices are lifted straight or
    crossed; source genera are then determined vertex by vertex.
    """
    report = validate_graph(G)
    if not report.ok:
        raise GraphError(f"malformed base graph: {report[0]}")
    if any(stability_value(G, v) < 0 for v in range(G.n_vertices)):
        raise GraphError("base graph is not semistable")
    if not _base_admissible(G, ramified_variant):
        return []
    legs = G.legs
    stab = [stability_value(G, v) for v in range(G.n_vertices)]
    ramifies = [False] * G.n_half_edges
    for h in range(G.n_half_edges):
        if G.is_leg(h):
            ramifies[h] = is_ram_label(legs[h])
        else:
            ramifies[h] = stab[G.anchors[h]] == 0 or stab[G.anchors[G.involution[h]]] == 0
    n2 = [sum(ramifies[h] for h in G.half_edges_at(v)) for v in range(G.n_vertices)]
    free = [v for v in range(G.n_vertices) if n2[v] == 0]
    edges = G.edges()
    seen: dict[bytes, PrymStructure] = {}
    for doubled in product((False, True), repeat=len(free)):
        two = [False] * G.n_vertices
        for v, d in zip(free, doubled):
            two[v] = d
        genera = []
        copies: list[list[int]] = []
        ok = True
        for v in range(G.n_vertices):
            if two[v]:
                copies.append([len(genera), len(genera) + 1])
                genera += [G.genera[v]] * 2
            else:
                if n2[v] % 2:
                    ok = False
                    break
                copies.append([len(genera)])
                genera.append(2 * G.genera[v] - 1 + n2[v] // 2)
        if not ok or min(genera, default=0) < 0:
            continue
        choice_edges = [e for e in edges if two[G.anchors[e[0]]] and two[G.anchors[e[1]]]]
        leg_list = sorted(legs.items())
        flip_legs = [h for h, l in leg_list if two[G.anchors[h]]] if ordered_fibers else []
        for wiring in product((False, True), repeat=len(choice_edges)):
            crossed = dict(zip(choice_edges, wiring))
            for flips in product((False, True), repeat=len(flip_legs)):
                flipped = dict(zip(flip_legs, flips))
                phi = _assemble(G, genera, copies, edges, crossed, ramifies, leg_list, flipped)
                if not is_connected(phi.source):
                    continue
                code, rep = canonical_morphism(phi, True, ordered_fibers)
                if code not in seen:
                    psi = PrymStructure(rep, ramified_variant, ordered_fibers)
                    psi.__dict__["base_code"] = code  # rep is canonical, so its code is known
                    seen[code] = psi
    return [seen[c] for c in sorted(seen)]


def _assemble(G, genera, copies, edges, crossed, ramifies, leg_list, flipped) -> HarmonicMorphism:
    anchors, inv, hmap, ldeg, labels = [], [], [], [], {}

    def add_edge(u, w, h, k, n):
        i = len(anchors)
        anchors.extend((u, w))
        inv.extend((i + 1, i))
        hmap.extend((h, k))
        ldeg.extend((n, n))

    for h, k in edges:
        cu, cw = copies[G.anchors[h]], copies[G.anchors[k]]
        if ramifies[h]:
            add_edge(cu[0], cw[0], h, k, 2)
        elif len(cu) == 2 and len(cw) == 2:
            if crossed.get((h, k)):
                add_edge(cu[0], cw[1], h, k, 1)
                add_edge(cu[1], cw[0], h, k, 1)
            else:
                add_edge(cu[0], cw[0], h, k, 1)
                add_edge(cu[1], cw[1], h, k, 1)
        else:
            add_edge(cu[0], cw[0], h, k, 1)
            add_edge(cu[-1], cw[-1], h, k, 1)
    for h, label in leg_list:
        cv = copies[G.anchors[h]]
        if ramifies[h]:
            labels[len(anchors)] = label
            anchors.append(cv[0]); inv.append(len(inv)); hmap.append(h); ldeg.append(2)
        else:
            order = (cv[0], cv[-1]) if not flipped.get(h) else (cv[-1], cv[0])
            for sign, v in zip("+-", order):
                labels[len(anchors)] = label + sign
                anchors.append(v); inv.append(len(inv)); hmap.append(h); ldeg.append(1)
    vmap = [v for v, cs in enumerate(copies) for _ in cs]
    S = WeightedGraph(tuple(genera), tuple(anchors), tuple(inv), labels)
    return HarmonicMorphism(S, G, tuple(vmap), tuple(hmap), tuple(ldeg), 2)


# ---------------------------------------------------------------------------
# all strata of given ambient type, and the contraction index
# ---------------------------------------------------------------------------

_STRATA_CACHE: dict = {}


def prym_strata(genus: int, labels: Sequence[str], max_codim: int,
                ordered_fibers: bool = False, jobs: int = 1) -> list[PrymStructure]:
    """Prym structures of ambient genus ``genus`` with the given target legs, codim <= ``max_codim``.

    Sorted by ``(codim, code)``; duplicate-free under full isomorphism.  With
    ``jobs > 1`` the admissible base graphs are spread over a process pool;
    the result does not depend on ``jobs``.
    """
    labels = tuple(sorted(labels))
    ramified = any(is_ram_label(l) for l in labels)
    if 2 * genus - 2 + len(labels) <= 0:
        raise ParameterError(f"(g, n) = ({genus}, {len(labels)}) is not stable")
    if jobs < 1:
        raise ParameterError(f"jobs must be positive, got {jobs}")
    if max_codim < 0:
        return []
    out = []
    for c in range(max_codim + 1):
        key = (genus, labels, c, ordered_fibers)
        if key not in _STRATA_CACHE:
            _STRATA_CACHE[key] = _strata_of_codim(genus, labels, c, ramified, ordered_fibers, jobs)
        out.extend(_STRATA_CACHE[key])
    return out


def _admissible_bases(genus, labels, c, ramified):
    for G in stable_graphs(genus, labels, c):
        edges = G.edges()
        for k in range(len(edges) + 1):
            for subset in combinations(edges, k):
                H = subdivide_edges(G, [h for h, _ in subset])
                if _base_admissible(H, ramified):
                    yield H


def _coded_structures(H, ramified, ordered_fibers) -> list[tuple[bytes, HarmonicMorphism]]:
    return [canonical_morphism(phi.morphism, False, ordered_fibers)
            for phi in enumerate_prym_structures(H, ramified, ordered_fibers)]


def _strata_of_codim(genus, labels, c, ramified, ordered_fibers, jobs=1) -> list[PrymStructure]:
    bases = list(_admissible_bases(genus, labels, c, ramified))
    task = partial(_coded_structures, ramified=ramified, ordered_fibers=ordered_fibers)
    if jobs > 1 and len(bases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(task, bases, chunksize=max(1, len(bases) // (4 * jobs))))
    else:
        batches = [task(H) for H in bases]
    seen: dict[bytes, PrymStructure] = {}
    for batch in batches:
        for code, rep in batch:
            if code not in seen:
                seen[code] = PrymStructure(rep, ramified, ordered_fibers)
    return [seen[k] for k in sorted(seen)]


_CONTRACTION_CACHE: dict = {}


def contraction_codes(phi: PrymStructure) -> dict[frozenset, bytes]:
    """Full-isomorphism code of every contraction of ``phi``, keyed by the contracted node set."""
    key = (phi.code, phi.ordered_fibers)
    if key not in _CONTRACTION_CACHE:
        table = {}
        n = phi.codim
        for k in range(n + 1):
            for subset in combinations(range(n), k):
                table[frozenset(subset)] = contract_nodes(phi, subset).code
        _CONTRACTION_CACHE[key] = table
    return _CONTRACTION_CACHE[key]


def _as_structure(phi) -> PrymStructure:
    if isinstance(phi, PrymStructure):
        return phi
    return PrymStructure.from_morphism(phi)


def specializations(phi, max_extra_edges: int) -> list[PrymStructure]:
    """Every Prym structure that contracts onto ``phi`` after smoothing at most
    ``max_extra_edges`` extra nodes of its stable model.

    Each result is a full-isomorphism representative; ``phi`` itself is
    always included.
    """
    phi = _as_structure(phi)
    if max_extra_edges < 0:
        raise ParameterError("max_extra_edges must be nonnegative")
    c = phi.codim
    out = []
    for psi in prym_strata(phi.genus, phi.labels, c + max_extra_edges, phi.ordered_fibers):
        extra = psi.codim - c
        if extra < 0:
            continue
        table = contraction_codes(psi)
        if any(table[frozenset(s)] == phi.code for s in combinations(range(psi.codim), extra)):
            out.append(psi)
    return out


# ---------------------------------------------------------------------------
# generic pairs
# ---------------------------------------------------------------------------

SHARED, FIRST_ONLY, SECOND_ONLY = 0, 1, 2


@dataclass(frozen=True, eq=False)
class GenericPair:
    """A common specialisation ``structure`` of two Prym structures.

    ``node_colors[i]`` is ``SHARED`` if node ``i`` of the stable model comes
    from both inputs, ``FIRST_ONLY`` if it only comes from the first input,
    ``SECOND_ONLY`` if only from the second.  ``to_first`` / ``to_second`` are
    the node sets whose smoothing recovers the first / second input.
    """

    structure: PrymStructure
    node_colors: tuple[int, ...]
    to_first: frozenset
    to_second: frozenset
    automorphisms: int
    code: bytes = field(repr=False)

    @property
    def shared_nodes(self) -> list[Node]:
        return [n for n, c in zip(self.structure.nodes, self.node_colors) if c == SHARED]

    def swapped(self) -> "GenericPair":
        sw = {SHARED: SHARED, FIRST_ONLY: SECOND_ONLY, SECOND_ONLY: FIRST_ONLY}
        colors = tuple(sw[c] for c in self.node_colors)
        return GenericPair(self.structure, colors, self.to_second, self.to_first, self.automorphisms,
                           _colored_code(self.structure, colors))

    def to_dict(self) -> dict:
        return {
            "structure": self.structure.to_dict(),
            "node_colors": list(self.node_colors),
            "nodes": [list(n.halves) for n in self.structure.nodes],
            "automorphisms": self.automorphisms,
        }


def _half_edge_tags(phi: PrymStructure, colors: Sequence[int]) -> list[int]:
    tags = [0] * phi.target.n_half_edges
    T = phi.target
    for node, col in zip(phi.nodes, colors):
        for h in node.edge_halves:
            tags[h] = tags[T.involution[h]] = col + 1
    return tags


def _colored_code(phi: PrymStructure, colors: Sequence[int]) -> bytes:
    return canonical_morphism(phi.morphism, False, phi.ordered_fibers, _half_edge_tags(phi, colors))[0]


def _check_ambient(phi1: PrymStructure, phi2: PrymStructure):
    if phi1.genus != phi2.genus or phi1.labels != phi2.labels:
        raise ParameterError(
            f"ambient mismatch: genus {phi1.genus} legs {list(phi1.labels)} vs "
            f"genus {phi2.genus} legs {list(phi2.labels)}")


def enumerate_generic_pairs(phi1, phi2) -> list[GenericPair]:
    """Generic common specialisations of two Prym structures, up to coloured isomorphism.

    Every node of a generic structure comes from ``phi1`` or ``phi2``, so its
    codimension is at most ``codim(phi1) + codim(phi2)``.
    """
    phi1, phi2 = _as_structure(phi1), _as_structure(phi2)
    _check_ambient(phi1, phi2)
    c1, c2 = phi1.codim, phi2.codim
    out: dict[bytes, GenericPair] = {}
    for psi in prym_strata(phi1.genus, phi1.labels, c1 + c2, phi1.ordered_fibers):
        n = psi.codim
        if n < max(c1, c2):
            continue
        table = contraction_codes(psi)
        everything = frozenset(range(n))
        for s1 in combinations(range(n), n - c1):
            s1 = frozenset(s1)
            if table[s1] != phi1.code:
                continue
            for s2 in combinations(sorted(everything - s1), n - c2):
                s2 = frozenset(s2)
                if table[s2] != phi2.code:
                    continue
                colors = tuple(FIRST_ONLY if i in s2 else SECOND_ONLY if i in s1 else SHARED
                               for i in range(n))
                code = _colored_code(psi, colors)
                if code not in out:
                    autos = morphism_automorphisms(psi.morphism, psi.ordered_fibers,
                                                   _half_edge_tags(psi, colors))
                    out[code] = GenericPair(psi, colors, s1, s2, autos, code)
    return [out[k] for k in sorted(out, key=lambda k: (out[k].structure.codim, k))]
