"""Independent reference implementations used only by the test-suite."""
from __future__ import annotations

from itertools import combinations_with_replacement, permutations, product

from prymstrata.graph import WeightedGraph, is_connected, stability_value
from prymstrata.harmonic import HarmonicMorphism, is_ram_label
from prymstrata.prym import canonical_morphism, validate_prym

# ---------------------------------------------------------------------------
# graph isomorphism by exhaustive backtracking
# ---------------------------------------------------------------------------


def _edge_multiset(G: WeightedGraph, sigma) -> list:
    out = []
    for h, k in G.edges():
        a, b = sigma[G.anchors[h]], sigma[G.anchors[k]]
        out.append((min(a, b), max(a, b)))
    return sorted(out)


def _leg_set(G: WeightedGraph, sigma) -> list:
    return sorted((sigma[G.anchors[h]], l) for h, l in G.leg_labels)


def graphs_isomorphic(G: WeightedGraph, H: WeightedGraph) -> bool:
    """Try every vertex bijection; compare genera, edge multisets and labelled legs."""
    if (G.n_vertices, G.n_half_edges, G.n_edges) != (H.n_vertices, H.n_half_edges, H.n_edges):
        return False
    target_edges = _edge_multiset(H, list(range(H.n_vertices)))
    target_legs = _leg_set(H, list(range(H.n_vertices)))
    for perm in permutations(range(H.n_vertices)):
        if any(G.genera[v] != H.genera[perm[v]] for v in range(G.n_vertices)):
            continue
        if _edge_multiset(G, perm) == target_edges and _leg_set(G, perm) == target_legs:
            return True
    return False


# ---------------------------------------------------------------------------
# morphism isomorphism over the base
# ---------------------------------------------------------------------------


def _source_signature(phi: HarmonicMorphism, sigma, ordered: bool):
    S = phi.source
    edges = []
    for a, b in S.edges():
        x = (sigma[S.anchors[a]], phi.half_edge_map[a])
        y = (sigma[S.anchors[b]], phi.half_edge_map[b])
        edges.append((min(x, y), max(x, y), phi.local_degrees[a]))
    legs = []
    for k, label in S.leg_labels:
        legs.append((sigma[S.anchors[k]], phi.half_edge_map[k], phi.local_degrees[k], label if ordered else ""))
    return sorted(edges), sorted(legs)


def morphisms_isomorphic_over_base(phi: HarmonicMorphism, psi: HarmonicMorphism, ordered: bool = False) -> bool:
    """Is there a source isomorphism commuting with both maps to the common target?"""
    if phi.target != psi.target or phi.source.n_vertices != psi.source.n_vertices:
        return False
    n = psi.source.n_vertices
    ref = _source_signature(psi, list(range(n)), ordered)
    for perm in permutations(range(n)):
        if any(phi.vertex_map[v] != psi.vertex_map[perm[v]] or phi.source.genera[v] != psi.source.genera[perm[v]]
               for v in range(n)):
            continue
        if _source_signature(phi, perm, ordered) == ref:
            return True
    return False


def target_isomorphisms(A: WeightedGraph, B: WeightedGraph):
    """Every isomorphism ``A -> B`` as ``(vertex map, half-edge map)``, by backtracking over half-edges."""
    if (A.n_vertices, A.n_half_edges) != (B.n_vertices, B.n_half_edges):
        return
    la, lb = A.legs, B.legs
    for vperm in permutations(range(B.n_vertices)):
        if any(A.genera[v] != B.genera[vperm[v]] for v in range(A.n_vertices)):
            continue
        hmap: list = [None] * A.n_half_edges
        used = [False] * B.n_half_edges

        def rec(h):
            if h == A.n_half_edges:
                yield list(vperm), list(hmap)
                return
            if hmap[h] is not None:
                yield from rec(h + 1)
                return
            k_in = A.involution[h]
            for x in range(B.n_half_edges):
                if used[x] or B.anchors[x] != vperm[A.anchors[h]]:
                    continue
                y = B.involution[x]
                if (k_in == h) != (y == x):
                    continue
                if k_in == h:
                    if la[h] != lb[x]:
                        continue
                    hmap[h], used[x] = x, True
                    yield from rec(h + 1)
                    hmap[h], used[x] = None, False
                else:
                    if (y != x and used[y]) or B.anchors[y] != vperm[A.anchors[k_in]]:
                        continue
                    hmap[h], hmap[k_in], used[x], used[y] = x, y, True, True
                    yield from rec(h + 1)
                    hmap[h], hmap[k_in], used[x], used[y] = None, None, False, False

        yield from rec(0)


def relabel_morphism(phi: HarmonicMorphism, sv, sh, tv, th) -> HarmonicMorphism:
    """Rename source and target vertices and half-edges; the result is isomorphic to ``phi``."""
    from prymstrata.graph import relabel

    vmap = [0] * len(sv)
    for s, v in enumerate(phi.vertex_map):
        vmap[sv[s]] = tv[v]
    hmap, ldeg = [0] * len(sh), [0] * len(sh)
    for k, h in enumerate(phi.half_edge_map):
        hmap[sh[k]] = th[h]
        ldeg[sh[k]] = phi.local_degrees[k]
    return HarmonicMorphism(relabel(phi.source, sv, sh), relabel(phi.target, tv, th),
                            tuple(vmap), tuple(hmap), tuple(ldeg), phi.declared_degree)


def morphisms_isomorphic(phi: HarmonicMorphism, psi: HarmonicMorphism, ordered: bool = False) -> bool:
    """Full isomorphism: some target isomorphism, followed by an isomorphism over the base."""
    S = phi.source
    ident_v, ident_h = list(range(S.n_vertices)), list(range(S.n_half_edges))
    for tv, th in target_isomorphisms(phi.target, psi.target):
        moved = relabel_morphism(phi, ident_v, ident_h, tv, th)
        if morphisms_isomorphic_over_base(moved, psi, ordered):
            return True
    return False


# ---------------------------------------------------------------------------
# brute-force Prym structures over a base
# ---------------------------------------------------------------------------


def _edge_lifts(cu, cw, ramified):
    pairs = [(i, j) for i in cu for j in cw]
    if ramified:
        return [((i, j, 2),) for i, j in pairs]
    return [tuple((i, j, 1) for i, j in combo) for combo in combinations_with_replacement(pairs, 2)]


def brute_force_prym(G: WeightedGraph, ramified_variant: bool = False, key=None) -> dict:
    """Every Prym structure over ``G`` by exhaustive search, keyed by ``key(phi)``.

    For every assignment of one or two preimages per vertex, every way of
    lifting every edge and leg is tried (edges near an exceptional vertex get a
    single lift of local degree 2, all others two lifts of degree 1, as
    condition iii demands).  A branch is abandoned as soon as some preimage
    sees unequal local-degree sums over two half-edges at its image.
    Surviving wirings get every genus assignment solving Riemann-Hurwitz, then
    the connectivity filter and full validation.
    """
    if key is None:
        key = lambda phi: canonical_morphism(phi, True)[0]
    legs = G.legs
    stab = [stability_value(G, v) for v in range(G.n_vertices)]
    if not _target_conditions_hold(G, stab, ramified_variant):
        return {}
    items = []  # (h, k or None, ramified)
    for h, k in G.edges():
        items.append((h, k, stab[G.anchors[h]] == 0 or stab[G.anchors[k]] == 0))
    for h, label in sorted(legs.items()):
        items.append((h, None, is_ram_label(label)))
    found: dict = {}
    verdict: dict = {}
    for counts in product((1, 2), repeat=G.n_vertices):
        copies, start = [], 0
        for c in counts:
            copies.append(list(range(start, start + c)))
            start += c
        options = []
        for h, k, ram in items:
            cu = copies[G.anchors[h]]
            if k is not None:
                options.append(_edge_lifts(cu, copies[G.anchors[k]], ram))
            elif ram:
                options.append([((i, 2),) for i in cu])
            else:
                options.append([tuple((i, 1) for i in c) for c in combinations_with_replacement(cu, 2)])
        # the first half-edge met at each target vertex, in processing order
        first_h: dict[int, int] = {}
        for h, k, _ in items:
            for x in (h, k):
                if x is not None:
                    first_h.setdefault(G.anchors[x], x)
        nh = G.n_half_edges
        tally = [[0] * nh for _ in range(start)]
        chosen: list = [None] * len(items)
        checks = []
        for h, k, _ in items:
            c = []
            for x in (h, k):
                if x is not None and first_h[G.anchors[x]] != x:
                    c.append((x, first_h[G.anchors[x]], copies[G.anchors[x]]))
            checks.append(c)

        def rec(idx):
            if idx == len(items):
                yield list(chosen)
                return
            h, k, _ = items[idx]
            check = checks[idx]
            for lift in options[idx]:
                if k is not None:
                    for i, j, n in lift:
                        tally[i][h] += n
                        tally[j][k] += n
                else:
                    for i, n in lift:
                        tally[i][h] += n
                if all(tally[c][x] == tally[c][x0] for x, x0, cs in check for c in cs):
                    chosen[idx] = lift
                    yield from rec(idx + 1)
                if k is not None:
                    for i, j, n in lift:
                        tally[i][h] -= n
                        tally[j][k] -= n
                else:
                    for i, n in lift:
                        tally[i][h] -= n

        full = (1 << start) - 1
        for wiring in rec(0):
            if not _wiring_connected(start, full, items, wiring):
                continue
            for phi in _with_genera(G, copies, start, items, wiring):
                # validity is an isomorphism invariant, so one check per class suffices
                code = key(phi)
                if code in verdict:
                    continue
                verdict[code] = validate_prym(phi, ramified_variant).ok
                if verdict[code]:
                    found[code] = phi
    return found


def _target_conditions_hold(G, stab, ramified_variant) -> bool:
    """Conditions i and ii only involve the target, so check them once per base."""
    legs = G.legs
    if not ramified_variant and any(is_ram_label(l) for l in legs.values()):
        return False
    for v in range(G.n_vertices):
        ends = [(h, G.anchors[G.involution[h]]) for h in range(G.n_half_edges) if G.anchors[h] == v]
        if stab[v] == 0:
            if any(G.involution[h] == h or stab[w] <= 0 for h, w in ends):
                return False
        else:
            odd = sum(1 for h, w in ends if G.involution[h] != h and stab[w] == 0)
            if ramified_variant:
                odd += sum(1 for h, _ in ends if h in legs and is_ram_label(legs[h]))
            if odd % 2:
                return False
    return True


def _wiring_connected(n, full, items, wiring) -> bool:
    """Whether the source vertices are joined up by the chosen edge lifts (bitmask search)."""
    adj = [1 << c for c in range(n)]
    for (_, k, _), lift in zip(items, wiring):
        if k is not None:
            for i, j, _ in lift:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    reach, frontier = 1, 1
    while frontier:
        new = 0
        c = 0
        while frontier:
            if frontier & 1:
                new |= adj[c]
            frontier >>= 1
            c += 1
        frontier = new & ~reach
        reach |= new
    return reach == full


def _with_genera(G, copies, nsrc, items, wiring):
    anchors, inv, hmap, ldeg, labels = [], [], [], [], {}
    for (h, k, _), lift in zip(items, wiring):
        if k is not None:
            for i, j, n in lift:
                a = len(anchors)
                anchors += [i, j]
                inv += [a + 1, a]
                hmap += [h, k]
                ldeg += [n, n]
        else:
            label = G.legs[h]
            for idx, (i, n) in enumerate(lift):
                a = len(anchors)
                labels[a] = label if len(lift) == 1 else label + "+-"[idx]
                anchors.append(i)
                inv.append(a)
                hmap.append(h)
                ldeg.append(n)
    vmap = [v for v, cs in enumerate(copies) for _ in cs]
    ram = [0] * nsrc
    local = [0] * nsrc   # local degree of each preimage, read off one half-edge over its image
    probe: dict[int, int] = {}
    for a, n in enumerate(ldeg):
        c = anchors[a]
        ram[c] += n - 1
        h = probe.setdefault(c, hmap[a])
        if hmap[a] == h:
            local[c] += n
    for c in range(nsrc):
        if c not in probe:
            local[c] = 2 // len(copies[vmap[c]])

    def rh(c, g):
        return 2 * g - 2 == local[c] * (2 * G.genera[vmap[c]] - 2) + ram[c]

    choices = []
    for v, cs in enumerate(copies):
        # condition v at v: sum over preimages of (2g'-2) = 2(2g(v)-2) + ramification
        rhs = 2 * (2 * G.genera[v] - 2) + sum(ram[s] for s in cs)
        twice_sum = rhs + 2 * len(cs)
        if twice_sum % 2 or twice_sum < 0:
            return
        total = twice_sum // 2
        if len(cs) == 1:
            options = [(total,)]
        else:
            options = [(g1, total - g1) for g1 in range(total + 1)]
        # keep only splits satisfying Riemann-Hurwitz at each preimage separately
        options = [o for o in options if all(rh(c, g) for c, g in zip(cs, o))]
        if not options:
            return
        choices.append(options)
    for gs in product(*choices):
        genera = tuple(x for part in gs for x in part)
        S = WeightedGraph(genera, tuple(anchors), tuple(inv), labels)
        yield HarmonicMorphism(S, G, tuple(vmap), tuple(hmap), tuple(ldeg), 2)


# ---------------------------------------------------------------------------
# the base family
# ---------------------------------------------------------------------------


def _multigraphs(nv: int, max_edges: int):
    slots = [(u, w) for u in range(nv) for w in range(u, nv)]
    for ne in range(max_edges + 1):
        for combo in combinations_with_replacement(slots, ne):
            yield list(combo)


def base_family(max_vertices=3, max_edges=4, max_genus=4, max_legs=4, ram=False):
    """Connected semistable bases, deduplicated; legs are labelled in vertex order.

    With ``ram=True`` only bases carrying at least one ``ram:`` leg are produced,
    each vertex's legs split in every way between ramified and plain ones.
    """
    from prymstrata.graph import canonical_form, graph_genus

    seen = set()
    for nv in range(1, max_vertices + 1):
        for edges in _multigraphs(nv, max_edges):
            probe = WeightedGraph.build([0] * nv, edges)
            if not is_connected(probe):
                continue
            h1 = len(edges) - nv + 1
            for genera in product(range(max_genus - h1 + 1), repeat=nv):
                if sum(genera) + h1 > max_genus:
                    continue
                for nlegs in product(range(max_legs + 1), repeat=nv):
                    if sum(nlegs) > max_legs:
                        continue
                    splits = [range(n + 1) if ram else [0] for n in nlegs]
                    for nram in product(*splits):
                        if ram and sum(nram) == 0:
                            continue
                        legs, c = [], 0
                        for v in range(nv):
                            for j in range(nlegs[v]):
                                c += 1
                                legs.append((v, f"ram:p{c}" if j < nram[v] else f"x{c}"))
                        G = WeightedGraph.build(list(genera), edges, legs)
                        if any(stability_value(G, v) < 0 for v in range(nv)):
                            continue
                        code = canonical_form(G).canonical_code
                        if code in seen:
                            continue
                        seen.add(code)
                        yield G
