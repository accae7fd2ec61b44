"""
Canonical labelling of small vertex- and edge-coloured graphs.

Graphs are given as a list of vertex colours and a symmetric adjacency list
``adj[v] = {w: label}``; a loop at ``v`` is ``adj[v][v]``.  Colours and labels
only need to be mutually comparable.

The search is the usual individualisation-refinement scheme: colour
refinement to an equitable ordered partition, then branching on the first
non-singleton cell.  Subtrees are pruned by orbits of the automorphisms found
so far that fix the current branch prefix pointwise.
"""
from __future__ import annotations

from typing import Any, Hashable, Sequence


def _refine(cells, adj):
    while True:
        cell_of = {}
        for i, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = i
        out = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                sig = tuple(sorted((cell_of[w], lab) for w, lab in adj[v].items()))
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(cell)
                continue
            changed = True
            for sig in sorted(groups):
                out.append(groups[sig])
        cells = out
        if not changed:
            return cells


def _leaf_code(order, adj):
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for v in order:
        pv = pos[v]
        for w, lab in adj[v].items():
            pw = pos[w]
            if pv <= pw:
                edges.append((pv, pw, lab))
    edges.sort()
    return tuple(edges)


def _orbit_reps(cell, gens):
    parent = {v: v for v in cell}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for g in gens:
        for v in cell:
            w = g[v]
            if w in parent:
                a, b = find(v), find(w)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return find


class _Search:
    def __init__(self, adj):
        self.adj = adj
        self.best_code = None
        self.best_order = None
        self.gens: list[dict[int, int]] = []

    def run(self, cells, prefix):
        cells = _refine(cells, self.adj)
        for idx, cell in enumerate(cells):
            if len(cell) > 1:
                break
        else:
            order = [c[0] for c in cells]
            code = _leaf_code(order, self.adj)
            if self.best_code is None or code < self.best_code:
                self.best_code, self.best_order = code, order
            elif code == self.best_code:
                self.gens.append(dict(zip(self.best_order, order)))
            return
        explored: list[int] = []
        for v in sorted(cell):
            if explored:
                stab = [g for g in self.gens if all(g[p] == p for p in prefix)]
                find = _orbit_reps(cell, stab)
                root = find(v)
                if any(find(u) == root for u in explored):
                    continue
            explored.append(v)
            rest = [w for w in cell if w != v]
            self.run(cells[:idx] + [[v], rest] + cells[idx + 1:], prefix + (v,))


def _initial_cells(colors):
    groups: dict[Any, list[int]] = {}
    for v, c in enumerate(colors):
        groups.setdefault(c, []).append(v)
    keys = sorted(groups)
    return [groups[k] for k in keys], keys


def canonical_labeling(colors: Sequence[Hashable], adj: Sequence[dict]) -> tuple[list[int], tuple]:
    """Return ``(order, code)``.

    ``order[i]`` is the original vertex placed at canonical position ``i``.
    Two inputs receive equal codes iff they are isomorphic as coloured graphs.
    """
    if not colors:
        return [], ((), ())
    cells, _ = _initial_cells(colors)
    search = _Search(adj)
    search.run(cells, ())
    order = search.best_order
    return order, (tuple(colors[v] for v in order), search.best_code)


def count_automorphisms(colors: Sequence[Hashable], adj: Sequence[dict]) -> int:
    """Order of the automorphism group, by exhaustive leaf counting."""
    if not colors:
        return 1
    cells, _ = _initial_cells(colors)
    best = [None, 0]

    def walk(cells):
        cells = _refine(cells, adj)
        for idx, cell in enumerate(cells):
            if len(cell) > 1:
                break
        else:
            code = _leaf_code([c[0] for c in cells], adj)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, 1
            elif code == best[0]:
                best[1] += 1
            return
        for v in cell:
            rest = [w for w in cell if w != v]
            walk(cells[:idx] + [[v], rest] + cells[idx + 1:])

    walk(cells)
    return best[1]
