"""
Stratum products, dimension bookkeeping and the catalogue of boundary gluings.

Every non-exceptional target vertex contributes one factor:

* two preimages: a moduli space of pointed curves ``M(g, n)``;
* one preimage and ``r > 0`` ramified contacts: ``R(g, 2r; m)``;
* otherwise ``R(g; n)``.

Exceptional vertices contribute nothing.  The codimension is computed from the
factor dimensions and independently as the number of nodes of the stable
model; the two are required to agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ParameterError
from .graph import WeightedGraph, graph_genus, valence
from .harmonic import HarmonicMorphism
from .prym import PrymStructure, _as_structure, prym_strata


class FactorKind(str, Enum):
    PRYM_POINTED = "PrymPointed"
    CURVE = "Curve"
    PRYM_RAMIFIED = "PrymRamified"


@dataclass(frozen=True)
class StratumFactor:
    kind: FactorKind
    genus: int
    n: int = 0
    two_r: int = 0
    m: int = 0
    vertex: int = -1

    def __post_init__(self):
        if min(self.genus, self.n, self.two_r, self.m) < 0:
            raise ParameterError(f"negative parameter in {self}")
        if 2 * self.genus - 2 + self.valence <= 0:
            raise ParameterError(f"unstable factor {self.symbol()}")

    @property
    def valence(self) -> int:
        return self.two_r + self.m if self.kind is FactorKind.PRYM_RAMIFIED else self.n

    @property
    def dimension(self) -> int:
        return 3 * self.genus - 3 + self.valence

    def symbol(self) -> str:
        if self.kind is FactorKind.CURVE:
            return f"M({self.genus},{self.n})"
        if self.kind is FactorKind.PRYM_RAMIFIED:
            return f"R'({self.genus},{self.two_r};{self.m})"
        return f"R'({self.genus};{self.n})"

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "genus": self.genus, "dimension": self.dimension, "vertex": self.vertex}
        if self.kind is FactorKind.PRYM_RAMIFIED:
            d.update(two_r=self.two_r, m=self.m)
        else:
            d["n"] = self.n
        return d


@dataclass(frozen=True)
class StratumDescriptor:
    structure: PrymStructure
    factors: tuple[StratumFactor, ...]
    dimension: int
    codimension: int
    ambient_dimension: int

    def to_dict(self) -> dict:
        return {
            "structure": self.structure.to_dict(),
            "factors": [f.to_dict() for f in self.factors],
            "dimension": self.dimension,
            "codimension": self.codimension,
            "ambient_dimension": self.ambient_dimension,
        }


def ambient_dimension(phi: PrymStructure) -> int:
    return 3 * phi.genus - 3 + len(phi.target.leg_labels)


def stratum_factors(phi) -> StratumDescriptor:
    phi = _as_structure(phi)
    cls = phi.classification
    T = phi.target
    tr = set(cls.tr)
    factors = []
    for v in range(T.n_vertices):
        if v in cls.exc:
            continue
        g, n = T.genera[v], valence(T, v)
        if v in tr:
            factors.append(StratumFactor(FactorKind.CURVE, g, n=n, vertex=v))
        elif cls.r[v] > 0:
            factors.append(StratumFactor(FactorKind.PRYM_RAMIFIED, g, two_r=2 * cls.r[v], m=cls.m[v], vertex=v))
        else:
            factors.append(StratumFactor(FactorKind.PRYM_POINTED, g, n=n, vertex=v))
    dim = sum(f.dimension for f in factors)
    amb = ambient_dimension(phi)
    codim = amb - dim
    by_nodes = T.n_edges - len(cls.exc)
    if codim != by_nodes or codim != phi.codim:
        raise AssertionError(f"codimension mismatch: factors give {codim}, node count gives {by_nodes}")
    return StratumDescriptor(phi, tuple(factors), dim, codim, amb)


def enumerate_strata(g: int, m: int, max_codim: int, ordered_fibers: bool = False,
                     jobs: int = 1) -> list[StratumDescriptor]:
    """All strata of genus ``g`` with markings ``x1..xm`` up to codimension ``max_codim``.

    Sorted by ``(codimension, canonical code)``.  ``jobs`` bounds the worker
    pool used over base graphs.
    """
    if g < 0 or m < 0 or 2 * g - 2 + m <= 0:
        raise ParameterError(f"(g, m) = ({g}, {m}) is not stable")
    if max_codim > 3 * g - 3 + m:
        raise ParameterError(f"max_codim {max_codim} exceeds the dimension {3 * g - 3 + m}")
    labels = [f"x{j}" for j in range(1, m + 1)]
    return [stratum_factors(p) for p in prym_strata(g, labels, max_codim, ordered_fibers, jobs)]


def nontaut_bound(g: int) -> int:
    """Smallest number of markings known to force non-tautological classes in genus ``g``."""
    if g <= 0:
        raise ParameterError("genus must be at least 1")
    if g == 1:
        return 7
    return max(0, 2 * (8 - g))


# ---------------------------------------------------------------------------
# gluing catalogue
# ---------------------------------------------------------------------------


class _Builder:
    """Incremental construction of a degree-2 morphism."""

    def __init__(self):
        self.tg, self.ta, self.ti, self.tl = [], [], [], {}
        self.sg, self.sa, self.si, self.sl = [], [], [], {}
        self.vmap, self.hmap, self.ldeg = [], [], []

    def tvertex(self, genus: int) -> int:
        self.tg.append(genus)
        return len(self.tg) - 1

    def svertex(self, genus: int, over: int) -> int:
        if genus < 0:
            raise ParameterError(f"cover vertex would have negative genus {genus}")
        self.sg.append(genus)
        self.vmap.append(over)
        return len(self.sg) - 1

    def tedge(self, u: int, w: int) -> tuple[int, int]:
        h = len(self.ta)
        self.ta += [u, w]
        self.ti += [h + 1, h]
        return h, h + 1

    def sedge(self, u: int, w: int, over: tuple[int, int], n: int = 1):
        k = len(self.sa)
        self.sa += [u, w]
        self.si += [k + 1, k]
        self.hmap += list(over)
        self.ldeg += [n, n]

    def leg(self, v: int, label: str, covers: list[int]):
        h = len(self.ta)
        self.ta.append(v)
        self.ti.append(h)
        self.tl[h] = label
        ramified = len(covers) == 1
        for j, c in enumerate(covers):
            k = len(self.sa)
            self.sa.append(c)
            self.si.append(k)
            self.sl[k] = label if ramified else label + "+-"[j]
            self.hmap.append(h)
            self.ldeg.append(2 if ramified else 1)

    def legs(self, v: int, labels: list[str], covers: list[int]):
        for label in labels:
            if label.startswith("ram:"):
                self.leg(v, label, covers[:1])
            else:
                self.leg(v, label, [covers[0], covers[-1]])

    def finish(self, ramified: bool) -> PrymStructure:
        T = WeightedGraph(tuple(self.tg), tuple(self.ta), tuple(self.ti), self.tl)
        S = WeightedGraph(tuple(self.sg), tuple(self.sa), tuple(self.si), self.sl)
        phi = HarmonicMorphism(S, T, tuple(self.vmap), tuple(self.hmap), tuple(self.ldeg), 2)
        return PrymStructure.from_morphism(phi, ramified)


def _labels(m: int, two_r: int) -> tuple[list[str], list[str]]:
    return [f"x{j}" for j in range(1, m + 1)], [f"ram:p{k}" for k in range(1, two_r + 1)]


def _require_stable(genus: int, n: int, what: str):
    if genus < 0:
        raise ParameterError(f"{what}: negative genus {genus}")
    if 2 * genus - 2 + n <= 0:
        raise ParameterError(f"{what}: 2g-2+n = {2 * genus - 2 + n} is not positive")


def build_gluing(kind: int, g: int, *, i: int = 0, r: int = 0, m: int = 0, x: int = 0, p: int = 0) -> PrymStructure:
    """The Prym structure of one of the six boundary gluings.

    Common parameters: ambient genus ``g``, ``2r`` ramified markings
    ``ram:p1..`` and ``m`` markings ``x1..xm``.

    * kind 1: genus ``g-i`` and genus ``i`` joined at a node, double cover
      connected over both sides; the genus-``i`` side carries ``x`` of the
      x-markings and an even number ``p`` of the ramified ones.
    * kind 2: as kind 1 but joined through an exceptional component; ``p`` odd.
    * kind 3: genus ``i`` side with ``x`` markings carries the trivial cover.
    * kind 4: genus ``g-1`` self-node, connected cover with two loops.
    * kind 5: genus ``g-1`` self-node, cover two copies crossing; no ramification.
    * kind 6: genus ``g-1`` self-node through an exceptional component.
    """
    if g < 0 or r < 0 or m < 0:
        raise ParameterError("g, r, m must be nonnegative")
    X, P = _labels(m, 2 * r)
    b = _Builder()
    if kind in (1, 2, 3):
        if not 0 <= i <= g:
            raise ParameterError(f"i must lie in [0, g], got {i}")
        if not 0 <= x <= m:
            raise ParameterError(f"x must lie in [0, m], got {x}")
        if kind == 3:
            p = 0
        if not 0 <= p <= 2 * r:
            raise ParameterError(f"p must lie in [0, 2r], got {p}")
        if kind == 1 and p % 2:
            raise ParameterError("kind 1 needs an even number of ramified markings on each side")
        if kind == 2 and p % 2 == 0:
            raise ParameterError("kind 2 needs an odd number of ramified markings on each side")
        xa, xb = X[x:], X[:x]
        pa, pb = P[p:], P[:p]
        extra = 1 if kind != 2 else 0
        _require_stable(g - i, len(xa) + len(pa) + 1, "genus g-i side")
        _require_stable(i, len(xb) + len(pb) + 1, "genus i side")
        A, B = b.tvertex(g - i), b.tvertex(i)
        if kind == 1:
            a1 = b.svertex(2 * (g - i) - 1 + len(pa) // 2, A)
            b1 = b.svertex(2 * i - 1 + len(pb) // 2, B)
            e = b.tedge(A, B)
            b.sedge(a1, b1, e)
            b.sedge(a1, b1, e)
            b.legs(A, xa + pa, [a1])
            b.legs(B, xb + pb, [b1])
        elif kind == 2:
            W = b.tvertex(0)
            a1 = b.svertex(2 * (g - i) - 1 + (len(pa) + 1) // 2, A)
            b1 = b.svertex(2 * i - 1 + (len(pb) + 1) // 2, B)
            w1 = b.svertex(0, W)
            b.sedge(a1, w1, b.tedge(A, W), 2)
            b.sedge(w1, b1, b.tedge(W, B), 2)
            b.legs(A, xa + pa, [a1])
            b.legs(B, xb + pb, [b1])
        else:
            a1 = b.svertex(2 * (g - i) - 1 + r, A)
            b1, b2 = b.svertex(i, B), b.svertex(i, B)
            e = b.tedge(A, B)
            b.sedge(a1, b1, e)
            b.sedge(a1, b2, e)
            b.legs(A, xa + pa, [a1])
            b.legs(B, xb, [b1, b2])
        return b.finish(r > 0)
    if kind in (4, 5, 6):
        if g < 1:
            raise ParameterError("self-gluing needs g >= 1")
        if kind == 5 and r:
            raise ParameterError("kind 5 admits no ramified markings")
        _require_stable(g - 1, m + 2 * r + 2, "self-glued vertex")
        U = b.tvertex(g - 1)
        if kind == 4:
            u1 = b.svertex(2 * g - 3 + r, U)
            e = b.tedge(U, U)
            b.sedge(u1, u1, e)
            b.sedge(u1, u1, e)
            b.legs(U, X + P, [u1])
        elif kind == 5:
            u1, u2 = b.svertex(g - 1, U), b.svertex(g - 1, U)
            e = b.tedge(U, U)
            b.sedge(u1, u2, e)
            b.sedge(u2, u1, e)
            b.legs(U, X, [u1, u2])
        else:
            W = b.tvertex(0)
            u1 = b.svertex(2 * g - 2 + r, U)
            w1 = b.svertex(0, W)
            b.sedge(u1, w1, b.tedge(U, W), 2)
            b.sedge(w1, u1, b.tedge(W, U), 2)
            b.legs(U, X + P, [u1])
        return b.finish(r > 0)
    raise ParameterError(f"unknown gluing kind {kind}")


def build_section4_gluing(g: int, m: int) -> PrymStructure:
    """Two elliptic components meeting in ``g-1`` nodes, ``m`` markings on each.

    The cover is étale: each elliptic component has a connected double cover
    of genus 1 and each node has two preimages.
    """
    if g < 2 or m < 0:
        raise ParameterError("need g >= 2 and m >= 0")
    b = _Builder()
    A, B = b.tvertex(1), b.tvertex(1)
    a1, b1 = b.svertex(1, A), b.svertex(1, B)
    for _ in range(g - 1):
        e = b.tedge(A, B)
        b.sedge(a1, b1, e)
        b.sedge(a1, b1, e)
    b.legs(A, [f"x{j}" for j in range(1, m + 1)], [a1])
    b.legs(B, [f"x{j}" for j in range(m + 1, 2 * m + 1)], [b1])
    return b.finish(False)
