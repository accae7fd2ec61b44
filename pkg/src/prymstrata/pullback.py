"""
Excess-intersection pullback of boundary strata classes.

For two Prym structures, the pullback of one stratum class along the gluing
map of the other is a sum over generic common specialisations.  Each term
carries the product, over nodes shared by both inputs, of the linear factor
``-(psi_h + psi_hbar)`` (plain node) or ``-(psi_h + psi_hbar)/2`` (node
blown up into an exceptional chain).  Unshared nodes are transverse and
contribute nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ParameterError
from .prym import (
    SHARED,
    GenericPair,
    Node,
    PrymStructure,
    _as_structure,
    _check_ambient,
    enumerate_generic_pairs,
)
from .psi import PsiExpression, PsiSymbol

HALF = Fraction(1, 2)


def node_factor(phi: PrymStructure, node: Node) -> PsiExpression:
    T = phi.target
    h, hbar = node.halves
    s = PsiExpression.symbol(PsiSymbol(h, T.anchors[h])) + PsiExpression.symbol(PsiSymbol(hbar, T.anchors[hbar]))
    return s.scale(-HALF if node.exceptional else -1)


def _resolve(phi, coloring) -> tuple[PrymStructure, Sequence[int]]:
    """Accept a generic pair, or a structure with an optional node colouring (default: all shared)."""
    if isinstance(phi, GenericPair):
        return phi.structure, (phi.node_colors if coloring is None else coloring)
    phi = _as_structure(phi)
    if coloring is None:
        return phi, (SHARED,) * phi.codim
    if len(coloring) != phi.codim:
        raise ParameterError(f"coloring has {len(coloring)} entries for {phi.codim} nodes")
    return phi, tuple(coloring)


def q1(phi, coloring=None) -> PsiExpression:
    """Product of ``-(psi_h + psi_hbar)`` over shared plain nodes."""
    phi, colors = _resolve(phi, coloring)
    out = PsiExpression.one()
    for node, c in zip(phi.nodes, colors):
        if c == SHARED and not node.exceptional:
            out = out * node_factor(phi, node)
    return out


def q2(phi, coloring=None) -> PsiExpression:
    """Product of ``-(psi_h + psi_hbar)/2`` over shared exceptional nodes."""
    phi, colors = _resolve(phi, coloring)
    out = PsiExpression.one()
    for node, c in zip(phi.nodes, colors):
        if c == SHARED and node.exceptional:
            out = out * node_factor(phi, node)
    return out


def normal_bundle_c1(phi) -> PsiExpression:
    """First Chern class of the normal bundle of the gluing map: sum of the node factors."""
    phi = _as_structure(phi)
    out = PsiExpression()
    for node in phi.nodes:
        out = out + node_factor(phi, node)
    return out


def normal_bundle_ctop(phi) -> PsiExpression:
    """Top Chern class of the same bundle: product of the node factors."""
    phi = _as_structure(phi)
    out = PsiExpression.one()
    for node in phi.nodes:
        out = out * node_factor(phi, node)
    return out


@dataclass(frozen=True)
class PullbackTerm:
    pair: GenericPair
    expression: PsiExpression

    @property
    def structure(self) -> PrymStructure:
        return self.pair.structure

    @property
    def psi_degree(self) -> int:
        return max(self.expression.degree(), 0)

    def relative_codim(self, phi1: PrymStructure) -> int:
        return self.structure.codim - phi1.codim


@dataclass(frozen=True)
class PullbackResult:
    phi1: PrymStructure
    phi2: PrymStructure
    terms: tuple[PullbackTerm, ...]

    def check_degrees(self) -> list[str]:
        """Terms violating ``psi-degree + relative codim = codim(phi2)``."""
        bad = []
        for i, t in enumerate(self.terms):
            if t.psi_degree + t.relative_codim(self.phi1) != self.phi2.codim:
                bad.append(f"term {i}: degree {t.psi_degree} + {t.relative_codim(self.phi1)} != {self.phi2.codim}")
        return bad

    def to_dict(self) -> dict:
        return {
            "codim_phi1": self.phi1.codim,
            "codim_phi2": self.phi2.codim,
            "terms": [
                {
                    "generic": t.pair.to_dict(),
                    "expression": t.expression.to_json(),
                    "expression_text": str(t.expression),
                }
                for t in self.terms
            ],
        }

    def latex(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, t in enumerate(self.terms):
            parts.append(rf"\chi_{{\phi_{{{i}}},*}}\left({t.expression.latex()}\right)")
        return " + ".join(parts)


def pullback_boundary_class(phi1, phi2) -> PullbackResult:
    """Pull the class of the stratum of ``phi2`` back along the gluing map of ``phi1``."""
    phi1, phi2 = _as_structure(phi1), _as_structure(phi2)
    _check_ambient(phi1, phi2)
    terms = []
    for pair in enumerate_generic_pairs(phi1, phi2):
        psi = pair.structure
        expr = q1(psi, pair.node_colors) * q2(psi, pair.node_colors)
        terms.append(PullbackTerm(pair, expr))
    return PullbackResult(phi1, phi2, tuple(terms))
