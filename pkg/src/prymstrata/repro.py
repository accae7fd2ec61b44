"""Re-check every published reference value and print one pass/fail line each."""
from __future__ import annotations

import io
import sys
from contextlib import redirect_stdout
from fractions import Fraction
from typing import Callable, TextIO

from .graph import graph_genus, valence
from .harmonic import degree, is_etale, validate_harmonic
from .modforms import GAMMA1_2, cusp_dim, cusp_dim_gamma12, first_nonzero_cusp_weight
from .prym import SHARED, specializations, validate_prym
from .psi import PsiExpression, PsiSymbol
from .pullback import normal_bundle_c1, pullback_boundary_class, q1, q2
from .strata import FactorKind, build_gluing, build_section4_gluing, nontaut_bound, stratum_factors


def _sum_psi(h: int, hbar: int, c) -> PsiExpression:
    return (PsiExpression.symbol(PsiSymbol(h)) + PsiExpression.symbol(PsiSymbol(hbar))).scale(c)


def _phi4_valence() -> bool:
    g, m, r = 4, 2, 1
    phi = build_gluing(4, g, r=r, m=m)
    v = phi.target.genera.index(g - 1)
    return valence(phi.target, v) == 2 + m + 2 * r


def _phi4_genus() -> bool:
    return all(graph_genus(build_gluing(4, g).target) == g for g in range(2, 6))


def _phi5_degree() -> bool:
    phi = build_gluing(5, 3)
    return degree(phi.morphism) == 2 and validate_harmonic(phi.morphism, 2).ok


def _phi2_degree() -> bool:
    phi = build_gluing(2, 3, i=1, r=1, p=1)
    return degree(phi.morphism) == 2 and 2 in phi.morphism.local_degrees


def _phi1_valid() -> bool:
    phi = build_gluing(1, 2, i=1)
    return validate_prym(phi.morphism).ok and phi.target.n_edges == 1 and phi.source.n_edges == 2


def _phi2_classes() -> bool:
    phi = build_gluing(2, 3, i=1, r=1, p=1)
    c = phi.classification
    stable = [v for v in range(phi.target.n_vertices) if v not in c.exc]
    return len(c.exc) == 1 and set(c.ram) == set(stable) and all(c.exc_contacts[v] == 1 for v in stable)


def _phi3_classes() -> bool:
    g, i = 3, 1
    phi = build_gluing(3, g, i=i, m=1, x=1)
    c, T = phi.classification, phi.target
    return ([T.genera[v] for v in c.tr] == [i]) and ([T.genera[v] for v in c.ntr] == [g - i])


def _tr_preimages_equal() -> bool:
    phi = build_gluing(3, 2, i=1, m=2, x=1)
    for psi in specializations(phi, 1):
        S, vmap = psi.source, psi.morphism.vertex_map
        for v in psi.classification.tr:
            pre = [s for s, w in enumerate(vmap) if w == v]
            if len({S.genera[s] for s in pre}) != 1:
                return False
    return True


def _phi5_factor() -> bool:
    g, m = 3, 2
    d = stratum_factors(build_gluing(5, g, m=m))
    (f,) = d.factors
    return (f.kind is FactorKind.CURVE and (f.genus, f.n) == (g - 1, m + 2)
            and d.dimension == 3 * g - 4 + m and d.codimension == 1)


def _kind5() -> bool:
    phi = build_gluing(5, 3)
    T, S = phi.target, phi.source
    return (T.genera == (2,) and T.n_edges == 1 and T.involution[0] == 1 and T.anchors[0] == T.anchors[1]
            and S.genera == (2, 2) and S.n_edges == 2)


def _kind6() -> bool:
    # The figure labels the cover vertex 2g-3+r with r counted on the glued
    # factor, which carries one ramified pair more than the ambient space.
    g, r = 2, 0
    phi = build_gluing(6, g, r=r)
    T, S = phi.target, phi.source
    u = T.genera.index(g - 1)
    cover = [s for s, v in enumerate(phi.morphism.vertex_map) if v == u]
    return (len(cover) == 1 and S.genera[cover[0]] == 2 * g - 3 + (r + 1)
            and set(phi.morphism.local_degrees) == {2} and len(phi.classification.exc) == 1)


def _kind3() -> bool:
    phi = build_gluing(3, 3, i=1, m=1, x=0)
    vmap = phi.morphism.vertex_map
    v = phi.target.genera.index(1)
    cover = [s for s, w in enumerate(vmap) if w == v]
    return len(cover) == 2 and all(phi.source.genera[s] == 1 for s in cover)


def _section4_g2() -> bool:
    phi = build_section4_gluing(2, 6)
    T = phi.target
    return (T.genera == (1, 1) and T.n_edges == 1 and len(T.leg_labels) == 12
            and graph_genus(T) == 2 and validate_prym(phi.morphism).ok)


def _q1_edge() -> bool:
    phi = build_gluing(1, 2, i=1)
    (node,) = phi.nodes
    return q1(phi) == _sum_psi(*node.halves, -1)


def _q2_exc() -> bool:
    phi = build_gluing(2, 3, i=1, r=1, p=1)
    (node,) = phi.nodes
    return node.exceptional and q2(phi) == _sum_psi(*node.halves, Fraction(-1, 2))


def _normal_one_edge() -> bool:
    phi = build_gluing(1, 2, i=1)
    (node,) = phi.nodes
    return normal_bundle_c1(phi) == _sum_psi(*node.halves, -1)


def _self_exc() -> bool:
    phi = build_gluing(2, 3, i=1, r=1, p=1)
    res = pullback_boundary_class(phi, phi)
    selfs = [t for t in res.terms if t.structure.codim == 1 and all(c == SHARED for c in t.pair.node_colors)]
    if len(selfs) != 1:
        return False
    (node,) = selfs[0].structure.nodes
    return node.exceptional and selfs[0].expression == _sum_psi(*node.halves, Fraction(-1, 2))


def _cli(argv: list[str], expected: str) -> bool:
    from .cli import main

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code == 0 and buf.getvalue().strip() == expected


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("self-glued base vertex has valence 2+m+2r", _phi4_valence),
    ("self-glued base graph has genus g", _phi4_genus),
    ("crossed two-sheet clutching has degree 2", _phi5_degree),
    ("exceptional chain with mixed local degrees has degree 2", _phi2_degree),
    ("crossed two-sheet clutching is etale", lambda: is_etale(build_gluing(5, 3).morphism)),
    ("exceptional chain is not etale", lambda: not is_etale(build_gluing(2, 3, i=1, r=1, p=1).morphism)),
    ("connected cover over a separating node is valid (i=1, g=2)", _phi1_valid),
    ("exceptional chain: middle exceptional, ends ramified", _phi2_classes),
    ("trivial-cover gluing: genus-i side doubled, other side not", _phi3_classes),
    ("doubled vertices specialise identically on both sheets", _tr_preimages_equal),
    ("crossed clutching has a single factor M(g-1, m+2) in codimension 1", _phi5_factor),
    ("kind 5, g=3: genus-2 loop under two genus-2 sheets", _kind5),
    ("kind 6, g=2: cover vertex genus 2g-3+r on the glued factor", _kind6),
    ("kind 3, i=1, g=3, m=1: doubled genus-1 vertex", _kind3),
    ("two elliptic tails, g=2, 12 markings", _section4_g2),
    ("shared plain node gives -(psi_h + psi_hbar)", _q1_edge),
    ("shared exceptional node gives -(psi_h + psi_hbar)/2", _q2_exc),
    ("normal bundle of a one-node stratum", _normal_one_edge),
    ("self-pullback of an exceptional chain", _self_exc),
    ("weight-8 cusp forms for Gamma1(2): 1", lambda: cusp_dim(GAMMA1_2, 8) == 1),
    ("weight-6 cusp forms for Gamma1(2): 0", lambda: cusp_dim(GAMMA1_2, 6) == 0),
    ("weight-12 cusp forms for Gamma1(2): 2", lambda: cusp_dim(GAMMA1_2, 12) == 2),
    ("closed form at weight 8: 1", lambda: cusp_dim_gamma12(8) == 1),
    ("closed form at weight 4: 0", lambda: cusp_dim_gamma12(4) == 0),
    ("first cusp form for Gamma1(2) in weight 8", lambda: first_nonzero_cusp_weight(GAMMA1_2) == 8),
    ("marking bound g=2: 12", lambda: nontaut_bound(2) == 12),
    ("marking bound g=6: 4", lambda: nontaut_bound(6) == 4),
    ("cli bounds --genus 2", lambda: _cli(["bounds", "--genus", "2"], "12")),
    ("cli modforms weight 8", lambda: _cli(["modforms", "--level", "gamma1-2", "--weight", "8", "--what", "cusp"], "1")),
]


def run_all(out: TextIO = sys.stdout) -> bool:
    ok = True
    for label, check in CHECKS:
        try:
            passed = bool(check())
            note = ""
        except Exception as exc:  # a crash is reported as a failure, not propagated
            passed, note = False, f" ({type(exc).__name__}: {exc})"
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {label}{note}", file=out)
    print(f"{sum(1 for _ in CHECKS)} checks, {'all passed' if ok else 'FAILURES'}", file=out)
    return ok
