from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prymstrata.errors import ParameterError
from prymstrata.prym import FIRST_ONLY, SHARED, prym_strata
from prymstrata.psi import PsiExpression, PsiSymbol
from prymstrata.pullback import (
    node_factor,
    normal_bundle_c1,
    normal_bundle_ctop,
    pullback_boundary_class,
    q1,
    q2,
)
from prymstrata.strata import build_gluing

P = PsiExpression.symbol


def pair_sum(node, c):
    return (P(node.halves[0]) + P(node.halves[1])).scale(c)


# -- psi algebra -----------------------------------------------------------------

monomials = st.lists(st.tuples(st.integers(0, 4), st.integers(1, 2)), max_size=3)
expressions = st.lists(
    st.tuples(monomials, st.fractions(max_denominator=4, min_value=-3, max_value=3)), max_size=4
).map(lambda ts: PsiExpression([(tuple((PsiSymbol(h), e) for h, e in m), c) for m, c in ts]))


class TestPsi:
    def test_normalisation(self):
        e = P(1) + P(2) - P(1)
        assert e == P(2) and str(e) == "psi2"
        assert (P(1) - P(1)).is_zero() and PsiExpression.zero().degree() == -1

    def test_product_and_power(self):
        e = (P(0) + P(1)) ** 2
        assert e.coefficient(0, 1) == 2 and e.coefficient(0, 0) == 1 and e.degree() == 2
        assert e.is_homogeneous() and not (e + 1).is_homogeneous()

    def test_rendering(self):
        e = (P(3) + P(4)).scale(Fraction(-1, 2))
        assert str(e) == "-1/2*psi3 - 1/2*psi4"
        assert e.latex() == r"-\frac{1}{2} \psi_{3} - \frac{1}{2} \psi_{4}"

    def test_substitute(self):
        e = P(0) * P(1)
        assert e.substitute({0: P(2) + 1}) == P(1) * P(2) + P(1)

    def test_vertex_does_not_affect_equality(self):
        assert PsiSymbol(3, 0) == PsiSymbol(3, 7)

    def test_negative_power(self):
        with pytest.raises(ValueError):
            P(0) ** -1

    @given(expressions, expressions, expressions)
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a and a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a - a == 0 and a * 1 == a

    @given(expressions)
    def test_json_round_trip(self, a):
        assert PsiExpression.from_json(a.to_json()) == a

    @given(expressions, expressions)
    def test_degree_of_product(self, a, b):
        if not a.is_zero() and not b.is_zero() and a.is_homogeneous() and b.is_homogeneous():
            assert (a * b).degree() == a.degree() + b.degree()


# -- pullback polynomials ----------------------------------------------------------


class TestNodeFactors:
    def test_plain_node(self):
        phi = build_gluing(1, 2, i=1)
        (node,) = phi.nodes
        assert not node.exceptional
        assert q1(phi) == pair_sum(node, -1) and q2(phi) == 1
        assert node_factor(phi, node) == pair_sum(node, -1)

    def test_exceptional_node(self):
        phi = build_gluing(2, 3, i=1, r=1, p=1)
        (node,) = phi.nodes
        assert node.exceptional
        assert q2(phi) == pair_sum(node, Fraction(-1, 2)) and q1(phi) == 1

    def test_unshared_nodes_contribute_nothing(self):
        phi = build_gluing(1, 2, i=1)
        assert q1(phi, [FIRST_ONLY]) == 1

    def test_coloring_length(self):
        with pytest.raises(ParameterError):
            q1(build_gluing(1, 2, i=1), [SHARED, SHARED])

    def test_normal_bundle_one_node(self):
        phi = build_gluing(1, 2, i=1)
        (node,) = phi.nodes
        assert normal_bundle_c1(phi) == normal_bundle_ctop(phi) == pair_sum(node, -1)

    def test_normal_bundle_two_nodes(self):
        phi = next(p for p in prym_strata(2, [], 2) if p.codim == 2
                   and sum(n.exceptional for n in p.nodes) == 1)
        plain, exc = sorted(phi.nodes, key=lambda n: n.exceptional)
        assert normal_bundle_c1(phi) == pair_sum(plain, -1) + pair_sum(exc, Fraction(-1, 2))
        assert normal_bundle_ctop(phi) == pair_sum(plain, -1) * pair_sum(exc, Fraction(-1, 2))


class TestPullback:
    def test_self_pullback_of_exceptional_chain(self):
        phi = build_gluing(2, 3, i=1, r=1, p=1)
        res = pullback_boundary_class(phi, phi)
        (term,) = [t for t in res.terms if t.structure.codim == 1]
        (node,) = term.structure.nodes
        assert term.expression == pair_sum(node, Fraction(-1, 2))

    def test_disjoint_divisors_are_transverse(self):
        divisors = prym_strata(2, [], 1)[1:]
        for a in divisors:
            for b in divisors:
                res = pullback_boundary_class(a, b)
                for t in res.terms:
                    if t.structure.codim == 2:
                        assert t.expression == 1
                assert res.check_degrees() == []

    def test_output_formats(self):
        phi = build_gluing(1, 2, i=1)
        res = pullback_boundary_class(phi, phi)
        assert res.to_dict()["codim_phi2"] == 1
        assert res.latex().startswith(r"\chi_{\phi_{0},*}")
        empty = type(res)(phi, phi, ())
        assert empty.latex() == "0"

    def test_ambient_mismatch(self):
        with pytest.raises(ParameterError):
            pullback_boundary_class(prym_strata(2, [], 1)[1], prym_strata(3, [], 1)[1])


POOL = prym_strata(2, [], 2)


@given(st.sampled_from(POOL), st.sampled_from(POOL))
def test_degree_law(phi1, phi2):
    res = pullback_boundary_class(phi1, phi2)
    for t in res.terms:
        assert t.expression.is_homogeneous()
        assert t.psi_degree + t.relative_codim(phi1) == phi2.codim


@given(st.sampled_from(POOL))
def test_self_term_is_top_chern_class(phi):
    res = pullback_boundary_class(phi, phi)
    selfs = [t for t in res.terms if t.structure.codim == phi.codim]
    assert len(selfs) == 1
    (t,) = selfs
    assert all(c == SHARED for c in t.pair.node_colors)
    assert t.expression == normal_bundle_ctop(t.structure)
