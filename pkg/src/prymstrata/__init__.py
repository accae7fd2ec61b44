"""Combinatorics of boundary strata of pointed Prym moduli spaces.

Weighted graphs, degree-2 harmonic morphisms, Prym structures and their
enumeration, stratum products, psi-class pullback polynomials and the
modular-form dimension arithmetic used for genus one.
"""
from .errors import GraphError, MorphismError, ParameterError, PrymError
from .graph import (
    Stability,
    ValidationReport,
    WeightedGraph,
    canonical_form,
    contract_edges,
    graph_genus,
    isomorphic,
    relabel,
    stability_class,
    stable_graphs,
    valence,
    validate_graph,
)
from .harmonic import HarmonicMorphism, degree, is_etale, validate_harmonic
from .modforms import (
    GAMMA1_2,
    SL2Z,
    CurveData,
    cusp_dim,
    cusp_dim_gamma12,
    eichler_shimura_dim,
    eisenstein_dim,
    first_nonzero_cusp_weight,
)
from .prym import (
    Classification,
    GenericPair,
    PrymStructure,
    canonical_morphism,
    classify,
    contract_nodes,
    enumerate_generic_pairs,
    enumerate_prym_structures,
    prym_strata,
    specializations,
    validate_prym,
)
from .psi import PsiExpression, PsiSymbol
from .pullback import PullbackResult, normal_bundle_c1, normal_bundle_ctop, pullback_boundary_class, q1, q2
from .strata import (
    FactorKind,
    StratumDescriptor,
    StratumFactor,
    build_gluing,
    build_section4_gluing,
    enumerate_strata,
    nontaut_bound,
    stratum_factors,
)

__version__ = "0.1.0"
