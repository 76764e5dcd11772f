"""wittlab: exact truncated big Witt vectors, Milnor K-symbol calculus over
k[t]/(t^{m+1}), the inverse Bloch map and its filters, the char-0 de
Rham-Witt model, the inverse Cartier calculus, and brute-force K-group
oracles."""

from .fields import El, GF, QQ, UniversalRing, pth_root
from .poly import Poly, RationalFunctionField, SimpleExtension, is_irreducible, \
    poly_factor, poly_gcd
from .truncated import TruncatedPolyRing, norm_coeffwise, truncated
from .witt import (
    TruncationSet,
    WittVector,
    formal_exp,
    formal_log,
    frobenius,
    from_series,
    ghost,
    restrict,
    restriction,
    teichmuller,
    to_series,
    verschiebung,
    witt_from_unit,
    witt_mul,
    witt_to_unit,
)
from .forms import (
    DifferentialForm,
    DrwElement,
    RelativeFormClass,
    con,
    d,
    dlog,
    drw_d,
    drw_decompose,
    drw_frobenius,
    drw_lambda,
    drw_recompose,
    drw_restrict,
    drw_verschiebung,
    reduce_mod_exact,
    wedge,
)
from .milnor import (
    MilnorSymbol,
    SymbolSum,
    dlog_k,
    expand_multilinear,
    gamma_product,
    ks_improved,
    relative_generators,
    rewrite_basic,
    symbol,
)
from .bloch import (
    AdditiveZeroCycle,
    ClosedPointCycle,
    DecomposedClass,
    GraphCycle,
    SpecialFiberCycle,
    dec,
    graph,
    j_product,
    lift_symbol_to_cycle,
    log0_and_dlog_t,
    log_n,
    phi1_pushforward,
    phi_j_product,
    phi_rational,
    rho,
    twist,
)
from .oracle import (
    ClassCoords,
    FinitePresentation,
    class_coords,
    present,
    relative_subgroup,
    smith,
)
from .cartier import (
    FormClassModBs,
    GrClass,
    PDecomposition,
    antidifferentiate,
    bs_member,
    cartier_C,
    grm_equal,
    inverse_cartier,
    p_decompose,
    p_polynomial,
    theta,
    zs_member,
)

__version__ = "0.1.0"
