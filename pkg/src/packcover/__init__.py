"""Numerical laboratory for simultaneous packing-and-covering constants of
finite-dimensional normed spaces."""

__version__ = "0.1.0"

from .intervals import CertifiedInterval
from .spaces import (
    DirectSum,
    Lp,
    Polytope,
    Space,
    VoronoiGauge,
    WeightedLp,
    bj_orthogonal,
    dual_eval,
    duality_functional,
    eval_norm,
    eval_norm_many,
    space_from_json,
    space_to_json,
    sphere_sample,
)
from .lattices import (
    GammaStarEstimate,
    Lattice,
    covering_radius,
    dist_to_lattice,
    gamma_star_of_lattice,
    optimize_lattice,
    saturate_packing,
    shortest_vector,
    voronoi_gauge,
    voronoi_gauge_space,
)
from .moduli import (
    Composed,
    EvalBudget,
    Identity,
    Modulus,
    PhiP,
    Table,
    check_modulus_axioms,
    compose,
    delta,
    delta_local,
    nordlander_check,
    phi_p,
    t_x,
    tangential,
    tangential_table,
    varphi_delta_inequalities,
)
from .dispersion import DispersionResult, max_min_separation, verify_separation
from .subgroup import (
    CustomOracle,
    FreshCoordinateOracle,
    SeparationCertificate,
    SubgroupResult,
    build,
    gamma_star_upper_from_build,
    product,
    verify,
)
from .suptiling import SimpleFunction, check_even_separation, round_even, round_even_zero_dim
from .bounds import (
    BoundReport,
    chain_report,
    kottman_lp,
    kottman_Lp_nonatomic,
    lp_step1_check,
    minkowski_type_check,
    named_gamma,
    phi_octahedral_upper,
)
