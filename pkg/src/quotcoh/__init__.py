"""Exact integral cohomology of prime-order cyclic quotients.

Subpackages:

* intmat    -- arbitrary-precision integer matrices, Smith normal form,
               saturated kernels, mod-p ranks
* profiles  -- Jordan profiles of order-p actions over F_p and their
               tensor / symmetric-power algebra
* lattices  -- integral lattices with prime-order isometries, group
               cohomology, pushforward and glued overlattices
* toric     -- fans, regular subdivisions, resolutions of isolated cyclic
               quotient singularities, closed cohomology tables
* engine    -- the spectral-sequence and quotient-cohomology calculator
* hilbert   -- Hilbert schemes of points on K3 surfaces with natural
               prime-order actions; reproduces the quotient tables
* cli       -- command-line front end and golden-table regression runner
"""

from .intmat import (
    IntMatrix,
    image_basis,
    kernel_saturated,
    quotient_group,
    rank_mod_p,
    smith_normal_form,
)
from .profiles import (
    JordanProfile,
    cohomology_dim,
    curtis_reiner_check,
    direct_sum,
    jordan_profile,
    sym_power,
    tensor,
)
from .lattices import (
    GLattice,
    Lattice,
    RationalLattice,
    bns_invariants,
    discriminant,
    discriminant_group,
    fujiki_constant,
    group_cohomology,
    invariants,
    named_lattice,
    overlattice_from_glue,
    pushforward_quotient_lattice,
    rescale_to_primitive,
    signature,
)
from .toric import (
    Cone,
    CyclicSingularity,
    Fan,
    betti_complete_smooth,
    hj_resolution,
    is_regular,
    punctured_quotient_cohomology,
    quotient_fan,
    relative_quotient_cohomology,
    resolve,
)
from .engine import (
    DegreeInvariants,
    GradedInvariants,
    QuotientReport,
    alpha_even_bound,
    degeneration_status,
    e2_entry,
    lefschetz_euler,
    odd_alpha_pairs,
    quotient_report,
    u_dimensions,
)
from .hilbert import (
    K3_TABLE,
    NakajimaLabel,
    bb_quotient,
    betti_numbers,
    betti_table,
    enumerate_basis,
    graded_profile,
    hilbert_report,
    k3_table,
    nikulin_involution,
)

__version__ = "0.1.0"
