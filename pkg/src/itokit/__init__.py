"""Finite-dimensional quantum Ito *-algebras.

Build algebras from structure constants (or the catalog), check their
axioms, construct the faithful triangular representation on Minkowski
space, split them into Brownian and Levy parts, and test the multiplication
table against a toy-Fock simulation.
"""

__version__ = "0.1.0"

from .algebra import (
    AxiomReport,
    ItoAlgebra,
    ThermalForm,
    VacuumForm,
    Violation,
    check_axioms,
    from_table,
    mul,
    star,
    state_eval,
)
from .catalog import (
    build_hp,
    build_mixed_wiener_poisson,
    build_newton,
    build_periodic_wiener,
    build_poisson,
    build_standard,
    build_thermal_brownian,
    build_vacuum,
    build_wiener,
    build_zero_intensity_poisson,
    verify_mode_realization,
)
from .decomposition import (
    Classification,
    Decomposition,
    Kind,
    TwoDimType,
    classify,
    decompose,
    quotient_identity,
    thermal_split,
    vacuum_presentation,
    vacuum_split,
)
from .errors import *  # noqa: F401,F403
from .fock import ToyFockConfig, build_cell_increment, simulate_process, verify_ito_table
from .groups import (
    FiniteGroupData,
    IrrepData,
    build_group_poisson,
    convolution_checks,
    cyclic_group,
    cyclic_irreps,
    s3_irreps,
    spectral_decompose,
    symmetric_group_3,
    synthesize,
)
from .io import emit_algebra, parse_algebra
from .representation import (
    FundamentalRep,
    KreinRep,
    canonicalize_representation,
    conjugate,
    fundamental_matrix,
    gns_build,
    gram_matrix,
    krein_from_fundamental,
    minkowski_metric,
    null_ideal,
    quotient_faithful,
)
