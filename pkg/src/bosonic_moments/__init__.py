"""Exact Haar second moments and outcome-collision statistics for Fock-state
linear optics, cross-validated by a permanent-based Monte-Carlo oracle."""

from ._kernels import BACKEND as kernel_backend
from .anticoncentration import (
    P2Report,
    asymptote,
    dawson,
    mc_p2,
    p2_beta,
    p2_closed,
    p2_integral,
    p2_report,
    pz_bound,
    regime,
    regime_detail,
)
from .combinatorics import (
    FockBasis,
    Occupation,
    basis_size,
    collision_free_occupation,
    collision_free_ratio,
    enumerate_basis,
    hyp2f1_terminating,
    pochhammer,
)
from .interferometer import (
    HomomorphismMatrix,
    Interferometer,
    amplitude,
    haar_unitary,
    homomorphism_matrix,
    output_probability,
    permanent,
    permanent_glynn,
)
from .irreps import (
    IrrepSpectrum,
    decompose,
    fock_lowered_purity,
    fock_lowered_purity_sum,
    irrep_dim,
    irrep_norm_closed,
    lowering_nullity,
    operator_spectrum,
    project,
    roundtrip_eigenvalue,
    step_eigenvalue,
)
from .ladder import (
    SectorOperator,
    commutator_eigenvalue,
    lower,
    lower_power,
    raise_,
    raise_power,
)
from .moments import (
    MomentEstimate,
    first_moment,
    mc_first_moment,
    mc_second_moment,
    second_moment,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FockBasis",
    "HomomorphismMatrix",
    "Interferometer",
    "IrrepSpectrum",
    "MomentEstimate",
    "Occupation",
    "P2Report",
    "SectorOperator",
    "amplitude",
    "asymptote",
    "basis_size",
    "collision_free_occupation",
    "collision_free_ratio",
    "commutator_eigenvalue",
    "dawson",
    "decompose",
    "enumerate_basis",
    "first_moment",
    "fock_lowered_purity",
    "fock_lowered_purity_sum",
    "haar_unitary",
    "homomorphism_matrix",
    "hyp2f1_terminating",
    "irrep_dim",
    "irrep_norm_closed",
    "kernel_backend",
    "lower",
    "lower_power",
    "lowering_nullity",
    "mc_first_moment",
    "mc_p2",
    "mc_second_moment",
    "operator_spectrum",
    "output_probability",
    "p2_beta",
    "p2_closed",
    "p2_integral",
    "p2_report",
    "permanent",
    "permanent_glynn",
    "pochhammer",
    "project",
    "pz_bound",
    "raise_",
    "raise_power",
    "regime",
    "regime_detail",
    "roundtrip_eigenvalue",
    "second_moment",
    "step_eigenvalue",
]
