"""Numerical laboratory for Selberg/Ruelle zeta functions of Schottky surfaces.

Subpackages: hyperbolic-plane primitives (moebius), Schottky groups and length
spectra (schottky), Euler products (zeta), transfer-operator continuation
(transfer), winding certificates and dimension formulas (zerofind), boundary
scattering/Poisson calculus (boundary), exact ladder calculus (sections).
"""

from .boundary import (
    FourierDistribution,
    ScatteringMultiplier,
    equivariance_residual,
    harmonicity_residual,
    kernel_check_Pn,
    poisson_helgason,
    scattering_apply,
    scattering_multiplier,
)
from .moebius import (
    BoundaryPoint,
    MoebiusMap,
    UnitTangentPoint,
    b_z_inverse,
    cayley_to_disk,
    cayley_to_halfplane,
    endpoint_maps,
    exp_sl2,
    lie_bracket,
    phi_pm,
    poisson_kernel,
)
from .schottky import (
    Convention,
    LengthSpectrum,
    LineDisk,
    PrimitiveGeodesic,
    SchottkyGroup,
    conjugacy_classes,
    cylinder,
    funnel_chain,
    funneled_torus,
    length_spectrum,
    limit_set_sample,
    pair_of_pants,
)
from .sections import (
    TensorSection,
    casimir_residual,
    eta_apply,
    ladder_build,
    ladder_norm_ratio,
)
from .special import gamma, gamma_ratio, loggamma
from .transfer import (
    TransferMatrix,
    ZeroCertificate,
    build_transfer_matrix,
    fredholm_det,
    fredholm_det_log,
    hausdorff_dimension,
    hausdorff_dimension_det,
    locate_zeros,
)
from .zerofind import (
    Compact,
    ContourScan,
    ConvexCocompact,
    dim_Hn,
    scan_contour,
    verify_topological_zeros,
    winding_number,
    winding_rectangle,
)
from .zeta import (
    ZetaEvaluation,
    factorization_check,
    poincare_identity_check,
    ruelle_zeta,
    selberg_zeta,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
