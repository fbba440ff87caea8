"""Extremal minor ratios on the positive Grassmannian Gr>0(2, n)."""

from .core import (
    PlueckerVector,
    PointMatrix,
    Tolerance,
    is_positive,
    minors,
    plucker_residual,
    proportional,
    uvw_residual,
    wedge,
)
from .cyclic import (
    GeoMeans,
    OrbitTable,
    geometric_means,
    normalize,
    orbit,
    orbit_table,
    shifted_relation_residual,
    sigma_tuple,
)
from .extremal import (
    CertificateReport,
    b_reduction,
    certify_point,
    check_geomean_inequalities,
    check_linear_inequalities,
    contraction_weights,
    cyclic_matrix,
    loss_B,
    loss_E,
    loss_L,
    normalized_logs,
    operator_S,
    optimal_loss,
    weights,
)
from .optimizer import (
    AngleRadiusParam,
    OptimizationResult,
    OptimizerConfig,
    minimize,
    sample_positive,
    to_matrix,
)
from .qfamily import QFamilyReport, admissible_interval, q_transform, verify_nonuniqueness
from .reconstruct import OuterOrbitData, c_sequence, extract_outer, reconstruct

__version__ = "0.1.0"
