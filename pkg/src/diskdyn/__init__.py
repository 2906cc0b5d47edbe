"""Hyperbolic-disk map systems: metric core, domain catalog, inradius
searches, composition engine, and the constructive builders."""

from .bloch import (
    BlochReport,
    RadialStretch,
    SearchBudget,
    StretchedDomain,
    Verdict,
    bloch_radius_search,
    qc_image_experiment,
    witness_disk_verify,
)
from .constructions import (
    AlternatingStep,
    MetricComparisonReport,
    NonconstantStep,
    PreimageConvergenceReport,
    build_alternating_system,
    build_nonconstant_system,
    metric_comparison_report,
    point_at_intrinsic_distance,
    preimage_convergence_report,
    slack_product,
    slack_product_squared,
    slack_sequence,
)
from .domains import (
    DomainModel,
    EuclideanSubdisk,
    Horodisk,
    MobiusImage,
    RDenseComplement,
    covering_with_basepoint,
    mobius_image,
    parse_domain,
)
from .errors import (
    BoundaryError,
    ConfigError,
    DiskdynError,
    NumericError,
    PreconditionError,
)
from .hyperbolic import (
    Blaschke2,
    DiskPoint,
    HyperbolicDisk,
    MobiusAut,
    euclid_to_hyp,
    hyp_to_euclid,
    rho,
    rho_grid,
)
from .ifs import (
    Affine,
    ClusterInfo,
    ConvergenceReport,
    IFSTrace,
    IFSVerdict,
    MapDescriptor,
    ProbeSpec,
    RiemannFrom,
    RiemannTo,
    Squaring,
    StepRecord,
    compose_eval,
    denjoy_wolff,
    random_system,
    run,
)
from .sampling import hyperbolic_lattice, ring_points, witness_samples

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "AlternatingStep",
    "Blaschke2",
    "BlochReport",
    "BoundaryError",
    "ClusterInfo",
    "ConfigError",
    "ConvergenceReport",
    "DiskPoint",
    "DiskdynError",
    "DomainModel",
    "EuclideanSubdisk",
    "Horodisk",
    "HyperbolicDisk",
    "IFSTrace",
    "IFSVerdict",
    "MapDescriptor",
    "MetricComparisonReport",
    "MobiusAut",
    "MobiusImage",
    "NonconstantStep",
    "NumericError",
    "PreconditionError",
    "PreimageConvergenceReport",
    "ProbeSpec",
    "RDenseComplement",
    "RadialStretch",
    "RiemannFrom",
    "RiemannTo",
    "SearchBudget",
    "Squaring",
    "StepRecord",
    "StretchedDomain",
    "Verdict",
    "bloch_radius_search",
    "build_alternating_system",
    "build_nonconstant_system",
    "compose_eval",
    "covering_with_basepoint",
    "denjoy_wolff",
    "euclid_to_hyp",
    "hyp_to_euclid",
    "hyperbolic_lattice",
    "metric_comparison_report",
    "mobius_image",
    "parse_domain",
    "point_at_intrinsic_distance",
    "preimage_convergence_report",
    "qc_image_experiment",
    "random_system",
    "rho",
    "rho_grid",
    "ring_points",
    "run",
    "slack_product",
    "slack_product_squared",
    "slack_sequence",
    "witness_disk_verify",
    "witness_samples",
]
