"""Colored Delone point sets: generators, cluster statistics,
autocorrelation, and diffraction spectra."""

from .coords import GOLDEN, SILVER, TOL_EQ, QuadField, QuadNum
from .geometry import (
    Ball,
    Box,
    Cluster,
    ClusterClassTable,
    DeloneParams,
    Interval,
    MultiSetPatch,
    cluster_1d,
    cluster_distance,
    delone_params,
    enumerate_cluster_classes,
    match_clusters,
    translate_cluster,
)
from .sources import (
    CutProjectSource,
    CutProjectSpec,
    LatticeSource,
    PointSource,
    PoissonSource,
    SubstitutionRule,
    SubstitutionSource,
    TranslatedSource,
    cut_project_source,
    fibonacci_cut_project,
    fibonacci_substitution,
    integer_lattice,
    lattice_source,
    period_doubling_source,
    poisson_source,
    source_from_config,
    substitution_source,
    thue_morse_source,
    translate_source,
    window,
)
from .stats import (
    FrequencyEstimate,
    VanHoveSpec,
    count_cluster,
    default_offsets,
    estimate_frequency,
    van_hove_region,
)
from .hull import (
    CylinderSpec,
    HullPartition,
    MetricBracket,
    PartitionParams,
    PatchTooSmallError,
    build_partition_1d,
    cylinder_contains,
    empirical_cylinder_measure,
    hull_metric,
    partition_params,
    sample_orbit,
)
from .spectra import (
    AutocorrelationMeasure,
    DiffractionEstimate,
    SmoothingKernel,
    SpectralCheckReport,
    autocorr_direct,
    autocorr_from_frequencies,
    bragg_amplitude,
    cosine_kernel,
    dworkin_correlation,
    dworkin_report,
    pairwise_sum,
    peak_scan,
    plateau_kernel,
    smoothed_autocorr_profile,
    smoothed_diffraction,
    triangle_kernel,
)

__version__ = "0.1.0"
