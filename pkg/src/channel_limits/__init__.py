"""Numerical laboratory for limiting output sets of quantum channels.

The package pairs finite-dimensional channel samples (Haar isometries,
weighted unitary families, measure-and-prepare maps) with the exact
limits their output sets converge to, so Monte-Carlo runs always have a
closed-form target to be measured against.
"""

from .channels import (
    Channel,
    DepolarizingChannel,
    EBChannel,
    MixedUnitaryChannel,
    StinespringChannel,
    make_depolarizing,
    make_pinching,
    validate_povm,
    validate_weights,
)
from .config import ExperimentConfig, load_config, parse_config_text
from .ensembles import (
    SeededRng,
    StinespringRegime,
    haar_isometry,
    haar_unitary,
    sample_density_matrix,
    sample_mixed_unitary_channel,
    sample_projective_povm,
    sample_pure_state,
    sample_stinespring_channel,
    sample_unit_norm_povm,
    stream,
)
from .experiments import (
    ExperimentRecord,
    emit_results,
    parse_records_json,
    run_experiment,
)
from .geometry import (
    MembershipVerdict,
    NormAscent,
    SpectrumProbe,
    estimate_norm_one_inf,
    estimate_smin,
    holevo_from_smin,
    holevo_lower_bound,
    membership,
    membership_directions,
    norm_ascent,
    orthogonal_schmidt_vector,
    probe_top_eigenvalues,
    sample_outputs,
    unit_sphere_sequence,
    weyl_operator,
    weyl_twirl,
)
from .linalg import (
    DensityMatrix,
    EigenSystem,
    SchmidtDecomposition,
    hermitian_eigenvalues,
    hermitian_eigs,
    partial_trace_left,
    partial_trace_right,
    renyi_entropy,
    schmidt,
    von_neumann_entropy,
)
from .oracles import (
    SphereSupremum,
    SubsetEvaluation,
    eb_limit,
    evaluate_subset,
    free_unitary_sum_norm,
    maximize_over_sphere,
    mixed_unitary_norm_limit,
    one_heavy_sup_value,
    one_heavy_weights,
    rank_one_limit,
    sphere_sup,
    stationary_x,
    stinespring_peak_eigenvalue,
)
from .tensor_lab import (
    EBTensorDecomposition,
    PositivityReport,
    eb_tensor_decompose,
    eb_tensor_output,
    uniform_mixing_positivity_probe,
)

__version__ = "0.1.0"
