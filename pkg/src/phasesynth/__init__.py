"""Phase-rotation synthesis of quantum images.

Grey-level images are encoded as phase states, their phases are estimated
with a simulated covariant measurement, and a diagonal rotation built from
the estimates embeds one image into another.
"""
from ._backend import BACKEND
from .analysis import (
    JOINT_BOUND,
    MetricsReport,
    classify_overflow,
    interval_ratio,
    interval_ratio_from,
    pointwise_ratio,
    trend_table,
    uncertainty_report,
)
from .errors import (
    ConfigError,
    DegenerateDistributionError,
    DimensionError,
    MalformedStateError,
    PhaseSynthError,
    ResourceCapError,
)
from .mpe import (
    PhaseEstimate,
    VarianceStats,
    estimate_phases,
    holevo_variance,
    mpe_fidelity,
    povm_density,
)
from .phasecore import (
    GrayImage,
    PhaseImage,
    gray_to_phase,
    phase_to_gray,
    restrict_phase,
)
from .statevec import (
    GateTrace,
    StateVector,
    apply_diagonal,
    extract_phases_exact,
    prepare_frqi_angle_state,
    prepare_image_state,
    reindex_to_mpe_form,
)
from .synthesis import (
    DiagonalUnitary,
    SynthesisRun,
    build_corrected_operator,
    build_naive_operator,
    squash,
    synthesize,
)

__version__ = "0.1.0"
