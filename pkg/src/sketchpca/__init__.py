"""Approximate PCA of large matrices from seeded column and row sketches.

The package approximates the leading eigenvectors of a data matrix's
second moment matrix (or of its sample-side Gram matrix) from a small
uniformly sampled block, compares the approximations against the exact
subspaces with projector distances, and evaluates computable error
bounds. A simulation layer, an experiment harness, a scikit-learn
style estimator, and a CLI sit on top.
"""

from .bounds import (
    BoundReport,
    bound_difference,
    coherence,
    corollary_bounds,
    cross_term_sums,
    cs_bound,
    nystrom_bound,
    spectral_gap,
)
from .estimator import SketchedPCA
from .exceptions import DegenerateSketchError, FormatError, GapError, RankError
from .harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    ResultRow,
    expand_l_grid,
    format_timing_table,
    plot_relative_error,
    read_results_csv,
    run_experiment,
    time_methods,
    write_results_csv,
)
from .linalg import (
    Basis,
    Svd,
    as_matrix,
    center_columns,
    eigh_psd,
    exact_pca,
    pinv_diag,
    svd,
    symmetrized,
)
from .matio import read_matrix, read_matrix_csv, write_matrix, write_matrix_csv
from .approx import (
    METHOD_AXIS,
    METHOD_TAGS,
    METHOD_TARGET,
    REFERENCE_METHOD,
    compute_method,
    nystrom_eigpairs,
    nystrom_matrix,
    truncate,
    u_cs,
    u_hat,
    u_hat_cs,
    u_hat_nys,
    u_nys,
    v_cs,
    v_nys_space,
    v_nys_stable,
)
from .simulate import PrecisionSpec, pd_repair, precision_band, precision_random, sample_mvn
from .sketching import Blocks, Selection, extract_blocks, sample_uniform, stream_columns, subsample
from .subspace import Projector, delta, projector, relative_error

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # linalg
    "as_matrix", "center_columns", "symmetrized", "Svd", "svd", "eigh_psd",
    "pinv_diag", "Basis", "exact_pca",
    # sketching
    "Selection", "sample_uniform", "Blocks", "extract_blocks", "subsample",
    "stream_columns",
    # approximations
    "nystrom_matrix", "nystrom_eigpairs", "v_nys_space", "v_nys_stable", "v_cs",
    "u_nys", "u_cs", "u_hat_nys", "u_hat_cs", "u_hat", "truncate",
    "compute_method", "METHOD_TAGS", "METHOD_AXIS", "METHOD_TARGET",
    "REFERENCE_METHOD",
    # subspace distances
    "Projector", "projector", "delta", "relative_error",
    # bounds
    "BoundReport", "spectral_gap", "cross_term_sums", "nystrom_bound", "cs_bound",
    "coherence", "corollary_bounds", "bound_difference",
    # simulation
    "PrecisionSpec", "precision_random", "precision_band", "pd_repair", "sample_mvn",
    # io
    "write_matrix", "read_matrix", "write_matrix_csv", "read_matrix_csv",
    # harness
    "ExperimentConfig", "ResultRow", "CSV_COLUMNS", "expand_l_grid",
    "run_experiment", "time_methods", "format_timing_table",
    "write_results_csv", "read_results_csv", "plot_relative_error",
    # estimator
    "SketchedPCA",
    # errors
    "RankError", "DegenerateSketchError", "GapError", "FormatError",
]
