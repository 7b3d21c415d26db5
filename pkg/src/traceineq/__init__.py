"""Numerical checks of trace inequalities for powers of positive matrices."""

__version__ = "0.1.0"

from .matcore import (  # noqa: E402
    DomainError,
    InputError,
    SpectralDecomposition,
    as_hermitian,
    as_psd,
    complex_power,
    eig_hermitian,
    frac_power,
    hadamard,
    householder,
    mat_exp,
    mat_log,
    schatten_norm,
)
from .aho import (  # noqa: E402
    BoundReport,
    ExponentPair,
    Verdict,
    aho_lower_check,
    aho_trace,
    aho_upper_check,
    four_matrix_bound,
    holder_check,
    lieb_thirring_check,
    m_profile,
    scan,
)
from .gt import GraphSpec, GTProfile, gt_f, gt_fprime, gt_graph_demo, gt_profile  # noqa: E402
from .cex import CexParams, build, example_4_1, example_4_2  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
