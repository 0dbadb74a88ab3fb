"""Quantum Fisher information of multi-component cat probe states."""

from ._core import (
    CatMoments,
    CatSpec,
    Error,
    QfiResult,
    alpha_for_nav,
    cat_moments,
    end_to_end,
    nav_of_alpha,
    noon_qfi,
    norm_M,
    optimal_probe,
    probe_nav,
    qfi_lossy,
    qfi_lossy_paper,
    qfi_pure,
    qfi_pure_g2,
    sql_bound,
    tmsv_qfi,
    tmsv_r_for_nav,
    trace_curve,
)

__version__ = "0.1.0"
