"""Covariant cloning of two-qubit maximally entangled states.

Submodules:

* ``qmat``      dense complex matrix kernel (partial trace/transpose, PSD roots)
* ``states``    magic basis, concurrence, entanglement of formation
* ``cloner``    the SO(4)-invariant cloning family and baselines
* ``channels``  Choi operators, PPT and covariance checks
* ``optimize``  optimality searches and the tradeoff sweeps
* ``cli``       command-line entry point
"""
from .cloner import (
    F_OPTIMAL,
    ClonePair,
    ClonerCoefficients,
    apply_cloner,
    clone_pair,
    fidelities_closed_form,
    local_clone_pair,
    optimal_symmetric_coeffs,
    tensor_from_coeffs,
    tradeoff_fa,
)
from .channels import ChoiOperator, PPTReport, choi_from_coeffs, ppt_check, reduced_choi
from .optimize import SearchResult, TradeoffPoint, optimize_isometry, sweep_fig1, sweep_fig2
from .states import (
    MAGIC,
    concurrence_mixed,
    concurrence_pure,
    entanglement_of_formation,
    eof_from_concurrence,
)

__version__ = "0.1.0"

__all__ = [
    "F_OPTIMAL", "ClonePair", "ClonerCoefficients", "apply_cloner", "clone_pair",
    "fidelities_closed_form", "local_clone_pair", "optimal_symmetric_coeffs",
    "tensor_from_coeffs", "tradeoff_fa", "ChoiOperator", "PPTReport", "choi_from_coeffs",
    "ppt_check", "reduced_choi", "SearchResult", "TradeoffPoint", "optimize_isometry",
    "sweep_fig1", "sweep_fig2", "MAGIC", "concurrence_mixed", "concurrence_pure",
    "entanglement_of_formation", "eof_from_concurrence",
]
