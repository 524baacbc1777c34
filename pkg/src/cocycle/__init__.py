"""SL(2,R) algebra and transfer matrices of the quasi-periodic Schrödinger equation."""
from __future__ import annotations

from cocycle.integrator import (
    MAX_STEP,
    StepGrid,
    block_propagators,
    ordered_product,
    panel_steps,
    rk4_propagators,
    schroedinger_coefficients,
    segment_products,
    unit_blocks,
)
from cocycle.sl2 import (
    DET_TOLERANCE,
    SL2,
    SimonCheck,
    StateVec,
    log_norm,
    matrix_norm,
    operator_norm,
    propagate,
    simon_bound_check,
    simon_maxima,
    sl2_inverse,
)
from cocycle.transfer import (
    DEFAULT_STEP,
    DEFAULT_TOLERANCE,
    MAX_INTERVAL_LENGTH,
    TransferRequest,
    crossing_cutter,
    inject_det_fault,
    potential_sampler,
    transfer,
    transfer_batch,
)

__all__ = [
    "DEFAULT_STEP",
    "DEFAULT_TOLERANCE",
    "DET_TOLERANCE",
    "MAX_INTERVAL_LENGTH",
    "MAX_STEP",
    "SL2",
    "SimonCheck",
    "StateVec",
    "StepGrid",
    "TransferRequest",
    "block_propagators",
    "crossing_cutter",
    "inject_det_fault",
    "log_norm",
    "matrix_norm",
    "operator_norm",
    "ordered_product",
    "panel_steps",
    "potential_sampler",
    "propagate",
    "rk4_propagators",
    "schroedinger_coefficients",
    "segment_products",
    "simon_bound_check",
    "simon_maxima",
    "sl2_inverse",
    "transfer",
    "transfer_batch",
    "unit_blocks",
]
