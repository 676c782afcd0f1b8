from .circuit import (
    LOG_CLIP_DEFAULT,
    QcbmParameters,
    apply_entangling_layer,
    apply_rotation_layer,
    bits_matrix_to_indices,
    bits_to_index,
    born_probabilities,
    build_state,
    clipped_cross_entropy,
    index_to_bits,
    initial_state,
    loss_from_probabilities,
    pair_order,
    sample,
)
from .kernels import BACKEND
from .spsa import SpsaDivergenceError, SpsaState, spsa_step, train_to_target

__all__ = [
    "BACKEND",
    "LOG_CLIP_DEFAULT",
    "QcbmParameters",
    "SpsaDivergenceError",
    "SpsaState",
    "apply_entangling_layer",
    "apply_rotation_layer",
    "bits_matrix_to_indices",
    "bits_to_index",
    "born_probabilities",
    "build_state",
    "clipped_cross_entropy",
    "index_to_bits",
    "initial_state",
    "loss_from_probabilities",
    "pair_order",
    "sample",
    "spsa_step",
    "train_to_target",
]
