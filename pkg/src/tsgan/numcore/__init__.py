"""Numeric core: tensors, the op tape, optimizers, and seeded RNG streams."""

from .optim import (
    ADAM_BETA1,
    ADAM_BETA2,
    ADAM_EPS,
    RMSPROP_DECAY,
    RMSPROP_EPS,
    OptimizerState,
    clip_weights,
    optimizer_step,
)
from .rng import RngStream
from .tensor import (
    Tape,
    Tensor,
    active_tape,
    add,
    as_tensor,
    backward,
    clamp,
    concat,
    conv1d,
    dropout,
    forward_op,
    leaf_grads,
    log,
    matmul,
    mean,
    mul,
    neg,
    relu,
    reshape,
    sigmoid,
    slice_tensor,
    sub,
    tanh,
    tsum,
)

__all__ = [
    "ADAM_BETA1",
    "ADAM_BETA2",
    "ADAM_EPS",
    "RMSPROP_DECAY",
    "RMSPROP_EPS",
    "OptimizerState",
    "RngStream",
    "Tape",
    "Tensor",
    "active_tape",
    "add",
    "as_tensor",
    "backward",
    "clamp",
    "clip_weights",
    "concat",
    "conv1d",
    "dropout",
    "forward_op",
    "leaf_grads",
    "log",
    "matmul",
    "mean",
    "mul",
    "neg",
    "optimizer_step",
    "relu",
    "reshape",
    "sigmoid",
    "slice_tensor",
    "sub",
    "tanh",
    "tsum",
]
