"""Model architectures: recurrent cells, layered networks, and builders."""

from .builders import (
    DISC_CONV_FILTERS,
    DISC_DENSE_UNITS,
    DISC_KERNEL,
    DISC_STRIDE,
    GENERATOR_DENSE_UNITS,
    GENERATOR_DROPOUT,
    GENERATOR_GRU_UNITS,
    TIMEGAN_HIDDEN,
    TIMEGAN_STACK,
    build_critic,
    build_discriminator,
    build_forecaster,
    build_generator,
    build_timegan,
    conv_out_len,
    min_discriminator_len,
    scale_width,
)
from .cells import gru_cell_forward, init_gru_cell, init_lstm_cell, lstm_cell_forward
from .checkpoint import load_checkpoint, save_checkpoint
from .network import (
    ACTIVATIONS,
    Network,
    NetSpec,
    build_network,
    init_network_params,
    net_forward,
)

__all__ = [
    "ACTIVATIONS",
    "DISC_CONV_FILTERS",
    "DISC_DENSE_UNITS",
    "DISC_KERNEL",
    "DISC_STRIDE",
    "GENERATOR_DENSE_UNITS",
    "GENERATOR_DROPOUT",
    "GENERATOR_GRU_UNITS",
    "TIMEGAN_HIDDEN",
    "TIMEGAN_STACK",
    "Network",
    "NetSpec",
    "build_critic",
    "build_discriminator",
    "build_forecaster",
    "build_generator",
    "build_network",
    "build_timegan",
    "conv_out_len",
    "gru_cell_forward",
    "init_gru_cell",
    "init_lstm_cell",
    "init_network_params",
    "load_checkpoint",
    "lstm_cell_forward",
    "min_discriminator_len",
    "net_forward",
    "save_checkpoint",
    "scale_width",
]
