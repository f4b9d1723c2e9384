"""Gated recurrent cells (GRU and LSTM) as parameter dicts plus step functions.

A cell is a plain dict of named Tensors so that networks can keep one flat
parameter registry for optimizers and checkpoints. Gate equations are the
standard formulations.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from ..numcore import RngStream, Tensor, concat, matmul, sigmoid, tanh


def _uniform_init(rng: RngStream, fan_in: int, shape: tuple) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, shape)


def init_gru_cell(input_dim: int, hidden_dim: int, rng: RngStream) -> dict[str, Tensor]:
    """Weights for update gate (z), reset gate (r), and candidate state (h).

    Kernels consume [x, h] (or [x, r*h] for the candidate), so their first
    dimension is input_dim + hidden_dim. Biases start at zero.
    """
    if input_dim < 1 or hidden_dim < 1:
        raise ShapeError(f"gru cell: dims must be positive, got ({input_dim}, {hidden_dim})")
    fan = input_dim + hidden_dim
    cell = {}
    for gate in ("z", "r", "h"):
        cell[f"W{gate}"] = Tensor(_uniform_init(rng, fan, (fan, hidden_dim)), requires_grad=True)
        cell[f"b{gate}"] = Tensor(np.zeros(hidden_dim), requires_grad=True)
    return cell


def gru_cell_forward(cell: dict, x: Tensor, h: Tensor) -> Tensor:
    """One GRU step: returns the new hidden state.

    z = sigmoid([x,h] Wz + bz)
    r = sigmoid([x,h] Wr + br)
    hhat = tanh([x, r*h] Wh + bh)
    h' = (1-z)*hhat + z*h
    """
    if x.ndim != 2 or h.ndim != 2 or x.shape[0] != h.shape[0]:
        raise ShapeError(f"gru step: batch shapes disagree, x {x.shape} vs h {h.shape}")
    xh = concat([x, h], axis=1)
    z = sigmoid(matmul(xh, cell["Wz"]) + cell["bz"])
    r = sigmoid(matmul(xh, cell["Wr"]) + cell["br"])
    xrh = concat([x, r * h], axis=1)
    hhat = tanh(matmul(xrh, cell["Wh"]) + cell["bh"])
    return (1.0 - z) * hhat + z * h


def init_lstm_cell(input_dim: int, hidden_dim: int, rng: RngStream) -> dict[str, Tensor]:
    """Weights for forget (f), input (i), output (o) gates and cell candidate (g)."""
    if input_dim < 1 or hidden_dim < 1:
        raise ShapeError(f"lstm cell: dims must be positive, got ({input_dim}, {hidden_dim})")
    fan = input_dim + hidden_dim
    cell = {}
    for gate in ("f", "i", "o", "g"):
        cell[f"W{gate}"] = Tensor(_uniform_init(rng, fan, (fan, hidden_dim)), requires_grad=True)
        cell[f"b{gate}"] = Tensor(np.zeros(hidden_dim), requires_grad=True)
    return cell


def lstm_cell_forward(cell: dict, x: Tensor, h: Tensor, c: Tensor) -> tuple[Tensor, Tensor]:
    """One LSTM step: returns (new hidden state, new cell state).

    f,i,o = sigmoid(gate affines on [x,h]); g = tanh(candidate affine)
    c' = f*c + i*g
    h' = o*tanh(c')
    """
    if x.ndim != 2 or h.ndim != 2 or x.shape[0] != h.shape[0]:
        raise ShapeError(f"lstm step: batch shapes disagree, x {x.shape} vs h {h.shape}")
    xh = concat([x, h], axis=1)
    f = sigmoid(matmul(xh, cell["Wf"]) + cell["bf"])
    i = sigmoid(matmul(xh, cell["Wi"]) + cell["bi"])
    o = sigmoid(matmul(xh, cell["Wo"]) + cell["bo"])
    g = tanh(matmul(xh, cell["Wg"]) + cell["bg"])
    c_new = f * c + i * g
    h_new = o * tanh(c_new)
    return h_new, c_new
