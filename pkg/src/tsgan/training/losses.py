"""Adversarial objectives and their exact algebraic identities.

All functions take Tensors (or arrays) of discriminator probabilities and
return scalar Tensors, so they are recordable for differentiation. Inputs
are clamped into [PROB_FLOOR, 1 - PROB_FLOOR] before any log, making
saturation a bounded value instead of a NaN.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError, DomainError
from ..numcore import Tensor, as_tensor, clamp, log, mean

PROB_FLOOR = 1e-7

GENERATOR_LOSS_MODES = ("nonsaturating", "minimax", "zero_sum")


def clamp_probs(p) -> Tensor:
    p = as_tensor(p)
    if p.size == 0:
        raise DataError("empty probability batch")
    return clamp(p, PROB_FLOOR, 1.0 - PROB_FLOOR)


def gan_value(d_real, d_fake) -> Tensor:
    """V = mean log D(x) + mean log(1 - D(G(z))), the minimax game value."""
    pr = clamp_probs(d_real)
    pf = clamp_probs(d_fake)
    return mean(log(pr)) + mean(log(1.0 - pf))


def discriminator_cost(d_real, d_fake) -> Tensor:
    """J_D = -V/2, the cost the discriminator minimizes."""
    return -0.5 * gan_value(d_real, d_fake)


def generator_cost(d_fake, mode: str = "nonsaturating", d_real=None) -> Tensor:
    """The quantity the generator descends.

    nonsaturating: -mean log D(G(z))       (default; gradient alive early)
    minimax:        mean log(1 - D(G(z)))  (the printed two-player form)
    zero_sum:       J_G = -J_D = V/2       (needs d_real as well)
    """
    if mode not in GENERATOR_LOSS_MODES:
        raise DomainError(f"unknown generator loss mode {mode!r}; "
                          f"expected one of {GENERATOR_LOSS_MODES}")
    pf = clamp_probs(d_fake)
    if mode == "nonsaturating":
        return -mean(log(pf))
    if mode == "minimax":
        return mean(log(1.0 - pf))
    if d_real is None:
        raise DomainError("zero_sum generator cost needs the real-batch probabilities")
    return -discriminator_cost(d_real, d_fake)


def bce(p, target: float) -> Tensor:
    """Binary cross-entropy of probabilities against a constant 0/1 target."""
    pc = clamp_probs(p)
    if target == 1.0:
        return -mean(log(pc))
    if target == 0.0:
        return -mean(log(1.0 - pc))
    raise DomainError(f"bce target must be 0 or 1, got {target}")


def mse(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    diff = a - b
    return mean(diff * diff)


def optimal_discriminator(p_density, q_density):
    """D*(x) = p(x) / (p(x) + q(x)); defined wherever the densities aren't both zero."""

    def d_star(x):
        x = np.asarray(x, dtype=np.float64)
        p = np.asarray(p_density(x), dtype=np.float64)
        q = np.asarray(q_density(x), dtype=np.float64)
        if np.any(p < 0) or np.any(q < 0):
            raise DomainError("densities must be non-negative")
        total = p + q
        if np.any(total == 0.0):
            raise DomainError("both densities are zero at a requested point")
        return p / total

    return d_star


def jensen_shannon_divergence(p, q) -> float:
    """JSD(p, q) on a shared discrete support, natural log, in [0, log 2]."""
    p = np.asarray(p, dtype=np.float64).ravel()
    q = np.asarray(q, dtype=np.float64).ravel()
    if p.shape != q.shape:
        raise DomainError(f"JSD supports differ: {p.shape} vs {q.shape}")
    if np.any(p < 0) or np.any(q < 0):
        raise DomainError("JSD requires non-negative mass")
    if abs(p.sum() - 1.0) > 1e-9 or abs(q.sum() - 1.0) > 1e-9:
        raise DomainError(
            f"JSD requires normalized distributions (sums {p.sum()!r}, {q.sum()!r})"
        )
    m = 0.5 * (p + q)

    def kl(a, mm):
        mask = a > 0.0
        return float(np.sum(a[mask] * np.log(a[mask] / mm[mask])))

    return 0.5 * kl(p, m) + 0.5 * kl(q, m)
