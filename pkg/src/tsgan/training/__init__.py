"""Training loops, objectives, traces, and model-output synthesis."""

from .config import OPTIMIZERS, TrainConfig
from .forecaster import train_forecaster
from .gan import disc_sequence, gen_latent_dim, gen_output_dim, minibatches, train_gan
from .losses import (
    GENERATOR_LOSS_MODES,
    PROB_FLOOR,
    bce,
    clamp_probs,
    discriminator_cost,
    gan_value,
    generator_cost,
    jensen_shannon_divergence,
    mse,
    optimal_discriminator,
)
from .synthesis import (
    FORECAST_MODES,
    ForecastResult,
    ForecasterPredictor,
    GanPredictor,
    PersistencePredictor,
    TimeganPredictor,
    as_predictor,
    forecast,
    generate_synthetic,
    require_finite_params,
)
from .timegan import TIMEGAN_NET_NAMES, phase_budgets, train_timegan
from .trace import CSV_COLUMNS, LossTrace
from .wgan import WGAN_DEFAULT_LR, critic_estimate, train_wgan

__all__ = [
    "CSV_COLUMNS",
    "FORECAST_MODES",
    "ForecastResult",
    "ForecasterPredictor",
    "GENERATOR_LOSS_MODES",
    "GanPredictor",
    "LossTrace",
    "OPTIMIZERS",
    "PROB_FLOOR",
    "PersistencePredictor",
    "TIMEGAN_NET_NAMES",
    "TimeganPredictor",
    "TrainConfig",
    "WGAN_DEFAULT_LR",
    "as_predictor",
    "bce",
    "clamp_probs",
    "critic_estimate",
    "disc_sequence",
    "discriminator_cost",
    "forecast",
    "gan_value",
    "gen_latent_dim",
    "gen_output_dim",
    "generate_synthetic",
    "generator_cost",
    "jensen_shannon_divergence",
    "minibatches",
    "mse",
    "optimal_discriminator",
    "phase_budgets",
    "require_finite_params",
    "train_forecaster",
    "train_gan",
    "train_timegan",
    "train_wgan",
]
