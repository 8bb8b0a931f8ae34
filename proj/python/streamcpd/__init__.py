"""Budget-bounded online changepoint detection for unbounded streams."""

from ._core import (
    AutotuneConfig,
    ChangepointEvent,
    ConfigurationError,
    CusumConfig,
    CusumDetector,
    Detector,
    DetectorConfig,
    EwmaConfig,
    EwmaDetector,
    InputError,
    MaeReport,
    MultivariateDetector,
    NormalGammaParams,
    NumericalError,
    PenaltyRule,
    StepResult,
    Stream,
    autotune,
    detect,
    generate,
    mae_with_penalty,
    match_changepoints,
    predictive_logpdf,
    update,
)

__all__ = [
    "AutotuneConfig",
    "ChangepointEvent",
    "ConfigurationError",
    "CusumConfig",
    "CusumDetector",
    "Detector",
    "DetectorConfig",
    "EwmaConfig",
    "EwmaDetector",
    "InputError",
    "MaeReport",
    "MultivariateDetector",
    "NormalGammaParams",
    "NumericalError",
    "PenaltyRule",
    "StepResult",
    "Stream",
    "autotune",
    "detect",
    "generate",
    "mae_with_penalty",
    "match_changepoints",
    "predictive_logpdf",
    "update",
]
