"""Product-of-correlated-complex-Gaussians distribution machinery and the
blind time-reversal likelihood-ratio detector."""

from ._core import (
    EdgeworthModel,
    TestResult,
    HypothesisModels,
    ProductModel,
    Scenario,
    bessel_k0,
    build_edgeworth,
    cf_invert_pdf,
    char_fn,
    complex_moment,
    cumulants,
    decide,
    deterministic_k,
    draw_products,
    effective_rho,
    hypothesis_models,
    jm_matrix,
    llr_statistic,
    mse_table,
    null_pdf,
    product_summary,
    real_moments,
    roc,
    scr_to_pc,
    simulate_trial,
    snr_to_noise,
)

__all__ = [
    "EdgeworthModel",
    "TestResult",
    "HypothesisModels",
    "ProductModel",
    "Scenario",
    "bessel_k0",
    "build_edgeworth",
    "cf_invert_pdf",
    "char_fn",
    "complex_moment",
    "cumulants",
    "decide",
    "deterministic_k",
    "draw_products",
    "effective_rho",
    "hypothesis_models",
    "jm_matrix",
    "llr_statistic",
    "mse_table",
    "null_pdf",
    "product_summary",
    "real_moments",
    "roc",
    "scr_to_pc",
    "simulate_trial",
    "snr_to_noise",
]
