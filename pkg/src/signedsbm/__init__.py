"""Signed two-community block models: spectra, balance dynamics and regimes."""
from .netgen import BlockParams, DerivedParams, SignedAdjacency, derive, generate, expected_matrix, noise_matrix
from .spectral import RegimeLabel, Spectrum, SpectralPrediction, eigen_sym, predict_signal, classify_params
from .metrics import OutcomeRecord, assortativity, homogeneity, z_metric, is_balanced
from .dynamics import closed_form, integrate_numeric, blowup_time, final_state

__version__ = "0.1.0"

__all__ = [
    "BlockParams",
    "DerivedParams",
    "SignedAdjacency",
    "derive",
    "generate",
    "expected_matrix",
    "noise_matrix",
    "RegimeLabel",
    "Spectrum",
    "SpectralPrediction",
    "eigen_sym",
    "predict_signal",
    "classify_params",
    "OutcomeRecord",
    "assortativity",
    "homogeneity",
    "z_metric",
    "is_balanced",
    "closed_form",
    "integrate_numeric",
    "blowup_time",
    "final_state",
]
