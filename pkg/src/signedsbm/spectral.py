"""Spectra of signed block-model matrices and their analytic predictions."""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .netgen import BlockParams, DerivedParams, contrast_vector, derive

__all__ = [
    "Spectrum",
    "SpectralPrediction",
    "RegimeLabel",
    "VectorShape",
    "Boundary",
    "SpectrumDiagnosis",
    "eigen_sym",
    "predict_signal",
    "band_edge",
    "nu_crit_sparse",
    "mu_crit_sparse",
    "boundary_outgroup_animosity",
    "boundary_symmetric_case",
    "classify_params",
    "classify_spectrum",
    "spectrum_json",
    "predict_params",
]

SYMMETRY_TOL = 1e-10
SIGN_AGREEMENT = 0.9


class RegimeLabel(enum.Enum):
    ASSORTATIVE = "AssortativeTwoFaction"
    MIXED = "MixedTwoFaction"
    HARMONIOUS = "Harmonious"

    def __str__(self):
        return self.value


class VectorShape(enum.Enum):
    CONTRAST = "contrast"
    HOMOGENEOUS = "homogeneous"
    NOISE = "noise"


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    leading_vector: np.ndarray
    trailing_vector: np.ndarray

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[0])


@dataclass(frozen=True)
class SpectralPrediction:
    lambda_C: Optional[float]
    lambda_H: Optional[float]
    gamma: float
    nu_crit: float
    mu_crit: float
    detect_contrast: bool
    detect_homog: bool


class Boundary(NamedTuple):
    value: float
    clipped: bool


class SpectrumDiagnosis(NamedTuple):
    regime: RegimeLabel
    shape: VectorShape
    contrast_agreement: float
    sign_fraction: float
    outside_band: bool


def eigen_sym(matrix) -> Spectrum:
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(np.abs(a).max(initial=0.0), 1.0)
    if np.abs(a - a.T).max(initial=0.0) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    w, v = np.linalg.eigh(a)
    w = w[::-1].copy()
    v = v[:, ::-1]
    return Spectrum(eigenvalues=w, leading_vector=v[:, 0].copy(), trailing_vector=v[:, -1].copy())


def band_edge(sigma: float, n: int) -> float:
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    return 2.0 * sigma * math.sqrt(n)


def predict_signal(dp: DerivedParams, n: int) -> SpectralPrediction:
    sigma = dp.sigma
    crit = sigma / math.sqrt(n)
    lambda_c = dp.nu * n + sigma**2 / dp.nu if dp.nu != 0 else None
    lambda_h = dp.mu * n + sigma**2 / dp.mu if dp.mu != 0 else None
    return SpectralPrediction(
        lambda_C=lambda_c,
        lambda_H=lambda_h,
        gamma=band_edge(sigma, n),
        nu_crit=crit,
        mu_crit=crit,
        detect_contrast=dp.nu != 0 and abs(dp.nu) >= crit,
        detect_homog=dp.mu != 0 and abs(dp.mu) >= crit,
    )


def nu_crit_sparse(d_in: float, d_out: float, n: int) -> float:
    """Sparse-network approximation of the contrast critical value."""
    return math.sqrt((d_in + d_out) / (2 * n))


mu_crit_sparse = nu_crit_sparse

_KINDS = ("assortative", "disassortative", "prosocial", "antisocial")


def _boundary_avg_out(avg_in, d_in, d_out, n, kind, exact):
    """Critical expected outgroup tie value, or None if infeasible."""
    contrast = kind in ("assortative", "disassortative")
    if exact:
        # (n+1) s^2 + t^2 = d with s the critical signal and t the other one
        centre = n / (n + 2) * avg_in
        disc = 2 / (n + 2) * (d_in + d_out) - 4 * (n + 1) / (n + 2) ** 2 * avg_in**2
    else:
        centre = avg_in
        disc = 2 / n * (d_in + d_out - 2 * avg_in**2)
    if disc < 0:
        return None
    root = math.sqrt(disc)
    if contrast:
        return centre - root if kind == "assortative" else centre + root
    return -centre + root if kind == "prosocial" else -centre - root


def boundary_outgroup_animosity(
    d_in: float, d_out: float, p_in_pos: float, n: int, kind: str, exact: bool = False
) -> Boundary:
    """Critical outgroup animosity p_out^- for one of the four transitions.

    The default is the large-n closed form. ``exact=True`` solves the
    finite-n quadratic instead, so the predicted signal eigenvalue sits
    exactly on the band edge there.
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    if d_out <= 0:
        raise ValueError("d_out must be positive")
    avg_in = d_in * (2 * p_in_pos - 1)
    avg_out = _boundary_avg_out(avg_in, d_in, d_out, n, kind, exact)
    if avg_out is None:
        raise ValueError(
            f"infeasible {kind} boundary: negative discriminant at "
            f"d_in={d_in}, d_out={d_out}, p_in_pos={p_in_pos}"
        )
    if exact:
        if kind in ("assortative", "disassortative"):
            signal = (avg_in - avg_out) / 2
        else:
            signal = (avg_in + avg_out) / 2
        if (signal > 0) != (kind in ("assortative", "prosocial")):
            raise ValueError(f"infeasible {kind} boundary: no root with the required signal sign")
    value = 0.5 * (1 - avg_out / d_out)
    clipped = min(max(value, 0.0), 1.0)
    return Boundary(clipped, clipped != value)


def boundary_symmetric_case(d: float, n: int) -> float:
    """Assortative boundary on the slice p_in^+ = p_out^-, d_in = d_out = d."""
    if d <= 0:
        raise ValueError("d must be positive")
    return 0.5 * (1 + math.sqrt(1 / (d * n)))


def classify_params(dp: DerivedParams, n: int) -> RegimeLabel:
    crit = dp.sigma / math.sqrt(n)
    if dp.nu >= crit and dp.nu > dp.mu:
        return RegimeLabel.ASSORTATIVE
    if dp.mu >= crit and dp.mu >= dp.nu:
        return RegimeLabel.HARMONIOUS
    return RegimeLabel.MIXED


def classify_spectrum(spec: Spectrum, prediction: SpectralPrediction) -> SpectrumDiagnosis:
    u = spec.leading_vector
    n = u.size
    signs = np.where(u >= 0, 1.0, -1.0)
    agree = float(np.mean(signs == np.sign(contrast_vector(n))))
    agree = max(agree, 1 - agree)
    positive = float(np.mean(signs > 0))
    fraction = max(positive, 1 - positive)
    if agree >= SIGN_AGREEMENT:
        shape, regime = VectorShape.CONTRAST, RegimeLabel.ASSORTATIVE
    elif fraction >= SIGN_AGREEMENT:
        shape, regime = VectorShape.HOMOGENEOUS, RegimeLabel.HARMONIOUS
    else:
        shape, regime = VectorShape.NOISE, RegimeLabel.MIXED
    return SpectrumDiagnosis(regime, shape, agree, fraction, spec.lambda1 >= prediction.gamma)


def spectrum_json(spec: Spectrum, prediction: SpectralPrediction, regime: RegimeLabel) -> str:
    return json.dumps(
        {
            "eigenvalues": spec.eigenvalues.tolist(),
            "lambda_C": prediction.lambda_C,
            "lambda_H": prediction.lambda_H,
            "gamma": prediction.gamma,
            "regime": regime.value,
        }
    )


def predict_params(params: BlockParams) -> SpectralPrediction:
    return predict_signal(derive(params), params.n)
