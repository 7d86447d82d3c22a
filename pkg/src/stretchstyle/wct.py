"""Whitening and coloring transforms on (channels, samples) feature matrices.

Whitening maps centered features f to E D^{-1/2} E^T f, where E, D come
from the eigendecomposition of the unnormalized covariance f f^T; coloring
applies E_s D_s^{1/2} E_s^T with the statistics captured from a style
feature matrix, then restores the style mean. The covariance stays
unnormalized throughout (no 1/(M-1)), so whitened features satisfy
f f^T = I on the retained eigenspace and a colored output reproduces the
style's unnormalized covariance regardless of sample counts.

Rank deficiency: eigenvalue directions at or below 1e-8 of the largest
eigenvalue pass through both transforms with multiplier 0, since their
inverse square root is undefined.
"""

import numpy as np
from dataclasses import dataclass
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import DegenerateFeaturesError, DimensionMismatchError
from .validation import as_features, check_alpha

__all__ = [
    "EigenPair",
    "StyleStats",
    "mean_center",
    "covariance",
    "sym_eig",
    "whiten",
    "capture_style",
    "color",
    "blend",
    "apply_style",
    "wct_transfer",
    "WhiteningColoring",
]

# Relative eigenvalue cutoff below which a direction is treated as rank-deficient.
RANK_EPS = 1e-8

_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class EigenPair:
    """Descending nonnegative eigenvalues with orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class StyleStats:
    """Channel means and covariance eigenstructure captured from style features."""

    mean: np.ndarray
    eig: EigenPair

    @property
    def channels(self) -> int:
        return self.mean.shape[0]


def mean_center(f):
    """Subtract per-channel (row) means; returns (centered, mean)."""
    f = as_features(f)
    mean = f.mean(axis=1)
    return f - mean[:, None], mean


def covariance(f_centered) -> np.ndarray:
    """Unnormalized covariance f f^T of centered features."""
    f_centered = as_features(f_centered)
    return f_centered @ f_centered.T


def sym_eig(matrix) -> EigenPair:
    """Eigendecomposition of a symmetric PSD matrix, eigenvalues descending.

    Tiny negative eigenvalues (numerical noise on a covariance) are
    clamped to zero.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"need a square matrix, got shape {matrix.shape}")
    scale = max(1.0, float(np.abs(matrix).max()))
    if np.abs(matrix - matrix.T).max() > _SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    values, vectors = np.linalg.eigh(matrix)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    np.maximum(values, 0.0, out=values)
    return EigenPair(values=values, vectors=vectors)


def whiten(f_centered) -> np.ndarray:
    """Map centered features to unit covariance on the retained eigenspace."""
    f_centered = as_features(f_centered)
    eig = sym_eig(covariance(f_centered))
    lam_max = eig.values[0]
    if lam_max <= 0.0:
        raise DegenerateFeaturesError("features have zero covariance; cannot whiten")
    multipliers = np.zeros_like(eig.values)
    keep = eig.values > RANK_EPS * lam_max
    multipliers[keep] = eig.values[keep] ** -0.5
    transform = (eig.vectors * multipliers) @ eig.vectors.T
    return transform @ f_centered


def capture_style(f_s) -> StyleStats:
    """Channel means plus eigendecomposition of the centered style covariance."""
    f_s = as_features(f_s)
    centered, mean = mean_center(f_s)
    return StyleStats(mean=mean, eig=sym_eig(covariance(centered)))


def color(f_hat, style: StyleStats) -> np.ndarray:
    """Impose the style covariance on whitened features and restore the style mean."""
    f_hat = as_features(f_hat)
    if f_hat.shape[0] != style.channels:
        raise DimensionMismatchError(
            f"features have {f_hat.shape[0]} channels, style stats have {style.channels}"
        )
    transform = (style.eig.vectors * np.sqrt(style.eig.values)) @ style.eig.vectors.T
    return transform @ f_hat + style.mean[:, None]


def blend(f_cs, f_c, alpha: float) -> np.ndarray:
    """Convex mix alpha*f_cs + (1-alpha)*f_c of stylized and content features."""
    f_cs = as_features(f_cs, name="stylized features")
    f_c = as_features(f_c, name="content features")
    if f_cs.shape != f_c.shape:
        raise DimensionMismatchError(f"shapes differ: {f_cs.shape} vs {f_c.shape}")
    alpha = check_alpha(alpha)
    return alpha * f_cs + (1.0 - alpha) * f_c


def apply_style(f_c, style: StyleStats, alpha: float) -> np.ndarray:
    """Whiten content features, color with captured stats, blend with the original."""
    f_c = as_features(f_c)
    if f_c.shape[0] != style.channels:
        raise DimensionMismatchError(
            f"content has {f_c.shape[0]} channels, style stats have {style.channels}"
        )
    centered, _ = mean_center(f_c)
    return blend(color(whiten(centered), style), f_c, alpha)


def wct_transfer(f_c, f_s, alpha: float) -> np.ndarray:
    """Full whitening/coloring transfer between two feature matrices."""
    f_c = as_features(f_c, name="content features")
    f_s = as_features(f_s, name="style features")
    if f_c.shape[0] != f_s.shape[0]:
        raise DimensionMismatchError(
            f"channel counts differ: content {f_c.shape[0]}, style {f_s.shape[0]}"
        )
    return apply_style(f_c, capture_style(f_s), alpha)


class WhiteningColoring(TransformerMixin, BaseEstimator):
    """Covariance-matching feature transform with a scikit-learn surface.

    `fit` captures the mean and covariance eigenstructure of style samples;
    `transform` whitens incoming samples and recolors them with the fitted
    statistics, blended by `alpha`. Arrays follow the scikit-learn layout
    (n_samples, n_channels); internally columns are channels, matching the
    functional API above.
    """

    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        check_alpha(self.alpha)
        stats = capture_style(X.T)
        self.mean_ = stats.mean
        self.eigenvalues_ = stats.eig.values
        self.eigenvectors_ = stats.eig.vectors
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DimensionMismatchError(
                f"X has {X.shape[1]} features, fitted on {self.n_features_in_}"
            )
        stats = StyleStats(
            mean=self.mean_, eig=EigenPair(values=self.eigenvalues_, vectors=self.eigenvectors_)
        )
        return apply_style(X.T, stats, check_alpha(self.alpha)).T
