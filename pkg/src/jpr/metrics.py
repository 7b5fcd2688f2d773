"""Error metrics for precision-matrix estimates."""

from __future__ import annotations

import numpy as np

from .errors import EigenFailureError, ShapeError


def frobenius_error(estimate, truth) -> float:
    """||estimate - truth||_F."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ShapeError(f"shape mismatch {estimate.shape} vs {truth.shape}")
    return float(np.linalg.norm(estimate - truth))


def operator2_error(estimate, truth) -> float:
    """Spectral norm of the (symmetric) difference: largest |eigenvalue|."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ShapeError(f"shape mismatch {estimate.shape} vs {truth.shape}")
    diff = estimate - truth
    try:
        w = np.linalg.eigvalsh(0.5 * (diff + diff.T))
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(f"eigendecomposition failed: {exc}") from exc
    return float(np.max(np.abs(w))) if w.size else 0.0


def support_metrics(estimate, truth_adjacency, threshold: float = 0.0) -> tuple[float, float]:
    """(precision, recall) of the off-diagonal support |estimate| > threshold.

    Empty predicted support gives precision 1.0; empty true support gives
    recall 1.0.
    """
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth_adjacency)
    if estimate.shape != truth.shape:
        raise ShapeError(f"shape mismatch {estimate.shape} vs {truth.shape}")
    ju, ku = np.triu_indices(estimate.shape[0], k=1)
    pred = np.abs(estimate[ju, ku]) > threshold
    true = truth[ju, ku] != 0
    tp = int(np.sum(pred & true))
    n_pred = int(np.sum(pred))
    n_true = int(np.sum(true))
    precision = tp / n_pred if n_pred else 1.0
    recall = tp / n_true if n_true else 1.0
    return precision, recall
