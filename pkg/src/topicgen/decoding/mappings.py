"""Mappings from real-valued scores to probability vectors.

softmax is dense: every token keeps nonzero mass. sparsemax is the
Euclidean projection onto the simplex and assigns exact zeros. entmax
interpolates between the two through the Tsallis-entropy exponent alpha:
alpha=1 is softmax, alpha=2 is sparsemax, and intermediate values are
solved by bisection on the support threshold.
"""

from __future__ import annotations

import numpy as np

_BISECTION_TOL = 1e-9
_BISECTION_MAX_ITERS = 200


def _as_finite_vector(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1 or z.size == 0:
        raise ValueError(f"expected a non-empty 1-D score vector, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("scores must be finite")
    return z


def softmax(z) -> np.ndarray:
    """Exponential normalization, shift-invariant via max subtraction."""
    z = _as_finite_vector(z)
    e = np.exp(z - z.max())
    return e / e.sum()


def sparsemax(z) -> np.ndarray:
    """Project z onto the probability simplex (sort-and-threshold).

    Returns argmin_p ||p - z||^2 over the simplex; coordinates below the
    threshold tau come out exactly zero.
    """
    z = _as_finite_vector(z)
    srt = np.sort(z)[::-1]
    cumulative = np.cumsum(srt) - 1.0
    ranks = np.arange(1, z.size + 1)
    support_size = int(np.count_nonzero(srt * ranks > cumulative))
    tau = cumulative[support_size - 1] / support_size
    return np.maximum(z - tau, 0.0)


def entmax(z, alpha: float) -> np.ndarray:
    """Tsallis-entropy regularized mapping with exponent alpha >= 1.

    alpha=1 dispatches to softmax and alpha=2 to sparsemax exactly. Other
    exponents solve p_i = [(alpha-1)(z_i - tau)]_+^(1/(alpha-1)) for the
    tau at which the total mass is 1, then renormalize the residual.
    """
    if alpha < 1.0:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if alpha == 1.0:
        return softmax(z)
    if alpha == 2.0:
        return sparsemax(z)

    z = _as_finite_vector(z)
    s = (alpha - 1.0) * z
    inv_exp = 1.0 / (alpha - 1.0)
    # p_max hits 1 at lo and 0 at hi, and total mass is decreasing in tau.
    lo = s.max() - 1.0
    hi = s.max()
    p = None
    for _ in range(_BISECTION_MAX_ITERS):
        mid = 0.5 * (lo + hi)
        p = np.maximum(s - mid, 0.0) ** inv_exp
        gap = p.sum() - 1.0
        if abs(gap) <= _BISECTION_TOL:
            break
        if gap > 0.0:
            lo = mid
        else:
            hi = mid
    return p / p.sum()
