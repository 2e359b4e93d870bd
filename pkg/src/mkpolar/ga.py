"""Gaussian approximation of LLR densities for density evolution.

An LLR with mean ``m`` is modelled as N(m, 2m). Sums of independent LLRs add
means; a box-plus of LLRs maps to the check-node combination :func:`varphi`.
The curve fit for ``phi`` and its inverse is the usual two-branch one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GaussianApproxParams:
    alpha: float = 0.4527
    beta: float = 0.0218
    gamma: float = 0.86
    a: float = 0.0564
    b: float = 0.48560
    c: float = 0.867861


GA = GaussianApproxParams()

# below this log-value all phi terms are tiny and 1 - prod(1 - phi) ~ sum(phi)
_TINY_LOG = -30.0


def log_phi(m, params: GaussianApproxParams = GA):
    m = np.asarray(m, dtype=float)
    if np.any(m < 0):
        raise ValueError("phi is defined for non-negative means only")
    low = params.a * m**2 - params.b * m
    high = -params.alpha * m**params.gamma + params.beta
    out = np.where(m < params.c, low, high)
    return out[()] if out.ndim == 0 else out


def phi(m, params: GaussianApproxParams = GA):
    """Curve-fitted ``phi(m)``; ``phi(0) == 1`` and it decreases towards 0."""
    return np.exp(log_phi(m, params))


def _phi_inv_from_log(log_y: float, params: GaussianApproxParams = GA) -> float:
    if log_y > 0:
        raise ValueError("phi_inv expects y in (0, 1]")
    if log_y == 0:
        return 0.0
    if log_y >= params.a * params.c**2 - params.b * params.c:
        disc = params.b**2 + 4 * params.a * log_y
        return (params.b - np.sqrt(disc)) / (2 * params.a)
    return ((params.beta - log_y) / params.alpha) ** (1 / params.gamma)


def phi_inv(y: float, params: GaussianApproxParams = GA) -> float:
    """Inverse of :func:`phi` for ``0 < y <= 1``."""
    y = float(y)
    if not 0 < y <= 1:
        raise ValueError(f"phi_inv expects y in (0, 1], got {y}")
    return float(_phi_inv_from_log(np.log(y), params))


def varphi(*means: float, params: GaussianApproxParams = GA) -> float:
    """Mean of the box-plus of independent Gaussian LLRs with the given means."""
    if not means:
        raise ValueError("varphi needs at least one mean")
    logs = np.array([log_phi(m, params) for m in means], dtype=float)
    if np.exp(logs.max()) >= 1.0:
        return 0.0  # a (numerically) zero-mean input carries no information
    if logs.max() < _TINY_LOG:
        # first-order expansion, avoids 1 - (1 - tiny) cancellation
        log_y = float(np.logaddexp.reduce(logs))
    else:
        log_y = float(np.log(-np.expm1(np.sum(np.log1p(-np.exp(logs))))))
    return float(_phi_inv_from_log(min(log_y, 0.0), params))
