"""Log-partition, moments and Newton fitting over a compressed statistic table.

A table is a key matrix ``K`` (one row per distinct statistic value) plus the
log multiplicity of each row.  Under natural parameter ``theta`` the
log-partition function is ``logsumexp(K @ theta + log_counts)``, its
gradient is the model mean of the statistic and its Hessian the covariance.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp


def log_partition(K, log_counts, theta):
    return float(logsumexp(K @ theta + log_counts))


def moments(K, log_counts, theta):
    """Return (psi, mean, covariance) of the statistic under ``theta``."""
    z = K @ theta + log_counts
    psi = logsumexp(z)
    w = np.exp(z - psi)
    mean = w @ K
    centered = K - mean
    cov = (centered * w[:, None]).T @ centered
    return float(psi), mean, cov


@dataclass
class NewtonResult:
    theta: np.ndarray
    residual: float
    iterations: int
    converged: bool


def newton_fit(K, log_counts, target, *, tol=1e-8, max_iter=200, start=None, residual_scale=None):
    """Minimize psi(theta) - <theta, target> by damped Newton.

    Stops once the max-norm moment residual (optionally multiplied
    coordinate-wise by ``residual_scale``) is at most ``tol``.  Each step is
    halved until the objective decreases.
    """
    target = np.asarray(target, float)
    d = target.size
    theta = np.zeros(d) if start is None else np.array(start, float)
    scale = np.ones(d) if residual_scale is None else np.asarray(residual_scale, float)

    def objective(t):
        return log_partition(K, log_counts, t) - t @ target

    if d == 0:
        return NewtonResult(theta, 0.0, 0, True)

    f = objective(theta)
    for it in range(max_iter + 1):
        _, mean, cov = moments(K, log_counts, theta)
        grad = mean - target
        residual = float(np.max(np.abs(grad * scale)))
        if residual <= tol:
            return NewtonResult(theta, residual, it, True)
        if it == max_iter:
            break
        try:
            step = -np.linalg.solve(cov, grad)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(cov, grad, rcond=None)[0]
        lr = 1.0
        while lr > 1e-12:
            cand = theta + lr * step
            fc = objective(cand)
            if fc <= f:
                break
            lr *= 0.5
        else:
            # no decrease along Newton direction; fall back to gradient step
            cand = theta - 1e-3 * grad
            fc = objective(cand)
        theta, f = cand, fc
    return NewtonResult(theta, residual, max_iter, False)
