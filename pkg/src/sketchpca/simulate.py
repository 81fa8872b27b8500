"""Seeded generators for synthetic test matrices.

Data is drawn from mean-zero Gaussians whose precision (inverse
covariance) matrix follows one of two graph models: independent random
edges or a band. Precisions that are not safely positive definite are
repaired by a diagonal shift before sampling, and the shift is reported
so experiments can record it.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from .linalg import as_matrix, symmetrized
from .rng import philox

__all__ = ["PrecisionSpec", "precision_random", "precision_band", "pd_repair", "sample_mvn"]

MIN_EIGENVALUE = 0.05


@dataclass(frozen=True)
class PrecisionSpec:
    """Description of one generated precision matrix.

    ``model`` is "random" (edge probability ``x``) or "band"
    (bandwidth ``b``); ``pd_shift`` is the diagonal shift the repair
    step added, 0.0 when none was needed.
    """

    model: str
    p: int
    x: Optional[float] = None
    b: Optional[int] = None
    seed: Optional[int] = None
    pd_shift: float = 0.0

    @property
    def label(self):
        param = self.x if self.model == "random" else self.b
        return f"{self.model}({param})"


def pd_repair(omega):
    """Shift the diagonal so the smallest eigenvalue is at least 0.05.

    Returns (repaired, shift). The input must be symmetric; symmetric
    indefinite matrices are allowed, which is why the eigenvalue check
    uses a real symmetric eigensolver rather than singular values.
    """
    omega = symmetrized(omega, name="omega")
    lam_min = float(np.linalg.eigvalsh(omega)[0])
    if lam_min >= MIN_EIGENVALUE:
        return omega, 0.0
    shift = MIN_EIGENVALUE - lam_min
    return omega + shift * np.eye(omega.shape[0]), shift


def precision_random(p, x, seed):
    """Random-edge precision: unit diagonal, each upper off-diagonal
    entry set to 1 with probability ``x`` (seeded, drawn in row-major
    upper-triangle order), mirrored, then repaired.

    Returns (omega, spec).
    """
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p!r}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {x}")
    gen = philox(seed)
    iu = np.triu_indices(p, k=1)
    edges = (gen.random(iu[0].size) < x).astype(np.float64)
    omega = np.zeros((p, p))
    omega[iu] = edges
    omega += omega.T
    np.fill_diagonal(omega, 1.0)
    omega, shift = pd_repair(omega)
    return omega, PrecisionSpec(model="random", p=int(p), x=float(x), seed=int(seed), pd_shift=shift)


def precision_band(p, b):
    """Band precision: entry 1 wherever |i - j| <= b, repaired.

    Deterministic, so no seed. Returns (omega, spec).
    """
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p!r}")
    if not isinstance(b, (int, np.integer)) or not 1 <= b < p:
        raise ValueError(f"need 1 <= b < p, got b={b!r}, p={p}")
    idx = np.arange(p)
    omega = (np.abs(idx[:, None] - idx[None, :]) <= b).astype(np.float64)
    omega, shift = pd_repair(omega)
    return omega, PrecisionSpec(model="band", p=int(p), b=int(b), pd_shift=shift)


def sample_mvn(n, omega, seed):
    """n rows from N(0, inv(omega)), seeded.

    The covariance is applied by solving against the Cholesky factor of
    the precision: with omega = c @ c.T and z standard normal (filled
    row-major), rows are z @ inv(c).T-style solves, never an explicit
    matrix inverse. Raises ValueError when omega is not positive
    definite; run `pd_repair` first.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    omega = as_matrix(omega, "omega")
    omega = symmetrized(omega, name="omega")
    try:
        chol = np.linalg.cholesky(omega)
    except np.linalg.LinAlgError:
        raise ValueError("precision matrix is not positive definite; apply pd_repair first")
    z = philox(seed).standard_normal((int(n), omega.shape[0]))
    return solve_triangular(chol, z.T, lower=True, trans=1).T
