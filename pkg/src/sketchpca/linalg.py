"""Dense matrix kernels and conventions used everywhere else.

Conventions
-----------
Matrices are 2-d float64 numpy arrays, row-major, with finite entries.
``as_matrix`` enforces this at public entry points.

Rank truncation keeps singular values strictly greater than
``tol_factor * sigma[0]``; the default factor is ``max(m, k) * eps``,
the usual pseudo-inverse cutoff for an m-by-k input.

Singular vector signs are fixed deterministically: within each singular
pair, the entry of largest absolute value in the right singular vector
is made nonnegative (ties broken toward the lowest index) and the left
vector is flipped to match. Two calls on the same array are therefore
bit-identical, and downstream approximations computed along different
algebraic routes agree per entry instead of per span.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import RankError

__all__ = [
    "as_matrix",
    "center_columns",
    "symmetrized",
    "Svd",
    "svd",
    "eigh_psd",
    "pinv_diag",
    "Basis",
    "exact_pca",
]


def as_matrix(x, name="matrix"):
    """Validate and return ``x`` as a 2-d float64 array with finite entries."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


def center_columns(x):
    """Subtract each column's mean. Returns a new array."""
    x = as_matrix(x, "x")
    return x - x.mean(axis=0)


def symmetrized(a, tol=1e-10, name="a"):
    """Check that ``a`` is square and symmetric, return its symmetric part.

    The check is relative to the largest entry magnitude because exact
    bitwise symmetry is not preserved by BLAS products like ``x @ x.T``.
    """
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > tol * scale:
        raise ValueError(f"{name} is not symmetric within tolerance {tol}")
    return 0.5 * (a + a.T)


class Svd(NamedTuple):
    """Reduced SVD truncated at numerical rank.

    ``u`` is m-by-r, ``sigma`` the r positive singular values in
    nonincreasing order, ``v`` k-by-r, ``rank`` r, and ``tol`` the
    relative truncation factor that was applied.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    rank: int
    tol: float


def svd(a, tol_factor=None):
    """Reduced SVD with rank truncation and deterministic signs.

    Parameters
    ----------
    a : (m, k) array_like
        Matrix to factor. Must be finite.
    tol_factor : float, optional
        Relative cutoff; singular values <= tol_factor * sigma[0] are
        dropped. Defaults to max(m, k) * eps.

    Returns
    -------
    Svd
        Factors satisfying ``a ~= u @ diag(sigma) @ v.T`` up to the
        discarded part of the spectrum.
    """
    a = as_matrix(a, "a")
    if tol_factor is None:
        tol_factor = max(a.shape) * np.finfo(np.float64).eps
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = tol_factor * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    u = u[:, :rank].copy()
    s = s[:rank].copy()
    v = vt[:rank].T.copy()
    for j in range(rank):
        i = int(np.argmax(np.abs(v[:, j])))
        if v[i, j] < 0:
            v[:, j] = -v[:, j]
            u[:, j] = -u[:, j]
    return Svd(u=u, sigma=s, v=v, rank=rank, tol=float(tol_factor))


def eigh_psd(a, tol_factor=None):
    """Eigenvectors and eigenvalues of a symmetric nonnegative-definite matrix.

    Routed through the SVD of the (symmetrized) matrix itself, which for
    such matrices returns the eigenpairs directly and inherits the sign
    convention of `svd`. Eigenvalues below the truncation cutoff are
    dropped, so the returned factor may have fewer columns than ``a``.
    """
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"a must be square, got shape {a.shape}")
    f = svd(0.5 * (a + a.T), tol_factor)
    return f.v, f.sigma


def pinv_diag(sigma, tol=None):
    """Pseudo-inverse of a nonnegative, nonincreasing diagonal.

    Entries with ``sigma[i] > tol * sigma[0]`` become ``1 / sigma[i]``,
    the rest become exactly 0. Default tol is ``len(sigma) * eps``.
    """
    s = np.asarray(sigma, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError(f"sigma must be 1-dimensional, got shape {s.shape}")
    if not np.isfinite(s).all():
        raise ValueError("sigma contains non-finite entries")
    if np.any(s < 0):
        raise ValueError("sigma must be nonnegative")
    if s.size == 0:
        return s.copy()
    if tol is None:
        tol = s.size * np.finfo(np.float64).eps
    out = np.zeros_like(s)
    keep = s > tol * s[0]
    out[keep] = 1.0 / s[keep]
    return out


@dataclass(frozen=True)
class Basis:
    """A set of eigenvector estimates with their eigenvalue estimates.

    ``vectors`` holds one estimate per column (q-by-m, eigenvalue order),
    ``eigvals`` the matching m nonnegative values in nonincreasing order.
    ``orthonormal`` records whether the columns are orthonormal by
    construction; Nystrom-style bases are generally not. ``method`` is
    one of the registered method tags, ``selection`` the index selection
    the basis was built from (None for exact), and ``scale_applied``
    whether the documented global scaling factors were applied.
    """

    vectors: np.ndarray
    eigvals: np.ndarray
    orthonormal: bool
    method: str
    selection: Optional[object] = None
    scale_applied: bool = True

    @property
    def n_vectors(self):
        return self.vectors.shape[1]


def exact_pca(x, d, tol_factor=None):
    """Exact rank-d PCA basis of ``x`` via its SVD.

    Returns the leading d right singular vectors with eigenvalue
    estimates ``sigma[i]**2 / n`` (the eigenvalues of the second moment
    matrix ``x.T @ x / n``). ``x`` is used as given; center beforehand
    if the usual sample covariance is wanted.
    """
    x = as_matrix(x, "x")
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    f = svd(x, tol_factor)
    if d > f.rank:
        raise RankError(f"requested {d} components but numerical rank is {f.rank}")
    n = x.shape[0]
    return Basis(
        vectors=f.v[:, :d],
        eigvals=f.sigma[:d] ** 2 / n,
        orthonormal=True,
        method="exact",
        selection=None,
    )
