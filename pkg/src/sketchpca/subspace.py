"""Distances between estimated and exact principal subspaces.

The distance between two d-dimensional subspaces is the Frobenius norm
of the difference of their orthogonal projectors. Because sketch bases
are generally not orthonormal, each projector is built from an SVD of
the leading basis columns, which handles oblique (correlated) basis
vectors without forming any Gram inverse.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import RankError
from .linalg import as_matrix, svd

__all__ = ["Projector", "projector", "delta", "relative_error"]


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector onto the span of d basis vectors."""

    matrix: np.ndarray
    d: int

    @property
    def q(self):
        return self.matrix.shape[0]


def projector(b, d, tol_factor=None):
    """Orthogonal projector onto the span of the first d columns of ``b``.

    Raises RankError when those columns have numerical rank below d,
    since the intended d-dimensional span does not exist then.
    """
    b = as_matrix(b, "b")
    if not isinstance(d, (int, np.integer)) or d < 1 or d > b.shape[1]:
        raise ValueError(f"need 1 <= d <= {b.shape[1]}, got {d!r}")
    f = svd(b[:, :d], tol_factor)
    if f.rank < d:
        raise RankError(f"first {d} basis vectors have numerical rank {f.rank}")
    return Projector(matrix=f.u @ f.u.T, d=int(d))


def delta(p1, p2):
    """Frobenius distance between two projectors on the same space."""
    if p1.q != p2.q:
        raise ValueError(f"projectors act on different spaces ({p1.q} vs {p2.q})")
    return float(np.linalg.norm(p1.matrix - p2.matrix, "fro"))


def relative_error(approx, reference, exact, d):
    """Subspace error of ``approx`` relative to a reference method.

    All three arguments are `Basis` objects; each is truncated to its
    leading d vectors. The value is
    delta(approx, exact) / delta(reference, exact). A reference distance
    below 1e-12 means the reference already recovers the exact subspace
    and the ratio is undefined; that raises ZeroDivisionError.
    """
    p_exact = projector(exact.vectors, d)
    num = delta(projector(approx.vectors, d), p_exact)
    den = delta(projector(reference.vectors, d), p_exact)
    if den < 1e-12:
        raise ZeroDivisionError(
            f"reference subspace distance {den:.3e} is below 1e-12; relative error undefined"
        )
    return num / den
