"""Computable upper bounds on the subspace error of sketched PCA.

Both theorem-style bounds control delta(V_d, approx_d), the projector
Frobenius distance between the exact d-dimensional principal subspace
of s = x.T @ x / n and its sketched estimate, in terms of a spectral
gap and sums of squared inner products between sampled and unsampled
columns. The corollary-style bounds replace those exact sums with a
worst-case coherence constant, giving a formula that needs only the
dimensions, the gap, and one scalar from the data.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import GapError, RankError
from .linalg import as_matrix, eigh_psd, svd
from .sketching import subsample

__all__ = [
    "BoundReport",
    "spectral_gap",
    "cross_term_sums",
    "nystrom_bound",
    "cs_bound",
    "coherence",
    "corollary_bounds",
    "bound_difference",
]


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound.

    ``kind`` is one of nystrom_thm1, cs_thm2, nystrom_cor, cs_cor.
    ``gap`` is the spectral gap the bound divides by, ``term1`` the
    gap-controlled term, ``term2`` the alignment term (zero for the
    column-sampling bounds), ``total`` their sum. ``coherence`` is set
    on corollary reports. ``clamped`` flags a negative alignment
    radicand that was clamped to zero.
    """

    kind: str
    gap: float
    term1: float
    term2: float
    total: float
    d: int
    l: int
    coherence: Optional[float] = None
    clamped: bool = False


def spectral_gap(top, bottom, d):
    """top[d] minus bottom[d+1] in 1-indexed terms, padding bottom with 0.

    ``top`` and ``bottom`` are nonincreasing spectra (eigenvalues or
    singular values). When ``bottom`` has d or fewer entries, the
    (d+1)-th is taken as 0, the value truncation assigned it.
    """
    top = np.asarray(top, dtype=np.float64)
    bottom = np.asarray(bottom, dtype=np.float64)
    if top.ndim != 1 or bottom.ndim != 1:
        raise ValueError("spectra must be 1-dimensional")
    if not isinstance(d, (int, np.integer)) or d < 1 or d > top.size:
        raise ValueError(f"need 1 <= d <= {top.size}, got {d!r}")
    lam_bot = float(bottom[d]) if bottom.size > d else 0.0
    return float(top[d - 1]) - lam_bot


def cross_term_sums(x, sel):
    """Sums of squared column inner products split by the selection.

    Returns (mixed, tail): mixed sums (x_j . x_k)**2 over unsampled j
    and sampled k; tail sums it over unsampled j and k including j == k,
    so squared norms of unsampled columns enter the tail.
    """
    x = as_matrix(x, "x")
    if sel.axis != "columns" or sel.q != x.shape[1]:
        raise ValueError("selection must be over the columns of x")
    gram = x.T @ x
    inside = sel.indices
    outside = sel.complement
    mixed = float(np.sum(gram[np.ix_(outside, inside)] ** 2))
    tail = float(np.sum(gram[np.ix_(outside, outside)] ** 2))
    return mixed, tail


def _lam_moment(x):
    """Eigenvalues of x.T @ x / n via the singular values of x."""
    return svd(x).sigma ** 2 / x.shape[0]


def nystrom_bound(x, sel, d, lam_s=None):
    """Gap-based bound on the Nystrom feature-subspace error.

        sqrt(2)/(n*eps) * sqrt(2*mixed + tail)
          + sqrt(2) * sqrt(trace(omega_d.T @ inv(I + omega_d @ omega_d.T) @ omega_d))

    with eps = lam_d(s) - lam_{d+1}(s11) and omega the eigenvector
    extension coefficients. The trace is evaluated through the
    push-through identity as a d-by-d linear solve; no explicit inverse
    is formed. ``lam_s`` optionally supplies precomputed eigenvalues of
    the moment matrix to skip one SVD.

    Raises GapError when eps <= 0 and RankError when the sampled block
    has rank below d.
    """
    x = as_matrix(x, "x")
    n, p = x.shape
    if sel.axis != "columns" or sel.q != p:
        raise ValueError("selection must be over the columns of x")
    x1 = subsample(x, sel)
    v11, lam11 = eigh_psd(x1.T @ x1 / n)
    if lam_s is None:
        lam_s = _lam_moment(x)
    eps = spectral_gap(lam_s, lam11, d)
    if eps <= 0:
        raise GapError(f"nonpositive eigenvalue gap {eps:.3e} at d={d}")
    if lam11.size < d:
        raise RankError(f"sampled moment block has rank {lam11.size} < d={d}")
    mixed, tail = cross_term_sums(x, sel)
    term1 = math.sqrt(2.0) / (n * eps) * math.sqrt(2.0 * mixed + tail)
    x2 = x[:, sel.complement]
    omega_d = (x2.T @ x1 / n) @ (v11[:, :d] / lam11[:d])
    m = omega_d.T @ omega_d
    t = float(np.trace(np.linalg.solve(np.eye(d) + m, m)))
    term2 = math.sqrt(2.0) * math.sqrt(max(t, 0.0))
    return BoundReport(
        kind="nystrom_thm1", gap=eps, term1=term1, term2=term2,
        total=term1 + term2, d=int(d), l=sel.l,
    )


def cs_bound(x, sel, d, lam_s=None):
    """Gap-based bound on the column-sampling feature-subspace error.

        1/(delta*n) * sqrt(mixed + tail)

    with delta = lam_d(s) - sigma_{d+1}(l_s), the gap against the
    sampled block column's singular values. Raises GapError when the
    gap is nonpositive.
    """
    x = as_matrix(x, "x")
    n, p = x.shape
    if sel.axis != "columns" or sel.q != p:
        raise ValueError("selection must be over the columns of x")
    sv = svd(x.T @ subsample(x, sel) / n).sigma
    if lam_s is None:
        lam_s = _lam_moment(x)
    gap = spectral_gap(lam_s, sv, d)
    if gap <= 0:
        raise GapError(f"nonpositive singular value gap {gap:.3e} at d={d}")
    mixed, tail = cross_term_sums(x, sel)
    term1 = math.sqrt(mixed + tail) / (gap * n)
    return BoundReport(
        kind="cs_thm2", gap=gap, term1=term1, term2=0.0,
        total=term1, d=int(d), l=sel.l,
    )


def coherence(x, r):
    """Largest inner product x_j . x_k with k past position r and j != k.

    Indices are 0-based: k ranges over [r, p) and j over [0, p). The
    maximum is signed, not absolute. Needs p >= 2 so the index set is
    nonempty.
    """
    x = as_matrix(x, "x")
    p = x.shape[1]
    if p < 2:
        raise ValueError("coherence needs at least 2 columns")
    if not isinstance(r, (int, np.integer)) or r < 0 or r >= p:
        raise ValueError(f"need 0 <= r < {p}, got {r!r}")
    block = x.T @ x[:, r:]
    for k in range(block.shape[1]):
        block[r + k, k] = -np.inf
    return float(block.max())


def corollary_bounds(coh, p, l, n, gap, vnys_d):
    """Coherence-based bounds for both sketch methods at matched settings.

    Returns (nystrom_report, cs_report) with

        nystrom term1 = coh * sqrt(p**2 - l**2) / (n * gap)
        cs      term1 = coh * sqrt((p - l) * p) / (n * gap)

    The Nystrom report adds the alignment term
    sqrt(d - trace(inv(vnys_d.T @ vnys_d))); a negative radicand is
    clamped to zero and flagged. ``vnys_d`` must carry exactly the d
    basis vectors the bound refers to.
    """
    if gap <= 0:
        raise GapError(f"nonpositive gap {gap:.3e}")
    if not (isinstance(p, (int, np.integer)) and isinstance(l, (int, np.integer))):
        raise ValueError("p and l must be integers")
    if not 1 <= l <= p:
        raise ValueError(f"need 1 <= l <= p, got l={l}, p={p}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    vnys_d = as_matrix(vnys_d, "vnys_d")
    d = vnys_d.shape[1]
    gram = vnys_d.T @ vnys_d
    try:
        tr_inv = float(np.trace(np.linalg.inv(gram)))
    except np.linalg.LinAlgError:
        raise RankError("basis vectors are numerically dependent; alignment term undefined")
    rad = d - tr_inv
    clamped = rad < 0
    term2 = math.sqrt(max(rad, 0.0))
    t1_nys = coh * math.sqrt(float(p) ** 2 - float(l) ** 2) / (n * gap)
    t1_cs = coh * math.sqrt(float(p - l) * float(p)) / (n * gap)
    nys = BoundReport(
        kind="nystrom_cor", gap=float(gap), term1=t1_nys, term2=term2,
        total=t1_nys + term2, d=d, l=int(l), coherence=float(coh), clamped=clamped,
    )
    cs = BoundReport(
        kind="cs_cor", gap=float(gap), term1=t1_cs, term2=0.0,
        total=t1_cs, d=d, l=int(l), coherence=float(coh),
    )
    return nys, cs


def bound_difference(p, l):
    """sqrt(p**2 - l**2) - sqrt((p - l) * p), the corollary term1 spread.

    Computed in the rearranged form (p - l) * l / (sqrt(p**2 - l**2) +
    sqrt((p - l) * p)), which avoids cancellation for l near p and is
    exactly 0 at l == p. Approaches l / 2 as p grows.
    """
    if not (isinstance(p, (int, np.integer)) and isinstance(l, (int, np.integer))):
        raise ValueError("p and l must be integers")
    if not 1 <= l <= p:
        raise ValueError(f"need 1 <= l <= p, got l={l}, p={p}")
    num = float(p - l) * float(l)
    if num == 0.0:
        return 0.0
    return num / (math.sqrt(float(p) ** 2 - float(l) ** 2) + math.sqrt(float(p - l) * float(p)))
