"""Sketch-based approximations to principal component bases.

Given a data matrix x (n samples by p features) and a seeded selection
of l indices, these functions build approximations to the eigenvectors
of the second moment matrix s = x.T @ x / n (feature side, the v
family) or of t = x @ x.T (sample side, the u family), without ever
forming the full p-by-p or n-by-n matrix.

Method tags
-----------
v_nys       Nystrom extension of the sampled feature block's eigenvectors.
            Two algebraically identical routes: `v_nys_space` works from
            the l-by-l moment block, `v_nys_stable` from the SVD of the
            sampled columns themselves.
v_cs        Column-sampling: left singular vectors of the sampled block
            column l_s = x.T @ x1 / n. Orthonormal by construction.
u_nys       Nystrom on the sample side, computed from the SVD of the
            sampled rows.
u_cs        Column-sampling on the sample side, from l_t = x @ x1.T.
u_hat_nys   Sample-side basis lifted from v_nys: x @ v_nys @ pinv(sqrt(lam)).
u_hat_cs    Same lift applied to v_cs.
u_hat       Left singular vectors of the sampled columns alone.

Every estimator applies its documented global scaling factor, records
it in the returned `Basis`, and orders columns by descending eigenvalue
estimate. Rank-deficient sampled blocks yield fewer than l columns;
sampled blocks that are numerically zero raise DegenerateSketchError.
"""

import dataclasses
import math

import numpy as np

from .exceptions import DegenerateSketchError, RankError
from .linalg import Basis, as_matrix, eigh_psd, pinv_diag, svd
from .sketching import extract_blocks, subsample

__all__ = [
    "nystrom_matrix",
    "nystrom_eigpairs",
    "v_nys_space",
    "v_nys_stable",
    "v_cs",
    "u_nys",
    "u_cs",
    "u_hat_nys",
    "u_hat_cs",
    "u_hat",
    "truncate",
    "compute_method",
    "METHOD_TAGS",
    "METHOD_AXIS",
    "METHOD_TARGET",
    "REFERENCE_METHOD",
]

METHOD_TAGS = ("exact", "v_nys", "v_cs", "u_nys", "u_cs", "u_hat_nys", "u_hat_cs", "u_hat")

# Axis each method's selection must be drawn along, and the exact
# subspace it estimates (V: right/feature side, U: left/sample side).
METHOD_AXIS = {
    "v_nys": "columns",
    "v_cs": "columns",
    "u_nys": "rows",
    "u_cs": "rows",
    "u_hat_nys": "columns",
    "u_hat_cs": "columns",
    "u_hat": "columns",
    "exact": "columns",
}
METHOD_TARGET = {
    "v_nys": "V",
    "v_cs": "V",
    "u_nys": "U",
    "u_cs": "U",
    "u_hat_nys": "U",
    "u_hat_cs": "U",
    "u_hat": "U",
    "exact": "V",
}
REFERENCE_METHOD = {"V": "v_cs", "U": "u_cs"}


def _require_axis(sel, axis, dim):
    if sel.axis != axis:
        raise ValueError(f"method needs a {axis}-axis selection, got {sel.axis}")
    if sel.q != dim:
        raise ValueError(f"selection is over {sel.q} indices but the {axis} dimension is {dim}")


def nystrom_matrix(a, sel):
    """Nystrom reconstruction of a symmetric nonnegative-definite matrix.

    Builds l_a @ pinv(a11) @ l_a.T from the blocks induced by ``sel``
    and returns it with rows and columns restored to original order.
    Exact whenever rank(a) == rank(a11).
    """
    blocks = extract_blocks(a, sel)
    v11, lam11 = eigh_psd(blocks.a11)
    core = (v11 / lam11) @ v11.T if lam11.size else np.zeros((sel.l, sel.l))
    approx = blocks.l_block @ core @ blocks.l_block.T
    perm = sel.permutation
    out = np.empty_like(approx)
    out[np.ix_(perm, perm)] = approx
    return out


def nystrom_eigpairs(a, sel):
    """Nystrom eigenvector and eigenvalue estimates for symmetric nnd ``a``.

    The sampled block's eigenvectors are extended to all q coordinates:

        b = sqrt(l/q) * [v(a11); a21 @ v(a11) @ pinv(diag(lam11))]
        eigvals = (q/l) * lam11

    Rows come back in original index order. The method tag is u_nys for
    a rows-axis selection and v_nys otherwise, matching what the
    estimates mean when ``a`` is a sample-side or feature-side moment
    matrix.
    """
    blocks = extract_blocks(a, sel)
    v11, lam11 = eigh_psd(blocks.a11)
    if lam11.size == 0:
        raise DegenerateSketchError("sampled principal block has numerical rank 0")
    q, l = sel.q, sel.l
    omega = blocks.a21 @ (v11 / lam11)
    b_perm = math.sqrt(l / q) * np.vstack([v11, omega])
    b = np.empty_like(b_perm)
    b[sel.permutation] = b_perm
    tag = "u_nys" if sel.axis == "rows" else "v_nys"
    return Basis(b, (q / l) * lam11, orthonormal=False, method=tag, selection=sel)


def v_nys_space(x, sel):
    """Feature-side Nystrom basis via the sampled moment block.

    Forms s11 = x1.T @ x1 / n and l_s = x.T @ x1 / n explicitly, then
    extends s11's eigenvectors. Cheap in memory but squares the
    condition number of the sampled columns.
    """
    x = as_matrix(x, "x")
    n, p = x.shape
    _require_axis(sel, "columns", p)
    x1 = subsample(x, sel)
    s11 = x1.T @ x1 / n
    v11, lam11 = eigh_psd(s11)
    if lam11.size == 0:
        raise DegenerateSketchError("sampled columns are numerically zero")
    l_s = x.T @ x1 / n
    b = math.sqrt(sel.l / p) * (l_s @ (v11 / lam11))
    return Basis(b, (p / sel.l) * lam11, orthonormal=False, method="v_nys", selection=sel)


def v_nys_stable(x, sel):
    """Feature-side Nystrom basis via the SVD of the sampled columns.

    Algebraically identical to `v_nys_space` (entry for entry, given the
    shared sign convention) but works from x1 directly, avoiding the
    squared conditioning of the moment block.
    """
    x = as_matrix(x, "x")
    n, p = x.shape
    _require_axis(sel, "columns", p)
    f = svd(subsample(x, sel))
    if f.rank == 0:
        raise DegenerateSketchError("sampled columns are numerically zero")
    b = math.sqrt(sel.l / p) * (x.T @ (f.u / f.sigma))
    return Basis(b, (p / sel.l) * f.sigma**2 / n, orthonormal=False, method="v_nys", selection=sel)


def v_cs(x, sel):
    """Feature-side column-sampling basis.

    Left singular vectors of l_s = x.T @ x1 / n, with eigenvalue
    estimates sqrt(p/l) * singular values. Orthonormal.
    """
    x = as_matrix(x, "x")
    n, p = x.shape
    _require_axis(sel, "columns", p)
    l_s = x.T @ subsample(x, sel) / n
    f = svd(l_s)
    if f.rank == 0:
        raise DegenerateSketchError("sampled block column is numerically zero")
    eig = math.sqrt(p / sel.l) * f.sigma
    return Basis(f.u, eig, orthonormal=True, method="v_cs", selection=sel)


def u_nys(x, sel):
    """Sample-side Nystrom basis from the SVD of the sampled rows.

    Equals nystrom_eigpairs(x @ x.T, sel) entry for entry while touching
    only the l-by-p sampled row block. Column signs are re-fixed by the
    left singular vectors' largest-entry rule because that is the
    convention the moment-matrix route inherits.
    """
    x = as_matrix(x, "x")
    n, p = x.shape
    _require_axis(sel, "rows", n)
    f = svd(subsample(x, sel))
    if f.rank == 0:
        raise DegenerateSketchError("sampled rows are numerically zero")
    u1, v1 = f.u.copy(), f.v.copy()
    for j in range(f.rank):
        i = int(np.argmax(np.abs(u1[:, j])))
        if u1[i, j] < 0:
            u1[:, j] = -u1[:, j]
            v1[:, j] = -v1[:, j]
    b = math.sqrt(sel.l / n) * (x @ (v1 / f.sigma))
    return Basis(b, (n / sel.l) * f.sigma**2, orthonormal=False, method="u_nys", selection=sel)


def u_cs(x, sel):
    """Sample-side column-sampling basis: left singular vectors of x @ x1.T."""
    x = as_matrix(x, "x")
    n, p = x.shape
    _require_axis(sel, "rows", n)
    l_t = x @ subsample(x, sel).T
    f = svd(l_t)
    if f.rank == 0:
        raise DegenerateSketchError("sampled block column is numerically zero")
    eig = math.sqrt(n / sel.l) * f.sigma
    return Basis(f.u, eig, orthonormal=True, method="u_cs", selection=sel)


def _lift_to_samples(x, vbasis, tag):
    """Map a feature basis to sample space: x @ v @ pinv(sqrt(lam))."""
    inv_sqrt = pinv_diag(np.sqrt(vbasis.eigvals))
    b = x @ (vbasis.vectors * inv_sqrt)
    return Basis(b, vbasis.eigvals.copy(), orthonormal=False, method=tag, selection=vbasis.selection)


def u_hat_nys(x, sel, route="stable"):
    """Sample-side basis lifted from the feature-side Nystrom basis."""
    x = as_matrix(x, "x")
    vb = v_nys_stable(x, sel) if route == "stable" else v_nys_space(x, sel)
    return _lift_to_samples(x, vb, "u_hat_nys")


def u_hat_cs(x, sel):
    """Sample-side basis lifted from the feature-side column-sampling basis."""
    x = as_matrix(x, "x")
    return _lift_to_samples(x, v_cs(x, sel), "u_hat_cs")


def u_hat(x, sel):
    """Left singular vectors of the sampled columns, used directly.

    The cheapest sample-side estimate: no extension step at all, just
    u(x1) with eigenvalue estimates sigma(x1)**2 / n.
    """
    x = as_matrix(x, "x")
    _require_axis(sel, "columns", x.shape[1])
    f = svd(subsample(x, sel))
    if f.rank == 0:
        raise DegenerateSketchError("sampled columns are numerically zero")
    return Basis(f.u, f.sigma**2 / x.shape[0], orthonormal=True, method="u_hat", selection=sel)


def truncate(basis, d):
    """First d basis vectors and eigenvalues, other fields unchanged."""
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    if d > basis.n_vectors:
        raise RankError(f"basis has {basis.n_vectors} vectors, cannot keep {d}")
    return dataclasses.replace(
        basis, vectors=basis.vectors[:, :d], eigvals=basis.eigvals[:d]
    )


_DISPATCH = {
    "v_cs": v_cs,
    "u_nys": u_nys,
    "u_cs": u_cs,
    "u_hat_cs": u_hat_cs,
    "u_hat": u_hat,
}


def compute_method(tag, x, sel, route="stable"):
    """Run one sketch method by tag. ``route`` applies to the Nystrom v-basis."""
    if route not in ("stable", "space"):
        raise ValueError(f"route must be 'stable' or 'space', got {route!r}")
    if tag == "v_nys":
        return v_nys_stable(x, sel) if route == "stable" else v_nys_space(x, sel)
    if tag == "u_hat_nys":
        return u_hat_nys(x, sel, route=route)
    if tag in _DISPATCH:
        return _DISPATCH[tag](x, sel)
    raise ValueError(f"unknown method tag {tag!r}; expected one of {METHOD_TAGS[1:]}")
