"""Index selection and block extraction for sketched approximations.

A sketch here is a seeded uniform-without-replacement draw of l indices
along one axis. Everything downstream (block extraction, the sampled
column/row submatrices, the streaming reader) is bookkeeping around that
draw; the bookkeeping preserves original index order so approximations
can be compared entry-wise against full decompositions.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import matio
from .exceptions import DegenerateSketchError  # noqa: F401  (re-export for callers)
from .linalg import as_matrix, symmetrized
from .rng import philox

__all__ = ["Selection", "sample_uniform", "Blocks", "extract_blocks", "subsample", "stream_columns"]

AXES = ("columns", "rows")


@dataclass(frozen=True)
class Selection:
    """l distinct indices drawn from range(q) along one axis.

    ``indices`` keeps draw order, not sorted order; the first index is
    the first draw. The triple (q, l, seed, axis) regenerates the
    selection exactly via `sample_uniform`.
    """

    indices: np.ndarray
    q: int
    seed: int
    axis: str

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size == 0:
            raise ValueError("indices must be a nonempty 1-d integer array")
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.q < 1 or idx.size > self.q:
            raise ValueError(f"need 1 <= l <= q, got l={idx.size}, q={self.q}")
        if idx.min() < 0 or idx.max() >= self.q:
            raise ValueError("indices out of range [0, q)")
        if np.unique(idx).size != idx.size:
            raise ValueError("indices must be distinct")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def l(self):
        return int(self.indices.size)

    @property
    def complement(self):
        """Unselected indices, ascending."""
        mask = np.ones(self.q, dtype=bool)
        mask[self.indices] = False
        return np.flatnonzero(mask)

    @property
    def permutation(self):
        """Selected indices first (draw order), then the rest ascending."""
        return np.concatenate([self.indices, self.complement])


def sample_uniform(q, l, seed, axis="columns"):
    """Draw l of q indices uniformly without replacement, seeded.

    Implemented as a partial Fisher-Yates shuffle over range(q) driven
    by the Philox generator, so the draw is exactly uniform and costs
    O(l) memory regardless of q.
    """
    if not isinstance(q, (int, np.integer)) or q < 1:
        raise ValueError(f"q must be a positive integer, got {q!r}")
    if not isinstance(l, (int, np.integer)) or l < 1 or l > q:
        raise ValueError(f"need 1 <= l <= q, got l={l!r} with q={q}")
    gen = philox(seed)
    swapped = {}
    picks = np.empty(l, dtype=np.int64)
    for i in range(l):
        j = int(gen.integers(i, q))
        picks[i] = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)
    return Selection(indices=picks, q=int(q), seed=int(seed), axis=axis)


class Blocks(NamedTuple):
    """Partition of a symmetric matrix induced by a selection.

    ``a11`` is the selected principal block (l-by-l), ``a21`` the
    cross block (q-l by l), and ``l_block`` their vertical stack, all
    in the selection's permuted order.
    """

    a11: np.ndarray
    a21: np.ndarray
    l_block: np.ndarray


def extract_blocks(a, sel):
    """Split symmetric ``a`` into the blocks induced by ``sel``.

    The input is symmetrized after a relative symmetry check, so
    ``a11`` is exactly symmetric on output.
    """
    a = symmetrized(a, name="a")
    if sel.q != a.shape[0]:
        raise ValueError(f"selection is over {sel.q} indices but a is {a.shape[0]}x{a.shape[1]}")
    idx = sel.indices
    rest = sel.complement
    a11 = a[np.ix_(idx, idx)]
    a21 = a[np.ix_(rest, idx)]
    return Blocks(a11=a11, a21=a21, l_block=np.vstack([a11, a21]))


def subsample(x, sel):
    """Columns (or rows) of ``x`` named by ``sel``, in draw order."""
    x = as_matrix(x, "x")
    dim = x.shape[1] if sel.axis == "columns" else x.shape[0]
    if sel.q != dim:
        raise ValueError(f"selection is over {sel.q} {sel.axis} but x has {dim}")
    if sel.axis == "columns":
        return x[:, sel.indices]
    return x[sel.indices, :]


def stream_columns(path, sel):
    """Read only the selected columns of a stored matrix, one row at a time.

    Equivalent to ``subsample(read_matrix(path), sel)`` bit for bit, but
    holds just the n-by-l output plus a single row buffer, so matrices
    with p >> l never exist in memory whole.
    """
    if sel.axis != "columns":
        raise ValueError("stream_columns requires a columns-axis selection")
    with open(path, "rb") as f:
        rows, cols = matio._read_header(f, path)
        matio._check_size(f, path, rows, cols)
        if sel.q != cols:
            raise ValueError(f"selection is over {sel.q} columns but file has {cols}")
        out = np.empty((rows, sel.l), dtype=np.float64)
        rowbytes = 8 * cols
        for i in range(rows):
            row = np.frombuffer(f.read(rowbytes), dtype="<f8")
            out[i] = row[sel.indices]
    if not np.isfinite(out).all():
        raise ValueError(f"{path}: selected columns contain non-finite entries")
    return out
