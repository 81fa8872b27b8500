"""Experiment grids: run sketch methods over (d, l, seed) cells and
record subspace errors, optional bounds, and timings as flat rows.

A cell never aborts the grid: failures (degenerate sketches, missing
gaps, rank collapses) land in the row's status column and leave the
affected numeric fields blank. Identical configs with identical seeds
reproduce identical rows except for the runtime column.

Set SKETCHPCA_PARALLEL=<k> to evaluate up to k seeds concurrently in
`run_experiment`; row order is restored afterwards, so results are
identical to a serial run. Timing runs always execute serially so the
measurements do not contend with each other.
"""

import csv
import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .approx import (
    METHOD_AXIS,
    METHOD_TAGS,
    METHOD_TARGET,
    REFERENCE_METHOD,
    compute_method,
    truncate,
)
from .bounds import cs_bound, nystrom_bound
from .exceptions import DegenerateSketchError, FormatError, GapError, RankError
from .linalg import center_columns, exact_pca, svd
from .matio import read_matrix, read_matrix_csv
from .rng import mix_seed
from .sketching import sample_uniform
from .simulate import PrecisionSpec, precision_band, precision_random, sample_mvn
from .subspace import delta as proj_delta
from .subspace import projector

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "CSV_COLUMNS",
    "expand_l_grid",
    "run_experiment",
    "time_methods",
    "format_timing_table",
    "write_results_csv",
    "read_results_csv",
    "plot_relative_error",
]

CSV_COLUMNS = [
    "condition", "n", "p", "d", "l", "method", "seed",
    "delta", "relative_error", "bound_total", "gap",
    "pd_shift", "runtime_ms", "status",
]


@dataclass(frozen=True)
class ResultRow:
    """One experiment cell; field order matches the CSV schema."""

    condition: str
    n: int
    p: int
    d: int
    l: int
    method: str
    seed: int
    delta: Optional[float] = None
    relative_error: Optional[float] = None
    bound_total: Optional[float] = None
    gap: Optional[float] = None
    pd_shift: float = 0.0
    runtime_ms: Optional[float] = None
    status: str = "ok"


@dataclass
class ExperimentConfig:
    """What to run.

    ``condition`` is either a `PrecisionSpec` (data regenerated per
    seed) or a path to a stored matrix (same data every seed; seeds
    then only move the sketches). ``l_grid`` is the string "auto" for
    the standard grid derived from (d, p) or an explicit list of l
    values. ``runs`` is the repetition count `time_methods` medians
    over. When ``output`` is set, `run_experiment` and `time_methods`
    also write their rows there as CSV.
    """

    condition: Union[PrecisionSpec, str, Path]
    d_list: Sequence[int]
    n: Optional[int] = None
    l_grid: Union[str, Sequence[int]] = "auto"
    methods: Sequence[str] = ("v_nys", "v_cs")
    seeds: Sequence[int] = (0,)
    route: str = "stable"
    compute_bounds: bool = False
    runs: int = 4
    output: Optional[Union[str, Path]] = None

    def __post_init__(self):
        if not self.d_list:
            raise ValueError("d_list must be nonempty")
        if any(d < 1 for d in self.d_list):
            raise ValueError("every d must be >= 1")
        if not self.seeds:
            raise ValueError("seeds must be nonempty")
        bad = [m for m in self.methods if m not in METHOD_TAGS]
        if bad:
            raise ValueError(f"unknown method tags {bad}; expected subset of {METHOD_TAGS}")
        if isinstance(self.l_grid, str) and self.l_grid != "auto":
            raise ValueError(f"l_grid must be 'auto' or a list of integers, got {self.l_grid!r}")
        if self.route not in ("stable", "space"):
            raise ValueError(f"route must be 'stable' or 'space', got {self.route!r}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


def expand_l_grid(d, p):
    """The standard sketch-size grid for dimension d and p features.

    Ten equally spaced values from ceil(3d/2) to min(15d, floor(2p/5)),
    rounded half-up to integers, deduplicated ascending. Endpoints are
    integers already, so they always survive. Raises ValueError when
    the lower endpoint exceeds the upper one (d too large for p).
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    if not isinstance(p, (int, np.integer)) or p < 4:
        raise ValueError(f"p must be an integer >= 4, got {p!r}")
    lo = (3 * d + 1) // 2
    hi = min(15 * d, (2 * p) // 5)
    if lo > hi:
        raise ValueError(f"grid is empty: lower endpoint {lo} exceeds upper endpoint {hi}")
    pts = np.linspace(lo, hi, 10)
    return sorted({int(math.floor(v + 0.5)) for v in pts})


_STATUS_BY_ERROR = [
    (DegenerateSketchError, "degenerate_sketch"),
    (RankError, "rank_error"),
    (GapError, "gap_error"),
    (ZeroDivisionError, "degenerate_reference"),
    (ValueError, "invalid_cell"),
]


def _status_of(err):
    for cls, tag in _STATUS_BY_ERROR:
        if isinstance(err, cls):
            return tag
    raise err


def _realize(cfg, seed):
    """Materialize the condition for one experiment seed.

    Returns (raw data matrix, condition label, pd_shift).
    """
    cond = cfg.condition
    if isinstance(cond, PrecisionSpec):
        if cfg.n is None:
            raise ValueError("generated conditions need cfg.n")
        if cond.model == "random":
            omega, spec = precision_random(cond.p, cond.x, mix_seed(seed, 0, 0))
        elif cond.model == "band":
            omega, spec = precision_band(cond.p, cond.b)
        else:
            raise ValueError(f"unknown precision model {cond.model!r}")
        x = sample_mvn(cfg.n, omega, mix_seed(seed, 0, 1))
        return x, spec.label, spec.pd_shift
    path = Path(cond)
    x = read_matrix_csv(path) if path.suffix.lower() == ".csv" else read_matrix(path)
    return x, path.stem, 0.0


def _grid_for(cfg, d, p):
    if isinstance(cfg.l_grid, str):
        return expand_l_grid(d, p)
    grid = [int(v) for v in cfg.l_grid]
    if not grid or any(v < 1 for v in grid):
        raise ValueError("explicit l_grid must be a nonempty list of positive integers")
    return grid


class _Cell:
    """Shared per-(seed, d, l) computations: selections, bases, timings."""

    def __init__(self, x, d, l, seed, route):
        self.x = x
        self.d = d
        self.l = l
        self.seed = seed
        self.route = route
        self.n, self.p = x.shape
        self._sels = {}
        self._bases = {}

    def selection(self, axis):
        if axis not in self._sels:
            q = self.p if axis == "columns" else self.n
            bit = 0 if axis == "columns" else 1
            self._sels[axis] = sample_uniform(q, self.l, mix_seed(self.seed, self.l, bit), axis)
        return self._sels[axis]

    def basis(self, tag):
        """Basis and wall-clock ms for one method, computed once."""
        if tag not in self._bases:
            if tag == "exact":
                t0 = time.perf_counter()
                b = exact_pca(self.x, self.d)
                ms = (time.perf_counter() - t0) * 1000.0
            else:
                sel = self.selection(METHOD_AXIS[tag])
                t0 = time.perf_counter()
                b = compute_method(tag, self.x, sel, route=self.route)
                ms = (time.perf_counter() - t0) * 1000.0
            self._bases[tag] = (b, ms)
        return self._bases[tag]


def _parallel_level():
    """Worker count from SKETCHPCA_PARALLEL; 1 (serial) when unset or bad."""
    raw = os.environ.get("SKETCHPCA_PARALLEL", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _experiment_rows_for_seed(cfg, seed):
    rows = []
    x_raw, label, pd_shift = _realize(cfg, seed)
    x = center_columns(x_raw)
    n, p = x.shape
    f = svd(x)
    lam_s = f.sigma**2 / n
    for d in cfg.d_list:
        # One exact oracle projector per (seed, d, target), shared by
        # every l on the grid.
        exact_projs = {}

        def exact_projector(target):
            if target not in exact_projs:
                if f.rank < d:
                    raise RankError(
                        f"data has numerical rank {f.rank}, no exact {d}-dimensional basis"
                    )
                vecs = f.v if target == "V" else f.u
                exact_projs[target] = projector(vecs, d)
            return exact_projs[target]

        grid = _grid_for(cfg, d, p)
        for l in grid:
            cell = _Cell(x, d, l, seed, cfg.route)
            ref_delta = {}

            def reference_delta(target):
                if target not in ref_delta:
                    ref_basis, _ = cell.basis(REFERENCE_METHOD[target])
                    ref_d = truncate(ref_basis, d)
                    ref_delta[target] = proj_delta(
                        projector(ref_d.vectors, d), exact_projector(target)
                    )
                return ref_delta[target]

            for m in cfg.methods:
                base = dict(condition=label, n=n, p=p, d=d, l=l,
                            method=m, seed=seed, pd_shift=pd_shift)
                try:
                    basis, ms = cell.basis(m)
                    basis_d = truncate(basis, d)
                    dist = proj_delta(
                        projector(basis_d.vectors, d),
                        exact_projector(METHOD_TARGET[m]),
                    )
                except Exception as err:  # cell-local: grid must survive
                    rows.append(ResultRow(**base, status=_status_of(err)))
                    continue
                status = "ok"
                rel = None
                try:
                    den = reference_delta(METHOD_TARGET[m])
                    if den < 1e-12:
                        raise ZeroDivisionError
                    rel = dist / den
                except Exception as err:
                    status = _status_of(err)
                bound_total = gap = None
                if cfg.compute_bounds and m in ("v_nys", "v_cs"):
                    try:
                        sel = cell.selection("columns")
                        rep = (nystrom_bound if m == "v_nys" else cs_bound)(
                            x, sel, d, lam_s=lam_s
                        )
                        bound_total, gap = rep.total, rep.gap
                    except Exception as err:
                        if status == "ok":
                            status = _status_of(err)
                rows.append(ResultRow(
                    **base, delta=dist, relative_error=rel,
                    bound_total=bound_total, gap=gap,
                    runtime_ms=ms, status=status,
                ))
    return rows


def run_experiment(cfg):
    """Evaluate every configured (seed, d, l, method) cell.

    Each cell records the subspace distance to the exact d-dimensional
    basis, the error relative to the matching column-sampling reference
    at the same selection, and, when ``cfg.compute_bounds`` is set, the
    theorem bound and its gap for the v_nys and v_cs methods. Rows come
    back in deterministic (seed, d, l, method) order regardless of the
    SKETCHPCA_PARALLEL level, and are written to ``cfg.output`` when
    that is set.
    """
    workers = min(_parallel_level(), len(cfg.seeds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda s: _experiment_rows_for_seed(cfg, s), cfg.seeds))
    else:
        chunks = [_experiment_rows_for_seed(cfg, seed) for seed in cfg.seeds]
    rows = [row for chunk in chunks for row in chunk]
    if cfg.output is not None:
        write_results_csv(rows, cfg.output)
    return rows


def time_methods(cfg):
    """Median-of-``cfg.runs`` wall-clock runs of each method per cell.

    Only the approximation step is timed; no exact decomposition or
    distance is computed, so ``delta`` and related columns stay blank.
    Cells always run serially, one at a time, so measurements never
    contend with each other; SKETCHPCA_PARALLEL is ignored here.
    """
    rows = []
    for seed in cfg.seeds:
        x_raw, label, pd_shift = _realize(cfg, seed)
        x = center_columns(x_raw)
        n, p = x.shape
        for d in cfg.d_list:
            for l in _grid_for(cfg, d, p):
                for m in cfg.methods:
                    base = dict(condition=label, n=n, p=p, d=d, l=l,
                                method=m, seed=seed, pd_shift=pd_shift)
                    try:
                        if m != "exact":
                            sel = sample_uniform(
                                p if METHOD_AXIS[m] == "columns" else n,
                                l,
                                mix_seed(seed, l, 0 if METHOD_AXIS[m] == "columns" else 1),
                                METHOD_AXIS[m],
                            )
                        samples = []
                        for _ in range(cfg.runs):
                            t0 = time.perf_counter()
                            if m == "exact":
                                exact_pca(x, d)
                            else:
                                compute_method(m, x, sel, route=cfg.route)
                            samples.append((time.perf_counter() - t0) * 1000.0)
                        rows.append(ResultRow(
                            **base, runtime_ms=statistics.median(samples), status="ok",
                        ))
                    except Exception as err:
                        rows.append(ResultRow(**base, status=_status_of(err)))
    if cfg.output is not None:
        write_results_csv(rows, cfg.output)
    return rows


def format_timing_table(rows):
    """Render timing rows as one text table per method: d down, l across."""
    methods = sorted({r.method for r in rows})
    blocks = []
    for m in methods:
        sub = [r for r in rows if r.method == m and r.runtime_ms is not None]
        if not sub:
            continue
        ds = sorted({r.d for r in sub})
        ls = sorted({r.l for r in sub})
        head = "d\\l " + "".join(f"{l:>10d}" for l in ls)
        lines = [f"method={m} (ms, median over runs and seeds)", head]
        for d in ds:
            vals = []
            for l in ls:
                hits = [r.runtime_ms for r in sub if r.d == d and r.l == l]
                vals.append(f"{statistics.median(hits):>10.2f}" if hits else " " * 10)
            lines.append(f"{d:<4d}" + "".join(vals))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_results_csv(rows, path):
    """Write rows to ``path`` with the fixed column schema."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])


_INT_COLS = {"n", "p", "d", "l", "seed"}
_FLOAT_COLS = {"delta", "relative_error", "bound_total", "gap", "pd_shift", "runtime_ms"}


def read_results_csv(path):
    """Parse a results CSV back into ResultRow objects."""
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty results file") from None
        if header != CSV_COLUMNS:
            raise FormatError(f"{path}: unexpected header {header}")
        rows = []
        for i, rec in enumerate(reader, start=2):
            if len(rec) != len(CSV_COLUMNS):
                raise FormatError(f"{path}: line {i} has {len(rec)} fields, expected {len(CSV_COLUMNS)}")
            kv = dict(zip(CSV_COLUMNS, rec))
            for c in _INT_COLS:
                kv[c] = int(kv[c])
            for c in _FLOAT_COLS:
                kv[c] = float(kv[c]) if kv[c] != "" else None
            if kv["pd_shift"] is None:
                kv["pd_shift"] = 0.0
            rows.append(ResultRow(**kv))
    return rows


def plot_relative_error(rows, out_path):
    """Plot mean relative error against sketch size, one line per (method, d).

    Output format follows the file extension (svg and pdf stay vector).
    """
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    usable = [r for r in rows if r.relative_error is not None]
    if not usable:
        raise ValueError("no rows with a relative_error value to plot")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for method, d in sorted({(r.method, r.d) for r in usable}):
        pts = {}
        for r in usable:
            if r.method == method and r.d == d:
                pts.setdefault(r.l, []).append(r.relative_error)
        ls = sorted(pts)
        means = [statistics.fmean(pts[l]) for l in ls]
        ax.plot(ls, means, marker="o", label=f"{method}, d={d}")
    ax.axhline(1.0, color="gray", linestyle="--", linewidth=0.8)
    ax.set_xlabel("sketch size l")
    ax.set_ylabel("relative subspace error")
    ax.set_title(usable[0].condition)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
