"""Scikit-learn style wrapper around the feature-side sketch methods."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .approx import truncate, v_cs, v_nys_space, v_nys_stable
from .linalg import as_matrix, exact_pca
from .sketching import sample_uniform

__all__ = ["SketchedPCA"]


class SketchedPCA(BaseEstimator, TransformerMixin):
    """Approximate PCA fit from a seeded sketch of the feature columns.

    Fits a rank ``n_components`` basis for the column space of the
    (optionally centered) data using one of the feature-side methods:

    - ``"v_nys"``: Nystrom extension of the sampled block's eigenvectors.
      ``route`` picks the computation ("stable" via the SVD of the
      sampled columns, "space" via the small moment block).
    - ``"v_cs"``: column-sampling, an orthonormal basis.
    - ``"exact"``: full SVD, no sketching. Useful as a baseline.

    ``sketch_size`` is the number of sampled columns l; the default
    min(15 * n_components, n_features) mirrors the upper end of the
    standard experiment grid. ``random_state`` seeds the column draw;
    None picks a fresh seed.

    Attributes after fit: ``components_`` (n_components, n_features),
    ``eigenvalues_``, ``mean_``, ``selection_`` (None for exact),
    ``basis_``, ``n_features_in_``.
    """

    def __init__(self, n_components=2, sketch_size=None, method="v_nys",
                 route="stable", center=True, random_state=None):
        self.n_components = n_components
        self.sketch_size = sketch_size
        self.method = method
        self.route = route
        self.center = center
        self.random_state = random_state

    def _validated(self, x):
        x = as_matrix(np.asarray(x, dtype=np.float64), "X")
        return x

    def fit(self, X, y=None):
        x = self._validated(X)
        n, p = x.shape
        d = self.n_components
        if not isinstance(d, (int, np.integer)) or not 1 <= d <= p:
            raise ValueError(f"n_components must satisfy 1 <= d <= {p}, got {d!r}")
        if self.method not in ("v_nys", "v_cs", "exact"):
            raise ValueError(f"method must be 'v_nys', 'v_cs' or 'exact', got {self.method!r}")
        if self.route not in ("stable", "space"):
            raise ValueError(f"route must be 'stable' or 'space', got {self.route!r}")
        self.mean_ = x.mean(axis=0) if self.center else np.zeros(p)
        xc = x - self.mean_
        if self.method == "exact":
            basis = exact_pca(xc, d)
            self.selection_ = None
        else:
            l = self.sketch_size
            if l is None:
                l = min(15 * d, p)
            if not isinstance(l, (int, np.integer)) or not 1 <= l <= p:
                raise ValueError(f"sketch_size must satisfy 1 <= l <= {p}, got {l!r}")
            seed = self.random_state
            if seed is None:
                seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
            sel = sample_uniform(p, int(l), int(seed), "columns")
            if self.method == "v_cs":
                basis = v_cs(xc, sel)
            elif self.route == "stable":
                basis = v_nys_stable(xc, sel)
            else:
                basis = v_nys_space(xc, sel)
            basis = truncate(basis, d)
            self.selection_ = sel
        self.basis_ = basis
        self.components_ = basis.vectors.T.copy()
        self.eigenvalues_ = basis.eigvals.copy()
        self.n_features_in_ = p
        return self

    def transform(self, X):
        if not hasattr(self, "components_"):
            raise NotFittedError("this SketchedPCA instance is not fitted yet; call fit first")
        x = self._validated(X)
        if x.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {x.shape[1]} features but the model was fit with {self.n_features_in_}"
            )
        return (x - self.mean_) @ self.components_.T
