"""Estimator wrapper: sklearn conventions over the functional methods.

Cross-library oracle: with method="exact" the fitted span and scores
must match sklearn's PCA (eigenvalues differ by the n vs n-1 variance
convention, checked explicitly).
"""
import numpy as np
import pytest
from sklearn.base import clone
from sklearn.decomposition import PCA
from sklearn.exceptions import NotFittedError

from sketchpca.approx import truncate, v_nys_stable
from sketchpca.estimator import SketchedPCA
from sketchpca.sketching import sample_uniform
from sketchpca.subspace import delta, projector


def data(seed=0, n=60, p=30):
    return np.random.default_rng(seed).normal(size=(n, p))


class TestFit:
    def test_matches_functional_route(self):
        x = data()
        est = SketchedPCA(n_components=3, sketch_size=10, random_state=7).fit(x)
        xc = x - x.mean(axis=0)
        sel = sample_uniform(30, 10, 7, "columns")
        basis = truncate(v_nys_stable(xc, sel), 3)
        np.testing.assert_array_equal(est.components_, basis.vectors.T)
        np.testing.assert_array_equal(est.eigenvalues_, basis.eigvals)
        assert est.selection_.indices.tolist() == sel.indices.tolist()
        assert est.n_features_in_ == 30

    def test_exact_method_spans_sklearn_pca(self):
        x = data(1)
        est = SketchedPCA(n_components=4, method="exact").fit(x)
        ref = PCA(n_components=4).fit(x)
        gap = delta(projector(est.components_.T, 4), projector(ref.components_.T, 4))
        assert gap <= 1e-8
        n = x.shape[0]
        np.testing.assert_allclose(
            est.eigenvalues_, ref.explained_variance_ * (n - 1) / n, rtol=1e-10
        )
        assert est.selection_ is None

    def test_deterministic_per_random_state(self):
        x = data(2)
        a = SketchedPCA(n_components=2, sketch_size=8, random_state=5).fit(x)
        b = SketchedPCA(n_components=2, sketch_size=8, random_state=5).fit(x)
        c = SketchedPCA(n_components=2, sketch_size=8, random_state=6).fit(x)
        np.testing.assert_array_equal(a.components_, b.components_)
        assert a.selection_.indices.tolist() != c.selection_.indices.tolist()

    def test_none_random_state_draws_fresh_seed(self):
        x = data(3)
        a = SketchedPCA(n_components=2, sketch_size=8).fit(x)
        b = SketchedPCA(n_components=2, sketch_size=8).fit(x)
        assert a.selection_.seed != b.selection_.seed

    def test_default_sketch_size(self):
        x = data(4, p=50)
        est = SketchedPCA(n_components=2, random_state=0).fit(x)
        assert est.selection_.l == 30  # 15 * d
        est = SketchedPCA(n_components=5, random_state=0).fit(x)
        assert est.selection_.l == 50  # capped at n_features

    def test_center_false_keeps_raw_columns(self):
        x = data(5) + 3.0
        est = SketchedPCA(n_components=2, sketch_size=6, center=False, random_state=1).fit(x)
        np.testing.assert_array_equal(est.mean_, np.zeros(30))
        np.testing.assert_allclose(est.transform(x), x @ est.components_.T, rtol=0, atol=0)

    def test_parameter_validation(self):
        x = data(6)
        with pytest.raises(ValueError, match="n_components"):
            SketchedPCA(n_components=0).fit(x)
        with pytest.raises(ValueError, match="n_components"):
            SketchedPCA(n_components=31).fit(x)
        with pytest.raises(ValueError, match="method"):
            SketchedPCA(method="u_best").fit(x)
        with pytest.raises(ValueError, match="route"):
            SketchedPCA(route="fast").fit(x)
        with pytest.raises(ValueError, match="sketch_size"):
            SketchedPCA(sketch_size=0).fit(x)
        with pytest.raises(ValueError, match="sketch_size"):
            SketchedPCA(sketch_size=31).fit(x)


class TestTransform:
    def test_projects_into_component_coordinates(self):
        x = data(7)
        est = SketchedPCA(n_components=3, method="exact").fit(x)
        got = est.transform(x)
        ref = PCA(n_components=3).fit(x).transform(x)
        # per-component sign freedom only
        np.testing.assert_allclose(np.abs(got), np.abs(ref), atol=1e-8)

    def test_fit_transform_equals_fit_then_transform(self):
        x = data(8)
        a = SketchedPCA(n_components=2, sketch_size=8, random_state=3).fit_transform(x)
        b = SketchedPCA(n_components=2, sketch_size=8, random_state=3).fit(x).transform(x)
        np.testing.assert_array_equal(a, b)

    def test_requires_fit(self):
        with pytest.raises(NotFittedError):
            SketchedPCA().transform(data())

    def test_rejects_feature_mismatch(self):
        est = SketchedPCA(n_components=2, sketch_size=5, random_state=0).fit(data())
        with pytest.raises(ValueError, match="features"):
            est.transform(np.zeros((4, 29)))


class TestSklearnProtocol:
    def test_get_params_round_trip(self):
        est = SketchedPCA(n_components=4, sketch_size=12, method="v_cs", random_state=9)
        params = est.get_params()
        assert params["n_components"] == 4
        assert params["method"] == "v_cs"
        again = SketchedPCA(**params)
        assert again.get_params() == params

    def test_clone_preserves_params_and_forgets_fit(self):
        est = SketchedPCA(n_components=2, sketch_size=6, random_state=1).fit(data())
        fresh = clone(est)
        assert fresh.get_params() == est.get_params()
        assert not hasattr(fresh, "components_")

    def test_set_params(self):
        est = SketchedPCA().set_params(n_components=5, method="exact")
        assert est.n_components == 5 and est.method == "exact"
