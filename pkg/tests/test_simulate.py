"""Precision-matrix generators and the seeded Gaussian sampler.

Ground truths: eigenvalue floors against numpy's symmetric eigensolver,
band edge counts against the closed form b(2p-1-b)/2, and the sampler
against empirical moments at pilot-calibrated tolerances.
"""
import numpy as np
import pytest

from sketchpca.simulate import (
    MIN_EIGENVALUE,
    PrecisionSpec,
    pd_repair,
    precision_band,
    precision_random,
    sample_mvn,
)


def edge_count(omega):
    return int(np.count_nonzero(np.triu(omega, k=1)))


class TestPdRepair:
    def test_identity_untouched(self):
        out, shift = pd_repair(np.eye(4))
        assert shift == 0.0
        np.testing.assert_array_equal(out, np.eye(4))

    def test_singular_all_ones(self):
        # eigenvalues {0, 2}, so the shift is exactly the floor
        out, shift = pd_repair(np.ones((2, 2)))
        assert shift == pytest.approx(MIN_EIGENVALUE, abs=1e-15)
        assert np.linalg.eigvalsh(out)[0] >= MIN_EIGENVALUE - 1e-9

    def test_floor_holds_for_random_symmetric(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            a = rng.normal(size=(8, 8))
            a = a + a.T
            out, shift = pd_repair(a)
            assert shift >= 0.0
            assert np.linalg.eigvalsh(out)[0] >= MIN_EIGENVALUE - 1e-9

    def test_off_diagonal_entries_unchanged(self):
        a = np.ones((5, 5))
        out, _ = pd_repair(a)
        np.testing.assert_array_equal(np.triu(out, 1), np.triu(a, 1))

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            pd_repair(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestPrecisionRandom:
    def test_zero_probability_gives_identity(self):
        omega, spec = precision_random(6, 0.0, seed=1)
        np.testing.assert_array_equal(omega, np.eye(6))
        assert spec.pd_shift == 0.0

    def test_full_probability_repaired(self):
        omega, spec = precision_random(3, 1.0, seed=2)
        assert spec.pd_shift > 0.0
        assert np.linalg.eigvalsh(omega)[0] >= MIN_EIGENVALUE - 1e-9
        np.testing.assert_array_equal(np.triu(omega, 1), np.triu(np.ones((3, 3)), 1))

    def test_edge_density_tracks_probability(self):
        pairs = 200 * 199 // 2
        for seed in range(50):
            omega, _ = precision_random(200, 0.01, seed=seed)
            density = edge_count(omega) / pairs
            assert 0.005 <= density <= 0.015

    def test_symmetric_with_unit_diagonal_before_shift(self):
        omega, spec = precision_random(40, 0.3, seed=7)
        np.testing.assert_array_equal(omega, omega.T)
        np.testing.assert_allclose(np.diag(omega), 1.0 + spec.pd_shift, rtol=0, atol=1e-15)
        off = omega - np.diag(np.diag(omega))
        assert set(np.unique(off)) <= {0.0, 1.0}

    def test_deterministic_per_seed(self):
        a, sa = precision_random(30, 0.2, seed=11)
        b, sb = precision_random(30, 0.2, seed=11)
        c, _ = precision_random(30, 0.2, seed=12)
        np.testing.assert_array_equal(a, b)
        assert sa == sb
        assert not np.array_equal(a, c)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError, match="integer >= 2"):
            precision_random(1, 0.5, seed=0)
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            precision_random(5, 1.5, seed=0)
        with pytest.raises(ValueError):
            precision_random(5, -0.1, seed=0)

    def test_spec_fields(self):
        _, spec = precision_random(10, 0.01, seed=3)
        assert (spec.model, spec.p, spec.x, spec.seed) == ("random", 10, 0.01, 3)
        assert spec.label == "random(0.01)"


class TestPrecisionBand:
    def test_edge_count_at_benchmark_scale(self):
        omega, _ = precision_band(200, 50)
        assert edge_count(omega) == 8725

    def test_edge_count_formula(self):
        for p in (100, 200):
            for b in (1, 5, 50):
                omega, _ = precision_band(p, b)
                assert edge_count(omega) == b * (2 * p - 1 - b) // 2

    def test_tridiagonal_case(self):
        omega, spec = precision_band(3, 1)
        assert edge_count(omega) == 2
        expected = np.array([[1.0, 1, 0], [1, 1, 1], [0, 1, 1]])
        np.testing.assert_array_equal(omega - spec.pd_shift * np.eye(3), expected)

    def test_dense_band_triggers_repair(self):
        omega, spec = precision_band(6, 5)
        assert spec.pd_shift > 0.0
        assert np.linalg.eigvalsh(omega)[0] >= MIN_EIGENVALUE - 1e-9

    def test_rejects_bad_bandwidth(self):
        with pytest.raises(ValueError, match="1 <= b < p"):
            precision_band(5, 5)
        with pytest.raises(ValueError, match="1 <= b < p"):
            precision_band(5, 0)

    def test_spec_fields(self):
        _, spec = precision_band(120, 50)
        assert (spec.model, spec.p, spec.b, spec.seed) == ("band", 120, 50, None)
        assert spec.label == "band(50)"


class TestSampleMvn:
    def test_identity_precision_column_means(self):
        n = 2000
        x = sample_mvn(n, np.eye(100), seed=3)
        assert x.shape == (n, 100)
        within = np.abs(x.mean(axis=0)) <= 4.0 / np.sqrt(n)
        assert within.mean() >= 0.95

    def test_deterministic_per_seed(self):
        omega, _ = precision_band(20, 3)
        a = sample_mvn(100, omega, seed=5)
        b = sample_mvn(100, omega, seed=5)
        c = sample_mvn(100, omega, seed=6)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_covariance_recovery(self):
        omega, _ = precision_band(50, 5)
        sigma = np.linalg.inv(omega)
        x = sample_mvn(20000, omega, seed=0)
        emp = np.cov(x, rowvar=False)
        rel = np.linalg.norm(emp - sigma) / np.linalg.norm(sigma)
        assert rel <= 0.1

    def test_indefinite_precision_names_the_fix(self):
        bad = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues -1 and 3
        with pytest.raises(ValueError, match="pd_repair"):
            sample_mvn(10, bad, seed=0)

    def test_rejects_bad_row_count(self):
        with pytest.raises(ValueError, match="positive integer"):
            sample_mvn(0, np.eye(3), seed=0)


class TestPrecisionSpec:
    def test_is_frozen(self):
        spec = PrecisionSpec(model="band", p=10, b=2)
        with pytest.raises(AttributeError):
            spec.p = 11
