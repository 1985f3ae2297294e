import numpy as np
import pytest
from scipy.spatial.distance import pdist

from rphsa.errors import DegenerateInput, DimensionMismatch, InvalidDims
from rphsa.numerics import make_rng
from rphsa.projection import (ProjectionMatrix, build_rp_rbf, generate_projection,
                              jl_distortion, predict_ensemble, project)
from rphsa.surrogate import TrainingSet, predict_rbf, train_rbf


class TestGenerateProjection:
    def test_square_is_orthogonal(self):
        p = generate_projection(3, 3, make_rng(0))
        assert abs(abs(np.linalg.det(p.matrix)) - 1.0) < 1e-9

    def test_row_orthonormality(self):
        p = generate_projection(50, 100, make_rng(1))
        err = np.abs(p.matrix @ p.matrix.T - np.eye(50)).max()
        assert err < 1e-10

    def test_invalid_dims(self):
        with pytest.raises(InvalidDims):
            generate_projection(5, 3, make_rng(0))
        with pytest.raises(InvalidDims):
            generate_projection(0, 3, make_rng(0))

    def test_deterministic(self):
        a = generate_projection(4, 10, make_rng(3))
        b = generate_projection(4, 10, make_rng(3))
        np.testing.assert_array_equal(a.matrix, b.matrix)

    def test_projected_norm_expectation(self):
        # E[||Px||^2] = k/d for unit vectors x and an orthonormal k-frame.
        rng = make_rng(17)
        p = generate_projection(50, 100, rng)
        x = rng.standard_normal((1000, 100))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        norms = np.einsum("ij,ij->i", x @ p.matrix.T, x @ p.matrix.T)
        assert abs(norms.mean() - 0.5) < 0.02


class TestProject:
    def test_coordinate_selection(self):
        p = ProjectionMatrix(np.eye(5)[:2], 2, 5)
        x = make_rng(4).standard_normal((5, 7))
        np.testing.assert_array_equal(project(p, x), x[:2])

    def test_linearity(self):
        rng = make_rng(5)
        p = generate_projection(3, 8, rng)
        x = rng.standard_normal((8, 4))
        y = rng.standard_normal((8, 4))
        lhs = project(p, 2.0 * x + 3.0 * y)
        rhs = 2.0 * project(p, x) + 3.0 * project(p, y)
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_distance_contraction(self):
        rng = make_rng(6)
        p = generate_projection(20, 60, rng)
        x = rng.uniform(-5, 5, size=(60, 100))
        orig = pdist(x.T)
        proj = pdist(project(p, x).T)
        assert np.all(proj <= orig * (1 + 1e-10))

    def test_dimension_mismatch(self):
        p = generate_projection(2, 5, make_rng(0))
        with pytest.raises(DimensionMismatch):
            project(p, np.zeros((4, 3)))


class TestJlDistortion:
    def test_square_projection_is_isometry(self):
        rng = make_rng(7)
        p = generate_projection(10, 10, rng)
        x = rng.standard_normal((10, 30))
        report = jl_distortion(p, x, scale_correction=True)
        assert np.abs(report.ratios - 1.0).max() < 1e-9
        assert report.epsilon < 1e-9

    def test_duplicate_columns_rejected(self):
        p = generate_projection(2, 4, make_rng(8))
        x = np.zeros((4, 3))
        x[:, 1] = 1.0
        with pytest.raises(DegenerateInput):
            jl_distortion(p, x)

    def test_corrected_ratios_concentrate(self):
        # d=100 -> k=50 keeps >= 95% of pair ratios within [0.5, 1.5].
        fracs = []
        for seed in range(20):
            rng = make_rng(100 + seed)
            p = generate_projection(50, 100, rng)
            x = rng.uniform(-1, 1, size=(100, 100))
            report = jl_distortion(p, x, scale_correction=True)
            fracs.append(np.mean((report.ratios >= 0.5) & (report.ratios <= 1.5)))
        assert np.mean(fracs) >= 0.95

    def test_uncorrected_mean_near_k_over_d(self):
        rng = make_rng(9)
        p = generate_projection(50, 100, rng)
        x = rng.uniform(-1, 1, size=(100, 50))
        report = jl_distortion(p, x, scale_correction=False)
        assert abs(report.mean - 0.5) < 0.05
        assert not report.corrected


class TestRpRbfEnsemble:
    def _training_set(self, rng, d=20, n=30):
        samples = rng.uniform(-5, 5, size=(d, n))
        fitness = rng.standard_normal(n)
        return TrainingSet(samples, fitness)

    def test_identity_projection_reduces_to_plain_rbf(self):
        rng = make_rng(10)
        data = self._training_set(rng, d=6, n=15)
        ens = build_rp_rbf(data, 6, 1, make_rng(0),
                           projections=[ProjectionMatrix.identity(6)])
        plain = train_rbf(data)
        queries = rng.uniform(-5, 5, size=(10, 6))
        np.testing.assert_allclose(predict_ensemble(ens, queries),
                                   predict_rbf(plain, queries), atol=1e-9)

    def test_interpolates_at_training_points(self):
        rng = make_rng(11)
        data = self._training_set(rng, d=20, n=40)
        ens = build_rp_rbf(data, 8, 5, rng)
        preds = predict_ensemble(ens, data.samples.T)
        rel = np.abs(preds - data.fitness) / np.maximum(1.0, np.abs(data.fitness))
        assert rel.max() < 1e-6

    def test_prediction_is_mean_of_members(self):
        rng = make_rng(12)
        samples = rng.uniform(-5, 5, size=(100, 100))
        fitness = rng.standard_normal(100)
        ens = build_rp_rbf(TrainingSet(samples, fitness), 50, 8, rng)
        queries = rng.uniform(-5, 5, size=(10, 100))
        manual = np.zeros(10)
        for p, model in ens.members:
            manual += predict_rbf(model, queries @ p.matrix.T)
        manual /= ens.m
        np.testing.assert_allclose(predict_ensemble(ens, queries), manual, atol=1e-12)

    def test_constant_fitness(self):
        rng = make_rng(13)
        samples = rng.uniform(-2, 2, size=(10, 12))
        ens = build_rp_rbf(TrainingSet(samples, np.full(12, 3.0)), 4, 3, rng)
        preds = predict_ensemble(ens, samples.T)
        np.testing.assert_allclose(preds, 3.0, atol=1e-6)

    def test_single_member_equals_submodel(self):
        rng = make_rng(14)
        data = self._training_set(rng, d=9, n=20)
        ens = build_rp_rbf(data, 4, 1, rng)
        p, model = ens.members[0]
        x = rng.uniform(-5, 5, size=9)
        assert predict_ensemble(ens, x) == pytest.approx(
            predict_rbf(model, p.matrix @ x), abs=1e-12)

    def test_deterministic_given_seed(self):
        rng_data = make_rng(15)
        data = self._training_set(rng_data, d=12, n=25)
        a = build_rp_rbf(data, 5, 4, make_rng(99))
        b = build_rp_rbf(data, 5, 4, make_rng(99))
        for (pa, ma), (pb, mb) in zip(a.members, b.members):
            np.testing.assert_array_equal(pa.matrix, pb.matrix)
            np.testing.assert_array_equal(ma.weights, mb.weights)

    def test_member_count_and_shared_dims(self):
        rng = make_rng(16)
        data = self._training_set(rng, d=10, n=20)
        ens = build_rp_rbf(data, 3, 6, rng)
        assert ens.m == 6 and len(ens.members) == 6
        assert all(p.d == 10 and p.k == 3 for p, _ in ens.members)
        assert all(m.dim == 3 for _, m in ens.members)

    def test_invalid_k(self):
        rng = make_rng(17)
        data = self._training_set(rng, d=5, n=10)
        with pytest.raises(InvalidDims):
            build_rp_rbf(data, 9, 2, rng)

    def test_dimension_mismatch_on_predict(self):
        rng = make_rng(18)
        data = self._training_set(rng, d=5, n=10)
        ens = build_rp_rbf(data, 2, 2, rng)
        with pytest.raises(DimensionMismatch):
            predict_ensemble(ens, np.zeros(4))
