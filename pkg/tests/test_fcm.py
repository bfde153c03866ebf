import numpy as np
import pytest

from pcmkit.dataset import DataMatrix
from pcmkit.errors import DegenerateDataError
from pcmkit.fcm import FcmConfig, FcmResult, fcm_cluster, init_eta, init_gamma_pcm

from conftest import random_blobs


def test_two_point_symmetry():
    data = np.array([[-1.0], [1.0]])
    result = fcm_cluster(data, FcmConfig(c=2, seed=0))
    assert sorted(result.prototypes.ravel().tolist()) == [-1.0, 1.0]
    # each point crisp on its own prototype
    assert np.all(result.memberships.max(axis=1) > 0.999)


def test_single_cluster_is_grand_mean():
    rng = np.random.default_rng(0)
    data = rng.standard_normal((40, 3))
    result = fcm_cluster(data, FcmConfig(c=1, seed=0))
    np.testing.assert_allclose(result.prototypes[0], data.mean(axis=0), atol=1e-12)
    np.testing.assert_allclose(result.memberships, 1.0)


def test_dataset1_prototypes_near_distinct_truth_centers(dataset1, dataset1_fcm2):
    # FCM's relative memberships drag the tight cluster's prototype
    # toward the big one, so the fit is coarse; what matters is that the
    # two prototypes land in distinct physical clusters.
    dist = np.linalg.norm(
        dataset1_fcm2.prototypes[:, None, :] - dataset1.truth.centers[None, :, :], axis=2
    )
    assignment = dist.argmin(axis=1)
    assert sorted(assignment.tolist()) == [0, 1]
    assert dist.min(axis=1).max() < 2.5


def test_row_sums_one_every_iteration(dataset1, dataset1_fcm2):
    assert dataset1_fcm2.n_iter >= 1
    assert max(dataset1_fcm2.row_sum_dev_history) <= 1e-12


def test_objective_non_increasing():
    for seed in range(5):
        data = random_blobs(np.random.default_rng(seed), n_per=40)
        result = fcm_cluster(data, FcmConfig(c=3, seed=seed))
        hist = result.objective_history
        for a, b in zip(hist, hist[1:]):
            assert b <= a + 1e-9 * abs(a)


def test_determinism():
    data = random_blobs(np.random.default_rng(1))
    a = fcm_cluster(data, FcmConfig(c=2, seed=9))
    b = fcm_cluster(data, FcmConfig(c=2, seed=9))
    np.testing.assert_array_equal(a.prototypes, b.prototypes)
    np.testing.assert_array_equal(a.memberships, b.memberships)
    assert a.n_iter == b.n_iter


def test_zero_distance_membership_is_crisp():
    # duplicate point exactly on a sampled prototype
    data = np.array([[0.0], [0.0], [5.0]])
    result = fcm_cluster(data, FcmConfig(c=2, seed=0, max_iter=1))
    rows = result.memberships.sum(axis=1)
    np.testing.assert_allclose(rows, 1.0, atol=1e-12)


def test_c_greater_than_n_rejected():
    with pytest.raises(DegenerateDataError):
        fcm_cluster(np.array([[0.0], [1.0]]), FcmConfig(c=3, seed=0))


def test_identical_points_rejected():
    with pytest.raises(DegenerateDataError):
        fcm_cluster(np.ones((5, 2)), FcmConfig(c=2, seed=0))


def test_config_validation():
    with pytest.raises(ValueError):
        FcmConfig(c=0)
    with pytest.raises(ValueError):
        FcmConfig(c=2, q=1.0)
    with pytest.raises(ValueError):
        FcmConfig(c=2, tol=0.0)


class TestInitGamma:
    def test_two_point_arithmetic(self):
        # points at distance 1 and 3 from the prototype, unit memberships
        data = np.array([[1.0], [-3.0]])
        fcm = FcmResult(prototypes=np.array([[0.0]]), memberships=np.ones((2, 1)))
        np.testing.assert_allclose(init_gamma_pcm(data, fcm), [5.0])

    def test_zero_moment_rejected(self):
        data = np.zeros((4, 2))
        fcm = FcmResult(prototypes=np.zeros((1, 2)), memberships=np.ones((4, 1)))
        with pytest.raises(DegenerateDataError):
            init_gamma_pcm(data, fcm)

    def test_zero_total_membership_rejected(self):
        data = np.array([[1.0], [2.0]])
        fcm = FcmResult(
            prototypes=np.array([[0.0], [9.0]]),
            memberships=np.array([[1.0, 0.0], [1.0, 0.0]]),
        )
        with pytest.raises(DegenerateDataError):
            init_gamma_pcm(data, fcm)

    def test_dataset1_gamma_ordering_and_independent_summation(self, dataset1, dataset1_fcm2):
        gamma = init_gamma_pcm(dataset1, dataset1_fcm2)
        # independent re-summation
        u = dataset1_fcm2.memberships
        theta = dataset1_fcm2.prototypes
        for j in range(2):
            d2 = ((dataset1.points - theta[j]) ** 2).sum(axis=1)
            expected = float((u[:, j] * d2).sum() / u[:, j].sum())
            assert gamma[j] == pytest.approx(expected, rel=1e-12)
        # The relative FCM memberships let the 1000-point broad cluster
        # contaminate the tight prototype's second moment across ~15
        # units of distance, so the TIGHT cluster's prototype ends up
        # with the larger gamma.  This unreliability is exactly why the
        # adaptive algorithms re-estimate and rescale the bandwidth.
        dist = np.linalg.norm(theta[:, None, :] - dataset1.truth.centers[None, :, :], axis=2)
        tight = int(np.argmin(dist[:, 0]))
        assert gamma[tight] > gamma[1 - tight]


class TestInitEta:
    def test_two_point_arithmetic(self):
        data = np.array([[1.0], [-3.0]])
        fcm = FcmResult(prototypes=np.array([[0.0]]), memberships=np.ones((2, 1)))
        np.testing.assert_allclose(init_eta(data, fcm), [2.0])

    def test_single_point_at_prototype_gives_zero(self):
        data = np.array([[4.0, 4.0]])
        fcm = FcmResult(prototypes=np.array([[4.0, 4.0]]), memberships=np.ones((1, 1)))
        np.testing.assert_allclose(init_eta(data, fcm), [0.0])

    def test_dataset2_c10_band(self, dataset2, dataset2_fcm10):
        eta = init_eta(dataset2, dataset2_fcm10)
        assert np.all(eta > 0.0) and np.all(eta < 1.0)

    def test_jensen_bound_vs_gamma(self):
        for seed in range(6):
            data = random_blobs(np.random.default_rng(100 + seed), n_per=25)
            fcm = fcm_cluster(data, FcmConfig(c=3, seed=seed))
            eta = init_eta(data, fcm)
            gamma = init_gamma_pcm(data, fcm)
            assert np.all(eta <= np.sqrt(gamma) + 1e-12)
