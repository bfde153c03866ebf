import math

import numpy as np
import pytest

from pcmkit.dataset import DataMatrix
from pcmkit.errors import DegenerateDataError
from pcmkit.fcm import FcmConfig, fcm_cluster, init_gamma_pcm
from pcmkit.pcm import (
    PcmConfig,
    PcmState,
    coincident_prototype_pairs,
    pcm_membership_update,
    pcm_objective,
    pcm_prototype_update,
    pcm_run,
    run,
)

from conftest import random_blobs

PCM_U_D2_G5 = 0.44932896411722156   # exp(-0.8)


def _objective_loops(points, theta, u, gamma):
    """Independent double-sum re-implementation of the objective."""
    total = 0.0
    for j in range(theta.shape[0]):
        for i in range(points.shape[0]):
            d2 = float(((points[i] - theta[j]) ** 2).sum())
            total += u[i, j] * d2 + gamma[j] * (u[i, j] * math.log(u[i, j]) - u[i, j])
    return total


class TestObjective:
    def test_point_at_prototype(self):
        state = PcmState(
            prototypes=np.array([[0.0]]),
            memberships=np.array([[1.0]]),
            gamma=np.array([1.0]),
        )
        assert pcm_objective(state, np.array([[0.0]])) == pytest.approx(-1.0, abs=0)

    def test_stationary_membership_identity(self):
        # u = exp(-d^2/gamma) makes the per-point term -gamma*exp(-d^2/gamma);
        # at d = gamma = 1 that is -1/e.
        u = math.exp(-1.0)
        state = PcmState(
            prototypes=np.array([[0.0]]),
            memberships=np.array([[u]]),
            gamma=np.array([1.0]),
        )
        assert pcm_objective(state, np.array([[1.0]])) == pytest.approx(
            -math.exp(-1.0), abs=1e-15
        )

    def test_matches_independent_summation(self):
        rng = np.random.default_rng(3)
        points = rng.standard_normal((5, 2))
        theta = rng.standard_normal((2, 2))
        gamma = np.array([0.7, 2.2])
        u = pcm_membership_update(points, theta, gamma)
        state = PcmState(prototypes=theta, memberships=u, gamma=gamma)
        assert pcm_objective(state, points) == pytest.approx(
            _objective_loops(points, theta, u, gamma), rel=1e-12
        )

    def test_rejects_nonpositive_membership(self):
        state = PcmState(
            prototypes=np.array([[0.0]]),
            memberships=np.array([[0.0]]),
            gamma=np.array([1.0]),
        )
        with pytest.raises(ValueError):
            pcm_objective(state, np.array([[1.0]]))

    def test_per_cluster_terms_independent(self):
        # perturbing cluster k's prototype must leave the other clusters'
        # objective contributions unchanged
        rng = np.random.default_rng(8)
        points = rng.standard_normal((12, 2))
        theta = rng.standard_normal((3, 2))
        gamma = np.array([1.0, 2.0, 0.5])
        u = pcm_membership_update(points, theta, gamma)

        def per_cluster(ptheta):
            terms = []
            for j in range(3):
                d2 = ((points - ptheta[j]) ** 2).sum(axis=1)
                terms.append(
                    float((u[:, j] * d2).sum())
                    + gamma[j] * float((u[:, j] * np.log(u[:, j]) - u[:, j]).sum())
                )
            return terms

        base = per_cluster(theta)
        theta_perturbed = theta.copy()
        theta_perturbed[1] += 10.0
        after = per_cluster(theta_perturbed)
        assert after[0] == base[0] and after[2] == base[2] and after[1] != base[1]
        state = PcmState(prototypes=theta, memberships=u, gamma=gamma)
        assert pcm_objective(state, points) == pytest.approx(sum(base), rel=1e-12)


class TestMembershipUpdate:
    def test_zero_distance(self):
        u = pcm_membership_update(np.array([[2.0, 2.0]]), np.array([[2.0, 2.0]]), np.array([3.0]))
        assert u[0, 0] == 1.0

    def test_d_squared_equal_gamma(self):
        u = pcm_membership_update(np.array([[2.0]]), np.array([[0.0]]), np.array([4.0]))
        assert u[0, 0] == pytest.approx(math.exp(-1.0), abs=0)

    def test_direct_value(self):
        u = pcm_membership_update(np.array([[2.0]]), np.array([[0.0]]), np.array([5.0]))
        assert u[0, 0] == pytest.approx(PCM_U_D2_G5, abs=1e-15)

    def test_translation_invariance(self):
        rng = np.random.default_rng(5)
        points = rng.standard_normal((20, 2))
        theta = rng.standard_normal((3, 2))
        gamma = np.array([1.0, 0.5, 2.0])
        shift = np.array([100.0, -40.0])
        a = pcm_membership_update(points, theta, gamma)
        b = pcm_membership_update(points + shift, theta + shift, gamma)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)

    def test_rejects_bad_gamma(self):
        with pytest.raises(ValueError):
            pcm_membership_update(np.array([[1.0]]), np.array([[0.0]]), np.array([0.0]))


class TestPrototypeUpdate:
    def test_equal_memberships_give_mean(self):
        points = np.array([[0.0], [1.0], [5.0]])
        theta = pcm_prototype_update(points, np.full((3, 1), 0.5))
        np.testing.assert_allclose(theta, [[2.0]])

    def test_epsilon_mass_limit(self):
        points = np.array([[0.0], [10.0]])
        theta = pcm_prototype_update(points, np.array([[1.0], [1e-12]]))
        assert abs(theta[0, 0]) < 1e-10

    def test_brute_force_weighted_mean(self):
        points = np.array([[0.0], [1.0], [10.0]])
        u = np.array([[1.0], [1.0], [0.1]])
        # independent computation: sum(u*x)/sum(u) = 2.0/2.1
        expected = sum(float(w * x) for w, x in zip(u[:, 0], points[:, 0])) / float(u.sum())
        theta = pcm_prototype_update(points, u)
        assert theta[0, 0] == pytest.approx(expected, rel=1e-15)
        assert expected == pytest.approx(2.0 / 2.1, rel=1e-15)

    def test_zero_mass_rejected(self):
        with pytest.raises(DegenerateDataError):
            pcm_prototype_update(np.array([[1.0], [2.0]]), np.zeros((2, 1)))


class TestRun:
    def test_far_separated_blobs(self):
        rng = np.random.default_rng(17)
        sigma, n_per = 0.5, 200
        centers = np.array([[0.0, 0.0], [40.0, 40.0]])
        points = np.vstack([c + sigma * rng.standard_normal((n_per, 2)) for c in centers])
        fcm = fcm_cluster(points, FcmConfig(c=2, seed=1))
        gamma = init_gamma_pcm(points, fcm)
        model = pcm_run(points, fcm.prototypes, gamma)
        assert model.converged
        dist = np.linalg.norm(model.prototypes[:, None, :] - centers[None, :, :], axis=2)
        assert sorted(dist.argmin(axis=1).tolist()) == [0, 1]
        # statistical bound from the generator: 3*sigma/sqrt(n)
        assert dist.min(axis=1).max() <= 3 * sigma / math.sqrt(n_per)

    def test_single_cluster_converges(self):
        rng = np.random.default_rng(2)
        points = rng.standard_normal((60, 2))
        fcm = fcm_cluster(points, FcmConfig(c=1, seed=0))
        model = pcm_run(points, fcm.prototypes, init_gamma_pcm(points, fcm))
        assert model.converged
        assert model.n_clusters == 1

    def test_coincident_prototypes_inside_big_cluster(self, dataset1):
        # both prototypes seeded inside the broad cluster: mode-seeking
        # drives them to the same dense region (they are not merged)
        theta0 = np.array([[4.0, -1.0], [6.0, 1.0]])
        gamma = np.array([13.7, 13.7])   # roughly 2*sigma^2 of the broad cluster
        model = pcm_run(dataset1, theta0, gamma)
        d = float(np.linalg.norm(model.prototypes[0] - model.prototypes[1]))
        assert d < 0.5
        assert coincident_prototype_pairs(model.prototypes, 0.5) == [(0, 1)]
        assert model.n_clusters == 2   # no elimination in classic PCM

    def test_objective_descent_along_history(self):
        for seed in range(5):
            points = random_blobs(np.random.default_rng(200 + seed), n_per=50)
            fcm = fcm_cluster(points, FcmConfig(c=2, seed=seed))
            model = pcm_run(points, fcm.prototypes, init_gamma_pcm(points, fcm))
            hist = model.objective_history
            assert len(hist) == model.n_iter
            for a, b in zip(hist, hist[1:]):
                assert b <= a + 1e-9 * abs(a)

    def test_run_config_entry_point(self, dataset1):
        model = run(dataset1, PcmConfig(c=2, seed=11))
        assert model.algorithm == "pcm"
        assert model.n_clusters == 2
        assert model.bandwidth_kind == "gamma"
        assert len(model.history) == model.n_iter
