"""Backend parity: the Cython kernels must match the pure NumPy reference."""

import math

import numpy as np
import pytest

from pcmkit import kernels
from pcmkit.fuzzy import FuzzyBandwidth, corrected_bandwidth, marginal_membership

HAVE_CYTHON = "cython" in kernels.available_backends()

needs_cython = pytest.mark.skipif(not HAVE_CYTHON, reason="compiled kernel unavailable")


def _instances():
    rng = np.random.default_rng(123)
    for n, m, d in ((1, 1, 1), (17, 3, 2), (64, 5, 4)):
        points = rng.standard_normal((n, d)) * 3.0
        theta = rng.standard_normal((m, d))
        memberships = rng.random((n, m))
        eta = rng.random(m) + 0.2
        labels = rng.integers(0, m, size=n).astype(np.int64)
        yield points, theta, memberships, eta, labels


@needs_cython
class TestBackendParity:
    def setup_method(self):
        self.pure = kernels.get_backend("pure")
        self.cy = kernels.get_backend("cython")

    @staticmethod
    def _c(a):
        return np.ascontiguousarray(a, dtype=np.float64)

    def test_distance_matrix(self):
        for points, theta, *_ in _instances():
            a = self.pure.distance_matrix(self._c(points), self._c(theta))
            b = self.cy.distance_matrix(self._c(points), self._c(theta))
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)

    def test_pcm_membership(self):
        for points, theta, _, eta, _ in _instances():
            dist = self.pure.distance_matrix(self._c(points), self._c(theta))
            gamma = self._c(eta * eta)
            a = self.pure.pcm_membership(dist, gamma)
            b = self.cy.pcm_membership(dist, gamma)
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)

    def test_pcm_membership_flush(self):
        dist = np.array([[1000.0]])
        gamma = np.array([1.0])
        assert self.pure.pcm_membership(dist, gamma)[0, 0] == 0.0
        assert self.cy.pcm_membership(dist, gamma)[0, 0] == 0.0

    def test_marginal_membership(self):
        for points, theta, _, eta, _ in _instances():
            dist = self.pure.distance_matrix(self._c(points), self._c(theta))
            for sigma_v in (0.0, 0.4, 2.0):
                a = self.pure.marginal_membership_matrix(dist, self._c(eta), sigma_v)
                b = self.cy.marginal_membership_matrix(dist, self._c(eta), sigma_v)
                np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)

    def test_cut_weighted_means(self):
        for points, theta, memberships, *_ in _instances():
            for threshold in (0.0, 0.3, 0.99):
                ta, ua = self.pure.cut_weighted_means(
                    self._c(points), self._c(memberships), self._c(theta), threshold)
                tb, ub = self.cy.cut_weighted_means(
                    self._c(points), self._c(memberships), self._c(theta), threshold)
                np.testing.assert_array_equal(ua, ub)
                np.testing.assert_allclose(ta, tb, rtol=1e-10, atol=1e-12)

    def test_cut_weighted_means_empty_cut_freezes(self):
        points = np.array([[1.0], [2.0]])
        u = np.array([[0.1], [0.2]])
        theta_old = np.array([[99.0]])
        for backend in (self.pure, self.cy):
            theta, updated = backend.cut_weighted_means(
                self._c(points), self._c(u), self._c(theta_old), 0.5)
            assert theta[0, 0] == 99.0
            assert not updated[0]

    def test_label_mean_abs_dev(self):
        for points, theta, _, _, labels in _instances():
            m = theta.shape[0]
            ea, ca = self.pure.label_mean_abs_dev(self._c(points), labels, self._c(theta), m)
            eb, cb = self.cy.label_mean_abs_dev(self._c(points), labels, self._c(theta), m)
            np.testing.assert_array_equal(ca, cb)
            np.testing.assert_allclose(ea, eb, rtol=1e-10, atol=1e-14)

    def test_label_mean_abs_dev_empty_cluster(self):
        points = np.array([[0.0], [2.0]])
        labels = np.zeros(2, dtype=np.int64)
        theta = np.array([[1.0], [50.0]])
        for backend in (self.pure, self.cy):
            eta, counts = backend.label_mean_abs_dev(self._c(points), labels, self._c(theta), 2)
            np.testing.assert_allclose(eta, [1.0, 0.0])
            np.testing.assert_array_equal(counts, [2, 0])


class TestDispatch:
    def test_set_backend_round_trip(self):
        current = kernels.backend_name()
        previous = kernels.set_backend("pure")
        assert previous == current
        assert kernels.backend_name() == "pure"
        kernels.set_backend(previous)
        assert kernels.backend_name() == current

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            kernels.set_backend("fortran")

    def test_dispatch_accepts_untyped_inputs(self):
        dist = kernels.distance_matrix([[0.0, 0.0], [3.0, 4.0]], [[0.0, 0.0]])
        np.testing.assert_allclose(dist, [[0.0], [5.0]])


class TestAgainstScalarFormulas:
    def test_marginal_matches_scalar_path(self):
        rng = np.random.default_rng(6)
        points = rng.standard_normal((10, 2)) * 5
        theta = rng.standard_normal((2, 2))
        eta = np.array([0.7, 1.9])
        sigma_v = 1.1
        dist = kernels.distance_matrix(points, theta)
        u = kernels.marginal_membership_matrix(dist, eta, sigma_v)
        for i in range(10):
            for j in range(2):
                fb = FuzzyBandwidth(eta[j], sigma_v)
                assert u[i, j] == pytest.approx(
                    marginal_membership(float(dist[i, j]), fb), rel=1e-12
                )

    def test_pcm_matches_scalar_exp(self):
        dist = np.array([[2.0]])
        u = kernels.pcm_membership(dist, np.array([5.0]))
        assert u[0, 0] == pytest.approx(math.exp(-0.8), rel=1e-15)
