from pathlib import Path

import numpy as np
import pytest

from pcmkit import kernels
from pcmkit.dataset import dataset1_spec, dataset2_spec, generate_gaussian_mixture
from pcmkit.fcm import FcmConfig, fcm_cluster

DATA_SEED = 7
FCM_SEED = 11


@pytest.fixture(scope="session")
def golden_dir():
    path = Path(__file__).parent / "data"
    path.mkdir(exist_ok=True)
    return path


@pytest.fixture
def pure_backend():
    """Pin the pure NumPy backend (golden files are produced with it)."""
    previous = kernels.set_backend("pure")
    yield
    kernels.set_backend(previous)


@pytest.fixture(scope="session")
def dataset1():
    return generate_gaussian_mixture(dataset1_spec(seed=DATA_SEED))


@pytest.fixture(scope="session")
def dataset2():
    return generate_gaussian_mixture(dataset2_spec(seed=DATA_SEED))


@pytest.fixture(scope="session")
def dataset1_fcm2(dataset1):
    return fcm_cluster(dataset1, FcmConfig(c=2, seed=FCM_SEED))


@pytest.fixture(scope="session")
def dataset2_fcm10(dataset2):
    return fcm_cluster(dataset2, FcmConfig(c=10, seed=FCM_SEED))


def random_blobs(rng, n_per=30, centers=((0.0, 0.0), (6.0, 6.0)), stddev=0.7):
    """Small seeded blob instance for property tests."""
    blocks = [c + stddev * rng.standard_normal((n_per, len(c))) for c in np.asarray(centers)]
    return np.vstack(blocks)
