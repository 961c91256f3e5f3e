import numpy as np
import pytest

from dnareads import SimParams
from dnareads.codebook import Codebook, construct_greedy


def build_codebook(matrix, dm, v=None, p=0.0, theta=1.0, seed=0, read_cap=None):
    """Codebook from an explicit payload matrix, for hand-traced instances."""
    mat = np.asarray(matrix, dtype=np.int64)
    k, m = mat.shape
    if v is None:
        v = int(mat.max()) + 1
    params = SimParams(
        m=m, k=k, v=v, p=p, dm=dm, theta=theta, read_cap=read_cap, seed=seed
    )
    return Codebook(params, mat)


@pytest.fixture
def literal_codebook():
    return build_codebook


@pytest.fixture
def small_params():
    # m=10 binary book with theta tight enough that ceil(theta*m) <= m - dm,
    # so the decoder can always reach a unique consistent codeword
    return SimParams(m=10, k=16, v=2, p=0.3, dm=2, theta=0.7, read_cap=400, seed=3)


@pytest.fixture
def small_codebook(small_params):
    return construct_greedy(small_params)


@pytest.fixture
def easy_codebook():
    # large alphabet: tiny pairwise intersections, fast stopping
    params = SimParams(m=8, k=8, v=8, p=0.1, dm=1, theta=0.5, read_cap=200, seed=1)
    return construct_greedy(params)
