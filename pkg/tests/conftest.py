import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quantized_nbhd.core import make_cellspace, make_explicit_map  # noqa: E402


def binary(n, prefix="s"):
    return make_cellspace([(f"{prefix}{i}", 2) for i in range(n)])


def random_map(seed, sizes=(2, 2, 2)):
    space = make_cellspace([(f"s{i}", a) for i, a in enumerate(sizes)])
    rng = np.random.default_rng(seed)
    return make_explicit_map(space, space, rng.permutation(space.total_dim))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
