import random
from pathlib import Path

import pytest

from netcover.generate import random_instance
from netcover.io import load_instance

FIXTURES = Path(__file__).parent / "fixtures"


def corpus_instance(seed: int):
    """Member ``seed`` of the mixed-profile oracle corpus."""
    rng = random.Random(seed)
    k = 1 + seed % 5
    profile = "random-triangulation" if seed % 2 else "grid-graph"
    return random_instance(seed, profile, n=rng.randint(8, 15), d=rng.randint(max(k, 3), 6),
                           c=rng.randint(3, 8), k=k)


def tiny_instance(seed: int, n=12, d=6, c=4, k=3):
    profile = "random-triangulation" if seed % 2 else "grid-graph"
    return random_instance(seed, profile, n=n, d=d, c=c, k=k)


@pytest.fixture
def w1_path():
    return FIXTURES / "w1.json"


@pytest.fixture
def w1(w1_path):
    return load_instance(w1_path)
