from __future__ import annotations

import random

import pytest

from valuecluster.distance import CharClass, DistanceMatrix, WeightMatrix
from valuecluster.profiles import get_profile

# 3-class test alphabet: two letters, two digits, two specials (catch-all)
ALPHABET = "ab12-?"


@pytest.fixture
def unit_weights() -> WeightMatrix:
    return get_profile("measurement-unit").weights


@pytest.fixture
def dating_weights() -> WeightMatrix:
    return get_profile("dating").weights


@pytest.fixture
def artist_weights() -> WeightMatrix:
    return get_profile("artist-name").weights


def random_weight_matrix(rng: random.Random, max_weight: int = 9) -> WeightMatrix:
    """Random integer weight matrix over the 3-class test alphabet.

    Integer weights are exact in float arithmetic, so oracle comparisons can
    use strict equality.
    """
    n = 3
    indel = tuple(rng.randint(0, max_weight) for _ in range(n))
    half = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            half[i][j] = half[j][i] = rng.randint(0, max_weight)
    return WeightMatrix(
        classes=(CharClass.of("Letters", "ab"), CharClass.of("Digits", "12"), CharClass.other()),
        indel=indel,
        sub=tuple(tuple(row) for row in half),
    )


def random_string(rng: random.Random, max_len: int = 6) -> str:
    return "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len)))


def random_condensed(rng: random.Random, n: int, low: float = 0.0, high: float = 10.0) -> DistanceMatrix:
    total = n * (n - 1) // 2
    return DistanceMatrix(
        n=n,
        condensed=[rng.uniform(low, high) for _ in range(total)],
        value_index=tuple(f"v{i}" for i in range(n)),
    )
