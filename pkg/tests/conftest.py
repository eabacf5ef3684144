import pytest

from markovgibbs import (
    GibbsChain,
    Potential,
    TransitionMatrix,
    counterexample_matrix,
    has_distinct_branch_values,
    is_primitive,
    normalize,
)

FIXTURE_VALUES = {
    (2, 1): 1.0,
    (1, 3): 1.0,
    (1, 2): 0.2,
    (3, 2): 0.3,
    (4, 2): 0.5,
    (1, 4): 0.4,
    (2, 4): 0.6,
}


@pytest.fixture
def four_matrix():
    return counterexample_matrix()


@pytest.fixture
def full2():
    return TransitionMatrix([[1, 1], [1, 1]])


@pytest.fixture
def golden_mean():
    return TransitionMatrix([[0, 1], [1, 1]])


@pytest.fixture
def fixture_chain(four_matrix):
    return GibbsChain.from_stochastic(four_matrix, FIXTURE_VALUES)


def random_primitive_matrix(rng, n, density=0.4):
    """Random primitive zero-one matrix with every row and column occupied."""
    while True:
        entries = (rng.random((n, n)) < density).astype(int)
        if (entries.sum(axis=0) == 0).any() or (entries.sum(axis=1) == 0).any():
            continue
        matrix = TransitionMatrix(entries)
        if is_primitive(matrix):
            return matrix


def random_potential(rng, matrix):
    return Potential(matrix, {e: rng.uniform(-1.0, 1.0) for e in matrix.edges})


def random_chain(rng, matrix):
    chain, _ = normalize(random_potential(rng, matrix))
    return chain


def random_chain_with_distinct_values(rng, matrix):
    while True:
        chain = random_chain(rng, matrix)
        ok, _ = has_distinct_branch_values(chain)
        if ok:
            return chain
