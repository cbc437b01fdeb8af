import pytest

from gluecheck.finset import dualize, random_gluing, tcirc_a, tcirc_c, tstar

CORPUS_SEEDS = tuple(range(200))


@pytest.fixture(scope="session")
def corpus():
    """Random gluings with their dualized families, shared across suites."""
    return [(g, dualize(g)) for g in (random_gluing(seed) for seed in CORPUS_SEEDS)]


@pytest.fixture(scope="session")
def example1():
    return dualize(tstar())


@pytest.fixture(scope="session")
def example2():
    return dualize(tcirc_a())


@pytest.fixture(scope="session")
def example3():
    return dualize(tcirc_c())
