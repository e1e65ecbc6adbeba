import os

import hypothesis
import pytest

from mlcif.build import GeneratingSet, enumerate_pgs
from mlcif.census import census_mlcifs

hypothesis.settings.register_profile("ci", max_examples=300, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=40, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture(scope="session")
def catalog_k2():
    return [GeneratingSet.from_pgs(p) for p in enumerate_pgs(2)]


@pytest.fixture(scope="session")
def catalog_k3():
    return [GeneratingSet.from_pgs(p) for p in enumerate_pgs(3)]


@pytest.fixture(scope="session")
def catalog_k4():
    return [GeneratingSet.from_pgs(p) for p in enumerate_pgs(4)]


@pytest.fixture(scope="session")
def census_6_3():
    return census_mlcifs(6, 3)
