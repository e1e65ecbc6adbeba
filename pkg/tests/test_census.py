import pytest

from mlcif.build import build_mlcif, enumerate_pgs, is_mlcif, recover_pgs
from mlcif.census import census_mlcifs, family_sort_key
from mlcif.config import Budget
from mlcif.errors import BudgetExceeded, InputError
from mlcif.poset import UniformFamily


def _catalog_families(n, k):
    fams = [build_mlcif(n, k, p)[0] for p in enumerate_pgs(k)]
    return sorted(fams, key=family_sort_key)


def test_census_4_2_is_star_and_a23():
    found = census_mlcifs(4, 2)
    star = UniformFamily.from_sets(4, 2, [(1, 2), (1, 3), (1, 4)])
    a23 = UniformFamily.from_sets(4, 2, [(1, 2), (1, 3), (2, 3)])
    assert set(found) == {star, a23}


@pytest.mark.parametrize("n", [4, 5, 6])
def test_census_k2_matches_catalog(n):
    assert census_mlcifs(n, 2) == _catalog_families(n, 2)


def test_census_members_are_mlcifs():
    for fam in census_mlcifs(5, 2):
        assert is_mlcif(fam)
        assert recover_pgs(fam).pgs.k == 2


@pytest.mark.slow
def test_census_6_3_matches_catalog(census_6_3):
    assert census_6_3 == _catalog_families(6, 3)
    assert len(census_6_3) == 6


def test_census_rejects_small_ground_sets():
    with pytest.raises(InputError):
        census_mlcifs(5, 3)
    with pytest.raises(InputError):
        census_mlcifs(4, 1)


def test_census_respects_budget():
    with pytest.raises(BudgetExceeded):
        census_mlcifs(8, 3, Budget(max_n=7))
