import logging

import pytest

from mlcif.build import PGS, GeneratingSet, build_mlcif, extend_family, recover_pgs
from mlcif.classify import (
    FamilyProfile,
    TwoMaxgenDiagnostic,
    canonical_name,
    classify_two_maxgen,
    definitional_family,
    make_named,
    named_pgs,
    profile,
    recognize,
    two_maxgen_diagnostics,
)
from mlcif.counting import size_ahm
from mlcif.errors import ContractViolation, InputError
from mlcif.poset import ZSet

Z = ZSet.of


def gens_of(k, *members):
    return GeneratingSet.from_pgs(PGS(k, tuple(Z(*m) for m in members)))


# ---- Profiles ----------------------------------------------------------------


def test_star_profile():
    prof = profile(gens_of(3))
    assert prof == FamilyProfile(rank=1, max_gen_count=1, max_gens=(Z(1),), recognized_form="star")


def test_a23_profile():
    prof = profile(gens_of(3, (2, 3)))
    assert (prof.rank, prof.max_gens, prof.recognized_form) == (2, (Z(2, 3),), "a23")


def test_hilton_milner_profile():
    prof = profile(gens_of(3, (2, 3, 4)))
    assert prof.max_gens == (Z(1, 4), Z(2, 3, 4))
    assert (prof.rank, prof.recognized_form) == (2, "hilton_milner")


@pytest.mark.parametrize("b", [4, 5])
def test_ahm_profile(b):
    gens = GeneratingSet.from_pgs(named_pgs("ahm", 5, b))
    prof = profile(gens)
    assert prof.max_gens == (Z(1, b), ZSet.interval(2, b))
    assert (prof.rank, prof.max_gen_count, prof.recognized_form) == (2, 2, f"ahm({b})")


def test_profile_to_dict():
    out = profile(gens_of(3, (2, 3, 4))).to_dict()
    assert out == {"rank": 2, "max_gen_count": 2, "max_gens": [[1, 4], [2, 3, 4]], "recognized_form": "hilton_milner"}


def test_profile_checks_itself():
    with pytest.raises(ContractViolation):
        FamilyProfile(rank=0, max_gen_count=1, max_gens=(Z(1),))
    with pytest.raises(ContractViolation):
        FamilyProfile(rank=1, max_gen_count=2, max_gens=(Z(1),))


def test_other_shapes_are_not_guessed():
    assert recognize(gens_of(3, (3, 4, 5))) == "other"
    assert recognize(gens_of(3, (2, 3, 5))) == "other"


# ---- Two maximal generators --------------------------------------------------


def test_classify_two_maxgen_ahm():
    assert classify_two_maxgen(GeneratingSet.from_pgs(named_pgs("ahm", 5, 5))) == (2, 5)
    assert classify_two_maxgen(gens_of(3, (2, 3, 4))) == (2, 4)


def test_classify_two_maxgen_wrong_count():
    with pytest.raises(ContractViolation):
        classify_two_maxgen(gens_of(3))
    with pytest.raises(ContractViolation):
        classify_two_maxgen(gens_of(3, (2, 3, 5)))


def test_classify_two_maxgen_reports_shape_violation(caplog):
    gens = gens_of(3, (2, 4, 5))
    assert gens.maximal() == [Z(1, 2), Z(2, 4, 5)]
    with caplog.at_level(logging.WARNING, logger="mlcif.classify"):
        assert classify_two_maxgen(gens) is None
    assert "two-maximal-generator shape violated" in caplog.text
    assert "{2,4,5}" in caplog.text


def test_k3_catalog_has_one_shape_violation(catalog_k3):
    diags = two_maxgen_diagnostics(catalog_k3)
    assert [d.pgs for d in diags] == [PGS(3, (Z(2, 4, 5),))]
    assert isinstance(diags[0], TwoMaxgenDiagnostic)
    assert "{1,2}" in str(diags[0]) and "{2,4,5}" in str(diags[0])


@pytest.mark.parametrize("k", [3, 4])
def test_catalog_matches_have_the_classified_shape(k, request):
    for gens in request.getfixturevalue(f"catalog_k{k}"):
        if len(gens.maximal()) != 2:
            continue
        match = classify_two_maxgen(gens)
        if match is None:
            continue
        a, b = match
        assert b > 2 * a - 1
        if a == 2:
            assert 4 <= b <= k + 1
            assert gens.rank() == 2


def test_k4_catalog_contains_every_ahm(catalog_k4):
    forms = {recognize(g) for g in catalog_k4}
    assert {"star", "a23", "ahm(4)", "hilton_milner"} <= forms


# ---- Named families ----------------------------------------------------------


def test_canonical_name():
    assert canonical_name("Hilton-Milner") == "hilton_milner"
    assert canonical_name(" hm ") == "hilton_milner"
    assert canonical_name("A_23") == "a23"
    with pytest.raises(InputError):
        canonical_name("kneser")


def test_make_named_examples():
    star, _ = make_named("star", 4, 2)
    assert star.members == {Z(1, 2), Z(1, 3), Z(1, 4)}
    a23, gens = make_named("a23", 6, 3)
    assert len(a23) == 10
    assert profile(gens).recognized_form == "a23"


@pytest.mark.parametrize("name, b", [("star", None), ("a23", None), ("hilton_milner", None), ("ahm", 4)])
@pytest.mark.parametrize("n, k", [(6, 3), (7, 3), (8, 3), (8, 4), (9, 4)])
def test_make_named_matches_definition(name, b, n, k):
    fam, _ = make_named(name, n, k, b)
    assert fam == definitional_family(name, n, k, b)


@pytest.mark.parametrize("n, k", [(8, 3), (8, 4), (10, 5)])
def test_ahm_at_top_is_hilton_milner(n, k):
    assert make_named("ahm", n, k, k + 1)[0] == make_named("hilton_milner", n, k)[0]


@pytest.mark.parametrize("n, k, b", [(8, 4, 5), (10, 5, 4), (10, 5, 5), (10, 5, 6)])
def test_make_named_ahm_size(n, k, b):
    assert len(make_named("ahm", n, k, b)[0]) == size_ahm(n, k, b)


@pytest.mark.parametrize("b", [None, 3, 5])
def test_make_named_rejects_bad_b(b):
    with pytest.raises(InputError):
        make_named("ahm", 8, 3, b)
    with pytest.raises(InputError):
        definitional_family("ahm", 8, 3, b)


def test_profile_survives_extension(catalog_k3):
    for gens in catalog_k3:
        fam, _ = build_mlcif(6, 3, gens.pgs)
        before = profile(recover_pgs(fam))
        for n_new in (7, 8):
            assert profile(recover_pgs(extend_family(fam, n_new))) == before
