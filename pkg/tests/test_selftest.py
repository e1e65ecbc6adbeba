import pytest

from mlcif.errors import MlcifError
from mlcif.selftest import SUITES, SelftestContext, SuiteFailure, expect, run_selftest


def test_suite_registry():
    assert {"si_oracle", "census_k3", "two_maxgen", "ax_formulas", "asymptotic"} <= set(SUITES)


@pytest.mark.parametrize("name", ["poset_laws", "companion_avoidance", "wedges", "round_trip", "census_k2", "closure_counts", "bounds"])
def test_cheap_suites_pass(name):
    [result] = run_selftest([name], seed=3)
    assert result.passed, result.detail
    assert result.seconds >= 0


@pytest.mark.slow
@pytest.mark.parametrize("name", ["si_oracle", "census_k3", "extension", "ahm_sizes", "ax_formulas", "asymptotic"])
def test_heavy_suites_pass(name):
    [result] = run_selftest([name])
    assert result.passed, result.detail


def test_two_maxgen_suite_reports_the_counterexample():
    [result] = run_selftest(["two_maxgen"])
    assert not result.passed
    assert "{2,4,5}" in result.detail
    assert result.to_dict()["passed"] is False


def test_unknown_suite():
    with pytest.raises(MlcifError, match="no_such_suite"):
        run_selftest(["no_such_suite"])


def test_expect():
    expect(True, "unused")
    with pytest.raises(SuiteFailure, match="boom"):
        expect(False, "boom")


def test_context_caches_catalogs():
    ctx = SelftestContext(seed=1)
    assert ctx.catalog(3) is ctx.catalog(3)
    assert len(ctx.catalog(3)) == 6
    assert SelftestContext(seed=1).rng.random() == ctx.rng.random()
