import pytest

from hochschild.algebra import sample_library
from hochschild.verify import SUITES, run_suites


@pytest.mark.parametrize("key", ["field", "trunc_poly(2)", "group_cyclic(2)"])
def test_all_suites_pass(key):
    rep = run_suites(sample_library(key))
    assert rep.ok, rep.failures()
    doc = rep.to_json()
    assert set(doc["suites"]) == set(SUITES)
    assert "timing" not in doc


def test_failures_carry_witnesses():
    rep = run_suites(sample_library("field"), ["gerst"])
    for checks in rep.suites.values():
        for c in checks:
            assert c.ok or c.witness is not None
    assert "timing" in rep.to_json(with_timing=True)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites(sample_library("field"), ["nope"])
