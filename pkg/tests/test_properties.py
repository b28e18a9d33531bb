import pytest

MIN_CASES = {"weierstrass": 50}

from fthresh.properties import SUITES


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite(name):
    res = SUITES[name](0)
    assert res.cases >= MIN_CASES.get(name, 100)
    assert res.ok, res.failures[:3]


def test_other_seed_is_deterministic():
    a = SUITES["norm-floor"](7)
    b = SUITES["norm-floor"](7)
    assert (a.cases, a.failures) == (b.cases, b.failures)
