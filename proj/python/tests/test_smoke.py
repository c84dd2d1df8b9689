import math

import pytest

import wodzicki

FLAT = """
dimension = 2

[operator]
kind = "flat-laplacian"

[[functional]]
kind = "metric"
V = [1.0, 0.0]
W = [1.0, 0.0]
"""


def test_suite_names():
    names = wodzicki.suite_names()
    assert len(names) == 12
    assert "appendix-powers" in names


def test_run_suite():
    result = wodzicki.run_suite("appendix-powers")
    assert result["pass"]
    assert all(c["pass"] for c in result["checks"])


def test_unknown_suite():
    with pytest.raises(ValueError):
        wodzicki.run_suite("no-such-suite")


def test_compute_flat_metric():
    out = wodzicki.compute(FLAT)
    value = out["results"][0]["value"]
    assert value["re"] == pytest.approx(-math.pi, abs=1e-13)
    assert value["im"] == pytest.approx(0.0, abs=1e-13)
    assert out["config"]["depth"] == 3


def test_compute_rejects_unknown_keys():
    with pytest.raises(wodzicki.ConfigurationError):
        wodzicki.compute(FLAT + "bogus = 1\n")


def test_singular_factor_is_numerical_error():
    text = """
dimension = 2
theta = 0.7

[operator]
kind = "conformal-laplacian"
variant = "two-torus"
factor = { terms = [{ k = [0, 0], re = 1.0 }, { k = [1, 0], re = 0.5 }, { k = [-1, 0], re = 0.5 }] }

[[functional]]
kind = "metric"
V = [1.0, 0.0]
W = [1.0, 0.0]
"""
    with pytest.raises(wodzicki.NumericalError):
        wodzicki.compute(text)


def test_sphere_moment():
    num, den, value = wodzicki.sphere_moment([2, 2, 0, 0])
    assert (num, den) == (1, 24)
    assert value == pytest.approx(2 * math.pi**2 / 24, rel=1e-15)
    assert wodzicki.sphere_moment([1, 0])[0] == 0
    assert wodzicki.sphere_volume(2) == pytest.approx(2 * math.pi)
