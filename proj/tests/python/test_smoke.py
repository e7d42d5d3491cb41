import math

import numpy as np
import pytest

import htsl


def test_constants():
    a, c = htsl.block_base(2.0, 2.0)
    assert a == 2
    assert c == pytest.approx(0.75, abs=1e-12)
    assert htsl.contraction_constant(3.0, 2.0, 2) == pytest.approx(0.625)
    c1, c2 = htsl.doubling_bounds(htsl.GrowthFunction.power(0.5), 1e9)
    assert c1 == pytest.approx(math.sqrt(2.0), abs=1e-10)
    assert c2 == pytest.approx(math.sqrt(2.0), abs=1e-10)


def test_growth_eval():
    phi = htsl.GrowthFunction.power_log(0.5, 2.0)
    e = math.e
    assert phi(e * e) == pytest.approx(4.0 * e, rel=1e-12)
    assert "beta" in phi.to_json()


def test_sampling_reproducible():
    a = htsl.sample_stable(1.5, 0.0, 1.0, 0.0, n=16, seed=3, stream=1)
    b = htsl.sample_stable(1.5, 0.0, 1.0, 0.0, n=16, seed=3, stream=1)
    assert np.array_equal(a, b)
    c = htsl.sample_stable(1.5, 0.0, 1.0, 0.0, n=16, seed=3, stream=2)
    assert not np.array_equal(a, c)


def test_partial_sum_convention():
    assert htsl.partial_sum([1.0, 2.0, 3.0, 4.0], 0, 2) == 6.0
    assert htsl.running_max([1.0, -3.0, 2.0], 0, 2) == 2.0


def test_simulators_and_moment_series():
    e = htsl.simulate_iid(2.0, 0.0, 300, 500, seed=5)
    assert e["data"].shape == (500, 300)
    phi = htsl.GrowthFunction.power(1.0)
    cert = htsl.moment_series(e["data"], 2.0, phi, 2, 8, 2, meta=e["meta"])
    assert cert["verdict"] == "inconclusive"
    assert len(cert["moment_terms"]) == 9
    # unit-variance scale in the S0 parameterization: scale = 1/sqrt(2)
    b = 2.0 ** 8
    expected = (b + 1.0) / b ** 2 * 2.0  # scale 1 here doubles the variance
    assert cert["moment_terms"][8] == pytest.approx(expected, rel=0.2)


def test_levy_and_lfsm():
    lv = htsl.simulate_stable_levy(2.0, 32, 1.0, paths=200, seed=7)
    assert np.all(lv["data"][:, 0] == 0.0)
    lf = htsl.simulate_lfsm(1.5, 1.0 / 1.5, 32, paths=3, seed=7, mesh=8)
    lv2 = htsl.simulate_stable_levy(1.5, 32, 1.0, paths=3, seed=7)
    assert np.array_equal(lf["data"], lv2["data"])


def test_decay_diagnostic():
    e = htsl.simulate_iid(2.0, 0.0, 2 ** 7 + 2, 300, seed=9)
    rep = htsl.decay_diagnostic(e["data"], htsl.GrowthFunction.power(1.0), 2, 6)
    assert rep["levels"][0]["level"] == 0
    assert 0.0 <= rep["decay_score"] <= 1.0


def test_guard_error_maps_to_python():
    with pytest.raises(Exception):
        htsl.simulate_lfsm(1.2, 0.95, 32, paths=1, seed=1, mesh=4, cutoff=2.0)
