import math

import pytest

import tcf


def test_field_constants():
    f = tcf.field_info(5)["field"]
    assert f["min_poly_string"] == "x^2 - x - 1"
    assert f["tau"]["decimal"] == pytest.approx(1 + 2 * math.cos(math.pi / 5))
    assert f["tau"]["coeffs"] == ["1", "1"]


def test_n_below_four_is_a_value_error():
    with pytest.raises(ValueError):
        tcf.field_info(3)


def test_verify_passes():
    r = tcf.verify(6)
    assert r["report"]["passed"]
    assert r["report"]["failures"] == 0
    assert r["n"] == 6


def test_phi_table_size():
    for n in (4, 5, 7):
        assert len(tcf.orbit_tables(n, "phi")["phi"]) == 2 * n - 3


def test_expand_rational_and_coefficients():
    e = tcf.expand(5, "-1.2345", steps=40)
    assert len(e["steps"]) == 40
    tau = tcf.field_info(5)["field"]["tau"]["decimal"]
    for s in e["steps"]:
        assert -tau <= s["t"] < 0
    # -1 - lambda/2 in the basis 1, lambda.
    c = tcf.expand(5, ["-1", "-1/2"], steps=10)
    assert c["steps"][0]["t"] == pytest.approx(-1 - (1 + math.sqrt(5)) / 4)


def test_expand_random_is_reproducible():
    a = tcf.expand_random(6, seed=9, index=4, steps=60)
    b = tcf.expand_random(6, seed=9, index=4, steps=60)
    assert a == b
    assert a["convergence"]["max_q_ratio"] <= 1 + 2 * math.cos(math.pi / 6) + 1e-12


def test_borel_windows():
    b = tcf.borel_scan(6, seed=1, index=0, M=300)
    assert b["violations"] == 0
    assert b["max_window_min"] <= 1 + 2 * math.cos(math.pi / 6) + 1e-10


def test_periodic_point():
    p = tcf.periodic_point(5, 2)
    assert p["digits"] == [2, -2, 1, 1]
    tau = 1 + 2 * math.cos(math.pi / 5)
    assert p["theta"][0]["decimal"] < tau < p["theta"][1]["decimal"]


def test_admissibility():
    assert tcf.is_admissible(5, [1, 1, 1]) == (True, 0, -1)
    ok, rule, pos = tcf.is_admissible(5, [1, 1, 1, 1])
    assert not ok and rule == 2 and pos == 3
    assert tcf.is_admissible(5, [1, -2])[1] == 1


def test_theta():
    tau = 1 + 2 * math.cos(math.pi / 4)
    assert tcf.theta(-tau, 0.0) == pytest.approx(tau)


def test_transcendence_flags():
    # log q_m = c^m (index m from 0), so log log q_m / m = log c.
    log_q = [(4.0**m) for m in range(30)]
    assert tcf.transcendence(log_q, d=2)["flagged"]
    log_q3 = [(3.0**m) for m in range(30)]
    assert not tcf.transcendence(log_q3, d=2)["flagged"]


def test_small_experiments():
    a = tcf.adler(5, 500, seed=2)
    assert a["samples"] == 500 and a["min_derivative"] > 1
    m = tcf.measure_invariance(4, samples=20, seed=3)
    assert m["worst"] < 1e-12
    assert math.isfinite(m["mu_gamma"])
