import json
import math
import os
import subprocess

import pytest

import rwvd


def test_classify_examples():
    assert rwvd.classify("z2z3", rwvd.ScheduleFamily.double_exp_sqrt(), 100000)["verdict"] == "Recurrent"
    assert rwvd.classify("z2z3", rwvd.ScheduleFamily.double_exp_theta(0.4), 10000)["verdict"] == "Transient"


def test_phi_geometric():
    g = rwvd.ScheduleFamily.geometric(3.0)
    for n in (1, 10, 1000):
        assert rwvd.phi(g, n) == pytest.approx(1.0 / (n + 1), abs=1e-12)


def test_exact_oracles():
    assert rwvd.exact_hitting(rwvd.simple_walk(1), 2, 4) == 0.5
    assert rwvd.exact_return_prob(rwvd.simple_walk(1), 2) == 0.5
    one = rwvd.exact_return_prob(rwvd.lazy_walk(1), 50)
    assert rwvd.exact_return_prob(rwvd.lazy_walk(2), 50) == pytest.approx(one * one, rel=1e-12)


def test_mc_matches_exact():
    law = rwvd.lazy_walk(1)
    exact = rwvd.exact_hitting(law, 16, 64)
    est = rwvd.mc_hitting(law, 16, 64, 20000, seed=3)
    assert abs(est["p_hat"] - exact) <= 4 * est["stderr"]
    assert est == rwvd.mc_hitting(law, 16, 64, 20000, seed=3)


def test_lclt_and_sequences():
    assert rwvd.lclt_fit(rwvd.lazy_walk(1), 64, 1024)["slope"] == pytest.approx(-0.5, abs=0.03)
    res = rwvd.prop61("n^2", "2^n", 60)
    assert res["verdict_dumb"] == "Convergent" and res["verdict_t"] == "Convergent"
    with pytest.raises(rwvd.ConfigError):
        rwvd.lemma46("n^-1", 10)


def test_errors_are_translated():
    with pytest.raises(rwvd.Error):
        rwvd.ScheduleFamily.double_exp_theta(1.5)


def test_run_cli_and_executable():
    code, out, _ = rwvd.run_cli(["hitting", "--dim", "1", "--a", "2", "--b", "4", "--exact"])
    assert code == 0
    assert json.loads(out)["payload"]["p_hat"] == 0.5
    exe = os.environ.get("RWVD_CLI")
    if exe:
        proc = subprocess.run([exe, "hitting", "--dim", "1", "--a", "2", "--b", "4", "--exact"],
                              capture_output=True, text=True, check=True)
        assert proc.stdout == out
