import json
import math
import os
import subprocess
from fractions import Fraction

import pytest

import latglob


def test_measures_and_keys():
    assert latglob.measure("minors:n=1,m=2", 2) == Fraction(1, 4)
    assert latglob.measure("eisenstein:d=2", 3) == Fraction(4, 81)
    assert "cex:A" in latglob.system_key_forms()
    with pytest.raises(latglob.DomainError):
        latglob.make_system("minors:n=3,m=2")


def test_predictions():
    z = latglob.riemann_zeta(2)
    assert z["lower"] <= math.pi ** 2 / 6 <= z["upper"]
    e = latglob.euler_product("minors:n=1,m=2")
    assert abs(e["partial"] - 6 / math.pi ** 2) < 1e-8
    with pytest.raises(latglob.DegenerateDenominator):
        latglob.predicted_restricted_mean("cex:A")


def test_exact_estimates():
    assert latglob.empirical_mean("minors:n=1,m=2", 2) == Fraction(3, 16)
    assert latglob.empirical_density("minors:n=1,m=2", 2, 2) == Fraction(1, 4)
    h = 2 ** 9
    assert latglob.empirical_mean("cex:A", h) == Fraction(h - 1, 2 * h)
    with pytest.raises(latglob.EmptyRestriction):
        latglob.empirical_restricted_mean("cex:B", 1)
    with pytest.raises(latglob.BudgetError):
        latglob.empirical_mean("minors:n=2,m=3", 100)


def test_run_in_process():
    code, report = latglob.run("predict", "minors:n=1,m=2")
    assert code == 0
    assert abs(report["mean"]["partial"] - 0.45224742) < 1e-8
    code, text = latglob.run("sweep", "cex:A", h_list=[4, 8], format="csv")
    assert code == 0
    assert text.splitlines()[0].startswith("command,system,quantity,H")


@pytest.mark.skipif("LATGLOB_CLI" not in os.environ, reason="CLI binary path not provided")
def test_cli_binary():
    cli = os.environ["LATGLOB_CLI"]
    out = subprocess.run([cli, "estimate", "--system", "minors:n=1,m=2", "--H", "2"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["mean"]["num"] == "3"
    bad = subprocess.run([cli, "predict", "--system", "cex:D"], capture_output=True, text=True)
    assert bad.returncode == 2
    assert bad.stderr.startswith("error:")
    budget = subprocess.run([cli, "estimate", "--system", "minors:n=2,m=3", "--H", "100"], capture_output=True, text=True)
    assert budget.returncode == 4
    fail = subprocess.run([cli, "compare", "--system", "minors:n=1,m=2", "--H", "20", "--tol", "0"],
                          capture_output=True, text=True)
    assert fail.returncode == 3
