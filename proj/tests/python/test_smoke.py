import math
import os
import subprocess

import pytest

import catqfi


def test_noon_limit_matches_number_state():
    assert catqfi.noon_qfi(4).f_q == pytest.approx(16.0, abs=1e-12)
    assert catqfi.noon_qfi(4, 0.9).f_q == pytest.approx(16 * 0.9**4, rel=1e-6)


def test_pure_cat_qfi():
    spec = catqfi.CatSpec(2, 0, 1.0)
    r = catqfi.qfi_pure(spec)
    assert r.method == "pure_eq5"
    assert r.f_q == pytest.approx(1.924234315, rel=1e-9)
    assert catqfi.qfi_pure_g2(spec).f_q == pytest.approx(r.f_q, rel=1e-9)
    assert r.delta_phi == pytest.approx(1 / math.sqrt(r.f_q))


def test_tmsv_and_sql():
    r = catqfi.tmsv_r_for_nav(1.0)
    assert catqfi.tmsv_qfi(r).f_q == pytest.approx(8.0, rel=1e-9)
    assert catqfi.sql_bound(4.0) == pytest.approx(0.5)


def test_nav_round_trip():
    a = catqfi.alpha_for_nav(8, 0, 1.0)
    assert catqfi.nav_of_alpha(8, 0, a) == pytest.approx(1.0, abs=1e-8)


def test_lossy_oracle_below_pure():
    spec = catqfi.CatSpec(8, 1, 1.0)
    lossy = catqfi.qfi_lossy(spec, 0.9).f_q
    assert 0 < lossy < catqfi.qfi_pure(spec).f_q


def test_curve_rows():
    rows = catqfi.trace_curve([4], [0, 1], n_av_min=0.6, n_av_max=2.0, points=5, baselines=["sql"])
    cats = [r for r in rows if r["d"] == 4]
    assert len(cats) == 10
    assert all(r["error"] == "" for r in cats)


def test_bad_parameters_raise():
    with pytest.raises(catqfi.Error):
        catqfi.CatSpec(4, 4, 1.0)


def test_end_to_end_probabilities_sum_to_one():
    rep = catqfi.end_to_end(2, 1.0, beta=4.0, shots=2000, seed=7)
    assert sum(o["probability"] for o in rep["outcomes"]) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.skipif("CATQFI_CLI" not in os.environ, reason="CLI path not set")
def test_cli_version_and_curve():
    cli = os.environ["CATQFI_CLI"]
    out = subprocess.run([cli, "--version"], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "catqfi 0.1.0"
    out = subprocess.run(
        [cli, "curve", "--d", "2", "--k", "0", "--nav", "0.5:1:2"], capture_output=True, text=True, check=True
    )
    body = [line for line in out.stdout.splitlines() if not line.startswith("#")]
    assert body[0].startswith("d,k,")
    assert len(body) == 3
    bad = subprocess.run([cli, "curve", "--nope"], capture_output=True, text=True)
    assert bad.returncode == 1
