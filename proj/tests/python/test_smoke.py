import math

import pytest

import nlss


NLS3_A = {"standard_form": "NLS3", "params": {"alpha1": 0.8, "alpha2": 0.6, "r": 0.0}}
NLS3_B = {"standard_form": "NLS3", "params": {"alpha1": 0.8, "alpha2": 0.6, "r": -2.0}}


def test_gmin_values():
    assert nlss.g_min(NLS3_A) == pytest.approx(1.6, abs=1e-12)
    assert nlss.g_min(NLS3_B) == pytest.approx(-0.4, abs=1e-12)


def test_eval_g_nls1():
    g = {"standard_form": "NLS1", "params": {"alpha": 1, "beta": -1}}
    assert nlss.eval_g(g, 1, 0) == pytest.approx(1.0)
    assert nlss.eval_g(g, 0, 0) == 0.0


def test_cv_round_trip():
    lam = [float(i) for i in range(1, 13)]
    C, v = nlss.lambdas_to_cv(lam)
    assert list(nlss.cv_to_lambdas(C, v)) == pytest.approx(lam, abs=1e-12)


def test_transform_identity():
    lam = nlss.lambdas(NLS3_B)
    out = nlss.transform_lambdas(lam, [[1.0, 0.0], [0.0, 1.0]])
    assert list(out) == pytest.approx(lam, abs=1e-14)


def test_profile_closed_form():
    n = nlss.profile_norms(1, 4.0)
    assert n["l2sq"] == pytest.approx(4.0, abs=1e-10)
    assert n["grad_sq"] == pytest.approx(4.0 / 3.0, abs=1e-10)
    assert n["lp"] == pytest.approx(16.0 / 3.0, abs=1e-10)


def test_cli_analyze_json():
    out = nlss.cli("analyze", "--form", "NLS3", "--alpha1", 0.8, "--alpha2", 0.6, "--r", -2)
    assert out["schema"] == "nls-solitons/1"
    assert out["g_min"] == pytest.approx(-0.4, abs=1e-12)
    assert out["ground_state_exists"] is True
    assert out["T0"][0]["label"] == "A9"


def test_cli_exit_codes():
    code, _, err = nlss.run_cli([])
    assert code == 2 and "subcommand" in err.lower()
    with pytest.raises(nlss.CliError) as e:
        nlss.cli("ground-state", "--form", "NLS3", "--alpha1", 0.8, "--alpha2", 0.6, "--r", 0)
    assert e.value.code == 2


def test_bad_system_raises_value_error():
    with pytest.raises(ValueError):
        nlss.g_min({"standard_form": "NLS1", "params": {"alpha": 0.5, "beta": 0}})


def test_gn_constant_d1():
    out = nlss.cli("ground-state", "--form", "NLS1", "--alpha", -1, "--beta", -1)
    assert out["C_GN"] == pytest.approx(1 / math.sqrt(3), rel=1e-9)
