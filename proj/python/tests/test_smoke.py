import math
import os
from pathlib import Path

import pytest

import folpsi

SCENARIOS = Path(os.environ.get("FOLPSI_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))
ROT = [["0", "-z", "y"], ["z", "0", "-x"], ["-y", "x", "0"]]
XYZ = ["x", "y", "z"]


def test_coeff_roundtrip():
    c = folpsi.parse_coeff("2+sin(x)", ["x"])
    assert c.eval([math.pi / 2]) == pytest.approx(3.0)
    assert c.derivative(0).eval([0.0]) == pytest.approx(1.0)
    assert folpsi.parse_coeff(c.str(["x"]), ["x"]) == c


def test_parse_error_reports_column():
    with pytest.raises(folpsi.ParseError, match=":5:"):
        folpsi.parse_coeff("x + ", ["x"])


def test_rotation_bracket():
    assert folpsi.bracket(ROT[0], ROT[1], XYZ) == ["y", "-x", "0"]


def test_so3_fibers_and_leaves():
    F = folpsi.Foliation(ROT, XYZ, lower=[-3.2] * 3, upper=[3.2] * 3)
    assert (F.dim, F.rank) == (3, 3)
    assert F.fiber_dim([0, 0, 0]) == 3
    assert F.fiber_dim([1, 0, 0]) == 2
    assert F.leaf_dim([0, 0, 0]) == 0
    assert F.leaf_dim([1, 0, 0]) == 2
    f = F.structure(1)
    assert f is not None
    assert f[0][1][2] == "-1"


def test_flat_torus_laplacian_spectrum():
    F = folpsi.Foliation([["1", "0"], ["0", "1"]])
    ev = F.laplacian_spectrum(8, 9)
    assert ev == pytest.approx([0, 1, 1, 1, 1, 2, 2, 2, 2], abs=1e-10)


def test_symbol_order():
    a = folpsi.symbol(1, [("1", "xi1^2")])
    assert a.order == 2
    assert a.eval([0.3], [5.0]) == pytest.approx(25.0)
    assert folpsi.estimate_order(a, 128, [4, 8, 16, 32]) == pytest.approx(2.0, abs=0.1)


def test_run_scenario_file():
    report = folpsi.run_scenario(str(SCENARIOS / "so3.json"), subcommand="fibers")
    assert report["status"] == "pass"
    assert {c["check"] for c in report["checks"]} == {"fibers", "minimality"}


def test_run_scenario_config_error():
    cfg = {"id": "bad", "domain": {"kind": "torus", "dim": 1}, "generators": [["1"]],
           "pipeline": [{"check": "holonomy"}]}
    with pytest.raises(folpsi.ConfigError):
        folpsi.run_scenario(cfg)
