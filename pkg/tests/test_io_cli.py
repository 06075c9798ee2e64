import json

import numpy as np
import pytest

from floatillum.bodycore import Ball, Ellipsoid, cube, random_polytope
from floatillum.cli import main
from floatillum.errors import ConfigError
from floatillum.io import (body_from_spec, body_to_spec, export_polytope, import_polytope,
                           load_body, save_body)


@pytest.mark.parametrize("K", [Ball([0.0, 1.0], 2.0), Ellipsoid([0, 0, 0], np.diag([1.0, 2, 3])),
                               cube(3), random_polytope(2, 3)])
def test_spec_round_trip(K, tmp_path):
    save_body(K, tmp_path / "k.json")
    L = load_body(tmp_path / "k.json")
    X = np.random.default_rng(0).uniform(-3, 3, (1000, K.dim))
    assert np.array_equal(K.contains(X), L.contains(X))


def test_spec_rejects_unknown_fields():
    with pytest.raises(ConfigError):
        body_from_spec({"type": "ball", "center": [0, 0], "colour": "red"})
    with pytest.raises(ConfigError):
        body_from_spec({"type": "torus"})


@pytest.mark.parametrize("d", [2, 3])
def test_polytope_file_round_trip(d, tmp_path):
    P = random_polytope(d, 8)
    path = export_polytope(P, tmp_path / "p")
    assert path.suffix == (".off" if d == 3 else ".csv")
    Q = import_polytope(path)
    X = np.random.default_rng(1).uniform(-1.1, 1.1, (1000, d))
    assert np.array_equal(P.contains(X), Q.contains(X))


@pytest.fixture
def bodies(tmp_path):
    (tmp_path / "disk.json").write_text(json.dumps({"type": "ball", "center": [0, 0], "name": "disk"}))
    (tmp_path / "ball3.json").write_text(json.dumps({"type": "ball", "center": [0, 0, 0]}))
    (tmp_path / "square.json").write_text(json.dumps({"type": "cube", "d": 2}))
    return tmp_path


def test_cli_inscribe_and_replay(bodies):
    out = bodies / "o"
    args = ["approx", "inscribe", "--body", str(bodies / "disk.json"), "--t-frac", "1e-3",
            "--seed", "7", "--out", str(out)]
    assert main(args) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["t_frac"] == 1e-3
    assert manifest["config"]["t"] == pytest.approx(1e-3 * np.pi)
    first = (out / "greedy_run.json").read_text()
    assert main(args) == 0
    assert (out / "greedy_run.json").read_text() == first


def test_cli_circumscribe(bodies):
    assert main(["approx", "circumscribe", "--body", str(bodies / "ball3.json"), "--n", "64",
                 "--out", str(bodies / "c")]) == 0
    assert (bodies / "c" / "circumscribed.off").exists()


def test_cli_exit_codes(bodies, monkeypatch):
    monkeypatch.setenv("FLOATILLUM_OUT", str(bodies / "env"))
    assert main(["approx", "inscribe", "--body", str(bodies / "missing.json"), "--t", "1"]) == 2
    assert main(["approx", "inscribe", "--body", str(bodies / "disk.json"), "--t-frac", "0.1"]) == 2
    assert main(["plot", "overlay", "--body", str(bodies / "ball3.json"), "--t", "0.1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_cli_verify(bodies, capsys):
    out = bodies / "v"
    assert main(["verify", "--claim", "Lemma2.6", "--trials", "2", "--out", str(out)]) == 0
    assert (out / "summary.md").read_text().startswith("| claim |")
    assert main(["verify", "--claim", "Thm3.1", "--body", str(bodies / "square.json"), "--t", "1e-4",
                 "--out", str(out)]) == 0
    assert "hypothesis_unmet" in capsys.readouterr().out


def test_cli_plots_deterministic(bodies):
    a, b = bodies / "p1", bodies / "p2"
    for o in (a, b):
        assert main(["plot", "overlay", "--body", str(bodies / "square.json"), "--t", "0.1",
                     "--out", str(o)]) == 0
    assert (a / "overlay.svg").read_text() == (b / "overlay.svg").read_text()
    assert main(["plot", "scaling", "--d", "2", "--out", str(a)]) == 0
    assert "slope = -1.99" in (a / "scaling.svg").read_text()
