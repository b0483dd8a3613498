import json

import numpy as np
import pytest

from bicircle import densities, io
from bicircle.cli import RunConfig, main, threads_from_env
from bicircle.errors import InvalidInput, NotHermitian
from bicircle.moments import compute_moments
from bicircle.ortho import orthonormalize
from bicircle.params import ParameterField


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, p in [("one", densities.lebesgue()), ("diag", densities.diagonal()), ("sep", densities.separable())]:
        path = tmp_path / f"{name}.json"
        io.write_json(path, io.polynomial_to_json(p))
        out[name] = str(path)
    out["dir"] = tmp_path
    return out


def run(argv):
    return main([str(a) for a in argv])


def test_float_format():
    assert io.dumps(0.1).strip() == "0.10000000000000001"
    assert io.dumps([1, 2.0, True, None]).strip() == "[1, 2.0, true, null]"
    assert json.loads(io.dumps({"x": 1 / 3}))["x"] == 1 / 3


def test_polynomial_round_trip(tmp_path):
    p = densities.random_stable(2, 1, 3)
    path = tmp_path / "p.json"
    io.write_json(path, io.polynomial_to_json(p))
    q = io.polynomial_from_json(io.read_json(path))
    assert np.array_equal(p.coeffs, q.coeffs)


def test_moment_round_trip():
    t = compute_moments(densities.random_stable(2, 2, 1), 3, 2)
    text = io.dumps(io.moments_to_json(t))
    t2 = io.moments_from_json(json.loads(text))
    assert np.array_equal(t.dense(), t2.dense())
    assert io.dumps(io.moments_to_json(t2)) == text
    assert all(e["k"] >= 0 for e in json.loads(text)["entries"])


def test_moment_loader_rejects_asymmetry():
    d = {"kmax": 1, "jmax": 1, "entries": [{"k": 0, "j": 0, "re": 1, "im": 0},
                                           {"k": 0, "j": 1, "re": 0.2, "im": 0.1},
                                           {"k": 0, "j": -1, "re": 0.2, "im": 0.1}]}
    with pytest.raises(NotHermitian):
        io.moments_from_json(d)
    d["entries"] = [{"k": 0, "j": 0, "re": 1, "im": 0.5}]
    with pytest.raises(NotHermitian):
        io.moments_from_json(d)
    d["entries"] = [{"k": -1, "j": 0, "re": 1, "im": 0}]
    with pytest.raises(InvalidInput):
        io.moments_from_json(d)


def test_level_and_params_round_trip():
    lv = orthonormalize(compute_moments(densities.diagonal(), 2, 2), 2, 1, "revlex")
    lv2 = io.level_from_json(json.loads(io.dumps(io.level_to_json(lv))))
    assert lv2.ordering == "revlex" and np.array_equal(lv.K, lv2.K)
    u = ParameterField({(1, -2): 0.25 - 0.5j, (0, 3): 0.1})
    u2 = io.params_from_json(json.loads(io.dumps(io.params_to_json(u))))
    assert u2[-1, 2] == np.conj(u[1, -2]) and u2[0, 3] == 0.1
    with pytest.raises(InvalidInput):
        io.params_from_json({"entries": [{"i": -1, "j": 0, "re": 0, "im": 0}]})


def test_run_config_validation():
    with pytest.raises(InvalidInput):
        RunConfig("verify", grid=100)
    with pytest.raises(InvalidInput):
        RunConfig("verify", tol=2.0)
    with pytest.raises(InvalidInput):
        RunConfig("verify", rect=(-1, 2))
    assert threads_from_env({"BICIRCLE_THREADS": "4"}) == 4
    with pytest.raises(InvalidInput):
        threads_from_env({"BICIRCLE_THREADS": "many"})


def test_moments_command(files):
    d = files["dir"]
    assert run(["moments", "--density", files["one"], "--kmax", 4, "--jmax", 4, "-o", d / "leb.json"]) == 0
    t = io.moments_from_json(io.read_json(d / "leb.json"))
    D = t.dense()
    assert D[4, 4] == 1 and np.count_nonzero(np.abs(D) > 1e-15) == 1
    assert run(["moments", "--density", files["diag"], "--kmax", 4, "--jmax", 4, "--grid", 256, "-o", d / "m.json"]) == 0
    e = [x for x in io.read_json(d / "m.json")["entries"] if (x["k"], x["j"]) == (1, 1)][0]
    assert abs(e["re"] - 0.5) < 1e-12
    assert run(["moments", "--density", files["diag"], "--kmax", 4, "--jmax", 4, "--grid", 8]) == 2


def test_commands_are_deterministic(files):
    d = files["dir"]
    for k in (1, 2):
        assert run(["verify", "--density", files["diag"], "--rect", 2, 2, "-o", d / f"v{k}.json"]) == 0
    assert (d / "v1.json").read_bytes() == (d / "v2.json").read_bytes()


def test_verify_command(files):
    d = files["dir"]
    run(["moments", "--density", files["one"], "--kmax", 2, "--jmax", 2, "-o", d / "leb.json"])
    assert run(["verify", "--moments", d / "leb.json", "--rect", 2, 2, "-o", d / "r.json"]) == 0
    rows = io.read_json(d / "r.json")
    assert max(r["residual"] for r in rows) < 1e-12
    assert set(rows[0]) >= {"relation", "level", "residual", "tol", "pass", "vacuous"}
    assert run(["verify", "--density", files["diag"], "--rect", 3, 3, "--tol", 1e-8, "-o", d / "r.json"]) == 0
    bad = io.read_json(d / "leb.json")
    bad["entries"].append({"k": 0, "j": -1, "re": 0.3, "im": 0.0})
    io.write_json(d / "bad.json", bad)
    assert run(["verify", "--moments", d / "bad.json", "--rect", 2, 2]) == 2


def test_verify_failure_exit_code(files, tmp_path):
    # a tolerance below round-off turns the report red
    assert run(["verify", "--density", files["diag"], "--rect", 2, 2, "--tol", 1e-30, "-o", tmp_path / "r.json"]) == 1


def test_params_detect_extend_roundtrip(files):
    d = files["dir"]
    run(["moments", "--density", files["sep"], "--kmax", 4, "--jmax", 4, "-o", d / "sep_m.json"])
    assert run(["params", "--moments", d / "sep_m.json", "--rect", 3, 3, "-o", d / "u.json"]) == 0
    u = io.params_from_json(io.read_json(d / "u.json"))
    assert abs(u[1, 0] - 0.5) < 1e-10
    run(["moments", "--density", files["one"], "--kmax", 4, "--jmax", 4, "-o", d / "leb.json"])
    assert run(["detect", "--moments", d / "leb.json", "--base", 0, 0, "-o", d / "bs.json"]) == 0
    assert io.read_json(d / "bs.json")["pass"] is True
    assert run(["detect", "--density", files["diag"], "--base", 0, 0, "-o", d / "bs.json"]) == 1
    assert run(["roundtrip", "--density", files["diag"], "--base", 1, 1, "--to", 3, 3, "--tol", 1e-6,
                "-o", d / "rt.json"]) == 0
    rt = io.read_json(d / "rt.json")
    assert rt["pass"] and {"base", "target", "level_residuals", "parameter_residuals", "density_residual"} <= set(rt)
    assert run(["extend", "--density", files["diag"], "--base", 1, 1, "--to", 3, 3, "-o", d / "e.json"]) == 0
    ext = io.read_json(d / "e.json")
    assert len(ext["levels"]) == 16 and ext["audit_residual"] < 1e-10


def test_ortho_coeffs_stability(files, tmp_path):
    assert run(["ortho", "--density", files["diag"], "--level", 1, 1, "-o", tmp_path / "o.json"]) == 0
    lv = io.level_from_json(io.read_json(tmp_path / "o.json"))
    assert np.isclose(lv.K[0, 0], 2 / np.sqrt(3))
    assert run(["coeffs", "--density", files["diag"], "--level", 1, 1, "-o", tmp_path / "c.json"]) == 0
    c = io.read_json(tmp_path / "c.json")
    assert np.isclose(c["K1"][0][0][0], 0.5)
    assert run(["stability", "--density", files["diag"], "-o", tmp_path / "s.json"]) == 0
    unstable = tmp_path / "u.json"
    io.write_json(unstable, {"deg_z": 1, "deg_w": 1, "coeffs": [[[2, 0], [0, 0]], [[0, 0], [-1, 0]]]})
    assert run(["stability", "--density", unstable, "-o", tmp_path / "s.json"]) == 1
    assert run(["moments", "--density", unstable, "--kmax", 1, "--jmax", 1]) == 2


@pytest.mark.parametrize("content", ["", "{", "[]", '{"deg_z": 1}', '{"deg_z": 0, "deg_w": 0, "coeffs": [[[0, 0]]]}'])
def test_malformed_inputs_exit_2(tmp_path, content):
    path = tmp_path / "p.json"
    path.write_text(content)
    assert run(["moments", "--density", path, "--kmax", 1, "--jmax", 1]) == 2


def test_usage_errors_exit_2():
    assert main(["nonsense"]) == 2
    assert main(["verify", "--rect", "1"]) == 2
    assert main(["verify", "--rect", "1", "1"]) == 2
