import csv
import json

import numpy as np
import pytest

from sepgamma import io
from sepgamma.cli import SWEEP_HEADER, main
from sepgamma.crossnorm import SearchConfig, certify
from sepgamma.errors import ValidationError
from sepgamma.states import RandomSpec, bell, random_state, werner

FAST_FLAGS = ["--restarts", "4", "--max-iters", "400"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- file formats -------------------------------------------------------------------


def test_matrix_round_trip(rng):
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_array_equal(io.decode_matrix(json.loads(json.dumps(io.encode_matrix(m)))), m)


def test_decode_matrix_rejects_bad_input():
    with pytest.raises(ValidationError):
        io.decode_matrix([[1, 2], [3, 4]])
    with pytest.raises(ValidationError):
        io.decode_matrix([[[1, 0]]], shape=(2, 2))
    with pytest.raises(ValidationError):
        io.decode_matrix("abc")


def test_state_round_trip():
    rho = random_state(RandomSpec(1), (2, 3))
    back = io.state_from_obj(json.loads(io.dumps(io.state_to_obj(rho))))
    np.testing.assert_array_equal(back.matrix, rho.matrix)
    assert back.dims == (2, 3)
    with pytest.raises(ValidationError):
        io.state_from_obj({"kind": "nope"})


def test_separable_round_trip():
    rho = random_state(RandomSpec(2, "separable"), (2, 2))
    dec = io.decomposition_from_obj(json.loads(io.dumps(io.separable_to_obj(rho.provenance))))
    np.testing.assert_array_equal(dec.weights, rho.provenance.weights)


def test_certificate_bytes_deterministic():
    cfg = SearchConfig(restarts=4, max_iters=400)
    a = io.dumps(io.certificate_to_obj(certify(werner(0.2), cfg), werner(0.2)))
    b = io.dumps(io.certificate_to_obj(certify(werner(0.2), cfg), werner(0.2)))
    assert a == b
    keys = list(json.loads(a))
    assert keys == ["verdict", "gamma_lower", "gamma_upper", "lower_method", "entanglement_measure",
                    "evidence", "reconstruction_error", "config", "tool_version", "state"]


def test_verify_detects_tampering():
    obj = io.certificate_to_obj(certify(bell(), SearchConfig(restarts=2, max_iters=100)), bell())
    assert io.verify_certificate(obj).ok
    obj["evidence"]["value"] = obj["evidence"]["value"] + 0.5
    assert not io.verify_certificate(obj).ok


def test_verify_detects_inflated_witness():
    obj = io.certificate_to_obj(certify(bell(), SearchConfig(restarts=2, max_iters=100)), bell())
    a = io.decode_matrix(obj["evidence"]["A"]) * 1.5
    obj["evidence"]["A"] = io.encode_matrix(a)
    obj["evidence"]["value"] *= 1.5
    report = io.verify_certificate(obj)
    assert not report.ok
    assert any(name == "witness contractions" and not ok for name, ok, _ in report.checks)


# --- CLI -------------------------------------------------------------------------------


def test_cli_gen_bounds(tmp_path, capsys):
    state = tmp_path / "bell.json"
    assert run(capsys, "gen", "bell", "--out", str(state))[0] == 0
    code, out, _ = run(capsys, "bounds", "--in", str(state), *FAST_FLAGS)
    assert code == 0
    res = json.loads(out)
    assert res["gamma_lower"] == pytest.approx(2.0, abs=1e-9)
    assert res["gamma_upper"] <= 2.01
    assert len(res["spectrum"]) == 4


def test_cli_certify_and_verify(tmp_path, capsys):
    state, cert = tmp_path / "w.json", tmp_path / "cert.json"
    run(capsys, "gen", "werner", "--p", "0.6", "--out", str(state))
    assert run(capsys, "certify", "--in", str(state), "--out", str(cert), *FAST_FLAGS)[0] == 0
    assert json.loads(cert.read_text())["verdict"] == "Entangled"
    code, out, _ = run(capsys, "certify", "--verify", str(cert))
    assert code == 0 and "verified" in out

    obj = json.loads(cert.read_text())
    obj["evidence"]["value"] = 3.0
    cert.write_text(json.dumps(obj))
    assert run(capsys, "certify", "--verify", str(cert))[0] == 1


def test_cli_seeded_separable(tmp_path, capsys):
    state, prov, cert = tmp_path / "s.json", tmp_path / "p.json", tmp_path / "c.json"
    code, _, _ = run(capsys, "gen", "random", "--kind", "separable", "--k", "5", "--dims", "2", "3",
                     "--seed", "4", "--out", str(state), "--provenance-out", str(prov))
    assert code == 0
    assert run(capsys, "certify", "--in", str(state), "--seed-dec", str(prov), "--out", str(cert),
               *FAST_FLAGS)[0] == 0
    obj = json.loads(cert.read_text())
    assert obj["verdict"] == "Separable"
    assert run(capsys, "certify", "--verify", str(cert))[0] == 0


def test_cli_certify_deterministic(tmp_path, capsys):
    state = tmp_path / "r.json"
    run(capsys, "gen", "random", "--seed", "8", "--out", str(state))
    outs = []
    for name in ("a.json", "b.json"):
        run(capsys, "certify", "--in", str(state), "--out", str(tmp_path / name), *FAST_FLAGS)
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_cli_threads_do_not_change_output(tmp_path, capsys, monkeypatch):
    state = tmp_path / "r.json"
    run(capsys, "gen", "random", "--kind", "separable", "--seed", "3", "--out", str(state))
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("SEPGAMMA_THREADS", threads)
        out = tmp_path / f"c{threads}.json"
        run(capsys, "certify", "--in", str(state), "--out", str(out), *FAST_FLAGS)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_cli_sweep(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "werner", "--param-range", "0", "1", "--steps", "5",
                     "--out", str(out), *FAST_FLAGS)
    assert code == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == SWEEP_HEADER
    assert len(rows) == 6
    for row in rows[1:]:
        p, lo, hi = float(row[0]), float(row[1]), float(row[2])
        assert lo <= hi + 1e-9
        assert float(row[5]) == pytest.approx(min((1 - 3 * p) / 4, (1 + p) / 4), abs=1e-12)
    assert rows[-1][6] == "Entangled"


def test_cli_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "checks passed" in out
    code, out, _ = run(capsys, "selftest", "--mutate", "realignment")
    assert code == 1 and "FAIL" in out


def test_cli_exit_codes(tmp_path, capsys):
    assert run(capsys, "bounds", "--in", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "certify", "--in", str(bad))[0] == 2
    notpsd = tmp_path / "np.json"
    notpsd.write_text(json.dumps({"kind": "density", "dims": [1, 2],
                                  "matrix": io.encode_matrix(np.diag([1.5, -0.5]))}))
    code, _, err = run(capsys, "bounds", "--in", str(notpsd))
    assert code == 2 and "positive" in err
    assert run(capsys, "gen", "werner")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "gen", "werner", "--p", "0.5", "--restarts", "0")[0] == 2


def test_cli_gen_random_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(capsys, "gen", "random", "--kind", "separable", "--k", "4", "--seed", "7", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    io.state_from_obj(json.loads(paths[0].read_text()))


def test_cli_state_round_trip_exact(tmp_path, capsys):
    path = tmp_path / "w.json"
    run(capsys, "gen", "werner", "--p", "0.5", "--out", str(path))
    rho = io.state_from_obj(io.read_json(path))
    np.testing.assert_array_equal(rho.matrix, werner(0.5).matrix)
    assert io.dumps(io.state_to_obj(rho)) == path.read_text()


def test_cli_bounds_examples(tmp_path, capsys):
    mixed = tmp_path / "mm.json"
    run(capsys, "gen", "maximally_mixed", "--out", str(mixed))
    res = json.loads(run(capsys, "bounds", "--in", str(mixed), *FAST_FLAGS)[1])
    assert res["gamma_lower"] == 1.0 and res["lower_method"] == "clamp"
    assert res["spectrum"][0] == pytest.approx(0.5)

    prod = tmp_path / "prod.json"
    rng = np.random.default_rng(0)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    r1, r2 = a @ a.conj().T, b @ b.conj().T
    m = np.kron(r1 / np.trace(r1), r2 / np.trace(r2))
    prod.write_text(json.dumps({"kind": "density", "dims": [2, 3], "matrix": io.encode_matrix(m)}))
    res = json.loads(run(capsys, "bounds", "--in", str(prod), *FAST_FLAGS)[1])
    assert res["gamma_upper"] == pytest.approx(1.0, abs=1e-9)


def test_cli_certify_werner_02_not_entangled(tmp_path, capsys):
    state, cert = tmp_path / "w.json", tmp_path / "c.json"
    run(capsys, "gen", "werner", "--p", "0.2", "--out", str(state))
    assert run(capsys, "certify", "--in", str(state), "--out", str(cert))[0] == 0
    obj = json.loads(cert.read_text())
    assert obj["verdict"] != "Entangled" and obj["gamma_lower"] == 1.0


def test_sweep_columns_follow_oracles(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    run(capsys, "sweep", "werner", "--steps", "21", "--out", str(out), *FAST_FLAGS)
    rows = list(csv.DictReader(out.read_text().splitlines()))
    p = np.array([float(r["param"]) for r in rows])
    ppt = np.array([float(r["ppt_min_eig"]) for r in rows])
    lo = np.array([float(r["measure_lo"]) for r in rows])
    assert np.all(ppt[p <= 0.30 + 1e-12] > 0) and np.all(ppt[p >= 0.35 - 1e-12] < 0)
    np.testing.assert_allclose(lo, np.maximum(0, (3 * p - 1) / 2), atol=1e-9)
    assert np.all(np.diff(lo) >= -1e-12)
