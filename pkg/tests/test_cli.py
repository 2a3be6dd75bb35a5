import json
import math

import numpy as np
import pytest

from chanent import channels as ch
from chanent.cli import main
from chanent.errors import ParseError
from chanent.serialize import channel_from_dict, channel_to_dict, load_channel, loads_channel, read_csv, to_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_entropy_identity_bits(capsys):
    code, out, _ = run(capsys, "entropy", "--named", "identity", "--params", '{"d": 2}', "--log-base", "2")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["h_map"]) < 1e-10 and abs(doc["h_channel"] + 1) < 1e-9
    assert doc["metadata"]["seed"] == 0xC0FFEE and doc["log_base"] == "2"


def test_entropy_depolarizing_bits(capsys):
    code, out, _ = run(capsys, "entropy", "--named", "depolarizing", "--d", "2", "--log-base", "2")
    doc = json.loads(out)
    assert (abs(doc["h_map"] - 2), abs(doc["h_channel"] - 1), abs(doc["gap"])) < (1e-12, 1e-12, 1e-12)
    assert "optimizer" in doc


def test_entropy_channel_file(tmp_path, capsys):
    path = tmp_path / "ch.json"
    path.write_text(json.dumps(channel_to_dict(ch.amplitude_damping(0.4))))
    code, out, _ = run(capsys, "entropy", "--channel", str(path), "--restarts", "2")
    assert code == 0 and json.loads(out)["gap"] >= -1e-6


def test_malformed_json(capsys):
    code, _, err = run(capsys, "entropy", "--channel", '{"kind": "kraus", "ops": [')
    assert code == 2 and "char" in err and "line 1" in err


def test_not_cptp_exit(capsys):
    doc = channel_to_dict(ch.Channel.from_kraus([1.1 * np.eye(2)]))
    code, _, _ = run(capsys, "entropy", "--channel", json.dumps(doc))
    assert code == 3


def test_verify_unital_exit_codes(capsys):
    code, out, _ = run(capsys, "verify-unital", "--named", "identity", "--params", '{"d": 2}', "--restarts", "2")
    assert code == 0 and json.loads(out)["all_pass"]
    code, out, _ = run(capsys, "verify-unital", "--named", "pauli_mixture", "--params", '{"q": [0.5, 0.2, 0.2, 0.1]}')
    assert code == 0 and all(c["pass"] for c in json.loads(out)["checks"])
    code, _, _ = run(capsys, "verify-unital", "--named", "amplitude_damping", "--params", '{"gamma": 0.5}')
    assert code == 4


def test_verify_unital_failing_check(capsys):
    # an impossible tolerance makes a check fail with exit 1
    code, out, _ = run(capsys, "verify-unital", "--named", "pauli_mixture", "--params", '{"q": [0.5, 0.2, 0.2, 0.1]}',
                       "--tol", "concavity=-10")
    doc = json.loads(out)
    assert code == 1 and not doc["all_pass"]
    assert doc["metadata"]["tolerances"]["concavity"] == -10


def test_fig1_row_counts(capsys):
    code, out, _ = run(capsys, "fig1", "--d-list", "2,3,4", "--trials", "3")
    meta, rows = read_csv(out)
    assert code == 0 and len(rows) == 12
    assert all(r["row"] == "aggregate" for r in rows)
    assert meta["seed"] == 0xC0FFEE and meta["version"] and meta["tolerances"]
    code, out, _ = run(capsys, "fig1", "--d-list", "2", "--trials", "3", "--per-trial", "--nu", "delta")
    assert len(read_csv(out)[1]) == 4


def test_fig1_values(capsys):
    _, out, _ = run(capsys, "fig1", "--d-list", "2", "--trials", "4", "--nu", "delta", "--seed", "5")
    (row,) = read_csv(out)[1]
    d = float(row["mean_D"])
    assert abs(float(row["entropy_estimate"]) - (math.log(2) - d)) < 1e-15
    assert abs(float(row["reference"]) - (math.log(2) - 0.5)) < 1e-15


def test_fig1_rejects_unknown_kind(capsys):
    code, _, _ = run(capsys, "fig1", "--d-list", "2", "--nu", "gaussian")
    assert code == 2


def test_conjecture_csv(capsys):
    code, out, _ = run(capsys, "conjecture", "--d-list", "2,4", "--trials", "3")
    rows = read_csv(out)[1]
    assert code == 0 and [int(r["d"]) for r in rows] == [2, 4]
    assert "mean_d_phi_plus_lower_bound" in rows[0]


def test_spectrum_identity(capsys):
    code, out, _ = run(capsys, "spectrum", "--named", "identity", "--params", '{"d": 3}', "--nu", "delta")
    meta, rows = read_csv(out)
    ev = [float(r["eigenvalue"]) for r in rows]
    assert code == 0 and len(ev) == 9
    assert abs(ev[0] - 1) < 1e-12 and max(abs(x) for x in ev[1:]) < 1e-12
    assert meta["identity_deviation"] < 1e-10


def test_free_moments_json(capsys):
    code, out, _ = run(capsys, "free-moments", "--d", "4", "--trials", "5")
    doc = json.loads(out)
    assert code == 0 and doc["trials"] == 5 and {"z_m1", "z_m2"} <= set(doc)


def test_random_channel_round_trip(capsys):
    code, out, _ = run(capsys, "random-channel", "--d", "3", "--seed", "9")
    phi = loads_channel(out)
    assert code == 0 and np.allclose(phi.choi, ch.random_channel(3, seed=9).choi, atol=1e-12)


@pytest.mark.parametrize("argv", [
    ["fig1", "--d-list", "2,3", "--trials", "3"],
    ["conjecture", "--d-list", "2", "--trials", "3"],
    ["entropy", "--named", "random", "--d", "2", "--restarts", "2"],
])
def test_byte_identical_reruns(tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_channel_json_round_trip():
    phi = ch.random_channel(2, k=3, seed=1)
    again = channel_from_dict(json.loads(json.dumps(channel_to_dict(phi))))
    assert all(np.array_equal(a, b) for a, b in zip(again.kraus, phi.kraus))
    assert np.allclose(again.choi, phi.choi, atol=1e-14)
    named = load_channel('{"kind": "named", "name": "depolarizing", "params": {"d": 3}}')
    assert np.allclose(named.choi, ch.depolarizing(3).choi)


def test_channel_json_errors():
    with pytest.raises(ParseError):
        loads_channel('{"kind": "kraus", "dim_in": 2, "dim_out": 2, "ops": [[[1, 0]]]}')
    with pytest.raises(ParseError):
        loads_channel('{"kind": "other"}')
    with pytest.raises(ParseError):
        loads_channel('{"kind": "kraus", "dim_in": 2}')


def test_csv_floats_round_trip():
    x = 0.1 + 0.2
    text = to_csv({"seed": 1}, ["v"], [[x]])
    meta, rows = read_csv(text)
    assert meta == {"seed": 1} and float(rows[0]["v"]) == x
