import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segrejet.cli import run

HEIS = "Im(w) - abs2(z)"
PUSHED = "w = conj(w) + z^2 - conj(z)^2 + 2*i*z*conj(z)"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--json")
    return code, json.loads(text)


def test_finite_type():
    code, rep = call_json("finite-type", HEIS)
    assert code == 0 and rep["verdict"] == "yes"
    assert rep["values"]["lie"]["order"] == 2 and rep["values"]["hypersurface"]["order"] == 2
    code, rep = call_json("finite-type", "Im(w) - Re(w)*abs2(z)")
    assert code == 1
    assert rep["values"]["lie"]["verdict"] == rep["values"]["hypersurface"]["verdict"] == "no-up-to-order-K"


def test_criterion_payload():
    code, rep = call_json("criterion", HEIS, HEIS, "--F", "z")
    assert code == 0 and rep["schema"] == 1 and rep["verdict"] == "pass"
    assert rep["series"]["G"][0]["text"] == "w"
    assert rep["series"]["G"][0]["terms"] == [[[0, 1], ["1/1", "0/1"]]]


def test_criterion_failure_with_oracle():
    code, rep = call_json("criterion", HEIS, HEIS, "--F", "z + w", "--oracle")
    assert code == 1
    assert rep["checks"] == {"independence": "fail", "oracle_extension_exists": "fail"}
    assert rep["values"]["witness"] is not None


def test_normalize_pushed():
    code, rep = call_json("normalize", PUSHED)
    assert code == 0
    assert set(rep["checks"].values()) == {"pass"}
    assert rep["series"]["Q"][0]["text"] == "conj(w) + 2*i*z*conj(z)"
    assert rep["series"]["wtilde"][0]["text"] == "w - z^2"


def test_segre_chain_and_frame():
    code, rep = call_json("segre-chain", HEIS)
    assert code == 0 and rep["series"]["u2"][0]["text"] == "2*i*t1*t2"
    code, rep = call_json("segre-chain", "Im(w)")
    assert code == 1 and rep["checks"]["generic_rank"] == "fail"
    code, rep = call_json("frame", HEIS, "--base", "0,1")
    assert code == 0 and rep["series"]["Delta"]["text"] == "4*i*eta2"


def test_verify_map_and_reconstruct():
    code, rep = call_json("verify-map", HEIS, HEIS, "--F", "2*z", "--G", "4*w")
    assert code == 0
    code, rep = call_json("verify-map", HEIS, HEIS, "--F", "z", "--G", "2*w")
    assert code == 1 and rep["values"]["witness"] == {"component": 0, "exponent": [1, 1, 0], "coefficient": ["0/1", "2/1"]}
    code, rep = call_json("reconstruct", HEIS, PUSHED, "--F", "z")
    assert code == 0 and rep["series"]["G"][0]["text"] == "w + z^2"


def test_equivalence():
    code, rep = call_json("equivalence", HEIS, PUSHED, "--F", "z")
    assert code == 0 and rep["verdict"] == "equivalent"
    code, rep = call_json("equivalence", HEIS, "Im(w)", "--F", "z")
    assert code == 1 and rep["values"]["reason"] == "NonInvertible"


def test_jet_determine_raises_order():
    code, rep = call_json("jet-determine", HEIS, "--F", "i*z", "--k0", "2", "--direction", "0,1")
    assert code == 0
    v = rep["values"]
    assert (v["l"], v["k"], v["e"]) == (1, 4, 1) and v["working_order"] > 6
    assert rep["series"]["Gjet"][0]["text"] == "w"


def test_ball_model():
    code, rep = call_json("ball-model", "--F", "2*z")
    assert code == 0 and rep["series"]["G"][0]["text"] == "4*w"
    code, rep = call_json("ball-model", "--F", "z^2")
    assert code == 1


def test_file_and_stdin_inputs(tmp_path, monkeypatch):
    p = tmp_path / "m.txt"
    p.write_text(HEIS + "\n")
    assert call("finite-type", f"@{p}")[0] == 0
    monkeypatch.setattr(sys, "stdin", io.StringIO(HEIS))
    assert call("finite-type", "-")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["normalize", "Im(w) - abs2(z"],
        ["normalize", "Im(w) - z*abs2(z)"],
        ["criterion", HEIS],
        ["criterion", HEIS, HEIS],
        ["bogus"],
        ["finite-type", "@/nonexistent/file"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert call(*argv)[0] == 2


def test_plain_output():
    code, text = call("criterion", HEIS, HEIS, "--F", "z")
    assert "verdict: pass" in text and "G[1] = w" in text


@settings(max_examples=5)
@given(st.sampled_from(["normalize", "finite-type", "segre-chain"]), st.integers(0, 3))
def test_json_is_deterministic(cmd, seed):
    a = call(cmd, PUSHED if cmd == "normalize" else HEIS, "--seed", str(seed), "--json")
    b = call(cmd, PUSHED if cmd == "normalize" else HEIS, "--seed", str(seed), "--json")
    assert a == b


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "segrejet", "criterion", HEIS, HEIS, "--F", "z", "--json"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["verdict"] == "pass"
