import csv
import io
import json
import math

import numpy as np
import pytest

from rindler_teleport.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_fidelity_sweep_header_and_first_row(capsys):
    code, out, err = run(capsys, "fidelity-sweep", "--r-max", "0.2")
    assert code == EXIT_OK
    table = rows(out)
    assert table[0] == ["r", "avg_fidelity", "avg_fidelity_closed_form"]
    assert table[1] == ["0", "1", "1"]
    assert len(table) == 6
    assert json.loads(err.strip().splitlines()[-1])["config"]["command"] == "fidelity-sweep"


def test_entropy_and_gain_headers(capsys):
    _, out, _ = run(capsys, "entropy-sweep", "--r-max", "0.1")
    assert rows(out)[0] == ["r", "S_pre", "S_post", "S_vac"]
    _, out, _ = run(capsys, "gain-sweep", "--r-max", "0.1")
    t = rows(out)
    assert t[0] == ["r", "dS_gain", "dS_gain_tsm"]
    assert float(t[1][1]) == pytest.approx(1, abs=1e-9)


def test_grid_endpoints_are_exact(capsys):
    _, out, _ = run(capsys, "fidelity-sweep", "--r-min", "0.1", "--r-max", "0.3", "--r-step", "0.1")
    assert [float(r[0]) for r in rows(out)[1:]] == [0.1, 0.2, 0.3]


def test_sweep_is_deterministic_and_jobs_invariant(capsys):
    args = ("gain-sweep", "--r-max", "1", "--r-step", "0.25")
    outs = [run(capsys, *args)[1], run(capsys, *args)[1], run(capsys, *args, "--jobs", "3")[1]]
    assert outs[0] == outs[1] == outs[2]


def test_out_and_manifest_files(tmp_path, capsys):
    out, man = tmp_path / "f.csv", tmp_path / "m.jsonl"
    for _ in range(2):
        code, stdout, err = run(capsys, "fidelity-sweep", "--r-max", "0.1", "--out", str(out), "--manifest", str(man))
        assert code == EXIT_OK and stdout == "" and err == ""
    assert out.read_text().startswith("r,avg_fidelity")
    lines = man.read_text().splitlines()
    assert len(lines) == 2 and json.loads(lines[0])["version"]


@pytest.mark.parametrize("argv", [
    ("fidelity-sweep", "--r-step", "0"),
    ("fidelity-sweep", "--r-min", "2", "--r-max", "1"),
    ("fidelity-sweep", "--r-min", "-1"),
    ("fidelity-sweep", "--cutoff", "abc"),
    ("fidelity-sweep", "--quadrature-points", "4"),
    ("state-dump",),
    ("state-dump", "--r", "0.5", "--alpha-re", "1", "--beta-re", "1"),
    ("convert",),
])
def test_config_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_CONFIG
    assert "config error" in err


def test_unwritable_output(tmp_path, capsys):
    code, _, err = run(capsys, "fidelity-sweep", "--r-max", "0.1", "--out", str(tmp_path / "no" / "such" / "f.csv"))
    assert code == EXIT_IO and "I/O error" in err


def convert_table(text):
    return {r[0]: r[1] for r in rows(text)[1:]}


def test_convert_physical(capsys):
    code, out, _ = run(capsys, "convert", "--acceleration", "1e10")
    assert code == EXIT_OK
    t = convert_table(out)
    assert float(t["a_over_c"]) == pytest.approx(1e10 / 299792458.0, rel=1e-15)
    assert float(t["T_U"]) == pytest.approx(1.054571817e-34 * 1e10 / (2 * math.pi * 299792458.0 * 1.380649e-23), rel=1e-9)


def test_convert_earth_gravity_underflows(capsys):
    _, out, _ = run(capsys, "convert", "--omega-r", "1e3", "--acceleration", "9.81")
    t = convert_table(out)
    assert float(t["r"]) == 0 and t["r_underflow"] == "true"
    assert float(t["T_U"]) == pytest.approx(3.98e-20, rel=1e-2)


def test_convert_omega(capsys):
    _, out, _ = run(capsys, "convert", "--Omega", "0.2")
    t = convert_table(out)
    assert float(t["tanh_r"]) == pytest.approx(math.exp(-0.2 * math.pi), rel=1e-14)


def dump(capsys, provenance, r="0.5"):
    code, out, _ = run(capsys, "state-dump", "--r", r, "--alpha-re", "0.6", "--beta-im", "0.8",
                       "--l", "1", "--m", "1", "--provenance", provenance)
    assert code == EXIT_OK
    body = [l for l in out.splitlines() if not l.startswith("#")]
    meta = dict(l[2:].split("=", 1) for l in out.splitlines() if l.startswith("# "))
    entries = rows("\n".join(body))
    assert entries[0] == ["row", "col", "re", "im"]
    n = int(meta["cutoff"])
    m = np.zeros((n, n), complex)
    for i, j, re, im in entries[1:]:
        m[int(i), int(j)] = complex(float(re), float(im))
    return m, meta


def test_state_dump_provenances_agree(capsys):
    a, meta = dump(capsys, "analytic")
    b, _ = dump(capsys, "numeric")
    assert np.max(np.abs(a - b)) <= 1e-10
    assert abs(np.trace(a) - 1) <= 1e-12
    assert float(meta["fidelity"]) == pytest.approx(float(meta["fidelity_closed_form"]), abs=1e-12)
