import csv
import json

import pytest

from qtransfer import cli
from qtransfer import config as cfgmod
from qtransfer.errors import ConfigError


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


HARVEST = """
[run]
scenario = harvest
[detector_B]
x = 1.0
[sweep]
parameter = detector_B.x
start = 1
stop = 5
steps = 5
"""

TELEPORT = """
[run]
scenario = teleport
[input]
p = 0.5
[strategy]
name = phase_corrected
"""

NOGO_EMPTY = """
[run]
scenario = nogo
[nogo]
field_dim = 4
couple_A = false
couple_B = false
lambdas = 0.005, 0.01, 0.02, 0.05
"""


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_harvest_sweep(tmp_path):
    out = tmp_path / "h"
    assert cli.main(["--config", write(tmp_path, HARVEST), "--out", str(out), "--threads", "3"]) == 0
    rows = read_csv(out / "harvest.csv")
    assert len(rows) == 5
    xs = [float(r["detector_B.x"]) for r in rows]
    assert xs == sorted(xs) and len(set(xs)) == 5
    for r in rows:
        m = abs(complex(float(r["M_re"]), float(r["M_im"])))
        assert float(r["L_AA_err"]) <= 1e-8 * float(r["L_AA"])
        assert float(r["M_err"]) <= 1e-8 * m
    raw = (out / "harvest.csv").read_bytes()
    assert raw.count(b"\r\n") == 6  # RFC 4180 line ends


def test_outputs_byte_identical(tmp_path):
    cfg = write(tmp_path, HARVEST)
    cli.main(["--config", cfg, "--out", str(tmp_path / "a"), "--threads", "1"])
    cli.main(["--config", cfg, "--out", str(tmp_path / "b"), "--threads", "4"])
    for name in ("harvest.csv", "harvest.jsonl"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_teleport_identical_detectors_optimal(tmp_path):
    text = TELEPORT + "[detector_A]\ngap = 1.0\n[detector_B]\ngap = 1.0\nx = 1.5\n"
    out = tmp_path / "t"
    assert cli.main(["--config", write(tmp_path, text), "--out", str(out)]) == 0
    rec = json.loads((out / "teleport.jsonl").read_text().splitlines()[0])
    assert set(rec) >= {"p", "coefficients", "strategy", "negativity_closed_form", "negativity_exact_channel"}
    assert rec["negativity_closed_form"] > 0
    assert rec["negativity_closed_form"] == pytest.approx(rec["negativity_harvested"], rel=1e-12)
    assert rec["negativity_exact_channel"] == pytest.approx(rec["negativity_closed_form"], abs=1e-6)


def test_nogo_empty_couplings(tmp_path):
    out = tmp_path / "n"
    assert cli.main(["--config", write(tmp_path, NOGO_EMPTY), "--out", str(out)]) == 0
    rows = read_csv(out / "nogo.csv")
    assert len(rows) == 4 and all(float(r["negativity"]) == 0 for r in rows)


def test_compare_verdict(tmp_path):
    text = """
[run]
scenario = compare
[coefficients]
L_AA = 0.001
L_BB = 0.001
M_re = 0.0015
M_im = 0.0005
[nogo]
field_dim = 4
"""
    out = tmp_path / "c"
    assert cli.main(["--config", write(tmp_path, text), "--out", str(out)]) == 0
    row = read_csv(out / "compare.csv")[0]
    assert row["transmission_verdict"] == cli.TRANSMISSION_VERDICT
    assert float(row["harvested_negativity_2nd"]) == pytest.approx(float(row["teleported_negativity_2nd"]))


def test_json_config(tmp_path):
    data = {"run": {"scenario": "teleport"}, "coefficients": {"L_AA": 0.01, "L_BB": 0.01, "M_re": 0.02}, "input": {"p": 0.3}}
    out = tmp_path / "j"
    assert cli.main(["--config", write(tmp_path, json.dumps(data), "run.json"), "--out", str(out)]) == 0
    rec = json.loads((out / "teleport.jsonl").read_text())
    assert rec["p"] == 0.3


def test_environment_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("QTRANSFER_OUT", str(tmp_path / "env_out"))
    monkeypatch.setenv("QTRANSFER_THREADS", "2")
    args = cli.build_parser().parse_args(["--config", write(tmp_path, TELEPORT)])
    cfg = cli.resolve(args)
    assert cfg.out == str(tmp_path / "env_out") and cfg.threads == 2
    args = cli.build_parser().parse_args(["--config", write(tmp_path, TELEPORT), "--threads", "5", "--out", "x"])
    cfg = cli.resolve(args)
    assert cfg.threads == 5 and cfg.out == "x"


def test_seed_reaches_random_models(tmp_path):
    text = "[run]\nscenario = nogo\n[nogo]\nmodel = random\nfield_dim = 2\nlambdas = 0.005, 0.01, 0.02, 0.05\n"
    cfg = write(tmp_path, text)
    cli.main(["--config", cfg, "--out", str(tmp_path / "s1"), "--seed", "1"])
    cli.main(["--config", cfg, "--out", str(tmp_path / "s2"), "--seed", "2"])
    cli.main(["--config", cfg, "--out", str(tmp_path / "s3"), "--seed", "1"])
    a, b, c = ((tmp_path / d / "nogo.csv").read_bytes() for d in ("s1", "s2", "s3"))
    assert a == c and a != b


@pytest.mark.parametrize(
    "text,needle",
    [
        ("[run]\nscenario = teleport\n[input]\np = 1.5\n", "line 4"),
        ("[run]\nscenario = flying\n", "scenario"),
        ("[run]\nscenario = harvest\n[field]\ncolour = red\n", "unknown key"),
        ("[run]\nscenario = harvest\n[sweep]\nparameter = field.nothing\nstart = 0\nstop = 1\nsteps = 2\n", "unknown parameter"),
        ("[run]\nscenario = harvest\n[field]\ndimension = 1\n", "infrared"),
        ("no section header\n", "parse"),
        ("[run]\n", "scenario"),
    ],
)
def test_config_errors_exit_2(tmp_path, capsys, text, needle):
    assert cli.main(["--config", write(tmp_path, text), "--out", str(tmp_path / "o")]) == 2
    assert needle in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path):
    assert cli.main(["--config", str(tmp_path / "missing.ini")]) == 2


def test_nonconvergence_exit_3(tmp_path):
    text = HARVEST + "[quadrature]\ninitial_nodes = 4\nmax_nodes = 8\nrel_tol = 1e-14\nabs_tol = 1e-30\n"
    assert cli.main(["--config", write(tmp_path, text), "--out", str(tmp_path / "o")]) == 3


def test_invariant_violation_exit_4(tmp_path):
    text = "[run]\nscenario = nogo\n[nogo]\nmodel = random\nfield_dim = 2\ntolerance = 0\nlambdas = 0.005, 0.01, 0.02, 0.05\n"
    assert cli.main(["--config", write(tmp_path, text), "--out", str(tmp_path / "o")]) == 4
    assert (tmp_path / "o" / "nogo_summary.jsonl").exists()


def test_sweep_of_integer_parameter(tmp_path):
    text = "[run]\nscenario = nogo\n[nogo]\nfield_dim = 2\nlambdas = 0.005, 0.01, 0.02, 0.05\n[sweep]\nparameter = nogo.field_dim\nstart = 2\nstop = 3\nsteps = 2\n"
    cfg = cfgmod.load(write(tmp_path, text))
    assert [cfg.at(v).nogo.field_dim for v in cfg.sweep.values()] == [2, 3]


def test_build_rejects_large_models():
    with pytest.raises(ConfigError):
        cfgmod.build({"run": {"scenario": "nogo"}, "nogo": {"field_dim": "40"}})
