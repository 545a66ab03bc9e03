import csv
import io
import json

import numpy as np
import pytest

from hua5 import cli
from hua5.conditions import check_mean, check_restriction
from hua5.hua import verify_hua
from hua5.report import (CSV_HEADER, SCHEMA_VERSION, dumps_csv, dumps_json, emit_report,
                         loads_json, spectrum_csv)
from hua5.sieve import WeightedSequence
from hua5.spectral import dft_grid


@pytest.fixture(scope="module")
def rep125():
    return verify_hua(125)


def test_json_roundtrip_hua(rep125):
    text = dumps_json(rep125)
    assert json.loads(text)["schema_version"] == SCHEMA_VERSION
    assert loads_json(text) == rep125
    assert dumps_json(loads_json(text)) == text


def test_json_roundtrip_condition():
    rep = check_restriction(WeightedSequence.from_values(np.ones(50)))
    assert loads_json(dumps_json(rep)) == rep


def test_json_plain_dict():
    d = {"b": [1, 2], "a": {"x": 1.5}}
    assert loads_json(dumps_json(d, kind="Sweep")) == d


def test_json_rejects_schema():
    with pytest.raises(ValueError):
        loads_json(json.dumps({"schema_version": "other", "kind": "x", "report": {}}))


def test_witness_recomputed_on_load(rep125):
    back = loads_json(dumps_json(rep125))
    assert sum(p * p for p in back.witness["primes"]) == 125


def test_csv_layout(rep125):
    rows = list(csv.reader(io.StringIO(dumps_csv(rep125))))
    assert rows[0] == CSV_HEADER
    sections = {r[0] for r in rows[1:]}
    assert {"summary", "mean", "pseudorandom"} <= sections
    assert all(len(r) == 4 for r in rows)


def test_spectrum_csv_rows():
    g = dft_grid(np.arange(1.0, 65.0))
    rows = spectrum_csv(g).strip().split("\n")
    assert rows[0] == "r,re,im,abs" and len(rows) - 1 == 64


def test_emit_report_writes(tmp_path):
    rep = check_mean(WeightedSequence.from_values(np.ones(10)))
    path = tmp_path / "r.json"
    text = emit_report(rep, "json", path)
    assert path.read_text() == text
    with pytest.raises(ValueError):
        emit_report(rep, "xml")
    with pytest.raises(OSError):
        emit_report(rep, "json", tmp_path / "missing" / "r.json")


# -- CLI -----------------------------------------------------------------

def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--M", "125")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "HuaReport" and doc["report"]["brute_count"] >= 1


def test_cli_usage_errors(capsys):
    assert run(capsys, "verify", "--M", "126")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "regularity", "--N", "100", "--beta", "0.7")[0] == 2


def test_cli_csv_and_out(capsys, tmp_path):
    path = tmp_path / "o.csv"
    code, out, _ = run(capsys, "--output", "csv", "--out", str(path), "gauss-check", "--c-max", "31")
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[0] == ",".join(CSV_HEADER)


def test_cli_global_flag_after_subcommand(capsys):
    code, out, _ = run(capsys, "sumset-check", "--p-max", "50", "--output", "csv")
    assert code == 0 and out.startswith("section,")


def test_cli_config(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nM = 149\nw = 3\n")
    code, out, _ = run(capsys, "--config", str(cfg), "verify")
    assert code == 0 and json.loads(out)["report"]["M"] == 149
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--M", "173")
    assert json.loads(out)["report"]["M"] == 173  # flag wins
    bad = tmp_path / "bad.cfg"
    bad.write_text("nosuchkey = 1\n")
    assert run(capsys, "--config", str(bad), "verify", "--M", "125")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "absent.cfg"), "verify")[0] == 2


def test_cli_moments_spectrum(capsys, tmp_path):
    grid_csv = tmp_path / "grid.csv"
    code, out, _ = run(capsys, "--seed", "3", "moments", "--N", "256", "--kind", "random",
                       "--spectrum-csv", str(grid_csv))
    assert code == 0
    assert len(grid_csv.read_text().splitlines()) == 257
    assert json.loads(out)["report"]["condition"] == "restriction"


def test_cli_pseudorandom_and_scan(capsys):
    code, out, _ = run(capsys, "pseudorandom", "--N", "5000", "--w-sweep", "3,5", "--z", "20")
    assert code == 0 and len(json.loads(out)["report"]["rows"]) == 2
    code, out, _ = run(capsys, "scan", "--M0", "20", "--M1", "3000")
    assert code == 0 and json.loads(out)["report"]["exceptions"] == [29, 53]


def test_cli_regularity(capsys):
    code, out, _ = run(capsys, "regularity", "--N", "500", "--beta", "0.1", "--z", "10")
    assert code == 0
    assert json.loads(out)["report"]["verdict"] == "report-only"
