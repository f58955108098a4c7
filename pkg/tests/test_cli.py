from __future__ import annotations

import csv
import json
import math
import subprocess
import sys

import pytest

from qft import cli
from qft.errors import SpectralFailure

from conftest import FIXTURES


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def spec(name):
    return FIXTURES / f"{name}.json"


def read_csv(path):
    with path.open() as fh:
        return list(csv.DictReader(fh))


def test_zeta_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "zeta", spec("golden"), "--deg", 10, "--out", tmp_path)
    assert code == 0
    assert out.splitlines()[0] == "zeta_inverse: 1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0"
    assert "product: 1, -1, -1, 0" in out
    report = json.loads((tmp_path / "zeta.json").read_text())
    assert report["periodic_counts"]["counts"][:5] == [1, 3, 4, 7, 11]
    assert report["zeta_inverse"][1] == {"num": -1, "den": 1}
    poles = read_csv(tmp_path / "poles.csv")
    assert float(poles[0]["modulus"]) == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-8)


def test_zeta_without_determinant(capsys, tmp_path):
    code, out, _ = run(capsys, "zeta", spec("full3"), "--deg", 5, "--no-det", "--out", tmp_path)
    assert code == 0 and out.strip() == "zeta_inverse: 1, -3, 0, 0, 0, 0"
    assert not (tmp_path / "poles.csv").exists()


def test_entropy_even_sofic(capsys, tmp_path):
    code, out, _ = run(capsys, "entropy", spec("even_sofic"), "--n-max", 14, "--out", tmp_path)
    assert code == 0
    assert "verdict=QftEvidence" in out.splitlines()[0]
    report = json.loads((tmp_path / "entropy_report.json").read_text())
    assert report["quantities"]["hcs"]["sequence"]["count"][1:] == [2 ** (n - 1)
                                                                     for n in range(2, 15)]
    rows = read_csv(tmp_path / "counts_hcs.csv")
    assert rows[3] == {"n": "4", "count": "8", "certified": "True", "depth": "exact",
                       "exact": "True"}


def test_entropy_full_shift_has_no_constraints(capsys, tmp_path):
    code, out, _ = run(capsys, "entropy", spec("full2"), "--out", tmp_path)
    assert code == 0
    assert " hcs_est=0 " in out


def test_entropy_reports_truncation(capsys, tmp_path):
    # constraints of the reversed Keller shift are only available by depth search
    code, out, err = run(capsys, "entropy", spec("keller"), "--n-max", 10, "--out", tmp_path)
    assert code == 3 and "truncated" in err
    report = json.loads((tmp_path / "entropy_report.json").read_text())
    assert report["quantities"]["hcs_rev"]["flags"]["truncated"] is True


def test_diagram_hofbauer(capsys, tmp_path):
    code, out, _ = run(capsys, "diagram", spec("even_sofic"), "--kind", "hofbauer",
                       "--out", tmp_path)
    assert code == 0 and "vertices=7 arrows=19" in out
    text = (tmp_path / "diagram.txt").read_text()
    assert text.startswith("# kind=Hofbauer") and text.count("\nV\t") == 7
    assert (tmp_path / "diagram.dot").exists()
    comps = read_csv(tmp_path / "components.csv")
    assert sorted(float(c["entropy"]) for c in comps) == pytest.approx(
        [math.log(2), math.log((1 + math.sqrt(17)) / 2)])


def test_diagram_complete_json_tables(capsys, tmp_path):
    code, _, _ = run(capsys, "diagram", spec("golden"), "--kind", "complete", "--trunc", 4,
                     "--format", "json", "--out", tmp_path)
    assert code == 0
    comps = json.loads((tmp_path / "components.json").read_text())
    assert comps[0]["vertices"] == "0 1"


def test_measure_full2_and_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "measure", spec("full2"), "--out", tmp_path)
    assert code == 0
    m = json.loads((tmp_path / "measure.json").read_text())
    assert m["entropy"] == pytest.approx(math.log(2), abs=1e-6)
    assert sum(m["stationary"]) == pytest.approx(1)
    code, out, _ = run(capsys, "measure", spec("golden"), "--out", tmp_path)
    assert code == 0 and out.startswith("entropy=0.481211825")


def test_perpoints(capsys, tmp_path):
    code, out, _ = run(capsys, "perpoints", spec("golden"), "--n-max", 10, "--out", tmp_path)
    assert code == 0 and "p: 1, 3, 4, 7, 11" in out
    rows = read_csv(tmp_path / "periodic_counts.csv")
    assert [int(r["p"]) for r in rows] == [1, 3, 4, 7, 11, 18, 29, 47, 76, 123]
    assert [int(r["primitive_orbits"]) for r in rows[:4]] == [1, 1, 1, 1]
    code, out, _ = run(capsys, "perpoints", spec("full2"), "--n-max", 6, "--h",
                       math.log(2), "--out", tmp_path)
    assert "tail_min=1 tail_max=1" in out


def test_malformed_specs_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    for body in ("{", '{"type": "sft"}', '{"type": "warp"}', '[1, 2]',
                 '{"type": "sft", "alphabet": ["0", "1"], "forbidden": ["0", "1"]}'):
        bad.write_text(body)
        code, _, err = run(capsys, "entropy", bad, "--out", tmp_path)
        assert code == 2, body
        assert "malformed spec" in err
    code, _, _ = run(capsys, "zeta", tmp_path / "missing.json", "--out", tmp_path)
    assert code == 2


def test_split_out_of_range_exit_5(capsys, tmp_path):
    code, _, err = run(capsys, "zeta", spec("golden"), "--split", 9, "--out", tmp_path)
    assert code == 5 and "n_split" in err


def test_spectral_failure_exit_4(capsys, tmp_path, monkeypatch):
    def fail(c, d):
        raise SpectralFailure("did not converge", {"iterations": 3})

    monkeypatch.setattr(cli, "max_measure", fail)
    code, _, err = run(capsys, "measure", spec("golden"), "--out", tmp_path)
    assert code == 4 and "iterations" in err


def test_overflow_is_an_analysis_error(capsys, tmp_path):
    code, _, err = run(capsys, "zeta", spec("full3"), "--deg", 60, "--n-max", 4,
                       "--trunc", 2, "--out", tmp_path)
    assert code == 1 and "64-bit" in err


def test_outputs_are_byte_identical(capsys, tmp_path):
    for cmd in (("entropy", spec("even_sofic"), "--n-max", 10),
                ("zeta", spec("even_sofic"), "--deg", 10),
                ("diagram", spec("even_sofic")),
                ("measure", spec("golden"))):
        dirs = [tmp_path / f"{cmd[0]}{i}" for i in range(2)]
        for d in dirs:
            assert run(capsys, *cmd, "--out", d)[0] == 0
        names = sorted(p.name for p in dirs[0].iterdir())
        assert names == sorted(p.name for p in dirs[1].iterdir())
        for name in names:
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qft.cli", "zeta", str(spec("full3")),
                           "--deg", "3", "--no-det", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "zeta_inverse: 1, -3, 0, 0"


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        cli.main(["entropy"])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["zeta", str(spec("golden")), "--deg", "0"])
