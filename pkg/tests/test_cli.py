import json
from pathlib import Path

import h5py
import pytest

from polyscar import cli
from polyscar.errors import ConfigurationError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
RECTANGLE = str(CONFIGS / "rectangle.cfg")
TRIANGLE = str(CONFIGS / "triangle.cfg")
PARALLELOGRAM = str(CONFIGS / "parallelogram.cfg")


def test_ratio_check(capsys):
    assert cli.main(["ratio-check"]) == 0
    first, second = capsys.readouterr().out.splitlines()
    assert first == "E(191, 1)/E(121, 1): computed 2.4916, reference 2.4937, gap 0.084%"
    assert "computed 1.9395, reference 1.9380" in second


def test_ratio_check_json(capsys):
    assert cli.main(["ratio-check", "--config", TRIANGLE, "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["reference"] for r in rows] == [2.4937, 1.9380]
    assert all(r["gap"] < 1e-3 for r in rows)


def test_level_ratios_needs_triangle():
    config = cli.RunConfig("ratio-check", config=RECTANGLE).billiard()
    with pytest.raises(ConfigurationError):
        cli.level_ratios(config)


def test_triangle_spectrum(capsys):
    assert cli.main(["spectrum", "--config", TRIANGLE, "--max-m", "270"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "family,skeleton,m,n,auxiliary,energy,validity"
    levels = {tuple(line.split(",")[2:4]) for line in lines[1:]}
    assert {("121", "1"), ("191", "1"), ("266", "1")} <= levels
    energies = [float(line.split(",")[5]) for line in lines[1:]]
    assert energies == sorted(energies)


def test_spectrum_json(capsys):
    assert cli.main(["spectrum", "--config", RECTANGLE, "--max-m", "2", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 4
    assert (rows[0]["m"], rows[0]["n"]) == (1, 1)


def test_periodic_spectrum(capsys):
    code = cli.main(
        ["spectrum", "--config", RECTANGLE, "--skeleton", "1,1", "--max-m", "4", "--threshold", "2"]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) > 1
    assert all("periodic" in line for line in lines[1:])


def test_incompatible_sizes(write_config, capsys):
    path = write_config("family = rectangle\na = 1\nb = 1+sqrt(2)\n")
    code = cli.main(["spectrum", "--config", path, "--skeleton", "1,1+sqrt(2)"])
    assert code == 3
    err = capsys.readouterr().err
    assert err.startswith("error[compatibility]")
    assert "winding: (1, 1)" in err


@pytest.mark.parametrize(
    "argv,code",
    [
        (["spectrum", "--config", RECTANGLE, "--max-m", "0"], 2),
        (["spectrum", "--config", RECTANGLE, "--format", "xml"], 2),
        (["spectrum", "--config", RECTANGLE, "--format", "pgm"], 2),
        (["spectrum", "--config", "missing.cfg"], 2),
        (["spectrum"], 2),
        (["field", "--config", RECTANGLE, "--m", "1"], 2),
        (["field", "--config", RECTANGLE, "--m", "1", "--n", "1", "--grid", "4", "--format", "json"], 2),
        (["verify", "--config", RECTANGLE, "--m", "1", "--n", "1", "--format", "csv"], 2),
        (["unfold", "--config", RECTANGLE, "--format", "pgm"], 2),
    ],
)
def test_usage_errors(argv, code):
    assert cli.main(argv) == code


def test_field_csv(capsys):
    assert cli.main(["field", "--config", RECTANGLE, "--m", "2", "--n", "1", "--grid", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,y,value"
    assert len(lines) == 101


def test_field_outputs(tmp_path):
    pgm = tmp_path / "field.pgm"
    argv = ["field", "--config", PARALLELOGRAM, "--m", "2", "--n", "1", "--grid", "16"]
    assert cli.main(argv + ["--format", "pgm", "--out", str(pgm), "--hdf5", str(tmp_path)]) == 0
    assert pgm.read_bytes().startswith(b"P5\n16 16\n65535\n")
    with h5py.File(tmp_path / "parallelogram_swf-complex_2_1.hdf5", "r") as f:
        assert f["values"].dtype.kind == "c"
        assert f.attrs["command"] == "field"
        assert f.attrs["grid"] == 16


def test_nodal_points(capsys):
    argv = ["field", "--config", RECTANGLE, "--m", "2", "--n", "1", "--grid", "100", "--nodal"]
    assert cli.main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,y"
    assert all(abs(float(line.split(",")[0]) - 0.5) < 1e-6 for line in lines[1:])


def test_verify(capsys):
    argv = ["verify", "--config", RECTANGLE, "--m", "4", "--n", "1", "--samples", "200"]
    assert cli.main(argv) == 0
    reports = json.loads(capsys.readouterr().out)
    assert len(reports) == 5
    assert all(r["pass"] for r in reports)
    assert reports[0]["check"].startswith("exact:")
    assert reports[-1]["check"] == "rectangle-decomposition(3,1)"


def test_unfold_json(capsys):
    assert cli.main(["unfold", "--config", RECTANGLE, "--skeleton", "1,1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["genus"] == 1
    assert [image["eta"] for image in data["epp"]] == [1, -1, -1, 1]
    assert data["lattice"]["classification"] == "integer"
    skeleton = data["skeleton"]
    assert skeleton["kind"] == "periodic"
    assert len(skeleton["pocs"]) == 2
    assert skeleton["singular_diagonals"]


def test_unfold_parallelogram_pocs(capsys):
    assert cli.main(["unfold", "--config", PARALLELOGRAM, "--skeleton", "0,1"]) == 0
    pocs = json.loads(capsys.readouterr().out)["skeleton"]["pocs"]
    assert len(pocs) == 4
    assert sum(poc["pieces"] for poc in pocs) == 14
    assert sorted(poc["type"] for poc in pocs) == [1, 2, 3, 3]
    assert [poc["width"] for poc in pocs if poc["type"] == 1] == [3.5]


def test_unfold_triangle(capsys):
    assert cli.main(["unfold", "--config", TRIANGLE]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["genus"] == 2
    assert len(data["epp"]) == 16
    assert data["lattice"]["approximation"] == "3363/2378"
    assert "skeleton" not in data


def test_unfold_csv(capsys):
    argv = ["unfold", "--config", RECTANGLE, "--skeleton", "1,1", "--format", "csv"]
    assert cli.main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,y,id"
    assert any(line.endswith(",sd1") for line in lines)


def test_outputs_reproducible(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        argv = ["spectrum", "--config", PARALLELOGRAM, "--max-m", "5", "--out", str(path)]
        assert cli.main(argv) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_run_config_validation(tmp_path):
    with pytest.raises(ConfigurationError):
        cli.RunConfig("field", config=RECTANGLE, grid=1)
    with pytest.raises(ConfigurationError):
        cli.RunConfig("spectrum", config=RECTANGLE, threshold=0)
    with pytest.raises(ConfigurationError):
        cli.RunConfig("spectrum", config=str(tmp_path / "none.cfg"))
    with pytest.raises(ConfigurationError):
        cli.RunConfig("field", config=RECTANGLE).quantum_numbers()
