import csv
import io

import numpy as np
import pytest

from spheredec.cli import main, parse_dims
from spheredec.linalg import write_matrix


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def id2(tmp_path):
    path = tmp_path / "id2.txt"
    write_matrix(path, np.eye(2))
    return str(path)


def test_decode_identity(id2):
    code, out = run(["decode", "--algorithm", "3", "--matrix-file", id2, "--r", "0.4", "-0.3"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "u_hat=0 0 dist2=0.25"
    assert lines[1] == "flops=26 intops=4"


def test_decode_finite_and_h_form(id2, tmp_path):
    code, out = run(["decode", "--algorithm", "8", "--matrix-file", id2, "--r", "-0.2", "0.7",
                     "--umin", "0", "--umax", "1"])
    assert code == 0 and out.startswith("u_hat=0 1 dist2=0.13")
    h = tmp_path / "h.txt"
    write_matrix(h, np.array([[0.5, 0.0], [0.0, 1.0]]))
    code, out = run(["decode", "--algorithm", "7", "--h-form", "--matrix-file", str(h), "--r", "2.9", "0.2"])
    assert code == 0 and out.startswith("u_hat=1 0 ")


def test_decode_errors(id2, capsys):
    assert run(["decode", "--algorithm", "2", "--matrix-file", id2, "--r", "0", "0"])[0] == 2
    assert run(["decode", "--algorithm", "3", "--matrix-file", id2, "--r", "0"])[0] == 2
    assert run(["decode", "--algorithm", "3", "--matrix-file", id2 + "x", "--r", "0", "0"])[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["decode", "--algorithm", "9", "--matrix-file", id2, "--r", "0"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit):
        main(["verify", "--dims", "a..b"])
    with pytest.raises(SystemExit):
        main([])


def test_parse_dims():
    assert parse_dims("2..6") == [2, 3, 4, 5, 6]
    assert parse_dims("10:10:60") == [10, 20, 30, 40, 50, 60]
    assert parse_dims("4,8") == [4, 8]


def test_verify_command():
    code, out = run(["verify", "--dims", "2..3", "--trials", "4", "--seed", "7"])
    assert code == 0
    assert out.strip() == "passed 32/32"


def test_experiment_command(tmp_path):
    path = tmp_path / "g.csv"
    code, out = run(["experiment", "--family", "lattice", "--dims", "4:2:6", "--reduce", "lll",
                     "--M", "2", "--N", "3", "--seed", "1", "--workers", "1", "--out", str(path)])
    assert code == 0
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert {r["n"] for r in rows} == {"4", "6"}
    assert (tmp_path / "g.raw.csv").exists()


def test_experiment_slow_gate(tmp_path):
    code, _ = run(["experiment", "--dims", "45", "--out", str(tmp_path / "x.csv")])
    assert code == 2
