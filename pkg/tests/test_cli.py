import subprocess
import sys

import pytest

from kellermap.cli import main
from kellermap.polymap import PolyMap

from conftest import pmap


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def classic_file(tmp_path, classic):
    return write(tmp_path, "classic.map", classic[0].to_text())


def test_check_keller(capsys, tmp_path, classic_file):
    assert run(capsys, "check-keller", classic_file) == (0, "keller: true\ndet: 1\n", "")
    bad = write(tmp_path, "sq.map", pmap("x1^2", "x2").to_text())
    code, out, _ = run(capsys, "check-keller", bad)
    assert code == 1 and out == "keller: false\ndet: 2*x1\n"


def test_invert(capsys, tmp_path, classic_file, classic):
    code, out, _ = run(capsys, "invert", classic_file)
    assert code == 0 and PolyMap.from_text(out) == classic[1]
    out_file = tmp_path / "inv.map"
    assert run(capsys, "invert", classic_file, "--out", str(out_file))[0] == 0
    assert PolyMap.from_text(out_file.read_text()) == classic[1]


def test_invert_twice_returns_original(capsys, tmp_path, tight3):
    src = write(tmp_path, "t.map", tight3.to_text())
    inv = tmp_path / "inv.map"
    back = tmp_path / "back.map"
    assert run(capsys, "invert", src, "--out", str(inv))[0] == 0
    assert run(capsys, "invert", str(inv), "--out", str(back), "--max-degree", "81")[0] == 0
    assert PolyMap.from_text(back.read_text()) == tight3


def test_invert_negative(capsys, tmp_path):
    f = write(tmp_path, "q.map", pmap("x1 + x1^2", "x2").to_text())
    code, out, err = run(capsys, "invert", f, "--max-degree", "10")
    assert code == 1 and out == "" and "no polynomial inverse" in err


def test_invert_t3_and_bound(capsys, tmp_path, tight3):
    src = write(tmp_path, "t.map", tight3.to_text())
    code, out, _ = run(capsys, "invert-t3", src)
    map_text, report = out.split("\n\n")
    assert code == 0
    assert PolyMap.from_text(map_text).degree() == 9
    assert "r: 2\n" in report and "actual_inverse_degree: 9\n" in report
    code, out, _ = run(capsys, "bound", src)
    assert code == 0 and out == ("n: 3\nd: 3\nr: 2\nkernel_dim: 1\nbound: 9\n"
                                 "bcw_bound: 9\nactual_inverse_degree: 9\n")


def test_conjugate(capsys, classic_file):
    code, out, _ = run(capsys, "conjugate", classic_file)
    assert code == 0
    assert out == "r: 1\nT:\n0 1\n1 0\nG:\nnvars: 2\nF1: x1\nF2: x1^3 + x2\n"


def test_line_cert(capsys, classic_file):
    code, out, _ = run(capsys, "line-cert", classic_file, "--point", "1,1")
    assert code == 0 and out.startswith("certificate: valid\npoint: 1,1\n")
    code, out, _ = run(capsys, "line-cert", classic_file, "--point", "-2/3,1/2")
    assert code == 0 and "point: -2/3,1/2\n" in out
    assert run(capsys, "line-cert", classic_file, "--point", "0,0")[0] == 2
    assert run(capsys, "line-cert", classic_file, "--point", "1,x")[0] == 2
    assert run(capsys, "line-cert", classic_file, "--point", "1")[0] == 2


def test_expand_druzkowski(capsys, tmp_path):
    src = write(tmp_path, "a.spec", "d: 3\n0 1\n0 0\n")
    code, out, _ = run(capsys, "expand-druzkowski", src)
    assert code == 0 and out == "nvars: 2\nF1: x2^3 + x1\nF2: x2\n"
    # spec files are accepted wherever a map is expected
    assert run(capsys, "check-keller", src)[:2] == (0, "keller: true\ndet: 1\n")


def test_gen_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        code, _, _ = run(capsys, "gen", "triangular-druzkowski", "-n", "3", "-d", "3",
                         "--count", "5", "--seed", "2", "--out", str(out))
        assert code == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == [f"triangular-druzkowski-n3-d3-s2-{i}.map" for i in range(5)]
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
        assert (a / name).read_text().startswith("d: 3\n")
        assert run(capsys, "check-keller", str(a / name))[0] == 0


def test_gen_round_trip_and_identity(capsys, tmp_path):
    code, _, _ = run(capsys, "gen", "triangular-keller", "-n", "3", "-d", "2", "--count", "4", "--out", str(tmp_path))
    assert code == 0
    for p in tmp_path.iterdir():
        f = PolyMap.from_text(p.read_text())
        assert f.to_text() == p.read_text()
    one = tmp_path / "one"
    for kind in ("triangular-keller", "triangular-druzkowski"):
        run(capsys, "gen", kind, "-n", "1", "-d", "3", "--count", "2", "--out", str(one))
    for p in one.iterdir():
        code, out, _ = run(capsys, "invert", str(p))
        assert code == 0 and PolyMap.from_text(out) == PolyMap.identity(1)


def test_gen_count_zero(capsys, tmp_path):
    out = tmp_path / "empty"
    assert run(capsys, "gen", "triangular-keller", "-n", "2", "-d", "2", "--count", "0", "--out", str(out))[0] == 0
    assert list(out.iterdir()) == []


@pytest.mark.parametrize("argv", [
    ["gen", "bogus", "-n", "2", "-d", "2"],
    ["gen", "triangular-keller", "-n", "0", "-d", "2"],
    ["gen", "triangular-keller", "-n", "2", "-d", "1"],
    ["gen", "triangular-keller", "-n", "2"],
    ["frobnicate"],
    [],
    ["invert", "/nonexistent/file.map"],
    ["invert", "x.map", "--max-degree", "three"],
    ["verify-suite", "--count", "0"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 2
    assert capsys.readouterr().out == ""


def test_parse_error_exit(capsys, tmp_path):
    bad = write(tmp_path, "bad.map", "nvars: 2\nF1: x1 +\nF2: x2\n")
    code, _, err = run(capsys, "check-keller", bad)
    assert code == 2 and err.startswith("error:")


def test_contradiction_exit(capsys, monkeypatch, classic_file):
    from kellermap import cli
    from kellermap.errors import TheoremContradiction

    def boom(f):
        raise TheoremContradiction("forced")

    monkeypatch.setattr(cli, "invert_theorem3", boom)
    code, _, err = run(capsys, "bound", classic_file)
    assert code == 3 and "forced" in err


def test_verify_suite_small(capsys):
    code, out, _ = run(capsys, "verify-suite", "--seed", "3", "--count", "6")
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "suite: pass"
    assert lines[:-1] == sorted(lines[:-1])
    assert all(": pass (" in ln for ln in lines[:-1])


def test_console_script(tmp_path, classic):
    src = write(tmp_path, "c.map", classic[0].to_text())
    proc = subprocess.run([sys.executable, "-m", "kellermap.cli", "check-keller", src],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "keller: true\ndet: 1\n"
