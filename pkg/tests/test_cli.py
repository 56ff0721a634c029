import os
import subprocess
import sys
from pathlib import Path

import pytest

from groupoid_cipher.cli import main
from groupoid_cipher.demo import example_key
from groupoid_cipher.keyforge import generate_key, parse_key, serialize_key

DATA = Path(__file__).parent / "data"


@pytest.fixture
def ternary_key_file(tmp_path):
    path = tmp_path / "example.gck"
    path.write_bytes(serialize_key(example_key()))
    return path


def run(*args):
    return subprocess.run(
        [sys.executable, "-m", "groupoid_cipher.cli", *map(str, args)],
        capture_output=True,
        check=False,
        text=True,
    )


class TestKeygen:
    def test_writes_valid_key(self, tmp_path, capsys):
        out = tmp_path / "k.gck"
        assert main(["keygen", "--n", "3", "--q", "3", "--seed", "7", "--out", str(out)]) == 0
        key = parse_key(out.read_bytes())
        assert (key.n, key.q) == (3, 3)
        printed = capsys.readouterr().out.strip()
        assert len(printed) == 64

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for path in (a, b):
            main(["keygen", "--n", "3", "--q", "4", "--seed", "11", "--schedule-length", "3", "--out", str(path)])
        assert a.read_bytes() == b.read_bytes()

    def test_bad_arity_is_usage_error(self, tmp_path):
        result = run("keygen", "--n", 1, "--q", 3, "--seed", 1, "--out", tmp_path / "k")
        assert result.returncode == 2
        assert "--n must be >= 2" in result.stderr
        assert result.stdout == ""
        assert not (tmp_path / "k").exists()


class TestCheckKey:
    def test_ok(self, ternary_key_file, capsys):
        assert main(["check-key", "--key", str(ternary_key_file)]) == 0
        assert capsys.readouterr().out.startswith("ok n=3 q=3 i=3")

    def test_not_invertible(self, tmp_path, capsys):
        path = tmp_path / "bad.gck"
        path.write_bytes(serialize_key(example_key()).replace(b"table 0 1 2", b"table 1 1 2", 1))
        assert main(["check-key", "--key", str(path)]) == 1
        err = capsys.readouterr().err
        assert "not invertible at place 3" in err


class TestCrypt:
    def test_worked_example_symbols(self, tmp_path, ternary_key_file):
        plain = tmp_path / "p.txt"
        plain.write_text("2 0 1\n1   2\t1")
        enc, dec = tmp_path / "c.txt", tmp_path / "d.txt"
        assert main(["encrypt", "--key", str(ternary_key_file), "--in", str(plain), "--out", str(enc)]) == 0
        assert enc.read_text() == "0 2 1 0 2 1\n"
        assert main(["decrypt", "--key", str(ternary_key_file), "--in", str(enc), "--out", str(dec)]) == 0
        assert dec.read_text() == "2 0 1 1 2 1\n"

    def test_empty_file(self, tmp_path, ternary_key_file):
        empty, out = tmp_path / "e", tmp_path / "o"
        empty.write_bytes(b"")
        assert main(["encrypt", "--key", str(ternary_key_file), "--in", str(empty), "--out", str(out)]) == 0
        assert out.read_bytes() == b""
        assert main(["encrypt", "--key", str(ternary_key_file), "--in", str(empty), "--out", str(out), "--mode", "symbols"]) == 0

    def test_symbol_out_of_range(self, tmp_path, ternary_key_file, capsys):
        plain = tmp_path / "p.txt"
        plain.write_text("0 1 3 2")
        assert main(["encrypt", "--key", str(ternary_key_file), "--in", str(plain), "--out", str(tmp_path / "c")]) == 1
        assert "symbol 2: 3 is outside 0..2" in capsys.readouterr().err

    def test_non_numeric_symbol(self, tmp_path, ternary_key_file, capsys):
        plain = tmp_path / "p.txt"
        plain.write_text("0 x")
        assert main(["encrypt", "--key", str(ternary_key_file), "--in", str(plain), "--out", str(tmp_path / "c")]) == 1
        assert "symbol 1" in capsys.readouterr().err

    def test_bytes_mode_needs_q256(self, tmp_path, ternary_key_file, capsys):
        data = tmp_path / "d.bin"
        data.write_bytes(b"\x00\x01")
        args = ["encrypt", "--key", str(ternary_key_file), "--in", str(data), "--out", str(tmp_path / "o"), "--mode", "bytes"]
        assert main(args) == 1
        assert "q = 256" in capsys.readouterr().err

    def test_bytes_round_trip(self, tmp_path):
        key_path = tmp_path / "k.gck"
        key_path.write_bytes(serialize_key(generate_key(2, 256, 5)))
        data = os.urandom(50_000) + bytes(range(256))
        src, enc, dec = tmp_path / "src", tmp_path / "enc", tmp_path / "dec"
        src.write_bytes(data)
        common = ["--key", str(key_path), "--mode", "bytes"]
        assert main(["encrypt", *common, "--in", str(src), "--out", str(enc)]) == 0
        assert main(["decrypt", *common, "--in", str(enc), "--out", str(dec)]) == 0
        assert len(enc.read_bytes()) == len(data)
        assert enc.read_bytes() != data
        assert dec.read_bytes() == data

    def test_one_mib_with_ternary_q256_key(self, tmp_path):
        key_path = tmp_path / "k.gck"
        assert main(["keygen", "--n", "3", "--q", "256", "--seed", "3", "--out", str(key_path)]) == 0
        data = os.urandom(1 << 20)
        src, enc, dec = tmp_path / "src", tmp_path / "enc", tmp_path / "dec"
        src.write_bytes(data)
        common = ["--key", str(key_path), "--mode", "bytes"]
        assert main(["encrypt", *common, "--in", str(src), "--out", str(enc)]) == 0
        assert main(["decrypt", *common, "--in", str(enc), "--out", str(dec)]) == 0
        assert dec.read_bytes() == data

    def test_missing_key_file(self, tmp_path, capsys):
        args = ["encrypt", "--key", str(tmp_path / "nope"), "--in", str(tmp_path / "x"), "--out", str(tmp_path / "y")]
        assert main(args) == 1
        assert "error" in capsys.readouterr().err

    def test_stdio(self, ternary_key_file):
        result = subprocess.run(
            [sys.executable, "-m", "groupoid_cipher.cli", "encrypt", "--key", str(ternary_key_file), "--in", "-", "--out", "-"],
            input="2 0 1 1 2 1\n",
            capture_output=True,
        check=False,
            text=True,
        )
        assert result.returncode == 0
        assert result.stdout == "0 2 1 0 2 1\n"


class TestDemo:
    def test_matches_golden_file(self, capsys):
        assert main(["demo"]) == 0
        assert capsys.readouterr().out == (DATA / "demo.txt").read_text()

    def test_key_lines(self, capsys):
        main(["demo"])
        lines = capsys.readouterr().out.splitlines()
        assert "T_{2,0} 1 = 2" in lines
        assert "ciphertext: 0 2 1 0 2 1" in lines
        assert lines[-1] == "plaintext: 2 0 1 1 2 1"
        assert "T^2_{2,0} 0 = f(2, 0, f(2, 0, 0)) = f(2, 0, 1) = 2 = v_2" in lines
        assert "T^2_{2,1} 1 = f(2, 1, f(2, 1, 1)) = f(2, 1, 2) = 0 = v_4" in lines
        assert not any("FAILED" in line for line in lines)
        assert sum(line.startswith("T_{") for line in lines) == 27
        assert sum(line.startswith("g(") for line in lines) == 27

    def test_stable_across_processes(self):
        first, second = run("demo"), run("demo")
        assert first.returncode == 0
        assert first.stdout == second.stdout == (DATA / "demo.txt").read_text()


class TestCensus:
    @pytest.mark.parametrize("args,expected", [
        (["--n", "2", "--q", "2", "--place", "2", "--mode", "exhaustive"],
         "n=2 q=2 place=2 invertible=4 quasigroups=2 method=exhaustive"),
        (["--n", "2", "--q", "3", "--place", "2"],
         "n=2 q=3 place=2 invertible=216 quasigroups=12 method=exhaustive"),
        (["--n", "3", "--q", "3", "--place", "3", "--mode", "closed-form"],
         "n=3 q=3 place=3 invertible=10077696 quasigroups=24 method=closed-form"),
    ])
    def test_lines(self, capsys, args, expected):
        assert main(["census", *args]) == 0
        assert capsys.readouterr().out == expected + "\n"

    def test_infeasible_exhaustive(self, capsys):
        assert main(["census", "--n", "3", "--q", "3", "--place", "1", "--mode", "exhaustive"]) == 1
        captured = capsys.readouterr()
        assert "closed-form" in captured.err
        assert captured.out == ""

    def test_bad_place(self):
        assert run("census", "--n", 2, "--q", 2, "--place", 3).returncode == 2
