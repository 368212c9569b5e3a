import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from exchange_ge.cli import JobConfig, main
from exchange_ge.errors import InputError

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestClassify:
    def test_z6(self, capsys, tmp_path):
        out_file = tmp_path / "v.jsonl"
        code, out, _ = run(capsys, "classify", "Z/6", "--out", str(out_file))
        assert code == 0
        assert "exchange: yes" in out and "separative: yes (bound 2)" in out and "sr1: yes" in out
        records = [json.loads(l) for l in out_file.read_text().splitlines()]
        assert {r["property"] for r in records} >= {"exchange", "separative", "stable-rank-one"}

    def test_square_zero_ring(self, capsys):
        code, out, _ = run(capsys, "classify", "Ex2.12(F2)")
        assert code == 0
        assert "exchange: yes" in out and "separative: yes" in out and "sr1: yes" in out

    def test_corrupt_spec(self, capsys, tmp_path, corrupt_ring_text):
        path = write(tmp_path, "bad.ring", corrupt_ring_text)
        code, _, err = run(capsys, "classify", path)
        assert code == 2
        assert "AssociativityViolation" in err and "(b1 b1) b1" in err

    def test_unknown_ring(self, capsys):
        assert run(capsys, "classify", "nonsense")[0] == 2


class TestDiagonalize:
    def test_rotation(self, capsys, tmp_path):
        cert = tmp_path / "rot.cert"
        code, out, _ = run(capsys, "diagonalize", str(CORPUS / "rotation_z6.mat"), "--out", str(cert))
        assert code == 0 and "left" in out
        code, out, _ = run(capsys, "verify", str(cert))
        assert code == 0 and out.strip() == "ok"

    def test_regular_flag(self, capsys, tmp_path):
        cert = tmp_path / "r.cert"
        code, _, _ = run(capsys, "diagonalize", str(CORPUS / "remark_f2.mat"), "--regular", "--out", str(cert))
        assert code == 0
        text = cert.read_text()
        assert "kind: regular" in text
        diag = text.split("[diagonal]\n")[1].splitlines()[:2]
        assert diag == ["1 0", "0 0"]
        assert run(capsys, "verify", str(cert))[0] == 0

    def test_singular(self, capsys):
        code, _, err = run(capsys, "diagonalize", str(CORPUS / "singular_z6.mat"))
        assert code == 1 and "NotInvertible" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "diagonalize", str(tmp_path / "nope.mat"))[0] == 2

    def test_deterministic_output(self, capsys, tmp_path):
        a, b = tmp_path / "a.cert", tmp_path / "b.cert"
        for p in (a, b):
            run(capsys, "diagonalize", str(CORPUS / "gl3_z6.mat"), "--out", str(p), "--seed", "3")
        assert a.read_bytes() == b.read_bytes()


class TestVerify:
    def _cert(self, capsys, tmp_path):
        cert = tmp_path / "c.cert"
        run(capsys, "diagonalize", str(CORPUS / "no_unit_entry_z6.mat"), "--out", str(cert))
        return cert

    def test_flipped_coefficient(self, capsys, tmp_path):
        cert = self._cert(capsys, tmp_path)
        lines = cert.read_text().splitlines(keepends=True)
        k = next(i for i, l in enumerate(lines) if l.startswith(("row ", "col ")))
        parts = lines[k].split(" ")
        parts[3] = str((int(parts[3]) + 1) % 6)
        lines[k] = " ".join(parts)
        cert.write_text("".join(lines))
        code, out, _ = run(capsys, "verify", str(cert))
        assert code == 1 and "FAIL" in out and "at operation 1" in out

    def test_wrong_ring(self, capsys, tmp_path):
        cert = self._cert(capsys, tmp_path)
        code, out, _ = run(capsys, "verify", str(cert), "--ring", "Z/12")
        assert code == 1 and "ring mismatch" in out

    def test_parse_error_has_line(self, capsys, tmp_path):
        cert = self._cert(capsys, tmp_path)
        text = cert.read_text().replace("rows: 2", "rows: two")
        cert.write_text(text)
        code, _, err = run(capsys, "verify", str(cert))
        assert code == 2 and "line" in err


class TestCorpus:
    def test_manifest_passes(self, capsys, tmp_path):
        code, out, _ = run(capsys, "corpus", str(CORPUS / "manifest.txt"), "--out", str(tmp_path), "--threads", "2")
        assert code == 0
        assert out.strip().splitlines()[-1] == "11/11 corpus entries as expected"
        for cert in tmp_path.glob("*.cert"):
            assert run(capsys, "verify", str(cert))[0] == 0

    def test_thread_count_does_not_change_certificates(self, capsys, tmp_path):
        one, two = tmp_path / "one", tmp_path / "two"
        run(capsys, "corpus", str(CORPUS / "manifest.txt"), "--out", str(one), "--threads", "1")
        run(capsys, "corpus", str(CORPUS / "manifest.txt"), "--out", str(two), "--threads", "3")
        for cert in one.glob("*.cert"):
            assert cert.read_bytes() == (two / cert.name).read_bytes()

    def test_unexpected_outcome_fails(self, capsys, tmp_path):
        shutil.copy(CORPUS / "singular_z6.mat", tmp_path)
        write(tmp_path, "m.txt", "singular_z6.mat invertible ok\n")
        code, out, _ = run(capsys, "corpus", str(tmp_path / "m.txt"))
        assert code == 1 and "FAIL" in out


class TestEnumerate:
    def test_z6(self, capsys):
        code, out, _ = run(capsys, "enumerate-projectives", "Z/6", "--bound", "1")
        assert code == 0 and "classes: 4" in out


def test_config_validation():
    with pytest.raises(InputError):
        JobConfig("classify", bound=0)


def test_console_script_and_module(tmp_path):
    exe = shutil.which("exchange-ge")
    cmds = [[sys.executable, "-m", "exchange_ge"]] + ([[exe]] if exe else [])
    for cmd in cmds:
        res = subprocess.run(cmd + ["enumerate-projectives", "F2", "--bound", "1"], capture_output=True, text=True)
        assert res.returncode == 0 and "classes: 2" in res.stdout
