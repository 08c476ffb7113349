import io
import sys

import pytest

from hsc.cli import (
    InputError,
    main,
    parse_algebra_file,
    parse_span,
    write_algebra_file,
)
from hsc.lie import LieAlgebra
from hsc.report import Report, ReportError, emit, parse

SL2_FILE = """\
# rank one simple algebra
dim 3
labels e f h
1 2 -> 3:1
1 3 -> 1:-2
2 3 -> 2:2
"""


@pytest.fixture
def sl2_path(tmp_path):
    p = tmp_path / "sl2.alg"
    p.write_text(SL2_FILE)
    return str(p)


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestAlgebraFile:
    def test_round_trip(self):
        g = parse_algebra_file(SL2_FILE)
        assert g.dim == 3 and g.validate() == []
        text = write_algebra_file(g)
        g2 = parse_algebra_file(text)
        assert g2.table == g.table

    def test_parse_errors_name_the_line(self):
        with pytest.raises(InputError) as exc:
            parse_algebra_file("dim 2\n1 2 => 1:1\n")
        assert "line 2" in str(exc.value)
        with pytest.raises(InputError):
            parse_algebra_file("1 2 -> 1:1\n")  # dim must come first
        with pytest.raises(InputError) as exc:
            parse_algebra_file("dim 2\n1 5 -> 1:1\n")
        assert "out of range" in str(exc.value)

    def test_span_by_label_index_vector(self):
        g = parse_algebra_file(SL2_FILE)
        assert parse_span(g, "h") == [{2: 1}]
        assert parse_span(g, "1;2") == [{0: 1}, {1: 1}]
        assert parse_span(g, "1,0,-2") == [{0: 1, 2: -2}]
        with pytest.raises(InputError):
            parse_span(g, "x")
        with pytest.raises(InputError):
            parse_span(g, "1,0")


class TestReportFormat:
    def test_round_trip_identity(self):
        rep = Report("weyl")
        rep.add("instance", "preset", "A2")
        rep.add("weyl", "order", 6)
        rep.add("weyl", "by_length", [1, 2, 2, 1])
        rep.add("verdict", "pass", True)
        text = emit(rep)
        again = parse(text)
        assert again == rep
        assert emit(again) == text

    def test_parse_errors(self):
        with pytest.raises(ReportError):
            parse("nope\n")
        with pytest.raises(ReportError):
            parse("schema: hsc-report/1\ncommand: x\nstray: pair\n")


class TestCommands:
    def test_weyl_a2(self, capsys):
        code, out = run_cli(["weyl", "--preset", "A2", "--levi", ""], capsys)
        assert code == 0
        rep = parse(out)
        assert rep.get("weyl", "order") == "6"
        assert rep.get("weyl", "flag_count") == "6"

    def test_cohomology_custom(self, sl2_path, capsys):
        code, out = run_cli(
            ["cohomology", "--custom", sl2_path, "--k", "h"], capsys
        )
        assert code == 0
        rep = parse(out)
        assert rep.get("betti", "0") == "1"
        assert rep.get("betti", "2") == "1"
        assert rep.get("betti", "total") == "2"

    def test_cohomology_adjoint_module(self, sl2_path, capsys):
        code, out = run_cli(
            ["cohomology", "--custom", sl2_path, "--module", "adjoint"], capsys
        )
        assert code == 0
        assert parse(out).get("betti", "total") == "0"

    def test_spectral_custom_triple(self, tmp_path, capsys):
        p = tmp_path / "h3.alg"
        p.write_text("dim 3\nlabels x y z\n1 2 -> 3:1\n")
        code, out = run_cli(
            ["spectral", "--custom", str(p), "--k", "", "--ideal", "z"], capsys
        )
        assert code == 0
        rep = parse(out)
        assert rep.get("pages", "degeneration_page") == "3"
        assert rep.get("pages", "abutment_matches_cohomology") == "true"

    def test_spectral_requires_ideal(self, sl2_path, capsys):
        code, _ = run_cli(["spectral", "--custom", sl2_path, "--k", "h"], capsys)
        assert code == 2

    def test_bk_verify_pass(self, capsys):
        code, out = run_cli(
            ["bk-verify", "--preset", "A2", "--levi", "", "--t-support", "1"],
            capsys,
        )
        assert code == 0
        rep = parse(out)
        assert rep.get("verify", "degenerates_at_2") == "true"
        assert rep.get("verify", "poincare_full") == "1,2,2,1"
        assert rep.get("verdict", "pass") == "true"

    def test_exit_code_two_on_bad_input(self, capsys):
        code, _ = run_cli(["bk-verify", "--preset", "Z9"], capsys)
        assert code == 2
        code, _ = run_cli(["cohomology"], capsys)
        assert code == 2
        code, _ = run_cli(
            ["bk-verify", "--preset", "A2", "--levi", "7"], capsys
        )
        assert code == 2

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "inst.cfg"
        cfg.write_text("[instance]\npreset = A2\nlevi =\nt_support = 2\n")
        code, out = run_cli(["weyl", "--config", str(cfg)], capsys)
        assert code == 0
        assert parse(out).get("instance", "t_support") == "2"
        code, out = run_cli(
            ["weyl", "--config", str(cfg), "--t-support", "1"], capsys
        )
        assert code == 0
        assert parse(out).get("instance", "t_support") == "1"

    def test_out_file_round_trips(self, tmp_path, capsys):
        out_path = tmp_path / "rep.txt"
        code, out = run_cli(
            ["weyl", "--preset", "A1", "--levi", "", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        text = out_path.read_text()
        assert text == out
        assert emit(parse(text)) == text

    def test_determinism_byte_identical(self, tmp_path, capsys):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        for path in (a, b):
            code, _ = run_cli(
                [
                    "bk-verify",
                    "--preset",
                    "A2",
                    "--levi",
                    "",
                    "--t-support",
                    "1",
                    "--out",
                    str(path),
                ],
                capsys,
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_jobs_flag_and_env(self, capsys, monkeypatch):
        code, _ = run_cli(
            ["weyl", "--preset", "A1", "--levi", "", "--jobs", "2"], capsys
        )
        assert code == 0
        monkeypatch.setenv("HSC_JOBS", "0")
        code, _ = run_cli(["weyl", "--preset", "A1", "--levi", ""], capsys)
        assert code == 2
