from covdyn.cli import main
from covdyn.files import parse_text


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerify:
    def test_er2_languages_equal(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--input", "e-r2", "--depth", "3", "--width", "20"
        )
        assert code == 0
        assert "languages equal" in out
        assert "frames.covering = 83" in out
        assert "frames.diagram = 83" in out

    def test_deterministic_output(self, capsys):
        args = ("verify", "--input", "e-odo", "--depth", "2", "--width", "8")
        first = run(capsys, *args)
        second = run(capsys, *args)
        assert first == second
        assert first[0] == 0


class TestVershik:
    def test_odometer_row_dump(self, capsys):
        code, out, _ = run(
            capsys, "vershik", "--input", "2-odometer", "--steps", "16",
            "--level", "2",
        )
        assert code == 0
        row2 = next(line for line in out.splitlines() if line.startswith("row 2"))
        assert row2.count("|") == 4  # cuts at 0, 4, 8, 12

    def test_window_past_truncation_is_inconclusive(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "vershik", "--input", "2-odometer", "--steps", "300",
            "--level", "1",
        )
        assert code == 2
        assert "max-path-at-depth" in err

    def test_wrap_allows_long_orbits(self, capsys):
        code, out, _ = run(
            capsys, "vershik", "--input", "2-odometer", "--steps", "300",
            "--level", "1", "--wrap",
        )
        assert code == 0


class TestMinimality:
    def test_witness(self, capsys):
        code, out, _ = run(
            capsys, "minimality", "--input", "e-r2", "--n", "1", "--horizon", "3"
        )
        assert code == 0
        assert "witness = 2" in out

    def test_empty_horizon_is_inconclusive(self, capsys):
        code, out, _ = run(
            capsys, "minimality", "--input", "e-r2", "--n", "1", "--horizon", "1"
        )
        assert code == 2
        assert "no witness within horizon" in out


class TestValidate:
    def test_bundled_inputs(self, capsys):
        for name, kind in (
            ("e-r2", "gm-covering"),
            ("e-odo", "gm-covering"),
            ("2-odometer", "bratteli"),
        ):
            code, out, _ = run(capsys, "validate", "--input", name)
            assert code == 0
            assert f"input.kind = {kind}" in out

    def test_semantic_failure_is_refuted(self, capsys, tmp_path):
        bad = tmp_path / "bad.gmcov"
        bad.write_text("gm-covering\nlevel 1: lengths = (2)\nlevel 2: words = ((2, 1))\n")
        code, out, _ = run(capsys, "validate", "--input", str(bad))
        assert code == 1
        assert "word-not-starting-with-one" in out

    def test_grammar_failure_is_input_error(self, capsys, tmp_path):
        bad = tmp_path / "garbage.gmcov"
        bad.write_text("gm-covering\nlevel 1: lengths = (2\n")
        code, _, err = run(capsys, "validate", "--input", str(bad))
        assert code == 3
        assert "parse-error" in err

    def test_missing_input(self, capsys):
        code, _, err = run(capsys, "validate", "--input", "no-such-thing")
        assert code == 3


class TestReports:
    def test_classify(self, capsys):
        code, out, _ = run(capsys, "classify", "--input", "e-odo")
        assert code == 0
        assert "level.1 = " in out and "is_cover=True" in out

    def test_rank(self, capsys):
        code, out, _ = run(capsys, "rank", "--input", "e-r2")
        assert code == 0
        assert "estimate = 2" in out

    def test_gm_check(self, capsys):
        code, out, _ = run(capsys, "gm-check", "--input", "e-r2")
        assert code == 0
        assert "isolated.status = pass" in out

    def test_normalize_odo(self, capsys):
        code, out, _ = run(capsys, "normalize", "--input", "e-odo")
        assert code == 0
        assert "words = ((1, 1, 1, 1))" in out

    def test_telescope_round_trips(self, capsys, tmp_path):
        out_file = tmp_path / "tele.gmcov"
        code, out, _ = run(
            capsys, "telescope", "--input", "e-odo", "--indices", "0,2,4",
            "--output", str(out_file),
        )
        assert code == 0
        parsed = parse_text(out_file.read_text())
        assert parsed.depth == 2
        assert parsed.level(1).lengths == (4,)

    def test_structured_format(self, capsys):
        code, out, _ = run(
            capsys, "rank", "--input", "e-odo", "--format", "structured"
        )
        assert code == 0
        assert all(" = " in line for line in out.strip().splitlines())


class TestBuildAndCheck:
    def test_build_bv_round_trips(self, capsys, tmp_path):
        out_file = tmp_path / "er2.brat"
        code, _, _ = run(
            capsys, "build-bv", "--input", "e-r2", "--output", str(out_file)
        )
        assert code == 0
        d = parse_text(out_file.read_text())
        assert d.fiber(2, "c2.1") == ("c1.2", "c1.1", "c1.1")

    def test_build_bv_dot(self, capsys):
        code, out, _ = run(
            capsys, "build-bv", "--input", "e-odo", "--format", "dot"
        )
        assert code == 0
        assert "digraph B {" in out

    def test_bv_check_passes(self, capsys):
        code, out, _ = run(capsys, "bv-check", "--input", "e-r2")
        assert code == 0
        assert "properly_ordered = True" in out

    def test_bv_check_refutes_split_families(self, capsys, tmp_path):
        text = (
            "bratteli\n"
            "level 1: vertices = (A, B); edges = ((v0, A, 1), (v0, B, 1))\n"
            "level 2: vertices = (A, B);"
            " edges = ((A, A, 1), (A, A, 2), (B, B, 1))\n"
            "level 3: vertices = (A, B);"
            " edges = ((A, A, 1), (A, A, 2), (B, B, 1))\n"
        )
        bad = tmp_path / "split.brat"
        bad.write_text(text)
        code, out, _ = run(capsys, "bv-check", "--input", str(bad), "--depth", "2")
        assert code == 1
        assert "max_paths = 2" in out

    def test_export_dot_level_graph(self, capsys):
        code, out, _ = run(
            capsys, "export-dot", "--input", "e-odo", "--level", "1"
        )
        assert code == 0
        assert "digraph G1 {" in out


class TestArraysCommand:
    def test_window_dump(self, capsys):
        code, out, _ = run(
            capsys, "arrays", "--input", "e-r2", "--level", "2", "--circuit", "1"
        )
        assert code == 0
        assert "row 2" in out and "c2.1" in out

    def test_slide_flag(self, capsys):
        code, out, _ = run(
            capsys, "arrays", "--input", "e-r2", "--level", "3", "--slide"
        )
        assert code == 0
        assert "slide = yes" in out

    def test_figure_written(self, capsys, tmp_path):
        fig = tmp_path / "window.png"
        code, out, _ = run(
            capsys, "arrays", "--input", "e-r2", "--level", "2",
            "--figure", str(fig),
        )
        assert code == 0
        assert fig.exists() and fig.stat().st_size > 0
        assert f"figure = {fig}" in out

    def test_vershik_figure(self, capsys, tmp_path):
        fig = tmp_path / "orbit.png"
        code, _, _ = run(
            capsys, "vershik", "--input", "2-odometer", "--steps", "8",
            "--level", "2", "--figure", str(fig),
        )
        assert code == 0
        assert fig.exists() and fig.stat().st_size > 0
