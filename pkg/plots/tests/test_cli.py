from tvarx_plots.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCli:
    def test_renders_each_kind(self, study_csv, remark_csv, tmp_path, capsys):
        for kind in ("forgetting-factors", "atf", "cod"):
            out = tmp_path / f"{kind}.png"
            code, stdout, _ = run_cli(capsys, kind, "--in", str(study_csv), "--out", str(out))
            assert code == 0 and out.exists()
            assert str(out) in stdout
        out = tmp_path / "remark.png"
        code, _, _ = run_cli(capsys, "remark-curve", "--in", str(remark_csv), "--out", str(out))
        assert code == 0 and out.exists()

    def test_unknown_kind_is_usage_error(self, study_csv, tmp_path, capsys):
        code, _, stderr = run_cli(capsys, "pie", "--in", str(study_csv),
                                  "--out", str(tmp_path / "x.png"))
        assert code == 1
        assert stderr

    def test_missing_input_is_data_error(self, tmp_path, capsys):
        code, _, stderr = run_cli(capsys, "atf", "--in", str(tmp_path / "nope.csv"),
                                  "--out", str(tmp_path / "x.png"))
        assert code == 2
        assert "not found" in stderr

    def test_schema_mismatch_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        code, _, stderr = run_cli(capsys, "cod", "--in", str(bad),
                                  "--out", str(tmp_path / "x.png"))
        assert code == 2
        assert "missing column" in stderr

    def test_empty_csv_is_data_error(self, tmp_path, capsys):
        empty = tmp_path / "empty.csv"
        empty.write_text("run,method,lambda1_opt,lambda2_opt,cod,atf,failed\n")
        code, _, stderr = run_cli(capsys, "cod", "--in", str(empty),
                                  "--out", str(tmp_path / "x.png"))
        assert code == 2
        assert "no data rows" in stderr
