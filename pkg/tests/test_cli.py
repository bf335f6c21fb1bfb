from __future__ import annotations

import pytest

from sdpcolor.batch import BatchReport, emit_report, run_batch
from sdpcolor.cli import Config, cli_main, parse_config
from sdpcolor.fixtures import corpus_name, fixture_path, fixture_text
from sdpcolor.graphs import parse_edge_list


class TestExitCodes:
    def test_svcn_on_clique(self, capsys, tmp_path):
        path = tmp_path / "k4.edges"
        path.write_text("4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
        code = cli_main(["svcn", "--graph", str(path)])
        out = capsys.readouterr().out
        assert code == 0
        assert "objective=-0.333333" in out

    def test_color_failure_exit_one(self, capsys):
        code = cli_main(["color", "--algo", "1", "--graph", fixture_path("fig3.edges")])
        out = capsys.readouterr().out
        assert code == 1
        assert "FAILED" in out

    def test_color_success_exit_zero(self, capsys):
        code = cli_main(["color", "--algo", "2", "--graph", fixture_path("fig4.edges")])
        out = capsys.readouterr().out
        assert code == 0
        assert "COLORED" in out

    def test_usage_error_exit_two(self):
        assert cli_main(["no-such-command"]) == 2

    def test_parse_error_exit_two(self, capsys, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("2 1\n1 1\n")
        assert cli_main(["svcn", "--graph", str(path)]) == 2
        assert "self-loop" in capsys.readouterr().err

    def test_missing_file_exit_two(self, capsys):
        assert cli_main(["svcn", "--graph", "/nonexistent/g.edges"]) == 2

    def test_certify_ktree_generated(self, capsys):
        code = cli_main(["certify-ktree", "--k", "3", "--n", "8", "--seed", "5"])
        out = capsys.readouterr().out
        assert code == 0
        assert "verdict: True" in out

    def test_oracle(self, capsys):
        code = cli_main(["oracle", "--graph", fixture_path("fig5.edges")])
        out = capsys.readouterr().out
        assert code == 0
        assert "chromatic_number=4" in out

    def test_gen_ktree_round_trip(self, capsys, tmp_path):
        out_path = tmp_path / "tree.edges"
        code = cli_main(["gen-ktree", "--k", "4", "--n", "10", "--seed", "3",
                         "--out", str(out_path)])
        assert code == 0
        g = parse_edge_list(out_path.read_text())
        assert g.n == 10 and len(g.edges) == (2 * 10 - 4) * 3 // 2

    def test_blend_on_non_unique_fixture(self, capsys):
        code = cli_main(["blend", "--graph", fixture_path("fig5.edges")])
        out = capsys.readouterr().out
        assert code == 0
        assert "blend_rank=" in out

    def test_independent_cost(self, capsys):
        code = cli_main(["independent-cost", "--graph", fixture_path("fig3.edges")])
        out = capsys.readouterr().out
        assert code == 0
        assert "verdict=True" in out

    def test_certify_cost(self, capsys):
        code = cli_main(["certify-cost", "--graph", fixture_path("fig4.edges")])
        out = capsys.readouterr().out
        assert code == 0
        assert "verdict: True" in out


class TestConfig:
    def test_defaults(self):
        cfg = parse_config("")
        assert cfg == Config()

    def test_overrides_and_comments(self):
        cfg = parse_config("# tolerances\nrank_tau = 1e-5\nalign_tol=2e-4\n")
        assert cfg.rank_tau == 1e-5
        assert cfg.align_tol == 2e-4
        assert cfg.solver_tol == 1e-8

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError):
            parse_config("bogus=1\n")

    def test_cli_reads_config(self, capsys, tmp_path):
        cfg_path = tmp_path / "cfg"
        cfg_path.write_text("rank_tau=1e-6\n")
        code = cli_main(["--config", str(cfg_path), "oracle", "--graph",
                         fixture_path("fig3.edges")])
        assert code == 0


class TestBatchCommand:
    def test_batch_text_output(self, capsys):
        code = cli_main([
            "batch", "--corpus", fixture_path(corpus_name(7)), "--algo", "1",
        ])
        out = capsys.readouterr().out
        assert code == 0
        assert "failures" in out
        assert " 7 " in out.splitlines()[1]

    def test_batch_csv_row_count(self, capsys):
        code = cli_main([
            "batch", "--corpus", fixture_path(corpus_name(7)), "--algo", "2",
            "--format", "csv",
        ])
        out = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert len(out) == 1 + 4  # header + one row per graph with a K_4

    def test_checkpoint_resume(self, tmp_path):
        text = fixture_text(corpus_name(7))
        ck = tmp_path / "progress"
        first = run_batch(text, 1, checkpoint=str(ck))
        assert ck.exists() and len(ck.read_text().splitlines()) == 4
        resumed = run_batch(text, 1, checkpoint=str(ck))
        assert [r.status for r in resumed.rows] == [r.status for r in first.rows]
        assert all(r.solves == 0 for r in resumed.rows)  # nothing re-run

    def test_long_mode_guard(self):
        # fabricate a 12-vertex corpus line: n > 11 requires long_mode
        text = "12 bcdefghijkl,a,a,a,a,a,a,a,a,a,a,a"
        with pytest.raises(ValueError):
            run_batch(text, 1)

    def test_deterministic_reports(self):
        text = fixture_text(corpus_name(7))
        a = run_batch(text, 1)
        b = run_batch(text, 1)
        assert [(r.index, r.status, r.solves) for r in a.rows] == [
            (r.index, r.status, r.solves) for r in b.rows
        ]


class TestEmitReport:
    def test_empty_report_header_only(self):
        report = BatchReport(1, True, ())
        text = emit_report(report, "text")
        assert len(text.strip().splitlines()) == 1

    def test_csv_contains_status(self, corpora):
        text = fixture_text(corpus_name(5))
        report = run_batch(text, 1)
        csv = emit_report(report, "csv")
        assert csv.splitlines()[0] == "index,n,has_k4,algo,status,solves,seconds"
        assert "colored" in csv

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            emit_report(BatchReport(1, True, ()), "xml")

    def test_aggregates_match_rows(self):
        text = fixture_text(corpus_name(8))
        report = run_batch(text, 1)
        agg = report.aggregates()
        assert sum(g for _, g, _, _ in agg) == len(report.rows)
        assert sum(f for _, _, f, _ in agg) == report.failure_count
