"""CLI behaviour: exit codes, output formats, determinism."""

import json

import pytest

from cdsm import save_workspace
from cdsm.cli import main
from helpers import tiny_workspace


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_valid_workspace(self, case_study_dir, capsys):
        code, out, err = run(capsys, "validate", str(case_study_dir))
        assert code == 0
        assert out.startswith("ok:")

    def test_broken_workspace_names_offending_cell(self, tmp_path, capsys):
        ws_dir = tmp_path / "broken"
        save_workspace(tiny_workspace(), ws_dir)
        matrix = ws_dir / "matrix.csv"
        matrix.write_text(matrix.read_text().replace("CTL-A,0,X", "CTL-A,0,0"))
        code, out, err = run(capsys, "validate", str(ws_dir))
        assert code == 1
        assert "cell (1,1)" in err
        assert "diagonal" in err

    def test_usage_error_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["validate"])  # missing path
        assert exc.value.code == 2


class TestAnalyze:
    def test_human_report_shows_d_star(self, case_study_dir, capsys):
        code, out, err = run(capsys, "analyze", str(case_study_dir), "--mode", "degree")
        assert code == 0
        assert "Design complexity d*: 16" in out
        assert "CTL-EDR" in out

    def test_out_writes_structured_report(self, case_study_dir, tmp_path, capsys):
        out_file = tmp_path / "report.json"
        code, _, _ = run(
            capsys, "analyze", str(case_study_dir), "--out", str(out_file)
        )
        assert code == 0
        doc = json.loads(out_file.read_text())
        assert doc["complexity"]["d_star"] == 16
        assert doc["schema_version"] == 1

    def test_structured_stdout(self, case_study_dir, capsys):
        code, out, _ = run(capsys, "analyze", str(case_study_dir), "--format", "structured")
        doc = json.loads(out)
        assert doc["complexity"]["d_star"] == 16

    def test_unknown_flag_rejected(self, case_study_dir):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", str(case_study_dir), "--frobnicate"])
        assert exc.value.code == 2

    def test_mode_strict_changes_d_star(self, case_study_dir, capsys):
        code, out, _ = run(capsys, "analyze", str(case_study_dir), "--mode", "strict")
        assert code == 0
        assert "Design complexity d*: 16" not in out

    def test_weights_flag(self, case_study_dir, capsys):
        code, out, _ = run(
            capsys, "analyze", str(case_study_dir), "--weights", "1,0,0",
            "--format", "structured",
        )
        doc = json.loads(out)
        # diversity-only weighting: d_b = mean of diversity column = 0.7375
        assert doc["beneficial"]["d_b"] == pytest.approx(0.7375)


class TestReport:
    def test_deterministic_bytes(self, case_study_dir, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "report", str(case_study_dir), "--out", str(a))
        run(capsys, "report", str(case_study_dir), "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_text_format(self, case_study_dir, capsys):
        code, out, _ = run(capsys, "report", str(case_study_dir), "--format", "text")
        assert code == 0
        assert "Defence complexity report" in out


class TestWhatIf:
    def test_inline_edit(self, case_study_dir, capsys):
        code, out, _ = run(
            capsys, "whatif", str(case_study_dir),
            "--edit",
            '{"kind": "add_control", "component": "CTL-NEW", '
            '"diversity": 1, "independence": 1, "coverage": 1}',
        )
        assert code == 0
        assert "beneficial" in out
        assert "d_e" in out or "d_e:" in out

    def test_edits_file(self, case_study_dir, tmp_path, capsys):
        edits = tmp_path / "edits.json"
        edits.write_text(json.dumps([{"kind": "set_beta", "beta": 1.0}]))
        code, out, _ = run(
            capsys, "whatif", str(case_study_dir), "--edits", str(edits),
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["delta"]["d_e_delta"] < 0
        assert doc["delta"]["effects"][0]["flag"] == "beneficial"

    def test_invalid_edit_exits_one(self, case_study_dir, capsys):
        code, _, err = run(
            capsys, "whatif", str(case_study_dir),
            "--edit", '{"kind": "remove_component", "component": "CTL-GHOST"}',
        )
        assert code == 1
        assert "edit 0" in err
        assert "CTL-GHOST" in err


class TestHeatmap:
    def test_workspaces_to_svg_and_table(self, case_study_dir, tmp_path, capsys):
        ws2 = tmp_path / "ws2"
        save_workspace(tiny_workspace(name="other", ttp="T1566"), ws2)
        svg_path = tmp_path / "heatmap.svg"
        code, out, _ = run(
            capsys, "heatmap", str(case_study_dir), str(ws2),
            "--grid", "2x1", "--out", str(svg_path),
        )
        assert code == 0
        table = json.loads(out)
        assert {s["ttp"] for s in table["scores"]} == {"T1059", "T1566"}
        svg = svg_path.read_text()
        assert svg.startswith("<svg") or "<svg" in svg
        assert svg.count("<rect") == 3  # 2 tiles + background

    def test_scores_file(self, data_dir, tmp_path, capsys):
        svg_path = tmp_path / "top30.svg"
        code, out, _ = run(
            capsys, "heatmap",
            "--scores", str(data_dir / "top30-synthetic-scores.json"),
            "--grid", "6x5", "--out", str(svg_path),
        )
        assert code == 0
        table = json.loads(out)
        assert len(table["scores"]) == 30
        assert svg_path.read_text().count("<rect") == 31

    def test_grid_too_small(self, data_dir, capsys):
        code, _, err = run(
            capsys, "heatmap",
            "--scores", str(data_dir / "top30-synthetic-scores.json"),
            "--grid", "2x2",
        )
        assert code == 1
        assert "grid" in err

    def test_byte_identical_svg(self, data_dir, tmp_path, capsys):
        paths = []
        for name in ("a.svg", "b.svg"):
            path = tmp_path / name
            run(
                capsys, "heatmap",
                "--scores", str(data_dir / "top30-synthetic-scores.json"),
                "--out", str(path),
            )
            paths.append(path.read_bytes())
        assert paths[0] == paths[1]

    def test_needs_input(self, capsys):
        code, _, err = run(capsys, "heatmap")
        assert code == 1
        assert "workspace" in err or "scores" in err


class TestFetchAttack:
    def test_fetch_from_local_path_and_reuse_cache(self, data_dir, tmp_path, capsys):
        cache_dir = tmp_path / "cache"
        code, out, _ = run(
            capsys, "fetch-attack",
            "--url", str(data_dir / "attack-catalog.json"),
            "--cache-dir", str(cache_dir),
        )
        assert code == 0
        assert "network" in out
        assert (cache_dir / "attack-catalog.json").exists()
        code, out, _ = run(
            capsys, "fetch-attack",
            "--url", str(data_dir / "attack-catalog.json"),
            "--cache-dir", str(cache_dir),
        )
        assert code == 0
        assert "cache" in out

    def test_fetch_failure_exits_one(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "fetch-attack",
            "--url", str(tmp_path / "missing.json"),
            "--cache-dir", str(tmp_path / "cache"),
        )
        assert code == 1
        assert "error:" in err
