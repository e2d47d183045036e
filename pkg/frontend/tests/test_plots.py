"""Tests for the figure-rendering front end, on synthetic CSV fixtures."""

import math

import numpy as np
import pytest

from dceplots import (FIGURES, MissingColumnError, RenderError, load_csv,
                      render)
from dceplots.cli import main


def synthesize_inputs(spec, directory, drop=None, empty=None):
    """Write minimal CSVs satisfying a FigureSpec's column requirements.

    drop: optional (table_key, column) to omit from that table's header.
    empty: optional table_key whose CSV gets a header but no data rows.
    """
    rng = np.random.default_rng(7)
    for key, filename in spec.inputs.items():
        columns = sorted(spec.columns_used(key))
        if drop and drop[0] == key:
            columns = [c for c in columns if c != drop[1]]
        path = directory / filename
        lines = [",".join(columns)]
        if empty != key:
            n_rows = 12
            data = rng.uniform(0.1, 1.0, size=(n_rows, len(columns)))
            for j, name in enumerate(columns):
                if name in ("t", "grid_value"):
                    data[:, j] = np.linspace(0.0, 1.0, n_rows)
            lines += [",".join(f"{v:.6f}" for v in row) for row in data]
        path.write_text("\n".join(lines) + "\n")


@pytest.mark.parametrize("name", sorted(FIGURES))
def test_render_every_preset(name, tmp_path):
    spec = FIGURES[name]
    in_dir = tmp_path / "in"
    in_dir.mkdir()
    synthesize_inputs(spec, in_dir)
    written = render(spec, in_dir, tmp_path / "out")
    assert {p.suffix for p in written} == {".png", ".svg"}
    for path in written:
        assert path.exists()
        assert path.stat().st_size > 1000
    png = next(p for p in written if p.suffix == ".png")
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_svg_output_is_deterministic(tmp_path):
    spec = FIGURES["fig1"]
    in_dir = tmp_path / "in"
    in_dir.mkdir()
    synthesize_inputs(spec, in_dir)
    first = render(spec, in_dir, tmp_path / "out_a")
    second = render(spec, in_dir, tmp_path / "out_b")
    svg_a = next(p for p in first if p.suffix == ".svg")
    svg_b = next(p for p in second if p.suffix == ".svg")
    assert svg_a.read_bytes() == svg_b.read_bytes()


def test_fig1_declares_exact_curve_and_both_overlays():
    spec = FIGURES["fig1"]
    rate_panel = spec.panels[0]
    drawn = {(s.table, s.y) for s in rate_panel.series}
    assert ("sweep", "C4_abs") in drawn
    assert ("pert", "c4_far") in drawn
    assert ("pert", "c4_near") in drawn
    overlays = [s for s in rate_panel.series if s.table == "pert"]
    assert all(s.fmt != "-" and s.abs_value for s in overlays)


def test_missing_column_is_named(tmp_path):
    spec = FIGURES["fig2"]
    in_dir = tmp_path / "in"
    in_dir.mkdir()
    synthesize_inputs(spec, in_dir, drop=("traj", "mandel_q"))
    with pytest.raises(MissingColumnError, match="mandel_q"):
        render(spec, in_dir, tmp_path / "out")
    assert not (tmp_path / "out").exists()


def test_empty_csv_produces_no_image(tmp_path):
    spec = FIGURES["fig3"]
    in_dir = tmp_path / "in"
    in_dir.mkdir()
    synthesize_inputs(spec, in_dir, empty="traj")
    with pytest.raises(RenderError, match="no data rows"):
        render(spec, in_dir, tmp_path / "out")
    assert not (tmp_path / "out").exists()


def test_missing_input_file(tmp_path):
    with pytest.raises(RenderError, match="not found"):
        render(FIGURES["fig3"], tmp_path, tmp_path / "out")


class TestLoadCsv:
    def test_round_trip_values(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("t,mean_n\n0.0,1.5\n2.0,2.5\n")
        table = load_csv(path)
        assert set(table) == {"t", "mean_n"}
        np.testing.assert_allclose(table["mean_n"], [1.5, 2.5])

    def test_non_numeric_cell_becomes_nan(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("t,row_error\n0.0,\n1.0,degenerate\n")
        table = load_csv(path)
        assert all(math.isnan(v) for v in table["row_error"])

    def test_no_header(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(RenderError, match="no header"):
            load_csv(path)


class TestCli:
    def test_unknown_preset(self, tmp_path, capsys):
        code = main(["fig99", "--in", str(tmp_path), "--out", str(tmp_path)])
        assert code == 1
        assert "unknown preset" in capsys.readouterr().err

    def test_missing_inputs_exit_code(self, tmp_path, capsys):
        code = main(["fig1", "--in", str(tmp_path), "--out",
                     str(tmp_path / "out")])
        assert code == 1
        assert "not found" in capsys.readouterr().err

    def test_successful_run_prints_paths(self, tmp_path, capsys):
        in_dir = tmp_path / "in"
        in_dir.mkdir()
        synthesize_inputs(FIGURES["fig5b"], in_dir)
        out_dir = tmp_path / "figures"
        code = main(["fig5b", "--in", str(in_dir), "--out", str(out_dir)])
        assert code == 0
        printed = capsys.readouterr().out.strip().splitlines()
        assert len(printed) == 2
        assert (out_dir / "fig5b.png").exists()
        assert (out_dir / "fig5b.svg").exists()
