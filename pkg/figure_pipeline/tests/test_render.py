import subprocess
import sys
from pathlib import Path

import pytest

from figure_pipeline import FigureSpec, build_figure, read_process_columns, render_figure

HEADER = "rep,dataset,K,k0,k1,bk,mean_bk,batch,lb,ub"

LABELS = ["BK", "mean BK", "batch", "LB", "UB"]


def write_csv(path: Path, rows):
    lines = [HEADER]
    for i, (bk, mean_bk, batch, lb, ub) in enumerate(rows):
        lines.append(f"{i},01010101010101010101,10,5,5,{bk},{mean_bk},{batch},{lb},{ub}")
    path.write_text("\n".join(lines) + "\n")


@pytest.fixture
def csv_pair(tmp_path):
    left = tmp_path / "left.csv"
    right = tmp_path / "right.csv"
    write_csv(left, [(2.0 + 0.1 * i, 3.0, 40.0, 50.0, 60.0) for i in range(20)])
    write_csv(
        right,
        [
            (1.0 + i, 2.0 + i, 30.0 + i, 40.0 + i, 50.0 + i)
            for i in range(30)
        ],
    )
    return left, right


class TestCsvParsing:
    def test_reads_all_processes(self, csv_pair):
        left, _ = csv_pair
        cols = read_process_columns(str(left))
        assert set(cols) == {"bk", "mean_bk", "batch", "lb", "ub"}
        assert len(cols["bk"]) == 20

    def test_missing_column_named(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("rep,dataset,K,k0,k1,bk,batch,lb,ub\n0,01,1,1,0,1,1,1,1\n")
        with pytest.raises(ValueError, match="mean_bk"):
            read_process_columns(str(bad))

    def test_empty_rows_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(HEADER + "\n")
        with pytest.raises(ValueError, match="no data rows"):
            read_process_columns(str(empty))


class TestBuildFigure:
    def test_two_panels_five_labels_each(self, csv_pair):
        left, right = csv_pair
        fig = build_figure(
            FigureSpec(left_csv=str(left), right_csv=str(right), out="unused.png")
        )
        assert len(fig.axes) == 2
        for ax in fig.axes:
            assert [t.get_text() for t in ax.get_xticklabels()] == LABELS
        assert fig.axes[0].get_yscale() == "log"
        assert fig.axes[1].get_yscale() == "log"

    def test_linear_flag(self, csv_pair):
        left, right = csv_pair
        fig = build_figure(
            FigureSpec(str(left), str(right), "unused.png", log_scale=False)
        )
        assert fig.axes[0].get_yscale() == "linear"

    def test_left_bk_point_variant(self, csv_pair):
        left, right = csv_pair
        fig = build_figure(
            FigureSpec(str(left), str(right), "unused.png", left_bk="point")
        )
        assert len(fig.axes) == 2

    def test_whiskers_at_5_and_95_percent(self, csv_pair):
        import numpy as np

        left, right = csv_pair
        fig = build_figure(
            FigureSpec(str(left), str(right), "unused.png", log_scale=False)
        )
        ax = fig.axes[1]
        bk_vals = read_process_columns(str(right))["bk"]
        want = {
            round(float(np.percentile(bk_vals, 5)), 9),
            round(float(np.percentile(bk_vals, 95)), 9),
        }
        # whisker endpoints drawn at x = 1 (the BK box)
        ends = set()
        for line in ax.lines:
            xs, ys = line.get_xdata(), line.get_ydata()
            if len(xs) == 2 and all(abs(x - 1.0) < 1e-9 for x in xs):
                ends.add(round(float(ys[-1]), 9))
        assert want <= ends

    def test_bad_left_bk_rejected(self):
        with pytest.raises(ValueError, match="left_bk"):
            FigureSpec("a", "b", "c", left_bk="violin")


class TestRenderFigure:
    def test_writes_nonempty_image(self, csv_pair, tmp_path):
        left, right = csv_pair
        out = tmp_path / "fig.png"
        render_figure(FigureSpec(str(left), str(right), str(out)))
        assert out.exists()
        assert out.stat().st_size > 1000

    def test_single_row_degenerate_boxplots(self, tmp_path):
        left = tmp_path / "l.csv"
        right = tmp_path / "r.csv"
        write_csv(left, [(2.0, 3.0, 4.0, 5.0, 6.0)])
        write_csv(right, [(2.0, 3.0, 4.0, 5.0, 6.0)])
        out = tmp_path / "fig.png"
        render_figure(FigureSpec(str(left), str(right), str(out)))
        assert out.stat().st_size > 1000

    def test_rerender_identical_bytes(self, csv_pair, tmp_path):
        left, right = csv_pair
        a = tmp_path / "a.png"
        b = tmp_path / "b.png"
        render_figure(FigureSpec(str(left), str(right), str(a)))
        render_figure(FigureSpec(str(left), str(right), str(b)))
        assert a.read_bytes() == b.read_bytes()


class TestCli:
    def run_render(self, *args, check=True):
        proc = subprocess.run(
            [sys.executable, "-m", "figure_pipeline", *args],
            capture_output=True,
            text=True,
        )
        if check and proc.returncode != 0:
            raise AssertionError(proc.stderr)
        return proc

    def test_end_to_end_from_simulator_csv(self, tmp_path):
        # the real external interface: CSVs produced by the simulation CLI
        left = tmp_path / "left.csv"
        right = tmp_path / "right.csv"
        for mode, path in (("fixed-dataset", left), ("random-datasets", right)):
            proc = subprocess.run(
                [
                    sys.executable, "-m", "conformal_testing", "simulate",
                    "--mode", mode, "--reps", "12", "--inner-bk", "4",
                    "--seed", "42", "--out", str(path),
                ],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stderr
        out = tmp_path / "fig.png"
        self.run_render("--left", str(left), "--right", str(right), "--out", str(out))
        assert out.stat().st_size > 1000

    def test_missing_column_exit_code(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("rep,dataset\n0,01\n")
        ok = tmp_path / "ok.csv"
        write_csv(ok, [(1.0, 1.0, 1.0, 1.0, 1.0)])
        proc = self.run_render(
            "--left", str(bad), "--right", str(ok), "--out", str(tmp_path / "f.png"),
            check=False,
        )
        assert proc.returncode == 1
        assert "bk" in proc.stderr
