"""Renderer acceptance: all five kinds from golden CSVs, schema guards,
footnote embedding, read-only and idempotent behaviour."""

import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from figrender import EXPECTED_COLUMNS, FIGURE_KINDS, FigureSpec, SchemaError, render
from figrender.figures import BUILDERS
from figrender.reader import load_csv

GOLDEN = Path(__file__).parent / "golden"
KIND_TO_CSV = {
    "posterior": "posterior.csv",
    "scaling": "scaling.csv",
    "shift": "shift.csv",
    "alpha": "alpha.csv",
    "singledraw": "singledraw.csv",
}


def golden_csv(kind) -> Path:
    return GOLDEN / KIND_TO_CSV[kind]


def run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "figrender.cli"] + [str(a) for a in args],
                          capture_output=True, text=True)
    return proc


class TestGoldenRenders:
    @pytest.mark.parametrize("kind", FIGURE_KINDS)
    @pytest.mark.parametrize("fmt", ["png", "svg"])
    def test_renders_both_formats(self, tmp_path, kind, fmt):
        out = tmp_path / f"{kind}.{fmt}"
        result = render(FigureSpec(csv_path=golden_csv(kind), figure_kind=kind,
                                   output_path=out))
        assert result == out and out.stat().st_size > 0

    @pytest.mark.parametrize("kind", FIGURE_KINDS)
    def test_panel_structure(self, tmp_path, kind):
        import matplotlib.pyplot as plt
        data = load_csv(golden_csv(kind), kind)
        fig = BUILDERS[kind].build(data)
        try:
            assert len(fig.axes) == BUILDERS[kind].N_PANELS
        finally:
            plt.close(fig)

    @pytest.mark.parametrize("kind", FIGURE_KINDS)
    def test_footnote_embeds_config(self, tmp_path, kind):
        out = tmp_path / f"{kind}.svg"
        render(FigureSpec(csv_path=golden_csv(kind), figure_kind=kind, output_path=out))
        svg = out.read_text()
        assert "artifact_version" in svg and "seed=7" in svg

    def test_input_is_read_only(self, tmp_path):
        src = golden_csv("posterior")
        copy = tmp_path / "input.csv"
        shutil.copy(src, copy)
        before = copy.read_bytes()
        render(FigureSpec(csv_path=copy, figure_kind="posterior",
                          output_path=tmp_path / "out.png"))
        assert copy.read_bytes() == before

    @pytest.mark.parametrize("fmt", ["png", "svg"])
    def test_rerender_is_byte_stable(self, tmp_path, fmt):
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.{fmt}"
            render(FigureSpec(csv_path=golden_csv("scaling"), figure_kind="scaling",
                              output_path=out))
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestSchemaGuards:
    def test_wrong_kind_raises_with_column_diff(self):
        with pytest.raises(SchemaError) as err:
            load_csv(golden_csv("scaling"), "posterior")
        msg = str(err.value)
        assert "missing=" in msg and "unexpected=" in msg
        assert "hyper_prior_density" in msg

    def test_missing_config_line(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("u,hyper_prior_density,imrm_posterior_density,emrm_marker\n")
        with pytest.raises(SchemaError):
            load_csv(bad, "posterior")

    def test_no_rows(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("# config: x=1\n" + ",".join(EXPECTED_COLUMNS["posterior"]) + "\n")
        with pytest.raises(SchemaError):
            load_csv(bad, "posterior")

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            FigureSpec(csv_path=golden_csv("posterior"), figure_kind="pie",
                       output_path=tmp_path / "x.png")


class TestCli:
    def test_success_exit_zero(self, tmp_path):
        out = tmp_path / "fig.png"
        proc = run_cli(["--kind", "posterior", "--in", golden_csv("posterior"),
                        "--out", out])
        assert proc.returncode == 0 and out.exists()

    def test_schema_mismatch_exit_2_and_no_file(self, tmp_path):
        out = tmp_path / "fig.png"
        proc = run_cli(["--kind", "posterior", "--in", golden_csv("scaling"),
                        "--out", out])
        assert proc.returncode == 2
        assert "missing=" in proc.stderr
        assert not out.exists()

    def test_malformed_csv_exit_2(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("not a csv at all\n")
        out = tmp_path / "fig.png"
        proc = run_cli(["--kind", "shift", "--in", bad, "--out", out])
        assert proc.returncode == 2 and not out.exists()

    def test_missing_file_exit_2(self, tmp_path):
        proc = run_cli(["--kind", "shift", "--in", tmp_path / "nope.csv",
                        "--out", tmp_path / "fig.png"])
        assert proc.returncode == 2

    def test_bad_output_format_exit_2(self, tmp_path):
        proc = run_cli(["--kind", "posterior", "--in", golden_csv("posterior"),
                        "--out", tmp_path / "fig.pdf"])
        assert proc.returncode == 2
