"""Render meshpipe CSV outputs as figures.

Three kinds are understood, one per CSV schema the simulator emits:

* ``ifft_sweep``: latency versus core count, line plot on a log2 x axis
* ``blocksize_sweep``: latency versus pipeline block size
* ``case_comparison``: throughput and latency bar charts over the cases

Output format follows the file extension (SVG recommended: it diffs well in
docs). The output file is written atomically (temp file + rename) and the
input CSV is never touched.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

KINDS = ("ifft_sweep", "blocksize_sweep", "case_comparison")

_REQUIRED_COLUMNS = {
    "ifft_sweep": ("n_cores", "cycles"),
    "blocksize_sweep": ("block_size", "cycles"),
    "case_comparison": ("case", "throughput_sps", "latency_us"),
}


class SchemaError(ValueError):
    """The CSV does not carry the columns the figure kind needs."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_path: str
    out_path: str
    title: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


def read_rows(spec: FigureSpec) -> list[dict[str, str]]:
    with open(spec.csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in _REQUIRED_COLUMNS[spec.kind] if c not in header]
        if missing:
            raise SchemaError(
                f"{spec.csv_path} is missing column(s) {', '.join(missing)} required by {spec.kind}"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{spec.csv_path} has no data rows")
    return rows


def _save_atomically(fig, out_path: str) -> None:
    out_dir = os.path.dirname(os.path.abspath(out_path))
    fmt = os.path.splitext(out_path)[1].lstrip(".") or "svg"
    fd, tmp = tempfile.mkstemp(dir=out_dir, suffix=f".{fmt}")
    try:
        with os.fdopen(fd, "wb") as fh:
            fig.savefig(fh, format=fmt)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)


def _line_figure(rows, x_col, x_label, title, log2_x=False):
    xs = [int(r[x_col]) for r in rows]
    ys = [int(r["cycles"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, marker="o")
    if log2_x:
        ax.set_xscale("log", base=2)
        ax.set_xticks(xs)
        ax.get_xaxis().set_major_formatter(matplotlib.ticker.ScalarFormatter())
    ax.set_xlabel(x_label)
    ax.set_ylabel("latency [cycles]")
    ax.set_title(title)
    ax.grid(True, alpha=0.4)
    fig.tight_layout()
    return fig


def _comparison_figure(rows, title):
    cases = [r["case"] for r in rows]
    throughput = [int(r["throughput_sps"]) for r in rows]
    latency = [float(r["latency_us"]) for r in rows]
    fig, (ax_t, ax_l) = plt.subplots(2, 1, figsize=(6, 6))
    ax_t.bar(cases, throughput, color="tab:blue")
    ax_t.set_ylabel("throughput [symbols/s]")
    ax_l.bar(cases, latency, color="tab:orange")
    ax_l.set_ylabel("latency [us]")
    ax_l.set_xlabel("case")
    ax_t.set_title(title)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the figure described by `spec`; returns the output path."""
    rows = read_rows(spec)
    if spec.kind == "ifft_sweep":
        fig = _line_figure(rows, "n_cores", "IFFT cores",
                           spec.title or "IFFT latency vs cores", log2_x=True)
    elif spec.kind == "blocksize_sweep":
        fig = _line_figure(rows, "block_size", "block size [samples]",
                           spec.title or "Pipelined pair latency vs block size")
    else:
        fig = _comparison_figure(rows, spec.title or "Deployment comparison")
    _save_atomically(fig, spec.out_path)
    return spec.out_path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="meshpipe-plot", description="Plot meshpipe sweep and report CSV files"
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("csv_path", help="input CSV (never modified)")
    parser.add_argument("out_path", help="output image; format from extension (.svg, .png)")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(args.kind, args.csv_path, args.out_path, args.title))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
