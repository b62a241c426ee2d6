"""Figure data tables (the contract) and quick SVG renderings (best effort)."""

from __future__ import annotations

import logging
import shutil
from collections import defaultdict
from pathlib import Path

from .tables import read_table, write_table

log = logging.getLogger(__name__)

# figure name -> (source tables relative to the output root, plot kind, title)
FIGURES = {
    "publications": (["corpus/stats.tsv"], "lines_by_column", "Yearly publication and citation counts"),
    "category_usage": (["corpus/category_usage.tsv"], "lines_by_key", "Category usage N_tc/N_t"),
    "size_vs_threshold": (["metrics/size_vs_threshold.tsv"], "lines_by_key", "Nodes vs weight threshold"),
    "clustered": (["metrics/clustered.tsv"], "lines_by_column", "Clustered nodes and largest group"),
    "group_sizes": (["metrics/size_hist.tsv"], "hist", "Group state sizes"),
    "lifespans": (["metrics/lifespan_hist.tsv"], "bars", "Group lifespans"),
    "sizes_overlap": (["metrics/size_hist.tsv", "metrics/overlapping_size_hist.tsv"], "hist",
                      "Sizes of all / overlapping states"),
    "total_overlap": (["metrics/total_overlap_hist.tsv"], "bars", "Total overlap size"),
    "relative_overlap": (["metrics/relative_overlap_hist.tsv"], "hist", "Relative total overlap"),
    "efficiency": (["metrics/efficiency_hist.tsv"], "hist", "Group efficiency"),
    "cohesion": (["metrics/cohesion_hist.tsv"], "hist", "Group cohesion"),
    "size_vs_lifespan": (["metrics/size_vs_lifespan.tsv"], "errorbar", "Lifespan vs group size"),
    "size_vs_cohesion": (["metrics/size_vs_cohesion.tsv"], "errorbar", "Cohesion vs group size"),
    "category_groups": (["metrics/category_group_ratio.tsv"], "lines_by_key", "Group ratio per category"),
    "multidisciplinarity": (["metrics/multidisciplinarity.tsv"], "lines_by_column",
                            "Multidisciplinarity ratio"),
    "multi_vs_threshold": (["metrics/multidisciplinarity_vs_threshold.tsv"], "lines_by_key",
                           "Multidisciplinarity vs weight threshold"),
}


def _num(s: str):
    if s == "-":
        return None
    try:
        return int(s)
    except ValueError:
        return float(s)


def _plot(kind: str, title: str, tables: list[tuple[list[str], list[list[str]]]], path: Path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "cocitemap"
    matplotlib.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=(6, 4))
    for header, rows in tables:
        if kind == "lines_by_column":
            xs = [_num(r[0]) for r in rows]
            for c in range(1, len(header)):
                if header[c] in ("w",):
                    continue
                ys = [_num(r[c]) for r in rows]
                pts = [(x, y) for x, y in zip(xs, ys) if y is not None]
                if pts:
                    ax.plot(*zip(*pts), marker="o", label=header[c])
        elif kind == "lines_by_key":
            series = defaultdict(list)
            for r in rows:
                series[r[0]].append((_num(r[1]), _num(r[2])))
            for key in sorted(series)[:20]:
                ax.plot(*zip(*series[key]), marker=".", label=str(key))
        elif kind == "hist":
            lo = [_num(r[0]) for r in rows]
            hi = [_num(r[1]) for r in rows]
            cnt = [_num(r[2]) for r in rows]
            ax.bar(lo, cnt, width=[h - l_ if h > l_ else 0.5 for l_, h in zip(lo, hi)], align="edge",
                   alpha=0.6, edgecolor="k")
        elif kind == "bars":
            ax.bar([_num(r[0]) for r in rows], [_num(r[1]) for r in rows], edgecolor="k")
        elif kind == "errorbar":
            xs = [(_num(r[0]) * _num(r[1])) ** 0.5 for r in rows]
            ax.errorbar(xs, [_num(r[3]) for r in rows], yerr=[_num(r[4]) for r in rows], marker="o", capsize=3)
            ax.set_xscale("log")
    ax.set_title(title)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def emit_figures(root: str | Path, render: bool = True) -> list[str]:
    """Write one table per figure under ``figures/`` (plus an SVG when ``render``).

    Figures whose source tables are missing are skipped and listed in
    ``figures/skipped.tsv``. Returns the names of the figures written.
    """
    root = Path(root)
    out = root / "figures"
    out.mkdir(parents=True, exist_ok=True)
    made, skipped = [], []
    for name, (sources, kind, title) in FIGURES.items():
        paths = [root / s for s in sources]
        missing = [s for s, p in zip(sources, paths) if not p.exists()]
        if missing:
            log.warning("figure %s skipped: missing %s", name, ", ".join(missing))
            skipped.append((name, ",".join(missing)))
            continue
        if len(paths) == 1:
            shutil.copyfile(paths[0], out / f"{name}.tsv")
        else:
            rows = []
            for s, p in zip(sources, paths):
                header, body = read_table(p)
                rows += [(Path(s).stem, *r) for r in body]
            write_table(out / f"{name}.tsv", ["series", *header], rows)
        if render:
            tables = [read_table(p) for p in paths]
            if any(body for _, body in tables):
                try:
                    _plot(kind, title, tables, out / f"{name}.svg")
                except Exception as e:  # noqa: BLE001 - renderings are best effort
                    log.warning("rendering %s failed: %s", name, e)
        made.append(name)
    write_table(out / "skipped.tsv", ["figure", "missing"], skipped)
    return made
