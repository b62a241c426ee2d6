"""Command line entry point: ``cocitemap <subcommand>``.

Stage subcommands share an output directory (``--workdir``); ``ingest``
records its settings there so later stages pick them up.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import report
from .config import ConfigError, PipelineConfig, load_config, parse_range
from .corpus import CorpusError, read_corpus
from .metrics import CitationGraph, group_metrics, lifecycle_stats
from .tables import read_timelines, write_table

SETTINGS = "settings.json"


def _workspace(args, **overrides) -> report.Workspace:
    root = Path(args.workdir)
    settings = root / SETTINGS
    raw = json.loads(settings.read_text()) if settings.exists() else {}
    raw.setdefault("corpus", str(root / "corpus" / "records.jsonl"))
    raw.update({k: v for k, v in overrides.items() if v is not None})
    raw["output"] = str(root)
    return report.Workspace(root, PipelineConfig(**raw))


def _save_settings(ws: report.Workspace) -> None:
    (ws.root / SETTINGS).write_text(json.dumps(ws.config.to_dict(with_output=False), indent=1,
                                               sort_keys=True) + "\n")


def _years(args) -> list[int] | None:
    return None if getattr(args, "all", False) or args.year is None else [args.year]


def cmd_ingest(args) -> None:
    cfg = PipelineConfig(corpus=args.input, output=args.workdir,
                         year_range=parse_range(args.range) if args.range else None, strict=args.strict)
    ws = report.Workspace(args.workdir, cfg)
    ws.root.mkdir(parents=True, exist_ok=True)
    rep = report.stage_ingest(ws)
    _save_settings(ws)
    print(f"{rep.parsed} records parsed, {rep.skipped} skipped, "
          f"{len(ws.store) - ws.store.n_records} cited-only nodes")


def cmd_build(args) -> None:
    ws = _workspace(args, streaming=args.streaming or None)
    report.stage_build(ws, _years(args))


def cmd_threshold(args) -> None:
    ws = _workspace(args, k=args.k, budget=args.budget)
    report.stage_threshold(ws, _years(args), args.criterion)
    _save_settings(ws)
    for y, w in sorted(ws.selected().items()):
        if args.all or args.year is None or y == args.year:
            print(f"{y}\tw*={w}")


def cmd_cluster(args) -> None:
    ws = _workspace(args, k=args.k, budget=args.budget)
    report.stage_cluster(ws, _years(args))
    _save_settings(ws)


def cmd_match(args) -> None:
    ws = _workspace(args, strict_moves=args.strict_moves or None)
    report.stage_match(ws, args.first, args.last)


def cmd_metrics(args) -> None:
    if args.timelines or args.citations:
        if not (args.timelines and args.citations):
            raise SystemExit("--timelines and --citations go together")
        metrics_from_files(args.timelines, args.citations, Path(args.workdir) / "metrics",
                           0.23 if args.decay is None else args.decay)
        return
    ws = _workspace(args)
    report.stage_metrics(ws, args.decay)


def metrics_from_files(timelines_path, citations_path, out_dir: Path, decay: float = 0.23) -> None:
    """Group metrics from a timelines table and a corpus file of citations."""
    store = read_corpus(citations_path)
    tls = read_timelines(timelines_path, store)
    rows, diag = group_metrics(tls, CitationGraph.from_store(store), decay)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_table(out_dir / "group_metrics.tsv",
                ["timeline_id", "year", "size", "cohesion", "efficiency", "total_overlap",
                 "relative_total_overlap"],
                [(r.timeline_id, r.year, r.size, r.cohesion, r.efficiency, r.total_overlap,
                  r.relative_total_overlap) for r in rows])
    if tls:
        ls = lifecycle_stats(tls, rows)
        write_table(out_dir / "lifespan_hist.tsv", ["lifespan", "count"], ls.lifespan_hist.items())
    (out_dir / "diagnostics.json").write_text(json.dumps(diag, indent=1, sort_keys=True) + "\n")


def cmd_tags(args) -> None:
    ws = _workspace(args)
    report.stage_tags(ws, _years(args), args.window)


def cmd_map(args) -> None:
    ws = _workspace(args, min_lifespan=args.min_lifespan, label_min_size=args.label_min_size)
    doc = report.stage_map(ws)
    print(f"{len(doc.rows)} timeline row(s), {len(doc.transitions)} transition(s)")


def cmd_figures(args) -> None:
    from .figures import emit_figures
    made = emit_figures(args.workdir, render=not args.no_render)
    print(f"{len(made)} figure table(s) written")


def cmd_run(args) -> None:
    cfg = load_config(args.config)
    if args.output:
        cfg.output = args.output
    manifest = report.run_pipeline(cfg)
    ws = report.Workspace(cfg.output, cfg)
    _save_settings(ws)
    print(f"{len(manifest['stages'])} stages completed -> {cfg.output}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cocitemap", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--workdir", default="cocitemap_out", help="output directory shared by stages")
        sp.set_defaults(func=func)
        return sp

    def year_opts(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--year", type=int)
        g.add_argument("--all", action="store_true")

    sp = add("ingest", cmd_ingest, "parse and persist the record file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--range", help="analysis years, e.g. 1975:2008")
    sp.add_argument("--strict", action="store_true")

    sp = add("build", cmd_build, "yearly co-citation networks")
    year_opts(sp)
    sp.add_argument("--streaming", action="store_true", help="sort-merge pair counting on disk")

    sp = add("threshold", cmd_threshold, "scan and select weight thresholds")
    year_opts(sp)
    sp.add_argument("--k", type=int)
    sp.add_argument("--criterion", choices=["ratio2", "entropy"])
    sp.add_argument("--budget", type=int)

    sp = add("cluster", cmd_cluster, "k-clique communities at the selected thresholds")
    year_opts(sp)
    sp.add_argument("--k", type=int)
    sp.add_argument("--budget", type=int)

    sp = add("match", cmd_match, "join yearly communities into timelines")
    sp.add_argument("--from", dest="first", type=int)
    sp.add_argument("--to", dest="last", type=int)
    sp.add_argument("--strict-moves", action="store_true")

    sp = add("metrics", cmd_metrics, "group metrics and statistics")
    sp.add_argument("--timelines")
    sp.add_argument("--citations")
    sp.add_argument("--lambda", dest="decay", type=float)

    sp = add("tags", cmd_tags, "topic tags per group state")
    year_opts(sp)
    sp.add_argument("--window", type=int)

    sp = add("map", cmd_map, "timeline map document")
    sp.add_argument("--min-lifespan", type=int)
    sp.add_argument("--label-min-size", type=int)

    sp = add("figures", cmd_figures, "figure tables and renderings")
    sp.add_argument("--no-render", action="store_true")

    sp = sub.add_parser("run", help="whole pipeline from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--output", help="override the output directory")
    sp.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ConfigError, CorpusError, FileNotFoundError, report.PipelineError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
