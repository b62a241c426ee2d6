"""End-to-end pipeline, timeline map and figure tables.

Every stage reads what it needs from the output directory and writes plain
sorted text tables back into it, so any stage can be rerun on its own and
every figure table can be rebuilt from persisted outputs.
"""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .cocitation import (CoCitationNetwork, build_yearly_network, read_edge_list, size_vs_threshold,
                         threshold, write_edge_list)
from .config import PipelineConfig
from .corpus import CorpusStore, category_usage, corpus_stats, read_corpus
from .cpm import CommunitySet, k_clique_communities
from .metrics import (SELECTORS, CitationGraph, category_group_ratio, group_metrics, lifecycle_stats,
                      multidisciplinarity_ratio, multidisciplinarity_vs_threshold, top_categories)
from .tables import (read_communities, read_table, read_timelines, read_transitions, write_communities,
                     write_table, write_timelines, write_transitions)
from .tagging import CandidateIndex, TagReport, build_candidate_set, tag_year, window_tags
from .threshold_opt import NoCommunitiesError, scan_thresholds, select_threshold, write_scan
from .timeline import Timeline, build_timelines, detect_transitions

log = logging.getLogger(__name__)

STAGES = ("ingest", "build", "threshold", "cluster", "match", "metrics", "tags", "map")
MAP_SCHEMA = 1


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r} failed: {message}")
        self.stage = stage


def sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class Workspace:
    """Paths of the output tree plus cached loaders for stage outputs."""

    def __init__(self, root: str | Path, config: PipelineConfig):
        self.root = Path(root)
        self.config = config
        self._store: CorpusStore | None = None
        self._nets: dict[int, CoCitationNetwork] = {}
        self._cpm: dict[tuple[int, int], CommunitySet] = {}
        self._comms: dict[int, CommunitySet] | None = None
        self._timelines: list[Timeline] | None = None

    def dir(self, name: str) -> Path:
        d = self.root / name
        d.mkdir(parents=True, exist_ok=True)
        return d

    def files(self, name: str) -> list[Path]:
        d = self.root / name
        return sorted(p for p in d.rglob("*") if p.is_file()) if d.exists() else []

    # -- loaders ------------------------------------------------------------
    @property
    def store(self) -> CorpusStore:
        if self._store is None:
            path = self.root / "corpus" / "records.jsonl"
            if not path.exists():
                raise FileNotFoundError(f"{path} missing; run 'ingest' first")
            self._store = read_corpus(path, self.config.year_range)
        return self._store

    def network_years(self) -> list[int]:
        d = self.root / "networks"
        if not d.exists():
            raise FileNotFoundError(f"{d} missing; run 'build' first")
        return sorted(int(p.stem) for p in d.glob("*.tsv"))

    def network(self, year: int) -> CoCitationNetwork:
        if year not in self._nets:
            self._nets[year] = read_edge_list(self.root / "networks" / f"{year}.tsv", self.store, year)
        return self._nets[year]

    def selected(self) -> dict[int, int]:
        path = self.root / "thresholds" / "selected.tsv"
        if not path.exists():
            raise FileNotFoundError(f"{path} missing; run 'threshold' first")
        _, rows = read_table(path)
        return {int(r[0]): int(r[1]) for r in rows if r[1] != "-"}

    def cpm(self, year: int, w: int) -> CommunitySet:
        key = (year, w)
        if key not in self._cpm:
            self._cpm[key] = k_clique_communities(threshold(self.network(year), w),
                                                  self.config.k, self.config.budget)
        return self._cpm[key]

    def communities(self) -> dict[int, CommunitySet]:
        if self._comms is None:
            path = self.root / "communities" / "communities.tsv"
            if not path.exists():
                raise FileNotFoundError(f"{path} missing; run 'cluster' first")
            self._comms = read_communities(path, self.store, self.config.k)
        return self._comms

    def timelines(self) -> list[Timeline]:
        if self._timelines is None:
            path = self.root / "timelines" / "timelines.tsv"
            if not path.exists():
                raise FileNotFoundError(f"{path} missing; run 'match' first")
            self._timelines = read_timelines(path, self.store)
        return self._timelines


# -- stages -----------------------------------------------------------------

def stage_ingest(ws: Workspace):
    cfg = ws.config
    store = read_corpus(cfg.corpus, cfg.year_range, cfg.strict)
    d = ws.dir("corpus")
    store.write(d / "records.jsonl")
    rep = store.report
    (d / "parse_report.json").write_text(json.dumps({
        "lines": rep.lines, "parsed": rep.parsed, "skipped": rep.skipped,
        "out_of_range": rep.out_of_range, "missing_year": rep.missing_year,
        "cited_only": len(store) - store.n_records, "errors": rep.errors,
    }, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    write_table(d / "stats.tsv", ["year", "published", "citing", "co_citing", "cited", "co_cited"],
                [(s.year, s.published, s.citing, s.co_citing, s.cited, s.co_cited)
                 for s in corpus_stats(store)])
    usage = category_usage(store, cfg.category_min_ratio)
    write_table(d / "category_usage.tsv", ["category", "year", "ratio"],
                [(c, y, r) for c, per in usage.items() for y, r in per.items()])
    ws._store = None  # reload from the persisted copy
    return rep


def stage_build(ws: Workspace, years: list[int] | None = None) -> None:
    store = ws.store
    d = ws.dir("networks")
    years = store.years if years is None else years
    any_edges = False
    for y in years:
        net = build_yearly_network(store, y, streaming=ws.config.streaming)
        if not net.edges:
            continue
        any_edges = True
        write_edge_list(net, store, d / f"{y}.tsv")
        ws._nets[y] = net
    if not any_edges:
        raise PipelineError("build", "no co-citing papers")


def _scan_year(args):
    net, k, budget = args
    return scan_thresholds(net, k, budget=budget)


def stage_threshold(ws: Workspace, years: list[int] | None = None, criterion: str | None = None) -> None:
    cfg = ws.config
    criterion = criterion or cfg.criterion
    years = ws.network_years() if years is None else years
    nets = [ws.network(y) for y in years]
    jobs = [(net, cfg.k, cfg.budget) for net in nets]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            scans = list(ex.map(_scan_year, jobs))
    else:
        scans = [_scan_year(j) for j in jobs]
    d = ws.dir("thresholds")
    path = d / "selected.tsv"
    chosen = {}
    if path.exists():
        _, rows = read_table(path)
        chosen = {int(r[0]): (r[1], r[2]) for r in rows}
    for y, scan in zip(years, scans):
        write_scan(scan, d / f"scan_{y}.tsv")
        try:
            chosen[y] = (str(select_threshold(scan, criterion)), criterion)
        except NoCommunitiesError:
            chosen[y] = ("-", criterion)
    write_table(path, ["year", "w", "criterion"], [(y, *chosen[y]) for y in sorted(chosen)])


def stage_cluster(ws: Workspace, years: list[int] | None = None) -> None:
    sel = ws.selected()
    path = ws.dir("communities") / "communities.tsv"
    comms = {}
    if years is not None and path.exists():
        comms = read_communities(path, ws.store, ws.config.k)
    for y in (sorted(sel) if years is None else years):
        if y in sel:
            comms[y] = ws.cpm(y, sel[y])
        else:
            comms.pop(y, None)
    write_communities(path, comms, ws.store)
    write_table(path.with_name("approximate.tsv"), ["year", "approximate"],
                [(y, comms[y].approximate) for y in sorted(comms)])
    ws._comms = None


def stage_match(ws: Workspace, first: int | None = None, last: int | None = None) -> None:
    store, cfg = ws.store, ws.config
    comms = ws.communities()
    sel = ws.selected()
    years = [y for y in comms if (first is None or y >= first) and (last is None or y <= last)]
    if years:
        lo, hi = min(years), max(years)
        yearly = {y: comms.get(y, CommunitySet(y, [], cfg.k)) for y in range(lo, hi + 1)}
    else:
        yearly = {}
    nets = {y: threshold(ws.network(y), sel[y]) for y in yearly if y in sel}
    ts = build_timelines(yearly, nets, cfg.k, cfg.budget)
    d = ws.dir("timelines")
    write_timelines(d / "timelines.tsv", ts.timelines, store)
    write_transitions(d / "transitions.tsv", detect_transitions(ts.timelines, cfg.strict_moves), store)
    write_table(d / "events.tsv", ["kind", "year", "sources", "targets"],
                [(e.kind, e.year, ",".join(map(str, e.sources)), ",".join(map(str, e.targets)))
                 for e in ts.events])
    rows = []
    for t, res in sorted(ts.matches.items()):
        for step in res.log:
            rows.append((t, step.group, step.a, step.b, step.jaccard))
    write_table(d / "matches.tsv", ["year", "merged_community", "index_t", "index_t1", "jaccard"], rows)
    viol = [(t, side, i) for t, res in sorted(ts.matches.items()) for side, i in res.violations]
    write_table(d / "containment_violations.tsv", ["year", "side", "index"], viol)
    ws._timelines = None


def stage_metrics(ws: Workspace, decay: float | None = None) -> None:
    store, cfg = ws.store, ws.config
    decay = cfg.decay if decay is None else decay
    tls = ws.timelines()
    cg = CitationGraph.from_store(store)
    d = ws.dir("metrics")
    rows, diag = group_metrics(tls, cg, decay)
    write_table(d / "group_metrics.tsv",
                ["timeline_id", "year", "size", "cohesion", "efficiency", "total_overlap",
                 "relative_total_overlap"],
                [(r.timeline_id, r.year, r.size, r.cohesion, r.efficiency, r.total_overlap,
                  r.relative_total_overlap) for r in rows])
    (d / "diagnostics.json").write_text(json.dumps(diag, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    write_table(d / "lifespans.tsv", ["timeline_id", "birth_year", "death_year", "lifespan"],
                [(t.id, t.birth_year, t.death_year, t.lifespan) for t in tls])
    if tls:
        ls = lifecycle_stats(tls, rows)
        write_table(d / "lifespan_hist.tsv", ["lifespan", "count"], ls.lifespan_hist.items())
        write_table(d / "size_hist.tsv", ["bin_lo", "bin_hi", "count", "pdf"], ls.size_hist)
        write_table(d / "overlapping_size_hist.tsv", ["bin_lo", "bin_hi", "count", "pdf"],
                    ls.overlapping_size_hist)
        write_table(d / "total_overlap_hist.tsv", ["total_overlap", "count"], ls.total_overlap_hist.items())
        write_table(d / "relative_overlap_hist.tsv", ["bin_lo", "bin_hi", "count"], ls.relative_overlap_hist)
        write_table(d / "efficiency_hist.tsv", ["bin_lo", "bin_hi", "count", "pdf"], ls.efficiency_hist)
        write_table(d / "cohesion_hist.tsv", ["bin_lo", "bin_hi", "count"], ls.cohesion_hist)
        write_table(d / "size_vs_lifespan.tsv", ["bin_lo", "bin_hi", "count", "mean", "std"],
                    ls.size_vs_lifespan)
        write_table(d / "size_vs_cohesion.tsv", ["bin_lo", "bin_hi", "count", "mean", "std"],
                    ls.size_vs_cohesion)

    sel = ws.selected()
    years = ws.network_years()
    nets = {y: ws.network(y) for y in years}
    comms = {y: c.communities for y, c in ws.communities().items()}
    write_table(d / "size_vs_threshold.tsv", ["year", "w", "nodes"],
                [(y, w, n) for y in years for w, n in size_vs_threshold(nets[y])])
    core = []
    for y in sorted(comms):
        cs = comms[y]
        clustered = len(frozenset().union(*cs)) if cs else 0
        core.append((y, sel.get(y), len(cs), clustered, max((len(c) for c in cs), default=0)))
    write_table(d / "clustered.tsv", ["year", "w", "groups", "clustered_nodes", "largest_group"], core)
    ratios = {
        "all_published_up_to_t": multidisciplinarity_ratio(store, "all_published_up_to_t", years),
        "cocited_at_w*": multidisciplinarity_ratio(store, "cocited_at_w*", years, networks=nets,
                                                   thresholds=sel),
        "group_members": multidisciplinarity_ratio(store, "group_members", years, communities=comms),
    }
    write_table(d / "multidisciplinarity.tsv", ["year", *SELECTORS],
                [(y, *(ratios[s].get(y) for s in SELECTORS)) for y in years])
    write_table(d / "multidisciplinarity_vs_threshold.tsv", ["year", "w", "ratio"],
                [(y, w, r) for y in years for w, r in multidisciplinarity_vs_threshold(nets[y], store)])
    write_table(d / "category_group_ratio.tsv", ["category", "year", "ratio"],
                [(c, y, r) for c, per in category_group_ratio(comms, store).items() for y, r in per.items()])
    write_table(d / "top_categories.tsv", ["timeline_id", "rank", "category", "ratio"],
                [(t.id, i + 1, c, r) for t in tls for i, (c, r) in enumerate(top_categories(t, store))])


def stage_tags(ws: Workspace, years: list[int] | None = None, window: int | None = None) -> None:
    store, cfg = ws.store, ws.config
    window = cfg.window if window is None else window
    tls = ws.timelines()
    index = CandidateIndex(build_candidate_set(store))
    by_year: dict[int, list] = {}
    for tl in tls:
        for y, st in tl.states.items():
            by_year.setdefault(y, []).append(st)
    d = ws.dir("tags")
    path = d / "tags.tsv"
    reports: list[TagReport] = []
    kept_rows = []
    if years is not None and path.exists():
        _, old = read_table(path)
        kept_rows = [r for r in old if int(r[1]) not in set(years)]
    for y in sorted(by_year):
        if years is not None and y not in years:
            continue
        states = sorted(by_year[y], key=lambda s: s.timeline_id)
        reports.extend(tag_year(states, store, index, cfg.tag_limit))
    rows = [(r.timeline_id, r.year, ";".join(f"{kw}:{s:.6f}" for kw, s in r.scored),
             "selected:" + ";".join(r.selected), r.method) for r in reports]
    rows = sorted([tuple(r) for r in kept_rows] + rows, key=lambda r: (int(r[0]), int(r[1])))
    write_table(path, ["timeline", "year", "scores", "selected", "method"], rows)

    all_reports = _read_tag_reports(path)
    wrows = []
    for tl in tls:
        if tl.lifespan < cfg.min_lifespan:
            continue
        reps = [r for r in all_reports if r.timeline_id == tl.id]
        for wt in window_tags(reps, tl.birth_year, tl.death_year, window, cfg.min_lifespan):
            wrows.append((tl.id, wt.start, wt.end, ";".join(f"{kw}:{c}" for kw, c in wt.tags)))
    write_table(d / "windows.tsv", ["timeline", "start", "end", "tags"], wrows)


def _read_tag_reports(path: Path) -> list[TagReport]:
    _, rows = read_table(path)
    out = []
    for tid, year, scores, selected, method in rows:
        scored = []
        for item in filter(None, scores.split(";")):
            kw, s = item.rsplit(":", 1)
            scored.append((kw, float(s)))
        sel = [s for s in selected.removeprefix("selected:").split(";") if s]
        out.append(TagReport(int(tid), int(year), scored, sel, method))
    return out


# -- map --------------------------------------------------------------------

@dataclass
class MapRow:
    timeline_id: int
    birth_year: int
    death_year: int
    sizes: dict[int, int]
    categories: list[tuple[str, float]]
    windows: list[dict]
    tags: dict[int, list[str]] = field(default_factory=dict)


@dataclass
class MapDocument:
    rows: list[MapRow]
    transitions: list[dict]
    min_lifespan: int
    label_min_size: int

    def to_json(self) -> dict:
        return {
            "schema": MAP_SCHEMA,
            "filters": {"min_lifespan": self.min_lifespan, "label_min_size": self.label_min_size},
            "rows": [{
                "timeline_id": r.timeline_id,
                "birth_year": r.birth_year,
                "death_year": r.death_year,
                "categories": [{"category": c, "ratio": round(v, 6)} for c, v in r.categories],
                "sizes": [{"year": y, "size": s, "label": s > self.label_min_size}
                          for y, s in sorted(r.sizes.items())],
                "tags": [{"year": y, "tags": t} for y, t in sorted(r.tags.items())],
                "windows": r.windows,
            } for r in self.rows],
            "transitions": self.transitions,
        }


def emit_map(timelines: list[Timeline], transitions, categories: dict[int, list[tuple[str, float]]],
             tag_reports: list[TagReport], windows: dict[int, list[dict]],
             min_lifespan: int = 14, label_min_size: int = 10) -> MapDocument:
    """Rows for timelines living at least ``min_lifespan`` years, plus the
    transitions between them. Size labels are kept only above ``label_min_size``."""
    keep = sorted((t for t in timelines if t.lifespan >= min_lifespan), key=lambda t: t.id)
    ids = {t.id for t in keep}
    tags: dict[int, dict[int, list[str]]] = {}
    for r in tag_reports:
        if r.timeline_id in ids:
            tags.setdefault(r.timeline_id, {})[r.year] = list(r.selected)
    rows = [MapRow(t.id, t.birth_year, t.death_year, {y: st.size for y, st in t.states.items()},
                   categories.get(t.id, []), windows.get(t.id, []), tags.get(t.id, {})) for t in keep]
    trans = [{"from": e.from_timeline, "to": e.to_timeline, "year": e.year, "size": e.size,
              "label": e.size > label_min_size}
             for e in transitions if e.from_timeline in ids and e.to_timeline in ids]
    return MapDocument(rows, trans, min_lifespan, label_min_size)


def render_dot(doc: MapDocument) -> str:
    lines = ["digraph timelines {", "  rankdir=LR;", "  node [shape=box];"]
    for r in doc.rows:
        for y, s in sorted(r.sizes.items()):
            label = f"G{r.timeline_id} {y}" + (f"\\n{s}" if s > doc.label_min_size else "")
            lines.append(f'  "G{r.timeline_id}_{y}" [label="{label}", height={0.2 + s / 50:.3f}];')
        ys = sorted(r.sizes)
        for a, b in zip(ys, ys[1:]):
            lines.append(f'  "G{r.timeline_id}_{a}" -> "G{r.timeline_id}_{b}" [weight=10];')
    for t in doc.transitions:
        label = f' [label="{t["size"]}"]' if t["label"] else ""
        lines.append(f'  "G{t["from"]}_{t["year"]}" -> "G{t["to"]}_{t["year"] + 1}"{label};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_svg(doc: MapDocument) -> str:
    """Bare-bones static rendering: one row per timeline, bar height ~ size."""
    if not doc.rows:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="200" height="40"></svg>\n'
    y0 = min(r.birth_year for r in doc.rows)
    y1 = max(r.death_year for r in doc.rows)
    left, cw, rh = 260, 40, 60
    width = left + cw * (y1 - y0 + 1) + 20
    height = rh * len(doc.rows) + 40
    smax = max(s for r in doc.rows for s in r.sizes.values())
    row_of = {r.timeline_id: i for i, r in enumerate(doc.rows)}
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="10">']
    for y in range(y0, y1 + 1):
        out.append(f'<text x="{left + cw * (y - y0) + 4}" y="12">{y}</text>')
    for i, r in enumerate(doc.rows):
        cy = 30 + rh * i + rh / 2
        cats = "; ".join(f"{c} ({v:.2f})" for c, v in r.categories)
        out.append(f'<text x="4" y="{cy:.1f}">G{r.timeline_id}: {_esc(cats)}</text>')
        for y, s in sorted(r.sizes.items()):
            h = max(2.0, (rh - 10) * s / smax)
            x = left + cw * (y - y0)
            out.append(f'<rect x="{x + 4}" y="{cy - h / 2:.1f}" width="{cw - 8}" height="{h:.1f}" '
                       f'fill="#6b8fb3"/>')
            if s > doc.label_min_size:
                out.append(f'<text x="{x + 6}" y="{cy + 3:.1f}" fill="white">{s}</text>')
    for t in doc.transitions:
        a, b = row_of[t["from"]], row_of[t["to"]]
        x1 = left + cw * (t["year"] - y0) + cw - 4
        x2 = left + cw * (t["year"] + 1 - y0) + 4
        ya, yb = 30 + rh * a + rh / 2, 30 + rh * b + rh / 2
        out.append(f'<line x1="{x1}" y1="{ya:.1f}" x2="{x2}" y2="{yb:.1f}" stroke="#c0392b"/>')
        if t["label"]:
            out.append(f'<text x="{(x1 + x2) / 2:.1f}" y="{(ya + yb) / 2:.1f}" fill="#c0392b">{t["size"]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def stage_map(ws: Workspace) -> MapDocument:
    cfg, store = ws.config, ws.store
    tls = ws.timelines()
    transitions = read_transitions(ws.root / "timelines" / "transitions.tsv", store)
    cats: dict[int, list] = {}
    _, rows = read_table(ws.root / "metrics" / "top_categories.tsv")
    for tid, _rank, c, r in rows:
        cats.setdefault(int(tid), []).append((c, float(r)))
    reports = _read_tag_reports(ws.root / "tags" / "tags.tsv")
    windows: dict[int, list[dict]] = {}
    _, rows = read_table(ws.root / "tags" / "windows.tsv")
    for tid, start, end, tags in rows:
        windows.setdefault(int(tid), []).append({
            "start": int(start), "end": int(end),
            "tags": [t.rsplit(":", 1)[0] for t in tags.split(";") if t]})
    doc = emit_map(tls, transitions, cats, reports, windows, cfg.min_lifespan, cfg.label_min_size)
    d = ws.dir("map")
    (d / "map.json").write_text(json.dumps(doc.to_json(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    (d / "map.dot").write_text(render_dot(doc), encoding="utf-8")
    (d / "map.svg").write_text(render_svg(doc), encoding="utf-8")
    return doc


# -- driver -----------------------------------------------------------------

STAGE_FUNCS: dict[str, Callable[[Workspace], object]] = {
    "ingest": stage_ingest,
    "build": stage_build,
    "threshold": stage_threshold,
    "cluster": stage_cluster,
    "match": stage_match,
    "metrics": stage_metrics,
    "tags": stage_tags,
    "map": stage_map,
}


def write_manifest(ws: Workspace, done: list[str], failed: str | None = None,
                   figures: list[str] | None = None) -> dict:
    import nltk
    import numpy
    cfg = ws.config
    manifest = {
        "package": "cocitemap",
        "versions": {"cocitemap": __version__, "nltk": nltk.__version__, "numpy": numpy.__version__},
        "config": cfg.to_dict(with_output=False) | {"corpus": Path(cfg.corpus).name},
        "corpus_sha256": sha256(Path(cfg.corpus)) if Path(cfg.corpus).exists() else None,
        "stages": [{"name": s, "files": {str(p.relative_to(ws.root)): sha256(p)
                                         for p in ws.files(_stage_dir(s))}} for s in done],
    }
    if failed:
        manifest["failed"] = failed
    if figures is not None:
        manifest["figures"] = {str(p.relative_to(ws.root)): sha256(p) for p in ws.files("figures")}
    (ws.root / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n",
                                            encoding="utf-8")
    return manifest


def _stage_dir(stage: str) -> str:
    return {"ingest": "corpus", "build": "networks", "threshold": "thresholds", "cluster": "communities",
            "match": "timelines", "metrics": "metrics", "tags": "tags", "map": "map"}[stage]


def run_pipeline(config: PipelineConfig, figures: bool = True) -> dict:
    """Run every stage in order, then the figure tables; returns the manifest."""
    ws = Workspace(config.output, config)
    ws.root.mkdir(parents=True, exist_ok=True)
    done: list[str] = []
    for name in STAGES:
        log.info("stage %s", name)
        try:
            STAGE_FUNCS[name](ws)
        except PipelineError:
            write_manifest(ws, done, failed=name)
            raise
        except Exception as e:  # noqa: BLE001 - surfaced with the stage name
            write_manifest(ws, done, failed=name)
            raise PipelineError(name, f"{type(e).__name__}: {e}") from e
        done.append(name)
    made = None
    if figures:
        from .figures import emit_figures
        made = emit_figures(ws.root, render=config.render)
    return write_manifest(ws, done, figures=made)
