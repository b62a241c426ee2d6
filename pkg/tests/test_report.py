import json

import pytest

from cocitemap.config import PipelineConfig
from cocitemap.figures import FIGURES, emit_figures
from cocitemap.report import STAGES, PipelineError, emit_map, render_dot, render_svg, run_pipeline
from cocitemap.synthetic import long_timeline_corpus, planted_dynamics, write_records
from cocitemap.tables import read_table, read_timelines, read_transitions
from cocitemap.corpus import read_corpus
from cocitemap.timeline import GroupState, Timeline, TransitionEdge


def tree(root):
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


@pytest.fixture(scope="module")
def planted_run(tmp_path_factory):
    base = tmp_path_factory.mktemp("planted")
    write_records(planted_dynamics()[0], base / "corpus.jsonl")
    cfg = PipelineConfig(corpus=str(base / "corpus.jsonl"), output=str(base / "out"), min_lifespan=4)
    manifest = run_pipeline(cfg)
    return cfg, base / "out", manifest


def test_manifest_lists_all_stages(planted_run):
    cfg, out, manifest = planted_run
    assert [s["name"] for s in manifest["stages"]] == list(STAGES) == \
        ["ingest", "build", "threshold", "cluster", "match", "metrics", "tags", "map"]
    assert "output" not in manifest["config"]
    assert manifest["config"]["corpus"] == "corpus.jsonl"
    assert len(manifest["corpus_sha256"]) == 64
    assert json.loads((out / "manifest.json").read_text()) == manifest
    assert all(s["files"] for s in manifest["stages"])


def test_stage_outputs_reload(planted_run):
    cfg, out, _ = planted_run
    store = read_corpus(out / "corpus" / "records.jsonl")
    tls = read_timelines(out / "timelines" / "timelines.tsv", store)
    assert sorted(t.lifespan for t in tls) == [3, 3, 4, 4, 6, 6, 6]
    _, events = read_table(out / "timelines" / "events.tsv")
    assert sorted(e[0] for e in events) == ["merge", "split"]
    assert read_transitions(out / "timelines" / "transitions.tsv", store) is not None


def test_map_consistency(planted_run):
    cfg, out, _ = planted_run
    store = read_corpus(out / "corpus" / "records.jsonl")
    tls = {t.id: t for t in read_timelines(out / "timelines" / "timelines.tsv", store)}
    doc = json.loads((out / "map" / "map.json").read_text())
    rows = {r["timeline_id"]: r for r in doc["rows"]}
    assert rows and all(tls[t].lifespan >= cfg.min_lifespan for t in rows)
    assert {t for t, tl in tls.items() if tl.lifespan >= cfg.min_lifespan} == set(rows)
    for tid, r in rows.items():
        assert {s["year"]: s["size"] for s in r["sizes"]} == {y: st.size for y, st in tls[tid].states.items()}
    for e in doc["transitions"]:
        assert e["from"] in rows and e["to"] in rows


def test_figure_tables_follow_stage_outputs(planted_run):
    _, out, manifest = planted_run
    assert (out / "figures" / "lifespans.tsv").read_bytes() == \
        (out / "metrics" / "lifespan_hist.tsv").read_bytes()
    header, _ = read_table(out / "figures" / "multidisciplinarity.tsv")
    assert header == ["year", "all_published_up_to_t", "cocited_at_w*", "group_members"]
    header, _ = read_table(out / "figures" / "multi_vs_threshold.tsv")
    assert header == ["year", "w", "ratio"]
    assert set(manifest["figures"]) >= {f"figures/{n}.tsv" for n in FIGURES}


def test_figures_skip_missing_sources(tmp_path):
    (tmp_path / "metrics").mkdir()
    (tmp_path / "metrics" / "lifespan_hist.tsv").write_text("lifespan\tcount\n3\t1\n")
    made = emit_figures(tmp_path, render=False)
    assert made == ["lifespans"]
    _, skipped = read_table(tmp_path / "figures" / "skipped.tsv")
    assert len(skipped) == len(FIGURES) - 1


def test_rerun_is_byte_identical(tmp_path):
    write_records(planted_dynamics()[0], tmp_path / "corpus.jsonl")
    trees = []
    for name in ("a", "b"):
        run_pipeline(PipelineConfig(corpus=str(tmp_path / "corpus.jsonl"), output=str(tmp_path / name)))
        trees.append(tree(tmp_path / name))
    assert trees[0] == trees[1]


def test_empty_corpus_aborts_at_build(tmp_path):
    (tmp_path / "empty.jsonl").write_text("")
    cfg = PipelineConfig(corpus=str(tmp_path / "empty.jsonl"), output=str(tmp_path / "out"))
    with pytest.raises(PipelineError, match="build.*no co-citing papers") as err:
        run_pipeline(cfg)
    assert err.value.stage == "build"
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["failed"] == "build"
    assert [s["name"] for s in manifest["stages"]] == ["ingest"]
    assert (tmp_path / "out" / "corpus" / "records.jsonl").exists()


def test_one_long_timeline_gives_one_row(tmp_path):
    write_records(long_timeline_corpus(1980, 15, 13), tmp_path / "c.jsonl")
    run_pipeline(PipelineConfig(corpus=str(tmp_path / "c.jsonl"), output=str(tmp_path / "out")), figures=False)
    doc = json.loads((tmp_path / "out" / "map" / "map.json").read_text())
    assert len(doc["rows"]) == 1
    assert doc["rows"][0]["death_year"] - doc["rows"][0]["birth_year"] + 1 == 15
    assert [(w["start"], w["end"]) for w in doc["rows"][0]["windows"]] == \
        [(1980, 1983), (1984, 1987), (1988, 1991), (1992, 1994)]


def _timeline(tid, years, size):
    return Timeline(tid, {y: GroupState(y, frozenset(range(tid * 100, tid * 100 + size)), tid) for y in years})


def test_map_filters_and_labels():
    a = _timeline(1, range(2000, 2014), 12)
    b = _timeline(2, range(2000, 2014), 9)
    short = _timeline(3, range(2000, 2013), 30)
    edge = TransitionEdge(1, 2, 2005, frozenset(range(9)))
    to_short = TransitionEdge(1, 3, 2005, frozenset(range(20)))
    doc = emit_map([a, b, short], [edge, to_short], {1: [("cell biology", 0.9)]}, [], {}, 14, 10)
    assert [r.timeline_id for r in doc.rows] == [1, 2]
    assert doc.transitions == [{"from": 1, "to": 2, "year": 2005, "size": 9, "label": False}]
    js = doc.to_json()
    assert {s["label"] for s in js["rows"][0]["sizes"]} == {True}
    assert {s["label"] for s in js["rows"][1]["sizes"]} == {False}
    dot = render_dot(doc)
    assert '"G1_2005" -> "G2_2006";' in dot
    assert 'label="9"' not in dot
    svg = render_svg(doc)
    assert svg.count("<line") == 1
    assert "cell biology (0.90)" in svg


def test_map_size_label_threshold_is_strict():
    doc = emit_map([_timeline(1, range(14), 10)], [], {}, [], {}, 14, 10)
    assert not any(s["label"] for s in doc.to_json()["rows"][0]["sizes"])
