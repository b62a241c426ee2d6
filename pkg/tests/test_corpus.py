import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cocitemap.corpus import (CorpusError, category_usage, corpus_stats, parse_corpus, parse_record,
                              read_corpus)


def lines(*records):
    return [json.dumps(r) for r in records]


def test_three_valid_lines():
    store = parse_corpus(lines({"id": "a", "year": 2000}, {"id": "b", "year": 2001},
                               {"id": "c", "year": 2001, "refs": ["a", "b"]}))
    assert store.n_records == 3
    assert store.report.skipped == 0
    assert len(store) == 3


def test_duplicate_id_aborts_in_both_modes():
    for strict in (True, False):
        with pytest.raises(CorpusError, match="duplicate id"):
            parse_corpus(lines({"id": "a"}, {"id": "a"}), strict=strict)


def test_cited_only_node_is_created():
    store = parse_corpus(lines({"id": "p1", "year": 2000, "refs": ["x"]}, {"id": "p2", "year": 2000}))
    assert len(store) == store.n_records + 1 == 3
    assert store["x"].cited_only
    assert store.published(2000) == store.to_dense(["p1", "p2"])


def test_malformed_lines_skipped_or_fatal():
    raw = lines({"id": "a", "year": 2000}) + ["{not json", json.dumps({"year": 1999}),
                                              json.dumps({"id": "b", "year": "1999"})]
    store = parse_corpus(raw)
    assert store.n_records == 1
    assert store.report.skipped == 3
    assert len(store.report.errors) == 3
    with pytest.raises(CorpusError, match="line 2"):
        parse_corpus(raw, strict=True)


def test_reference_multiplicity_kept():
    rec = parse_record({"id": "p", "refs": ["a", "b", "a"]})
    assert dict(rec.refs) == {"a": 2, "b": 1}
    assert rec.distinct_refs == ("a", "b")


def test_year_range_limits_the_published_index():
    store = parse_corpus(lines({"id": "a", "year": 1990}, {"id": "b", "year": 2000},
                               {"id": "c"}), year_range=(1995, 2005))
    assert store.years == list(range(1995, 2006))
    assert store.published(2000) == store.to_dense(["b"])
    assert store.published(1990) == []
    assert store.report.out_of_range == 1
    assert store.report.missing_year == 1


def test_dense_ids_follow_opaque_order():
    store = parse_corpus(lines({"id": "z"}, {"id": "m"}, {"id": "a", "refs": ["q"]}))
    assert store.ids == ["a", "m", "q", "z"]
    assert store.to_ids([3, 0]) == ["a", "z"]
    with pytest.raises(CorpusError):
        store.to_dense(["nope"])


@pytest.mark.parametrize("refs, expect", [
    (["A", "B"], (1, 1, 1, 2, 2)),
    (["A"], (1, 1, 0, 1, 0)),
    (["A", "A"], (1, 1, 0, 1, 0)),
])
def test_yearly_stats(refs, expect):
    store = parse_corpus(lines({"id": "P", "year": 2000, "refs": refs}))
    s = [x for x in corpus_stats(store) if x.year == 2000][0]
    assert (s.published, s.citing, s.co_citing, s.cited, s.co_cited) == expect


def test_category_usage():
    recs = [{"id": f"p{i}", "year": 2000, "categories": ["c"] if i < 3 else ["d"]} for i in range(10)]
    recs.append({"id": "q", "year": 2001, "categories": ["c", "d"]})
    usage = category_usage(parse_corpus(lines(*recs)))
    assert usage["c"] == {2000: 0.3, 2001: 1.0}
    assert usage["d"] == {2000: 0.7, 2001: 1.0}


def test_rare_category_filtered():
    recs = [{"id": f"p{y}-{i}", "year": y, "categories": ["rare"] if i == 0 else ["common"]}
            for y in (2000, 2001) for i in range(100)]
    usage = category_usage(parse_corpus(lines(*recs)), min_ratio=0.02)
    assert "rare" not in usage
    assert "common" in usage


ids = st.text(alphabet="abcdefgh0123", min_size=1, max_size=4)
record = st.fixed_dictionaries(
    {"id": ids},
    optional={"year": st.integers(1950, 2010),
              "title": st.text(max_size=20),
              "categories": st.lists(st.sampled_from(["x", "y", "multidisciplinary sciences"]), max_size=2),
              "keywords_plus": st.lists(st.sampled_from(["DNA", "KINASES", "p53"]), max_size=2),
              "refs": st.lists(ids, max_size=6)})
corpora = st.lists(record, max_size=15, unique_by=lambda r: r["id"])


@given(corpora)
def test_round_trip(recs):
    store = parse_corpus(lines(*recs))
    again = parse_corpus(list(store.serialize()))
    assert again.ids == store.ids
    assert again.records == store.records
    assert list(again.serialize()) == list(store.serialize())


@given(corpora)
def test_stats_are_ordered(recs):
    store = parse_corpus(lines(*recs))
    for s in corpus_stats(store):
        assert s.co_citing <= s.citing <= s.published
        assert s.co_cited <= s.cited


def test_write_and_read(tmp_path):
    store = parse_corpus(lines({"id": "a", "year": 2000, "refs": ["b", "b"]}))
    store.write(tmp_path / "r.jsonl")
    again = read_corpus(tmp_path / "r.jsonl")
    assert again.records == store.records
