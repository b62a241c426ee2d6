"""Citation records: parsing, interning and per-year views.

Input is line-delimited JSON, one publication per line::

    {"id": "P1", "year": 1990, "title": "...", "categories": ["cell biology"],
     "keywords_plus": ["DNA SEQUENCES"], "refs": ["A", "B", "A"]}

Repeated entries in ``refs`` encode reference multiplicity.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

log = logging.getLogger(__name__)


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class PaperRecord:
    id: str
    year: int | None = None
    title: str = ""
    categories: frozenset[str] = frozenset()
    keywords_plus: frozenset[str] = frozenset()
    # (cited id, multiplicity) in order of first appearance
    refs: tuple[tuple[str, int], ...] = ()
    cited_only: bool = False

    @property
    def distinct_refs(self) -> tuple[str, ...]:
        return tuple(r for r, _ in self.refs)

    def to_json(self) -> dict:
        out = {"id": self.id}
        if self.year is not None:
            out["year"] = self.year
        if self.title:
            out["title"] = self.title
        if self.categories:
            out["categories"] = sorted(self.categories)
        if self.keywords_plus:
            out["keywords_plus"] = sorted(self.keywords_plus)
        if self.refs:
            out["refs"] = [r for r, m in self.refs for _ in range(m)]
        return out


@dataclass
class ParseReport:
    lines: int = 0
    parsed: int = 0
    skipped: int = 0
    out_of_range: int = 0
    missing_year: int = 0
    errors: list[str] = field(default_factory=list)


class CorpusStore:
    """Immutable, indexed view over a set of paper records.

    Dense integer ids are assigned in lexicographic order of the opaque ids,
    so sorting by dense id and sorting by opaque id agree.
    """

    def __init__(self, records: Iterable[PaperRecord], year_range: tuple[int, int] | None = None,
                 report: ParseReport | None = None):
        recs: dict[str, PaperRecord] = {}
        for r in records:
            if r.id in recs:
                raise CorpusError(f"duplicate id {r.id!r}")
            recs[r.id] = r
        for r in list(recs.values()):
            for cited, _ in r.refs:
                if cited not in recs:
                    recs[cited] = PaperRecord(id=cited, cited_only=True)
        self.records: dict[str, PaperRecord] = recs
        self.year_range = year_range
        self.report = report or ParseReport(parsed=sum(not r.cited_only for r in recs.values()))
        self.ids: list[str] = sorted(recs)
        self.dense: dict[str, int] = {pid: i for i, pid in enumerate(self.ids)}

        per_year: dict[int, list[int]] = defaultdict(list)
        for i, pid in enumerate(self.ids):
            r = recs[pid]
            if r.cited_only or r.year is None or not self.in_range(r.year):
                continue
            per_year[r.year].append(i)
        self.per_year_index: dict[int, list[int]] = dict(sorted(per_year.items()))

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[PaperRecord]:
        return (self.records[pid] for pid in self.ids)

    def __getitem__(self, key: str | int) -> PaperRecord:
        if isinstance(key, int):
            return self.records[self.ids[key]]
        return self.records[key]

    @property
    def n_records(self) -> int:
        """Number of parsed (non cited-only) records."""
        return sum(not r.cited_only for r in self.records.values())

    def in_range(self, year: int) -> bool:
        if self.year_range is None:
            return True
        lo, hi = self.year_range
        return lo <= year <= hi

    @property
    def years(self) -> list[int]:
        if self.year_range is not None:
            return list(range(self.year_range[0], self.year_range[1] + 1))
        if not self.per_year_index:
            return []
        return list(range(min(self.per_year_index), max(self.per_year_index) + 1))

    def published(self, year: int) -> list[int]:
        return self.per_year_index.get(year, [])

    def refs_dense(self, i: int) -> list[int]:
        """Distinct references of paper ``i`` as dense ids."""
        return [self.dense[r] for r in self[i].distinct_refs]

    def year_of(self, i: int) -> int | None:
        return self[i].year

    def to_ids(self, nodes: Iterable[int]) -> list[str]:
        return sorted(self.ids[n] for n in nodes)

    def to_dense(self, ids: Iterable[str]) -> list[int]:
        try:
            return [self.dense[x] for x in ids]
        except KeyError as e:
            raise CorpusError(f"unknown paper id {e.args[0]!r}") from None

    def serialize(self) -> Iterator[str]:
        """Yield one JSON line per parsed record, sorted by id."""
        for pid in self.ids:
            r = self.records[pid]
            if not r.cited_only:
                yield json.dumps(r.to_json(), ensure_ascii=False, sort_keys=True)

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.serialize():
                fh.write(line + "\n")


def _str_list(obj: dict, key: str) -> list[str]:
    val = obj.get(key, [])
    if val is None:
        return []
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise CorpusError(f"{key!r} must be an array of strings")
    return val


def parse_record(obj: dict) -> PaperRecord:
    if not isinstance(obj, dict):
        raise CorpusError("record is not an object")
    pid = obj.get("id")
    if not isinstance(pid, str) or not pid:
        raise CorpusError("missing or empty 'id'")
    year = obj.get("year")
    if year is not None and (isinstance(year, bool) or not isinstance(year, int)):
        raise CorpusError("'year' must be an integer")
    title = obj.get("title") or ""
    if not isinstance(title, str):
        raise CorpusError("'title' must be a string")
    refs = Counter()
    for r in _str_list(obj, "refs"):
        if not r:
            raise CorpusError("empty reference id")
        refs[r] += 1
    return PaperRecord(
        id=pid,
        year=year,
        title=title,
        categories=frozenset(_str_list(obj, "categories")),
        keywords_plus=frozenset(_str_list(obj, "keywords_plus")),
        refs=tuple(refs.items()),
    )


def parse_corpus(lines: Iterable[str], year_range: tuple[int, int] | None = None,
                 strict: bool = False) -> CorpusStore:
    """Parse line-delimited records into a :class:`CorpusStore`.

    Malformed lines are skipped and reported unless ``strict``; a duplicate
    id always aborts.
    """
    report = ParseReport()
    records: list[PaperRecord] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        report.lines += 1
        try:
            rec = parse_record(json.loads(line))
        except (json.JSONDecodeError, CorpusError) as e:
            msg = f"line {lineno}: {e}"
            if strict:
                raise CorpusError(msg) from None
            report.skipped += 1
            report.errors.append(msg)
            continue
        if rec.id in seen:
            raise CorpusError(f"line {lineno}: duplicate id {rec.id!r}")
        seen.add(rec.id)
        if rec.year is None:
            report.missing_year += 1
        elif year_range is not None and not (year_range[0] <= rec.year <= year_range[1]):
            report.out_of_range += 1
        records.append(rec)
    report.parsed = len(records)
    if report.skipped:
        log.warning("skipped %d malformed line(s)", report.skipped)
    return CorpusStore(records, year_range, report)


def read_corpus(path: str | Path, year_range: tuple[int, int] | None = None,
                strict: bool = False) -> CorpusStore:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, year_range, strict)


@dataclass(frozen=True)
class YearStats:
    year: int
    published: int
    citing: int
    co_citing: int
    cited: int
    co_cited: int


def corpus_stats(store: CorpusStore) -> list[YearStats]:
    """Yearly publication and citation counts."""
    rows = []
    for year in store.years:
        citing = co_citing = 0
        cited: set[str] = set()
        co_cited: set[str] = set()
        papers = store.published(year)
        for i in papers:
            refs = store[i].distinct_refs
            if refs:
                citing += 1
                cited.update(refs)
            if len(refs) >= 2:
                co_citing += 1
                co_cited.update(refs)
        rows.append(YearStats(year, len(papers), citing, co_citing, len(cited), len(co_cited)))
    return rows


def category_usage(store: CorpusStore, min_ratio: float = 0.02) -> dict[str, dict[int, float]]:
    """Per-category, per-year share of published papers carrying the category.

    Only categories whose share exceeds ``min_ratio`` in at least one year
    are returned.
    """
    if not 0.0 <= min_ratio <= 1.0:
        raise ValueError("min_ratio must lie in [0, 1]")
    usage: dict[str, dict[int, float]] = defaultdict(dict)
    for year in store.years:
        papers = store.published(year)
        if not papers:
            continue
        counts = Counter(c for i in papers for c in store[i].categories)
        for cat, n in counts.items():
            usage[cat][year] = n / len(papers)
    return {c: dict(sorted(v.items())) for c, v in sorted(usage.items())
            if max(v.values()) > min_ratio}
