"""Plain sorted text tables for stage outputs. All ids written are opaque ids."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import CorpusStore
from .cpm import CommunitySet
from .timeline import GroupState, Timeline, TransitionEdge


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return format(x, ".10g")
    if x is None:
        return "-"
    return str(x)


def write_table(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(fmt(v) for v in row) + "\n")


def read_table(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        rows = [line.rstrip("\n").split("\t") for line in fh if line.strip()]
    return header, rows


def _members(store: CorpusStore, nodes) -> str:
    return ",".join(store.to_ids(nodes))


def _parse_members(store: CorpusStore, text: str) -> frozenset:
    return frozenset(store.to_dense(text.split(","))) if text else frozenset()


def write_communities(path, comms: dict[int, CommunitySet], store: CorpusStore) -> None:
    """``year<TAB>community_index<TAB>sorted member ids`` (comma-separated)."""
    with open(path, "w", encoding="utf-8") as fh:
        for year in sorted(comms):
            for i, c in enumerate(comms[year].communities):
                fh.write(f"{year}\t{i}\t{_members(store, c)}\n")


def read_communities(path, store: CorpusStore, k: int) -> dict[int, CommunitySet]:
    out: dict[int, list] = defaultdict(list)
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            year, idx, members = line.rstrip("\n").split("\t")
            out[int(year)].append((int(idx), _parse_members(store, members)))
    return {y: CommunitySet(y, [m for _, m in sorted(v)], k) for y, v in sorted(out.items())}


def write_timelines(path, timelines: Sequence[Timeline], store: CorpusStore) -> None:
    """``timeline_id<TAB>year<TAB>sorted member ids``."""
    with open(path, "w", encoding="utf-8") as fh:
        for tl in sorted(timelines, key=lambda t: t.id):
            for y in tl.years:
                fh.write(f"{tl.id}\t{y}\t{_members(store, tl.states[y].members)}\n")


def read_timelines(path, store: CorpusStore) -> list[Timeline]:
    tls: dict[int, Timeline] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            tid, year, members = line.rstrip("\n").split("\t")
            tid, year = int(tid), int(year)
            tl = tls.setdefault(tid, Timeline(tid))
            tl.states[year] = GroupState(year, _parse_members(store, members), tid)
    return [tls[t] for t in sorted(tls)]


def write_transitions(path, edges: Sequence[TransitionEdge], store: CorpusStore) -> None:
    """``from_id<TAB>to_id<TAB>year<TAB>size<TAB>members``."""
    with open(path, "w", encoding="utf-8") as fh:
        for e in edges:
            fh.write(f"{e.from_timeline}\t{e.to_timeline}\t{e.year}\t{e.size}\t{_members(store, e.moved)}\n")


def read_transitions(path, store: CorpusStore) -> list[TransitionEdge]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            a, b, year, _size, members = line.rstrip("\n").split("\t")
            out.append(TransitionEdge(int(a), int(b), int(year), _parse_members(store, members)))
    return out
