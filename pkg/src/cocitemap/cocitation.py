"""Yearly weighted co-citation networks and their thresholded binary forms."""

from __future__ import annotations

import heapq
import itertools
import tempfile
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Iterator

import numpy as np

from .corpus import CorpusStore

Edge = tuple[int, int]


@dataclass
class CoCitationNetwork:
    year: int
    nodes: frozenset[int]
    # (u, v) with u < v -> number of co-citing papers
    edges: dict[Edge, int]

    @classmethod
    def from_edges(cls, year: int, edges: dict[Edge, int]) -> "CoCitationNetwork":
        nodes = frozenset(itertools.chain.from_iterable(edges))
        return cls(year, nodes, dict(sorted(edges.items())))

    @property
    def max_weight(self) -> int:
        return max(self.edges.values(), default=0)

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass
class BinaryNetwork:
    year: int
    nodes: frozenset
    edges: frozenset[tuple]
    _adj: dict | None = field(default=None, repr=False, compare=False)

    @classmethod
    def from_edges(cls, year: int, edges: Iterable[tuple[Hashable, Hashable]],
                   nodes: Iterable[Hashable] = ()) -> "BinaryNetwork":
        es = set()
        for u, v in edges:
            if u == v:
                continue
            es.add((u, v) if u < v else (v, u))
        ns = set(nodes)
        for e in es:
            ns.update(e)
        return cls(year, frozenset(ns), frozenset(es))

    @property
    def adjacency(self) -> dict[Hashable, set]:
        if self._adj is None:
            adj: dict = {n: set() for n in self.nodes}
            for u, v in self.edges:
                adj[u].add(v)
                adj[v].add(u)
            self._adj = adj
        return self._adj

    def __len__(self) -> int:
        return len(self.nodes)


def _paper_pairs(store: CorpusStore, year: int) -> Iterator[Edge]:
    for i in store.published(year):
        refs = sorted(set(store.refs_dense(i)))
        yield from itertools.combinations(refs, 2)


def build_yearly_network(store: CorpusStore, year: int, streaming: bool = False,
                         chunk_pairs: int = 1_000_000) -> CoCitationNetwork:
    """Co-citation network of the papers cited by publications of ``year``.

    Each citing paper adds 1 to every unordered pair of distinct papers in
    its reference list, whatever their multiplicity. A paper citing itself
    can be co-cited with its other references but never with itself.

    With ``streaming`` the pairs are spilled to disk in sorted chunks and
    counted by a k-way merge, which bounds memory by ``chunk_pairs``
    instead of by the number of distinct pairs.
    """
    if streaming:
        return _build_streaming(store, year, chunk_pairs)
    counts: Counter[Edge] = Counter(_paper_pairs(store, year))
    return CoCitationNetwork.from_edges(year, dict(counts))


def _build_streaming(store: CorpusStore, year: int, chunk_pairs: int) -> CoCitationNetwork:
    n = max(len(store), 1)
    with tempfile.TemporaryDirectory(prefix="cocite_") as tmp:
        paths: list[Path] = []
        buf: list[int] = []

        def spill():
            keys, cnt = np.unique(np.asarray(buf, dtype=np.int64), return_counts=True)
            p = Path(tmp) / f"chunk{len(paths)}.npy"
            np.save(p, np.stack([keys, cnt]))
            paths.append(p)
            buf.clear()

        for u, v in _paper_pairs(store, year):
            buf.append(u * n + v)
            if len(buf) >= chunk_pairs:
                spill()
        if buf:
            spill()

        def chunk_iter(p: Path):
            arr = np.load(p, mmap_mode="r")
            for k, c in zip(arr[0], arr[1]):
                yield int(k), int(c)

        edges: dict[Edge, int] = {}
        merged = heapq.merge(*(chunk_iter(p) for p in paths))
        for key, grp in itertools.groupby(merged, key=lambda kc: kc[0]):
            edges[divmod(key, n)] = sum(c for _, c in grp)
    return CoCitationNetwork.from_edges(year, edges)


def threshold(net: CoCitationNetwork, w: int) -> BinaryNetwork:
    """Keep links of weight >= ``w`` as unweighted edges; drop isolated nodes."""
    if w < 1:
        raise ValueError("threshold must be >= 1")
    return BinaryNetwork.from_edges(net.year, (e for e, wt in net.edges.items() if wt >= w))


def node_max_weight(net: CoCitationNetwork) -> dict[int, int]:
    best: dict[int, int] = defaultdict(int)
    for (u, v), wt in net.edges.items():
        if wt > best[u]:
            best[u] = wt
        if wt > best[v]:
            best[v] = wt
    return best


def size_vs_threshold(net: CoCitationNetwork) -> list[tuple[int, int]]:
    """Number of nodes with at least one link of weight >= w, for w = 1..max+1."""
    if not net.edges:
        return []
    hist = Counter(node_max_weight(net).values())
    curve = []
    remaining = len(net.nodes)
    for w in range(1, net.max_weight + 2):
        curve.append((w, remaining))
        remaining -= hist.get(w, 0)
    return curve


def write_edge_list(net: CoCitationNetwork, store: CorpusStore, path: str | Path) -> None:
    """``idA<TAB>idB<TAB>weight`` lines, idA < idB, sorted."""
    rows = []
    for (u, v), wt in net.edges.items():
        a, b = sorted((store.ids[u], store.ids[v]))
        rows.append((a, b, wt))
    rows.sort()
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, wt in rows:
            fh.write(f"{a}\t{b}\t{wt}\n")


def read_edge_list(path: str | Path, store: CorpusStore, year: int) -> CoCitationNetwork:
    edges: dict[Edge, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            a, b, wt = line.rstrip("\n").split("\t")
            u, v = store.to_dense((a, b))
            edges[(u, v) if u < v else (v, u)] = int(wt)
    return CoCitationNetwork.from_edges(year, edges)
