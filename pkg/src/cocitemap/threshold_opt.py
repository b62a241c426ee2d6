"""Per-year choice of the co-citation weight threshold.

The selected threshold is the one at which clique percolation gives the
broadest spread of community sizes: low enough that nodes are not mostly
isolated, high enough that they do not all collapse into one giant cluster.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .cocitation import CoCitationNetwork, threshold
from .cpm import CommunitySet, k_clique_communities


class NoCommunitiesError(ValueError):
    pass


@dataclass
class ScanEntry:
    w: int
    n_communities: int
    size_list: list[int]
    largest: int
    second_largest: int
    clustered_nodes: int
    approximate: bool = False

    @classmethod
    def from_communities(cls, w: int, comms: CommunitySet) -> "ScanEntry":
        sizes = sorted(comms.sizes, reverse=True)
        clustered = len(frozenset().union(*comms.communities)) if sizes else 0
        return cls(w, len(sizes), sizes,
                   sizes[0] if sizes else 0,
                   sizes[1] if len(sizes) > 1 else 0,
                   clustered, comms.approximate)

    @property
    def entropy(self) -> float:
        """Shannon entropy (nats) of the histogram of community sizes."""
        n = len(self.size_list)
        if n == 0:
            return 0.0
        return sum(-c / n * math.log(c / n) for c in Counter(self.size_list).values())


@dataclass
class ThresholdScan:
    year: int
    k: int
    entries: list[ScanEntry] = field(default_factory=list)

    def entry(self, w: int) -> ScanEntry:
        for e in self.entries:
            if e.w == w:
                return e
        raise KeyError(w)


def scan_thresholds(net: CoCitationNetwork, k: int = 4, w_range=None,
                    budget: int | None = None,
                    keep: dict[int, CommunitySet] | None = None) -> ThresholdScan:
    """Run CPM on the thresholded network for every ``w`` in ``w_range``.

    The default range is 1..max weight, stopping early once the thresholded
    network has no edges. Community sets are stored in ``keep`` if given.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    default = w_range is None
    ws = sorted(set(range(1, net.max_weight + 1) if default else w_range))
    if not ws and not default:
        raise ValueError("empty threshold range")
    scan = ThresholdScan(net.year, k)
    for w in ws:
        g = threshold(net, w)
        if default and not g.edges:
            break
        comms = k_clique_communities(g, k, budget)
        if keep is not None:
            keep[w] = comms
        scan.entries.append(ScanEntry.from_communities(w, comms))
    return scan


def select_threshold(scan: ThresholdScan, criterion: str = "ratio2") -> int:
    """Pick the threshold from a scan.

    ``ratio2``: the smallest w whose largest community is at most twice the
    second largest; if none qualifies, fall back to ``entropy``.
    ``entropy``: the w maximising the entropy of the community-size
    histogram, ties toward smaller w.
    """
    if criterion not in ("ratio2", "entropy"):
        raise ValueError(f"unknown criterion {criterion!r}")
    if not scan.entries:
        raise ValueError("empty scan")
    entries = sorted(scan.entries, key=lambda e: e.w)
    if criterion == "ratio2":
        for e in entries:
            if e.second_largest > 0 and e.largest <= 2 * e.second_largest:
                return e.w
    nonempty = [e for e in entries if e.n_communities > 0]
    if not nonempty:
        raise NoCommunitiesError("no communities at any threshold")
    best = max(e.entropy for e in nonempty)
    return next(e.w for e in nonempty if e.entropy == best)


def write_scan(scan: ThresholdScan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("w\tn_communities\tlargest\tsecond_largest\tclustered_nodes\tapproximate\tsizes\n")
        for e in scan.entries:
            fh.write(f"{e.w}\t{e.n_communities}\t{e.largest}\t{e.second_largest}\t"
                     f"{e.clustered_nodes}\t{int(e.approximate)}\t{','.join(map(str, e.size_list))}\n")


def read_scan(path, year: int, k: int) -> ThresholdScan:
    scan = ThresholdScan(year, k)
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            w, n, big, second, clustered, approx, sizes = line.rstrip("\n").split("\t")
            scan.entries.append(ScanEntry(int(w), int(n), [int(s) for s in sizes.split(",") if s],
                                          int(big), int(second), int(clustered), approx == "1"))
    return scan
