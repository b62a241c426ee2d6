"""Maximal clique enumeration and k-clique percolation communities."""

from __future__ import annotations

import heapq
import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Hashable

from .cocitation import BinaryNetwork


@dataclass
class CliqueSet:
    cliques: list[frozenset]
    approximate: bool = False
    work: int = 0


@dataclass
class CommunitySet:
    year: int
    communities: list[frozenset]
    k: int
    approximate: bool = False

    def __len__(self) -> int:
        return len(self.communities)

    def __iter__(self):
        return iter(self.communities)

    def __getitem__(self, i: int) -> frozenset:
        return self.communities[i]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.communities]


def canonical(groups) -> list[frozenset]:
    """Deduplicate and order node sets by their sorted member sequence."""
    uniq = {frozenset(g) for g in groups}
    return sorted(uniq, key=lambda g: tuple(sorted(g)))


def degeneracy_order(adj: dict[Hashable, set]) -> list:
    """Smallest-last vertex ordering (ties broken by node value)."""
    deg = {v: len(ns) for v, ns in adj.items()}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed = set()
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        for u in adj[v]:
            if u not in removed:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return order


def _greedy_clique(adj, root) -> frozenset:
    clique = {root}
    cand = set(adj[root])
    while cand:
        u = min(cand, key=lambda x: (-len(adj[x] & cand), x))
        clique.add(u)
        cand &= adj[u]
    return frozenset(clique)


def _pivot(P: set, X: set, adj):
    """Node of P | X with the most neighbours in P, ties to the smallest node.

    None when some node of X is adjacent to all of P: nothing maximal lies
    below such a branch.
    """
    for x in X:
        if P <= adj[x]:
            return None
    best, best_n = None, -1
    top = len(P) - 1  # the most any remaining candidate can reach
    for u in sorted(P | X):
        n = len(P & adj[u])
        if n > best_n:
            best, best_n = u, n
            if n >= top:
                break
    return best


def enumerate_maximal_cliques(g: BinaryNetwork, min_size: int = 1,
                              budget: int | None = None) -> CliqueSet:
    """All maximal cliques of ``g`` with at least ``min_size`` nodes.

    Bron-Kerbosch with Tomita pivoting, rooted on a degeneracy ordering.
    ``budget`` caps the number of search-tree nodes; when it runs out the
    remaining roots are covered by one greedily grown maximal clique each
    and the result is flagged approximate.
    """
    adj = g.adjacency
    order = degeneracy_order(adj)
    pos = {v: i for i, v in enumerate(order)}
    found: list[frozenset] = []
    work = 0
    exhausted_at = None

    for ri, v in enumerate(order):
        later = {u for u in adj[v] if pos[u] > ri}
        earlier = {u for u in adj[v] if pos[u] < ri}
        # frames: (R, P, X, remaining branch candidates or None before expansion)
        stack = [([v], later, earlier, None)]
        while stack:
            R, P, X, todo = stack.pop()
            if todo is None:
                work += 1
                if budget is not None and work > budget:
                    exhausted_at = ri
                    break
                if not P and not X:
                    if len(R) >= min_size:
                        found.append(frozenset(R))
                    continue
                if len(R) + len(P) < min_size:
                    continue
                pivot = _pivot(P, X, adj)
                if pivot is None:
                    continue
                todo = sorted(P - adj[pivot])
            if not todo:
                continue
            w = todo[0]
            rest = todo[1:]
            nP = P & adj[w]
            nX = X & adj[w]
            P = P - {w}
            X = X | {w}
            stack.append((R, P, X, rest))
            stack.append((R + [w], nP, nX, None))
        if exhausted_at is not None:
            break

    approximate = exhausted_at is not None
    if approximate:
        seen = set(found)
        for v in order[exhausted_at:]:
            c = _greedy_clique(adj, v)
            if len(c) >= min_size and c not in seen:
                seen.add(c)
                found.append(c)
    return CliqueSet(canonical(found), approximate, work)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> dict[int, list[int]]:
        out = defaultdict(list)
        for i in range(len(self.parent)):
            out[self.find(i)].append(i)
        return out


def percolate(cliques: list[frozenset], k: int) -> list[frozenset]:
    """Union cliques that share at least ``k - 1`` nodes; return the unions."""
    uf = _UnionFind(len(cliques))
    members = defaultdict(list)
    for i, c in enumerate(cliques):
        for n in c:
            members[n].append(i)
    for i, c in enumerate(cliques):
        shared = Counter(j for n in c for j in members[n] if j > i)
        for j, s in shared.items():
            if s >= k - 1:
                uf.union(i, j)
    return canonical(frozenset().union(*(cliques[i] for i in idx))
                     for idx in uf.groups().values())


def k_clique_communities(g: BinaryNetwork, k: int = 4, budget: int | None = None) -> CommunitySet:
    """Overlapping k-clique percolation communities of ``g``.

    Built from maximal cliques of size >= k: two of them are adjacent when
    they share at least k - 1 nodes, and each connected component of that
    relation yields one community (the union of its cliques).
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    cs = enumerate_maximal_cliques(g, min_size=k, budget=budget)
    return CommunitySet(g.year, percolate(cs.cliques, k), k, cs.approximate)


def communities_brute_force(g: BinaryNetwork, k: int) -> CommunitySet:
    """Reference CPM: enumerate every k-clique and percolate over shared (k-1)-faces."""
    if len(g.nodes) > 20:
        raise ValueError("brute force is limited to graphs with at most 20 nodes")
    adj = g.adjacency
    nodes = sorted(g.nodes)
    kcliques = [c for c in itertools.combinations(nodes, k)
                if all(b in adj[a] for a, b in itertools.combinations(c, 2))]
    uf = _UnionFind(len(kcliques))
    by_face: dict[tuple, int] = {}
    for i, c in enumerate(kcliques):
        for face in itertools.combinations(c, k - 1):
            if face in by_face:
                uf.union(i, by_face[face])
            else:
                by_face[face] = i
    comms = [frozenset().union(*(frozenset(kcliques[i]) for i in idx))
             for idx in uf.groups().values()]
    return CommunitySet(g.year, canonical(comms), k)


def percolation_path(g: BinaryNetwork, k: int, a, b, within=None) -> list[frozenset] | None:
    """A chain of k-cliques, consecutive ones sharing k - 1 nodes, from a clique
    containing ``a`` to one containing ``b``; None if no chain exists.

    ``within`` restricts the chain to cliques inside that node set.
    Brute force, for certificate checks on small graphs.
    """
    adj = g.adjacency
    nodes = sorted(g.nodes if within is None else g.nodes & frozenset(within))
    kcliques = [frozenset(c) for c in itertools.combinations(nodes, k)
                if all(y in adj[x] for x, y in itertools.combinations(c, 2))]
    start = [c for c in kcliques if a in c]
    prev = {c: None for c in start}
    frontier = list(start)
    while frontier:
        nxt = []
        for c in frontier:
            if b in c:
                path = [c]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            for d in kcliques:
                if d not in prev and len(c & d) == k - 1:
                    prev[d] = c
                    nxt.append(d)
        frontier = nxt
    return None
