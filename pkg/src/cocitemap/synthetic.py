"""Synthetic corpora with planted group structure.

All generators are deterministic for a given seed and return lists of
JSON-ready record dicts (see :mod:`cocitemap.corpus` for the format).
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .cocitation import CoCitationNetwork
from .metrics import MULTIDISCIPLINARY


def records_from_states(states: Mapping[int, Sequence[Iterable[str]]], citers: int = 3,
                        base_year: int | None = None, prefix: str = "C",
                        meta: Mapping[str, dict] | None = None) -> list[dict]:
    """A corpus whose yearly co-citation groups are exactly ``states``.

    For every year and planted group, ``citers`` papers of that year cite all
    of the group's members, so the group becomes a clique of weight
    ``citers``. Cited papers get a record dated ``base_year`` (default: the
    year before the first planted year) unless ``meta`` supplies one.
    """
    meta = dict(meta or {})
    first = min(states)
    base_year = first - 1 if base_year is None else base_year
    out = []
    cited = set()
    for year in sorted(states):
        for gi, group in enumerate(states[year]):
            members = sorted(group)
            cited.update(members)
            for c in range(citers):
                out.append({"id": f"{prefix}{year}-{gi:03d}-{c}", "year": year, "refs": members})
    for pid in sorted(cited):
        rec = {"id": pid, "year": base_year}
        rec.update(meta.get(pid, {}))
        out.append(rec)
    return sorted(out, key=lambda r: r["id"])


def _ids(prefix: str, n: int, start: int = 0) -> list[str]:
    return [f"{prefix}{i:04d}" for i in range(start, start + n)]


def planted_dynamics(first_year: int = 2000) -> tuple[list[dict], dict]:
    """Six years holding one stable group, one split, one merge, one birth and one death.

    Returns the records and the planted truth: lifespans and first-state
    members keyed by group name, and the expected numbers of split and
    merge events.
    """
    y = [first_year + i for i in range(6)]
    S = _ids("S", 12)
    P = _ids("P", 18)
    M1 = _ids("M", 14)
    M2 = _ids("M", 8, start=14)
    B = _ids("B", 10)
    D = _ids("D", 9)
    states: dict[int, list[list[str]]] = defaultdict(list)
    for yr in y:
        states[yr].append(S)
    for yr in y[:3]:
        states[yr].append(P)
    for yr in y[3:]:
        states[yr].append(P[:11])   # continuation
        states[yr].append(P[11:] + _ids("Q", 3))  # split-off part
    for yr in y[:4]:
        states[yr].append(M1)
        states[yr].append(M2)
    for yr in y[4:]:
        states[yr].append(M1 + M2)
    for yr in y[2:]:
        states[yr].append(B)
    for yr in y[:3]:
        states[yr].append(D)
    truth = {
        "lifespans": {"S": 6, "P": 6, "P_split": 3, "M1": 6, "M2": 4, "B": 4, "D": 3},
        "splits": 1,
        "merges": 1,
        "first_state": {"S": S, "P": P, "P_split": P[11:] + _ids("Q", 3), "M1": M1, "M2": M2,
                        "B": B, "D": D},
    }
    return records_from_states(states), truth


def transition_corpus(n_moved: int = 107, core: int = 300, first_year: int = 1993) -> list[dict]:
    """Two timelines over two years; ``n_moved`` papers leave the first for the second."""
    X = _ids("X", core)
    Y = _ids("Y", n_moved)
    W = _ids("W", core)
    states = {
        first_year: [X + Y, W],
        first_year + 1: [X, W + Y],
    }
    return records_from_states(states, citers=2)


def long_timeline_corpus(first_year: int = 1980, long_years: int = 15, short_years: int = 13) -> list[dict]:
    """One group living ``long_years`` and another living ``short_years``."""
    L = _ids("L", 14)
    T = _ids("T", 11)
    states: dict[int, list] = defaultdict(list)
    for i in range(long_years):
        states[first_year + i].append(L)
    for i in range(short_years):
        states[first_year + i].append(T)
    return records_from_states(states)


def two_scale_network(module_sizes: Sequence[int], intra: int, inter: int,
                      seed: int = 0, year: int = 0) -> CoCitationNetwork:
    """Weighted network of dense modules, joined by weaker links.

    Module-internal links weigh between ``inter + 1`` and ``intra``.
    Consecutive modules are fully linked at weight ``inter``, the remaining
    module pairs sparsely at weights 1..inter. At thresholds up to ``inter``
    everything percolates into one community; just above, the modules
    separate.
    """
    if not intra > inter >= 1:
        raise ValueError("need intra > inter >= 1")
    rng = random.Random(seed)
    modules = []
    nxt = 0
    for s in module_sizes:
        modules.append(list(range(nxt, nxt + s)))
        nxt += s
    edges = {}
    for m in modules:
        for i, u in enumerate(m):
            for v in m[i + 1:]:
                edges[(u, v)] = rng.randint(inter + 1, intra)
    for a in range(len(modules)):
        for b in range(a + 1, len(modules)):
            for u in modules[a]:
                for v in modules[b]:
                    if b == a + 1:
                        edges[(u, v)] = inter
                    elif rng.random() < 0.2:
                        edges[(u, v)] = rng.randint(1, inter)
    return CoCitationNetwork.from_edges(year, edges)


def multidisciplinary_corpus(seed: int = 0, year: int = 2000, overall: float = 0.05,
                             core_share: float = 0.40, periphery_share: float = 0.10,
                             n_groups: int = 4, group_size: int = 10, n_periphery: int = 40,
                             n_total: int = 400) -> tuple[list[dict], dict]:
    """A corpus with planted multidisciplinary label rates.

    Group members (4-clique percolation communities) carry the label at
    ``core_share``, co-cited non-group nodes at ``periphery_share``, and
    the whole categorised corpus at ``overall``. Returns records and the
    planted ratios per selector.
    """
    rng = random.Random(seed)
    core = _ids("G", n_groups * group_size)
    periphery = _ids("R", n_periphery)
    n_core_multi = round(core_share * len(core))
    n_peri_multi = round(periphery_share * len(periphery))
    n_multi = round(overall * n_total)
    if n_core_multi + n_peri_multi > n_multi:
        raise ValueError("overall share too small for the planted core")
    multi = set(rng.sample(core, n_core_multi)) | set(rng.sample(periphery, n_peri_multi))

    records = []
    cited_year = year - 1
    for gi in range(n_groups):
        members = core[gi * group_size:(gi + 1) * group_size]
        for c in range(3):
            records.append({"id": f"CG{gi}-{c}", "year": year, "refs": members})
    # periphery: co-cited pairs, no 4-cliques
    for pi in range(0, n_periphery, 2):
        pair = periphery[pi:pi + 2]
        for c in range(3):
            records.append({"id": f"CR{pi:03d}-{c}", "year": year, "refs": pair})
    for pid in core + periphery:
        cats = ["cell biology"]
        if pid in multi:
            cats.append(MULTIDISCIPLINARY)
        records.append({"id": pid, "year": cited_year, "categories": cats})
    for r in records:
        r.setdefault("categories", ["biochemistry"])
    n_fill = n_total - len(records)
    extra_multi = n_multi - len(multi)
    fill_ids = _ids("F", n_fill)
    fill_multi = set(rng.sample(fill_ids, extra_multi))
    for pid in fill_ids:
        cats = ["medicine"] + ([MULTIDISCIPLINARY] if pid in fill_multi else [])
        records.append({"id": pid, "year": rng.choice([year - 2, year - 1, year]), "categories": cats,
                        "refs": [rng.choice(core + periphery)]})
    truth = {
        "all_published_up_to_t": n_multi / n_total,
        "cocited_at_w*": (n_core_multi + n_peri_multi) / (len(core) + len(periphery)),
        "group_members": n_core_multi / len(core),
    }
    return sorted(records, key=lambda r: r["id"]), truth


# -- bundled corpus -----------------------------------------------------------

TOPICS = {
    "apoptosis": (["cell biology", "oncology"],
                  ["apoptosis", "cell death", "p53", "tumor suppressor", "bcl-2", "caspase activation"]),
    "sequencing": (["biochemistry and molecular biology", "genetics and heredity"],
                   ["dna sequences", "gene expression", "sequence alignment", "genome", "rna polymerase"]),
    "receptors": (["neurosciences", "pharmacology and pharmacy"],
                  ["nmda receptor", "glutamate receptor", "neurons", "ion channel", "excitatory amino acids"]),
    "kinases": (["biochemistry and molecular biology", "cell biology"],
                ["protein kinases", "signal transduction", "phosphorylation", "tyrosine kinase", "cell cycle"]),
    "immunity": (["immunology", "medicine, general and internal"],
                 ["t cells", "antigen presentation", "cytokines", "interleukin-2", "immune response"]),
    "phylogeny": (["evolutionary biology", "genetics and heredity"],
                  ["phylogenetic trees", "molecular evolution", "maximum likelihood", "sequence alignment",
                   "mitochondrial dna"]),
    "vascular": (["cardiac and cardiovascular systems", "physiology"],
                 ["endothelin", "endothelial cells", "nitric oxide", "blood pressure", "vascular smooth muscle"]),
}
FILLER = ["novel", "analysis of", "role of", "studies on", "evidence for", "regulation of", "in vivo",
          "mechanisms of", "a model for", "characterization of"]
GENERIC_KWP = ["expression", "identification", "mice", "rat", "humans", "protein", "cells"]


def _title(rng: random.Random, phrases: Sequence[str]) -> str:
    words = [rng.choice(FILLER)]
    words += rng.sample(list(phrases), k=min(len(phrases), rng.randint(1, 3)))
    rng.shuffle(words)
    return " ".join(words).capitalize()


def bundled_corpus(seed: int = 7, first_year: int = 2000, n_years: int = 10) -> list[dict]:
    """About a thousand papers over ten citing years with planted group dynamics.

    Groups: a long stable group with churn, a group that splits, two groups
    that merge, a group born mid-range that takes members from the stable
    one, a group that dies early, and a short-lived transient group.
    """
    rng = random.Random(seed)
    years = list(range(first_year, first_year + n_years))
    pool: dict[str, dict] = {}
    counter = [0]

    def new_paper(topic: str, year: int) -> str:
        counter[0] += 1
        pid = f"W{counter[0]:05d}"
        cats, phrases = TOPICS[topic]
        rec = {"id": pid, "year": year, "title": _title(rng, phrases), "categories": list(cats)}
        if rng.random() < 0.25:
            rec["categories"].append(MULTIDISCIPLINARY)
        if rng.random() < 0.5:
            rec["keywords_plus"] = [p.upper() for p in rng.sample(phrases, 2)] + [rng.choice(GENERIC_KWP)]
        pool[pid] = rec
        return pid

    def seed_group(topic, n, year):
        return [new_paper(topic, rng.randint(year - 12, year - 1)) for _ in range(n)]

    def churn(group, topic, year, drop=1, add=1):
        g = list(group)
        for _ in range(min(drop, max(len(g) - 6, 0))):
            g.remove(rng.choice(g))
        g += [new_paper(topic, rng.randint(year - 3, year - 1)) for _ in range(add)]
        return g

    y0 = first_year
    plan: dict[int, list[tuple[str, list[str]]]] = defaultdict(list)
    stable = seed_group("apoptosis", 12, y0)
    split = seed_group("sequencing", 16, y0)
    merge_a = seed_group("receptors", 10, y0)
    merge_b = seed_group("receptors", 7, y0)
    dying = seed_group("immunity", 9, y0)
    born = None
    split_b = None
    merged = None
    transient = None
    for year in years:
        i = year - y0
        stable = churn(stable, "apoptosis", year, drop=1, add=2 if i < 6 else 1)
        plan[year].append(("apoptosis", stable))
        if i < 5:
            split = churn(split, "sequencing", year)
            plan[year].append(("sequencing", split))
        else:
            if split_b is None:
                split_b = split[10:] + seed_group("phylogeny", 3, year)
                split = split[:10]
            split = churn(split, "sequencing", year)
            split_b = churn(split_b, "phylogeny", year)
            plan[year].append(("sequencing", split))
            plan[year].append(("phylogeny", split_b))
        if i < 4:
            merge_a = churn(merge_a, "receptors", year)
            merge_b = churn(merge_b, "receptors", year, drop=0)
            plan[year].append(("receptors", merge_a))
            plan[year].append(("receptors", merge_b))
        else:
            merged = churn(merged or merge_a + merge_b, "receptors", year)
            plan[year].append(("receptors", merged))
        if i == 3:
            # the new kinase group recruits part of the stable group
            born = stable[:4] + seed_group("kinases", 8, year)
        if born is not None and i >= 3:
            born = churn(born, "kinases", year)
            plan[year].append(("kinases", born))
        if i < 3:
            dying = churn(dying, "immunity", year)
            plan[year].append(("immunity", dying))
        if i in (6, 7):
            transient = transient or seed_group("vascular", 6, year)
            plan[year].append(("vascular", transient))

    # widely cited background papers outside every group
    classics = [new_paper(rng.choice(sorted(TOPICS)), rng.randint(y0 - 20, y0 - 5)) for _ in range(60)]
    records = list(pool.values())
    all_cited = sorted(pool)
    for year in years:
        for gi, (topic, group) in enumerate(plan[year]):
            for c in range(rng.randint(6, 9)):
                refs = [p for p in group if rng.random() < 0.8]
                refs += rng.sample(classics, rng.randint(0, 2))
                pid = f"Y{year}-{gi:02d}-{c:02d}"
                cats, phrases = TOPICS[topic]
                rec = {"id": pid, "year": year, "title": _title(rng, phrases),
                       "categories": [rng.choice(cats)], "refs": refs}
                if rng.random() < 0.05:
                    rec["categories"].append(MULTIDISCIPLINARY)
                records.append(rec)
        # background publications with sparse references
        for c in range(48):
            topic = rng.choice(sorted(TOPICS))
            cats, phrases = TOPICS[topic]
            rec = {"id": f"Z{year}-{c:03d}", "year": year, "title": _title(rng, phrases),
                   "categories": [rng.choice(cats)],
                   "refs": rng.sample(all_cited, rng.randint(0, 2))}
            if rng.random() < 0.03:
                rec["categories"].append(MULTIDISCIPLINARY)
            records.append(rec)
    # older group members cite each other now and then (cohesion)
    for plan_groups in plan.values():
        for _, group in plan_groups:
            for p in group:
                rec = pool[p]
                older = [q for q in group if pool[q]["year"] < rec["year"]]
                if older and rng.random() < 0.3:
                    rec.setdefault("refs", [])
                    q = rng.choice(older)
                    if q not in rec["refs"]:
                        rec["refs"].append(q)
    for r in records:
        if "refs" in r and not r["refs"]:
            del r["refs"]
        if "refs" in r:
            r["refs"] = sorted(r["refs"])
    return sorted(records, key=lambda r: r["id"])


def write_records(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


def to_lines(records: Iterable[dict]) -> list[str]:
    return [json.dumps(r, sort_keys=True) for r in records]
