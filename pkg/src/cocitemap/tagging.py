"""Topic tags for group states.

Keyword Plus terms of the whole corpus are the candidates; a candidate is
found in a paper when its stemmed words occur contiguously in the stemmed
title. Candidates are scored with Tf-Idf against the other groups of the
year, filtered, and the three most representative ones are picked by row
leverage scores (rCUR).
"""

from __future__ import annotations

import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np
from nltk.stem import PorterStemmer

from .corpus import CorpusStore

_stemmer = PorterStemmer()
_EDGE_PUNCT = re.compile(r"^[^\w]+|[^\w]+$")

RCUR = "rcur"
ALL_CANDIDATES = "all_candidates"
TFIDF_FALLBACK = "tfidf_fallback"


@dataclass(frozen=True)
class StemmedTerm:
    original: str
    stemmed: str

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.stemmed.split())


@lru_cache(maxsize=200_000)
def stem_word(word: str) -> str:
    return _stemmer.stem(word)


def stem_tokens(text: str) -> tuple[str, ...]:
    """Lowercased, whitespace-split, Porter-stemmed tokens.

    Leading/trailing punctuation is stripped from each token; inner hyphens
    and digits stay ("bcl-2", "chromosome-11").
    """
    out = []
    for tok in text.lower().split():
        tok = _EDGE_PUNCT.sub("", tok)
        if tok:
            out.append(stem_word(tok))
    return tuple(out)


def stem_expression(expr: str) -> StemmedTerm:
    return StemmedTerm(expr, " ".join(stem_tokens(expr)))


def build_candidate_set(store: CorpusStore) -> dict[str, StemmedTerm]:
    """Stemmed Keyword Plus terms of the corpus, keyed by stemmed form.

    Among originals colliding on one stem the lexicographically smallest is kept.
    """
    out: dict[str, StemmedTerm] = {}
    for rec in store:
        for kw in rec.keywords_plus:
            st = stem_expression(kw)
            if not st.stemmed:
                continue
            prev = out.get(st.stemmed)
            if prev is None or kw < prev.original:
                out[st.stemmed] = st
    return dict(sorted(out.items()))


@dataclass
class KeywordMatrix:
    keywords: list[str]
    articles: list
    data: np.ndarray  # keywords x articles, 0/1

    @property
    def tf(self) -> dict[str, int]:
        return {kw: int(n) for kw, n in zip(self.keywords, self.data.sum(axis=1))}

    def restrict(self, keywords: Iterable[str]) -> "KeywordMatrix":
        keep = set(keywords)
        rows = [i for i, kw in enumerate(self.keywords) if kw in keep]
        sub = self.data[rows]
        cols = [j for j in range(sub.shape[1]) if sub[:, j].any()]
        return KeywordMatrix([self.keywords[i] for i in rows], [self.articles[j] for j in cols],
                             sub[:, cols])


class CandidateIndex:
    """Candidates grouped by first stemmed token, for contiguous-sequence lookup."""

    def __init__(self, candidates: Iterable[str]):
        self.by_first: dict[str, list[tuple[str, ...]]] = defaultdict(list)
        for c in candidates:
            toks = tuple(c.split())
            if toks:
                self.by_first[toks[0]].append(toks)

    def find(self, tokens: Sequence[str]) -> set[str]:
        hits = set()
        for i, tok in enumerate(tokens):
            for cand in self.by_first.get(tok, ()):
                if tuple(tokens[i:i + len(cand)]) == cand:
                    hits.add(" ".join(cand))
        return hits


def contains_sequence(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    m = len(needle)
    return m > 0 and any(tuple(haystack[i:i + m]) == tuple(needle) for i in range(len(haystack) - m + 1))


def match_titles(members: Iterable, candidates, store: CorpusStore | None = None,
                 titles: Mapping | None = None) -> KeywordMatrix:
    """Keyword x article incidence matrix for one group.

    ``candidates`` is a :class:`CandidateIndex` or an iterable of stemmed
    strings. Titles come from ``titles`` (member -> title) or the store.
    Only keywords and articles with at least one match are kept.
    """
    index = candidates if isinstance(candidates, CandidateIndex) else CandidateIndex(candidates)
    found: dict = {}
    for m in sorted(members):
        title = titles[m] if titles is not None else store[m].title
        hits = index.find(stem_tokens(title or ""))
        if hits:
            found[m] = hits
    keywords = sorted(set().union(*found.values())) if found else []
    articles = sorted(found)
    kpos = {kw: i for i, kw in enumerate(keywords)}
    data = np.zeros((len(keywords), len(articles)), dtype=np.int8)
    for j, a in enumerate(articles):
        for kw in found[a]:
            data[kpos[kw], j] = 1
    return KeywordMatrix(keywords, articles, data)


def group_frequency(matrices: Iterable[KeywordMatrix]) -> Counter:
    """Number of groups in which each keyword occurs in at least one title."""
    return Counter(kw for m in matrices for kw in m.keywords)


def tfidf_scores(matrix: KeywordMatrix, n_groups: int, doc_freq: Mapping[str, int],
                 base: float = math.e) -> list[tuple[str, float]]:
    """Tf-Idf of each keyword of one group, best first (ties by keyword).

    Tf is the number of the group's titles holding the keyword, the inverse
    frequency is log(n_groups / groups holding the keyword).
    """
    out = []
    for kw, tf in matrix.tf.items():
        ng = doc_freq.get(kw, 0)
        if ng <= 0:
            raise ValueError(f"keyword {kw!r} missing from the year's group frequencies")
        out.append((kw, tf * math.log(n_groups / ng, base)))
    out.sort(key=lambda ks: (-ks[1], ks[0]))
    return out


def filter_keywords(scored: Sequence[tuple[str, float]], matrix: KeywordMatrix,
                    limit: int = 10) -> list[tuple[str, float]]:
    """Drop single-title keywords, then keywords contained (as a contiguous
    word sequence) in another remaining keyword with a score at least as high,
    and keep the ``limit`` best."""
    tf = matrix.tf
    alive = [(kw, s) for kw, s in scored if tf.get(kw, 0) >= 2]
    kept = []
    for kw, s in alive:
        toks = kw.split()
        shadowed = any(other != kw and os >= s and contains_sequence(other.split(), toks)
                       for other, os in alive)
        if not shadowed:
            kept.append((kw, s))
    kept.sort(key=lambda ks: (-ks[1], ks[0]))
    return kept[:limit]


def _rank_cut(sigma: np.ndarray, share: float, rtol: float = 1e-9) -> int:
    """Smallest r whose top singular values reach ``share`` of the total,
    extended over singular values tied with the r-th."""
    total = sigma.sum()
    csum = np.cumsum(sigma)
    r = int(np.searchsorted(csum, share * total - rtol * total) + 1)
    r = min(r, len(sigma))
    while r < len(sigma) and abs(sigma[r] - sigma[r - 1]) <= rtol * max(sigma[0], 1.0):
        r += 1
    return r


def leverage_scores(data: np.ndarray, share: float = 0.8) -> tuple[np.ndarray, int]:
    """Row leverage scores on the top singular subspace holding ``share`` of
    the singular value mass: (1/r) * sum of squared left singular vector
    entries. Returns (scores, r)."""
    a = np.asarray(data, dtype=float)
    if a.size == 0 or not a.any():
        raise ValueError("leverage scores of an all-zero matrix are undefined")
    u, sigma, _ = np.linalg.svd(a, full_matrices=False)
    r = _rank_cut(sigma, share)
    return (u[:, :r] ** 2).sum(axis=1) / r, r


@dataclass
class Selection:
    keywords: list[str]
    method: str
    leverage: dict[str, float] | None = None


def rcur_select(matrix: KeywordMatrix, scores: Mapping[str, float] | None = None,
                n: int = 3, share: float = 0.8) -> Selection:
    """Choose up to ``n`` keywords.

    With ``n`` or fewer keywords all are taken. If the occurrence matrix has
    rank below ``n`` the keyword profiles are too similar for leverage
    scores to discriminate and the Tf-Idf top ``n`` is returned instead.
    """
    kws = matrix.keywords
    scores = dict(scores or {})
    by_score = sorted(kws, key=lambda k: (-scores.get(k, 0.0), k))
    if not kws or matrix.data.size == 0:
        return Selection([], ALL_CANDIDATES)
    if len(kws) <= n:
        return Selection(by_score, ALL_CANDIDATES)
    if np.linalg.matrix_rank(matrix.data.astype(float)) < n:
        return Selection(by_score[:n], TFIDF_FALLBACK)
    lev, _ = leverage_scores(matrix.data, share)
    lev_map = {kw: float(v) for kw, v in zip(kws, lev)}
    ranked = sorted(kws, key=lambda k: (-round(lev_map[k], 12), k))
    return Selection(ranked[:n], RCUR, lev_map)


@dataclass
class TagReport:
    timeline_id: int
    year: int
    scored: list[tuple[str, float]]
    selected: list[str]
    method: str


def tag_year(states: Sequence, store: CorpusStore, candidates: CandidateIndex,
             limit: int = 10) -> list[TagReport]:
    """Tag every group state of one year; the year's groups form the Idf context."""
    mats = [match_titles(st.members, candidates, store) for st in states]
    df = group_frequency(mats)
    out = []
    for st, mat in zip(states, mats):
        scored = tfidf_scores(mat, len(states), df)
        kept = filter_keywords(scored, mat, limit)
        sub = mat.restrict(kw for kw, _ in kept)
        sel = rcur_select(sub, dict(kept))
        out.append(TagReport(st.timeline_id, st.year, kept, sel.keywords, sel.method))
    return out


@dataclass
class WindowTags:
    start: int
    end: int
    tags: list[tuple[str, int]]  # (tag, number of years selected)


def window_tags(reports: Sequence[TagReport], birth_year: int, death_year: int,
                window: int = 4, min_lifespan: int = 14) -> list[WindowTags]:
    """Compress a timeline's yearly tags into consecutive windows of ``window`` years.

    A tag is significant in a window when it was selected in more than half
    of the window's years; if no tag passes, tags at exactly half are taken.
    The last window may be shorter.
    """
    if death_year - birth_year + 1 < min_lifespan:
        raise ValueError(f"timeline shorter than {min_lifespan} years")
    per_year = {r.year: r.selected for r in reports}
    out = []
    for start in range(birth_year, death_year + 1, window):
        end = min(start + window - 1, death_year)
        steps = end - start + 1
        counts = Counter(kw for y in range(start, end + 1) for kw in per_year.get(y, ()))
        sig = [(kw, c) for kw, c in counts.items() if 2 * c > steps]
        if not sig:
            sig = [(kw, c) for kw, c in counts.items() if 2 * c == steps]
        sig.sort(key=lambda kc: (-kc[1], kc[0]))
        out.append(WindowTags(start, end, sig))
    return out
