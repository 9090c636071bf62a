"""In-process catalogue search: BM25 over text fields plus facet filtering."""

from __future__ import annotations

import math
import re
import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateId, UnknownFacetField, UnknownEntry
from .record import CatalogueEntry, is_filled, value_text

__all__ = [
    "FACET_FIELDS",
    "TEXT_FIELDS",
    "IndexDoc",
    "Query",
    "FacetCount",
    "Index",
    "tokenize",
    "index_doc",
    "build_index",
    "query",
    "facet_counts",
]

K1 = 1.2
B = 0.75

FACET_FIELDS = ("theme", "tags", "format", "organization", "accessCategory")
TEXT_FIELDS = ("title", "description", "keyword")

_TOKEN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on anything that is not a letter or digit."""
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class IndexDoc:
    entry_id: str
    tokens: tuple[str, ...]
    facets: Mapping[str, frozenset[str]]


def index_doc(entry: CatalogueEntry) -> IndexDoc:
    tokens: list[str] = []
    for key in TEXT_FIELDS:
        for v in entry.values(key):
            tokens.extend(tokenize(value_text(v)))

    def texts(key: str) -> frozenset[str]:
        return frozenset(value_text(v) for v in entry.values(key) if is_filled(v))

    facets = {
        "theme": texts("theme"),
        "tags": texts("keyword"),
        "format": frozenset(r.format for r in entry.resources if r.format),
        "organization": frozenset([entry.organization] if entry.organization else []),
        "accessCategory": texts("accessCategory"),
    }
    return IndexDoc(entry.id, tuple(tokens), facets)


@dataclass(frozen=True)
class Query:
    text: str | None = None
    filters: tuple[tuple[str, frozenset[str]], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "filters", tuple((f, frozenset(vs)) for f, vs in self.filters))
        for f, _ in self.filters:
            if f not in FACET_FIELDS:
                raise UnknownFacetField(f)

    def with_filter(self, name: str, values: Iterable[str]) -> "Query":
        return Query(self.text, (*self.filters, (name, frozenset(values))))


@dataclass(frozen=True, order=True)
class FacetCount:
    field: str
    value: str
    count: int


@dataclass
class Index:
    """Inverted text index plus facet postings.

    Mutations take the write lock, so readers never see half an update.
    """

    docs: dict[str, IndexDoc] = field(default_factory=dict)
    postings: dict[str, dict[str, int]] = field(default_factory=dict)
    facet_postings: dict[str, dict[str, set[str]]] = field(
        default_factory=lambda: {f: {} for f in FACET_FIELDS}
    )
    total_length: int = 0
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.docs)

    def add(self, entry: CatalogueEntry) -> None:
        with self._lock:
            if entry.id in self.docs:
                raise DuplicateId(entry.id)
            self._insert(index_doc(entry))

    def remove(self, entry_id: str) -> None:
        with self._lock:
            doc = self.docs.pop(entry_id, None)
            if doc is None:
                raise UnknownEntry(entry_id)
            self.total_length -= len(doc.tokens)
            for tok in set(doc.tokens):
                post = self.postings[tok]
                del post[entry_id]
                if not post:
                    del self.postings[tok]
            for name, values in doc.facets.items():
                for v in values:
                    ids = self.facet_postings[name][v]
                    ids.discard(entry_id)
                    if not ids:
                        del self.facet_postings[name][v]

    def update(self, entry: CatalogueEntry) -> None:
        with self._lock:
            if entry.id in self.docs:
                self.remove(entry.id)
            self._insert(index_doc(entry))

    def _insert(self, doc: IndexDoc) -> None:
        self.docs[doc.entry_id] = doc
        self.total_length += len(doc.tokens)
        for tok, tf in Counter(doc.tokens).items():
            self.postings.setdefault(tok, {})[doc.entry_id] = tf
        for name, values in doc.facets.items():
            for v in values:
                self.facet_postings[name].setdefault(v, set()).add(doc.entry_id)

    # -- reads --

    def _candidates(self, q: Query) -> set[str]:
        ids = set(self.docs)
        for name, accepted in q.filters:
            allowed: set[str] = set()
            for v in accepted:
                allowed |= self.facet_postings[name].get(v, set())
            ids &= allowed
        return ids

    def idf(self, token: str) -> float:
        n = len(self.postings.get(token, ()))
        return math.log(1.0 + (len(self.docs) - n + 0.5) / (n + 0.5))

    def search(self, q: Query) -> list[str]:
        with self._lock:
            candidates = self._candidates(q)
            terms = sorted(set(tokenize(q.text or "")))
            if not terms:
                return sorted(candidates)
            avgdl = self.total_length / len(self.docs) if self.docs else 0.0
            scores: dict[str, float] = {}
            for term in terms:
                post = self.postings.get(term)
                if not post:
                    continue
                idf = self.idf(term)
                for entry_id, tf in post.items():
                    if entry_id not in candidates:
                        continue
                    dl = len(self.docs[entry_id].tokens)
                    norm = 1.0 - B + B * dl / avgdl if avgdl else 1.0
                    scores[entry_id] = scores.get(entry_id, 0.0) + idf * tf * (K1 + 1) / (tf + K1 * norm)
            return sorted(scores, key=lambda i: (-scores[i], i))

    def facets(self, q: Query, fields: Sequence[str]) -> dict[str, list[FacetCount]]:
        for name in fields:
            if name not in FACET_FIELDS:
                raise UnknownFacetField(name)
        with self._lock:
            hits = self.search(q)
            out: dict[str, list[FacetCount]] = {}
            for name in fields:
                counts: Counter[str] = Counter()
                for entry_id in hits:
                    counts.update(self.docs[entry_id].facets[name])
                out[name] = [
                    FacetCount(name, v, c) for v, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
                ]
            return out


def build_index(entries: Iterable[CatalogueEntry]) -> Index:
    index = Index()
    for e in entries:
        index.add(e)
    return index


def query(index: Index, q: Query) -> list[str]:
    """Entry ids matching every filter, BM25-ranked when ``q.text`` is given."""
    return index.search(q)


def facet_counts(index: Index, q: Query, fields: Sequence[str]) -> dict[str, list[FacetCount]]:
    """Facet value counts over the results of ``q`` only."""
    return index.facets(q, fields)
