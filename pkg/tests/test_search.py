import math
import random
import threading
from collections import Counter

import pytest

from conftest import make_entry, random_search_corpus
from metamaturity.errors import DuplicateId, UnknownEntry, UnknownFacetField
from metamaturity.record import CatalogueEntry, ResourceRef, value_text
from metamaturity.search import FACET_FIELDS, Index, Query, build_index, facet_counts, query, tokenize

# -- brute-force oracle -----------------------------------------------------


def oracle_tokens(text):
    out, cur = [], []
    for ch in text.lower():
        if ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def oracle_text(entry):
    toks = []
    for key in ("title", "description", "keyword"):
        for v in entry.values(key):
            toks += oracle_tokens(value_text(v))
    return toks


def oracle_facet(entry, name):
    if name == "format":
        return {r.format for r in entry.resources if r.format}
    if name == "organization":
        return {entry.organization} if entry.organization else set()
    key = "keyword" if name == "tags" else name
    return {value_text(v) for v in entry.values(key)}


def oracle_query(corpus, q):
    hits = [e for e in corpus if all(oracle_facet(e, f) & set(vs) for f, vs in q.filters)]
    terms = sorted(set(oracle_tokens(q.text or "")))
    if not terms:
        return sorted(e.id for e in hits)
    if not corpus:
        return []
    docs = {e.id: oracle_text(e) for e in corpus}
    avgdl = sum(map(len, docs.values())) / len(docs)
    scored = []
    for e in hits:
        d = docs[e.id]
        score, matched = 0.0, False
        for t in terms:
            tf = d.count(t)
            n = sum(1 for toks in docs.values() if t in toks)
            if not tf:
                continue
            matched = True
            idf = math.log(1 + (len(docs) - n + 0.5) / (n + 0.5))
            score += idf * tf * 2.2 / (tf + 1.2 * (0.25 + 0.75 * len(d) / avgdl))
        if matched:
            scored.append((-score, e.id))
    return [i for _, i in sorted(scored)]


def oracle_facets(corpus, q, fields):
    ids = set(oracle_query(corpus, q))
    out = {}
    for name in fields:
        c = Counter(v for e in corpus if e.id in ids for v in oracle_facet(e, name))
        out[name] = sorted(((v, n) for v, n in c.items()), key=lambda x: (-x[1], x[0]))
    return out


def random_query(rng):
    vocab = ["solar", "radiance", "bike", "share", "toronto", "housing", "transit", "the", "missing", "bikes"]
    text = " ".join(rng.sample(vocab, rng.randint(1, 3))) if rng.random() < 0.6 else None
    values = {
        "theme": ["Transportation", "Housing", "Environment", "Health", "Nope"],
        "tags": ["bikes", "transit", "trees", "census", "zoning"],
        "format": ["CSV", "PDF", "ZIP", "csv"],
        "organization": ["City of Toronto", "Statistics Canada"],
        "accessCategory": ["open", "closed", "service"],
    }
    filters = tuple(
        (f, frozenset(rng.sample(values[f], rng.randint(1, 2))))
        for f in rng.sample(FACET_FIELDS, rng.choice([0, 0, 1, 1, 2, 3]))
    )
    return Query(text, filters)


# -- examples ---------------------------------------------------------------


def doc(entry_id, **fields):
    return make_entry(entry_id, **fields)


class TestIndexBasics:
    def test_empty(self):
        idx = build_index([])
        assert query(idx, Query()) == []
        assert query(idx, Query("anything")) == []
        assert facet_counts(idx, Query(), FACET_FIELDS) == {f: [] for f in FACET_FIELDS}

    def test_add_then_remove(self):
        idx = Index()
        idx.add(doc("a", title="solar", theme="Housing"))
        idx.remove("a")
        empty = Index()
        for q in (Query(), Query("solar"), Query(None, (("theme", {"Housing"}),))):
            assert query(idx, q) == query(empty, q) == []
        assert idx.postings == {} and idx.total_length == 0
        assert all(v == {} for v in idx.facet_postings.values())

    def test_duplicate(self):
        idx = build_index([doc("a")])
        with pytest.raises(DuplicateId):
            idx.add(doc("a"))

    def test_remove_unknown(self):
        with pytest.raises(UnknownEntry):
            Index().remove("nope")

    def test_update_replaces(self):
        idx = build_index([doc("a", title="old words")])
        idx.update(doc("a", title="new words"))
        assert query(idx, Query("old")) == []
        assert query(idx, Query("new")) == ["a"]


class TestQuery:
    corpus = [
        doc("a", theme="Transportation"),
        doc("b", theme=["Transportation", "Housing"]),
        doc("c", theme="Housing"),
    ]

    def test_theme_filter(self):
        idx = build_index(self.corpus)
        assert query(idx, Query(None, (("theme", {"Transportation"}),))) == ["a", "b"]

    def test_all(self):
        assert query(build_index(self.corpus), Query()) == ["a", "b", "c"]

    def test_or_within_and_across(self):
        idx = build_index(self.corpus + [doc("d", theme="Housing", accessCategory="open")])
        q = Query(None, (("theme", {"Transportation", "Housing"}), ("accessCategory", {"open"})))
        assert query(idx, q) == ["d"]

    def test_case_sensitive_facets(self):
        idx = build_index(self.corpus)
        assert query(idx, Query(None, (("theme", {"transportation"}),))) == []

    def test_unknown_field(self):
        with pytest.raises(UnknownFacetField):
            Query(None, (("colour", {"red"}),))
        with pytest.raises(UnknownFacetField):
            facet_counts(build_index([]), Query(), ["colour"])

    def test_solar_radiance(self):
        # Three docs of three tokens each, so every length norm is 1 and tf terms are 1.
        # idf(solar)    = ln(1 + 1.5/2.5) = 0.470004
        # idf(radiance) = ln(1 + 2.5/1.5) = 0.980829
        # a: 1.450833, b: 0.470004, c: no match
        idx = build_index([
            doc("a", description="solar radiance panels"),
            doc("b", description="solar power panels"),
            doc("c", description="wind farm data"),
        ])
        assert idx.idf("solar") == pytest.approx(0.470004, abs=1e-6)
        assert idx.idf("radiance") == pytest.approx(0.980829, abs=1e-6)
        assert query(idx, Query("solar radiance")) == ["a", "b"]

    def test_ties_by_id(self):
        idx = build_index([doc("z", title="bike"), doc("m", title="bike"), doc("q", title="car")])
        assert query(idx, Query("bike")) == ["m", "z"]

    def test_text_requires_match(self):
        idx = build_index([doc("a", title="bike"), doc("b", title="car")])
        assert query(idx, Query("train")) == []


def test_tokenize():
    assert tokenize("Bike-Share_2024, Toronto!") == ["bike", "share", "2024", "toronto"]
    assert tokenize("  ") == []
    assert tokenize("Ça va") == ["ça", "va"]


class TestFacets:
    def test_tie_ordered_by_value(self):
        idx = build_index([doc("a", keyword="T"), doc("b", keyword=["T", "R"]), doc("c", keyword="R")])
        got = facet_counts(idx, Query(), ["tags"])["tags"]
        assert [(f.value, f.count) for f in got] == [("R", 2), ("T", 2)]

    def test_result_scoped(self):
        idx = build_index([doc("a", title="bike", keyword="T"), doc("b", title="car", keyword="R")])
        got = facet_counts(idx, Query("bike"), ["tags"])["tags"]
        assert [(f.value, f.count) for f in got] == [("T", 1)]

    def test_formats_from_resources(self):
        e = CatalogueEntry("a", {}, (ResourceRef("r1", "http://x/1", "CSV"), ResourceRef("r2", "http://x/2", "PDF")))
        got = facet_counts(build_index([e]), Query(), ["format"])["format"]
        assert [(f.value, f.count) for f in got] == [("CSV", 1), ("PDF", 1)]


# -- randomized equivalence -------------------------------------------------


def test_oracle_equivalence_and_facet_consistency():
    rng = random.Random(20240207)
    mismatches = violations = 0
    for _ in range(20):
        corpus = random_search_corpus(rng, rng.randint(0, 200))
        idx = build_index(corpus)
        for _ in range(25):
            q = random_query(rng)
            if query(idx, q) != oracle_query(corpus, q):
                mismatches += 1
            got = facet_counts(idx, q, FACET_FIELDS)
            want = oracle_facets(corpus, q, FACET_FIELDS)
            if {f: [(c.value, c.count) for c in cs] for f, cs in got.items()} != want:
                mismatches += 1
            for name, counts in got.items():
                for c in counts[:3]:
                    if len(query(idx, q.with_filter(name, {c.value}))) != c.count:
                        violations += 1
    assert mismatches == 0 and violations == 0


def test_filters_never_grow_results():
    rng = random.Random(5)
    corpus = random_search_corpus(rng, 150)
    idx = build_index(corpus)
    for _ in range(200):
        q = random_query(rng)
        extra = random_query(rng).filters[:1]
        if not extra:
            continue
        narrowed = Query(q.text, (*q.filters, *extra))
        assert set(query(idx, narrowed)) <= set(query(idx, q))


def test_incremental_matches_rebuild():
    rng = random.Random(11)
    corpus = random_search_corpus(rng, 120)
    idx = build_index(corpus[:80])
    for e in corpus[80:]:
        idx.add(e)
    for e in corpus[:40]:
        idx.remove(e.id)
    for e in random_search_corpus(random.Random(12), 120)[40:60]:
        idx.update(e)
    live = {e.id: e for e in corpus[40:]}
    live.update({e.id: e for e in random_search_corpus(random.Random(12), 120)[40:60]})
    rebuilt = build_index(live.values())
    for _ in range(100):
        q = random_query(rng)
        assert query(idx, q) == query(rebuilt, q)


def test_readers_see_whole_updates():
    idx = build_index([doc("a", title="alpha", theme="Housing")])
    stop = threading.Event()
    seen = []

    def reader():
        while not stop.is_set():
            ids = query(idx, Query(None, (("theme", {"Housing"}),)))
            text = query(idx, Query("alpha"))
            seen.append((tuple(ids), tuple(text)))

    threads = [threading.Thread(target=reader) for _ in range(3)]
    for t in threads:
        t.start()
    for i in range(300):
        idx.update(doc("a", title="alpha" if i % 2 else "alpha beta", theme="Housing"))
    stop.set()
    for t in threads:
        t.join()
    assert all(s == (("a",), ("a",)) for s in seen)
