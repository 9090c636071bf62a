from __future__ import annotations

import json
import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from metamaturity.model import RangeKind, builtin_model
from metamaturity.record import MODALITIES, CatalogueEntry, ResourceRef, coerce_value, parse_entry

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"
MODEL = builtin_model()


@pytest.fixture
def model():
    return MODEL


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def e1():
    return parse_entry((FIXTURES / "e1.json").read_text(), MODEL)


def make_entry(entry_id: str, **fields) -> CatalogueEntry:
    """Build an entry from raw JSON-ish values, coerced like the file format."""
    doc = {"id": entry_id, "fields": {k: v if isinstance(v, list) else [v] for k, v in fields.items()}}
    return parse_entry(json.dumps(doc), MODEL)


# -- hypothesis strategies --------------------------------------------------

short_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=16
).filter(lambda s: s.strip())
words = st.sampled_from(
    ["solar", "radiance", "bike", "share", "toronto", "housing", "transit", "census", "tree", "canopy", "zoning"]
)
slugs = st.from_regex(r"[a-z0-9][a-z0-9-]{0,11}", fullmatch=True)
urls = st.builds(lambda s: f"http://example.org/{s}", slugs)


def raw_value(kind: RangeKind, spec):
    if kind is RangeKind.BOOLEAN:
        return st.booleans()
    if kind in (RangeKind.DATE, RangeKind.DATE_TIME):
        return st.dates().map(lambda d: d.isoformat()) | st.just("2024-05-06T07:08:09Z")
    if kind is RangeKind.DECIMAL:
        return st.decimals(allow_nan=False, allow_infinity=False, places=2, min_value=-1000, max_value=1000).map(str)
    if kind is RangeKind.POSITIVE_INTEGER:
        return st.integers(1, 10**9).map(str)
    if kind is RangeKind.DURATION:
        return st.sampled_from(["P1D", "PT6H", "P1Y2M"])
    if kind is RangeKind.ENUMERATED:
        return st.sampled_from(spec.range.tokens)
    if kind is RangeKind.AGENT:
        return st.fixed_dictionaries(
            {"name": short_text, "indigenous": st.booleans()}, optional={"email": st.emails()}
        )
    if kind is RangeKind.LOCATION:
        return st.fixed_dictionaries({"label": short_text}, optional={"region_code": slugs})
    if kind is RangeKind.PERIOD_OF_TIME:
        return st.fixed_dictionaries({"start": st.just("2020-01-01"), "end": st.just("2021-12-31")})
    if kind in (RangeKind.RESOURCE_IRI, RangeKind.DOCUMENT, RangeKind.DATASET_REF,
                RangeKind.PROV_ENTITY, RangeKind.DATA_SERVICE):
        return urls
    return short_text


@st.composite
def entries(draw, entry_id=None, max_fields: int = 10):
    eid = entry_id or draw(slugs)
    keys = draw(st.lists(st.sampled_from(sorted(MODEL.properties)), unique=True, max_size=max_fields))
    fields = {}
    for key in keys:
        spec = MODEL.properties[key]
        n = draw(st.integers(1, 2))
        fields[key] = [coerce_value(spec, draw(raw_value(spec.range.kind, spec))) for _ in range(n)]
    resources = draw(
        st.lists(
            st.builds(ResourceRef, short_text, urls, st.none() | st.sampled_from(["CSV", "PDF", "ZIP"]),
                      st.none() | short_text),
            max_size=2,
        )
    )
    org = draw(st.none() | st.sampled_from(["City of Toronto", "Statistics Canada"]))
    revision = draw(st.integers(0, 9))
    modality = draw(st.none() | st.sampled_from(MODALITIES))
    return CatalogueEntry(eid, fields, tuple(resources), org, revision, modality)


def random_search_corpus(rng: random.Random, n: int) -> list[CatalogueEntry]:
    themes = ["Transportation", "Housing", "Environment", "Health"]
    tags = ["bikes", "transit", "trees", "census", "zoning"]
    vocab = ["solar", "radiance", "bike", "share", "toronto", "housing", "transit", "census", "tree", "the", "of"]
    out = []
    for i in range(n):
        fields = {}
        if rng.random() < 0.9:
            fields["title"] = [" ".join(rng.choices(vocab, k=rng.randint(1, 4)))]
        if rng.random() < 0.7:
            fields["description"] = [" ".join(rng.choices(vocab, k=rng.randint(0, 12)))]
        if rng.random() < 0.6:
            fields["keyword"] = rng.sample(tags, rng.randint(1, 3))
        if rng.random() < 0.6:
            fields["theme"] = rng.sample(themes, rng.randint(1, 2))
        if rng.random() < 0.5:
            fields["accessCategory"] = [rng.choice(["open", "closed", "service"])]
        res = [ResourceRef(f"r{j}", f"http://example.org/{i}/{j}", rng.choice(["CSV", "PDF", "ZIP", None]))
               for j in range(rng.randint(0, 2))]
        org = rng.choice([None, "City of Toronto", "Statistics Canada"])
        typed = {k: [coerce_value(MODEL.properties[k], v) for v in vs] for k, vs in fields.items()}
        out.append(CatalogueEntry(f"d{i:03d}", typed, tuple(res), org))
    return out


def write_catalogue(root: Path, corpus) -> Path:
    from metamaturity.store import Catalogue, save_catalogue

    cat = Catalogue(root)
    cat.entries.update((e.id, e) for e in corpus)
    save_catalogue(cat)
    return root


@pytest.fixture(scope="session")
def level_catalogue(tmp_path_factory):
    from metamaturity.synthetic import level_corpus

    return write_catalogue(tmp_path_factory.mktemp("levels"), level_corpus())


@pytest.fixture(scope="session")
def category_catalogue(tmp_path_factory):
    from metamaturity.synthetic import category_corpus

    return write_catalogue(tmp_path_factory.mktemp("categories"), category_corpus())


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
