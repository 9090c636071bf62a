import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from metamaturity.errors import (
    ConfigMissingKey,
    DuplicateFieldKey,
    LevelOutOfRange,
    MalformedCurie,
    MalformedDocument,
    UnknownCkanField,
    UnknownPrefix,
    UnknownProperty,
)
from metamaturity.model import (
    BUILTIN_PREFIXES,
    Category,
    PrefixMap,
    RangeKind,
    builtin_model,
    load_model_config,
    model_to_json,
    properties_by,
    resolve_curie,
)

# Prefix table, transcribed by hand.
PREFIX_TABLE = {
    "adms": "http://www.w3.org/ns/adms#",
    "cc": "http://creativecommons.org/ns#",
    "cuadr": "http://data.urbandatacentre.ca/",
    "dc": "http://purl.org/dc/elements/1.1/",
    "dcat": "http://www.w3.org/ns/dcat#",
    "dct": "http://purl.org/dc/terms/",
    "dqv": "http://www.w3.org/ns/dqv#",
    "fair": "http://ontology.eil.utoronto.ca/fair#",
    "foaf": "http://xmlns.com/foaf/0.1/",
    "oa": "http://www.w3.org/ns/oa#",
    "odrl": "http://www.w3.org/ns/odrl/2/",
    "owl": "http://www.w3.org/2002/07/owl#",
    "prov": "http://www.w3.org/ns/prov#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "sc": "https://schema.org/",
    "skos": "http://www.w3.org/2004/02/skos/core#",
    "vann": "http://purl.org/vocab/vann/",
    "vcard": "http://www.w3.org/2006/vcard/ns#",
    "void": "http://rdfs.org/ns/void#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}


def test_six_levels_with_recounted_sizes():
    m = builtin_model()
    assert [lvl.number for lvl in m.levels] == [1, 2, 3, 4, 5, 6]
    assert [len(lvl.fields) for lvl in m.levels] == [7, 10, 15, 6, 11, 8]
    assert len(m) == 57


def test_prefixes_match_table():
    assert dict(BUILTIN_PREFIXES) == PREFIX_TABLE
    assert builtin_model().prefixes["dcat"] == "http://www.w3.org/ns/dcat#"


def test_title_property():
    spec = builtin_model().property("title")
    assert (spec.curie, spec.level, spec.category) == ("dct:title", 1, Category.CONTENT)


def test_unknown_property():
    with pytest.raises(UnknownProperty):
        builtin_model().property("nope")


def test_every_curie_and_subproperty_resolves():
    m = builtin_model()
    for spec in m.ordered():
        assert resolve_curie(m.prefixes, spec.curie).startswith("http")
        if spec.sub_property_of:
            resolve_curie(m.prefixes, spec.sub_property_of)
    assert m.property("indigenousRightsHolder").sub_property_of == "dct:rightsHolder"
    assert m.property("spatialIndigenousCommunity").sub_property_of == "dct:spatial"


def test_levels_partition_properties():
    m = builtin_model()
    seen = [k for lvl in m.levels for k in lvl.fields]
    assert len(seen) == len(set(seen)) == len(m.properties)


def test_category_sizes():
    m = builtin_model()
    sizes = {c: len(properties_by(m, category=c)) for c in Category}
    assert sizes == {
        Category.CONTENT: 17, Category.ACCESS: 14, Category.OWNERSHIP: 5, Category.PROVENANCE: 7,
        Category.TEMPORAL_GEOSPATIAL: 6, Category.STATISTICAL: 6, Category.QUALITY: 2,
    }


def test_level6_is_statistical_plus_quality():
    m = builtin_model()
    lvl6 = set(m.level(6).fields)
    stat_q = {s.key for s in m.ordered() if s.category in (Category.STATISTICAL, Category.QUALITY)}
    assert lvl6 == stat_q


def test_enumerations_nonempty_and_unique():
    for spec in builtin_model().ordered():
        if spec.range.kind is RangeKind.ENUMERATED:
            assert spec.range.tokens and len(set(spec.range.tokens)) == len(spec.range.tokens)
    assert builtin_model().property("accessCategory").range.tokens == ("open", "closed", "service")


class TestResolveCurie:
    def test_expand(self):
        assert resolve_curie(BUILTIN_PREFIXES, "dct:title") == "http://purl.org/dc/terms/title"

    def test_absolute_passthrough(self):
        assert resolve_curie(BUILTIN_PREFIXES, "http://example.org/x") == "http://example.org/x"
        assert resolve_curie(BUILTIN_PREFIXES, "urn:isbn:123") == "urn:isbn:123"

    def test_unknown_prefix(self):
        with pytest.raises(UnknownPrefix):
            resolve_curie(BUILTIN_PREFIXES, "zzz:thing")

    def test_malformed(self):
        with pytest.raises(MalformedCurie):
            resolve_curie(BUILTIN_PREFIXES, "no colon here")

    @given(st.sampled_from(sorted(PREFIX_TABLE)), st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,10}", fullmatch=True))
    def test_compact_inverts_expand(self, prefix, local):
        iri = resolve_curie(BUILTIN_PREFIXES, f"{prefix}:{local}")
        name, rest = BUILTIN_PREFIXES.compact(iri)
        assert BUILTIN_PREFIXES[name] + rest == iri


class TestPrefixMap:
    def test_rejects_namespace_without_terminator(self):
        with pytest.raises(ValueError):
            PrefixMap({"void": "http://rdfs.org/ns/void"})

    def test_rejects_bad_name(self):
        with pytest.raises(ValueError):
            PrefixMap({"Bad": "http://x.org/"})

    def test_longest_namespace_wins(self):
        pm = PrefixMap({"a": "http://x.org/", "b": "http://x.org/ns/"})
        assert pm.compact("http://x.org/ns/t") == ("b", "t")


class TestPropertiesBy:
    def test_level4(self):
        assert len(properties_by(builtin_model(), level=4)) == 6

    def test_quality(self):
        curies = {s.curie for s in properties_by(builtin_model(), category=Category.QUALITY)}
        assert curies == {"dqv:hasQualityAnnotation", "dqv:inDimension"}

    def test_category_by_name(self):
        assert len(properties_by(builtin_model(), category="temporal/geospatial")) == 6

    def test_level_out_of_range(self):
        with pytest.raises(LevelOutOfRange):
            properties_by(builtin_model(), level=7)


def _config(*levels, **extra):
    return json.dumps({"maturity_model": [{"title": f"L{i}", "fields": f} for i, f in enumerate(levels, 1)], **extra})


class TestLoadModelConfig:
    def test_ckan_field_binds_builtin(self):
        m = load_model_config(_config([{"ckanField": "title"}]))
        assert len(m.levels) == 1
        assert m.level(1).fields == ("title",)
        assert m.property("title").curie == "dct:title"

    def test_custom_field(self):
        m = load_model_config(_config([{"name": "theme", "label": "Domain / Topic"}]))
        spec = m.property("theme")
        assert (spec.key, spec.label) == ("theme", "Domain / Topic")

    def test_missing_key(self):
        with pytest.raises(ConfigMissingKey):
            load_model_config(_config([{}]))

    def test_unknown_ckan_field(self):
        with pytest.raises(UnknownCkanField):
            load_model_config(_config([{"ckanField": "maintainer_phone"}]))

    def test_duplicate(self):
        with pytest.raises(DuplicateFieldKey):
            load_model_config(_config([{"ckanField": "title"}], [{"ckanField": "title"}]))

    def test_author_and_email_share_creator(self):
        m = load_model_config(_config([{"ckanField": "author"}, {"ckanField": "author_email"}]))
        assert m.level(1).fields == ("creator",)

    def test_seven_levels_rejected(self):
        with pytest.raises(MalformedDocument):
            load_model_config(_config(*([[{"name": f"f{i}"}] for i in range(7)])))

    def test_extra_prefixes(self):
        cfg = _config([{"name": "x", "curie": "ex:x"}], prefixes={"ex": "http://example.org/"})
        assert load_model_config(cfg).iri("x") == "http://example.org/x"

    def test_unknown_prefix_in_custom_curie(self):
        with pytest.raises(MalformedDocument):
            load_model_config(_config([{"name": "x", "curie": "ex:x"}]))

    def test_not_json(self):
        with pytest.raises(MalformedDocument):
            load_model_config("{")


def test_model_json_is_serialisable():
    doc = model_to_json(builtin_model())
    assert len(doc["properties"]) == 57
    json.dumps(doc)
