import pytest

from conftest import MODEL, make_entry
from metamaturity.fairness import (
    DCAT_AP_RECOMMENDED,
    FAIR_INDICATORS,
    conformance_json,
    dcat_ap_report,
    fair_report,
)
from metamaturity.record import CatalogueEntry, ResourceRef

# Data-level ("D") indicator ids of each tier table, transcribed by hand.
TIER_TABLES = {
    "Essential": {"RDA-A1-02D", "RDA-A1-03D", "RDA-A1-04D", "RDA-R1.3-01D"},
    "Important": {"RDA-A1-05D", "RDA-A1.1-01D", "RDA-I1-01D", "RDA-I1-02D", "RDA-R1.3-02D"},
    "Useful": {"RDA-A1.2-01D", "RDA-I2-01D", "RDA-I3-01D", "RDA-I3-02D"},
}

FAIR_FIELDS = sorted(k for k in MODEL.properties if k.startswith("hasRDA_"))


def field_to_rda(key):
    # hasRDA_A1_2_01D -> RDA-A1.2-01D
    body = key.removeprefix("hasRDA_")
    *head, tail = body.split("_")
    return "RDA-" + ".".join(head) + "-" + tail


def oracle_tier(key):
    rda = field_to_rda(key)
    for tier, ids in TIER_TABLES.items():
        if rda in ids:
            return tier
    return "Unspecified"


def test_thirteen_boolean_fields():
    assert len(FAIR_FIELDS) == 13
    assert {i.field_key for i in FAIR_INDICATORS} == set(FAIR_FIELDS)


@pytest.mark.parametrize("key", FAIR_FIELDS)
def test_tier_matches_tables(key):
    ind = next(i for i in FAIR_INDICATORS if i.field_key == key)
    assert ind.rda_id == field_to_rda(key)
    assert ind.tier == oracle_tier(key)


def test_all_true():
    e = make_entry("x", **{k: True for k in FAIR_FIELDS})
    assert fair_report(e).counts == {"Essential": 4, "Important": 4, "Useful": 3, "Unspecified": 2}


def test_none_set():
    r = fair_report(make_entry("x"))
    assert set(r.counts.values()) == {0}
    assert r.coverage("Essential") == 0


def test_false_is_not_asserted():
    r = fair_report(make_entry("x", **{k: False for k in FAIR_FIELDS}))
    assert set(r.counts.values()) == {0}


def test_single_essential():
    r = fair_report(make_entry("x", hasRDA_A1_04D=True))
    assert r.counts == {"Essential": 1, "Important": 0, "Useful": 0, "Unspecified": 0}
    assert r.asserted_true == {"RDA-A1-04D"}


class TestDcatAp:
    def test_title_and_description(self):
        r = dcat_ap_report(make_entry("x", title="T", description="D"))
        assert r.mandatory_satisfied
        assert r.recommended_present == ()

    def test_description_only(self):
        r = dcat_ap_report(make_entry("x", description="D"))
        assert not r.mandatory_satisfied
        assert r.missing_mandatory == ("title",)

    def test_recommended_full(self):
        e = make_entry(
            "x", title="T", description="D", keyword="k", publisher={"name": "P"}, spatial={"label": "Ottawa"},
            temporal={"start": "2020-01-01"}, theme="Housing", contactPoint={"name": "C"},
        )
        e = CatalogueEntry(e.id, e.fields, (ResourceRef("r", "http://example.org/r", "CSV"),))
        r = dcat_ap_report(e)
        assert len(r.recommended_present) == len(DCAT_AP_RECOMMENDED) == 7

    def test_json_shape(self):
        doc = conformance_json(fair_report(make_entry("x")), dcat_ap_report(make_entry("x", title="T")))
        assert doc["fair"]["essential"] == {"n": 0, "of": 4}
        assert doc["dcat_ap"]["missing"] == ["description"]
