"""FAIR indicator tiers and DCAT-AP conformance over an entry."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .record import Bool, CatalogueEntry, is_filled

__all__ = [
    "FairIndicator",
    "FAIR_INDICATORS",
    "TIERS",
    "NOT_MODELED",
    "FairReport",
    "DcatApReport",
    "fair_report",
    "dcat_ap_report",
    "conformance_json",
]

TIERS = ("Essential", "Important", "Useful", "Unspecified")


@dataclass(frozen=True)
class FairIndicator:
    rda_id: str
    field_key: str
    facet: str
    tier: str


def _ind(rda_id: str, tier: str) -> FairIndicator:
    local = rda_id.removeprefix("RDA-").replace(".", "_").replace("-", "_")
    return FairIndicator(rda_id, f"hasRDA_{local}", rda_id[4], tier)


# Data-level indicators carried by the model.  F1-01D and F1-02D are not
# listed in any of the three tier tables.
FAIR_INDICATORS: tuple[FairIndicator, ...] = (
    _ind("RDA-A1-02D", "Essential"),
    _ind("RDA-A1-03D", "Essential"),
    _ind("RDA-A1-04D", "Essential"),
    _ind("RDA-R1.3-01D", "Essential"),
    _ind("RDA-A1-05D", "Important"),
    _ind("RDA-A1.1-01D", "Important"),
    _ind("RDA-I1-01D", "Important"),
    _ind("RDA-I1-02D", "Important"),
    _ind("RDA-A1.2-01D", "Useful"),
    _ind("RDA-I2-01D", "Useful"),
    _ind("RDA-I3-01D", "Useful"),
    _ind("RDA-F1-01D", "Unspecified"),
    _ind("RDA-F1-02D", "Unspecified"),
)

# Tiered indicators with no corresponding model field.
NOT_MODELED: Mapping[str, tuple[str, ...]] = {
    "Essential": (
        "RDA-F3-01M", "RDA-F4-01M", "RDA-A1-02M", "RDA-A1-03M", "RDA-A1-04M", "RDA-A1.1-01M",
        "RDA-A2-01M", "RDA-R1-01M", "RDA-R1.1-01M", "RDA-R1.3-01M", "RDA-R1.3-02M",
    ),
    "Important": (
        "RDA-A1-01M", "RDA-I1-01M", "RDA-I1-02M", "RDA-I2-01M", "RDA-I3-01M", "RDA-I3-03M",
        "RDA-R1.1-02M", "RDA-R1.1-03M", "RDA-R1.2-01M", "RDA-R1.3-02D",
    ),
    "Useful": ("RDA-I3-02M", "RDA-I3-02D", "RDA-I3-04M", "RDA-R1.2-02M"),
}


@dataclass(frozen=True)
class FairReport:
    asserted_true: frozenset[str]
    counts: Mapping[str, int]
    available: Mapping[str, int]

    def coverage(self, tier: str) -> float:
        return self.counts[tier] / self.available[tier] if self.available[tier] else 0.0


def fair_report(entry: CatalogueEntry) -> FairReport:
    """Which FAIR data indicators the entry asserts true, grouped by tier."""
    asserted = frozenset(
        ind.rda_id for ind in FAIR_INDICATORS
        if any(isinstance(v, Bool) and v.value for v in entry.values(ind.field_key))
    )
    counts = {t: 0 for t in TIERS}
    available = {t: 0 for t in TIERS}
    for ind in FAIR_INDICATORS:
        available[ind.tier] += 1
        if ind.rda_id in asserted:
            counts[ind.tier] += 1
    return FairReport(asserted, counts, available)


DCAT_AP_MANDATORY = ("title", "description")
DCAT_AP_RECOMMENDED = ("contactPoint", "keyword", "publisher", "spatial", "temporal", "theme", "distribution")
# accessCategory stands in for dct:accessRights; license and format are
# Distribution-level in DCAT-AP.
DCAT_AP_OPTIONAL = (
    "accessCategory", "creator", "hasVersion", "identifier", "isVersionOf", "landingPage", "language",
    "issued", "provenance", "spatialResolutionInMeters", "temporalResolution", "versionInfo",
    "versionNotes", "license", "format",
)


@dataclass(frozen=True)
class DcatApReport:
    missing_mandatory: tuple[str, ...]
    recommended_present: tuple[str, ...]
    optional_present: tuple[str, ...]

    @property
    def mandatory_satisfied(self) -> bool:
        return not self.missing_mandatory


def _has(entry: CatalogueEntry, key: str) -> bool:
    if key == "distribution":
        return bool(entry.resources)
    if key == "format" and any(r.format for r in entry.resources):
        return True
    return any(is_filled(v) for v in entry.values(key))


def dcat_ap_report(entry: CatalogueEntry) -> DcatApReport:
    return DcatApReport(
        tuple(k for k in DCAT_AP_MANDATORY if not _has(entry, k)),
        tuple(k for k in DCAT_AP_RECOMMENDED if _has(entry, k)),
        tuple(k for k in DCAT_AP_OPTIONAL if _has(entry, k)),
    )


def conformance_json(fair: FairReport, dcat: DcatApReport | None = None) -> dict:
    out: dict = {
        "fair": {
            tier.lower(): {"n": fair.counts[tier], "of": fair.available[tier]} for tier in TIERS
        },
        "asserted": sorted(fair.asserted_true),
        "not_modeled": {tier.lower(): list(ids) for tier, ids in NOT_MODELED.items()},
    }
    if dcat is not None:
        out["dcat_ap"] = {
            "mandatory": dcat.mandatory_satisfied,
            "missing": list(dcat.missing_mandatory),
            "recommended": {"n": len(dcat.recommended_present), "of": len(DCAT_AP_RECOMMENDED)},
            "optional": {"n": len(dcat.optional_present), "of": len(DCAT_AP_OPTIONAL)},
        }
    return out
