"""Deterministic synthetic catalogues with prescribed per-field fill rates.

Used to reproduce corpus-level completion statistics without the
original catalogue.  Every field ``f`` with target rate ``p`` is filled
in exactly ``round(p * n)`` entries, chosen by a seeded shuffle, so
level and category means hit their targets up to ``1 / (2n)``.
"""

from __future__ import annotations

import random
from typing import Mapping

from .model import Category, MaturityModel, PropertySpec, RangeKind, builtin_model
from .record import CatalogueEntry, ResourceRef, Value, coerce_value
from .scoring import INDIGENOUS_FIELDS

__all__ = [
    "LEVEL_TARGETS",
    "CATEGORY_TARGETS",
    "LEVEL4_SPLIT_TARGETS",
    "level_rates",
    "category_rates",
    "synthetic_corpus",
    "level_corpus",
    "category_corpus",
]

# Completion percentages observed over the evaluation catalogue.
LEVEL_TARGETS: Mapping[int, float] = {1: 92, 2: 61, 3: 48, 4: 46, 5: 83, 6: 13}
CATEGORY_TARGETS: Mapping[Category, float] = {
    Category.CONTENT: 80,
    Category.ACCESS: 80,
    Category.OWNERSHIP: 45,
    Category.PROVENANCE: 18,
    Category.TEMPORAL_GEOSPATIAL: 58,
    Category.STATISTICAL: 10,
    Category.QUALITY: 24,
}
LEVEL4_SPLIT_TARGETS = (9.0, 83.0)

THEMES = ("Transportation", "Housing", "Bylaws", "Culture and Tourism")
ORGANIZATIONS = ("City of Toronto", "Ontario Data Catalogue", "Canada Mortgage and Housing Corporation")
FORMATS = ("CSV", "XLSX", "PDF", "HTML", "JSON", "GeoJSON")


def level_rates(
    model: MaturityModel | None = None,
    targets: Mapping[int, float] = LEVEL_TARGETS,
    level4_split: tuple[float, float] | None = LEVEL4_SPLIT_TARGETS,
) -> dict[str, float]:
    """Per-field fill rates (0..1) whose level means equal ``targets``."""
    model = model or builtin_model()
    rates: dict[str, float] = {}
    for lvl in model.levels:
        for key in lvl.fields:
            rates[key] = targets[lvl.number] / 100
    if level4_split is not None:
        indigenous, other = level4_split
        for key in model.level(4).fields:
            rates[key] = (indigenous if key in INDIGENOUS_FIELDS else other) / 100
    return rates


def category_rates(
    model: MaturityModel | None = None,
    targets: Mapping[Category, float] = CATEGORY_TARGETS,
) -> dict[str, float]:
    model = model or builtin_model()
    return {spec.key: targets[spec.category] / 100 for spec in model.ordered()}


def _sample(spec: PropertySpec, i: int, rng: random.Random) -> object:
    kind = spec.range.kind
    if kind is RangeKind.BOOLEAN:
        return rng.random() < 0.5
    if kind is RangeKind.CONCEPT:
        return THEMES[rng.randrange(len(THEMES))]
    if kind in (RangeKind.DATE, RangeKind.DATE_TIME):
        return f"20{rng.randrange(10, 24)}-{rng.randrange(1, 13):02d}-{rng.randrange(1, 29):02d}"
    if kind is RangeKind.DECIMAL:
        return f"{rng.randrange(1, 500)}.5"
    if kind is RangeKind.DURATION:
        return rng.choice(("P1D", "P1M", "P1Y", "PT1H"))
    if kind is RangeKind.POSITIVE_INTEGER:
        return str(rng.randrange(1, 100_000))
    if kind is RangeKind.ENUMERATED:
        return spec.range.tokens[rng.randrange(len(spec.range.tokens))]
    if kind is RangeKind.AGENT:
        return {"name": f"Agent {i}", "email": f"agent{i}@example.org", "indigenous": False}
    if kind is RangeKind.LOCATION:
        return {"label": rng.choice(("Toronto", "Ottawa", "Ontario", "Canada"))}
    if kind is RangeKind.PERIOD_OF_TIME:
        return {"start": "2020-01-01", "end": "2022-12-31"}
    if kind is RangeKind.MEDIA_TYPE:
        return rng.choice(("csv", "xlsx", "pdf"))
    if kind in (RangeKind.RESOURCE_IRI, RangeKind.DOCUMENT, RangeKind.DATASET_REF,
                RangeKind.PROV_ENTITY, RangeKind.DATA_SERVICE):
        return f"http://example.org/{spec.key}/{i}"
    return f"{spec.label} {i}"


def synthetic_corpus(
    rates: Mapping[str, float],
    n: int = 2000,
    seed: int = 0,
    model: MaturityModel | None = None,
    prefix: str = "syn",
) -> list[CatalogueEntry]:
    """``n`` entries in which each field is filled in ``round(rate * n)`` of them."""
    model = model or builtin_model()
    rng = random.Random(seed)
    filled: list[dict[str, list[Value]]] = [{} for _ in range(n)]
    for spec in model.ordered():
        k = round(rates.get(spec.key, 0.0) * n)
        chosen = rng.sample(range(n), k)
        for i in chosen:
            filled[i][spec.key] = [coerce_value(spec, _sample(spec, i, rng))]
    width = len(str(n - 1))
    entries = []
    for i, fields in enumerate(filled):
        res = (ResourceRef(f"data {i}", f"http://example.org/data/{i}", FORMATS[rng.randrange(len(FORMATS))]),)
        entries.append(
            CatalogueEntry(f"{prefix}-{i:0{width}d}", fields, res, ORGANIZATIONS[rng.randrange(len(ORGANIZATIONS))])
        )
    return entries


def level_corpus(n: int = 2000, seed: int = 0) -> list[CatalogueEntry]:
    """Fixture matching the per-level means and the level-4 split."""
    return synthetic_corpus(level_rates(), n, seed, prefix="lvl")


def category_corpus(n: int = 2000, seed: int = 0) -> list[CatalogueEntry]:
    """Fixture matching the per-category means."""
    return synthetic_corpus(category_rates(), n, seed, prefix="cat")
