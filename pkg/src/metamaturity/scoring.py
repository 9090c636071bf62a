"""Completion scoring per entry and descriptive statistics over a corpus."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction as Rational
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCorpus
from .model import Category, MaturityModel, builtin_model
from .record import CatalogueEntry, is_filled

__all__ = [
    "Fraction",
    "CompletionReport",
    "Stat",
    "CorpusReport",
    "TABULAR_FIELDS",
    "RDF_FIELDS",
    "INDIGENOUS_FIELDS",
    "completion",
    "corpus_report",
    "split_level4",
    "report_rows",
    "report_csv",
    "report_json",
    "completion_json",
    "pct_display",
]

TABULAR_FIELDS = ("rows", "columns", "cells")
RDF_FIELDS = ("triples", "classes", "properties")
INDIGENOUS_FIELDS = ("containsIndigenousData", "indigenousRightsHolder", "spatialIndigenousCommunity")


@dataclass(frozen=True)
class Fraction:
    filled: int
    total: int

    def __post_init__(self) -> None:
        if self.total < 1 or not 0 <= self.filled <= self.total:
            raise ValueError(f"invalid fraction {self.filled}/{self.total}")

    @property
    def value(self) -> Rational:
        return Rational(self.filled, self.total)

    @property
    def percent(self) -> Rational:
        return self.value * 100

    def __str__(self) -> str:
        return f"{self.filled}/{self.total}"


def pct_display(value: Rational | float) -> str:
    """Whole-percent rendering, half rounding away from zero."""
    return f"{int(math.floor(float(value) + 0.5))}%"


@dataclass(frozen=True)
class CompletionReport:
    entry_id: str
    per_level: Mapping[int, Fraction]
    per_category: Mapping[Category, Fraction]
    overall: Fraction
    filled_keys: frozenset[str] = frozenset()


def _excluded(entry: CatalogueEntry) -> frozenset[str]:
    if entry.modality == "tabular":
        return frozenset(RDF_FIELDS)
    if entry.modality == "rdf":
        return frozenset(TABULAR_FIELDS)
    return frozenset()


def completion(model: MaturityModel, entry: CatalogueEntry, modality_aware: bool = False) -> CompletionReport:
    """Fraction of filled properties by level, by category and overall.

    With ``modality_aware`` an entry declaring a tabular (or RDF)
    modality is not scored on the other modality's level-6 statistics.
    """
    skip = _excluded(entry) if modality_aware else frozenset()
    filled_keys = frozenset(
        k for k in model.properties
        if k not in skip and any(is_filled(v) for v in entry.values(k))
    )

    per_level: dict[int, Fraction] = {}
    for lvl in model.levels:
        keys = [k for k in lvl.fields if k not in skip]
        if keys:
            per_level[lvl.number] = Fraction(sum(k in filled_keys for k in keys), len(keys))

    by_cat: dict[Category, list[str]] = {}
    for spec in model.ordered():
        if spec.key not in skip:
            by_cat.setdefault(spec.category, []).append(spec.key)
    per_category = {
        cat: Fraction(sum(k in filled_keys for k in by_cat[cat]), len(by_cat[cat]))
        for cat in Category
        if cat in by_cat
    }
    total = len(model.properties) - len(skip & set(model.properties))
    return CompletionReport(entry.id, per_level, per_category, Fraction(len(filled_keys), total), filled_keys)


@dataclass(frozen=True)
class Stat:
    mean: float
    std: float
    n: int


@dataclass(frozen=True)
class CorpusReport:
    n: int
    per_level: Mapping[int, Stat]
    per_category: Mapping[Category, Stat]
    overall: Stat


def _stat(percents: Sequence[Rational]) -> Stat:
    n = len(percents)
    mean = sum(percents, Rational(0)) / n
    var = sum(((p - mean) ** 2 for p in percents), Rational(0)) / n
    return Stat(float(mean), math.sqrt(var), n)


def corpus_report(reports: Sequence[CompletionReport]) -> CorpusReport:
    """Mean and population standard deviation of completion percentages."""
    if not reports:
        raise EmptyCorpus()
    levels = sorted({lvl for r in reports for lvl in r.per_level})
    per_level = {
        lvl: _stat([r.per_level[lvl].percent for r in reports if lvl in r.per_level]) for lvl in levels
    }
    per_category = {}
    for cat in Category:
        values = [r.per_category[cat].percent for r in reports if cat in r.per_category]
        if values:
            per_category[cat] = _stat(values)
    overall = _stat([r.overall.percent for r in reports])
    return CorpusReport(len(reports), per_level, per_category, overall)


def split_level4(reports: Sequence[CompletionReport]) -> tuple[float, float]:
    """Level-4 fill rates (percent) for the Indigenous fields vs. the rest."""
    if not reports:
        raise EmptyCorpus()
    level4 = builtin_model().level(4).fields
    others = [k for k in level4 if k not in INDIGENOUS_FIELDS]
    n = len(reports)
    indigenous = sum(sum(k in r.filled_keys for k in INDIGENOUS_FIELDS) for r in reports)
    rest = sum(sum(k in r.filled_keys for k in others) for r in reports)
    return (
        float(Rational(indigenous * 100, n * len(INDIGENOUS_FIELDS))),
        float(Rational(rest * 100, n * len(others))),
    )


# -- output -----------------------------------------------------------------

CSV_HEADER = ("scope", "name", "mean_pct", "std_pp", "n")


def report_rows(
    report: CorpusReport,
    by: str,
    split: tuple[float, float] | None = None,
) -> list[tuple[str, str, float, float | None, int]]:
    rows: list[tuple[str, str, float, float | None, int]] = []
    if by == "level":
        for lvl, st in report.per_level.items():
            rows.append(("level", str(lvl), st.mean, st.std, st.n))
    elif by == "category":
        for cat, st in report.per_category.items():
            rows.append(("category", cat.value, st.mean, st.std, st.n))
    else:
        raise ValueError(f"--by must be 'level' or 'category', not {by!r}")
    if split is not None:
        rows.append(("level4", "indigenous", split[0], None, report.n))
        rows.append(("level4", "non_indigenous", split[1], None, report.n))
    return rows


def _num(x: float | None) -> str:
    return "" if x is None else f"{x:.2f}"


def report_csv(rows: Iterable[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for scope, name, mean, std, n in rows:
        writer.writerow((scope, name, _num(mean), _num(std), n))
    return buf.getvalue()


def report_json(rows: Iterable[tuple]) -> list[dict]:
    return [
        {"scope": scope, "name": name, "mean_pct": round(mean, 6),
         "std_pp": None if std is None else round(std, 6), "n": n}
        for scope, name, mean, std, n in rows
    ]


def completion_json(report: CompletionReport) -> dict:
    def frac(f: Fraction) -> dict:
        return {"filled": f.filled, "total": f.total, "pct": round(float(f.percent), 6),
                "display": pct_display(f.percent)}

    return {
        "entry": report.entry_id,
        "per_level": {str(k): frac(v) for k, v in report.per_level.items()},
        "per_category": {k.value: frac(v) for k, v in report.per_category.items()},
        "overall": frac(report.overall),
    }
