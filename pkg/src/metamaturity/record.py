"""Catalogue entries: typed values, the JSON entry format, and validation."""

from __future__ import annotations

import datetime as dt
import decimal
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Iterable, Mapping, Union

from .errors import MalformedDocument, MissingId
from .model import MaturityModel, PropertySpec, RangeKind, is_absolute_iri

__all__ = [
    "Text", "Bool", "Date", "DateTime", "Decimal", "Duration", "PosInt", "Iri", "Token",
    "Agent", "Period", "Location", "Value",
    "ResourceRef", "CatalogueEntry", "ValidationIssue", "ISSUE_CODES",
    "parse_entry", "entry_from_json", "entry_to_json", "serialize_entry",
    "coerce_value", "value_to_json", "value_text", "is_filled",
    "validate_value", "validate_entry", "known_media_type",
]

ENTRY_ID = re.compile(r"^[a-z0-9][a-z0-9-]*$")

_DATE = re.compile(r"^-?\d{4,}-\d{2}-\d{2}(Z|[+-]\d{2}:\d{2})?$")
_DATETIME = re.compile(r"^-?\d{4,}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})?$")
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")
_INTEGER = re.compile(r"^[+-]?\d+$")
_DURATION = re.compile(
    r"^-?P(?=\d|T\d)(\d+Y)?(\d+M)?(\d+D)?(T(?=\d)(\d+H)?(\d+M)?(\d+(\.\d+)?S)?)?$"
)


# -- values -----------------------------------------------------------------


@dataclass(frozen=True)
class Text:
    text: str
    lang: str | None = None


@dataclass(frozen=True)
class Bool:
    value: bool


@dataclass(frozen=True)
class Date:
    lexical: str


@dataclass(frozen=True)
class DateTime:
    lexical: str


@dataclass(frozen=True)
class Decimal:
    value: decimal.Decimal


@dataclass(frozen=True)
class Duration:
    lexical: str


@dataclass(frozen=True)
class PosInt:
    value: int

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError("PosInt must be >= 1")


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not is_absolute_iri(self.value):
            raise ValueError(f"not an absolute IRI: {self.value!r}")


@dataclass(frozen=True)
class Token:
    token: str


@dataclass(frozen=True)
class Agent:
    name: str
    email: str | None = None
    indigenous: bool = False


@dataclass(frozen=True)
class Period:
    start: str | None = None
    end: str | None = None


@dataclass(frozen=True)
class Location:
    label: str
    region_code: str | None = None


Value = Union[Text, Bool, Date, DateTime, Decimal, Duration, PosInt, Iri, Token, Agent, Period, Location]


@dataclass(frozen=True)
class ResourceRef:
    name: str
    url: str
    format: str | None = None
    description: str | None = None


@dataclass(frozen=True)
class CatalogueEntry:
    id: str
    fields: Mapping[str, tuple[Value, ...]] = field(default_factory=dict, hash=False)
    resources: tuple[ResourceRef, ...] = ()
    organization: str | None = None
    revision: int = 0
    modality: str | None = None

    def __post_init__(self) -> None:
        if not ENTRY_ID.match(self.id or ""):
            raise ValueError(f"entry id must match [a-z0-9][a-z0-9-]*: {self.id!r}")
        object.__setattr__(self, "fields", {k: tuple(v) for k, v in self.fields.items()})
        object.__setattr__(self, "resources", tuple(self.resources))

    def values(self, key: str) -> tuple[Value, ...]:
        return self.fields.get(key, ())

    def with_field(self, key: str, values: Iterable[Value]) -> "CatalogueEntry":
        fields = dict(self.fields)
        fields[key] = tuple(values)
        return CatalogueEntry(self.id, fields, self.resources, self.organization, self.revision, self.modality)

    def with_revision(self, revision: int) -> "CatalogueEntry":
        return CatalogueEntry(self.id, self.fields, self.resources, self.organization, revision, self.modality)


MODALITIES = ("tabular", "rdf", "both", "unspecified")

ISSUE_CODES = frozenset(
    {
        "TypeMismatch", "EnumViolation", "Cardinality", "MalformedIri", "MalformedDate",
        "MalformedDecimal", "MalformedDuration", "NonPositive", "UnknownField", "PeriodInverted",
    }
)


@dataclass(frozen=True)
class ValidationIssue:
    field_key: str
    code: str
    message: str
    severity: str = "error"

    def __post_init__(self) -> None:
        if self.code not in ISSUE_CODES:
            raise ValueError(f"unknown issue code {self.code!r}")

    def to_json(self) -> dict:
        return {"field": self.field_key, "code": self.code, "severity": self.severity, "message": self.message}


# -- lexical checks ---------------------------------------------------------


def _valid_date(text: str) -> bool:
    if not _DATE.match(text):
        return False
    try:
        dt.date.fromisoformat(text[:10])
    except ValueError:
        return False
    return True


def _valid_datetime(text: str) -> bool:
    if not _DATETIME.match(text):
        return False
    core = text[:19]
    try:
        dt.datetime.fromisoformat(core)
    except ValueError:
        return False
    return True


def _temporal_key(text: str) -> dt.datetime | None:
    """Naive sort key for a date or dateTime lexical form; None when malformed."""
    if _valid_date(text):
        return dt.datetime.fromisoformat(text[:10])
    if _valid_datetime(text):
        return dt.datetime.fromisoformat(text[:19])
    return None


@lru_cache(maxsize=1)
def _media_types() -> tuple[frozenset[str], frozenset[str]]:
    raw = resources.files("metamaturity").joinpath("data/media_types.txt").read_text("utf-8")
    full: set[str] = set()
    short: set[str] = set()
    for line in raw.splitlines():
        line = line.strip().lower()
        if not line or line.startswith("#"):
            continue
        if line.startswith("."):
            short.add(line[1:])
            continue
        full.add(line)
        short.add(line.split("/", 1)[1])
    return frozenset(full), frozenset(short)


def known_media_type(token: str) -> bool:
    """True for a registered media type, its subtype alone, or a common extension."""
    full, short = _media_types()
    t = token.strip().lower()
    t = t.split(";", 1)[0].strip()
    return t in full or t in short or t.lstrip(".") in short


# -- coercion ---------------------------------------------------------------

_IRI_KINDS = frozenset(
    {RangeKind.RESOURCE_IRI, RangeKind.DOCUMENT, RangeKind.DATASET_REF, RangeKind.PROV_ENTITY, RangeKind.DATA_SERVICE}
)
_TEXT_OR_IRI_KINDS = frozenset(
    {
        RangeKind.CONCEPT, RangeKind.LICENSE, RangeKind.POLICY, RangeKind.LINGUISTIC_SYSTEM,
        RangeKind.QUALITY_ANNOTATION, RangeKind.QUALITY_DIMENSION, RangeKind.PROVENANCE_STATEMENT,
        RangeKind.ADMINISTRATIVE_AREA,
    }
)
_TEXT_KINDS = frozenset({RangeKind.PLAIN_TEXT, RangeKind.LANG_TEXT, RangeKind.MEDIA_TYPE})


def _as_iri_or_text(text: str) -> Value:
    return Iri(text) if is_absolute_iri(text) else Text(text)


def _structured(raw: dict, key: str) -> Value:
    if "text" in raw:
        return Text(str(raw["text"]), raw.get("lang"))
    if "name" in raw:
        return Agent(str(raw["name"]), raw.get("email"), bool(raw.get("indigenous", False)))
    if "label" in raw:
        return Location(str(raw["label"]), raw.get("region_code"))
    if "start" in raw or "end" in raw:
        return Period(raw.get("start"), raw.get("end"))
    raise MalformedDocument(f"field {key!r}: unrecognised value object {raw!r}")


def coerce_value(spec: PropertySpec | None, raw: Any, key: str = "") -> Value:
    """Turn one JSON value into a typed Value for ``spec``'s range.

    Conversion only happens when it is lossless; anything else stays Text
    so validation can report it.
    """
    key = key or (spec.key if spec else "")
    if isinstance(raw, dict):
        return _structured(raw, key)
    if isinstance(raw, list) or raw is None:
        raise MalformedDocument(f"field {key!r}: values must be scalars or objects, got {raw!r}")
    if isinstance(raw, bool):
        if spec is not None and spec.range.kind is RangeKind.BOOLEAN:
            return Bool(raw)
        return Text("true" if raw else "false")
    if isinstance(raw, (int, float)):
        raw = str(raw)
    text = str(raw)
    if spec is None:
        return Text(text)

    kind = spec.range.kind
    stripped = text.strip()
    if kind in _TEXT_KINDS:
        return Text(text)
    if kind is RangeKind.BOOLEAN:
        low = stripped.lower()
        if low in ("true", "1"):
            return Bool(True)
        if low in ("false", "0"):
            return Bool(False)
        return Text(text)
    if kind in (RangeKind.DATE, RangeKind.DATE_TIME):
        if _valid_date(text):
            return Date(text)
        if _valid_datetime(text):
            return DateTime(text)
        return Text(text)
    if kind is RangeKind.DECIMAL:
        if _DECIMAL.match(text):
            return Decimal(decimal.Decimal(text))
        return Text(text)
    if kind is RangeKind.DURATION:
        return Duration(text) if _DURATION.match(text) else Text(text)
    if kind is RangeKind.POSITIVE_INTEGER:
        if _INTEGER.match(text) and int(text) >= 1 and str(int(text)) == text:
            return PosInt(int(text))
        return Text(text)
    if kind in _IRI_KINDS or kind in _TEXT_OR_IRI_KINDS:
        return _as_iri_or_text(text)
    if kind is RangeKind.ENUMERATED:
        return Token(stripped.lower())
    if kind is RangeKind.AGENT:
        return Agent(text)
    if kind is RangeKind.LOCATION:
        return Location(text)
    if kind is RangeKind.PERIOD_OF_TIME:
        if "/" in text:
            start, end = text.split("/", 1)
            return Period(start or None, end or None)
        return Text(text)
    return Text(text)


def value_to_json(v: Value) -> Any:
    if isinstance(v, Text):
        return {"text": v.text, "lang": v.lang} if v.lang else v.text
    if isinstance(v, Bool):
        return "true" if v.value else "false"
    if isinstance(v, (Date, DateTime, Duration)):
        return v.lexical
    if isinstance(v, Decimal):
        return str(v.value)
    if isinstance(v, PosInt):
        return str(v.value)
    if isinstance(v, Iri):
        return v.value
    if isinstance(v, Token):
        return v.token
    if isinstance(v, Agent):
        out: dict[str, Any] = {"name": v.name}
        if v.email is not None:
            out["email"] = v.email
        out["indigenous"] = v.indigenous
        return out
    if isinstance(v, Period):
        return {"start": v.start, "end": v.end}
    if isinstance(v, Location):
        out = {"label": v.label}
        if v.region_code is not None:
            out["region_code"] = v.region_code
        return out
    raise TypeError(f"not a Value: {v!r}")


def value_text(v: Value) -> str:
    """Plain-text rendering used by templates and the search index."""
    if isinstance(v, Text):
        return v.text
    if isinstance(v, Bool):
        return "true" if v.value else "false"
    if isinstance(v, (Date, DateTime, Duration)):
        return v.lexical
    if isinstance(v, (Decimal, PosInt)):
        return str(v.value)
    if isinstance(v, Iri):
        return v.value
    if isinstance(v, Token):
        return v.token
    if isinstance(v, Agent):
        return v.name
    if isinstance(v, Period):
        return f"{v.start or ''}/{v.end or ''}"
    if isinstance(v, Location):
        return v.label
    raise TypeError(f"not a Value: {v!r}")


def is_filled(v: Value) -> bool:
    """A value counts toward completion unless it is blank after trimming."""
    if isinstance(v, Bool):
        return True
    if isinstance(v, Agent):
        return bool(v.name.strip() or (v.email or "").strip())
    if isinstance(v, Period):
        return bool((v.start or "").strip() or (v.end or "").strip())
    return bool(value_text(v).strip())


# -- entry documents --------------------------------------------------------


def entry_from_json(doc: Any, model: MaturityModel) -> CatalogueEntry:
    if not isinstance(doc, dict):
        raise MalformedDocument("entry must be a JSON object")
    entry_id = doc.get("id")
    if entry_id is None or entry_id == "":
        raise MissingId("entry has no 'id'")
    if not isinstance(entry_id, str) or not ENTRY_ID.match(entry_id):
        raise MalformedDocument(f"entry id must be a slug matching [a-z0-9][a-z0-9-]*: {entry_id!r}")

    raw_fields = doc.get("fields", {})
    if not isinstance(raw_fields, dict):
        raise MalformedDocument("'fields' must be an object")
    fields: dict[str, tuple[Value, ...]] = {}
    for key, raw in raw_fields.items():
        spec = model.properties.get(key)
        items = raw if isinstance(raw, list) else [raw]
        fields[key] = tuple(coerce_value(spec, item, key) for item in items)

    raw_resources = doc.get("resources", [])
    if not isinstance(raw_resources, list):
        raise MalformedDocument("'resources' must be an array")
    res = []
    for r in raw_resources:
        if not isinstance(r, dict) or "url" not in r:
            raise MalformedDocument(f"resource needs at least a 'url': {r!r}")
        fmt = r.get("format")
        res.append(ResourceRef(str(r.get("name", "")), str(r["url"]), fmt if fmt else None, r.get("description")))

    revision = doc.get("revision", 0)
    if isinstance(revision, bool) or not isinstance(revision, int) or revision < 0:
        raise MalformedDocument(f"'revision' must be a non-negative integer, got {revision!r}")
    modality = doc.get("modality")
    if modality is not None and modality not in MODALITIES:
        raise MalformedDocument(f"'modality' must be one of {MODALITIES}, got {modality!r}")
    org = doc.get("organization")
    return CatalogueEntry(entry_id, fields, tuple(res), org if org else None, revision, modality)


def parse_entry(text: str | bytes, model: MaturityModel) -> CatalogueEntry:
    """Parse an entry document; values are coerced to their field's range."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    return entry_from_json(doc, model)


def entry_to_json(entry: CatalogueEntry) -> dict:
    doc: dict[str, Any] = {"id": entry.id}
    if entry.organization is not None:
        doc["organization"] = entry.organization
    doc["revision"] = entry.revision
    if entry.modality is not None:
        doc["modality"] = entry.modality
    doc["fields"] = {k: [value_to_json(v) for v in vs] for k, vs in entry.fields.items()}
    if entry.resources:
        resources_out = []
        for r in entry.resources:
            item: dict[str, Any] = {"name": r.name, "url": r.url}
            if r.format is not None:
                item["format"] = r.format
            if r.description is not None:
                item["description"] = r.description
            resources_out.append(item)
        doc["resources"] = resources_out
    return doc


def serialize_entry(entry: CatalogueEntry) -> str:
    return json.dumps(entry_to_json(entry), ensure_ascii=False, indent=2) + "\n"


# -- validation -------------------------------------------------------------


def _issue(spec: PropertySpec, code: str, message: str, severity: str = "error") -> list[ValidationIssue]:
    return [ValidationIssue(spec.key, code, message, severity)]


def validate_value(spec: PropertySpec, v: Value) -> list[ValidationIssue]:
    """Check one value against ``spec.range``; an empty list means it conforms."""
    kind = spec.range.kind
    name = type(v).__name__

    if kind in (RangeKind.PLAIN_TEXT, RangeKind.LANG_TEXT):
        if isinstance(v, Text):
            return []
        return _issue(spec, "TypeMismatch", f"expected text, got {name}")

    if kind is RangeKind.MEDIA_TYPE:
        if not isinstance(v, (Text, Token)):
            return _issue(spec, "TypeMismatch", f"expected a media type token, got {name}")
        token = value_text(v)
        if known_media_type(token):
            return []
        return _issue(spec, "EnumViolation", f"{token!r} is not in the media-type snapshot", "warning")

    if kind is RangeKind.BOOLEAN:
        if isinstance(v, Bool):
            return []
        return _issue(spec, "TypeMismatch", f"expected xsd:boolean, got {name} {value_text(v)!r}")

    if kind in (RangeKind.DATE, RangeKind.DATE_TIME):
        if isinstance(v, (Date, DateTime)):
            return []
        if isinstance(v, Text):
            return _issue(spec, "MalformedDate", f"{v.text!r} is neither xsd:date nor xsd:dateTime")
        return _issue(spec, "TypeMismatch", f"expected a date, got {name}")

    if kind is RangeKind.DECIMAL:
        if isinstance(v, Decimal):
            return []
        if isinstance(v, Text):
            return _issue(spec, "MalformedDecimal", f"{v.text!r} is not an xsd:decimal")
        return _issue(spec, "TypeMismatch", f"expected xsd:decimal, got {name}")

    if kind is RangeKind.DURATION:
        if isinstance(v, Duration):
            return []
        if isinstance(v, Text):
            return _issue(spec, "MalformedDuration", f"{v.text!r} is not an xsd:duration")
        return _issue(spec, "TypeMismatch", f"expected xsd:duration, got {name}")

    if kind is RangeKind.POSITIVE_INTEGER:
        if isinstance(v, PosInt):
            return []
        if isinstance(v, Text) and _INTEGER.match(v.text.strip()) and int(v.text) < 1:
            return _issue(spec, "NonPositive", f"{v.text!r} is not >= 1")
        return _issue(spec, "TypeMismatch", f"expected xsd:positiveInteger, got {value_text(v)!r}")

    if kind in _IRI_KINDS:
        if isinstance(v, Iri):
            return []
        if isinstance(v, Text):
            return _issue(spec, "MalformedIri", f"{v.text!r} is not an absolute IRI")
        return _issue(spec, "TypeMismatch", f"expected an IRI, got {name}")

    if kind in _TEXT_OR_IRI_KINDS:
        if isinstance(v, (Text, Iri)):
            return []
        return _issue(spec, "TypeMismatch", f"expected text or IRI, got {name}")

    if kind is RangeKind.ENUMERATED:
        if isinstance(v, Token):
            if v.token.lower() in spec.range.tokens:
                return []
            allowed = ", ".join(spec.range.tokens)
            return _issue(spec, "EnumViolation", f"{v.token!r} not in {{{allowed}}}")
        return _issue(spec, "TypeMismatch", f"expected one of {spec.range.tokens}, got {name}")

    if kind is RangeKind.AGENT:
        return [] if isinstance(v, Agent) else _issue(spec, "TypeMismatch", f"expected an agent, got {name}")

    if kind is RangeKind.LOCATION:
        return [] if isinstance(v, Location) else _issue(spec, "TypeMismatch", f"expected a location, got {name}")

    if kind is RangeKind.PERIOD_OF_TIME:
        if not isinstance(v, Period):
            return _issue(spec, "TypeMismatch", f"expected a period, got {name}")
        issues = []
        keys = {}
        for label, bound in (("start", v.start), ("end", v.end)):
            if bound is None:
                continue
            keys[label] = _temporal_key(bound)
            if keys[label] is None:
                issues += _issue(spec, "MalformedDate", f"period {label} {bound!r} is not a date or dateTime")
        if keys.get("start") and keys.get("end") and keys["start"] > keys["end"]:
            issues += _issue(spec, "PeriodInverted", f"period starts {v.start} after it ends {v.end}")
        return issues

    return _issue(spec, "TypeMismatch", f"no rule for range {kind.value}")


def validate_entry(model: MaturityModel, entry: CatalogueEntry) -> list[ValidationIssue]:
    """All per-value, cardinality and unknown-field issues, ordered by field key."""
    issues: list[ValidationIssue] = []
    for key in sorted(entry.fields):
        values = entry.fields[key]
        spec = model.properties.get(key)
        if spec is None:
            issues.append(ValidationIssue(key, "UnknownField", f"{key!r} is not a property of the model"))
            continue
        if spec.max_cardinality is not None and len(values) > spec.max_cardinality:
            issues.append(
                ValidationIssue(key, "Cardinality", f"at most {spec.max_cardinality} value(s), got {len(values)}")
            )
        for v in values:
            issues.extend(validate_value(spec, v))
    for i, res in enumerate(entry.resources):
        where = f"resources[{i}]"
        if not is_absolute_iri(res.url):
            issues.append(ValidationIssue(where, "MalformedIri", f"resource url {res.url!r} is not absolute"))
        if res.format is not None and not known_media_type(res.format):
            issues.append(
                ValidationIssue(where, "EnumViolation", f"{res.format!r} is not in the media-type snapshot", "warning")
            )
    return issues
